#pragma once

#include <string>

#include "hints/border.hpp"
#include "hints/view.hpp"

namespace hints {

struct SvgOptions {
    double size = 1000.0;  // viewBox edge; the unit viewport is scaled to it with y pointing up
    bool show_labels = true;
};

/// SVG path data for `path` in viewBox coordinates, six decimals per number.
std::string svg_path_data(const Path& path, double size);

/// Byte-stable SVG of both regions. Either side may be null.
std::string render_svg(const SideView* documents, const SideView* keywords, const SvgOptions& options = {});

}  // namespace hints
