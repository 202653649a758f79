#pragma once

#include <cstddef>
#include <vector>

#include "hints/geometry.hpp"

namespace hints {

enum class CurveKind { gosper, gilbert, gilbert_ring };

/// Ordered curve positions. Gilbert curves live on the integer grid (cell
/// coordinates); Gosper points have unit segment length.
struct Curve {
    CurveKind kind = CurveKind::gosper;
    std::vector<Point> points;
    /// Index of the first point of each concatenated piece (one entry for a
    /// single curve, four for a ring).
    std::vector<std::size_t> piece_starts;

    std::size_t length() const noexcept { return points.size(); }
};

inline constexpr int max_gosper_order = 6;

/// Flowsnake of the given order: 7^order unit segments.
Curve gosper_curve(int order);

/// Visits every cell of a width x height grid once with 4-adjacent steps,
/// starting at (0,0) and ending on the boundary.
Curve gilbert_curve(int width, int height);

/// Gilbert path that starts at (0,0) and ends at (width-1, 0) (same side) or
/// (width-1, height-1). Returns an empty vector when the grid parity rules the
/// requested endpoint out.
std::vector<Point> gilbert_path(int width, int height, bool end_on_far_side);

/// Cells of a rectangular ring of outer size width x height and the given
/// thickness, traversed counter-clockwise by four Gilbert pieces: bottom,
/// right, top, left. Starts in the lower-left corner region.
Curve build_ring(int width, int height, int thickness);

}  // namespace hints
