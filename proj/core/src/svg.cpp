#include "hints/svg.hpp"

#include <cstdio>

namespace hints {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string xy(Point p, double size) { return num(p.x * size) + "," + num((1.0 - p.y) * size); }

void render_side(std::string& out, const SideView& view, const char* name, const SvgOptions& options) {
    out += "<g class=\"" + std::string(name) + "\">\n";
    for (const auto& shape : view.clusters) {
        out += "<path class=\"border";
        out += shape.expanded ? " expanded" : "";
        out += "\" data-cluster=\"" + escape(shape.id) + "\" d=\"" + svg_path_data(shape.border, options.size) +
               "\"/>\n";
    }
    for (std::size_t v = 0; v < view.nodes.size(); ++v) {
        const Point p = view.positions[v];
        out += "<circle data-node=\"" + escape(view.nodes[v]) + "\" cx=\"" + num(p.x * options.size) + "\" cy=\"" +
               num((1.0 - p.y) * options.size) + "\" r=\"" + num(view.node_radius * options.size) + "\"/>\n";
    }
    if (options.show_labels) {
        for (const auto& shape : view.clusters) {
            if (shape.expanded) continue;
            out += "<text data-cluster=\"" + escape(shape.id) + "\" x=\"" + num(shape.anchor.x * options.size) +
                   "\" y=\"" + num((1.0 - shape.anchor.y) * options.size) + "\">" + escape(shape.label) +
                   "</text>\n";
        }
    }
    out += "</g>\n";
}

}  // namespace

std::string svg_path_data(const Path& path, double size) {
    std::string d;
    for (const auto& seg : path.segments) {
        if (!d.empty()) d += ' ';
        switch (seg.type) {
            case PathSegment::Type::move: d += "M" + xy(seg.to, size); break;
            case PathSegment::Type::line: d += "L" + xy(seg.to, size); break;
            case PathSegment::Type::cubic:
                d += "C" + xy(seg.c1, size) + " " + xy(seg.c2, size) + " " + xy(seg.to, size);
                break;
        }
    }
    if (!d.empty()) d += " Z";
    return d;
}

std::string render_svg(const SideView* documents, const SideView* keywords, const SvgOptions& options) {
    std::string out;
    const std::string size = num(options.size);
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + size + " " + size + "\">\n";
    out += "<style>.border{fill:none;stroke:#555;stroke-width:1}.border.expanded{stroke-dasharray:4 3}"
           "circle{fill:#4a78b5}.keywords circle{fill:#c9822b}text{font:10px sans-serif;text-anchor:middle}"
           "</style>\n";
    if (documents != nullptr) render_side(out, *documents, "documents", options);
    if (keywords != nullptr) render_side(out, *keywords, "keywords", options);
    out += "</svg>\n";
    return out;
}

}  // namespace hints
