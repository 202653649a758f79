#include "hints/border.hpp"

#include <algorithm>

#include "hints/error.hpp"

namespace hints {

Path bspline_border(std::span<const Point> v) {
    const std::size_t n = v.size();
    Path path;
    if (n == 0) return path;
    auto at = [&](std::size_t i) { return v[i % n]; };
    auto knot = [&](std::size_t i) { return (at(i + n - 1) + at(i) * 4.0 + at(i + 1)) * (1.0 / 6.0); };
    path.segments.push_back({PathSegment::Type::move, {}, {}, knot(0)});
    for (std::size_t i = 0; i < n; ++i) {
        const Point p1 = at(i);
        const Point p2 = at(i + 1);
        PathSegment seg{PathSegment::Type::cubic, (p1 * 2.0 + p2) * (1.0 / 3.0), (p1 + p2 * 2.0) * (1.0 / 3.0),
                        knot(i + 1)};
        if (i + 1 == n) seg.to = path.segments.front().to;  // exact closure
        path.segments.push_back(seg);
    }
    return path;
}

Path cornered_border(std::span<const Point> v, double smoothing) {
    const std::size_t n = v.size();
    Path path;
    if (n == 0) return path;
    const double s = std::clamp(smoothing, 0.0, 0.5);
    auto at = [&](std::size_t i) { return v[i % n]; };
    auto entry = [&](std::size_t i) { return lerp(at(i), at(i + n - 1), s); };
    auto exit = [&](std::size_t i) { return lerp(at(i), at(i + 1), s); };

    path.segments.push_back({PathSegment::Type::move, {}, {}, exit(0)});
    for (std::size_t i = 1; i <= n; ++i) {
        path.segments.push_back({PathSegment::Type::line, {}, {}, entry(i)});
        path.segments.push_back({PathSegment::Type::cubic, at(i), at(i), exit(i)});
    }
    path.segments.back().to = path.segments.front().to;
    return path;
}

Path smooth_border(std::span<const Point> polygon, CurveKind kind, double smoothing) {
    if (!is_simple_polygon(polygon)) throw GeometryError("border needs a simple polygon");
    if (kind == CurveKind::gosper) return bspline_border(polygon);
    return cornered_border(polygon, smoothing);
}

}  // namespace hints
