#pragma once

#include <span>
#include <string>
#include <vector>

#include "hints/curves.hpp"
#include "hints/geometry.hpp"

namespace hints {

struct PathSegment {
    enum class Type { move, line, cubic };
    Type type = Type::move;
    Point c1;  // cubic only
    Point c2;  // cubic only
    Point to;

    friend bool operator==(const PathSegment&, const PathSegment&) = default;
};

/// Closed path: a move followed by line/cubic segments ending at the start point.
struct Path {
    std::vector<PathSegment> segments;

    Point start() const { return segments.empty() ? Point{} : segments.front().to; }
    Point end() const { return segments.empty() ? Point{} : segments.back().to; }
};

/// Closed uniform cubic B-spline with the polygon vertices as control points.
Path bspline_border(std::span<const Point> polygon);

/// Straight edges with each corner cut by a cubic whose controls sit on the
/// corner. The cut starts and ends at `smoothing` (0..0.5) of the adjacent
/// edges, so 0 keeps the sharp polygon.
Path cornered_border(std::span<const Point> polygon, double smoothing);

/// B-spline for Gosper regions, cornered path for Gilbert regions.
/// Throws GeometryError for a polygon that is not simple.
Path smooth_border(std::span<const Point> polygon, CurveKind kind, double smoothing = 0.25);

}  // namespace hints
