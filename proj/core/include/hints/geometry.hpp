#pragma once

#include <span>
#include <vector>

namespace hints {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
};

double cross(Point o, Point a, Point b);
double distance(Point a, Point b);
Point lerp(Point a, Point b, double t);

/// Signed area, positive for counter-clockwise rings. The ring is implicitly closed.
double signed_area(std::span<const Point> ring);
/// Area centroid; falls back to the vertex mean for a degenerate ring.
Point polygon_centroid(std::span<const Point> ring);

bool segments_intersect(Point p1, Point p2, Point q1, Point q2);
/// True when no two non-adjacent edges touch and the ring has at least three vertices.
bool is_simple_polygon(std::span<const Point> ring);
/// Even-odd rule. Points on the boundary count as outside.
bool point_in_polygon(Point p, std::span<const Point> ring);
double distance_to_segment(Point p, Point a, Point b);
double distance_to_boundary(Point p, std::span<const Point> ring);
/// Strictly inside and farther than `margin` from every edge.
bool strictly_inside(Point p, std::span<const Point> ring, double margin = 0.0);

/// Farthest intersection of the ray origin + t*dir (t > 0) with the ring's edges.
/// Returns false when the ray misses.
bool ray_polygon_exit(Point origin, Point dir, std::span<const Point> ring, Point& hit);

std::vector<Point> convex_hull(std::span<const Point> points);

}  // namespace hints
