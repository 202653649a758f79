#include "hints/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hints {

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point lerp(Point a, Point b, double t) { return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t}; }

double signed_area(std::span<const Point> ring) {
    double twice = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point& a = ring[i];
        const Point& b = ring[(i + 1) % ring.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return twice / 2.0;
}

Point polygon_centroid(std::span<const Point> ring) {
    if (ring.empty()) return {};
    const double area = signed_area(ring);
    if (std::fabs(area) < 1e-15) {
        Point sum{};
        for (const auto& p : ring) sum = sum + p;
        return sum * (1.0 / static_cast<double>(ring.size()));
    }
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point& a = ring[i];
        const Point& b = ring[(i + 1) % ring.size()];
        const double f = a.x * b.y - b.x * a.y;
        cx += (a.x + b.x) * f;
        cy += (a.y + b.y) * f;
    }
    return {cx / (6.0 * area), cy / (6.0 * area)};
}

namespace {

int orientation(Point a, Point b, Point c) {
    const double v = cross(a, b, c);
    const double scale = std::max({std::fabs(b.x - a.x), std::fabs(b.y - a.y), std::fabs(c.x - a.x),
                                   std::fabs(c.y - a.y), 1e-300});
    if (std::fabs(v) <= 1e-12 * scale * scale) return 0;
    return v > 0 ? 1 : -1;
}

bool on_segment(Point a, Point b, Point p) {
    return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
           std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}

}  // namespace

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

bool is_simple_polygon(std::span<const Point> ring) {
    const std::size_t n = ring.size();
    if (n < 3) return false;
    if (std::fabs(signed_area(ring)) < 1e-15) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (ring[i] == ring[(i + 1) % n]) return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if (adjacent) {
                // Adjacent edges may only share their common vertex; check for folding back.
                Point shared = j == i + 1 ? ring[j] : ring[i];
                Point a = j == i + 1 ? ring[i] : ring[(i + 1) % n];
                Point b = j == i + 1 ? ring[(j + 1) % n] : ring[n - 1];
                if (orientation(a, shared, b) == 0 &&
                    (b.x - shared.x) * (a.x - shared.x) + (b.y - shared.y) * (a.y - shared.y) > 0) {
                    return false;
                }
                continue;
            }
            if (segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n])) return false;
        }
    }
    return true;
}

double distance_to_segment(Point p, Point a, Point b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    return distance(p, {a.x + t * dx, a.y + t * dy});
}

double distance_to_boundary(Point p, std::span<const Point> ring) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ring.size(); ++i) {
        best = std::min(best, distance_to_segment(p, ring[i], ring[(i + 1) % ring.size()]));
    }
    return best;
}

bool point_in_polygon(Point p, std::span<const Point> ring) {
    if (ring.size() < 3) return false;
    if (distance_to_boundary(p, ring) <= 1e-12) return false;
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const Point& a = ring[i];
        const Point& b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

bool strictly_inside(Point p, std::span<const Point> ring, double margin) {
    return point_in_polygon(p, ring) && distance_to_boundary(p, ring) > margin;
}

bool ray_polygon_exit(Point origin, Point dir, std::span<const Point> ring, Point& hit) {
    double best = -1.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point a = ring[i];
        const Point b = ring[(i + 1) % ring.size()];
        const Point e = b - a;
        const double denom = dir.x * e.y - dir.y * e.x;
        if (std::fabs(denom) < 1e-300) continue;
        const Point ao = a - origin;
        const double t = (ao.x * e.y - ao.y * e.x) / denom;
        const double s = (ao.x * dir.y - ao.y * dir.x) / denom;
        if (t > 0.0 && s >= 0.0 && s <= 1.0 && t > best) {
            best = t;
            hit = lerp(a, b, s);
        }
    }
    return best > 0.0;
}

std::vector<Point> convex_hull(std::span<const Point> points) {
    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace hints
