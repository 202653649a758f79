#include "hints/hull.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hints/error.hpp"

namespace hints {

namespace {

bool less_xy(Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

// Angle in (-pi, pi] turning from `heading` to `d`; negative is a right turn.
double turn(Point heading, Point d) {
    return std::atan2(heading.x * d.y - heading.y * d.x, heading.x * d.x + heading.y * d.y);
}

bool inside_or_on(Point p, std::span<const Point> ring) {
    return point_in_polygon(p, ring) || distance_to_boundary(p, ring) <= 1e-9;
}

std::vector<Point> padded_box(std::span<const Point> points, double pad) {
    double x0 = points[0].x, x1 = points[0].x, y0 = points[0].y, y1 = points[0].y;
    for (const auto& p : points) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    return {{x0 - pad, y0 - pad}, {x1 + pad, y0 - pad}, {x1 + pad, y1 + pad}, {x0 - pad, y1 + pad}};
}

}  // namespace

std::vector<Point> knn_concave_hull(std::span<const Point> input, int k) {
    std::vector<Point> pts(input.begin(), input.end());
    std::sort(pts.begin(), pts.end(), less_xy);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return {};
    if (n == 3) {
        if (std::fabs(cross(pts[0], pts[1], pts[2])) < 1e-15) return {};
        if (cross(pts[0], pts[1], pts[2]) < 0) std::swap(pts[1], pts[2]);
        return pts;
    }
    const std::size_t kk = std::min<std::size_t>(std::max(k, 3), n - 1);

    std::size_t first = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (pts[i].y < pts[first].y || (pts[i].y == pts[first].y && pts[i].x < pts[first].x)) first = i;
    }
    std::vector<bool> used(n, false);
    std::vector<std::size_t> hull{first};
    used[first] = true;
    std::size_t current = first;
    Point heading{1.0, 0.0};
    std::vector<std::size_t> candidates;
    candidates.reserve(n);

    for (std::size_t step = 1;; ++step) {
        if (step == 4) used[first] = false;  // allow closing once the polygon has some body
        candidates.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (!used[i] && i != current) candidates.push_back(i);
        }
        if (candidates.empty()) return {};
        const std::size_t take = std::min(kk, candidates.size());
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take), candidates.end(),
                          [&](std::size_t a, std::size_t b) {
                              const double da = distance(pts[a], pts[current]);
                              const double db = distance(pts[b], pts[current]);
                              return da < db || (da == db && a < b);
                          });
        candidates.resize(take);
        std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
            return turn(heading, pts[a] - pts[current]) < turn(heading, pts[b] - pts[current]);
        });

        std::size_t chosen = n;
        for (std::size_t c : candidates) {
            const bool closing = c == first;
            bool crosses = false;
            // Skip the last edge (shares `current`) and, when closing, the first edge.
            const std::size_t edges = hull.size() >= 2 ? hull.size() - 2 : 0;
            for (std::size_t j = closing ? 1 : 0; j < edges && !crosses; ++j) {
                crosses = segments_intersect(pts[current], pts[c], pts[hull[j]], pts[hull[j + 1]]);
            }
            if (!crosses) {
                chosen = c;
                break;
            }
        }
        if (chosen == n) return {};
        if (chosen == first) break;
        heading = pts[chosen] - pts[current];
        hull.push_back(chosen);
        used[chosen] = true;
        current = chosen;
        if (hull.size() > n) return {};
    }

    std::vector<Point> ring;
    ring.reserve(hull.size());
    for (std::size_t i : hull) ring.push_back(pts[i]);
    if (!is_simple_polygon(ring)) return {};
    if (signed_area(ring) < 0) std::reverse(ring.begin(), ring.end());
    for (const auto& p : pts) {
        if (!inside_or_on(p, ring)) return {};
    }
    return ring;
}

std::vector<Point> concave_hull(std::span<const Point> points, const HullOptions& options) {
    if (points.empty()) throw InputError("hull of an empty point set");
    if (!(options.padding > 0.0)) throw InputError("hull padding must be positive");
    std::vector<Point> distinct(points.begin(), points.end());
    std::sort(distinct.begin(), distinct.end(), less_xy);
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() <= 2) return padded_box(distinct, options.padding);

    std::vector<Point> augmented;
    augmented.reserve(distinct.size() * 9);
    const double r = options.padding;
    for (const auto& p : distinct) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) augmented.push_back({p.x + dx * r, p.y + dy * r});
        }
    }
    const double margin = r * 1e-3;
    const int k_limit = std::min<int>(options.max_k, static_cast<int>(augmented.size()) - 1);
    for (int k = 3; k <= k_limit; ++k) {
        auto ring = knn_concave_hull(augmented, k);
        if (ring.empty()) continue;
        bool contains = true;
        for (const auto& p : distinct) {
            if (!strictly_inside(p, ring, margin)) {
                contains = false;
                break;
            }
        }
        if (contains) return ring;
    }
    auto ring = convex_hull(augmented);
    if (signed_area(ring) < 0) std::reverse(ring.begin(), ring.end());
    return ring;
}

}  // namespace hints
