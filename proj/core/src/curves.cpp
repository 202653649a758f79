#include "hints/curves.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string_view>

#include "hints/error.hpp"

namespace hints {

namespace {

// Gosper L-system over Eisenstein integer coordinates so that every point is
// exact until the final projection.
struct Turtle {
    long a = 0;
    long b = 0;
    int dir = 0;
    std::vector<Point> points;

    static constexpr std::array<std::array<long, 2>, 6> steps{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

    void emit() {
        const double x = static_cast<double>(a) + static_cast<double>(b) / 2.0;
        const double y = static_cast<double>(b) * std::sqrt(3.0) / 2.0;
        points.push_back({x, y});
    }
    void forward() {
        a += steps[dir][0];
        b += steps[dir][1];
        emit();
    }
};

constexpr std::string_view rule_a = "A-B--B+A++AA+B-";
constexpr std::string_view rule_b = "+A-BB--B-A++A+B";

void expand(char symbol, int depth, Turtle& t) {
    if (depth == 0) {
        t.forward();
        return;
    }
    for (char c : symbol == 'A' ? rule_a : rule_b) {
        switch (c) {
            case '+': t.dir = (t.dir + 1) % 6; break;
            case '-': t.dir = (t.dir + 5) % 6; break;
            default: expand(c, depth - 1, t); break;
        }
    }
}

int sgn(int v) { return (v > 0) - (v < 0); }

// Červený's generalized Hilbert recursion. Walks from (x,y) along the major
// axis (ax,ay), filling the rectangle spanned with (bx,by).
void generate(int x, int y, int ax, int ay, int bx, int by, std::vector<Point>& out) {
    const int w = std::abs(ax + ay);
    const int h = std::abs(bx + by);
    const int dax = sgn(ax), day = sgn(ay);
    const int dbx = sgn(bx), dby = sgn(by);

    if (h == 1) {
        for (int i = 0; i < w; ++i, x += dax, y += day) out.push_back({double(x), double(y)});
        return;
    }
    if (w == 1) {
        for (int i = 0; i < h; ++i, x += dbx, y += dby) out.push_back({double(x), double(y)});
        return;
    }

    int ax2 = ax / 2, ay2 = ay / 2;
    int bx2 = bx / 2, by2 = by / 2;
    const int w2 = std::abs(ax2 + ay2);
    const int h2 = std::abs(bx2 + by2);

    if (2 * w > 3 * h) {
        if ((w2 % 2) && w > 2) {
            ax2 += dax;
            ay2 += day;
        }
        generate(x, y, ax2, ay2, bx, by, out);
        generate(x + ax2, y + ay2, ax - ax2, ay - ay2, bx, by, out);
    } else {
        if ((h2 % 2) && h > 2) {
            bx2 += dbx;
            by2 += dby;
        }
        generate(x, y, bx2, by2, ax2, ay2, out);
        generate(x + bx2, y + by2, ax, ay, bx - bx2, by - by2, out);
        generate(x + (ax - dax) + (bx2 - dbx), y + (ay - day) + (by2 - dby), -bx2, -by2, -(ax - ax2),
                 -(ay - ay2), out);
    }
}

// (0,0) -> (w-1,0) exists iff the grid is a single cell or w >= 2 and not
// (w odd, h even): a checkerboard colouring argument.
bool same_side_feasible(int w, int h) { return (w == 1 && h == 1) || (w >= 2 && (w % 2 == 0 || h % 2 == 1)); }

bool far_side_feasible(int w, int h) { return w == 1 || (w * h) % 2 == 1 || (w + h) % 2 == 1; }

std::vector<Point> same_side_path(int w, int h) {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(w) * h);
    generate(0, 0, w, 0, 0, h, out);
    return out;
}

std::vector<Point> far_side_path(int w, int h) {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(w) * h);
    if (w == 1) {
        for (int v = 0; v < h; ++v) out.push_back({0.0, double(v)});
    } else if (w == 2) {
        for (int v = 0; v < h; ++v) {
            const double first = v % 2 == 0 ? 0.0 : 1.0;
            out.push_back({first, double(v)});
            out.push_back({1.0 - first, double(v)});
        }
    } else {
        // Climb column 0, then cover the rest with a same-side path flipped vertically.
        for (int v = 0; v < h; ++v) out.push_back({0.0, double(v)});
        for (const Point& p : same_side_path(w - 1, h)) out.push_back({p.x + 1.0, double(h - 1) - p.y});
    }
    return out;
}

}  // namespace

Curve gosper_curve(int order) {
    if (order < 1 || order > max_gosper_order) {
        throw InputError("gosper order must lie in [1, " + std::to_string(max_gosper_order) + "]",
                         {{"order", order}});
    }
    Turtle t;
    std::size_t segments = 1;
    for (int i = 0; i < order; ++i) segments *= 7;
    t.points.reserve(segments + 1);
    t.emit();
    expand('A', order, t);
    return Curve{CurveKind::gosper, std::move(t.points), {0}};
}

std::vector<Point> gilbert_path(int width, int height, bool end_on_far_side) {
    if (width < 1 || height < 1) throw InputError("gilbert grid needs positive dimensions");
    if (height == 1 || !end_on_far_side) {
        if (!same_side_feasible(width, height)) return {};
        return same_side_path(width, height);
    }
    if (!far_side_feasible(width, height)) return {};
    return far_side_path(width, height);
}

Curve gilbert_curve(int width, int height) {
    if (width < 1 || height < 1) {
        throw InputError("gilbert grid needs positive dimensions", {{"width", width}, {"height", height}});
    }
    // Run along the longer side; transpose back afterwards.
    const bool transpose = height > width;
    const int major = transpose ? height : width;
    const int minor = transpose ? width : height;
    std::vector<Point> path = same_side_feasible(major, minor) ? same_side_path(major, minor)
                                                               : far_side_path(major, minor);
    if (transpose) {
        for (auto& p : path) std::swap(p.x, p.y);
    }
    return Curve{CurveKind::gilbert, std::move(path), {0}};
}

namespace {

enum Side { bottom, right, top, left };
enum Corner { bl, br, tr, tl };

// Corner where each side's traversal starts and ends.
constexpr std::array<std::array<Corner, 2>, 4> side_corners{{{bl, br}, {br, tr}, {tr, tl}, {tl, bl}}};
// Sides meeting at each corner: the one arriving there and the one leaving.
constexpr std::array<std::array<Side, 2>, 4> corner_sides{{{left, bottom}, {bottom, right}, {right, top}, {top, left}}};

struct SidePlan {
    int lo = 0;  // first coordinate along the side, in traversal order
    int length = 0;
    int v_start = 0;  // depth into the ring, 0 on the outer edge
    int v_end = 0;
};

// Strip of `length` x `t` traversed from depth vs to depth ve.
std::vector<Point> strip_path(int length, int t, int vs, int ve) {
    std::vector<Point> p = gilbert_path(length, t, !(vs == ve || t == 1));
    if (vs != 0) {
        for (auto& q : p) q.y = double(t - 1) - q.y;
    }
    return p;
}

std::optional<Curve> try_ring(int W, int H, int t, const std::array<Side, 4>& owner) {
    std::array<SidePlan, 4> plan{};
    plan[bottom].lo = owner[bl] == bottom ? 0 : t;
    plan[bottom].length = (owner[br] == bottom ? W - 1 : W - t - 1) - plan[bottom].lo + 1;
    plan[right].lo = owner[br] == right ? 0 : t;
    plan[right].length = (owner[tr] == right ? H - 1 : H - t - 1) - plan[right].lo + 1;
    plan[top].lo = owner[tr] == top ? W - 1 : W - t - 1;
    plan[top].length = plan[top].lo - (owner[tl] == top ? 0 : t) + 1;
    plan[left].lo = owner[tl] == left ? H - 1 : H - t - 1;
    plan[left].length = plan[left].lo - (owner[bl] == left ? 0 : t) + 1;

    for (int s = 0; s < 4; ++s) {
        const Corner in = side_corners[s][0];
        const Corner out = side_corners[s][1];
        std::vector<int> starts = s == 0 ? std::vector<int>{t - 1, 0}
                                         : std::vector<int>{owner[in] == s ? t - 1 : 0};
        std::vector<int> ends = s == 3 ? std::vector<int>{0, t - 1}
                                       : std::vector<int>{owner[out] == s ? t - 1 : 0};
        bool found = false;
        for (int a : starts) {
            for (int b : ends) {
                const bool same = a == b || t == 1;
                const int len = plan[s].length;
                if (same ? same_side_feasible(len, t) : far_side_feasible(len, t)) {
                    plan[s].v_start = a;
                    plan[s].v_end = b;
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        if (!found) return std::nullopt;
    }

    Curve curve{CurveKind::gilbert_ring, {}, {}};
    curve.points.reserve(static_cast<std::size_t>(W) * H - static_cast<std::size_t>(W - 2 * t) * (H - 2 * t));
    for (int s = 0; s < 4; ++s) {
        curve.piece_starts.push_back(curve.points.size());
        const SidePlan& sp = plan[s];
        for (const Point& q : strip_path(sp.length, t, sp.v_start, sp.v_end)) {
            const double u = q.x;
            const double v = q.y;
            switch (s) {
                case bottom: curve.points.push_back({sp.lo + u, v}); break;
                case right: curve.points.push_back({W - 1 - v, sp.lo + u}); break;
                case top: curve.points.push_back({sp.lo - u, H - 1 - v}); break;
                default: curve.points.push_back({v, sp.lo - u}); break;
            }
        }
    }
    return curve;
}

}  // namespace

Curve build_ring(int width, int height, int thickness) {
    if (width < 3 || height < 3 || thickness < 1 || 2 * thickness >= std::min(width, height)) {
        throw InputError("degenerate ring", {{"width", width}, {"height", height}, {"thickness", thickness}});
    }
    // Each corner square belongs to one of its two sides. Try the pinwheel
    // assignment first, then the rest, until every side has a feasible path.
    for (int mask = 0; mask < 16; ++mask) {
        std::array<Side, 4> owner{};
        for (int c = 0; c < 4; ++c) {
            const bool leaving = ((mask >> (3 - c)) & 1) == 0;
            owner[c] = leaving ? corner_sides[c][1] : corner_sides[c][0];
        }
        if (auto curve = try_ring(width, height, thickness, owner)) return std::move(*curve);
    }
    throw InputError("no gilbert decomposition for ring",
                     {{"width", width}, {"height", height}, {"thickness", thickness}});
}

}  // namespace hints
