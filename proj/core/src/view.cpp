#include "hints/view.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hints/error.hpp"
#include "hints/hull.hpp"

namespace hints {

int gosper_order_for(std::size_t n, double headroom) {
    const double needed = static_cast<double>(n) * (1.0 + headroom);
    std::size_t points = 8;
    for (int order = 1; order <= max_gosper_order; ++order, points = (points - 1) * 7 + 1) {
        if (static_cast<double>(points) >= needed) return order;
    }
    throw CapacityError("too many nodes for the largest gosper curve", {{"nodes", n}});
}

RingSize ring_size_for(std::size_t n, double headroom, double thickness_ratio) {
    const double needed = static_cast<double>(n) * (1.0 + headroom);
    for (int w = 3; w <= 4096; ++w) {
        const int t = std::max(1, static_cast<int>(std::floor(w * thickness_ratio)));
        if (2 * t >= w) continue;
        const double cells = double(w) * w - double(w - 2 * t) * (w - 2 * t);
        if (cells >= needed) return {w, t};
    }
    throw CapacityError("too many nodes for the keyword ring", {{"nodes", n}});
}

std::pair<double, double> ring_interior(RingSize ring, double gap) {
    if (ring.width == 0) return {gap, 1.0 - gap};
    const double lo = static_cast<double>(ring.thickness) / ring.width + gap;
    return {lo, 1.0 - lo};
}

const ClusterShape* SideView::find_cluster(const std::string& id) const {
    for (const auto& c : clusters) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

Point label_anchor(Point parent_centroid, Point sub_centroid, std::span<const Point> parent_polygon,
                   Point fallback) {
    const Point dir = sub_centroid - parent_centroid;
    if (std::hypot(dir.x, dir.y) < 1e-12) return fallback;
    Point hit;
    if (!ray_polygon_exit(parent_centroid, dir, parent_polygon, hit)) return fallback;
    return hit;
}

void place_labels(const ClusterTree& tree, SideView& view) {
    for (auto& shape : view.clusters) {
        shape.anchor = shape.centroid;
        const auto e = tree.find(shape.id);
        if (!e) continue;
        const std::size_t parent = tree.entry(*e).parent;
        if (parent == ClusterTree::npos) continue;
        const std::string& parent_id = tree.entry(parent).id;
        if (!view.state.expanded.contains(parent_id)) continue;
        const ClusterShape* p = view.find_cluster(parent_id);
        if (p == nullptr) continue;
        shape.anchor = label_anchor(p->centroid, shape.centroid, p->polygon, shape.centroid);
    }
}

SideLayout::SideLayout(PartitionSequence partitions, CurveKind kind, std::vector<std::string> node_titles,
                       const LayoutConfig& config, std::pair<double, double> inner)
    : partitions_(std::move(partitions)),
      kind_(kind),
      titles_(std::move(node_titles)),
      config_(config),
      tree_(partitions_) {
    const std::size_t n = partitions_.node_count();
    if (titles_.size() != n) throw InputError("one title per node is required");
    if (kind_ == CurveKind::gosper) {
        curve_ = gosper_curve(gosper_order_for(n, config_.headroom));
        double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
        double x1 = -x0, y1 = -x0;
        for (const auto& p : curve_.points) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
        const double side = inner.second - inner.first;
        const double scale = side / std::max(x1 - x0, y1 - y0);
        const double ox = inner.first + (side - (x1 - x0) * scale) / 2.0;
        const double oy = inner.first + (side - (y1 - y0) * scale) / 2.0;
        slots_.reserve(curve_.points.size());
        for (const auto& p : curve_.points) slots_.push_back({ox + (p.x - x0) * scale, oy + (p.y - y0) * scale});
        node_radius_ = config_.node_radius_factor * scale;  // segments have unit length before scaling
    } else {
        ring_ = ring_size_for(n, config_.headroom, config_.ring_thickness_ratio);
        curve_ = build_ring(ring_.width, ring_.width, ring_.thickness);
        const double cell = 1.0 / ring_.width;
        slots_.reserve(curve_.points.size());
        for (const auto& p : curve_.points) slots_.push_back({(p.x + 0.5) * cell, (p.y + 0.5) * cell});
        node_radius_ = config_.node_radius_factor * cell;
    }
}

std::set<std::string> SideLayout::initial_expansion() const {
    return auto_expand(tree_, partitions_.node_count(), config_.auto_expand_k);
}

SideView SideLayout::view(const std::set<std::string>& expanded) const {
    SideView out;
    out.kind = kind_;
    out.nodes = partitions_.nodes();
    out.node_radius = node_radius_;
    out.state = assign_slots(tree_, expanded, slots_.size());
    out.positions.reserve(out.nodes.size());
    for (std::size_t slot : out.state.node_slot) out.positions.push_back(slots_[slot]);

    HullOptions hull;
    hull.padding = node_radius_;
    hull.max_k = config_.hull_max_k;
    auto make_shape = [&](std::size_t e, bool is_expanded) {
        const auto& entry = tree_.entry(e);
        ClusterShape shape;
        shape.id = entry.id;
        shape.expanded = is_expanded;
        shape.label = entry.level == 0 ? titles_[entry.index] : partitions_.label(entry.id);
        auto members = tree_.members(e);
        shape.members.assign(members.begin(), members.end());
        std::vector<Point> pts;
        pts.reserve(shape.members.size());
        for (std::size_t v : shape.members) pts.push_back(out.positions[v]);
        shape.polygon = concave_hull(pts, hull);
        shape.border = smooth_border(shape.polygon, kind_, config_.border_smoothing);
        shape.centroid = polygon_centroid(shape.polygon);
        return shape;
    };
    for (const auto& run : out.state.runs) out.clusters.push_back(make_shape(run.entry, false));
    for (const auto& id : out.state.expanded) out.clusters.push_back(make_shape(*tree_.find(id), true));
    place_labels(tree_, out);
    return out;
}

}  // namespace hints
