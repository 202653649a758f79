#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hints/border.hpp"
#include "hints/curves.hpp"
#include "hints/geometry.hpp"
#include "hints/layout.hpp"
#include "hints/partition.hpp"

namespace hints {

struct LayoutConfig {
    double headroom = 1.0;              // spare curve capacity relative to the node count
    double ring_thickness_ratio = 0.2;  // ring thickness as a share of the ring width
    double center_gap = 0.02;           // space between ring and center region, unit viewport
    double auto_expand_k = 0.3;
    double node_radius_factor = 0.35;   // share of the closest slot spacing
    double border_smoothing = 0.25;
    int hull_max_k = 24;
};

/// Smallest Gosper order with at least n * (1 + headroom) points.
int gosper_order_for(std::size_t n, double headroom);

struct RingSize {
    int width = 0;
    int thickness = 0;
};
/// Smallest square ring whose cell count reaches n * (1 + headroom).
RingSize ring_size_for(std::size_t n, double headroom, double thickness_ratio);

struct ClusterShape {
    std::string id;
    std::string label;
    bool expanded = false;
    std::vector<std::size_t> members;  // node indices
    std::vector<Point> polygon;
    Path border;
    Point centroid;
    Point anchor;
};

struct SideView {
    CurveKind kind = CurveKind::gosper;
    std::vector<std::string> nodes;
    std::vector<Point> positions;  // by node index, unit viewport
    double node_radius = 0.0;
    LayoutState state;
    std::vector<ClusterShape> clusters;  // frontier runs in order, then expanded clusters

    const ClusterShape* find_cluster(const std::string& id) const;
};

/// Label anchor of a sub-cluster under an expanded parent: the far crossing
/// of the ray from the parent centroid through the sub-cluster centroid with
/// the parent outline. Degenerate rays fall back to `fallback`.
Point label_anchor(Point parent_centroid, Point sub_centroid, std::span<const Point> parent_polygon,
                   Point fallback);

/// Anchors for every shape of a view: radial placement for children of an
/// expanded non-top cluster, polygon centroid otherwise.
void place_labels(const ClusterTree& tree, SideView& view);

/// Owns the hierarchy and curve of one side and turns expansion sets into views.
class SideLayout {
public:
    /// `inner` bounds the Gosper curve when a ring surrounds it ([lo, hi] on both axes).
    SideLayout(PartitionSequence partitions, CurveKind kind, std::vector<std::string> node_titles,
               const LayoutConfig& config, std::pair<double, double> inner = {0.0, 1.0});

    const PartitionSequence& partitions() const noexcept { return partitions_; }
    const ClusterTree& tree() const noexcept { return tree_; }
    const Curve& grid_curve() const noexcept { return curve_; }
    const std::vector<Point>& slot_positions() const noexcept { return slots_; }
    std::size_t curve_length() const noexcept { return slots_.size(); }
    double node_radius() const noexcept { return node_radius_; }
    RingSize ring() const noexcept { return ring_; }
    CurveKind kind() const noexcept { return kind_; }

    std::set<std::string> initial_expansion() const;
    SideView view(const std::set<std::string>& expanded) const;

private:
    PartitionSequence partitions_;
    CurveKind kind_;
    std::vector<std::string> titles_;
    LayoutConfig config_;
    ClusterTree tree_;
    Curve curve_;
    std::vector<Point> slots_;
    double node_radius_ = 0.0;
    RingSize ring_{};
};

/// Inner square left free by a ring of the given size, shrunk by `gap`.
std::pair<double, double> ring_interior(RingSize ring, double gap);

}  // namespace hints
