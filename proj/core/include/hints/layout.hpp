#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hints/partition.hpp"

namespace hints {

/// Dendrogram view of a PartitionSequence. Entries are clusters plus one leaf
/// per node (level 0); children are kept in canonical order.
class ClusterTree {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    struct Entry {
        std::string id;  // cluster id, or the node id for leaves
        std::size_t level = 0;
        std::size_t index = 0;  // cluster index on its level, node index for leaves
        std::size_t parent = npos;
        std::vector<std::size_t> children;
        std::size_t size = 0;        // number of leaves below
        std::size_t leaf_begin = 0;  // offset into leaf_order()
    };

    explicit ClusterTree(const PartitionSequence& p);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    const Entry& entry(std::size_t e) const { return entries_.at(e); }
    std::size_t root() const noexcept { return root_; }
    std::size_t node_count() const noexcept { return leaf_order_.size(); }
    /// Node indices in depth-first order; every cluster covers a contiguous range.
    const std::vector<std::size_t>& leaf_order() const noexcept { return leaf_order_; }
    std::span<const std::size_t> members(std::size_t e) const;

    /// Clusters shown when nothing is expanded: the root's children, or the
    /// root itself when the hierarchy has a single level.
    const std::vector<std::size_t>& top() const noexcept { return top_; }
    bool is_leaf(std::size_t e) const { return entries_.at(e).level == 0; }

    /// Looks up a cluster id first, then a node id.
    std::optional<std::size_t> find(const std::string& id) const;

private:
    std::vector<Entry> entries_;
    std::vector<std::size_t> leaf_order_;
    std::vector<std::size_t> top_;
    std::size_t root_ = 0;
    std::map<std::string, std::size_t> by_id_;
};

/// A frontier cluster occupying a contiguous stretch of curve slots: its
/// nodes first, then its blank share.
struct Run {
    std::size_t entry = 0;
    std::size_t begin = 0;
    std::size_t extent = 0;  // nodes + blanks
    std::vector<std::size_t> nodes;  // node indices in slot order
};

struct SlotExtent {
    std::size_t begin = 0;
    std::size_t extent = 0;
    friend bool operator==(const SlotExtent&, const SlotExtent&) = default;
};

struct LayoutState {
    std::size_t curve_length = 0;
    std::set<std::string> expanded;
    std::vector<Run> runs;
    std::vector<std::size_t> node_slot;          // by node index
    std::map<std::string, SlotExtent> extents;   // frontier and expanded clusters

    friend bool operator==(const LayoutState& a, const LayoutState& b) {
        return a.curve_length == b.curve_length && a.expanded == b.expanded && a.node_slot == b.node_slot &&
               a.extents == b.extents;
    }
};

/// Splits `total` into integer parts proportional to `weights`, handing the
/// leftover units to the largest remainders (earlier position wins ties).
std::vector<std::size_t> largest_remainder(std::size_t total, std::span<const std::size_t> weights);

/// Blank slots behind each cluster of size N_c: a largest-remainder share of
/// (L - N) * N_c / N. Throws CapacityError when L < N.
std::vector<std::size_t> assign_blanks(std::span<const std::size_t> sizes, std::size_t curve_length);

/// Frontier clusters in depth-first order for the given expansion set.
/// Throws InputError for an expanded cluster whose parent is collapsed.
std::vector<std::size_t> order_nodes(const ClusterTree& tree, const std::set<std::string>& expanded);

/// Slot assignment for an expansion set: top clusters share the whole curve,
/// and every expanded cluster hands its own extent down to its children.
LayoutState assign_slots(const ClusterTree& tree, const std::set<std::string>& expanded, std::size_t curve_length);

LayoutState expand_cluster(const LayoutState& state, const std::string& cluster, const ClusterTree& tree);
/// Collapses `cluster` together with every expanded cluster below it.
LayoutState collapse_cluster(const LayoutState& state, const std::string& cluster, const ClusterTree& tree);

/// Expands, until nothing changes, every frontier cluster that has a single
/// child or more than k * N nodes.
std::set<std::string> auto_expand(const ClusterTree& tree, std::size_t total_nodes, double k);

}  // namespace hints
