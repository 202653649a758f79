#include "hints/layout.hpp"

#include <algorithm>
#include <functional>

#include <spdlog/spdlog.h>

#include "hints/error.hpp"

namespace hints {

ClusterTree::ClusterTree(const PartitionSequence& p) {
    const std::size_t levels = p.level_count();
    const std::size_t n = p.node_count();
    if (levels == 0) throw InputError("partition sequence is empty");

    // entry_of[l][i] for clusters, l is 1-based; leaves get their own table.
    std::vector<std::vector<std::size_t>> entry_of(levels + 1);
    for (std::size_t l = levels; l >= 1; --l) {
        entry_of[l].resize(p.cluster_count(l));
        for (std::size_t i = 0; i < p.cluster_count(l); ++i) {
            entry_of[l][i] = entries_.size();
            Entry e;
            e.id = PartitionSequence::cluster_id(l, i);
            e.level = l;
            e.index = i;
            entries_.push_back(std::move(e));
        }
    }
    entry_of[0].resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        entry_of[0][v] = entries_.size();
        Entry e;
        e.id = p.nodes()[v];
        e.level = 0;
        e.index = v;
        entries_.push_back(std::move(e));
    }

    // Link children in ascending index order, which is the canonical order.
    for (std::size_t l = 1; l <= levels; ++l) {
        const auto& assign = p.level(l);
        std::vector<std::size_t> parent_of_child;
        if (l == 1) {
            parent_of_child = assign;
        } else {
            parent_of_child.assign(p.cluster_count(l - 1), 0);
            for (std::size_t v = 0; v < n; ++v) parent_of_child[p.level(l - 1)[v]] = assign[v];
        }
        for (std::size_t c = 0; c < parent_of_child.size(); ++c) {
            const std::size_t child = entry_of[l - 1][c];
            const std::size_t parent = entry_of[l][parent_of_child[c]];
            entries_[child].parent = parent;
            entries_[parent].children.push_back(child);
        }
    }

    root_ = entry_of[levels][0];
    leaf_order_.reserve(n);
    std::function<void(std::size_t)> walk = [&](std::size_t e) {
        Entry& entry = entries_[e];
        entry.leaf_begin = leaf_order_.size();
        if (entry.level == 0) leaf_order_.push_back(entry.index);
        for (std::size_t c : entry.children) walk(c);
        entries_[e].size = leaf_order_.size() - entries_[e].leaf_begin;
    };
    walk(root_);

    if (levels >= 2) {
        top_ = entries_[root_].children;
    } else {
        top_ = {root_};
    }
    for (std::size_t e = 0; e < entries_.size(); ++e) {
        if (entries_[e].level > 0) by_id_.emplace(entries_[e].id, e);
    }
    for (std::size_t e = 0; e < entries_.size(); ++e) {
        if (entries_[e].level == 0) by_id_.emplace(entries_[e].id, e);  // cluster ids win on clashes
    }
}

std::span<const std::size_t> ClusterTree::members(std::size_t e) const {
    const Entry& entry = entries_.at(e);
    return std::span<const std::size_t>(leaf_order_).subspan(entry.leaf_begin, entry.size);
}

std::optional<std::size_t> ClusterTree::find(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> largest_remainder(std::size_t total, std::span<const std::size_t> weights) {
    std::vector<std::size_t> parts(weights.size(), 0);
    std::size_t weight_sum = 0;
    for (std::size_t w : weights) weight_sum += w;
    if (weight_sum == 0 || total == 0) return parts;

    std::vector<std::size_t> remainder(weights.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const unsigned __int128 scaled = static_cast<unsigned __int128>(total) * weights[i];
        parts[i] = static_cast<std::size_t>(scaled / weight_sum);
        remainder[i] = static_cast<std::size_t>(scaled % weight_sum);
        assigned += parts[i];
    }
    std::vector<std::size_t> order(weights.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++parts[order[i]];
    return parts;
}

std::vector<std::size_t> assign_blanks(std::span<const std::size_t> sizes, std::size_t curve_length) {
    std::size_t n = 0;
    for (std::size_t s : sizes) n += s;
    if (curve_length < n) {
        throw CapacityError("curve has fewer slots than nodes; use a higher curve order",
                            {{"slots", curve_length}, {"nodes", n}});
    }
    return largest_remainder(curve_length - n, sizes);
}

namespace {

std::vector<std::size_t> checked_expansion(const ClusterTree& tree, const std::set<std::string>& expanded) {
    std::vector<bool> flag(tree.entries().size(), false);
    for (const auto& id : expanded) {
        auto e = tree.find(id);
        if (!e || tree.is_leaf(*e)) throw InputError("unknown or leaf cluster in expansion set", {{"cluster", id}});
        flag[*e] = true;
    }
    for (const auto& id : expanded) {
        const std::size_t e = *tree.find(id);
        const bool top = std::find(tree.top().begin(), tree.top().end(), e) != tree.top().end();
        const std::size_t parent = tree.entry(e).parent;
        if (!top && (parent == ClusterTree::npos || !flag[parent])) {
            throw InputError("expanded cluster sits below a collapsed one", {{"cluster", id}});
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < flag.size(); ++e) {
        if (flag[e]) out.push_back(e);
    }
    return out;
}

}  // namespace

std::vector<std::size_t> order_nodes(const ClusterTree& tree, const std::set<std::string>& expanded) {
    std::vector<bool> flag(tree.entries().size(), false);
    for (std::size_t e : checked_expansion(tree, expanded)) flag[e] = true;
    std::vector<std::size_t> frontier;
    std::function<void(std::size_t)> walk = [&](std::size_t e) {
        if (!flag[e]) {
            frontier.push_back(e);
            return;
        }
        for (std::size_t c : tree.entry(e).children) walk(c);
    };
    for (std::size_t e : tree.top()) walk(e);
    return frontier;
}

LayoutState assign_slots(const ClusterTree& tree, const std::set<std::string>& expanded, std::size_t curve_length) {
    std::vector<bool> flag(tree.entries().size(), false);
    for (std::size_t e : checked_expansion(tree, expanded)) flag[e] = true;

    LayoutState state;
    state.curve_length = curve_length;
    state.expanded = expanded;
    state.node_slot.assign(tree.node_count(), 0);

    std::function<void(std::size_t, std::size_t, std::size_t)> place = [&](std::size_t e, std::size_t begin,
                                                                           std::size_t extent) {
        const auto& entry = tree.entry(e);
        state.extents[entry.id] = {begin, extent};
        if (!flag[e]) {
            Run run{e, begin, extent, {}};
            auto members = tree.members(e);
            run.nodes.assign(members.begin(), members.end());
            for (std::size_t i = 0; i < run.nodes.size(); ++i) state.node_slot[run.nodes[i]] = begin + i;
            state.runs.push_back(std::move(run));
            return;
        }
        std::vector<std::size_t> sizes;
        for (std::size_t c : entry.children) sizes.push_back(tree.entry(c).size);
        const auto blanks = largest_remainder(extent - entry.size, sizes);
        std::size_t cursor = begin;
        for (std::size_t i = 0; i < entry.children.size(); ++i) {
            const std::size_t child_extent = sizes[i] + blanks[i];
            place(entry.children[i], cursor, child_extent);
            cursor += child_extent;
        }
    };

    std::vector<std::size_t> sizes;
    for (std::size_t e : tree.top()) sizes.push_back(tree.entry(e).size);
    const auto blanks = assign_blanks(sizes, curve_length);
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < tree.top().size(); ++i) {
        const std::size_t extent = sizes[i] + blanks[i];
        place(tree.top()[i], cursor, extent);
        cursor += extent;
    }
    return state;
}

LayoutState expand_cluster(const LayoutState& state, const std::string& cluster, const ClusterTree& tree) {
    auto e = tree.find(cluster);
    if (!e) throw NotFoundError("unknown cluster '" + cluster + "'", {{"cluster", cluster}});
    if (tree.is_leaf(*e)) {
        spdlog::warn("expand ignored: '{}' is a leaf", cluster);
        return state;
    }
    if (state.expanded.contains(cluster)) throw InputError("cluster already expanded", {{"cluster", cluster}});
    auto expanded = state.expanded;
    expanded.insert(cluster);
    return assign_slots(tree, expanded, state.curve_length);
}

LayoutState collapse_cluster(const LayoutState& state, const std::string& cluster, const ClusterTree& tree) {
    auto e = tree.find(cluster);
    if (!e) throw NotFoundError("unknown cluster '" + cluster + "'", {{"cluster", cluster}});
    if (!state.expanded.contains(cluster)) throw InputError("cluster is not expanded", {{"cluster", cluster}});
    std::set<std::string> expanded;
    for (const auto& id : state.expanded) {
        // Drop the cluster and everything below it.
        std::size_t walk = *tree.find(id);
        bool below = false;
        while (walk != ClusterTree::npos) {
            if (walk == *e) {
                below = true;
                break;
            }
            walk = tree.entry(walk).parent;
        }
        if (!below) expanded.insert(id);
    }
    return assign_slots(tree, expanded, state.curve_length);
}

std::set<std::string> auto_expand(const ClusterTree& tree, std::size_t total_nodes, double k) {
    if (!(k >= 0.0 && k <= 1.0)) throw InputError("auto-expansion factor must lie in [0, 1]", {{"k", k}});
    const double limit = k * static_cast<double>(total_nodes);
    std::set<std::string> expanded;
    std::vector<std::size_t> pending(tree.top().begin(), tree.top().end());
    while (!pending.empty()) {
        const std::size_t e = pending.back();
        pending.pop_back();
        const auto& entry = tree.entry(e);
        if (entry.level == 0) continue;
        if (entry.children.size() == 1 || static_cast<double>(entry.size) > limit) {
            expanded.insert(entry.id);
            pending.insert(pending.end(), entry.children.begin(), entry.children.end());
        }
    }
    return expanded;
}

}  // namespace hints
