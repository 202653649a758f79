#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "generators.hpp"
#include "hints/error.hpp"
#include "hints/layout.hpp"
#include "oracles.hpp"

namespace hints {
namespace {

using testing::Gen;

// Level-1 clusters given as consecutive group sizes, level 2 as groups of
// level-1 clusters (skipped when it groups nothing), topped by a single root.
PartitionSequence two_level(const std::vector<std::size_t>& sizes, const std::vector<std::size_t>& parent_of) {
    std::vector<std::size_t> l1, l2, l3;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        for (std::size_t i = 0; i < sizes[c]; ++i) {
            l1.push_back(c);
            l2.push_back(parent_of[c]);
            l3.push_back(0);
        }
    }
    const std::set<std::size_t> parents(parent_of.begin(), parent_of.end());
    if (parents.size() == sizes.size()) return PartitionSequence(testing::numbered_ids("v", l1.size()), {l1, l3});
    return PartitionSequence(testing::numbered_ids("v", l1.size()), {l1, l2, l3});
}

// Random frontier: every visited cluster expands with probability p.
std::set<std::string> random_expansion(Gen& g, const ClusterTree& tree, double p) {
    std::set<std::string> out;
    std::function<void(std::size_t)> walk = [&](std::size_t e) {
        if (tree.is_leaf(e) || !g.chance(p)) return;
        out.insert(tree.entry(e).id);
        for (std::size_t c : tree.entry(e).children) walk(c);
    };
    for (std::size_t e : tree.top()) walk(e);
    return out;
}

// Leaves under e by recursing over the partition levels directly.
void flatten(const PartitionSequence& p, std::size_t level, std::size_t index, std::vector<std::size_t>& out) {
    if (level == 0) {
        out.push_back(index);
        return;
    }
    if (level == 1) {
        for (std::size_t v : p.members(1, index)) out.push_back(v);
        return;
    }
    std::vector<std::size_t> children;
    for (std::size_t c = 0; c < p.cluster_count(level - 1); ++c) {
        if (p.parent_index(level - 1, c) == index) children.push_back(c);
    }
    for (std::size_t c : children) flatten(p, level - 1, c, out);
}

TEST(LargestRemainder, ConservesTotalAndMatchesOracle) {
    Gen g(1);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = 1 + g.below(12);
        std::vector<std::size_t> w(k);
        for (auto& x : w) x = 1 + g.below(40);
        const std::size_t total = g.below(500);
        const auto parts = largest_remainder(total, w);
        EXPECT_EQ(std::accumulate(parts.begin(), parts.end(), std::size_t{0}), total);
        EXPECT_EQ(parts, testing::oracle_largest_remainder(total, w));
        const double sum = std::accumulate(w.begin(), w.end(), 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            EXPECT_LT(std::abs(static_cast<double>(parts[i]) - total * w[i] / sum), 1.0);
        }
    }
}

TEST(AssignSlots, ProportionalBlanks) {
    const auto p = two_level({10, 40}, {0, 1});
    const ClusterTree tree(p);
    EXPECT_EQ(assign_blanks(std::vector<std::size_t>{10, 40}, 100), (std::vector<std::size_t>{10, 40}));
    const LayoutState s = assign_slots(tree, {}, 100);
    EXPECT_EQ(s.extents.at("c1-0"), (SlotExtent{0, 20}));
    EXPECT_EQ(s.extents.at("c1-1"), (SlotExtent{20, 80}));
    for (std::size_t v = 0; v < 10; ++v) EXPECT_EQ(s.node_slot[v], v);
    for (std::size_t v = 10; v < 50; ++v) EXPECT_EQ(s.node_slot[v], v + 10);
}

TEST(AssignSlots, TightAndOverfullCurves) {
    const auto p = two_level({3, 4}, {0, 1});
    const ClusterTree tree(p);
    const LayoutState s = assign_slots(tree, {}, 7);
    std::vector<std::size_t> slots = s.node_slot;
    std::sort(slots.begin(), slots.end());
    for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(slots[i], i);
    EXPECT_THROW(assign_slots(tree, {}, 6), CapacityError);
}

TEST(OrderNodes, FrontierUnderExpansion) {
    Gen g(2);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = testing::random_partitions(g, 2 + g.below(20));
        const ClusterTree tree(p);
        EXPECT_EQ(order_nodes(tree, {}), tree.top());

        const auto expanded = random_expansion(g, tree, 0.5);
        const auto before = order_nodes(tree, expanded);
        for (std::size_t i = 0; i < before.size(); ++i) {
            const std::size_t e = before[i];
            if (tree.is_leaf(e)) continue;
            auto more = expanded;
            more.insert(tree.entry(e).id);
            const auto after = order_nodes(tree, more);
            // The children replace the parent in place; everything else stays.
            std::vector<std::size_t> expect(before.begin(), before.begin() + static_cast<std::ptrdiff_t>(i));
            for (std::size_t c : tree.entry(e).children) expect.push_back(c);
            expect.insert(expect.end(), before.begin() + static_cast<std::ptrdiff_t>(i) + 1, before.end());
            EXPECT_EQ(after, expect);
            break;
        }
    }
}

TEST(OrderNodes, FullExpansionGivesDendrogramLeafOrder) {
    Gen g(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = testing::random_partitions(g, 2 + g.below(20));
        const ClusterTree tree(p);
        const auto all = random_expansion(g, tree, 1.0);
        std::vector<std::size_t> leaves;
        for (std::size_t e : order_nodes(tree, all)) {
            ASSERT_TRUE(tree.is_leaf(e));
            leaves.push_back(tree.entry(e).index);
        }
        std::vector<std::size_t> flat;
        flatten(p, p.level_count(), 0, flat);
        EXPECT_EQ(leaves, flat);
    }
}

TEST(OrderNodes, RejectsInconsistentFrontier) {
    const auto p = two_level({2, 2, 2}, {0, 0, 1});
    const ClusterTree tree(p);
    // c1-0 sits below c2-0, which is collapsed.
    EXPECT_THROW(order_nodes(tree, {"c1-0"}), InputError);
    EXPECT_THROW(order_nodes(tree, {"nope"}), InputError);
}

TEST(Expansion, ChildrenShareTheParentExtentAndNothingElseMoves) {
    Gen g(4);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = testing::random_partitions(g, 2 + g.below(30));
        const ClusterTree tree(p);
        const std::size_t n = p.node_count();
        const std::size_t length = n + g.below(3 * n + 1);
        const auto expanded = random_expansion(g, tree, 0.4);
        const LayoutState before = assign_slots(tree, expanded, length);
        for (const hints::Run& run : before.runs) {
            if (tree.is_leaf(run.entry)) continue;
            const std::string id = tree.entry(run.entry).id;
            const LayoutState after = expand_cluster(before, id, tree);
            const SlotExtent parent = before.extents.at(id);
            std::size_t covered = 0;
            for (std::size_t c : tree.entry(run.entry).children) {
                const SlotExtent ce = after.extents.at(tree.entry(c).id);
                EXPECT_GE(ce.begin, parent.begin);
                EXPECT_LE(ce.begin + ce.extent, parent.begin + parent.extent);
                covered += ce.extent;
            }
            EXPECT_EQ(covered, parent.extent);
            const auto members = tree.members(run.entry);
            for (std::size_t v = 0; v < n; ++v) {
                const bool inside = std::find(members.begin(), members.end(), v) != members.end();
                if (!inside) EXPECT_EQ(after.node_slot[v], before.node_slot[v]);
                else EXPECT_LT(after.node_slot[v] - parent.begin, parent.extent);
            }
            EXPECT_EQ(collapse_cluster(after, id, tree), before);
            break;
        }
    }
}

TEST(Expansion, ErrorsAndLeafNoOp) {
    const auto p = two_level({2, 3}, {0, 1});
    const ClusterTree tree(p);
    const LayoutState s = assign_slots(tree, {}, 10);
    EXPECT_EQ(expand_cluster(s, "v1", tree), s);
    EXPECT_THROW(expand_cluster(s, "c9-9", tree), NotFoundError);
    const LayoutState e = expand_cluster(s, "c1-0", tree);
    EXPECT_THROW(expand_cluster(e, "c1-0", tree), InputError);
    EXPECT_THROW(collapse_cluster(s, "c1-0", tree), InputError);
}

TEST(AutoExpand, SizeRuleAndChains) {
    // Level-2 clusters: {18, 17} -> 35 nodes, {30} single child, {35} single child.
    std::vector<std::size_t> sizes{18, 17, 30, 35};
    const auto p = two_level(sizes, {0, 0, 1, 2});
    const ClusterTree tree(p);
    EXPECT_EQ(auto_expand(tree, 100, 0.3), (std::set<std::string>{"c2-0", "c2-1", "c2-2", "c1-3"}));
}

TEST(AutoExpand, NothingFires) {
    const auto p = two_level({5, 5, 5, 5}, {0, 0, 1, 1});
    const ClusterTree tree(p);
    EXPECT_TRUE(auto_expand(tree, 20, 0.6).empty());
}

TEST(AutoExpand, FixpointOnRandomHierarchies) {
    Gen g(5);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = testing::random_partitions(g, 1 + g.below(60));
        const ClusterTree tree(p);
        const auto expanded = auto_expand(tree, p.node_count(), 0.3);
        for (std::size_t e : order_nodes(tree, expanded)) {
            if (tree.is_leaf(e)) continue;
            EXPECT_GE(tree.entry(e).children.size(), 2u);
            EXPECT_LE(static_cast<double>(tree.entry(e).size), 0.3 * static_cast<double>(p.node_count()));
        }
    }
}

TEST(ClusterTree, CoversContiguousLeafRanges) {
    Gen g(6);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = testing::random_partitions(g, 1 + g.below(25));
        const ClusterTree tree(p);
        auto order = tree.leaf_order();
        std::sort(order.begin(), order.end());
        for (std::size_t v = 0; v < order.size(); ++v) ASSERT_EQ(order[v], v);
        for (std::size_t e = 0; e < tree.entries().size(); ++e) {
            const auto& entry = tree.entry(e);
            if (entry.level == 0) continue;
            auto got = std::vector<std::size_t>(tree.members(e).begin(), tree.members(e).end());
            std::sort(got.begin(), got.end());
            EXPECT_EQ(got, p.members(entry.level, entry.index));
        }
    }
}

}  // namespace
}  // namespace hints
