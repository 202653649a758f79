#include "generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace hints::testing {

std::vector<std::string> numbered_ids(const std::string& prefix, std::size_t n) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i + 1));
    return ids;
}

Hypergraph random_hypergraph(Gen& g, std::size_t max_nodes, std::size_t max_edges, bool cover_all_nodes) {
    const std::size_t n = 1 + g.below(max_nodes);
    const std::size_t m = 1 + g.below(max_edges);
    std::vector<std::set<std::size_t>> edges(m);
    for (auto& e : edges) {
        const double p = g.real(0.1, 0.7);
        for (std::size_t v = 0; v < n; ++v) {
            if (g.chance(p)) e.insert(v);
        }
        if (e.empty()) e.insert(g.below(n));
    }
    if (cover_all_nodes) {
        for (std::size_t v = 0; v < n; ++v) {
            bool covered = false;
            for (const auto& e : edges) covered = covered || e.contains(v);
            if (!covered) edges[g.below(m)].insert(v);
        }
    }
    std::vector<std::vector<std::size_t>> members;
    for (const auto& e : edges) members.emplace_back(e.begin(), e.end());
    return Hypergraph(HypergraphKind::document, numbered_ids("v", n), numbered_ids("e", m), std::move(members));
}

WeightedGraph random_weighted_graph(Gen& g, std::size_t n, double density) {
    WeightedGraph out;
    out.nodes = numbered_ids("v", n);
    out.adjacency.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!g.chance(density)) continue;
            // Exact 1.0 shows up often enough to exercise the |w_ij| = 1 case.
            const double w = g.chance(0.15) ? 1.0 : g.real(0.01, 1.0);
            out.adjacency[i].emplace_back(j, w);
            out.adjacency[j].emplace_back(i, w);
        }
    }
    for (auto& row : out.adjacency) std::sort(row.begin(), row.end());
    return out;
}

std::vector<Embedding> random_embeddings(Gen& g, std::size_t n, std::size_t dim) {
    std::vector<Embedding> out(n, Embedding(dim));
    for (auto& e : out) {
        for (auto& x : e) x = g.real(-1.0, 1.0);
        e = normalized(e);
    }
    return out;
}

PartitionSequence random_partitions(Gen& g, std::size_t n) {
    if (n == 1) return PartitionSequence({"v1"}, {{0}});
    std::vector<std::vector<std::size_t>> levels;
    std::vector<std::size_t> assignment(n);
    std::iota(assignment.begin(), assignment.end(), 0);
    std::size_t count = n;
    while (count > 1) {
        const std::size_t next = 1 + g.below(count - 1);
        // Every new cluster gets one old cluster, the rest are spread at random.
        std::vector<std::size_t> order(count);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), g.engine());
        std::vector<std::size_t> target(count);
        for (std::size_t i = 0; i < count; ++i) target[order[i]] = i < next ? i : g.below(next);
        for (auto& a : assignment) a = target[a];
        levels.push_back(assignment);
        count = next;
    }
    return PartitionSequence(numbered_ids("v", n), std::move(levels));
}

std::vector<Point> random_cluster_points(Gen& g, std::size_t count, double min_gap) {
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count) * 2.0))) + 1;
    std::vector<std::pair<int, int>> cells;
    for (int x = 0; x < side; ++x) {
        for (int y = 0; y < side; ++y) cells.emplace_back(x, y);
    }
    std::shuffle(cells.begin(), cells.end(), g.engine());
    // Keep a connected-ish blob by preferring cells near the first pick.
    const auto seed = cells.front();
    std::stable_sort(cells.begin(), cells.end(), [&](auto a, auto b) {
        const int da = std::abs(a.first - seed.first) + std::abs(a.second - seed.second);
        const int db = std::abs(b.first - seed.first) + std::abs(b.second - seed.second);
        return da < db;
    });
    const double step = min_gap * 3.0;
    std::vector<Point> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double jx = g.real(-min_gap, min_gap);
        const double jy = g.real(-min_gap, min_gap);
        out.push_back({cells[i].first * step + jx, cells[i].second * step + jy});
    }
    return out;
}

Hypergraph four_node_example() {
    return Hypergraph(HypergraphKind::document, {"v1", "v2", "v3", "v4"}, {"e1", "e2", "e3"},
                      {{0, 1, 2}, {1, 2}, {2, 3}});
}

}  // namespace hints::testing
