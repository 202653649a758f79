#include "hints/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "hints/error.hpp"

namespace hints {

double WeightedGraph::weight(std::size_t i, std::size_t j) const {
    const auto& row = adjacency.at(i);
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const std::pair<std::size_t, double>& p, std::size_t key) { return p.first < key; });
    if (it == row.end() || it->first != j) return 0.0;
    return it->second;
}

double WeightedGraph::strength(std::size_t i) const {
    double k = 0.0;
    for (const auto& [_, w] : adjacency.at(i)) k += std::fabs(w);
    return k;
}

WeightedGraph expand_hyperedges(std::size_t n, std::span<const std::vector<std::size_t>> members) {
    std::map<std::pair<std::size_t, std::size_t>, double> raw;
    for (const auto& edge : members) {
        if (edge.size() < 2) continue;
        const double share = 1.0 / static_cast<double>(edge.size() - 1);
        for (std::size_t a = 0; a < edge.size(); ++a) {
            for (std::size_t b = a + 1; b < edge.size(); ++b) {
                auto key = std::minmax(edge[a], edge[b]);
                if (key.first == key.second) continue;
                raw[key] += share;
            }
        }
    }
    double max_weight = 0.0;
    for (const auto& [_, w] : raw) max_weight = std::max(max_weight, w);

    WeightedGraph g;
    g.adjacency.resize(n);
    for (const auto& [key, w] : raw) {
        const double normalized = w / max_weight;
        g.adjacency[key.first].emplace_back(key.second, normalized);
        g.adjacency[key.second].emplace_back(key.first, normalized);
    }
    for (auto& row : g.adjacency) std::sort(row.begin(), row.end());
    return g;
}

WeightedGraph hypergraph_to_weighted_graph(const Hypergraph& h) {
    WeightedGraph g = expand_hyperedges(h.node_count(), h.all_members());
    g.nodes = h.nodes();
    return g;
}

double semantic_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DomainError("embedding dimensions differ");
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw DomainError("cosine similarity of a zero vector");
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double connectivity_similarity(std::size_t i, std::size_t j, const WeightedGraph& g) {
    if (i == j) throw InputError("connectivity similarity needs two distinct nodes");
    if (i >= g.size() || j >= g.size()) throw InputError("node index out of range");
    const auto& ri = g.adjacency[i];
    const auto& rj = g.adjacency[j];
    double shared = 0.0;
    auto a = ri.begin();
    auto b = rj.begin();
    while (a != ri.end() && b != rj.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            shared += a->second * b->second;
            ++a;
            ++b;
        }
    }
    const double wij = g.weight(i, j);
    const double ki = g.strength(i);
    const double kj = g.strength(j);
    if (ki == 0.0 && kj == 0.0) return 0.0;
    return (shared + wij) / (std::min(ki, kj) + 1.0 - std::fabs(wij));
}

double combined_similarity(double ss, double sc, const ClusteringParams& params) {
    return params.alpha * ss + (1.0 - params.alpha) * sc;
}

Embedding cluster_centroid(std::span<const std::size_t> members, std::span<const Embedding> embeddings) {
    if (members.empty()) throw DomainError("centroid of an empty cluster");
    Embedding sum(embeddings[members.front()].size(), 0.0);
    for (std::size_t m : members) {
        const auto& e = embeddings[m];
        if (e.size() != sum.size()) throw DomainError("embedding dimensions differ");
        for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += e[d];
    }
    const double count = static_cast<double>(members.size());
    for (double& x : sum) x /= count;
    return sum;
}

namespace {

void validate(const ClusteringParams& params) {
    if (!(params.alpha >= 0.0 && params.alpha <= 1.0)) {
        throw InputError("alpha must lie in [0, 1]", {{"alpha", params.alpha}});
    }
}

// Row i of the wTO matrix. Two-hop products are accumulated in ascending order
// of the intermediate node.
void connectivity_row(std::size_t i, const WeightedGraph& g, std::span<const double> strength,
                      std::vector<double>& shared, std::vector<double>& out) {
    const std::size_t n = g.size();
    std::fill(shared.begin(), shared.end(), 0.0);
    for (const auto& [u, wiu] : g.adjacency[i]) {
        for (const auto& [j, wuj] : g.adjacency[u]) shared[j] += wiu * wuj;
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& [j, wij] : g.adjacency[i]) out[j] = wij;  // reuse as w_ij scratch
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double wij = out[j];
        if (strength[i] == 0.0 && strength[j] == 0.0) {
            out[j] = 0.0;
            continue;
        }
        out[j] = (shared[j] + wij) / (std::min(strength[i], strength[j]) + 1.0 - std::fabs(wij));
    }
}

}  // namespace

std::vector<std::size_t> nearest_partners(std::span<const Embedding> centroids, const WeightedGraph& g,
                                          const ClusteringParams& params) {
    validate(params);
    const std::size_t n = g.size();
    if (centroids.size() != n) throw InputError("centroid count does not match graph size");
    if (n < 2) throw InputError("nearest partners need at least two nodes");

    const bool use_semantic = params.alpha != 0.0;
    const bool use_connectivity = params.alpha != 1.0;
    std::vector<double> strength(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) strength[i] = g.strength(i);

    std::vector<double> shared(n);
    std::vector<double> sc(n);
    std::vector<std::size_t> partner(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (use_connectivity) connectivity_row(i, g, strength, shared, sc);
        double best = 0.0;
        std::size_t best_j = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double ss = use_semantic ? semantic_similarity(centroids[i], centroids[j]) : 0.0;
            const double s = combined_similarity(ss, use_connectivity ? sc[j] : 0.0, params);
            if (!std::isfinite(s)) {
                throw NumericError("non-finite similarity", {{"i", i}, {"j", j}});
            }
            if (best_j == n || s > best) {
                best = s;
                best_j = j;
            }
        }
        partner[i] = best_j;
    }
    return partner;
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

PartitionSequence agglomerate(const Hypergraph& h, std::span<const Embedding> embeddings,
                              const ClusteringParams& params) {
    validate(params);
    const std::size_t n = h.node_count();
    if (n == 0) throw InputError("cannot cluster an empty hypergraph");
    if (embeddings.size() != n) throw InputError("every node needs an embedding");
    for (const auto& e : embeddings) {
        if (e.empty() || e.size() != embeddings.front().size()) {
            throw InputError("embeddings must share one nonzero dimension");
        }
    }
    if (n == 1) return PartitionSequence(h.nodes(), {{0}});

    // assignment[v]: supernode of original node v; supernodes are numbered in
    // order of first appearance.
    std::vector<std::size_t> assignment(n);
    std::iota(assignment.begin(), assignment.end(), 0);
    std::vector<std::vector<std::size_t>> edges(h.all_members().begin(), h.all_members().end());
    WeightedGraph g = hypergraph_to_weighted_graph(h);
    std::size_t supernodes = n;
    std::vector<std::vector<std::size_t>> levels;

    while (supernodes > 1) {
        std::vector<std::vector<std::size_t>> member_lists(supernodes);
        for (std::size_t v = 0; v < n; ++v) member_lists[assignment[v]].push_back(v);
        std::vector<Embedding> centroids;
        centroids.reserve(supernodes);
        if (params.alpha != 0.0) {
            for (const auto& m : member_lists) centroids.push_back(cluster_centroid(m, embeddings));
        } else {
            centroids.resize(supernodes);
        }

        const auto partner = nearest_partners(centroids, g, params);
        std::vector<std::size_t> uf(supernodes);
        std::iota(uf.begin(), uf.end(), 0);
        for (std::size_t i = 0; i < supernodes; ++i) {
            std::size_t a = find_root(uf, i);
            std::size_t b = find_root(uf, partner[i]);
            if (a != b) uf[std::max(a, b)] = std::min(a, b);
        }
        std::vector<std::size_t> next(supernodes);
        for (std::size_t i = 0; i < supernodes; ++i) next[i] = find_root(uf, i);
        next = canonical_labels(next);

        std::size_t next_count = 0;
        for (std::size_t c : next) next_count = std::max(next_count, c + 1);
        for (std::size_t v = 0; v < n; ++v) assignment[v] = next[assignment[v]];
        levels.push_back(assignment);

        std::vector<std::vector<std::size_t>> contracted;
        std::set<std::vector<std::size_t>> seen;
        for (const auto& edge : edges) {
            std::vector<std::size_t> mapped;
            mapped.reserve(edge.size());
            for (std::size_t x : edge) mapped.push_back(next[x]);
            std::sort(mapped.begin(), mapped.end());
            mapped.erase(std::unique(mapped.begin(), mapped.end()), mapped.end());
            if (seen.insert(mapped).second) contracted.push_back(std::move(mapped));
        }
        edges = std::move(contracted);
        g = expand_hyperedges(next_count, edges);
        supernodes = next_count;
    }
    return PartitionSequence(h.nodes(), std::move(levels));
}

}  // namespace hints
