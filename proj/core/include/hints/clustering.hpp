#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hints/corpus.hpp"
#include "hints/hypergraph.hpp"
#include "hints/partition.hpp"

namespace hints {

/// Symmetric sparse graph with weights in [0, 1] and no self loops.
/// Adjacency lists are sorted by neighbor index.
struct WeightedGraph {
    std::vector<std::string> nodes;
    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;

    std::size_t size() const noexcept { return adjacency.size(); }
    double weight(std::size_t i, std::size_t j) const;
    /// k_i, the sum of |w| over the neighbors of i.
    double strength(std::size_t i) const;
};

/// Clique expansion where a hyperedge e adds 1/(|e|-1) to every member pair,
/// followed by division by the largest accumulated weight.
WeightedGraph hypergraph_to_weighted_graph(const Hypergraph& h);

/// Same rule over bare member lists (node indices < n).
WeightedGraph expand_hyperedges(std::size_t n, std::span<const std::vector<std::size_t>> members);

double semantic_similarity(std::span<const double> a, std::span<const double> b);

/// Weighted topological overlap of i and j. 0 for an isolated pair.
double connectivity_similarity(std::size_t i, std::size_t j, const WeightedGraph& g);

struct ClusteringParams {
    double alpha = 0.5;  // weight of semantic similarity
};

double combined_similarity(double ss, double sc, const ClusteringParams& params);

Embedding cluster_centroid(std::span<const std::size_t> members, std::span<const Embedding> embeddings);

/// For every node, the index of its most similar other node under the blended
/// similarity. Ties go to the lower index. Exposed for testing single merge
/// passes; agglomerate() calls it once per level.
std::vector<std::size_t> nearest_partners(std::span<const Embedding> centroids, const WeightedGraph& g,
                                          const ClusteringParams& params);

/// Bottom-up clustering. `embeddings[v]` belongs to node v of `h`.
/// Each pass links every supernode to its nearest partner and merges the
/// resulting connected groups, so the cluster count drops on every level.
PartitionSequence agglomerate(const Hypergraph& h, std::span<const Embedding> embeddings,
                              const ClusteringParams& params);

}  // namespace hints
