#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hints/corpus.hpp"

namespace hints {

enum class HypergraphKind { document, keyword };

HypergraphKind flipped(HypergraphKind kind) noexcept;

/// Node set plus hyperedge incidence. Nodes and edges keep the order they were
/// given in, so everything derived from a hypergraph is deterministic.
///
/// Members of each hyperedge are stored as ascending node indices. The
/// constructor rejects unknown members, empty hyperedges and duplicate ids.
class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(HypergraphKind kind, std::vector<std::string> nodes, std::vector<std::string> edge_ids,
               std::vector<std::vector<std::size_t>> members);

    HypergraphKind kind() const noexcept { return kind_; }
    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::vector<std::string>& edge_ids() const noexcept { return edge_ids_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edge_ids_.size(); }

    const std::vector<std::size_t>& members(std::size_t edge) const { return members_.at(edge); }
    const std::vector<std::vector<std::size_t>>& all_members() const noexcept { return members_; }
    /// Edges containing `node`, ascending.
    const std::vector<std::size_t>& incident_edges(std::size_t node) const { return incident_.at(node); }

    std::optional<std::size_t> node_index(const std::string& id) const;
    std::optional<std::size_t> edge_index(const std::string& id) const;

    friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
        return a.kind_ == b.kind_ && a.nodes_ == b.nodes_ && a.edge_ids_ == b.edge_ids_ &&
               a.members_ == b.members_;
    }

private:
    HypergraphKind kind_ = HypergraphKind::document;
    std::vector<std::string> nodes_;
    std::vector<std::string> edge_ids_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<std::vector<std::size_t>> incident_;
    std::unordered_map<std::string, std::size_t> node_lookup_;
    std::unordered_map<std::string, std::size_t> edge_lookup_;
};

struct DocumentHypergraphBuild {
    Hypergraph graph;
    std::vector<std::string> dropped_keywords;  // mentioned by no document
};

/// Documents become nodes and every keyword becomes the hyperedge of the
/// documents mentioning it.
DocumentHypergraphBuild build_document_hypergraph(std::span<const Document> documents,
                                                  std::span<const KeywordEntity> keywords);

/// Swaps the roles of nodes and hyperedges. A node that sits in no hyperedge
/// would produce an empty hyperedge, so it has no counterpart in the dual.
Hypergraph dualize(const Hypergraph& h);

/// Restricts `h` to `keep` (order follows `h`), intersecting every hyperedge
/// and dropping those that become empty. Kept nodes may end up isolated.
Hypergraph sub_hypergraph(const Hypergraph& h, std::span<const std::string> keep);

}  // namespace hints
