#include "hints/hypergraph.hpp"

#include <algorithm>
#include <unordered_set>

#include "hints/error.hpp"

namespace hints {

HypergraphKind flipped(HypergraphKind kind) noexcept {
    return kind == HypergraphKind::document ? HypergraphKind::keyword : HypergraphKind::document;
}

Hypergraph::Hypergraph(HypergraphKind kind, std::vector<std::string> nodes, std::vector<std::string> edge_ids,
                       std::vector<std::vector<std::size_t>> members)
    : kind_(kind), nodes_(std::move(nodes)), edge_ids_(std::move(edge_ids)), members_(std::move(members)) {
    if (edge_ids_.size() != members_.size()) {
        throw StructuralError("hyperedge id count does not match member list count");
    }
    node_lookup_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!node_lookup_.emplace(nodes_[i], i).second) {
            throw StructuralError("duplicate node id '" + nodes_[i] + "'");
        }
    }
    incident_.assign(nodes_.size(), {});
    edge_lookup_.reserve(edge_ids_.size());
    for (std::size_t e = 0; e < edge_ids_.size(); ++e) {
        if (!edge_lookup_.emplace(edge_ids_[e], e).second) {
            throw StructuralError("duplicate hyperedge id '" + edge_ids_[e] + "'");
        }
        auto& m = members_[e];
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
        if (m.empty()) throw StructuralError("hyperedge '" + edge_ids_[e] + "' has no members");
        if (m.back() >= nodes_.size()) {
            throw StructuralError("hyperedge '" + edge_ids_[e] + "' references an unknown node");
        }
        for (std::size_t v : m) incident_[v].push_back(e);
    }
}

std::optional<std::size_t> Hypergraph::node_index(const std::string& id) const {
    auto it = node_lookup_.find(id);
    if (it == node_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Hypergraph::edge_index(const std::string& id) const {
    auto it = edge_lookup_.find(id);
    if (it == edge_lookup_.end()) return std::nullopt;
    return it->second;
}

DocumentHypergraphBuild build_document_hypergraph(std::span<const Document> documents,
                                                  std::span<const KeywordEntity> keywords) {
    if (documents.empty()) throw InputError("cannot build a hypergraph from an empty corpus");

    std::unordered_map<std::string, std::size_t> keyword_index;
    for (std::size_t k = 0; k < keywords.size(); ++k) {
        if (!keyword_index.emplace(keywords[k].id, k).second) {
            throw StructuralError("duplicate keyword id '" + keywords[k].id + "'");
        }
    }

    std::vector<std::string> nodes;
    nodes.reserve(documents.size());
    std::vector<std::vector<std::size_t>> mentions_of(keywords.size());
    for (std::size_t d = 0; d < documents.size(); ++d) {
        const Document& doc = documents[d];
        nodes.push_back(doc.id);
        for (const auto& kw : doc.mentioned_keywords) {
            auto it = keyword_index.find(kw);
            if (it == keyword_index.end()) {
                throw StructuralError("document '" + doc.id + "' mentions unknown keyword '" + kw + "'",
                                      {{"document", doc.id}, {"keyword", kw}});
            }
            mentions_of[it->second].push_back(d);
        }
    }

    DocumentHypergraphBuild out;
    std::vector<std::string> edge_ids;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t k = 0; k < keywords.size(); ++k) {
        if (mentions_of[k].empty()) {
            out.dropped_keywords.push_back(keywords[k].id);
            continue;
        }
        edge_ids.push_back(keywords[k].id);
        members.push_back(std::move(mentions_of[k]));
    }
    out.graph = Hypergraph(HypergraphKind::document, std::move(nodes), std::move(edge_ids), std::move(members));
    return out;
}

Hypergraph dualize(const Hypergraph& h) {
    std::vector<std::string> edge_ids;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t v = 0; v < h.node_count(); ++v) {
        const auto& incident = h.incident_edges(v);
        if (incident.empty()) continue;
        edge_ids.push_back(h.nodes()[v]);
        members.push_back(incident);
    }
    return Hypergraph(flipped(h.kind()), h.edge_ids(), std::move(edge_ids), std::move(members));
}

Hypergraph sub_hypergraph(const Hypergraph& h, std::span<const std::string> keep) {
    if (keep.empty()) throw InputError("sub-hypergraph needs at least one node");
    std::vector<bool> kept(h.node_count(), false);
    for (const auto& id : keep) {
        auto idx = h.node_index(id);
        if (!idx) throw InputError("unknown node '" + id + "'", {{"node", id}});
        kept[*idx] = true;
    }
    std::vector<std::size_t> remap(h.node_count(), 0);
    std::vector<std::string> nodes;
    for (std::size_t v = 0; v < h.node_count(); ++v) {
        if (!kept[v]) continue;
        remap[v] = nodes.size();
        nodes.push_back(h.nodes()[v]);
    }
    std::vector<std::string> edge_ids;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        std::vector<std::size_t> m;
        for (std::size_t v : h.members(e)) {
            if (kept[v]) m.push_back(remap[v]);
        }
        if (m.empty()) continue;
        edge_ids.push_back(h.edge_ids()[e]);
        members.push_back(std::move(m));
    }
    return Hypergraph(h.kind(), std::move(nodes), std::move(edge_ids), std::move(members));
}

}  // namespace hints
