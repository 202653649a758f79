#include "hints/search.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "hints/clustering.hpp"
#include "hints/error.hpp"

namespace hints {

SearchResult rank_by_vector(std::span<const double> query, std::span<const Document* const> documents,
                            double threshold) {
    if (!(threshold >= -1.0 && threshold <= 1.0)) {
        throw InputError("relevancy threshold must lie in [-1, 1]", {{"threshold", threshold}});
    }
    SearchResult out;
    out.ranked.reserve(documents.size());
    for (const Document* d : documents) out.ranked.push_back({d->id, semantic_similarity(query, d->embedding), 0});
    std::sort(out.ranked.begin(), out.ranked.end(), [](const RankedResult& a, const RankedResult& b) {
        return a.score > b.score || (a.score == b.score && a.doc_id < b.doc_id);
    });
    for (std::size_t i = 0; i < out.ranked.size(); ++i) out.ranked[i].rank = i + 1;
    std::unordered_map<std::string, const Document*> by_id;
    for (const Document* d : documents) by_id.emplace(d->id, d);
    for (const auto& r : out.ranked) {
        if (r.score < threshold) break;
        out.highlighted.insert(r.doc_id);
        const auto& mentions = by_id.at(r.doc_id)->mentioned_keywords;
        out.highlighted_keywords.insert(mentions.begin(), mentions.end());
    }
    return out;
}

SearchResult rank_documents(const std::string& query, std::span<const Document* const> documents,
                            LlmProvider& provider, double threshold) {
    if (std::all_of(query.begin(), query.end(), [](unsigned char c) { return std::isspace(c); })) {
        throw InputError("search query is empty");
    }
    if (!(threshold >= -1.0 && threshold <= 1.0)) {
        throw InputError("relevancy threshold must lie in [-1, 1]", {{"threshold", threshold}});
    }
    const Embedding q = provider.embed(query);
    return rank_by_vector(q, documents, threshold);
}

}  // namespace hints
