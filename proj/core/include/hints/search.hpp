#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hints/corpus.hpp"
#include "hints/provider.hpp"

namespace hints {

inline constexpr double default_relevancy_threshold = 0.75;

struct RankedResult {
    std::string doc_id;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based
    friend bool operator==(const RankedResult&, const RankedResult&) = default;
};

struct SearchResult {
    std::vector<RankedResult> ranked;
    std::set<std::string> highlighted;           // documents scoring at least the threshold
    std::set<std::string> highlighted_keywords;  // mentioned by highlighted documents
};

/// Scores `documents` by cosine against a precomputed query vector. Ties are
/// ordered by document id so the result does not depend on input order.
SearchResult rank_by_vector(std::span<const double> query, std::span<const Document* const> documents,
                            double threshold);

/// Embeds `query` with `provider` and ranks. Throws InputError for a blank query
/// or a threshold outside [-1, 1]; provider failures surface as ProviderError.
SearchResult rank_documents(const std::string& query, std::span<const Document* const> documents,
                            LlmProvider& provider, double threshold = default_relevancy_threshold);

}  // namespace hints
