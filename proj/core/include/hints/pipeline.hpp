#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hints/corpus.hpp"
#include "hints/prompts.hpp"
#include "hints/provider.hpp"

namespace hints {

struct PipelineConfig {
    Domain domain = Domain::news;
    double disambiguation_threshold = 0.9;  // cosine at which two keyword surfaces are the same entity
    std::size_t token_budget = 3000;        // per labeling prompt
    std::size_t max_keywords_per_doc = 5;
    int retry_limit = 3;                    // retries after the first attempt
    std::chrono::milliseconds backoff{100}; // doubled after every failed attempt
    std::size_t concurrency = 4;
    double requests_per_second = 0.0;       // 0 disables rate limiting
    std::uint64_t seed = 42;                // summary sampling for labels
    double alpha = 0.5;                     // clustering blend

    /// Throws ConfigError naming the first out-of-range field.
    void validate() const;
};

/// What happened during a run, minus anything timing dependent.
struct PipelineReport {
    std::size_t retries = 0;
    std::vector<std::string> warnings;
    std::vector<std::string> dropped_keywords;

    nlohmann::json to_json() const;
};

struct EventExtraction {
    std::string event;
    std::string trigger;
    friend bool operator==(const EventExtraction&, const EventExtraction&) = default;
};

/// "[event - trigger]", split on the last separator so events may contain dashes.
std::optional<EventExtraction> parse_event(const std::string& reply);
/// Bracketed items, trimmed, deduplicated, truncated to `limit`.
std::vector<std::string> parse_keywords(const std::string& reply, std::size_t limit);

struct DisambiguationResult {
    std::vector<KeywordEntity> entities;
    std::map<std::string, std::string> entity_of;  // surface -> entity id
};

/// Runs the preparation stages against one provider. Retries, backoff and rate
/// limiting wrap every provider call. Thread safe.
class Pipeline {
public:
    Pipeline(LlmProvider& provider, PipelineConfig config);

    const PipelineConfig& config() const noexcept { return config_; }
    LlmProvider& provider() noexcept { return provider_; }

    std::string summarize_document(const Document& doc);
    /// Throws PipelineError when no attempt yields a parseable event.
    EventExtraction extract_main_event(const std::string& summary);
    std::vector<std::string> extract_keywords(const std::string& summary, const std::string& event);
    DisambiguationResult disambiguate_keywords(const std::vector<std::string>& surfaces);
    Embedding embed_document(const Document& doc);
    Embedding embed_keyword(const KeywordEntity& entity);

    /// Completion with retries. `accept` may reject a reply, which counts as a
    /// failed attempt. Throws PipelineError after the last attempt.
    std::string complete(const std::vector<ChatMessage>& messages,
                         const std::function<bool(const std::string&)>& accept, const std::string& what);
    Embedding embed_normalized(const std::string& text, const std::string& what);

    /// Every stage in order. Documents come back with summaries, events,
    /// mentions, embeddings and flags filled in.
    struct Output {
        std::vector<Document> documents;
        std::vector<KeywordEntity> keywords;
    };
    Output run(std::vector<Document> documents);

    PipelineReport report() const;
    void warn(std::string message);

private:
    void throttle();
    void check_dimension(std::size_t dim);

    LlmProvider& provider_;
    PipelineConfig config_;
    mutable std::mutex mutex_;
    PipelineReport report_;
    std::optional<std::size_t> dimension_;
    std::chrono::steady_clock::time_point next_slot_{};
};

}  // namespace hints
