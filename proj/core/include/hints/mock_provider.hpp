#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "hints/provider.hpp"

namespace hints {

/// Offline provider. Embeddings are hashed bags of words; completions are
/// derived from the rendered prompt so that the pipeline produces plausible,
/// fully deterministic output.
///
/// Scripted replies and injected failures take precedence over the built-in
/// responders, in that order of checking: failures first.
class MockProvider : public LlmProvider {
public:
    explicit MockProvider(std::size_t dimension = 64);

    std::string complete(const std::vector<ChatMessage>& messages) override;
    Embedding embed(const std::string& text) override;
    std::optional<std::size_t> dimension() const override { return dimension_; }

    /// Queue literal completions returned before any responder runs.
    void script(std::vector<std::string> replies);
    /// The next `count` completions throw ProviderError.
    void fail_next_completions(std::size_t count);
    void fail_next_embeddings(std::size_t count);
    /// Fixed embedding for an exact text, used instead of hashing.
    void set_embedding(const std::string& text, Embedding vector);

    std::size_t completion_calls() const;
    std::size_t embedding_calls() const;
    std::vector<std::vector<ChatMessage>> completion_log() const;

private:
    std::string respond(const std::vector<ChatMessage>& messages) const;

    std::size_t dimension_;
    mutable std::mutex mutex_;
    std::deque<std::string> scripted_;
    std::size_t failing_completions_ = 0;
    std::size_t failing_embeddings_ = 0;
    std::size_t completion_calls_ = 0;
    std::size_t embedding_calls_ = 0;
    std::map<std::string, Embedding> fixed_;
    std::vector<std::vector<ChatMessage>> log_;
};

/// Lowercased alphanumeric tokens of `text` without common stopwords.
std::vector<std::string> content_tokens(const std::string& text);

}  // namespace hints
