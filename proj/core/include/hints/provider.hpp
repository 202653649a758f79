#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hints/corpus.hpp"

namespace hints {

struct ChatMessage {
    std::string role;  // system | user | assistant
    std::string content;
    std::string name;  // optional speaker tag, e.g. example_user or context

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

void to_json(nlohmann::json& j, const ChatMessage& m);
void from_json(const nlohmann::json& j, ChatMessage& m);

/// Chat completion and embedding backend. Implementations must be safe to call
/// from several threads at once.
class LlmProvider {
public:
    virtual ~LlmProvider() = default;

    /// Throws ProviderError on transport or backend failure.
    virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
    virtual Embedding embed(const std::string& text) = 0;
    /// Embedding dimension when known up front.
    virtual std::optional<std::size_t> dimension() const { return std::nullopt; }

    /// Rough count of 4 bytes per token, rounded up.
    virtual std::size_t token_count(const std::string& text) const;
    std::size_t token_count(const std::vector<ChatMessage>& messages) const;
};

}  // namespace hints
