#pragma once

#include <optional>
#include <string>

#include "hints/provider.hpp"

namespace hints {

struct HttpProviderConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string chat_model = "gpt-3.5-turbo-16k";
    std::string embedding_model = "text-embedding-ada-002";
    std::string api_key;  // empty: read HINTS_LLM_API_KEY
    int timeout_seconds = 60;
    std::optional<std::size_t> dimension;
};

/// OpenAI-compatible chat-completion and embedding endpoints.
class HttpProvider : public LlmProvider {
public:
    explicit HttpProvider(HttpProviderConfig config);

    std::string complete(const std::vector<ChatMessage>& messages) override;
    Embedding embed(const std::string& text) override;
    std::optional<std::size_t> dimension() const override { return config_.dimension; }

private:
    nlohmann::json post(const std::string& endpoint, const nlohmann::json& body) const;

    HttpProviderConfig config_;
    std::string origin_;  // scheme://host[:port]
    std::string prefix_;  // path below the origin, no trailing slash
};

}  // namespace hints
