#include "hints/http_provider.hpp"

#include <cstdlib>

#include <httplib.h>

#include "hints/error.hpp"

namespace hints {

HttpProvider::HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
    if (config_.api_key.empty()) {
        if (const char* key = std::getenv("HINTS_LLM_API_KEY")) config_.api_key = key;
    }
    const auto scheme_end = config_.base_url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("provider base URL needs a scheme", {{"base_url", config_.base_url}});
    }
    const auto path_start = config_.base_url.find('/', scheme_end + 3);
    origin_ = config_.base_url.substr(0, path_start);
    prefix_ = path_start == std::string::npos ? "" : config_.base_url.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (origin_.starts_with("https://")) throw ConfigError("built without TLS support; use an http:// base URL");
#endif
}

nlohmann::json HttpProvider::post(const std::string& endpoint, const nlohmann::json& body) const {
    httplib::Client client(origin_);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    auto res = client.Post(prefix_ + endpoint, headers, body.dump(), "application/json");
    if (!res) {
        throw ProviderError("request to " + endpoint + " failed: " + httplib::to_string(res.error()),
                            {{"endpoint", endpoint}});
    }
    if (res->status != 200) {
        throw ProviderError("provider answered HTTP " + std::to_string(res->status),
                            {{"endpoint", endpoint}, {"status", res->status}, {"body", res->body.substr(0, 512)}});
    }
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("provider returned malformed JSON: ") + e.what(), {{"endpoint", endpoint}});
    }
}

std::string HttpProvider::complete(const std::vector<ChatMessage>& messages) {
    nlohmann::json body = {{"model", config_.chat_model}, {"temperature", 0}, {"messages", messages}};
    const auto reply = post("/chat/completions", body);
    try {
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw ProviderError("completion response has no message content");
    }
}

Embedding HttpProvider::embed(const std::string& text) {
    nlohmann::json body = {{"model", config_.embedding_model}, {"input", text}};
    const auto reply = post("/embeddings", body);
    try {
        return reply.at("data").at(0).at("embedding").get<Embedding>();
    } catch (const nlohmann::json::exception&) {
        throw ProviderError("embedding response has no vector");
    }
}

}  // namespace hints
