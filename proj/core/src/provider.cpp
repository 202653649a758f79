#include "hints/provider.hpp"

namespace hints {

void to_json(nlohmann::json& j, const ChatMessage& m) {
    j = {{"role", m.role}, {"content", m.content}};
    if (!m.name.empty()) j["name"] = m.name;
}

void from_json(const nlohmann::json& j, ChatMessage& m) {
    m.role = j.at("role").get<std::string>();
    m.content = j.at("content").get<std::string>();
    m.name = j.value("name", std::string{});
}

std::size_t LlmProvider::token_count(const std::string& text) const { return (text.size() + 3) / 4; }

std::size_t LlmProvider::token_count(const std::vector<ChatMessage>& messages) const {
    std::size_t total = 0;
    for (const auto& m : messages) total += token_count(m.content);
    return total;
}

}  // namespace hints
