#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hints/provider.hpp"

namespace hints {

enum class Domain { news, papers };

std::string_view to_string(Domain domain) noexcept;
/// Throws ConfigError for anything but "news" or "papers".
Domain parse_domain(std::string_view text);

enum class PromptId {
    summarize,
    extract_event,
    extract_keywords,
    keyword_explanation,
    keyword_unify,
    label_bottom,
    label_intermediate,
    label_keywords,
};

std::string_view to_string(PromptId id) noexcept;

/// Chat messages whose contents may hold {slot} markers.
struct PromptTemplate {
    PromptId id;
    Domain domain;
    std::vector<ChatMessage> messages;
};

const PromptTemplate& prompt_template(PromptId id, Domain domain);

/// Slot names referenced by the template, in order of first use.
std::vector<std::string> template_slots(const PromptTemplate& t);

/// Fills every {slot} in one pass; values are inserted verbatim and never
/// rescanned. Throws ConfigError naming any slot without a value.
std::vector<ChatMessage> render(const PromptTemplate& t, const std::map<std::string, std::string>& slots);

/// Template that produced `messages`, matched on the leading system message;
/// null when none did.
const PromptTemplate* identify_prompt(const std::vector<ChatMessage>& messages);

}  // namespace hints
