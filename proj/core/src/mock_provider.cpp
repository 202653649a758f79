#include "hints/mock_provider.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "hints/error.hpp"
#include "hints/prompts.hpp"

namespace hints {

namespace {

const std::set<std::string>& stopwords() {
    static const std::set<std::string> words{
        "a",     "about", "after", "also",  "an",    "and",   "are",  "as",    "at",    "be",    "been",
        "but",   "by",    "for",   "from",  "had",   "has",   "have", "he",    "her",   "his",   "in",
        "into",  "is",    "it",    "its",   "of",    "on",    "or",   "over",  "said",  "she",   "so",
        "that",  "the",   "their", "them",  "they",  "this",  "to",   "was",   "were",  "which", "while",
        "who",   "will",  "with",  "would", "what",  "article", "discussed", "paper", "s",  "we",  "our"};
    return words;
}

// Capitalized words that start sentences rather than name things.
const std::set<std::string>& weak_capitals() {
    static const std::set<std::string> words{"The", "A",   "An",   "In",   "On",      "At",    "It",  "This",
                                             "That", "He", "She",  "They", "We",      "But",   "And", "Article",
                                             "Event", "Its", "His", "Her", "However", "After", "For", "As",
                                             "While", "Officials", "Paper", "Abstract", "Our", "Their", "When"};
    return words;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string after(const std::string& s, const std::string& prefix) {
    return s.compare(0, prefix.size(), prefix) == 0 ? s.substr(prefix.size()) : s;
}

std::vector<std::string> sentences(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        cur += text[i];
        const char c = text[i];
        if ((c == '.' || c == '!' || c == '?') && (i + 1 == text.size() || text[i + 1] == ' ')) {
            auto s = trim(cur);
            if (!s.empty()) out.push_back(s);
            cur.clear();
        }
    }
    auto s = trim(cur);
    if (!s.empty()) out.push_back(s + ".");
    return out;
}

std::string title_case(std::string w) {
    if (!w.empty()) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    return w;
}

// Most frequent content tokens; ties broken alphabetically.
std::vector<std::string> top_tokens(const std::string& text, std::size_t count) {
    std::map<std::string, int> freq;
    for (const auto& t : content_tokens(text)) {
        if (std::isdigit(static_cast<unsigned char>(t[0])) || t.size() < 3) continue;
        ++freq[t];
    }
    std::vector<std::pair<std::string, int>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ranked.size() && i < count; ++i) out.push_back(ranked[i].first);
    return out;
}

std::string label_from(const std::string& text) {
    auto top = top_tokens(text, 2);
    if (top.empty()) return "Miscellaneous";
    if (top.size() == 1) return title_case(top[0]);
    return title_case(top[0]) + " and " + title_case(top[1]);
}

// Runs of capitalized words, split at punctuation; possessives dropped.
std::vector<std::string> capitalized_phrases(const std::string& text) {
    std::vector<std::string> phrases;
    std::string current;
    auto flush = [&] {
        if (!current.empty() && std::find(phrases.begin(), phrases.end(), current) == phrases.end()) {
            phrases.push_back(current);
        }
        current.clear();
    };
    std::istringstream in(text);
    std::string word;
    while (in >> word) {
        bool breaks = false;
        while (!word.empty() && std::string(",;:!?\")(").find(word.back()) != std::string::npos) {
            word.pop_back();
            breaks = true;
        }
        // A single trailing dot ends a sentence; dotted abbreviations such as U.S. stay whole.
        if (!word.empty() && word.back() == '.' && std::count(word.begin(), word.end(), '.') == 1) {
            word.pop_back();
            breaks = true;
        }
        if (word.size() > 2 && (word.ends_with("'s") || word.ends_with("’s"))) {
            word.erase(word.size() - (word.ends_with("'s") ? 2 : 4));
            breaks = true;
        }
        while (!word.empty() && (word.front() == '"' || word.front() == '(')) word.erase(word.begin());
        const bool capital = !word.empty() && std::isupper(static_cast<unsigned char>(word[0]));
        if (capital && !(current.empty() && weak_capitals().contains(word))) {
            current += current.empty() ? word : " " + word;
        } else {
            flush();
        }
        if (breaks) flush();
    }
    flush();
    return phrases;
}

std::size_t requested_limit(const std::string& system) {
    const auto pos = system.find(" or less strictly");
    if (pos == std::string::npos) return 5;
    std::size_t start = pos;
    while (start > 0 && std::isdigit(static_cast<unsigned char>(system[start - 1]))) --start;
    if (start == pos) return 5;
    return std::stoul(system.substr(start, pos - start));
}

std::string last_user(const std::vector<ChatMessage>& messages) {
    for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
        if (it->role == "user") return it->content;
    }
    return {};
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

std::vector<std::string> content_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty() && !stopwords().contains(cur)) tokens.push_back(cur);
        cur.clear();
    };
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else if (c == '.' || c == '\'') {
            continue;  // U.S. and US hash alike
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

MockProvider::MockProvider(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ < 2) throw ConfigError("mock embedding dimension must be at least 2");
}

void MockProvider::script(std::vector<std::string> replies) {
    std::lock_guard lock(mutex_);
    for (auto& r : replies) scripted_.push_back(std::move(r));
}

void MockProvider::fail_next_completions(std::size_t count) {
    std::lock_guard lock(mutex_);
    failing_completions_ += count;
}

void MockProvider::fail_next_embeddings(std::size_t count) {
    std::lock_guard lock(mutex_);
    failing_embeddings_ += count;
}

void MockProvider::set_embedding(const std::string& text, Embedding vector) {
    std::lock_guard lock(mutex_);
    fixed_[text] = std::move(vector);
}

std::size_t MockProvider::completion_calls() const {
    std::lock_guard lock(mutex_);
    return completion_calls_;
}

std::size_t MockProvider::embedding_calls() const {
    std::lock_guard lock(mutex_);
    return embedding_calls_;
}

std::vector<std::vector<ChatMessage>> MockProvider::completion_log() const {
    std::lock_guard lock(mutex_);
    return log_;
}

std::string MockProvider::complete(const std::vector<ChatMessage>& messages) {
    {
        std::lock_guard lock(mutex_);
        ++completion_calls_;
        log_.push_back(messages);
        if (failing_completions_ > 0) {
            --failing_completions_;
            throw ProviderError("injected completion failure");
        }
        if (!scripted_.empty()) {
            std::string reply = std::move(scripted_.front());
            scripted_.pop_front();
            return reply;
        }
    }
    return respond(messages);
}

Embedding MockProvider::embed(const std::string& text) {
    {
        std::lock_guard lock(mutex_);
        ++embedding_calls_;
        if (failing_embeddings_ > 0) {
            --failing_embeddings_;
            throw ProviderError("injected embedding failure");
        }
        if (auto it = fixed_.find(text); it != fixed_.end()) return it->second;
    }
    Embedding v(dimension_, 0.0);
    v.back() = 1.0;
    for (const auto& token : content_tokens(text)) {
        const std::uint64_t h = fnv1a(token);
        const std::size_t slot = static_cast<std::size_t>(h % (dimension_ - 1));
        v[slot] += (h >> 63) != 0 ? -1.0 : 1.0;
    }
    return v;
}

std::string MockProvider::respond(const std::vector<ChatMessage>& messages) const {
    const PromptTemplate* t = identify_prompt(messages);
    const std::string user = last_user(messages);
    if (t == nullptr) {
        std::size_t context = 0;
        for (const auto& m : messages) context += m.name == "context" ? 1 : 0;
        return "I received " + std::to_string(context) + " context documents. You asked: " + user;
    }
    const bool news = t->domain == Domain::news;
    switch (t->id) {
        case PromptId::summarize: {
            auto parts = sentences(user);
            std::string body;
            for (std::size_t i = 0; i < parts.size() && i < 2; ++i) body += (i ? " " : "") + parts[i];
            const std::string opener = body.substr(0, body.find(' '));
            if (weak_capitals().contains(opener)) {
                body[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(body[0])));
            }
            return (news ? "The article discussed " : "The paper discussed ") + body;
        }
        case PromptId::extract_event: {
            std::string text = after(after(user, "This is the news article:"), "This is the paper:");
            text = after(after(trim(text), "The article discussed "), "The paper discussed ");
            const auto cut = text.find_first_of(",.;");
            std::istringstream words(text.substr(0, cut));
            std::string w;
            std::string event;
            std::string longest;
            for (int i = 0; i < 8 && words >> w; ++i) {
                event += (event.empty() ? "" : " ") + w;
                if (w.size() > longest.size()) longest = w;
            }
            if (event.empty()) return "no event";
            std::transform(longest.begin(), longest.end(), longest.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            return "[" + event + " - " + longest + "]";
        }
        case PromptId::extract_keywords: {
            std::string summary = after(user, "Article: ");
            summary = summary.substr(0, summary.rfind(" Event: "));
            auto phrases = capitalized_phrases(summary);
            if (phrases.empty()) {
                auto top = top_tokens(summary, 1);
                if (!top.empty()) phrases.push_back(title_case(top[0]));
            }
            const std::size_t limit = requested_limit(messages.front().content);
            std::string reply;
            for (std::size_t i = 0; i < phrases.size() && i < limit; ++i) {
                reply += (i ? ", [" : "[") + phrases[i] + "]";
            }
            return reply;
        }
        case PromptId::keyword_explanation: {
            std::string keyword = after(user, "What is ");
            if (!keyword.empty() && keyword.back() == '?') keyword.pop_back();
            return "About " + keyword + ": " + keyword + ".";
        }
        case PromptId::keyword_unify: {
            std::string list = user;
            if (list.size() >= 2 && list.front() == '[' && list.back() == ']') list = list.substr(1, list.size() - 2);
            auto items = split_list(list);
            return "[" + (items.empty() ? list : items.front()) + "]";
        }
        case PromptId::label_bottom:
        case PromptId::label_intermediate:
            return label_from(user);
        case PromptId::label_keywords: {
            auto items = split_list(after(after(user, "Entities: "), "Keywords: "));
            std::string reply;
            for (std::size_t i = 0; i < items.size() && i < 3; ++i) reply += (i ? ", " : "") + items[i];
            return reply.empty() ? "Keywords" : reply;
        }
    }
    return {};
}

}  // namespace hints
