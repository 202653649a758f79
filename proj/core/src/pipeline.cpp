#include "hints/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <regex>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

#include "hints/clustering.hpp"
#include "hints/error.hpp"
#include "hints/parallel.hpp"

namespace hints {

namespace {

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

void PipelineConfig::validate() const {
    if (!(disambiguation_threshold > 0.0 && disambiguation_threshold < 1.0)) {
        throw ConfigError("disambiguation threshold must lie in (0, 1)", {{"field", "disambiguation_threshold"}});
    }
    if (token_budget == 0) throw ConfigError("token budget must be positive", {{"field", "token_budget"}});
    if (max_keywords_per_doc == 0) {
        throw ConfigError("max keywords per document must be positive", {{"field", "max_keywords_per_doc"}});
    }
    if (retry_limit < 0 || retry_limit > 10) throw ConfigError("retry limit must lie in [0, 10]", {{"field", "retry_limit"}});
    if (backoff.count() < 0) throw ConfigError("backoff must not be negative", {{"field", "backoff"}});
    if (requests_per_second < 0.0) {
        throw ConfigError("request rate must not be negative", {{"field", "requests_per_second"}});
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]", {{"field", "alpha"}});
}

nlohmann::json PipelineReport::to_json() const {
    auto sorted = warnings;
    std::sort(sorted.begin(), sorted.end());
    return {{"retries", retries}, {"warnings", sorted}, {"dropped_keywords", dropped_keywords}};
}

std::optional<EventExtraction> parse_event(const std::string& reply) {
    const auto open = reply.find('[');
    const auto close = reply.rfind(']');
    if (open == std::string::npos || close == std::string::npos || close <= open) return std::nullopt;
    const std::string inner = reply.substr(open + 1, close - open - 1);
    std::size_t best = std::string::npos;
    std::size_t width = 0;
    for (const std::string sep : {" - ", " -- ", " – ", " — "}) {
        const auto pos = inner.rfind(sep);
        if (pos != std::string::npos && (best == std::string::npos || pos > best)) {
            best = pos;
            width = sep.size();
        }
    }
    if (best == std::string::npos) return std::nullopt;
    EventExtraction out{trim(inner.substr(0, best)), trim(inner.substr(best + width))};
    if (out.event.empty() || out.trigger.empty()) return std::nullopt;
    return out;
}

std::vector<std::string> parse_keywords(const std::string& reply, std::size_t limit) {
    static const std::regex bracketed(R"(\[([^\[\]]*)\])");
    std::vector<std::string> out;
    for (auto it = std::sregex_iterator(reply.begin(), reply.end(), bracketed); it != std::sregex_iterator(); ++it) {
        std::string item = trim((*it)[1].str());
        if (item.empty() || std::find(out.begin(), out.end(), item) != out.end()) continue;
        out.push_back(std::move(item));
        if (out.size() == limit) break;
    }
    return out;
}

Pipeline::Pipeline(LlmProvider& provider, PipelineConfig config) : provider_(provider), config_(std::move(config)) {
    config_.validate();
    dimension_ = provider_.dimension();
}

PipelineReport Pipeline::report() const {
    std::lock_guard lock(mutex_);
    return report_;
}

void Pipeline::warn(std::string message) {
    spdlog::warn("{}", message);
    std::lock_guard lock(mutex_);
    report_.warnings.push_back(std::move(message));
}

void Pipeline::throttle() {
    if (config_.requests_per_second <= 0.0) return;
    const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / config_.requests_per_second));
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard lock(mutex_);
        const auto now = std::chrono::steady_clock::now();
        slot = std::max(now, next_slot_);
        next_slot_ = slot + interval;
    }
    std::this_thread::sleep_until(slot);
}

void Pipeline::check_dimension(std::size_t dim) {
    std::lock_guard lock(mutex_);
    if (!dimension_) dimension_ = dim;
    if (*dimension_ != dim) {
        throw ConfigError("provider returned an embedding of dimension " + std::to_string(dim) + ", expected " +
                              std::to_string(*dimension_),
                          {{"expected", *dimension_}, {"actual", dim}});
    }
}

std::string Pipeline::complete(const std::vector<ChatMessage>& messages,
                               const std::function<bool(const std::string&)>& accept, const std::string& what) {
    auto delay = config_.backoff;
    std::string last_problem;
    for (int attempt = 0; attempt <= config_.retry_limit; ++attempt) {
        if (attempt > 0) {
            {
                std::lock_guard lock(mutex_);
                ++report_.retries;
            }
            spdlog::info("retrying {} (attempt {}): {}", what, attempt + 1, last_problem);
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
        throttle();
        try {
            std::string reply = trim(provider_.complete(messages));
            if (reply.empty()) {
                last_problem = "empty completion";
            } else if (accept && !accept(reply)) {
                last_problem = "unusable completion";
            } else {
                return reply;
            }
        } catch (const ProviderError& e) {
            last_problem = e.what();
        }
    }
    throw PipelineError(what + " failed after " + std::to_string(config_.retry_limit + 1) + " attempts: " +
                            last_problem,
                        {{"stage", what}});
}

Embedding Pipeline::embed_normalized(const std::string& text, const std::string& what) {
    auto delay = config_.backoff;
    std::string last_problem;
    for (int attempt = 0; attempt <= config_.retry_limit; ++attempt) {
        if (attempt > 0) {
            {
                std::lock_guard lock(mutex_);
                ++report_.retries;
            }
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
        throttle();
        try {
            Embedding raw = provider_.embed(text);
            check_dimension(raw.size());
            return normalized(raw);
        } catch (const ProviderError& e) {
            last_problem = e.what();
        }
    }
    throw PipelineError(what + " embedding failed: " + last_problem, {{"stage", what}});
}

std::string Pipeline::summarize_document(const Document& doc) {
    if (trim(doc.content).empty()) throw InputError("document has no content", {{"document", doc.id}});
    const auto messages = render(prompt_template(PromptId::summarize, config_.domain), {{"content", doc.content}});
    try {
        return complete(messages, nullptr, "summary of " + doc.id);
    } catch (PipelineError& e) {
        throw PipelineError(e.what(), {{"stage", "summarize"}, {"document", doc.id}});
    }
}

EventExtraction Pipeline::extract_main_event(const std::string& summary) {
    if (trim(summary).empty()) throw InputError("event extraction needs a summary");
    const auto messages = render(prompt_template(PromptId::extract_event, config_.domain), {{"summary", summary}});
    const std::string reply =
        complete(messages, [](const std::string& r) { return parse_event(r).has_value(); }, "event extraction");
    return *parse_event(reply);
}

std::vector<std::string> Pipeline::extract_keywords(const std::string& summary, const std::string& event) {
    const auto messages = render(prompt_template(PromptId::extract_keywords, config_.domain),
                                 {{"summary", summary},
                                  {"event", "[" + event + "]"},
                                  {"max_keywords", std::to_string(config_.max_keywords_per_doc)}});
    const std::size_t limit = config_.max_keywords_per_doc;
    const std::string reply = complete(
        messages, [limit](const std::string& r) { return !parse_keywords(r, limit).empty(); }, "keyword extraction");
    return parse_keywords(reply, limit);
}

DisambiguationResult Pipeline::disambiguate_keywords(const std::vector<std::string>& surfaces) {
    if (surfaces.empty()) throw InputError("no keywords to disambiguate");
    const std::size_t n = surfaces.size();
    std::vector<std::string> explanations(n);
    std::vector<Embedding> vectors(n);
    std::vector<char> degraded(n, 0);
    const auto& tmpl = prompt_template(PromptId::keyword_explanation, config_.domain);
    parallel_for(n, config_.concurrency, [&](std::size_t i) {
        try {
            explanations[i] = complete(render(tmpl, {{"keyword", surfaces[i]}}), nullptr, "explanation");
        } catch (const PipelineError&) {
            warn("keyword '" + surfaces[i] + "' kept as its own entity: no explanation");
            explanations[i] = surfaces[i];
            degraded[i] = 1;
        }
        vectors[i] = embed_normalized(explanations[i], "keyword '" + surfaces[i] + "'");
    });

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (degraded[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (degraded[j]) continue;
            if (semantic_similarity(vectors[i], vectors[j]) >= config_.disambiguation_threshold) {
                const std::size_t a = find_root(parent, i);
                const std::size_t b = find_root(parent, j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }

    DisambiguationResult out;
    std::map<std::size_t, std::size_t> entity_of_root;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find_root(parent, i);
        auto [it, inserted] = entity_of_root.emplace(root, groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(i);
    }
    out.entities.resize(groups.size());
    const auto& unify = prompt_template(PromptId::keyword_unify, config_.domain);
    parallel_for(groups.size(), config_.concurrency, [&](std::size_t g) {
        const auto& members = groups[g];
        KeywordEntity& e = out.entities[g];
        e.id = "k" + std::to_string(g + 1);
        for (std::size_t m : members) e.surface_forms.push_back(surfaces[m]);
        e.explanation = explanations[members.front()];
        e.embedding = vectors[members.front()];
        e.display_title = surfaces[members.front()];
        if (members.size() > 1) {
            std::string list;
            for (std::size_t m : members) list += (list.empty() ? "" : ", ") + surfaces[m];
            try {
                const std::string reply = complete(
                    render(unify, {{"keywords", list}}),
                    [](const std::string& r) { return !parse_keywords(r, 1).empty(); }, "keyword unification");
                e.display_title = parse_keywords(reply, 1).front();
            } catch (const PipelineError&) {
                warn("keyword group '" + list + "' keeps its first surface as title");
            }
        }
    });
    for (const auto& e : out.entities) {
        for (const auto& s : e.surface_forms) out.entity_of[s] = e.id;
    }
    return out;
}

Embedding Pipeline::embed_document(const Document& doc) {
    if (doc.summary.empty()) throw InputError("document has no summary to embed", {{"document", doc.id}});
    return embed_normalized(doc.summary, "document " + doc.id);
}

Embedding Pipeline::embed_keyword(const KeywordEntity& entity) {
    if (entity.explanation.empty()) throw InputError("keyword has no explanation to embed", {{"keyword", entity.id}});
    return embed_normalized(entity.explanation, "keyword " + entity.id);
}

Pipeline::Output Pipeline::run(std::vector<Document> documents) {
    if (documents.empty()) throw InputError("corpus is empty");
    const std::size_t n = documents.size();
    std::vector<std::vector<std::string>> surfaces(n);

    parallel_for(n, config_.concurrency, [&](std::size_t i) {
        Document& doc = documents[i];
        doc.summary = summarize_document(doc);
        try {
            const auto ev = extract_main_event(doc.summary);
            doc.event = ev.event;
            doc.trigger = ev.trigger;
        } catch (const PipelineError&) {
            doc.flags.push_back("event");
            warn("document " + doc.id + ": no parseable event, keywords skipped");
            return;
        }
        try {
            surfaces[i] = extract_keywords(doc.summary, doc.event + " - " + doc.trigger);
        } catch (const PipelineError&) {
            doc.flags.push_back("keywords");
            warn("document " + doc.id + ": no parseable keywords");
        }
    });

    std::vector<std::string> distinct;
    std::set<std::string> seen;
    for (const auto& list : surfaces) {
        for (const auto& s : list) {
            if (seen.insert(s).second) distinct.push_back(s);
        }
    }

    Output out;
    DisambiguationResult entities;
    if (!distinct.empty()) entities = disambiguate_keywords(distinct);
    for (std::size_t i = 0; i < n; ++i) {
        auto& mentions = documents[i].mentioned_keywords;
        mentions.clear();
        for (const auto& s : surfaces[i]) {
            const std::string& id = entities.entity_of.at(s);
            if (std::find(mentions.begin(), mentions.end(), id) == mentions.end()) mentions.push_back(id);
        }
    }
    parallel_for(n, config_.concurrency, [&](std::size_t i) { documents[i].embedding = embed_document(documents[i]); });
    out.documents = std::move(documents);
    out.keywords = std::move(entities.entities);
    return out;
}

}  // namespace hints
