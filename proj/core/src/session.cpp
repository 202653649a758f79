#include "hints/session.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "hints/clustering.hpp"
#include "hints/error.hpp"
#include "hints/labeling.hpp"
#include "hints/mock_provider.hpp"
#include "hints/pipeline.hpp"
#include "hints/svg.hpp"

namespace hints {

namespace {

using nlohmann::json;

const char* curve_name(CurveKind kind) {
    switch (kind) {
        case CurveKind::gosper: return "gosper";
        case CurveKind::gilbert: return "gilbert";
        case CurveKind::gilbert_ring: return "gilbert_ring";
    }
    return "gosper";
}

json point_json(Point p) { return json::array({p.x, p.y}); }

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string require_string(const json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_string()) {
        throw InputError(std::string("action field '") + field + "' must be a string", {{"path", field}});
    }
    return j.at(field).get<std::string>();
}

enum class Side { documents, keywords };

Side parse_side(const json& action) {
    if (!action.contains("side")) return Side::documents;
    const json& s = action.at("side");
    if (s == "documents") return Side::documents;
    if (s == "keywords") return Side::keywords;
    throw InputError("side must be 'documents' or 'keywords'", {{"path", "side"}});
}

PartitionSequence labeled_documents(const Artifact& a, const Hypergraph& hd, Pipeline& pipeline) {
    std::vector<Embedding> vectors;
    std::vector<std::string> summaries;
    for (const auto& id : hd.nodes()) {
        const Document* d = a.find_document(id);
        vectors.push_back(d->embedding);
        summaries.push_back(d->summary);
    }
    PartitionSequence p = agglomerate(hd, vectors, ClusteringParams{a.alpha});
    p.labels() = generate_topic_labels(p, summaries, pipeline);
    return p;
}

PartitionSequence labeled_keywords(const Artifact& a, const Hypergraph& hk, Pipeline& pipeline) {
    PartitionSequence p = agglomerate(hk, a.keyword_embeddings(hk), ClusteringParams{a.alpha});
    std::vector<std::string> titles;
    for (const auto& id : hk.nodes()) titles.push_back(a.find_keyword(id)->display_title);
    p.labels() = generate_keyword_labels(p, titles, pipeline);
    return p;
}

}  // namespace

ChatMode parse_chat_mode(const std::string& text) {
    if (text == "summary") return ChatMode::summary;
    if (text == "full") return ChatMode::full;
    throw InputError("chat mode must be 'summary' or 'full'", {{"path", "mode"}});
}

Scene build_scene(const Artifact& artifact, const PartitionSequence& documents,
                  const std::optional<PartitionSequence>& keywords, const LayoutConfig& config) {
    Scene scene;
    RingSize ring{};
    if (keywords) {
        std::vector<std::string> titles;
        for (const auto& id : keywords->nodes()) {
            const KeywordEntity* k = artifact.find_keyword(id);
            if (k == nullptr) throw StructuralError("keyword partition names an unknown keyword", {{"keyword", id}});
            titles.push_back(k->display_title);
        }
        scene.keywords.emplace(*keywords, CurveKind::gilbert_ring, std::move(titles), config);
        ring = scene.keywords->ring();
    }
    std::vector<std::string> titles;
    for (const auto& id : documents.nodes()) {
        const Document* d = artifact.find_document(id);
        if (d == nullptr) throw StructuralError("document partition names an unknown document", {{"document", id}});
        titles.push_back(d->title);
    }
    scene.documents.emplace(documents, CurveKind::gosper, std::move(titles), config,
                            ring_interior(ring, config.center_gap));
    return scene;
}

json to_json(const SideView& view) {
    json nodes = json::array();
    for (std::size_t i = 0; i < view.nodes.size(); ++i) {
        nodes.push_back({{"id", view.nodes[i]},
                         {"slot", view.state.node_slot[i]},
                         {"position", point_json(view.positions[i])}});
    }
    json clusters = json::array();
    for (const auto& c : view.clusters) {
        json members = json::array();
        for (std::size_t m : c.members) members.push_back(view.nodes[m]);
        json polygon = json::array();
        for (const auto& p : c.polygon) polygon.push_back(point_json(p));
        json entry = {{"id", c.id},
                      {"label", c.label},
                      {"expanded", c.expanded},
                      {"members", std::move(members)},
                      {"polygon", std::move(polygon)},
                      {"border", svg_path_data(c.border, 1000.0)},
                      {"centroid", point_json(c.centroid)},
                      {"anchor", point_json(c.anchor)}};
        if (auto it = view.state.extents.find(c.id); it != view.state.extents.end()) {
            entry["slots"] = {{"begin", it->second.begin}, {"extent", it->second.extent}};
        }
        clusters.push_back(std::move(entry));
    }
    return {{"curve", curve_name(view.kind)},
            {"curve_length", view.state.curve_length},
            {"node_radius", view.node_radius},
            {"expanded", view.state.expanded},
            {"nodes", std::move(nodes)},
            {"clusters", std::move(clusters)}};
}

std::vector<KeywordSpan> keyword_spans(const std::string& text, const std::vector<const KeywordEntity*>& keywords) {
    const std::string hay = lower(text);
    std::vector<KeywordSpan> found;
    for (const KeywordEntity* k : keywords) {
        std::vector<std::string> forms = k->surface_forms;
        forms.push_back(k->display_title);
        for (const auto& form : forms) {
            if (form.empty()) continue;
            const std::string needle = lower(form);
            for (std::size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
                const std::size_t end = pos + needle.size();
                if (pos > 0 && word_char(hay[pos - 1]) && word_char(hay[pos])) continue;
                if (end < hay.size() && word_char(hay[end]) && word_char(hay[end - 1])) continue;
                found.push_back({pos, end, k->id});
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const KeywordSpan& a, const KeywordSpan& b) {
        if (a.start != b.start) return a.start < b.start;
        if (a.end != b.end) return a.end > b.end;
        return a.keyword < b.keyword;
    });
    std::vector<KeywordSpan> out;
    for (auto& s : found) {
        if (!out.empty() && s.start < out.back().end) continue;
        out.push_back(std::move(s));
    }
    return out;
}

Session::Session(std::string id, std::shared_ptr<const Artifact> artifact, std::shared_ptr<LlmProvider> provider,
                 ServiceConfig config)
    : id_(std::move(id)), artifact_(std::move(artifact)), provider_(std::move(provider)), config_(std::move(config)) {
    if (!artifact_ || !artifact_->document_partitions) {
        throw InputError("session needs a clustered artifact", {{"path", "document_partitions"}});
    }
    if (!provider_) provider_ = std::make_shared<MockProvider>(std::max<std::size_t>(artifact_->embedding_dim, 1));
    initial_scene_ = std::make_shared<const Scene>(
        build_scene(*artifact_, *artifact_->document_partitions, artifact_->keyword_partitions, config_.layout));
    initial_documents_ = initial_scene_->documents->initial_expansion();
    if (initial_scene_->keywords) initial_keywords_ = initial_scene_->keywords->initial_expansion();
    state_.scene = initial_scene_;
    state_.expanded_documents = initial_documents_;
    state_.expanded_keywords = initial_keywords_;
}

std::vector<const Document*> Session::live_documents(const State& state) const {
    std::vector<const Document*> out;
    for (const auto& id : state.scene->documents->partitions().nodes()) out.push_back(artifact_->find_document(id));
    return out;
}

void Session::rerank(State& state) const {
    if (!state.search) return;
    const auto docs = live_documents(state);
    state.search->result = rank_by_vector(state.search->vector, docs, state.search->threshold);
}

json Session::view() const {
    std::lock_guard lock(mutex_);
    return render(state_);
}

json Session::render(const State& state) const {
    json out;
    out["session"] = id_;
    out["filter"] = state.filter ? json(*state.filter) : json(nullptr);
    out["documents"] = to_json(state.scene->documents->view(state.expanded_documents));
    out["keywords"] =
        state.scene->keywords ? to_json(state.scene->keywords->view(state.expanded_keywords)) : json(nullptr);
    if (state.search) {
        json ranked = json::array();
        for (const auto& r : state.search->result.ranked) {
            ranked.push_back({{"doc_id", r.doc_id}, {"score", r.score}, {"rank", r.rank}});
        }
        std::set<std::string> live_keywords;
        if (state.scene->keywords) {
            const auto& nodes = state.scene->keywords->partitions().nodes();
            for (const auto& k : state.search->result.highlighted_keywords) {
                if (std::find(nodes.begin(), nodes.end(), k) != nodes.end()) live_keywords.insert(k);
            }
        }
        out["search"] = {{"query", state.search->query},
                         {"threshold", state.search->threshold},
                         {"ranked", std::move(ranked)},
                         {"highlighted_documents", state.search->result.highlighted},
                         {"highlighted_keywords", live_keywords}};
    } else {
        out["search"] = nullptr;
    }
    if (state.selection) {
        json docs = json::array();
        for (const auto& id : state.selection->documents) {
            const Document* d = artifact_->find_document(id);
            std::vector<const KeywordEntity*> mentioned;
            json kws = json::array();
            for (const auto& k : d->mentioned_keywords) {
                if (const KeywordEntity* e = artifact_->find_keyword(k)) {
                    mentioned.push_back(e);
                    kws.push_back({{"id", e->id}, {"title", e->display_title}});
                }
            }
            json spans = json::array();
            for (const auto& s : keyword_spans(d->summary, mentioned)) {
                spans.push_back({{"start", s.start}, {"end", s.end}, {"keyword", s.keyword}});
            }
            docs.push_back({{"id", d->id},
                            {"title", d->title},
                            {"date", d->date ? json(*d->date) : json(nullptr)},
                            {"summary", d->summary},
                            {"event", d->event},
                            {"keywords", std::move(kws)},
                            {"summary_spans", std::move(spans)}});
        }
        out["selection"] = {{"target", state.selection->target},
                            {"documents", std::move(docs)},
                            {"keywords", state.selection->keywords}};
    } else {
        out["selection"] = nullptr;
    }
    json chat = json::array();
    for (const auto& m : history_) chat.push_back({{"role", m.role}, {"content", m.content}});
    out["chat"] = std::move(chat);
    return out;
}

std::shared_ptr<const Scene> Session::filtered_scene(const std::vector<std::string>& keep) {
    PipelineConfig pc;
    pc.domain = artifact_->domain;
    pc.token_budget = config_.label_token_budget;
    pc.alpha = artifact_->alpha;
    pc.backoff = std::chrono::milliseconds(10);
    Pipeline pipeline(*provider_, pc);

    const Hypergraph hd = sub_hypergraph(artifact_->document_hypergraph(), keep);
    PartitionSequence docs = labeled_documents(*artifact_, hd, pipeline);
    std::optional<PartitionSequence> kws;
    const Hypergraph hk = dualize(hd);
    if (hk.node_count() > 0) kws = labeled_keywords(*artifact_, hk, pipeline);
    for (const auto& w : pipeline.report().warnings) spdlog::warn("session {}: {}", id_, w);
    return std::make_shared<const Scene>(build_scene(*artifact_, docs, kws, config_.layout));
}

Session::State Session::apply_locked(const State& current, const json& action) {
    if (!action.is_object()) throw InputError("action must be an object", {{"path", "action"}});
    const std::string type = require_string(action, "type");
    State next = current;

    if (type == "expand" || type == "collapse") {
        const Side side = parse_side(action);
        const std::string cluster = require_string(action, "cluster");
        if (side == Side::keywords && !next.scene->keywords) {
            throw NotFoundError("this view has no keyword side", {{"cluster", cluster}});
        }
        const SideLayout& layout = side == Side::documents ? *next.scene->documents : *next.scene->keywords;
        auto& expanded = side == Side::documents ? next.expanded_documents : next.expanded_keywords;
        const LayoutState state = assign_slots(layout.tree(), expanded, layout.curve_length());
        const LayoutState changed = type == "expand" ? expand_cluster(state, cluster, layout.tree())
                                                     : collapse_cluster(state, cluster, layout.tree());
        expanded = changed.expanded;
    } else if (type == "filter") {
        if (action.contains("side") && parse_side(action) == Side::keywords) {
            throw InputError("filtering is only defined on documents", {{"path", "side"}});
        }
        if (!action.contains("doc_ids") || !action.at("doc_ids").is_array()) {
            throw InputError("filter needs a 'doc_ids' array", {{"path", "doc_ids"}});
        }
        std::vector<std::string> ids;
        std::unordered_set<std::string> seen;
        for (std::size_t i = 0; i < action.at("doc_ids").size(); ++i) {
            const json& v = action.at("doc_ids")[i];
            if (!v.is_string()) {
                throw InputError("document ids must be strings", {{"path", "doc_ids[" + std::to_string(i) + "]"}});
            }
            const std::string id = v.get<std::string>();
            if (artifact_->find_document(id) == nullptr) throw NotFoundError("unknown document", {{"doc_id", id}});
            if (seen.insert(id).second) ids.push_back(id);
        }
        if (ids.empty()) throw InputError("filter needs at least one document", {{"path", "doc_ids"}});
        std::vector<std::string> ordered;
        for (const auto& d : artifact_->documents) {
            if (seen.contains(d.id)) ordered.push_back(d.id);
        }
        next.filter = ordered;
        next.scene = filtered_scene(ordered);
        next.expanded_documents = next.scene->documents->initial_expansion();
        next.expanded_keywords.clear();
        if (next.scene->keywords) next.expanded_keywords = next.scene->keywords->initial_expansion();
        next.selection.reset();
        rerank(next);
    } else if (type == "clear_filter") {
        next.filter.reset();
        next.scene = initial_scene_;
        next.expanded_documents = initial_documents_;
        next.expanded_keywords = initial_keywords_;
        next.selection.reset();
        rerank(next);
    } else if (type == "search") {
        const std::string query = require_string(action, "query");
        double threshold = default_relevancy_threshold;
        if (action.contains("threshold")) {
            if (!action.at("threshold").is_number()) {
                throw InputError("threshold must be a number", {{"path", "threshold"}});
            }
            threshold = action.at("threshold").get<double>();
        }
        if (std::all_of(query.begin(), query.end(), [](unsigned char c) { return std::isspace(c); })) {
            throw InputError("search query is empty", {{"path", "query"}});
        }
        if (!(threshold >= -1.0 && threshold <= 1.0)) {
            throw InputError("relevancy threshold must lie in [-1, 1]", {{"path", "threshold"}});
        }
        SearchState s;
        s.query = query;
        s.threshold = threshold;
        s.vector = provider_->embed(query);
        next.search = std::move(s);
        rerank(next);
    } else if (type == "clear_search") {
        next.search.reset();
    } else if (type == "select") {
        Selection sel;
        std::set<std::string> docs;
        std::set<std::string> keywords;
        const auto live = live_documents(next);
        if (action.contains("keyword")) {
            const std::string k = require_string(action, "keyword");
            const bool present = next.scene->keywords &&
                                 next.scene->keywords->tree().find(k).has_value() &&
                                 next.scene->keywords->tree().is_leaf(*next.scene->keywords->tree().find(k));
            if (!present) throw NotFoundError("keyword is not in the current view", {{"keyword", k}});
            keywords.insert(k);
            sel.target = {{"keyword", k}};
        } else {
            const Side side = parse_side(action);
            const std::string cluster = require_string(action, "cluster");
            if (side == Side::keywords && !next.scene->keywords) {
                throw NotFoundError("this view has no keyword side", {{"cluster", cluster}});
            }
            const SideLayout& layout = side == Side::documents ? *next.scene->documents : *next.scene->keywords;
            const auto e = layout.tree().find(cluster);
            if (!e) throw NotFoundError("unknown cluster", {{"cluster", cluster}});
            const auto& nodes = layout.partitions().nodes();
            for (std::size_t m : layout.tree().members(*e)) {
                (side == Side::documents ? docs : keywords).insert(nodes[m]);
            }
            sel.target = {{"side", side == Side::documents ? "documents" : "keywords"}, {"cluster", cluster}};
        }
        if (!keywords.empty()) {
            for (const Document* d : live) {
                for (const auto& k : d->mentioned_keywords) {
                    if (keywords.contains(k)) {
                        docs.insert(d->id);
                        break;
                    }
                }
            }
        } else {
            for (const Document* d : live) {
                if (!docs.contains(d->id)) continue;
                keywords.insert(d->mentioned_keywords.begin(), d->mentioned_keywords.end());
            }
        }
        for (const Document* d : live) {
            if (docs.contains(d->id)) sel.documents.push_back(d->id);
        }
        sel.keywords.assign(keywords.begin(), keywords.end());
        next.selection = std::move(sel);
    } else if (type == "clear_selection") {
        next.selection.reset();
    } else {
        throw InputError("unknown action type", {{"path", "type"}, {"type", type}});
    }
    return next;
}

json Session::apply(const json& action) {
    std::lock_guard lock(mutex_);
    State next = apply_locked(state_, action);
    json out = render(next);
    state_ = std::move(next);
    actions_.push_back(action);
    return out;
}

std::vector<ChatMessage> Session::assemble_chat_prompt(const std::string& question,
                                                       const std::vector<std::string>& doc_ids, ChatMode mode) const {
    std::lock_guard lock(mutex_);
    return assemble_locked(question, doc_ids, mode);
}

std::vector<ChatMessage> Session::assemble_locked(const std::string& question, const std::vector<std::string>& doc_ids,
                                                  ChatMode mode) const {
    if (std::all_of(question.begin(), question.end(), [](unsigned char c) { return std::isspace(c); })) {
        throw InputError("question is empty", {{"path", "question"}});
    }
    std::vector<ChatMessage> head{{"system", config_.chat_system_message, ""}};
    std::vector<const Document*> docs;
    for (const auto& id : doc_ids) {
        const Document* d = artifact_->find_document(id);
        if (d == nullptr) throw NotFoundError("unknown document", {{"doc_id", id}});
        docs.push_back(d);
    }
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const std::string& text = mode == ChatMode::full ? docs[i]->content : docs[i]->summary;
        head.push_back({"system", "Article " + std::to_string(i + 1) + " (id " + docs[i]->id + "): " + text, "context"});
    }
    const ChatMessage ask{"user", question, ""};

    const std::size_t budget = config_.chat_token_budget;
    const std::size_t fixed = provider_->token_count(head) + provider_->token_count(std::vector<ChatMessage>{ask});
    if (fixed > budget) {
        json offending = json::array();
        for (std::size_t i = 0; i < docs.size(); ++i) {
            offending.push_back({{"doc_id", docs[i]->id},
                                 {"tokens", provider_->token_count(std::vector<ChatMessage>{head[i + 1]})}});
        }
        throw OverBudgetError("selected documents do not fit the chat budget",
                              {{"budget", budget}, {"required", fixed}, {"documents", std::move(offending)}});
    }
    // Drop whole question/answer pairs, oldest first, until the rest fits.
    std::size_t first = 0;
    auto history_tokens = [&](std::size_t from) {
        return provider_->token_count(std::vector<ChatMessage>(history_.begin() + static_cast<std::ptrdiff_t>(from),
                                                               history_.end()));
    };
    while (first < history_.size() && fixed + history_tokens(first) > budget) first += 2;
    first = std::min(first, history_.size());

    std::vector<ChatMessage> out = std::move(head);
    out.insert(out.end(), history_.begin() + static_cast<std::ptrdiff_t>(first), history_.end());
    out.push_back(ask);
    return out;
}

std::string Session::chat_respond(const std::string& question, const std::vector<ChatMessage>& prompt) {
    std::lock_guard lock(mutex_);
    std::string answer = provider_->complete(prompt);
    history_.push_back({"user", question, ""});
    history_.push_back({"assistant", answer, ""});
    return answer;
}

json Session::chat(const std::string& question, const std::vector<std::string>& doc_ids, ChatMode mode) {
    std::lock_guard lock(mutex_);
    const auto prompt = assemble_locked(question, doc_ids, mode);
    std::string answer = provider_->complete(prompt);
    history_.push_back({"user", question, ""});
    history_.push_back({"assistant", answer, ""});
    json hist = json::array();
    for (const auto& m : history_) hist.push_back({{"role", m.role}, {"content", m.content}});
    return {{"answer", answer}, {"history", std::move(hist)}, {"context_messages", prompt.size()}};
}

std::vector<ChatMessage> Session::history() const {
    std::lock_guard lock(mutex_);
    return history_;
}

json Session::snapshot() const {
    std::lock_guard lock(mutex_);
    json hist = json::array();
    for (const auto& m : history_) hist.push_back({{"role", m.role}, {"content", m.content}});
    return {{"format", "hints-session/1"}, {"session", id_}, {"actions", actions_}, {"history", std::move(hist)}};
}

void Session::restore(const json& snapshot) {
    if (!snapshot.is_object() || snapshot.value("format", "") != "hints-session/1") {
        throw InputError("not a session snapshot", {{"path", "snapshot.format"}});
    }
    if (!snapshot.contains("actions") || !snapshot.at("actions").is_array()) {
        throw InputError("snapshot actions must be an array", {{"path", "snapshot.actions"}});
    }
    if (!snapshot.contains("history") || !snapshot.at("history").is_array() || snapshot.at("history").size() % 2 != 0) {
        throw InputError("snapshot history must hold question and answer pairs", {{"path", "snapshot.history"}});
    }
    std::vector<ChatMessage> history;
    const json& hist = snapshot.at("history");
    for (std::size_t i = 0; i < hist.size(); ++i) {
        const char* role = i % 2 == 0 ? "user" : "assistant";
        const json& m = hist[i];
        if (!m.is_object() || m.value("role", "") != role || !m.contains("content") || !m.at("content").is_string()) {
            throw InputError("malformed history entry", {{"path", "snapshot.history[" + std::to_string(i) + "]"}});
        }
        history.push_back({role, m.at("content").get<std::string>(), ""});
    }
    std::lock_guard lock(mutex_);
    if (!actions_.empty() || !history_.empty()) throw InputError("session has already changed", {{"session", id_}});
    State state = state_;
    const json& actions = snapshot.at("actions");
    for (std::size_t i = 0; i < actions.size(); ++i) {
        try {
            state = apply_locked(state, actions[i]);
        } catch (const ProviderError&) {
            throw;
        } catch (const Error& e) {
            throw InputError("snapshot action " + std::to_string(i) + " failed: " + e.what(),
                             {{"path", "snapshot.actions[" + std::to_string(i) + "]"}, {"cause", e.detail()}});
        }
    }
    state_ = std::move(state);
    actions_ = actions.get<std::vector<json>>();
    history_ = std::move(history);
}

}  // namespace hints
