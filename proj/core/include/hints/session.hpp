#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hints/artifact.hpp"
#include "hints/provider.hpp"
#include "hints/search.hpp"
#include "hints/view.hpp"

namespace hints {

struct ServiceConfig {
    LayoutConfig layout;
    std::size_t label_token_budget = 3000;
    std::size_t chat_token_budget = 12000;
    std::string chat_system_message =
        "You are an assistant helping a user make sense of a document collection. Answer the user's questions, "
        "relying on the provided articles when there are any.";
    /// When set, the service rewrites <dir>/<session>.json after every change.
    std::string snapshot_dir;
};

enum class ChatMode { summary, full };
ChatMode parse_chat_mode(const std::string& text);

/// Both regions of one view: the document curve in the middle and, when the
/// corpus has keywords, the keyword ring around it.
struct Scene {
    std::optional<SideLayout> documents;
    std::optional<SideLayout> keywords;
};

Scene build_scene(const Artifact& artifact, const PartitionSequence& documents,
                  const std::optional<PartitionSequence>& keywords, const LayoutConfig& config);

nlohmann::json to_json(const SideView& view);

/// Character ranges of keyword surface forms inside `text`, case-insensitive,
/// non-overlapping, earliest and then longest match first.
struct KeywordSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string keyword;
};
std::vector<KeywordSpan> keyword_spans(const std::string& text, const std::vector<const KeywordEntity*>& keywords);

/// Interactive state over one artifact. Every public call is serialized on
/// the session's own mutex.
class Session {
public:
    Session(std::string id, std::shared_ptr<const Artifact> artifact, std::shared_ptr<LlmProvider> provider,
            ServiceConfig config);

    const std::string& id() const noexcept { return id_; }
    const Artifact& artifact() const noexcept { return *artifact_; }

    nlohmann::json view() const;
    /// Applies one action object and returns the new view. Throws InputError,
    /// NotFoundError or ProviderError; the state is unchanged on failure.
    nlohmann::json apply(const nlohmann::json& action);

    std::vector<ChatMessage> assemble_chat_prompt(const std::string& question, const std::vector<std::string>& doc_ids,
                                                  ChatMode mode) const;
    /// Sends an assembled prompt; on success the question and answer join the history.
    std::string chat_respond(const std::string& question, const std::vector<ChatMessage>& prompt);
    nlohmann::json chat(const std::string& question, const std::vector<std::string>& doc_ids, ChatMode mode);

    std::vector<ChatMessage> history() const;

    /// The applied actions and chat history; replaying them with restore()
    /// on a fresh session over the same artifact rebuilds this session.
    nlohmann::json snapshot() const;
    /// Only valid on a session that has not changed since construction.
    void restore(const nlohmann::json& snapshot);

private:
    struct SearchState {
        std::string query;
        double threshold = default_relevancy_threshold;
        Embedding vector;
        SearchResult result;
    };
    struct Selection {
        nlohmann::json target;
        std::vector<std::string> documents;
        std::vector<std::string> keywords;
    };
    struct State {
        std::optional<std::vector<std::string>> filter;
        std::shared_ptr<const Scene> scene;
        std::set<std::string> expanded_documents;
        std::set<std::string> expanded_keywords;
        std::optional<SearchState> search;
        std::optional<Selection> selection;
    };

    nlohmann::json render(const State& state) const;
    std::vector<const Document*> live_documents(const State& state) const;
    void rerank(State& state) const;
    State apply_locked(const State& state, const nlohmann::json& action);
    std::shared_ptr<const Scene> filtered_scene(const std::vector<std::string>& keep);
    std::vector<ChatMessage> assemble_locked(const std::string& question, const std::vector<std::string>& doc_ids,
                                             ChatMode mode) const;

    std::string id_;
    std::shared_ptr<const Artifact> artifact_;
    std::shared_ptr<LlmProvider> provider_;
    ServiceConfig config_;
    std::shared_ptr<const Scene> initial_scene_;
    std::set<std::string> initial_documents_;
    std::set<std::string> initial_keywords_;
    State state_;
    std::vector<ChatMessage> history_;
    std::vector<nlohmann::json> actions_;
    mutable std::mutex mutex_;
};

}  // namespace hints
