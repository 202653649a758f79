#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "hints/artifact.hpp"
#include "hints/error.hpp"
#include "hints/http_provider.hpp"
#include "hints/mock_provider.hpp"
#include "hints/search.hpp"
#include "hints/server.hpp"
#include "hints/session.hpp"
#include "hints/svg.hpp"

namespace {

struct ProviderOptions {
    bool mock = false;
    std::string base_url = "https://api.openai.com/v1";
    std::string chat_model = "gpt-3.5-turbo-16k";
    std::string embedding_model = "text-embedding-ada-002";
    std::size_t dimension = 0;
};

void add_provider_options(CLI::App* cmd, ProviderOptions& o, const std::string& mock_flag) {
    cmd->add_flag(mock_flag, o.mock, "Use the offline mock provider");
    cmd->add_option("--base-url", o.base_url, "Chat/embedding endpoint root")->capture_default_str();
    cmd->add_option("--chat-model", o.chat_model)->capture_default_str();
    cmd->add_option("--embedding-model", o.embedding_model)->capture_default_str();
}

std::shared_ptr<hints::LlmProvider> make_provider(const ProviderOptions& o, std::size_t dimension) {
    if (o.mock) return std::make_shared<hints::MockProvider>(dimension == 0 ? 64 : dimension);
    hints::HttpProviderConfig cfg;
    cfg.base_url = o.base_url;
    cfg.chat_model = o.chat_model;
    cfg.embedding_model = o.embedding_model;
    if (dimension != 0) cfg.dimension = dimension;
    return std::make_shared<hints::HttpProvider>(cfg);
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hints::ConfigError("cannot write " + path);
    out << data;
}

hints::HttpServer* running_server = nullptr;

void on_signal(int) {
    if (running_server != nullptr) running_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hypergraph document exploration: corpus preparation, layout and service"};
    app.require_subcommand(1);
    std::string log_level = "warn";
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")->capture_default_str();

    // prepare
    auto* prepare = app.add_subcommand("prepare", "Run the LLM pipeline and clustering over a JSONL corpus");
    std::string input, out, domain = "news";
    ProviderOptions prepare_provider;
    hints::PipelineConfig pcfg;
    std::size_t backoff_ms = 100;
    prepare->add_option("--input", input, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    prepare->add_option("--domain", domain, "news|papers")->capture_default_str();
    prepare->add_option("--out", out, "Artifact JSON")->required();
    prepare->add_option("--alpha", pcfg.alpha, "Semantic/connectivity blend")->capture_default_str();
    prepare->add_option("--threshold", pcfg.disambiguation_threshold, "Keyword disambiguation cosine")
        ->capture_default_str();
    prepare->add_option("--token-budget", pcfg.token_budget, "Per labeling prompt")->capture_default_str();
    prepare->add_option("--max-keywords", pcfg.max_keywords_per_doc)->capture_default_str();
    prepare->add_option("--concurrency", pcfg.concurrency)->capture_default_str();
    prepare->add_option("--rps", pcfg.requests_per_second, "Provider requests per second, 0 for unlimited")
        ->capture_default_str();
    prepare->add_option("--retries", pcfg.retry_limit)->capture_default_str();
    prepare->add_option("--backoff-ms", backoff_ms)->capture_default_str();
    prepare->add_option("--seed", pcfg.seed)->capture_default_str();
    add_provider_options(prepare, prepare_provider, "--mock");
    prepare->add_option("--dimension", prepare_provider.dimension, "Embedding dimension, 0 for the default");

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Re-cluster and relabel an artifact");
    std::string artifact_path, cluster_out;
    double alpha = 0.5;
    ProviderOptions cluster_provider;
    cluster->add_option("--artifact", artifact_path)->required()->check(CLI::ExistingFile);
    cluster->add_option("--alpha", alpha)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    cluster->add_option("--out", cluster_out, "Defaults to rewriting --artifact");
    add_provider_options(cluster, cluster_provider, "--mock");

    // layout
    auto* layout = app.add_subcommand("layout", "Render the cluster view as SVG");
    std::string svg_path, view_path;
    std::vector<std::string> expand;
    bool no_labels = false;
    layout->add_option("--artifact", artifact_path)->required()->check(CLI::ExistingFile);
    layout->add_option("--svg", svg_path, "SVG output");
    layout->add_option("--view", view_path, "View JSON output");
    layout->add_option("--expand", expand, "Cluster ids to expand in order; prefix keyword clusters with 'keywords:'");
    layout->add_flag("--no-labels", no_labels);

    // search
    auto* search = app.add_subcommand("search", "Rank documents against a query");
    std::string query;
    double threshold = hints::default_relevancy_threshold;
    std::size_t top = 10;
    ProviderOptions search_provider;
    search->add_option("--artifact", artifact_path)->required()->check(CLI::ExistingFile);
    search->add_option("--query", query)->required();
    search->add_option("--threshold", threshold)->capture_default_str();
    search->add_option("--top", top, "Rows to print, 0 for all")->capture_default_str();
    add_provider_options(search, search_provider, "--mock");

    // serve
    auto* serve = app.add_subcommand("serve", "Serve the interactive HTTP API");
    std::string host = "127.0.0.1";
    int port = 8080;
    ProviderOptions serve_provider;
    std::size_t chat_budget = hints::ServiceConfig{}.chat_token_budget;
    std::string snapshot_dir;
    serve->add_option("--artifact", artifact_path, "Default artifact for new sessions")->check(CLI::ExistingFile);
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--port", port, "0 picks a free port")->capture_default_str();
    serve->add_option("--chat-budget", chat_budget, "Token budget of chat prompts")->capture_default_str();
    serve->add_option("--snapshot-dir", snapshot_dir, "Write each session's snapshot here after every change")
        ->check(CLI::ExistingDirectory);
    add_provider_options(serve, serve_provider, "--mock-llm");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::from_str(log_level));
    spdlog::set_default_logger(spdlog::stderr_color_mt("hints"));
    spdlog::set_level(spdlog::level::from_str(log_level));

    try {
        if (*prepare) {
            pcfg.domain = hints::parse_domain(domain);
            pcfg.backoff = std::chrono::milliseconds(backoff_ms);
            auto provider = make_provider(prepare_provider, prepare_provider.dimension);
            hints::Pipeline pipeline(*provider, pcfg);
            auto artifact = hints::prepare_artifact(hints::read_corpus_jsonl(input), pipeline);
            hints::save_artifact(artifact, out);
            std::cerr << "prepared " << artifact.documents.size() << " documents, " << artifact.keywords.size()
                      << " keywords\n";
        } else if (*cluster) {
            auto artifact = hints::load_artifact(artifact_path);
            auto provider = make_provider(cluster_provider, artifact.embedding_dim);
            hints::PipelineConfig cfg;
            cfg.domain = artifact.domain;
            cfg.alpha = alpha;
            hints::Pipeline pipeline(*provider, cfg);
            hints::cluster_artifact(artifact, pipeline, alpha);
            hints::save_artifact(artifact, cluster_out.empty() ? artifact_path : cluster_out);
        } else if (*layout) {
            const auto artifact = hints::load_artifact(artifact_path);
            if (!artifact.document_partitions) throw hints::InputError("artifact has not been clustered");
            const hints::LayoutConfig cfg;
            const auto scene = hints::build_scene(artifact, *artifact.document_partitions,
                                                  artifact.keyword_partitions, cfg);
            auto doc_state = hints::assign_slots(scene.documents->tree(), scene.documents->initial_expansion(),
                                                 scene.documents->curve_length());
            std::optional<hints::LayoutState> kw_state;
            if (scene.keywords) {
                kw_state = hints::assign_slots(scene.keywords->tree(), scene.keywords->initial_expansion(),
                                               scene.keywords->curve_length());
            }
            const std::string prefix = "keywords:";
            for (const auto& id : expand) {
                if (id.rfind(prefix, 0) == 0) {
                    if (!scene.keywords) throw hints::NotFoundError("artifact has no keyword side", {{"cluster", id}});
                    kw_state = hints::expand_cluster(*kw_state, id.substr(prefix.size()), scene.keywords->tree());
                } else {
                    doc_state = hints::expand_cluster(doc_state, id, scene.documents->tree());
                }
            }
            const auto doc_view = scene.documents->view(doc_state.expanded);
            std::optional<hints::SideView> kw_view;
            if (scene.keywords) kw_view = scene.keywords->view(kw_state->expanded);
            if (!svg_path.empty()) {
                hints::SvgOptions opts;
                opts.show_labels = !no_labels;
                write_file(svg_path, hints::render_svg(&doc_view, kw_view ? &*kw_view : nullptr, opts));
            }
            if (!view_path.empty()) {
                nlohmann::json j = {{"documents", hints::to_json(doc_view)},
                                    {"keywords", kw_view ? hints::to_json(*kw_view) : nlohmann::json(nullptr)}};
                write_file(view_path, j.dump(2) + "\n");
            }
            if (svg_path.empty() && view_path.empty()) {
                std::cout << hints::render_svg(&doc_view, kw_view ? &*kw_view : nullptr) ;
            }
        } else if (*search) {
            const auto artifact = hints::load_artifact(artifact_path);
            auto provider = make_provider(search_provider, artifact.embedding_dim);
            std::vector<const hints::Document*> docs;
            for (const auto& d : artifact.documents) docs.push_back(&d);
            const auto result = hints::rank_documents(query, docs, *provider, threshold);
            for (const auto& r : result.ranked) {
                if (top != 0 && r.rank > top) break;
                std::printf("%zu\t%.6f\t%s\t%s\n", r.rank, r.score, r.doc_id.c_str(),
                            result.highlighted.contains(r.doc_id) ? "*" : "");
            }
        } else if (*serve) {
            std::shared_ptr<const hints::Artifact> artifact;
            std::size_t dim = 0;
            if (!artifact_path.empty()) {
                artifact = std::make_shared<const hints::Artifact>(hints::load_artifact(artifact_path));
                dim = artifact->embedding_dim;
            }
            hints::ServiceConfig cfg;
            cfg.chat_token_budget = chat_budget;
            cfg.snapshot_dir = snapshot_dir;
            hints::Service service(artifact, make_provider(serve_provider, dim), cfg);
            hints::HttpServer server(service);
            const int bound = server.bind(host, port);
            running_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "listening on http://" << host << ":" << bound << std::endl;
            server.listen();
            running_server = nullptr;
        }
    } catch (const hints::Error& e) {
        std::cerr << "error (" << hints::to_string(e.kind()) << "): " << e.what();
        if (!e.detail().is_null()) std::cerr << " " << e.detail().dump();
        std::cerr << "\n";
        return e.kind() == hints::ErrorKind::input || e.kind() == hints::ErrorKind::config ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
