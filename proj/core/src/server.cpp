#include "hints/server.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace hints {

namespace {

using nlohmann::json;

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path) {
        if (c == '/') {
            if (!cur.empty()) parts.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    return parts;
}

json parse_body(const std::string& body) {
    if (body.empty()) return json::object();
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw InputError("request body is not valid JSON", {{"position", e.byte}});
    }
}

json document_json(const Document& d) {
    return {{"id", d.id},
            {"title", d.title},
            {"date", d.date ? json(*d.date) : json(nullptr)},
            {"content", d.content},
            {"summary", d.summary},
            {"event", d.event},
            {"trigger", d.trigger},
            {"mentioned_keywords", d.mentioned_keywords},
            {"flags", d.flags}};
}

HttpResponse not_found_route(const std::string& method, const std::string& path) {
    return {404, {{"code", "not_found"}, {"message", "no such route"}, {"detail", {{"method", method}, {"path", path}}}}};
}

}  // namespace

int http_status(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::input:
        case ErrorKind::config:
        case ErrorKind::structural: return 400;
        case ErrorKind::not_found: return 404;
        case ErrorKind::over_budget: return 413;
        case ErrorKind::capacity:
        case ErrorKind::domain:
        case ErrorKind::numeric:
        case ErrorKind::geometry: return 422;
        case ErrorKind::pipeline: return 502;
        case ErrorKind::provider: return 503;
    }
    return 500;
}

json error_body(const Error& e) {
    return {{"code", std::string(to_string(e.kind()))}, {"message", e.what()}, {"detail", e.detail()}};
}

Service::Service(std::shared_ptr<const Artifact> default_artifact, std::shared_ptr<LlmProvider> provider,
                 ServiceConfig config)
    : default_artifact_(std::move(default_artifact)), provider_(std::move(provider)), config_(std::move(config)) {}

HttpResponse Service::handle(const std::string& method, const std::string& path, const std::string& body,
                             const std::map<std::string, std::string>& query) {
    try {
        return route(method, path, body, query);
    } catch (const Error& e) {
        return {http_status(e.kind()), error_body(e)};
    } catch (const std::exception& e) {
        spdlog::error("{} {}: {}", method, path, e.what());
        return {500, {{"code", "internal"}, {"message", e.what()}, {"detail", nullptr}}};
    }
}

std::shared_ptr<Session> Service::find_session(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFoundError("unknown session", {{"session", id}});
    return it->second;
}

std::size_t Service::session_count() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

HttpResponse Service::create_session(const json& body) {
    std::shared_ptr<const Artifact> artifact = default_artifact_;
    if (body.contains("artifact")) {
        artifact = std::make_shared<const Artifact>(artifact_from_json(body.at("artifact")));
    }
    if (!artifact) throw InputError("no artifact given and the server has none loaded", {{"path", "artifact"}});
    if (!artifact->document_partitions) {
        throw InputError("artifact has not been clustered", {{"path", "artifact.document_partitions"}});
    }
    std::string id;
    {
        std::lock_guard lock(mutex_);
        id = "s" + std::to_string(next_id_++);
    }
    auto session = std::make_shared<Session>(id, artifact, provider_, config_);
    if (body.contains("snapshot")) session->restore(body.at("snapshot"));
    json view = session->view();
    {
        std::lock_guard lock(mutex_);
        sessions_.emplace(id, session);
    }
    persist(*session);
    return {201, {{"session", id}, {"view", std::move(view)}}};
}

void Service::persist(const Session& session) const {
    if (config_.snapshot_dir.empty()) return;
    std::lock_guard lock(persist_mutex_);
    const std::filesystem::path dir(config_.snapshot_dir);
    const auto target = dir / (session.id() + ".json");
    const auto partial = dir / (session.id() + ".json.partial");
    {
        std::ofstream out(partial, std::ios::binary | std::ios::trunc);
        out << session.snapshot().dump(2) << '\n';
        if (!out) {
            spdlog::error("could not write snapshot {}", partial.string());
            return;
        }
    }
    std::error_code ec;
    std::filesystem::rename(partial, target, ec);
    if (ec) spdlog::error("could not move snapshot into place at {}: {}", target.string(), ec.message());
}

HttpResponse Service::route(const std::string& method, const std::string& path, const std::string& body,
                            const std::map<std::string, std::string>& query) {
    const auto parts = split_path(path);
    if (parts.size() == 1 && parts[0] == "sessions" && method == "POST") {
        return create_session(parse_body(body));
    }
    if (parts.size() == 3 && parts[0] == "sessions") {
        if (parts[2] == "view" && method == "GET") return {200, find_session(parts[1])->view()};
        if (parts[2] == "snapshot" && method == "GET") return {200, find_session(parts[1])->snapshot()};
        if (parts[2] == "actions" && method == "POST") {
            auto session = find_session(parts[1]);
            const json j = parse_body(body);
            const json& action = j.contains("action") ? j.at("action") : j;
            json view = session->apply(action);
            persist(*session);
            return {200, std::move(view)};
        }
        if (parts[2] == "chat" && method == "POST") {
            auto session = find_session(parts[1]);
            const json j = parse_body(body);
            if (!j.contains("question") || !j.at("question").is_string()) {
                throw InputError("chat needs a 'question' string", {{"path", "question"}});
            }
            std::vector<std::string> ids;
            if (j.contains("doc_ids")) {
                if (!j.at("doc_ids").is_array()) throw InputError("doc_ids must be an array", {{"path", "doc_ids"}});
                for (std::size_t i = 0; i < j.at("doc_ids").size(); ++i) {
                    if (!j.at("doc_ids")[i].is_string()) {
                        throw InputError("document ids must be strings",
                                         {{"path", "doc_ids[" + std::to_string(i) + "]"}});
                    }
                    ids.push_back(j.at("doc_ids")[i].get<std::string>());
                }
            }
            ChatMode mode = ChatMode::summary;
            if (j.contains("mode")) {
                if (!j.at("mode").is_string()) throw InputError("mode must be a string", {{"path", "mode"}});
                mode = parse_chat_mode(j.at("mode").get<std::string>());
            }
            json reply = session->chat(j.at("question").get<std::string>(), ids, mode);
            persist(*session);
            return {200, std::move(reply)};
        }
    }
    if (parts.size() == 2 && parts[0] == "documents" && method == "GET") {
        std::shared_ptr<const Artifact> artifact = default_artifact_;
        std::shared_ptr<Session> session;
        if (auto it = query.find("session"); it != query.end()) {
            session = find_session(it->second);
        }
        const Artifact* a = session ? &session->artifact() : artifact.get();
        if (a == nullptr) throw NotFoundError("no artifact loaded", {{"doc_id", parts[1]}});
        const Document* d = a->find_document(parts[1]);
        if (d == nullptr) throw NotFoundError("unknown document", {{"doc_id", parts[1]}});
        return {200, document_json(*d)};
    }
    return not_found_route(method, path);
}

struct HttpServer::Impl {
    Service& service;
    httplib::Server server;
    explicit Impl(Service& s) : service(s) {}
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> query;
        for (const auto& [k, v] : req.params) query.emplace(k, v);
        const HttpResponse r = impl_->service.handle(req.method, req.path, req.body, query);
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
        spdlog::debug("{} {} -> {}", req.method, req.path, r.status);
    };
    impl_->server.Get(R"(/.*)", handler);
    impl_->server.Post(R"(/.*)", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) throw ConfigError("could not bind", {{"host", host}});
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) throw ConfigError("could not bind", {{"host", host}, {"port", port}});
    return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace hints
