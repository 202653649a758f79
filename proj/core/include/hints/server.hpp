#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "hints/artifact.hpp"
#include "hints/error.hpp"
#include "hints/provider.hpp"
#include "hints/session.hpp"

namespace hints {

struct HttpResponse {
    int status = 200;
    nlohmann::json body;
};

int http_status(ErrorKind kind) noexcept;
/// {"code", "message", "detail"} body for an engine error.
nlohmann::json error_body(const Error& e);

/// Routes of the interactive service, independent of the transport:
///   POST /sessions                  {"artifact"?, "snapshot"?} -> {"session", "view"}
///   GET  /sessions/{id}/view                              -> view
///   GET  /sessions/{id}/snapshot                          -> snapshot
///   POST /sessions/{id}/actions     {"action": {...}}     -> view
///   POST /sessions/{id}/chat        {"question", "doc_ids", "mode"?} -> {"answer", "history"}
///   GET  /documents/{id}[?session=]                       -> document
class Service {
public:
    /// `default_artifact` backs sessions created without an inline artifact and
    /// may be null. A null provider gives every session an offline mock.
    Service(std::shared_ptr<const Artifact> default_artifact, std::shared_ptr<LlmProvider> provider,
            ServiceConfig config = {});

    HttpResponse handle(const std::string& method, const std::string& path, const std::string& body,
                        const std::map<std::string, std::string>& query = {});

    std::shared_ptr<Session> find_session(const std::string& id) const;
    std::size_t session_count() const;

private:
    HttpResponse route(const std::string& method, const std::string& path, const std::string& body,
                       const std::map<std::string, std::string>& query);
    HttpResponse create_session(const nlohmann::json& body);
    void persist(const Session& session) const;

    std::shared_ptr<const Artifact> default_artifact_;
    std::shared_ptr<LlmProvider> provider_;
    ServiceConfig config_;
    mutable std::mutex mutex_;
    mutable std::mutex persist_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::size_t next_id_ = 1;
};

/// HTTP front end for a Service. listen() blocks until stop() is called.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds to `port`, or to a free port when it is 0; returns the bound port.
    int bind(const std::string& host, int port);
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace hints
