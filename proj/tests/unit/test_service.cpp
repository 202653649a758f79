#include <gtest/gtest.h>

#include <httplib.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "fixtures.hpp"
#include "hints/error.hpp"
#include "hints/mock_provider.hpp"
#include "hints/server.hpp"
#include "hints/session.hpp"

namespace hints {
namespace {

using nlohmann::json;

std::size_t tokens(const std::string& s) { return (s.size() + 3) / 4; }

std::shared_ptr<MockProvider> mock() { return std::make_shared<MockProvider>(64); }

Session make_session(std::shared_ptr<LlmProvider> provider = nullptr, ServiceConfig config = {}) {
    return Session("s1", testing::prepared_corpus(), std::move(provider), std::move(config));
}

// A collapsed cluster with more than one member, or empty when there is none.
std::string collapsed_cluster(const json& side) {
    for (const auto& c : side.at("clusters")) {
        if (!c.at("expanded").get<bool>() && c.at("members").size() > 1) return c.at("id");
    }
    return {};
}

std::set<std::string> ids_of(const json& side) {
    std::set<std::string> out;
    for (const auto& n : side.at("nodes")) out.insert(n.at("id").get<std::string>());
    return out;
}

TEST(Session, InitialView) {
    auto s = make_session();
    const json v = s.view();
    const auto a = testing::prepared_corpus();
    EXPECT_EQ(v.at("session"), "s1");
    EXPECT_TRUE(v.at("filter").is_null());
    EXPECT_TRUE(v.at("search").is_null());
    EXPECT_TRUE(v.at("selection").is_null());
    EXPECT_TRUE(v.at("chat").empty());
    EXPECT_EQ(v.at("documents").at("nodes").size(), 50u);
    EXPECT_EQ(v.at("keywords").at("nodes").size(), a->keyword_partitions->node_count());
    // Every node is covered by exactly one visible (collapsed) cluster.
    for (const char* side : {"documents", "keywords"}) {
        std::multiset<std::string> covered;
        for (const auto& c : v.at(side).at("clusters")) {
            if (c.at("expanded").get<bool>()) continue;
            for (const auto& m : c.at("members")) covered.insert(m.get<std::string>());
        }
        EXPECT_EQ(covered.size(), v.at(side).at("nodes").size()) << side;
        EXPECT_EQ(std::set<std::string>(covered.begin(), covered.end()).size(), covered.size()) << side;
    }
}

TEST(Session, ExpandThenCollapseRestoresView) {
    auto s = make_session();
    const json before = s.view();
    for (const char* side : {"documents", "keywords"}) {
        const std::string id = collapsed_cluster(before.at(side));
        ASSERT_FALSE(id.empty()) << side;
        const json expanded = s.apply({{"type", "expand"}, {"side", side}, {"cluster", id}});
        EXPECT_NE(expanded, before);
        EXPECT_EQ(s.apply({{"type", "collapse"}, {"side", side}, {"cluster", id}}), before);
    }
}

TEST(Session, FailedActionLeavesStateAlone) {
    auto s = make_session();
    const json before = s.view();
    EXPECT_THROW(s.apply({{"type", "expand"}, {"cluster", "c9-99"}}), NotFoundError);
    EXPECT_THROW(s.apply({{"type", "teleport"}}), InputError);
    EXPECT_THROW(s.apply(json::array()), InputError);
    EXPECT_THROW(s.apply({{"type", "expand"}}), InputError);
    EXPECT_THROW(s.apply({{"type", "expand"}, {"side", "left"}, {"cluster", "c1-0"}}), InputError);
    EXPECT_THROW(s.apply({{"type", "filter"}, {"doc_ids", json::array()}}), InputError);
    EXPECT_THROW(s.apply({{"type", "filter"}, {"doc_ids", {"d01", "nope"}}}), NotFoundError);
    EXPECT_THROW(s.apply({{"type", "filter"}, {"side", "keywords"}, {"doc_ids", {"d01"}}}), InputError);
    EXPECT_THROW(s.apply({{"type", "search"}, {"query", "  "}}), InputError);
    EXPECT_THROW(s.apply({{"type", "search"}, {"query", "x"}, {"threshold", 2}}), InputError);
    EXPECT_THROW(s.apply({{"type", "select"}, {"keyword", "k9999"}}), NotFoundError);
    EXPECT_EQ(s.view(), before);
}

TEST(Session, FilterAndClear) {
    auto s = make_session();
    const json before = s.view();
    const auto a = testing::prepared_corpus();
    // Ids deliberately out of artifact order and with a repeat.
    std::vector<std::string> pick;
    for (std::size_t i = 0; i < 12; ++i) pick.push_back(a->documents[(i * 7) % 50].id);
    pick.push_back(pick.front());
    const json v = s.apply({{"type", "filter"}, {"doc_ids", pick}});

    std::vector<std::string> ordered;
    std::set<std::string> mentioned;
    for (const auto& d : a->documents) {
        if (std::find(pick.begin(), pick.end(), d.id) == pick.end()) continue;
        ordered.push_back(d.id);
        mentioned.insert(d.mentioned_keywords.begin(), d.mentioned_keywords.end());
    }
    EXPECT_EQ(v.at("filter").get<std::vector<std::string>>(), ordered);
    EXPECT_EQ(ids_of(v.at("documents")), std::set<std::string>(ordered.begin(), ordered.end()));
    EXPECT_EQ(ids_of(v.at("keywords")), mentioned);
    for (const auto& c : v.at("documents").at("clusters")) EXPECT_FALSE(c.at("label").get<std::string>().empty());

    EXPECT_EQ(s.apply({{"type", "clear_filter"}}), before);
}

TEST(Session, SearchFollowsFilter) {
    auto s = make_session();
    json v = s.apply({{"type", "search"}, {"query", "vaccine trial"}, {"threshold", 0.1}});
    EXPECT_EQ(v.at("search").at("ranked").size(), 50u);
    const auto& ranked = v.at("search").at("ranked");
    for (std::size_t i = 1; i < ranked.size(); ++i) {
        EXPECT_GE(ranked[i - 1].at("score").get<double>(), ranked[i].at("score").get<double>());
    }
    const std::string top = ranked[0].at("doc_id");
    v = s.apply({{"type", "filter"}, {"doc_ids", {top, "d01", "d02"}}});
    EXPECT_LE(v.at("search").at("ranked").size(), 3u);
    EXPECT_EQ(v.at("search").at("ranked")[0].at("doc_id"), top);
    for (const auto& k : v.at("search").at("highlighted_keywords")) {
        EXPECT_TRUE(ids_of(v.at("keywords")).contains(k.get<std::string>()));
    }
    v = s.apply({{"type", "clear_search"}});
    EXPECT_TRUE(v.at("search").is_null());
}

TEST(Session, SelectKeyword) {
    auto s = make_session();
    const auto a = testing::prepared_corpus();
    const std::string k = a->keyword_partitions->nodes().front();
    const json v = s.apply({{"type", "select"}, {"keyword", k}});
    std::vector<std::string> expected;
    for (const auto& d : a->documents) {
        if (std::find(d.mentioned_keywords.begin(), d.mentioned_keywords.end(), k) != d.mentioned_keywords.end()) {
            expected.push_back(d.id);
        }
    }
    ASSERT_FALSE(expected.empty());
    std::vector<std::string> got;
    for (const auto& d : v.at("selection").at("documents")) {
        got.push_back(d.at("id"));
        for (const auto& span : d.at("summary_spans")) {
            const std::string summary = d.at("summary");
            EXPECT_LT(span.at("start").get<std::size_t>(), span.at("end").get<std::size_t>());
            EXPECT_LE(span.at("end").get<std::size_t>(), summary.size());
        }
    }
    EXPECT_EQ(got, expected);
    EXPECT_EQ(v.at("selection").at("keywords"), json::array({k}));
    EXPECT_TRUE(s.apply({{"type", "clear_selection"}}).at("selection").is_null());
}

TEST(Session, SelectDocumentCluster) {
    auto s = make_session();
    const auto a = testing::prepared_corpus();
    const json before = s.view();
    const json& cluster = before.at("documents").at("clusters")[0];
    const json v = s.apply({{"type", "select"}, {"side", "documents"}, {"cluster", cluster.at("id")}});
    std::set<std::string> docs;
    std::set<std::string> kws;
    for (const auto& m : cluster.at("members")) {
        const Document& d = *a->find_document(m.get<std::string>());
        docs.insert(d.id);
        kws.insert(d.mentioned_keywords.begin(), d.mentioned_keywords.end());
    }
    std::set<std::string> got;
    for (const auto& d : v.at("selection").at("documents")) got.insert(d.at("id").get<std::string>());
    EXPECT_EQ(got, docs);
    EXPECT_EQ(v.at("selection").at("keywords").get<std::set<std::string>>(), kws);
}

TEST(KeywordSpans, CaseInsensitiveLongestFirst) {
    KeywordEntity eu{"k1", {"EU", "European Union"}, "EU", "", {}};
    KeywordEntity un{"k2", {"Union"}, "Union", "", {}};
    const std::string text = "The european union and the EU met the Union; EUROPE is not EU-wide news.";
    const auto spans = keyword_spans(text, {&eu, &un});
    std::vector<std::string> hits;
    for (const auto& s : spans) hits.push_back(text.substr(s.start, s.end - s.start) + "/" + s.keyword);
    EXPECT_EQ(hits, (std::vector<std::string>{"european union/k1", "EU/k1", "Union/k2", "EU/k1"}));
}

TEST(Chat, ContextCountAndHistory) {
    auto provider = mock();
    auto s = make_session(provider);
    const json r = s.chat("What happened?", {"d01", "d02"}, ChatMode::summary);
    EXPECT_EQ(r.at("answer"), "I received 2 context documents. You asked: What happened?");
    EXPECT_EQ(r.at("context_messages"), 4u);
    EXPECT_EQ(r.at("history").size(), 2u);
    const auto prompt = provider->completion_log().back();
    EXPECT_EQ(prompt[1].name, "context");
    EXPECT_EQ(prompt[1].content, "Article 1 (id d01): " + testing::prepared_corpus()->find_document("d01")->summary);
    EXPECT_EQ(s.view().at("chat").size(), 2u);

    const auto full = s.assemble_chat_prompt("Again?", {"d01"}, ChatMode::full);
    EXPECT_EQ(full[1].content, "Article 1 (id d01): " + testing::prepared_corpus()->find_document("d01")->content);
    EXPECT_EQ(full.size(), 5u);  // system, context, previous pair, question
}

TEST(Chat, OldestHistoryDroppedFirst) {
    auto provider = mock();
    ServiceConfig config;
    config.chat_system_message = "Be brief.";
    config.chat_token_budget = tokens("Be brief.") + tokens("Q4") + tokens("Q3") + tokens("A3");
    auto s = make_session(provider, config);
    provider->script({"A1", "A2", "A3"});
    for (const char* q : {"Q1", "Q2", "Q3"}) s.chat(q, {}, ChatMode::summary);
    const auto prompt = s.assemble_chat_prompt("Q4", {}, ChatMode::summary);
    std::vector<std::string> contents;
    for (const auto& m : prompt) contents.push_back(m.content);
    EXPECT_EQ(contents, (std::vector<std::string>{"Be brief.", "Q3", "A3", "Q4"}));
    EXPECT_EQ(s.history().size(), 6u);
}

TEST(Chat, OverBudgetNamesDocuments) {
    ServiceConfig config;
    config.chat_token_budget = 50;
    auto s = make_session(mock(), config);
    const auto a = testing::prepared_corpus();
    try {
        s.chat("Why?", {"d03", "d04"}, ChatMode::full);
        FAIL();
    } catch (const OverBudgetError& e) {
        EXPECT_EQ(e.detail().at("budget"), 50u);
        const auto& docs = e.detail().at("documents");
        ASSERT_EQ(docs.size(), 2u);
        EXPECT_EQ(docs[1].at("doc_id"), "d04");
        EXPECT_EQ(docs[1].at("tokens"), tokens("Article 2 (id d04): " + a->find_document("d04")->content));
    }
    EXPECT_TRUE(s.history().empty());
}

TEST(Chat, FailureKeepsHistory) {
    auto provider = mock();
    auto s = make_session(provider);
    s.chat("first", {}, ChatMode::summary);
    provider->fail_next_completions(1);
    EXPECT_THROW(s.chat("second", {"d01"}, ChatMode::summary), ProviderError);
    EXPECT_EQ(s.history().size(), 2u);
    EXPECT_THROW(s.chat("", {}, ChatMode::summary), InputError);
    EXPECT_THROW(s.chat("x", {"nope"}, ChatMode::summary), NotFoundError);
    EXPECT_THROW(parse_chat_mode("brief"), InputError);
}

class ServiceTest : public ::testing::Test {
protected:
    std::shared_ptr<MockProvider> provider = mock();
    Service service{testing::prepared_corpus(), provider};

    HttpResponse post(const std::string& path, const json& body) { return service.handle("POST", path, body.dump()); }
    std::string open() {
        const auto r = post("/sessions", json::object());
        EXPECT_EQ(r.status, 201);
        return r.body.at("session");
    }
};

TEST(HttpStatus, Mapping) {
    EXPECT_EQ(http_status(ErrorKind::input), 400);
    EXPECT_EQ(http_status(ErrorKind::config), 400);
    EXPECT_EQ(http_status(ErrorKind::structural), 400);
    EXPECT_EQ(http_status(ErrorKind::not_found), 404);
    EXPECT_EQ(http_status(ErrorKind::over_budget), 413);
    EXPECT_EQ(http_status(ErrorKind::capacity), 422);
    EXPECT_EQ(http_status(ErrorKind::geometry), 422);
    EXPECT_EQ(http_status(ErrorKind::pipeline), 502);
    EXPECT_EQ(http_status(ErrorKind::provider), 503);
    const json b = error_body(NotFoundError("gone", {{"id", "x"}}));
    EXPECT_EQ(b, (json{{"code", "not_found"}, {"message", "gone"}, {"detail", {{"id", "x"}}}}));
}

TEST_F(ServiceTest, SessionLifecycle) {
    const auto created = post("/sessions", json::object());
    ASSERT_EQ(created.status, 201);
    const std::string id = created.body.at("session");
    EXPECT_EQ(id, "s1");
    const auto view = service.handle("GET", "/sessions/" + id + "/view", "");
    EXPECT_EQ(view.status, 200);
    EXPECT_EQ(view.body, created.body.at("view"));

    const std::string cluster = collapsed_cluster(view.body.at("documents"));
    const auto wrapped = post("/sessions/" + id + "/actions", {{"action", {{"type", "expand"}, {"cluster", cluster}}}});
    EXPECT_EQ(wrapped.status, 200);
    const auto bare = post("/sessions/" + id + "/actions", {{"type", "collapse"}, {"cluster", cluster}});
    EXPECT_EQ(bare.status, 200);
    EXPECT_EQ(bare.body, view.body);
}

TEST_F(ServiceTest, ErrorStatuses) {
    const std::string id = open();
    auto r = post("/sessions/" + id + "/actions", {{"type", "bogus"}});
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(r.body.at("code"), "input");
    EXPECT_EQ(r.body.at("detail").at("path"), "type");

    r = post("/sessions/" + id + "/actions", {{"type", "expand"}, {"cluster", "c7-77"}});
    EXPECT_EQ(r.status, 404);

    r = service.handle("GET", "/sessions/s404/view", "");
    EXPECT_EQ(r.status, 404);
    EXPECT_EQ(r.body.at("detail").at("session"), "s404");

    r = service.handle("POST", "/sessions/" + id + "/actions", "{not json");
    EXPECT_EQ(r.status, 400);

    r = service.handle("DELETE", "/sessions", "");
    EXPECT_EQ(r.status, 404);

    r = post("/sessions", {{"artifact", {{"format", "hints-artifact/1"}}}});
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(r.body.at("detail").at("path"), "domain");
}

TEST_F(ServiceTest, ChatRoute) {
    const std::string id = open();
    auto r = post("/sessions/" + id + "/chat", {{"question", "Anything?"}, {"doc_ids", {"d05"}}});
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body.at("answer"), "I received 1 context documents. You asked: Anything?");

    r = post("/sessions/" + id + "/chat", {{"doc_ids", {"d05"}}});
    EXPECT_EQ(r.status, 400);
    r = post("/sessions/" + id + "/chat", {{"question", "q"}, {"mode", "terse"}});
    EXPECT_EQ(r.status, 400);

    provider->fail_next_completions(1);
    r = post("/sessions/" + id + "/chat", {{"question", "again"}});
    EXPECT_EQ(r.status, 503);
    EXPECT_EQ(service.handle("GET", "/sessions/" + id + "/view", "").body.at("chat").size(), 2u);

    std::vector<std::string> all;
    for (const auto& d : testing::prepared_corpus()->documents) all.push_back(d.id);
    std::string big(60000, 'x');
    r = post("/sessions/" + id + "/chat", {{"question", big}, {"doc_ids", all}, {"mode", "full"}});
    EXPECT_EQ(r.status, 413);
    EXPECT_EQ(r.body.at("code"), "over_budget");
    EXPECT_EQ(r.body.at("detail").at("documents").size(), 50u);
}

TEST_F(ServiceTest, DocumentRoute) {
    auto r = service.handle("GET", "/documents/d07", "");
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body.at("id"), "d07");
    EXPECT_EQ(r.body.at("summary"), testing::prepared_corpus()->find_document("d07")->summary);
    EXPECT_EQ(service.handle("GET", "/documents/zzz", "").status, 404);
    EXPECT_EQ(service.handle("GET", "/documents/d07", "", {{"session", "s8"}}).status, 404);
}

TEST_F(ServiceTest, SessionsAreIsolated) {
    const std::string a = open();
    const std::string b = open();
    EXPECT_EQ(service.session_count(), 2u);
    const json before = service.handle("GET", "/sessions/" + b + "/view", "").body;
    const std::string cluster = collapsed_cluster(before.at("documents"));
    post("/sessions/" + a + "/actions", {{"type", "expand"}, {"cluster", cluster}});
    post("/sessions/" + a + "/actions", {{"type", "filter"}, {"doc_ids", {"d01", "d02", "d03"}}});
    post("/sessions/" + a + "/chat", {{"question", "hi"}});
    json after = service.handle("GET", "/sessions/" + b + "/view", "").body;
    EXPECT_EQ(after, before);
}

json without_session(json view) {
    view.erase("session");
    return view;
}

TEST_F(ServiceTest, SnapshotRebuildsTheSession) {
    const std::string a = open();
    const json start = service.handle("GET", "/sessions/" + a + "/view", "").body;
    post("/sessions/" + a + "/actions", {{"type", "expand"}, {"side", "documents"}, {"cluster", collapsed_cluster(start.at("documents"))}});
    post("/sessions/" + a + "/actions", {{"type", "filter"}, {"doc_ids", {"d01", "d02", "d03", "d04"}}});
    post("/sessions/" + a + "/actions", {{"type", "search"}, {"query", "storm"}, {"threshold", 0.1}});
    // A rejected action must not enter the snapshot.
    EXPECT_EQ(post("/sessions/" + a + "/actions", {{"type", "expand"}, {"cluster", "c9-9"}}).status, 404);
    post("/sessions/" + a + "/chat", {{"question", "What happened?"}, {"doc_ids", {"d01"}}});
    const json snap = service.handle("GET", "/sessions/" + a + "/snapshot", "").body;
    EXPECT_EQ(snap.at("actions").size(), 3u);
    EXPECT_EQ(snap.at("history").size(), 2u);

    const auto r = post("/sessions", {{"snapshot", snap}});
    ASSERT_EQ(r.status, 201) << r.body.dump();
    const json rebuilt = service.handle("GET", "/sessions/" + r.body.at("session").get<std::string>() + "/view", "").body;
    const json original = service.handle("GET", "/sessions/" + a + "/view", "").body;
    EXPECT_EQ(without_session(rebuilt), without_session(original));
}

TEST_F(ServiceTest, SnapshotValidation) {
    auto path_of = [&](const json& snap) {
        const auto r = post("/sessions", {{"snapshot", snap}});
        EXPECT_EQ(r.status, 400) << r.body.dump();
        return r.body.at("detail").value("path", "");
    };
    const json good = {{"format", "hints-session/1"}, {"actions", json::array()}, {"history", json::array()}};
    json bad = good;
    bad["format"] = "x";
    EXPECT_EQ(path_of(bad), "snapshot.format");
    bad = good;
    bad["actions"] = {{{"type", "expand"}, {"cluster", "c9-9"}}};
    EXPECT_EQ(path_of(bad), "snapshot.actions[0]");
    bad = good;
    bad["history"] = {{{"role", "user"}, {"content", "q"}}};
    EXPECT_EQ(path_of(bad), "snapshot.history");
    bad = good;
    bad["history"] = {{{"role", "assistant"}, {"content", "a"}}, {{"role", "user"}, {"content", "q"}}};
    EXPECT_EQ(path_of(bad), "snapshot.history[0]");
    EXPECT_EQ(post("/sessions", {{"snapshot", good}}).status, 201);
}

TEST(ServiceSnapshots, WrittenToDirectoryAfterEveryChange) {
    const auto dir = std::filesystem::temp_directory_path() / "hints_snapshots_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    ServiceConfig cfg;
    cfg.snapshot_dir = dir.string();
    Service service(testing::prepared_corpus(), mock(), cfg);
    const auto created = service.handle("POST", "/sessions", "{}");
    const std::string id = created.body.at("session");
    const auto file = dir / (id + ".json");
    auto on_disk = [&] {
        std::ifstream in(file);
        return json::parse(in);
    };
    ASSERT_TRUE(std::filesystem::exists(file));
    EXPECT_TRUE(on_disk().at("actions").empty());
    service.handle("POST", "/sessions/" + id + "/actions", json{{"type", "search"}, {"query", "storm"}}.dump());
    service.handle("POST", "/sessions/" + id + "/chat", json{{"question", "hi"}}.dump());
    EXPECT_EQ(on_disk(), service.handle("GET", "/sessions/" + id + "/snapshot", "").body);
    EXPECT_EQ(on_disk().at("actions").size(), 1u);
    EXPECT_FALSE(std::filesystem::exists(dir / (id + ".json.partial")));
    std::filesystem::remove_all(dir);
}

TEST_F(ServiceTest, HttpRoundTrip) {
    HttpServer server(service);
    const int port = server.bind("127.0.0.1", 0);
    ASSERT_GT(port, 0);
    std::thread loop([&] { server.listen(); });
    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(10, 0);

    auto created = client.Post("/sessions", "{}", "application/json");
    ASSERT_TRUE(created);
    EXPECT_EQ(created->status, 201);
    const json body = json::parse(created->body);
    const std::string id = body.at("session");

    auto view = client.Get(("/sessions/" + id + "/view").c_str());
    ASSERT_TRUE(view);
    EXPECT_EQ(view->status, 200);
    EXPECT_EQ(json::parse(view->body), body.at("view"));

    auto bad = client.Post(("/sessions/" + id + "/actions").c_str(), R"({"type":"nope"})", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    EXPECT_EQ(json::parse(bad->body).at("code"), "input");

    auto doc = client.Get(("/documents/d02?session=" + id).c_str());
    ASSERT_TRUE(doc);
    EXPECT_EQ(doc->status, 200);

    server.stop();
    loop.join();
}

}  // namespace
}  // namespace hints
