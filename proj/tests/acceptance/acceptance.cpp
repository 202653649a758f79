// Acceptance suite. One line per criterion; exit status is the number of failures.
//
// usage: hints_acceptance <hints-binary> <corpus.jsonl> <workdir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "hints/artifact.hpp"
#include "hints/clustering.hpp"
#include "hints/corpus.hpp"
#include "hints/curves.hpp"
#include "hints/geometry.hpp"
#include "hints/hull.hpp"
#include "hints/hypergraph.hpp"
#include "hints/layout.hpp"
#include "hints/mock_provider.hpp"
#include "hints/server.hpp"
#include "hints/view.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hints;
using testing::Gen;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Records the first violation; later ones only bump the count.
struct Checker {
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string first;

    void expect(bool cond, const std::string& what) {
        ++checks;
        if (cond) return;
        if (failures++ == 0) first = what;
    }
    Outcome outcome(const std::string& summary) const {
        if (failures == 0) return {true, summary};
        return {false, std::to_string(failures) + "/" + std::to_string(checks) + " checks failed, first: " + first};
    }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Outcome duality() {
    Checker c;
    Gen g(101);
    for (int trial = 0; trial < 1000; ++trial) {
        const Hypergraph h = testing::random_hypergraph(g, 12, 8, true);
        const Hypergraph d = dualize(h);
        c.expect(d == testing::oracle_dual(h), "dual differs from transposed incidence, trial " + std::to_string(trial));
        c.expect(dualize(d) == h, "double dual differs, trial " + std::to_string(trial));
    }
    const Hypergraph ex = testing::four_node_example();
    c.expect(dualize(dualize(ex)) == ex, "four-node example does not round-trip");
    return c.outcome("1000 random hypergraphs plus the four-node example");
}

Outcome connectivity_oracle() {
    Checker c;
    Gen gen(202);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + gen.below(11);
        const WeightedGraph g = testing::random_weighted_graph(gen, n, gen.real(0.05, 1.0));
        testing::Matrix w(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [j, x] : g.adjacency[i]) w[i][j] = x;
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double err = std::abs(connectivity_similarity(i, j, g) - testing::oracle_wto(w, i, j));
                worst = std::max(worst, err);
                c.expect(err <= 1e-12, "graph " + std::to_string(trial) + " pair " + std::to_string(i) + "," +
                                           std::to_string(j) + " off by " + fmt("%.3e", err));
            }
        }
    }
    const WeightedGraph triangle = expand_hyperedges(3, std::vector<std::vector<std::size_t>>{{0, 1}, {1, 2}, {0, 2}});
    const double t = connectivity_similarity(0, 1, triangle);
    c.expect(t == 1.0, "triangle gives " + fmt("%.17g", t));
    return c.outcome("1000 graphs, max error " + fmt("%.2e", worst) + ", triangle exactly 1");
}

Outcome blend_endpoints() {
    Checker c;
    Gen g(303);
    for (int trial = 0; trial < 1000; ++trial) {
        const double ss = g.real(-1.0, 1.0);
        const double sc = g.real(0.0, 1.0);
        c.expect(combined_similarity(ss, sc, {1.0}) == ss, "alpha=1 does not give Ss");
        c.expect(combined_similarity(ss, sc, {0.0}) == sc, "alpha=0 does not give Sc");
    }
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + g.below(15);
        const auto e = testing::random_embeddings(g, n, 2 + g.below(8));
        const WeightedGraph graph = testing::random_weighted_graph(g, n, 0.5);
        const double scale = g.chance(0.5) ? g.real(0.01, 0.9) : g.real(1.1, 1000.0);
        std::vector<Embedding> scaled = e;
        for (auto& v : scaled) {
            for (auto& x : v) x *= scale;
        }
        c.expect(nearest_partners(e, graph, {1.0}) == nearest_partners(scaled, graph, {1.0}),
                 "partners change under scaling by " + fmt("%.4g", scale) + ", instance " + std::to_string(trial));
    }
    return c.outcome("exact endpoints over 1000 draws; partners scale-invariant on 100 instances");
}

Outcome agglomeration() {
    Checker c;
    Gen g(404);
    std::size_t max_levels = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const Hypergraph h = testing::random_hypergraph(g, 16, 12, false);
        const std::size_t n = h.node_count();
        const auto e = testing::random_embeddings(g, n, 2 + g.below(6));
        const double alpha = g.chance(0.2) ? (g.chance(0.5) ? 0.0 : 1.0) : g.real(0.0, 1.0);
        const std::string tag = "instance " + std::to_string(trial);
        const PartitionSequence p = agglomerate(h, e, {alpha});
        max_levels = std::max(max_levels, p.level_count());

        c.expect(p.level_count() <= std::max<std::size_t>(n - 1, 1), tag + " has too many levels");
        c.expect(p.cluster_count(p.level_count()) == 1, tag + " does not end in one cluster");
        std::size_t prev_count = n;
        std::vector<std::size_t> prev(n);
        for (std::size_t v = 0; v < n; ++v) prev[v] = v;
        for (std::size_t l = 1; l <= p.level_count(); ++l) {
            const auto& cur = p.level(l);
            const std::size_t count = p.cluster_count(l);
            c.expect(count < prev_count || n == 1, tag + " level " + std::to_string(l) + " does not coarsen");
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = a + 1; b < n; ++b) {
                    if (prev[a] == prev[b]) c.expect(cur[a] == cur[b], tag + " level " + std::to_string(l) + " splits a cluster");
                }
            }
            prev = cur;
            prev_count = count;
        }
        const auto ref = testing::reference_agglomerate(h, e, alpha);
        c.expect(p.levels() == ref, tag + " differs from the reference simulation");
    }
    return c.outcome("500 instances, deepest hierarchy " + std::to_string(max_levels) + " levels");
}

std::vector<std::pair<int, int>> rect_cells(int w, int h, int t) {
    std::vector<std::pair<int, int>> cells;
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            if (t == 0 || x < t || y < t || x >= w - t || y >= h - t) cells.emplace_back(x, y);
        }
    }
    return cells;
}

Outcome curves() {
    Checker c;
    std::size_t rects = 0;
    std::size_t rings = 0;
    for (int w = 1; w <= 12; ++w) {
        for (int h = 1; h <= 12; ++h, ++rects) {
            const Curve k = gilbert_curve(w, h);
            const std::string tag = "gilbert " + std::to_string(w) + "x" + std::to_string(h);
            c.expect(testing::covers_exactly(k.points, rect_cells(w, h, 0)), tag + " coverage");
            c.expect(testing::unit_steps(k.points), tag + " adjacency");
        }
    }
    for (int w = 3; w <= 16; ++w) {
        for (int h = 3; h <= 16; ++h) {
            for (int t = 1; 2 * t < std::min(w, h); ++t, ++rings) {
                const Curve k = build_ring(w, h, t);
                const std::string tag = "ring " + std::to_string(w) + "x" + std::to_string(h) + " t" + std::to_string(t);
                c.expect(testing::covers_exactly(k.points, rect_cells(w, h, t)), tag + " coverage");
                c.expect(testing::unit_steps(k.points), tag + " adjacency");
            }
        }
    }
    std::size_t segments = 1;
    for (int order = 1; order <= 5; ++order) {
        segments *= 7;
        const Curve k = gosper_curve(order);
        c.expect(k.points.size() == segments + 1, "gosper order " + std::to_string(order) + " segment count");
        double lo = 1e300;
        double hi = 0.0;
        for (std::size_t i = 1; i < k.points.size(); ++i) {
            const double d = distance(k.points[i - 1], k.points[i]);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        c.expect(hi - lo < 1e-9, "gosper order " + std::to_string(order) + " segment lengths vary by " + fmt("%.3e", hi - lo));
    }
    return c.outcome(std::to_string(rects) + " rectangles, " + std::to_string(rings) + " rings, gosper orders 1-5");
}

std::set<std::string> random_frontier(Gen& g, const ClusterTree& tree, double p) {
    std::set<std::string> out;
    std::function<void(std::size_t)> walk = [&](std::size_t e) {
        if (tree.is_leaf(e) || !g.chance(p)) return;
        out.insert(tree.entry(e).id);
        for (std::size_t ch : tree.entry(e).children) walk(ch);
    };
    for (std::size_t e : tree.top()) walk(e);
    return out;
}

Outcome spacing_and_locality() {
    Checker c;
    Gen g(505);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::size_t> sizes(1 + g.below(20));
        std::size_t n = 0;
        for (auto& s : sizes) n += (s = 1 + g.below(60));
        const std::size_t length = n + g.below(4 * n + 1);
        const auto blanks = assign_blanks(sizes, length);
        std::size_t total = 0;
        for (std::size_t b : blanks) total += b;
        c.expect(total == length - n, "split " + std::to_string(trial) + " blanks sum to " + std::to_string(total));
    }
    std::size_t expansions = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = testing::random_partitions(g, 2 + g.below(40));
        const ClusterTree tree(p);
        const std::size_t n = p.node_count();
        const LayoutState before = assign_slots(tree, random_frontier(g, tree, 0.4), n + g.below(3 * n + 1));
        std::vector<const Run*> candidates;
        for (const Run& run : before.runs) {
            if (!tree.is_leaf(run.entry)) candidates.push_back(&run);
        }
        if (candidates.empty()) continue;
        const Run& run = *candidates[g.below(candidates.size())];
        const std::string id = tree.entry(run.entry).id;
        const LayoutState after = expand_cluster(before, id, tree);
        ++expansions;
        const SlotExtent parent = before.extents.at(id);
        const auto members = tree.members(run.entry);
        const std::string tag = "expansion " + std::to_string(trial) + " of " + id;
        for (std::size_t v = 0; v < n; ++v) {
            const bool inside = std::find(members.begin(), members.end(), v) != members.end();
            if (inside) {
                c.expect(after.node_slot[v] >= parent.begin && after.node_slot[v] < parent.begin + parent.extent,
                         tag + " moves a member outside the parent extent");
            } else {
                c.expect(after.node_slot[v] == before.node_slot[v], tag + " moves a node outside the parent");
            }
        }
        for (const Run& other : before.runs) {
            if (other.entry == run.entry) continue;
            const std::string oid = tree.entry(other.entry).id;
            c.expect(after.extents.at(oid) == before.extents.at(oid), tag + " changes the extent of " + oid);
        }
    }
    return c.outcome("1000 blank splits, " + std::to_string(expansions) + " expansions");
}

Outcome auto_expansion() {
    Checker c;
    Gen g(606);
    const double k = 0.3;
    std::size_t frontier_clusters = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = testing::random_partitions(g, 1 + g.below(80));
        const ClusterTree tree(p);
        const std::size_t n = p.node_count();
        const auto expanded = auto_expand(tree, n, k);
        for (std::size_t e : order_nodes(tree, expanded)) {
            if (tree.is_leaf(e)) continue;
            ++frontier_clusters;
            const auto& entry = tree.entry(e);
            const std::string tag = "hierarchy " + std::to_string(trial) + " cluster " + entry.id;
            c.expect(entry.children.size() >= 2, tag + " has a single child");
            c.expect(static_cast<double>(entry.size) <= k * static_cast<double>(n), tag + " exceeds k*N");
        }
        // A fixpoint: applying the rule again changes nothing.
        std::set<std::string> again = expanded;
        for (std::size_t e : order_nodes(tree, expanded)) {
            const auto& entry = tree.entry(e);
            if (!tree.is_leaf(e) && (entry.children.size() == 1 || entry.size > k * n)) again.insert(entry.id);
        }
        c.expect(again == expanded, "hierarchy " + std::to_string(trial) + " is not a fixpoint");
    }
    return c.outcome("1000 hierarchies, " + std::to_string(frontier_clusters) + " collapsed frontier clusters checked");
}

Outcome hulls_and_labels() {
    Checker c;
    Gen g(707);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pts = testing::random_cluster_points(g, 1 + g.below(60), 0.1);
        HullOptions opt;
        opt.padding = g.real(0.01, 0.1);
        const auto poly = concave_hull(pts, opt);
        const std::string tag = "cluster " + std::to_string(trial);
        c.expect(is_simple_polygon(poly), tag + " hull is not simple");
        for (const auto& p : pts) c.expect(strictly_inside(p, poly), tag + " leaves a member outside");
    }
    std::size_t anchors = 0;
    for (int trial = 0; anchors < 200 && trial < 2000; ++trial) {
        const auto p = testing::random_partitions(g, 3 + g.below(50));
        const CurveKind kind = trial % 2 ? CurveKind::gosper : CurveKind::gilbert_ring;
        const SideLayout side(p, kind, p.nodes(), LayoutConfig{});
        std::set<std::string> expanded = side.initial_expansion();
        for (const Run& run : side.view(expanded).state.runs) {
            if (!side.tree().is_leaf(run.entry) && g.chance(0.5)) expanded.insert(side.tree().entry(run.entry).id);
        }
        const SideView v = side.view(expanded);
        for (const auto& shape : v.clusters) {
            const std::string tag = "view " + std::to_string(trial) + " cluster " + shape.id;
            for (std::size_t m : shape.members) c.expect(strictly_inside(v.positions[m], shape.polygon), tag + " leaves a member outside");
            const std::size_t parent = side.tree().entry(*side.tree().find(shape.id)).parent;
            if (parent == ClusterTree::npos || !expanded.contains(side.tree().entry(parent).id)) continue;
            const ClusterShape* ps = v.find_cluster(side.tree().entry(parent).id);
            const Point dir = shape.centroid - ps->centroid;
            if (std::hypot(dir.x, dir.y) < 1e-12) continue;  // no direction to cast along
            ++anchors;
            const double d = distance_to_boundary(shape.anchor, ps->polygon);
            c.expect(d <= 1e-6, tag + " anchor is " + fmt("%.3e", d) + " off the parent border");
        }
    }
    c.expect(anchors >= 200, "only " + std::to_string(anchors) + " sub-label anchors were exercised");
    return c.outcome("200 random hulls, " + std::to_string(anchors) + " sub-label anchors");
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run(const std::string& cmd) {
    const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return rc;
}

Outcome pipeline_determinism(const std::string& cli, const std::string& corpus, const fs::path& work) {
    Checker c;
    std::vector<std::vector<std::string>> outputs;
    for (int round = 1; round <= 2; ++round) {
        const fs::path dir = work / ("run" + std::to_string(round));
        fs::remove_all(dir);
        fs::create_directories(dir);
        const std::string a = (dir / "prepared.json").string();
        const std::string b = (dir / "clustered.json").string();
        const std::string svg = (dir / "view.svg").string();
        const std::string view = (dir / "view.json").string();
        const std::string q = "'";
        c.expect(run(cli + " prepare --mock --input " + q + corpus + q + " --out " + q + a + q) == 0, "prepare failed");
        c.expect(run(cli + " cluster --mock --artifact " + q + a + q + " --out " + q + b + q) == 0, "cluster failed");
        c.expect(run(cli + " layout --artifact " + q + b + q + " --svg " + q + svg + q + " --view " + q + view + q) == 0,
                 "layout failed");
        outputs.push_back({read_file(a), read_file(b), read_file(svg), read_file(view)});
    }
    const char* names[] = {"prepared artifact", "clustered artifact", "svg", "view json"};
    for (std::size_t i = 0; i < 4; ++i) {
        c.expect(!outputs[0][i].empty(), std::string(names[i]) + " is empty");
        c.expect(outputs[0][i] == outputs[1][i], std::string(names[i]) + " differs between runs");
    }
    return c.outcome("artifacts, svg and view byte-identical across two runs");
}

// Picks the next action from the current view so the script stays valid.
json next_action(int step, const json& view, const Artifact& a) {
    auto collapsed = [&](const char* side) -> std::string {
        if (view.at(side).is_null()) return {};
        for (const auto& c : view.at(side).at("clusters")) {
            if (!c.at("expanded").get<bool>() && c.at("members").size() > 1) return c.at("id");
        }
        return {};
    };
    auto expanded = [&](const char* side) -> std::string {
        if (view.at(side).is_null()) return {};
        for (const auto& c : view.at(side).at("clusters")) {
            if (c.at("expanded").get<bool>()) return c.at("id");
        }
        return {};
    };
    auto live_docs = [&](std::size_t count, std::size_t offset) {
        json ids = json::array();
        const auto& nodes = view.at("documents").at("nodes");
        for (std::size_t i = 0; i < count && i < nodes.size(); ++i) ids.push_back(nodes[(i + offset) % nodes.size()].at("id"));
        return ids;
    };
    static const char* queries[] = {"election turnout", "vaccine trial", "transfer window", "carbon emissions",
                                    "antitrust ruling"};
    switch (step % 10) {
        case 0: {
            const std::string id = collapsed("documents");
            if (!id.empty()) return {{"type", "expand"}, {"side", "documents"}, {"cluster", id}};
            return {{"type", "clear_selection"}};
        }
        case 1: return {{"type", "search"}, {"query", queries[(step / 10) % 5]}, {"threshold", 0.2}};
        case 2: {
            const std::string id = collapsed("keywords");
            if (!id.empty()) return {{"type", "expand"}, {"side", "keywords"}, {"cluster", id}};
            return {{"type", "clear_search"}};
        }
        case 3: return {{"type", "chat"}, {"question", "What links these stories?"}, {"doc_ids", live_docs(3, step)}};
        case 4: {
            json ids = json::array();
            for (std::size_t i = step % 3; i < a.documents.size(); i += 2) ids.push_back(a.documents[i].id);
            return {{"type", "filter"}, {"doc_ids", ids}};
        }
        case 5: return {{"type", "select"}, {"side", "documents"}, {"cluster", view.at("documents").at("clusters")[0].at("id")}};
        case 6: {
            const std::string id = expanded("documents");
            if (!id.empty()) return {{"type", "collapse"}, {"side", "documents"}, {"cluster", id}};
            return {{"type", "clear_selection"}};
        }
        case 7: return {{"type", "chat"}, {"question", "Summarize the selection."}, {"doc_ids", live_docs(2, step + 1)},
                        {"mode", "full"}};
        case 8: return {{"type", "search"}, {"query", queries[(step / 10 + 2) % 5]}, {"threshold", 0.0}};
        default: return {{"type", "clear_filter"}};
    }
}

HttpResponse send(Service& service, const std::string& session, const json& action) {
    if (action.at("type") == "chat") {
        json body = action;
        body.erase("type");
        return service.handle("POST", "/sessions/" + session + "/chat", body.dump());
    }
    return service.handle("POST", "/sessions/" + session + "/actions", json{{"action", action}}.dump());
}

Outcome service_replay(const std::string& corpus, const fs::path& work) {
    Checker c;
    MockProvider provider;
    PipelineConfig cfg;
    cfg.backoff = std::chrono::milliseconds(0);
    Pipeline pipeline(provider, cfg);
    auto artifact = std::make_shared<const Artifact>(prepare_artifact(read_corpus_jsonl(corpus), pipeline));

    // Record: a fresh service, actions chosen from the evolving view.
    json script = json::array();
    json recorded_final;
    {
        Service service(artifact, nullptr);
        const HttpResponse created = service.handle("POST", "/sessions", "{}");
        c.expect(created.status == 201, "recording session not created");
        const std::string id = created.body.at("session");
        json view = created.body.at("view");
        for (int step = 0; step < 30; ++step) {
            const json action = next_action(step, view, *artifact);
            const HttpResponse r = send(service, id, action);
            c.expect(r.status == 200, "recorded step " + std::to_string(step) + " (" + action.dump() + ") returned " +
                                          std::to_string(r.status) + ": " + r.body.dump());
            script.push_back(action);
            view = service.handle("GET", "/sessions/" + id + "/view", "").body;
        }
        recorded_final = view;
    }
    std::ofstream(work / "replay_script.json") << script.dump(2) << "\n";

    // Replay: another fresh service reads the script back from disk.
    const json loaded = json::parse(read_file(work / "replay_script.json"));
    Service service(artifact, nullptr);
    const std::string id = service.handle("POST", "/sessions", "{}").body.at("session");
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        c.expect(send(service, id, loaded[i]).status == 200, "replayed step " + std::to_string(i) + " failed");
    }
    const json replayed_final = service.handle("GET", "/sessions/" + id + "/view", "").body;
    std::set<std::string> kinds;
    for (const auto& a : loaded) kinds.insert(a.at("type").get<std::string>());
    for (const char* k : {"expand", "filter", "search", "chat"}) c.expect(kinds.contains(k), std::string("script has no ") + k);
    c.expect(loaded.size() == 30, "script holds " + std::to_string(loaded.size()) + " actions");
    c.expect(replayed_final == recorded_final, "final view differs after replay");
    return c.outcome("30 actions, final view identical (" + std::to_string(recorded_final.dump().size()) + " bytes)");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::fprintf(stderr, "usage: %s <hints-binary> <corpus.jsonl> <workdir>\n", argv[0]);
        return 2;
    }
    const std::string cli = argv[1];
    const std::string corpus = argv[2];
    const fs::path work = argv[3];
    fs::create_directories(work);

    struct Criterion {
        const char* name;
        double limit_seconds;  // 0 for none
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"duality", 5.0, duality},
        {"connectivity-oracle", 0.0, connectivity_oracle},
        {"blend-endpoints", 0.0, blend_endpoints},
        {"agglomeration", 30.0, agglomeration},
        {"curves", 0.0, curves},
        {"spacing-locality", 0.0, spacing_and_locality},
        {"auto-expansion", 0.0, auto_expansion},
        {"hulls-labels", 0.0, hulls_and_labels},
        {"pipeline-determinism", 60.0, [&] { return pipeline_determinism(cli, corpus, work); }},
        {"service-replay", 0.0, [&] { return service_replay(corpus, work); }},
    };

    int failed = 0;
    for (const auto& cr : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (cr.limit_seconds > 0 && secs >= cr.limit_seconds) {
            o.ok = false;
            o.detail += "; took " + fmt("%.2f", secs) + " s, limit " + fmt("%.0f", cr.limit_seconds) + " s";
        }
        std::printf("%s %-22s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", cr.name, secs, o.detail.c_str());
        std::fflush(stdout);
        failed += o.ok ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed;
}
