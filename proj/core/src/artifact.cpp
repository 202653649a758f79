#include "hints/artifact.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hints/error.hpp"
#include "hints/labeling.hpp"

namespace hints {

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& why) {
    throw InputError("artifact field '" + path + "' " + why, {{"path", path}});
}

const nlohmann::json& field(const nlohmann::json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) invalid(path, "is not an object");
    auto it = j.find(key);
    if (it == j.end()) invalid(path.empty() ? key : path + "." + key, "is missing");
    return *it;
}

std::string string_field(const nlohmann::json& j, const std::string& key, const std::string& path) {
    const auto& v = field(j, key, path);
    if (!v.is_string()) invalid(path + "." + key, "is not a string");
    return v.get<std::string>();
}

std::vector<std::string> string_list(const nlohmann::json& j, const std::string& key, const std::string& path) {
    const auto& v = field(j, key, path);
    if (!v.is_array()) invalid(path + "." + key, "is not an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) invalid(path + "." + key + "[" + std::to_string(i) + "]", "is not a string");
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

Embedding embedding_field(const nlohmann::json& j, const std::string& path, std::size_t dim) {
    const std::string p = path + ".embedding";
    auto it = j.find("embedding");
    if (it == j.end() || it->is_null()) invalid(p, "is missing");
    if (!it->is_array() || it->empty()) invalid(p, "is not a vector");
    Embedding e;
    for (const auto& x : *it) {
        if (!x.is_number()) invalid(p, "holds a non-number");
        e.push_back(x.get<double>());
    }
    if (e.size() != dim) invalid(p, "has dimension " + std::to_string(e.size()) + ", expected " + std::to_string(dim));
    if (std::fabs(norm(e) - 1.0) > 1e-6) invalid(p, "is not unit length");
    return e;
}

}  // namespace

nlohmann::json to_json(const PartitionSequence& p) {
    return {{"nodes", p.nodes()}, {"levels", p.levels()}, {"labels", p.labels()}};
}

PartitionSequence partition_from_json(const nlohmann::json& j, const std::string& path) {
    try {
        auto nodes = j.at("nodes").get<std::vector<std::string>>();
        auto levels = j.at("levels").get<std::vector<std::vector<std::size_t>>>();
        PartitionSequence p(std::move(nodes), std::move(levels));
        if (j.contains("labels")) p.labels() = j.at("labels").get<std::map<std::string, std::string>>();
        return p;
    } catch (const nlohmann::json::exception& e) {
        invalid(path, std::string("is malformed: ") + e.what());
    } catch (const StructuralError& e) {
        invalid(path, std::string("is not a nested partition sequence: ") + e.what());
    }
}

Hypergraph Artifact::document_hypergraph() const { return build_document_hypergraph(documents, keywords).graph; }

std::vector<Embedding> Artifact::keyword_embeddings(const Hypergraph& keyword_graph) const {
    std::vector<Embedding> out;
    out.reserve(keyword_graph.node_count());
    for (const auto& id : keyword_graph.nodes()) {
        const KeywordEntity* k = find_keyword(id);
        if (k == nullptr) throw StructuralError("keyword node '" + id + "' has no entity");
        out.push_back(k->embedding);
    }
    return out;
}

const Document* Artifact::find_document(const std::string& id) const {
    for (const auto& d : documents) {
        if (d.id == id) return &d;
    }
    return nullptr;
}

const KeywordEntity* Artifact::find_keyword(const std::string& id) const {
    for (const auto& k : keywords) {
        if (k.id == id) return &k;
    }
    return nullptr;
}

nlohmann::json to_json(const Artifact& a) {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : a.documents) {
        nlohmann::json j = {{"id", d.id},
                            {"title", d.title},
                            {"content", d.content},
                            {"summary", d.summary},
                            {"event", d.event},
                            {"trigger", d.trigger},
                            {"mentioned_keywords", d.mentioned_keywords},
                            {"embedding", d.embedding},
                            {"flags", d.flags}};
        if (d.date) j["date"] = *d.date;
        docs.push_back(std::move(j));
    }
    nlohmann::json kws = nlohmann::json::array();
    for (const auto& k : a.keywords) {
        kws.push_back({{"id", k.id},
                       {"surface_forms", k.surface_forms},
                       {"display_title", k.display_title},
                       {"explanation", k.explanation},
                       {"embedding", k.embedding}});
    }
    nlohmann::json partitions = {
        {"documents", a.document_partitions ? to_json(*a.document_partitions) : nlohmann::json(nullptr)},
        {"keywords", a.keyword_partitions ? to_json(*a.keyword_partitions) : nlohmann::json(nullptr)}};
    return {{"format", artifact_format},
            {"domain", to_string(a.domain)},
            {"embedding_dim", a.embedding_dim},
            {"alpha", a.alpha},
            {"documents", docs},
            {"keywords", kws},
            {"partitions", partitions},
            {"report", a.report}};
}

Artifact artifact_from_json(const nlohmann::json& j) {
    Artifact a;
    if (!j.is_object()) invalid("", "is not a JSON object");
    if (string_field(j, "format", "") != artifact_format) invalid("format", "is not " + std::string(artifact_format));
    try {
        a.domain = parse_domain(string_field(j, "domain", ""));
    } catch (const ConfigError&) {
        invalid("domain", "names an unknown domain");
    }
    const auto& dim = field(j, "embedding_dim", "");
    if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0) invalid("embedding_dim", "is not a positive integer");
    a.embedding_dim = dim.get<std::size_t>();
    if (j.contains("alpha")) a.alpha = j.at("alpha").get<double>();

    const auto& docs = field(j, "documents", "");
    if (!docs.is_array() || docs.empty()) invalid("documents", "must be a nonempty array");
    std::set<std::string> doc_ids;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const std::string path = "documents[" + std::to_string(i) + "]";
        const auto& dj = docs[i];
        Document d;
        d.id = string_field(dj, "id", path);
        if (!doc_ids.insert(d.id).second) invalid(path + ".id", "repeats '" + d.id + "'");
        d.title = string_field(dj, "title", path);
        d.content = string_field(dj, "content", path);
        if (dj.contains("date") && dj.at("date").is_string()) d.date = dj.at("date").get<std::string>();
        d.summary = string_field(dj, "summary", path);
        d.event = dj.value("event", std::string{});
        d.trigger = dj.value("trigger", std::string{});
        d.mentioned_keywords = string_list(dj, "mentioned_keywords", path);
        d.embedding = embedding_field(dj, path, a.embedding_dim);
        if (dj.contains("flags")) d.flags = string_list(dj, "flags", path);
        a.documents.push_back(std::move(d));
    }

    const auto& kws = field(j, "keywords", "");
    if (!kws.is_array()) invalid("keywords", "is not an array");
    std::set<std::string> kw_ids;
    for (std::size_t i = 0; i < kws.size(); ++i) {
        const std::string path = "keywords[" + std::to_string(i) + "]";
        const auto& kj = kws[i];
        KeywordEntity k;
        k.id = string_field(kj, "id", path);
        if (!kw_ids.insert(k.id).second) invalid(path + ".id", "repeats '" + k.id + "'");
        k.surface_forms = string_list(kj, "surface_forms", path);
        if (k.surface_forms.empty()) invalid(path + ".surface_forms", "is empty");
        k.display_title = string_field(kj, "display_title", path);
        if (k.display_title.empty()) invalid(path + ".display_title", "is empty");
        k.explanation = string_field(kj, "explanation", path);
        k.embedding = embedding_field(kj, path, a.embedding_dim);
        a.keywords.push_back(std::move(k));
    }
    for (std::size_t i = 0; i < a.documents.size(); ++i) {
        for (std::size_t m = 0; m < a.documents[i].mentioned_keywords.size(); ++m) {
            if (!kw_ids.contains(a.documents[i].mentioned_keywords[m])) {
                invalid("documents[" + std::to_string(i) + "].mentioned_keywords[" + std::to_string(m) + "]",
                        "references an unknown keyword");
            }
        }
    }

    const auto& parts = field(j, "partitions", "");
    const auto& dp = field(parts, "documents", "partitions");
    if (dp.is_null()) invalid("partitions.documents", "is missing");
    a.document_partitions = partition_from_json(dp, "partitions.documents");
    const Hypergraph hd = a.document_hypergraph();
    if (a.document_partitions->nodes() != hd.nodes()) {
        invalid("partitions.documents.nodes", "does not list the documents in order");
    }
    const Hypergraph hk = dualize(hd);
    const auto& kp = field(parts, "keywords", "partitions");
    if (kp.is_null()) {
        if (hk.node_count() > 0) invalid("partitions.keywords", "is missing");
    } else {
        a.keyword_partitions = partition_from_json(kp, "partitions.keywords");
        if (a.keyword_partitions->nodes() != hk.nodes()) {
            invalid("partitions.keywords.nodes", "does not list the mentioned keywords in order");
        }
    }
    if (j.contains("report")) a.report = j.at("report");
    return a;
}

std::string dump_artifact(const Artifact& artifact) { return to_json(artifact).dump(2) + "\n"; }

Artifact load_artifact(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open artifact " + path.string(), {{"path", path.string()}});
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("artifact is not valid JSON: " + std::string(e.what()), {{"path", path.string()}});
    }
    return artifact_from_json(j);
}

void save_artifact(const Artifact& artifact, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string(), {{"path", path.string()}});
    out << dump_artifact(artifact);
}

void cluster_artifact(Artifact& a, Pipeline& pipeline, double alpha) {
    ClusteringParams params{alpha};
    a.alpha = alpha;
    const Hypergraph hd = a.document_hypergraph();
    std::vector<Embedding> doc_vectors;
    std::vector<std::string> summaries;
    for (const auto& d : a.documents) {
        doc_vectors.push_back(d.embedding);
        summaries.push_back(d.summary);
    }
    PartitionSequence docs = agglomerate(hd, doc_vectors, params);
    docs.labels() = generate_topic_labels(docs, summaries, pipeline);
    a.document_partitions = std::move(docs);

    const Hypergraph hk = dualize(hd);
    if (hk.node_count() == 0) {
        a.keyword_partitions.reset();
        return;
    }
    PartitionSequence kws = agglomerate(hk, a.keyword_embeddings(hk), params);
    std::vector<std::string> titles;
    for (const auto& id : hk.nodes()) titles.push_back(a.find_keyword(id)->display_title);
    kws.labels() = generate_keyword_labels(kws, titles, pipeline);
    a.keyword_partitions = std::move(kws);
}

Artifact prepare_artifact(std::vector<Document> documents, Pipeline& pipeline) {
    auto output = pipeline.run(std::move(documents));
    Artifact a;
    a.domain = pipeline.config().domain;
    a.documents = std::move(output.documents);
    a.keywords = std::move(output.keywords);
    a.embedding_dim = a.documents.front().embedding.size();
    const auto build = build_document_hypergraph(a.documents, a.keywords);
    cluster_artifact(a, pipeline, pipeline.config().alpha);
    auto report = pipeline.report();
    report.dropped_keywords = build.dropped_keywords;
    a.report = report.to_json();
    return a;
}

}  // namespace hints
