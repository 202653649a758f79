#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hints/clustering.hpp"
#include "hints/corpus.hpp"
#include "hints/hypergraph.hpp"
#include "hints/partition.hpp"
#include "hints/pipeline.hpp"
#include "hints/prompts.hpp"

namespace hints {

inline constexpr const char* artifact_format = "hints-artifact/1";

/// Processed corpus: documents, keyword entities and both hierarchies.
struct Artifact {
    Domain domain = Domain::news;
    std::size_t embedding_dim = 0;
    double alpha = 0.5;
    std::vector<Document> documents;
    std::vector<KeywordEntity> keywords;
    std::optional<PartitionSequence> document_partitions;
    std::optional<PartitionSequence> keyword_partitions;  // absent when no keyword is mentioned
    nlohmann::json report = nlohmann::json::object();

    Hypergraph document_hypergraph() const;
    /// Keyword embeddings in the node order of the keyword hypergraph.
    std::vector<Embedding> keyword_embeddings(const Hypergraph& keyword_graph) const;
    const Document* find_document(const std::string& id) const;
    const KeywordEntity* find_keyword(const std::string& id) const;
};

nlohmann::json to_json(const Artifact& artifact);
/// Validates while reading; InputError detail carries the offending field path.
Artifact artifact_from_json(const nlohmann::json& j);

Artifact load_artifact(const std::filesystem::path& path);
/// Two-space indented JSON with a trailing newline.
void save_artifact(const Artifact& artifact, const std::filesystem::path& path);
std::string dump_artifact(const Artifact& artifact);

nlohmann::json to_json(const PartitionSequence& p);
PartitionSequence partition_from_json(const nlohmann::json& j, const std::string& path);

/// Re-clusters both hypergraphs and regenerates all labels.
void cluster_artifact(Artifact& artifact, Pipeline& pipeline, double alpha);

/// Full preparation: pipeline stages, clustering and labeling.
Artifact prepare_artifact(std::vector<Document> documents, Pipeline& pipeline);

}  // namespace hints
