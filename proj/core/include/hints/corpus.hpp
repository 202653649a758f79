#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hints {

using Embedding = std::vector<double>;

/// One corpus item plus everything the preparation stages derive from it.
struct Document {
    std::string id;
    std::string title;
    std::string content;
    std::optional<std::string> date;

    std::string summary;
    std::string event;
    std::string trigger;
    std::vector<std::string> mentioned_keywords;  // keyword ids, no duplicates
    Embedding embedding;
    std::vector<std::string> flags;  // stages that degraded for this record

    friend bool operator==(const Document&, const Document&) = default;
};

/// Canonicalized keyword. Several extracted surface strings may map here.
struct KeywordEntity {
    std::string id;
    std::vector<std::string> surface_forms;
    std::string display_title;
    std::string explanation;
    Embedding embedding;

    friend bool operator==(const KeywordEntity&, const KeywordEntity&) = default;
};

/// Reads `{"id", "title", "content", "date"?}` records, one per line.
/// Blank lines are skipped; ids must be unique.
std::vector<Document> read_corpus_jsonl(std::istream& in);
std::vector<Document> read_corpus_jsonl(const std::filesystem::path& path);

double norm(std::span<const double> v);

/// Returns `v / |v|`. Throws DomainError for a zero or non-finite vector.
Embedding normalized(std::span<const double> v);

}  // namespace hints
