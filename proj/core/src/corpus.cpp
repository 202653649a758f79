#include "hints/corpus.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "hints/error.hpp"

namespace hints {

namespace {

std::string required_string(const nlohmann::json& record, const char* field, std::size_t line) {
    auto it = record.find(field);
    if (it == record.end() || !it->is_string()) {
        throw InputError("corpus record is missing string field '" + std::string(field) + "'",
                         {{"line", line}, {"field", field}});
    }
    return it->get<std::string>();
}

}  // namespace

std::vector<Document> read_corpus_jsonl(std::istream& in) {
    std::vector<Document> docs;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw InputError("corpus line is not valid JSON", {{"line", line_no}, {"reason", e.what()}});
        }
        if (!record.is_object()) throw InputError("corpus line is not an object", {{"line", line_no}});
        Document doc;
        doc.id = required_string(record, "id", line_no);
        doc.title = required_string(record, "title", line_no);
        doc.content = required_string(record, "content", line_no);
        if (auto it = record.find("date"); it != record.end() && it->is_string()) {
            doc.date = it->get<std::string>();
        }
        if (!seen.insert(doc.id).second) {
            throw InputError("duplicate document id '" + doc.id + "'", {{"line", line_no}});
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<Document> read_corpus_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open corpus file " + path.string());
    return read_corpus_jsonl(in);
}

double norm(std::span<const double> v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

Embedding normalized(std::span<const double> v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero or non-finite vector");
    Embedding out(v.begin(), v.end());
    for (double& x : out) x /= n;
    return out;
}

}  // namespace hints
