#include "hints/partition.hpp"

#include <charconv>
#include <unordered_map>

#include "hints/error.hpp"

namespace hints {

std::vector<std::size_t> canonical_labels(const std::vector<std::size_t>& assignment) {
    std::unordered_map<std::size_t, std::size_t> seen;
    std::vector<std::size_t> out;
    out.reserve(assignment.size());
    for (std::size_t a : assignment) {
        auto [it, inserted] = seen.emplace(a, seen.size());
        out.push_back(it->second);
    }
    return out;
}

PartitionSequence::PartitionSequence(std::vector<std::string> nodes, std::vector<std::vector<std::size_t>> levels)
    : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw StructuralError("partition sequence over an empty node set");
    if (levels.empty()) throw StructuralError("partition sequence has no levels");
    levels_.reserve(levels.size());
    for (std::size_t l = 0; l < levels.size(); ++l) {
        if (levels[l].size() != nodes_.size()) {
            throw StructuralError("level " + std::to_string(l + 1) + " does not cover every node");
        }
        levels_.push_back(canonical_labels(levels[l]));
        std::size_t count = 0;
        for (std::size_t c : levels_.back()) count = std::max(count, c + 1);
        cluster_counts_.push_back(count);
    }
    if (nodes_.size() > 1 && cluster_counts_[0] >= nodes_.size()) {
        throw StructuralError("level 1 merges nothing");
    }
    for (std::size_t l = 1; l < levels_.size(); ++l) {
        if (cluster_counts_[l] >= cluster_counts_[l - 1]) {
            throw StructuralError("level " + std::to_string(l + 1) + " does not coarsen level " + std::to_string(l));
        }
        std::vector<std::size_t> parent(cluster_counts_[l - 1], static_cast<std::size_t>(-1));
        for (std::size_t v = 0; v < nodes_.size(); ++v) {
            std::size_t child = levels_[l - 1][v];
            if (parent[child] == static_cast<std::size_t>(-1)) {
                parent[child] = levels_[l][v];
            } else if (parent[child] != levels_[l][v]) {
                throw StructuralError("level " + std::to_string(l + 1) + " splits a cluster of level " +
                                      std::to_string(l));
            }
        }
    }
    if (cluster_counts_.back() != 1) throw StructuralError("final level must hold a single cluster");
}

std::vector<std::size_t> PartitionSequence::members(std::size_t level, std::size_t index) const {
    const auto& assignment = this->level(level);
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < assignment.size(); ++v) {
        if (assignment[v] == index) out.push_back(v);
    }
    return out;
}

std::size_t PartitionSequence::parent_index(std::size_t level, std::size_t index) const {
    if (level >= levels_.size()) throw InputError("top level has no parent");
    const auto& assignment = this->level(level);
    for (std::size_t v = 0; v < assignment.size(); ++v) {
        if (assignment[v] == index) return levels_[level][v];
    }
    throw InputError("cluster index out of range");
}

std::string PartitionSequence::cluster_id(std::size_t level, std::size_t index) {
    return "c" + std::to_string(level) + "-" + std::to_string(index);
}

std::optional<PartitionSequence::ClusterRef> PartitionSequence::find_cluster(const std::string& id) const {
    if (id.size() < 4 || id[0] != 'c') return std::nullopt;
    auto dash = id.find('-', 1);
    if (dash == std::string::npos) return std::nullopt;
    ClusterRef ref{};
    const char* first = id.data() + 1;
    const char* mid = id.data() + dash;
    const char* last = id.data() + id.size();
    auto r1 = std::from_chars(first, mid, ref.level);
    if (r1.ec != std::errc{} || r1.ptr != mid) return std::nullopt;
    auto r2 = std::from_chars(mid + 1, last, ref.index);
    if (r2.ec != std::errc{} || r2.ptr != last) return std::nullopt;
    if (ref.level < 1 || ref.level > levels_.size()) return std::nullopt;
    if (ref.index >= cluster_counts_[ref.level - 1]) return std::nullopt;
    if (cluster_id(ref.level, ref.index) != id) return std::nullopt;  // rejects leading zeros
    return ref;
}

std::string PartitionSequence::label(const std::string& cluster_id) const {
    auto it = labels_.find(cluster_id);
    return it == labels_.end() ? std::string{} : it->second;
}

}  // namespace hints
