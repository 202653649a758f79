#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hints {

/// Nested partitions produced by agglomeration. Level 1 is the partition after
/// the first merge pass; the last level holds every node in one cluster.
///
/// `levels[l][v]` is the cluster index of node `v` on level `l + 1`. Cluster
/// indices on a level are numbered by first occurrence in node order, so two
/// sequences describing the same partitions compare equal.
class PartitionSequence {
public:
    PartitionSequence() = default;
    /// Canonicalizes cluster numbering, then validates nesting.
    PartitionSequence(std::vector<std::string> nodes, std::vector<std::vector<std::size_t>> levels);

    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t level_count() const noexcept { return levels_.size(); }
    const std::vector<std::vector<std::size_t>>& levels() const noexcept { return levels_; }
    /// `level` is 1-based.
    const std::vector<std::size_t>& level(std::size_t level) const { return levels_.at(level - 1); }
    std::size_t cluster_count(std::size_t level) const { return cluster_counts_.at(level - 1); }

    /// Members of cluster `index` on `level`, ascending node indices.
    std::vector<std::size_t> members(std::size_t level, std::size_t index) const;
    /// Cluster index on `level + 1` that contains cluster `index` of `level`.
    std::size_t parent_index(std::size_t level, std::size_t index) const;

    static std::string cluster_id(std::size_t level, std::size_t index);
    struct ClusterRef {
        std::size_t level;
        std::size_t index;
        friend bool operator==(const ClusterRef&, const ClusterRef&) = default;
    };
    /// Parses and range-checks an id produced by cluster_id().
    std::optional<ClusterRef> find_cluster(const std::string& id) const;

    std::map<std::string, std::string>& labels() noexcept { return labels_; }
    const std::map<std::string, std::string>& labels() const noexcept { return labels_; }
    std::string label(const std::string& cluster_id) const;

    friend bool operator==(const PartitionSequence& a, const PartitionSequence& b) {
        return a.nodes_ == b.nodes_ && a.levels_ == b.levels_ && a.labels_ == b.labels_;
    }

private:
    std::vector<std::string> nodes_;
    std::vector<std::vector<std::size_t>> levels_;
    std::vector<std::size_t> cluster_counts_;
    std::map<std::string, std::string> labels_;
};

/// Relabels `assignment` so clusters are numbered by first occurrence.
std::vector<std::size_t> canonical_labels(const std::vector<std::size_t>& assignment);

}  // namespace hints
