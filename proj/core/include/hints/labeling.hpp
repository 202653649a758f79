#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hints/partition.hpp"
#include "hints/pipeline.hpp"

namespace hints {

/// Splits `capacity` sample slots over children: one each first, then the
/// rest proportionally to child size with leftovers to the largest children,
/// never exceeding a child's size. Empty when capacity < number of children.
std::vector<std::size_t> allocate_samples(std::span<const std::size_t> child_sizes, std::size_t capacity);

/// Deterministic Fisher-Yates shuffle of 0..n-1 seeded by `seed` and `salt`.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed, const std::string& salt);

/// Labels for every cluster of a document hierarchy: level-1 clusters from
/// member summaries, higher levels from child labels plus sampled summaries.
/// `summaries` is indexed like the partition nodes. One completion per cluster.
std::map<std::string, std::string> generate_topic_labels(const PartitionSequence& partitions,
                                                         const std::vector<std::string>& summaries,
                                                         Pipeline& pipeline);

/// Labels for every cluster of a keyword hierarchy from member display titles.
std::map<std::string, std::string> generate_keyword_labels(const PartitionSequence& partitions,
                                                           const std::vector<std::string>& titles,
                                                           Pipeline& pipeline);

/// The rendered prompt used for a cluster label, exposed for budget checks.
std::vector<ChatMessage> topic_label_prompt(const PartitionSequence& partitions, std::size_t level,
                                            std::size_t index, const std::vector<std::string>& summaries,
                                            const std::map<std::string, std::string>& child_labels,
                                            Pipeline& pipeline);

}  // namespace hints
