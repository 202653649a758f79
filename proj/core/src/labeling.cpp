#include "hints/labeling.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>

#include "hints/error.hpp"
#include "hints/parallel.hpp"

namespace hints {

std::vector<std::size_t> allocate_samples(std::span<const std::size_t> child_sizes, std::size_t capacity) {
    const std::size_t k = child_sizes.size();
    if (k == 0 || capacity < k) return {};
    std::size_t total = 0;
    for (std::size_t s : child_sizes) {
        if (s == 0) throw InputError("child cluster without members");
        total += s;
    }
    capacity = std::min(capacity, total);
    std::vector<std::size_t> counts(k, 1);
    const std::size_t rest = capacity - k;
    std::size_t given = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t share = std::min(rest * child_sizes[i] / total, child_sizes[i] - 1);
        counts[i] += share;
        given += share;
    }
    std::vector<std::size_t> by_size(k);
    std::iota(by_size.begin(), by_size.end(), 0);
    std::stable_sort(by_size.begin(), by_size.end(),
                     [&](std::size_t a, std::size_t b) { return child_sizes[a] > child_sizes[b]; });
    while (given < rest) {
        bool progressed = false;
        for (std::size_t i : by_size) {
            if (given == rest) break;
            if (counts[i] < child_sizes[i]) {
                ++counts[i];
                ++given;
                progressed = true;
            }
        }
        if (!progressed) break;
    }
    return counts;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed, const std::string& salt) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : salt) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::mt19937_64 rng(seed ^ h);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    // Hand-rolled so the order does not depend on the standard library's shuffle.
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

namespace {

std::string clean_label(const std::string& reply) {
    std::string line = reply.substr(0, reply.find('\n'));
    auto strip = [](unsigned char c) { return std::isspace(c) || c == '"' || c == '\'' || c == '[' || c == ']'; };
    while (!line.empty() && strip(static_cast<unsigned char>(line.front()))) line.erase(line.begin());
    while (!line.empty() && strip(static_cast<unsigned char>(line.back()))) line.pop_back();
    return line;
}

std::string numbered(const std::vector<std::string>& texts, Domain domain) {
    const std::string word = domain == Domain::news ? "Article " : "Abstract ";
    std::string out;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (i) out += "\n";
        out += word + std::to_string(i + 1) + ": " + texts[i];
    }
    return out;
}

// Child cluster indices (on level - 1) of cluster `index` on `level`, canonical order.
std::vector<std::size_t> children_of(const PartitionSequence& p, std::size_t level, std::size_t index) {
    std::vector<std::size_t> out;
    const auto& lower = p.level(level - 1);
    const auto& upper = p.level(level);
    std::vector<bool> seen(p.cluster_count(level - 1), false);
    for (std::size_t v = 0; v < p.node_count(); ++v) {
        if (upper[v] == index && !seen[lower[v]]) {
            seen[lower[v]] = true;
            out.push_back(lower[v]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ChatMessage> bottom_prompt(const std::vector<std::size_t>& members, const std::string& salt,
                                       const std::vector<std::string>& summaries, Pipeline& pipeline) {
    const auto& cfg = pipeline.config();
    const auto& tmpl = prompt_template(PromptId::label_bottom, cfg.domain);
    const auto perm = seeded_permutation(members.size(), cfg.seed, salt);
    auto fits = [&](const std::vector<ChatMessage>& m) { return pipeline.provider().token_count(m) <= cfg.token_budget; };

    std::vector<std::string> chosen;
    std::vector<ChatMessage> best;
    for (std::size_t c = 0; c < perm.size(); ++c) {
        chosen.push_back(summaries[members[perm[c]]]);
        auto rendered = render(tmpl, {{"articles", numbered(chosen, cfg.domain)}});
        if (!fits(rendered)) break;
        best = std::move(rendered);
    }
    if (!best.empty()) return best;

    // Not even one summary fits whole; cut the first one down.
    std::string text = summaries[members[perm[0]]];
    std::size_t lo = 0;
    std::size_t hi = text.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (fits(render(tmpl, {{"articles", numbered({text.substr(0, mid)}, cfg.domain)}}))) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    auto rendered = render(tmpl, {{"articles", numbered({text.substr(0, lo)}, cfg.domain)}});
    if (!fits(rendered)) throw ConfigError("token budget cannot hold the labeling prompt", {{"budget", cfg.token_budget}});
    pipeline.warn("cluster " + salt + ": summary truncated to fit the token budget");
    return rendered;
}

}  // namespace

std::vector<ChatMessage> topic_label_prompt(const PartitionSequence& p, std::size_t level, std::size_t index,
                                            const std::vector<std::string>& summaries,
                                            const std::map<std::string, std::string>& child_labels,
                                            Pipeline& pipeline) {
    const std::string id = PartitionSequence::cluster_id(level, index);
    if (level == 1) return bottom_prompt(p.members(1, index), id, summaries, pipeline);

    const auto& cfg = pipeline.config();
    const auto& tmpl = prompt_template(PromptId::label_intermediate, cfg.domain);
    auto fits = [&](const std::vector<ChatMessage>& m) { return pipeline.provider().token_count(m) <= cfg.token_budget; };

    const auto children = children_of(p, level, index);
    std::string sub_topics;
    std::vector<std::vector<std::size_t>> pools;
    std::vector<std::size_t> sizes;
    std::size_t total = 0;
    for (std::size_t c : children) {
        const std::string child_id = PartitionSequence::cluster_id(level - 1, c);
        auto it = child_labels.find(child_id);
        sub_topics += (sub_topics.empty() ? "" : ", ") + (it == child_labels.end() ? child_id : it->second);
        auto members = p.members(level - 1, c);
        const auto perm = seeded_permutation(members.size(), cfg.seed, id + "/" + child_id);
        std::vector<std::size_t> pool;
        for (std::size_t i : perm) pool.push_back(members[i]);
        sizes.push_back(pool.size());
        total += pool.size();
        pools.push_back(std::move(pool));
    }

    std::vector<ChatMessage> best;
    for (std::size_t capacity = children.size(); capacity <= total; ++capacity) {
        const auto counts = allocate_samples(sizes, capacity);
        std::vector<std::string> chosen;
        for (std::size_t c = 0; c < children.size(); ++c) {
            for (std::size_t s = 0; s < counts[c]; ++s) chosen.push_back(summaries[pools[c][s]]);
        }
        auto rendered = render(tmpl, {{"sub_topics", sub_topics}, {"articles", numbered(chosen, cfg.domain)}});
        if (!fits(rendered)) break;
        best = std::move(rendered);
    }
    if (!best.empty()) return best;

    pipeline.warn("cluster " + id + ": token budget too small for one summary per sub-topic, labeled from sub-topics only");
    auto rendered = render(tmpl, {{"sub_topics", sub_topics}, {"articles", ""}});
    if (!fits(rendered)) throw ConfigError("token budget cannot hold the sub-topic list", {{"cluster", id}});
    return rendered;
}

std::map<std::string, std::string> generate_topic_labels(const PartitionSequence& partitions,
                                                         const std::vector<std::string>& summaries,
                                                         Pipeline& pipeline) {
    if (summaries.size() != partitions.node_count()) throw InputError("one summary per node is required");
    std::map<std::string, std::string> labels;
    for (std::size_t level = 1; level <= partitions.level_count(); ++level) {
        const std::size_t count = partitions.cluster_count(level);
        std::vector<std::string> results(count);
        parallel_for(count, pipeline.config().concurrency, [&](std::size_t i) {
            const auto prompt = topic_label_prompt(partitions, level, i, summaries, labels, pipeline);
            const std::string id = PartitionSequence::cluster_id(level, i);
            try {
                results[i] = clean_label(pipeline.complete(
                    prompt, [](const std::string& r) { return !clean_label(r).empty(); }, "label for " + id));
            } catch (const PipelineError&) {
                pipeline.warn("cluster " + id + ": no label generated");
                results[i] = "Topic " + id;
            }
        });
        for (std::size_t i = 0; i < count; ++i) labels[PartitionSequence::cluster_id(level, i)] = results[i];
    }
    return labels;
}

std::map<std::string, std::string> generate_keyword_labels(const PartitionSequence& partitions,
                                                           const std::vector<std::string>& titles,
                                                           Pipeline& pipeline) {
    if (titles.size() != partitions.node_count()) throw InputError("one title per node is required");
    const auto& cfg = pipeline.config();
    const auto& tmpl = prompt_template(PromptId::label_keywords, cfg.domain);
    std::map<std::string, std::string> labels;
    for (std::size_t level = 1; level <= partitions.level_count(); ++level) {
        const std::size_t count = partitions.cluster_count(level);
        std::vector<std::string> results(count);
        parallel_for(count, cfg.concurrency, [&](std::size_t i) {
            const std::string id = PartitionSequence::cluster_id(level, i);
            const auto members = partitions.members(level, i);
            const auto perm = seeded_permutation(members.size(), cfg.seed, id);
            std::vector<std::size_t> picked;
            std::vector<ChatMessage> best;
            for (std::size_t c = 0; c < perm.size(); ++c) {
                picked.push_back(members[perm[c]]);
                auto ordered = picked;
                std::sort(ordered.begin(), ordered.end());
                std::string list;
                for (std::size_t m : ordered) list += (list.empty() ? "" : ", ") + titles[m];
                auto rendered = render(tmpl, {{"entities", list}});
                if (pipeline.provider().token_count(rendered) > cfg.token_budget) break;
                best = std::move(rendered);
            }
            if (best.empty()) throw ConfigError("token budget cannot hold one keyword", {{"cluster", id}});
            try {
                results[i] = clean_label(pipeline.complete(
                    best, [](const std::string& r) { return !clean_label(r).empty(); }, "label for " + id));
            } catch (const PipelineError&) {
                pipeline.warn("keyword cluster " + id + ": no label generated");
                results[i] = titles[members.front()];
            }
        });
        for (std::size_t i = 0; i < count; ++i) labels[PartitionSequence::cluster_id(level, i)] = results[i];
    }
    return labels;
}

}  // namespace hints
