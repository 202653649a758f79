#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hints/clustering.hpp"
#include "hints/curves.hpp"
#include "hints/hull.hpp"
#include "hints/hypergraph.hpp"
#include "hints/layout.hpp"

namespace {

using namespace hints;

// Documents mentioning 2-5 of n/4 keywords, unit embeddings in 64 dimensions.
struct Instance {
    Hypergraph graph;
    std::vector<Embedding> embeddings;
};

Instance make_instance(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t keywords = std::max<std::size_t>(2, n / 4);
    std::vector<std::string> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back("d" + std::to_string(i));
    std::vector<std::vector<std::size_t>> members(keywords);
    std::uniform_int_distribution<std::size_t> pick(0, keywords - 1);
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t count = 2 + rng() % 4;
        for (std::size_t k = 0; k < count; ++k) members[pick(rng)].push_back(v);
    }
    std::vector<std::string> edges;
    std::vector<std::vector<std::size_t>> kept;
    for (std::size_t k = 0; k < keywords; ++k) {
        auto& m = members[k];
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
        if (m.empty()) continue;
        edges.push_back("k" + std::to_string(k));
        kept.push_back(m);
    }
    Instance out{Hypergraph(HypergraphKind::document, nodes, edges, kept), {}};
    std::normal_distribution<double> normal;
    for (std::size_t v = 0; v < n; ++v) {
        Embedding e(64);
        double len = 0.0;
        for (auto& x : e) len += (x = normal(rng)) * x;
        for (auto& x : e) x /= std::sqrt(len);
        out.embeddings.push_back(std::move(e));
    }
    return out;
}

void BM_Agglomerate(benchmark::State& state) {
    const Instance inst = make_instance(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(agglomerate(inst.graph, inst.embeddings, {0.5}));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Agglomerate)->RangeMultiplier(2)->Range(16, 512)->Complexity();

void BM_Gosper(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(gosper_curve(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Gosper)->DenseRange(1, 5);

void BM_GilbertRing(benchmark::State& state) {
    const int w = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_ring(w, w, std::max(1, w / 5)));
}
BENCHMARK(BM_GilbertRing)->RangeMultiplier(2)->Range(8, 128);

void BM_ConcaveHull(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    std::vector<Point> pts;
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(state.range(0)))));
    for (int i = 0; i < state.range(0); ++i) pts.push_back({(i % side) + jitter(rng), (i / side) + jitter(rng)});
    HullOptions opt;
    opt.padding = 0.2;
    for (auto _ : state) benchmark::DoNotOptimize(concave_hull(pts, opt));
}
BENCHMARK(BM_ConcaveHull)->RangeMultiplier(4)->Range(4, 1024);

void BM_LargestRemainder(benchmark::State& state) {
    std::mt19937_64 rng(4);
    std::vector<std::size_t> weights(static_cast<std::size_t>(state.range(0)));
    for (auto& w : weights) w = 1 + rng() % 100;
    for (auto _ : state) benchmark::DoNotOptimize(largest_remainder(100000, weights));
}
BENCHMARK(BM_LargestRemainder)->Range(8, 4096);

}  // namespace
