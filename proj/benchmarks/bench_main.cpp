#include <benchmark/benchmark.h>

#include <random>

#include "divtriage/clusterer.hpp"
#include "divtriage/vectorizer.hpp"

using namespace divtriage;

namespace {

std::vector<std::string> synthetic_logs(int n) {
    std::mt19937_64 rng(1);
    std::vector<std::string> docs;
    std::uniform_int_distribution<int> words(20, 120), pick(0, 199);
    for (int d = 0; d < n; ++d) {
        std::string doc;
        int w = words(rng);
        for (int i = 0; i < w; ++i) doc += "token" + std::to_string(pick(rng)) + " ";
        docs.push_back(doc);
    }
    return docs;
}

std::vector<FeatureVector> synthetic_vectors(int n) {
    auto docs = synthetic_logs(n);
    Vocabulary vocab = fit(docs);
    std::vector<FeatureVector> out;
    for (const auto& d : docs) out.push_back(transform(vocab, d));
    return out;
}

}  // namespace

static void BM_FitTransform(benchmark::State& state) {
    auto docs = synthetic_logs(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Vocabulary vocab = fit(docs);
        for (const auto& d : docs) benchmark::DoNotOptimize(transform(vocab, d));
    }
}
BENCHMARK(BM_FitTransform)->Arg(100)->Arg(700);

static void BM_KMeans(benchmark::State& state) {
    auto vectors = synthetic_vectors(200);
    for (auto _ : state) benchmark::DoNotOptimize(kmeans(vectors, state.range(0), 42));
}
BENCHMARK(BM_KMeans)->Arg(4)->Arg(16);

static void BM_Silhouette(benchmark::State& state) {
    auto vectors = synthetic_vectors(static_cast<int>(state.range(0)));
    Clustering c = kmeans(vectors, 5, 42);
    for (auto _ : state)
        benchmark::DoNotOptimize(silhouette_score(vectors, c.assignments));
}
BENCHMARK(BM_Silhouette)->Arg(100)->Arg(200);

BENCHMARK_MAIN();
