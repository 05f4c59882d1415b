#include <benchmark/benchmark.h>

#include "synthgame/attack.hpp"
#include "synthgame/fidelity.hpp"
#include "synthgame/generators.hpp"
#include "synthgame/stats.hpp"
#include "synthgame/toy.hpp"

using namespace synthgame;

namespace {

Table toy_table(size_t n) {
    static ToyData cache = make_toy(5000, 1);
    Rng rng(3);
    return sample_rows(cache.table, n, {}, {}, rng);
}

void BM_Spearman(benchmark::State& state) {
    Rng rng(1);
    size_t n = size_t(state.range(0));
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
    }
    for (auto _ : state) benchmark::DoNotOptimize(spearman(x, y));
}
BENCHMARK(BM_Spearman)->Arg(500)->Arg(5000);

void BM_KsScore(benchmark::State& state) {
    Rng rng(2);
    size_t n = size_t(state.range(0));
    std::vector<double> a(n), b(n);
    for (size_t i = 0; i < n; ++i) {
        a[i] = rng.normal();
        b[i] = rng.normal() + 0.2;
    }
    for (auto _ : state) benchmark::DoNotOptimize(ks_score(a, b));
}
BENCHMARK(BM_KsScore)->Arg(500)->Arg(5000);

void BM_CopulaFit(benchmark::State& state) {
    Table train = toy_table(size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fit_copula(train));
}
BENCHMARK(BM_CopulaFit)->Arg(250)->Arg(1000);

void BM_CopulaSample(benchmark::State& state) {
    Table train = toy_table(1000);
    GenModel model = fit_copula(train);
    for (auto _ : state) {
        Rng rng(7);
        benchmark::DoNotOptimize(sample(model, size_t(state.range(0)), rng));
    }
}
BENCHMARK(BM_CopulaSample)->Arg(500)->Arg(2000);

void BM_ExtractFeatures(benchmark::State& state) {
    Table table = toy_table(size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(extract_features(table));
}
BENCHMARK(BM_ExtractFeatures)->Arg(500)->Arg(2000);

void BM_ForestTrain(benchmark::State& state) {
    Rng rng(5);
    size_t n = 50, dims = 48;
    std::vector<std::vector<double>> x(n, std::vector<double>(dims));
    std::vector<int> y(n);
    for (size_t i = 0; i < n; ++i) {
        for (auto& v : x[i]) v = rng.normal();
        y[i] = int(i % 2);
    }
    ForestParams params;
    for (auto _ : state) benchmark::DoNotOptimize(train_forest(x, y, params, 11));
}
BENCHMARK(BM_ForestTrain);

void BM_NearestNeighbor(benchmark::State& state) {
    Table original = toy_table(size_t(state.range(0)));
    GenModel model = fit_independent(original);
    Rng rng(9);
    Table synth = sample(model, size_t(state.range(0)), rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(nearest_neighbor_score(original, synth, int(state.range(1))));
}
BENCHMARK(BM_NearestNeighbor)->Args({1000, 1})->Args({1000, 4});

void BM_AttackRound(benchmark::State& state) {
    static ToyData toy = make_toy(2000, 1);
    AttackConfig cfg;
    cfg.rounds = 1;
    cfg.original_sample_size = 200;
    cfg.shadow_count = 10;
    cfg.generator = GeneratorKind::independent;
    cfg.forest.n_trees = 50;
    Table qi = project(toy.table, toy.table.schema().quasi_identifier_columns());
    for (auto _ : state) benchmark::DoNotOptimize(run_round(qi, cfg, 0));
}
BENCHMARK(BM_AttackRound)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
