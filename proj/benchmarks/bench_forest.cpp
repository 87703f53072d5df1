#include <benchmark/benchmark.h>

#include "permdiag/copula.hpp"
#include "permdiag/forest.hpp"
#include "permdiag/rng.hpp"

namespace {

permdiag::Dataset bench_data(std::size_t n) {
    permdiag::CopulaSpec spec;
    spec.rho = 0.5;
    permdiag::SeededStream rng(7);
    return permdiag::make_dataset(spec, permdiag::ResponseSpec::benchmark_linear(), n, rng);
}

void BM_fit_forest(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto trees = static_cast<std::size_t>(state.range(1));
    permdiag::Dataset d = bench_data(n);
    permdiag::ForestConfig cfg;
    cfg.n_trees = trees;
    cfg.seed = 11;
    for (auto _ : state) {
        auto m = permdiag::fit_forest(d, cfg);
        benchmark::DoNotOptimize(m);
    }
}

void BM_forest_predict(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    permdiag::Dataset d = bench_data(n);
    permdiag::ForestConfig cfg;
    cfg.n_trees = 100;
    cfg.seed = 11;
    auto m = permdiag::fit_forest(d, cfg);
    for (auto _ : state) {
        auto pred = m.predict(d.x);
        benchmark::DoNotOptimize(pred);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(BM_fit_forest)->Args({200, 100})->Args({200, 500})->Args({2000, 100});
BENCHMARK(BM_forest_predict)->Arg(200)->Arg(2000);

BENCHMARK_MAIN();
