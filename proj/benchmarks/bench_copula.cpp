#include <benchmark/benchmark.h>

#include "permdiag/copula.hpp"
#include "permdiag/rng.hpp"

namespace {

void BM_sample_features(benchmark::State& state) {
    permdiag::CopulaSpec spec;
    spec.rho = 0.9;
    const auto n = static_cast<std::size_t>(state.range(0));
    permdiag::SeededStream rng(42);
    for (auto _ : state) {
        auto x = permdiag::sample_features(spec, n, rng);
        benchmark::DoNotOptimize(x);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n * spec.p));
}

void BM_conditional_sample(benchmark::State& state) {
    permdiag::CopulaSpec spec;
    spec.rho = 0.9;
    permdiag::SeededStream rng(42);
    double u = 0.3;
    for (auto _ : state) {
        u = permdiag::conditional_sample(spec, u, rng);
        benchmark::DoNotOptimize(u);
    }
}

}  // namespace

BENCHMARK(BM_sample_features)->Arg(1000)->Arg(10000);
BENCHMARK(BM_conditional_sample);

BENCHMARK_MAIN();
