#include <benchmark/benchmark.h>

#include "permdiag/copula.hpp"
#include "permdiag/forest.hpp"
#include "permdiag/importance.hpp"
#include "permdiag/rng.hpp"

namespace {

struct Fixture {
    permdiag::Dataset d;
    permdiag::ForestModel model;

    static const Fixture& get() {
        static Fixture f = [] {
            permdiag::CopulaSpec spec;
            spec.rho = 0.9;
            permdiag::SeededStream rng(13);
            permdiag::Dataset d =
                permdiag::make_dataset(spec, permdiag::ResponseSpec::benchmark_linear(), 500, rng);
            permdiag::ForestConfig cfg;
            cfg.n_trees = 100;
            cfg.seed = 17;
            auto m = permdiag::fit_forest(d, cfg);
            return Fixture{std::move(d), std::move(m)};
        }();
        return f;
    }
};

void BM_vi_pap(benchmark::State& state) {
    const Fixture& f = Fixture::get();
    permdiag::SeededStream rng(23);
    for (auto _ : state) {
        double v = permdiag::vi_pap(f.model, f.d, 0, 5, rng);
        benchmark::DoNotOptimize(v);
    }
}

void BM_vi_oob(benchmark::State& state) {
    const Fixture& f = Fixture::get();
    permdiag::SeededStream rng(29);
    for (auto _ : state) {
        double v = permdiag::vi_oob(f.model, f.d, 0, 5, rng);
        benchmark::DoNotOptimize(v);
    }
}

}  // namespace

BENCHMARK(BM_vi_pap);
BENCHMARK(BM_vi_oob);

BENCHMARK_MAIN();
