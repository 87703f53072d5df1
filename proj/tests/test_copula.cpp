#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "permdiag/copula.hpp"
#include "permdiag/stats.hpp"

using namespace permdiag;

TEST_SUITE("copula") {

TEST_CASE("spec validation") {
    CopulaSpec s;
    s.p = 10;
    s.pair = {0, 1};
    s.rho = 0.5;
    CHECK_NOTHROW(s.validate());
    s.rho = 1.2;
    CHECK_THROWS(s.validate());
    s.rho = 0.5;
    s.pair = {3, 3};
    CHECK_THROWS(s.validate());
    s.pair = {0, 10};
    CHECK_THROWS(s.validate());
}

TEST_CASE("marginals are uniform for every column") {
    CopulaSpec spec;
    spec.p = 4;
    spec.rho = 0.9;
    SeededStream rng(101);
    const FeatureMatrix x = sample_features(spec, 5000, rng);
    for (std::size_t j = 0; j < spec.p; ++j) {
        const auto c = x.col(j);
        const std::vector<double> col(c.begin(), c.end());
        CHECK(ks_test_uniform(col).p_value > 0.01);
    }
}

TEST_CASE("rho zero leaves the pair uncorrelated") {
    CopulaSpec spec;
    spec.p = 2;
    spec.rho = 0.0;
    SeededStream rng(7);
    const FeatureMatrix x = sample_features(spec, 10000, rng);
    const auto a = x.col(0), b = x.col(1);
    const std::vector<double> va(a.begin(), a.end()), vb(b.begin(), b.end());
    CHECK(std::abs(pearson(va, vb)) < 0.03);
}

TEST_CASE("latent correlation maps to the closed-form Spearman value") {
    CHECK(copula_spearman(0.0) == doctest::Approx(0.0));
    CHECK(copula_spearman(0.5) == doctest::Approx(0.48258373953099742).epsilon(1e-12));
    CHECK(copula_spearman(0.9) == doctest::Approx(0.89145613168010029).epsilon(1e-12));

    CopulaSpec spec;
    spec.p = 2;
    spec.rho = 0.9;
    SeededStream rng(13);
    const FeatureMatrix x = sample_features(spec, 10000, rng);
    const auto a = x.col(0), b = x.col(1);
    const std::vector<double> va(a.begin(), a.end()), vb(b.begin(), b.end());
    CHECK(spearman(va, vb) == doctest::Approx(copula_spearman(0.9)).epsilon(0.035));
}

TEST_CASE("conditional_sample at rho zero is the uniform marginal") {
    CopulaSpec spec;
    spec.p = 2;
    spec.rho = 0.0;
    SeededStream rng(19);
    std::vector<double> draws(8000);
    for (auto& d : draws) d = conditional_sample(spec, 0.87, rng);
    CHECK(ks_test_uniform(draws).p_value > 0.01);
}

TEST_CASE("conditional_sample concentrates as rho approaches one") {
    CopulaSpec spec;
    spec.p = 2;
    spec.rho = 0.999;
    SeededStream rng(29);
    std::vector<double> draws(4000);
    for (auto& d : draws) d = conditional_sample(spec, 0.3, rng);
    CHECK(std::abs(mean(draws) - 0.3) < 0.02);
    CHECK(stddev(draws) < 0.05);
}

TEST_CASE("conditional mean at the median is the median by symmetry") {
    CopulaSpec spec;
    spec.p = 2;
    spec.rho = 0.9;
    SeededStream rng(31);
    std::vector<double> draws(10000);
    for (auto& d : draws) d = conditional_sample(spec, 0.5, rng);
    CHECK(std::abs(mean(draws) - 0.5) < 0.01);
}

TEST_CASE("conditional_range matches frozen endpoints") {
    CopulaSpec spec;
    spec.p = 2;
    SUBCASE("independent case is the fixed central band") {
        spec.rho = 0.0;
        const Interval r = conditional_range(spec, 0.3, 2.0);
        CHECK(r.lo == doctest::Approx(0.022750131948179219).epsilon(1e-9));
        CHECK(r.hi == doctest::Approx(0.97724986805182079).epsilon(1e-9));
    }
    SUBCASE("coupled case at the median") {
        spec.rho = 0.9;
        const Interval r = conditional_range(spec, 0.5, 2.0);
        CHECK(r.lo == doctest::Approx(0.19166426132408923).epsilon(1e-9));
        CHECK(r.hi == doctest::Approx(0.80833573867591069).epsilon(1e-9));
        CHECK(r.lo < r.hi);
    }
    SUBCASE("endpoints are monotone in the conditioning value for rho > 0") {
        spec.rho = 0.7;
        double lo_prev = -1.0, hi_prev = -1.0;
        for (double g = 0.1; g < 1.0; g += 0.1) {
            const Interval r = conditional_range(spec, g, 2.0);
            CHECK(r.lo > lo_prev);
            CHECK(r.hi > hi_prev);
            lo_prev = r.lo;
            hi_prev = r.hi;
        }
    }
}

TEST_CASE("two-sd band covers the conditional draw at the normal rate") {
    CopulaSpec spec;
    spec.p = 2;
    spec.rho = 0.9;
    SeededStream rng(37);
    std::size_t inside = 0;
    const std::size_t n = 20000;
    for (std::size_t i = 0; i < n; ++i) {
        const double given = rng.uniform_open();
        const Interval r = conditional_range(spec, given, 2.0);
        const double draw = conditional_sample(spec, given, rng);
        if (draw >= r.lo && draw <= r.hi) ++inside;
    }
    const double coverage = static_cast<double>(inside) / static_cast<double>(n);
    CHECK(coverage == doctest::Approx(0.9545).epsilon(0.012));
}

TEST_CASE("two-step conditional draw matches the joint law") {
    CopulaSpec spec;
    spec.p = 2;
    spec.rho = 0.9;
    SeededStream rng(41);
    const std::size_t n = 10000;
    const FeatureMatrix joint = sample_features(spec, n, rng);
    std::vector<std::pair<double, double>> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = {joint(i, 0), joint(i, 1)};
    for (std::size_t i = 0; i < n; ++i) {
        const double first = rng.uniform_open();
        b[i] = {first, conditional_sample(spec, first, rng)};
    }
    CHECK(ks2d_two_sample(a, b).p_value > 0.01);
}

TEST_CASE("response generation matches the linear signal") {
    const ResponseSpec bench = ResponseSpec::benchmark_linear();
    CHECK(bench.beta ==
          std::vector<double>{1, 1, 1, 1, 1, 0, 0.5, 0.8, 1.2, 1.5});
    CHECK(bench.sigma == 0.1);
    CHECK(bench.beta0 == 0.0);

    SUBCASE("noiseless response at the all-half row") {
        ResponseSpec spec = bench;
        spec.sigma = 0.0;
        FeatureMatrix x(1, 10, 0.5);
        SeededStream rng(1);
        const auto y = gen_response(spec, x, rng);
        CHECK(y.size() == 1);
        // Coefficients sum to 9, so the all-half row gives 4.5.
        CHECK(y[0] == doctest::Approx(4.5).epsilon(1e-12));
    }
    SUBCASE("zero coefficients give the intercept exactly") {
        ResponseSpec spec;
        spec.beta0 = 2.5;
        spec.beta = std::vector<double>(3, 0.0);
        spec.sigma = 0.0;
        FeatureMatrix x(5, 3, 0.37);
        SeededStream rng(1);
        for (double v : gen_response(spec, x, rng)) CHECK(v == 2.5);
    }
    SUBCASE("noise variance is near sigma squared") {
        ResponseSpec spec = bench;
        CopulaSpec cs;
        cs.p = 10;
        cs.rho = 0.0;
        SeededStream rng(43);
        const std::size_t n = 10000;
        const FeatureMatrix x = sample_features(cs, n, rng);
        const auto y = gen_response(spec, x, rng);
        std::vector<double> resid(n);
        for (std::size_t i = 0; i < n; ++i) {
            double signal = spec.beta0;
            for (std::size_t j = 0; j < 10; ++j) signal += spec.beta[j] * x(i, j);
            resid[i] = y[i] - signal;
        }
        CHECK(variance(resid) == doctest::Approx(0.01).epsilon(0.15));
    }
}

TEST_CASE("make_dataset wires names, rows, and the coupled pair together") {
    CopulaSpec cs;
    cs.p = 3;
    cs.rho = 0.8;
    cs.pair = {0, 1};
    ResponseSpec rs;
    rs.beta = {1.0, 0.0, 0.0};
    rs.sigma = 0.0;
    SeededStream rng(47);
    const Dataset d = make_dataset(cs, rs, 500, rng);
    CHECK(d.n_rows() == 500);
    CHECK(d.n_cols() == 3);
    CHECK(d.names == default_names(3));
    for (std::size_t i = 0; i < 500; ++i) CHECK(d.y[i] == d.x(i, 0));
}

}  // TEST_SUITE
