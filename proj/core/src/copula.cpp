#include "permdiag/copula.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "permdiag/normal.hpp"

namespace permdiag {

void CopulaSpec::validate() const {
    if (p < 1) throw std::invalid_argument("CopulaSpec: p must be positive");
    if (pair.first >= p || pair.second >= p)
        throw std::invalid_argument("CopulaSpec: pair index out of range");
    if (pair.first == pair.second)
        throw std::invalid_argument("CopulaSpec: pair must name two distinct features");
    if (!(rho > -1.0 && rho < 1.0))
        throw std::invalid_argument("CopulaSpec: rho must lie in (-1, 1)");
}

ResponseSpec ResponseSpec::benchmark_linear() {
    ResponseSpec s;
    s.beta0 = 0.0;
    s.beta = {1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.5, 0.8, 1.2, 1.5};
    s.sigma = 0.1;
    return s;
}

FeatureMatrix sample_features(const CopulaSpec& spec, std::size_t n, SeededStream& rng) {
    spec.validate();
    if (n == 0) throw std::invalid_argument("sample_features: n must be positive");

    FeatureMatrix x(n, spec.p);
    const auto [j1, j2] = spec.pair;
    const double tail = std::sqrt(1.0 - spec.rho * spec.rho);

    // Row-major draw order so adding columns never reshuffles earlier ones.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < spec.p; ++j) {
            if (j == j2) continue;
            x(i, j) = rng.uniform_open();
        }
        const double z1 = norm_ppf(x(i, j1));
        const double z2 = spec.rho * z1 + tail * rng.normal();
        x(i, j2) = norm_cdf(z2);
    }
    return x;
}

double conditional_sample(const CopulaSpec& spec, double given, SeededStream& rng) {
    spec.validate();
    if (!(given > 0.0 && given < 1.0))
        throw std::invalid_argument("conditional_sample: given must lie in (0, 1)");
    const double z = spec.rho * norm_ppf(given) +
                     std::sqrt(1.0 - spec.rho * spec.rho) * rng.normal();
    return norm_cdf(z);
}

Interval conditional_range(const CopulaSpec& spec, double given, double k_sd) {
    spec.validate();
    if (!(given > 0.0 && given < 1.0))
        throw std::invalid_argument("conditional_range: given must lie in (0, 1)");
    if (k_sd <= 0.0) throw std::invalid_argument("conditional_range: k_sd must be positive");
    const double mu = spec.rho * norm_ppf(given);
    const double sd = std::sqrt(1.0 - spec.rho * spec.rho);
    return {norm_cdf(mu - k_sd * sd), norm_cdf(mu + k_sd * sd)};
}

std::vector<double> gen_response(const ResponseSpec& spec, const FeatureMatrix& x,
                                 SeededStream& rng) {
    if (spec.beta.size() != x.n_cols())
        throw std::invalid_argument("gen_response: beta length does not match features");
    if (spec.sigma < 0.0) throw std::invalid_argument("gen_response: sigma must be >= 0");

    std::vector<double> y(x.n_rows());
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
        double s = spec.beta0;
        for (std::size_t j = 0; j < x.n_cols(); ++j) s += spec.beta[j] * x(i, j);
        y[i] = s + spec.sigma * rng.normal();
    }
    return y;
}

Dataset make_dataset(const CopulaSpec& cspec, const ResponseSpec& rspec, std::size_t n,
                     SeededStream& rng) {
    FeatureMatrix x = sample_features(cspec, n, rng);
    std::vector<double> y = gen_response(rspec, x, rng);
    return Dataset(std::move(x), std::move(y), default_names(cspec.p));
}

double copula_spearman(double rho) {
    return (6.0 / std::numbers::pi) * std::asin(rho / 2.0);
}

}  // namespace permdiag
