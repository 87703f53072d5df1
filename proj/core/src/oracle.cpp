#include "permdiag/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "permdiag/normal.hpp"
#include "permdiag/stats.hpp"

namespace permdiag {

LinearOracle LinearOracle::from_model(const LinearModel& m, const Dataset& d) {
    if (m.n_features() != d.n_cols())
        throw std::invalid_argument("LinearOracle: model/data width mismatch");
    LinearOracle o;
    o.beta0 = m.beta0();
    o.beta = m.beta();
    o.col_means = m.column_means();
    o.s_centered.resize(d.n_cols());
    for (std::size_t j = 0; j < d.n_cols(); ++j) {
        double s = 0.0;
        for (double v : d.x.col(j)) {
            const double c = v - o.col_means[j];
            s += c * c;
        }
        o.s_centered[j] = s;
    }
    return o;
}

std::vector<double> theorem1_vi(const LinearOracle& o) {
    std::vector<double> vi(o.beta.size());
    for (std::size_t j = 0; j < o.beta.size(); ++j)
        vi[j] = 2.0 * o.beta[j] * o.beta[j] * o.s_centered[j];
    return vi;
}

Line theorem1_pd_line(const LinearOracle& o, std::size_t j) {
    if (j >= o.beta.size())
        throw std::invalid_argument("theorem1_pd_line: feature index out of range");
    double c = o.beta0;
    for (std::size_t k = 0; k < o.beta.size(); ++k)
        if (k != j) c += o.beta[k] * o.col_means[k];
    return {c, o.beta[j]};
}

Line theorem1_ice_line(const LinearOracle& o, std::span<const double> row,
                       std::size_t j) {
    if (j >= o.beta.size())
        throw std::invalid_argument("theorem1_ice_line: feature index out of range");
    if (row.size() != o.beta.size())
        throw std::invalid_argument("theorem1_ice_line: row width mismatch");
    double c = o.beta0;
    for (std::size_t k = 0; k < o.beta.size(); ++k)
        if (k != j) c += o.beta[k] * row[k];
    return {c, o.beta[j]};
}

FeatureRegression regress_feature(const Dataset& d, std::size_t j) {
    if (j >= d.n_cols())
        throw std::invalid_argument("regress_feature: feature index out of range");
    if (d.n_cols() < 2)
        throw std::invalid_argument("regress_feature: nothing to regress on");

    // Reuse the OLS path: response is column j, design is the rest.
    Dataset aux(d.x.without_column(j),
                std::vector<double>(d.x.col(j).begin(), d.x.col(j).end()),
                default_names(d.n_cols() - 1));
    const LinearModel m = fit_linear(aux);

    FeatureRegression r;
    r.gamma0 = m.beta0();
    r.gamma = m.beta();
    const auto fitted = m.predict(aux.x);
    r.delta.resize(d.n_rows());
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        r.delta[i] = aux.y[i] - fitted[i];
        r.d_sum += r.delta[i] * r.delta[i];
    }
    return r;
}

DependenceOracle dependence_oracle(const Dataset& d, const CopulaSpec& spec,
                                   std::size_t n_mc, SeededStream& rng) {
    if (spec.p != d.n_cols())
        throw std::invalid_argument("dependence_oracle: spec/data width mismatch");
    DependenceOracle dep;
    dep.regressions.reserve(d.n_cols());
    dep.v_sum.resize(d.n_cols());
    for (std::size_t j = 0; j < d.n_cols(); ++j) {
        dep.regressions.push_back(regress_feature(d, j));
        dep.v_sum[j] = conditional_variance_sum(spec, d.x, j, n_mc, rng);
    }
    return dep;
}

Theorem2Targets theorem2_targets(const DependenceOracle& dep,
                                 std::span<const double> beta) {
    const std::size_t p = dep.regressions.size();
    if (beta.size() != p || dep.v_sum.size() != p)
        throw std::invalid_argument("theorem2_targets: width mismatch");
    Theorem2Targets t;
    t.drop.resize(p);
    t.relearn.resize(p);
    t.conditional.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const double b2 = beta[j] * beta[j];
        t.drop[j] = b2 * dep.regressions[j].d_sum;
        t.relearn[j] = 2.0 * t.drop[j];
        t.conditional[j] = 2.0 * b2 * dep.v_sum[j];
    }
    return t;
}

double conditional_variance_sum(const CopulaSpec& spec, const FeatureMatrix& x,
                                std::size_t j, std::size_t n_mc, SeededStream& rng) {
    spec.validate();
    if (x.n_cols() != spec.p)
        throw std::invalid_argument("conditional_variance_sum: width mismatch");
    if (j >= spec.p)
        throw std::invalid_argument("conditional_variance_sum: feature out of range");

    const std::size_t n = x.n_rows();
    const bool coupled = j == spec.pair.first || j == spec.pair.second;
    if (!coupled || spec.rho == 0.0) return static_cast<double>(n) / 12.0;

    if (n_mc < 2)
        throw std::invalid_argument("conditional_variance_sum: n_mc must be >= 2");
    const std::size_t partner =
        j == spec.pair.first ? spec.pair.second : spec.pair.first;
    const double tail = std::sqrt(1.0 - spec.rho * spec.rho);

    double total = 0.0;
    std::vector<double> draws(n_mc);
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = spec.rho * norm_ppf(x(i, partner));
        for (std::size_t k = 0; k < n_mc; ++k)
            draws[k] = norm_cdf(mu + tail * rng.normal());
        total += variance(draws);
    }
    return total;
}

double brute_force_vi(const Predictor& model, const Dataset& d, std::size_t j) {
    const std::size_t n = d.n_rows();
    if (n > 8) throw std::invalid_argument("brute_force_vi: N must be <= 8");
    if (j >= d.n_cols())
        throw std::invalid_argument("brute_force_vi: feature index out of range");

    const double base = squared_loss(d.y, model.predict(d.x)).total;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    double acc = 0.0;
    std::size_t count = 0;
    do {
        Permutation perm{order};
        const FeatureMatrix xp = permute_column(d.x, j, perm);
        acc += squared_loss(d.y, model.predict(xp)).total - base;
        ++count;
    } while (std::next_permutation(order.begin(), order.end()));
    return acc / static_cast<double>(count);
}

double joint_pair_importance(const LinearOracle& o, const Dataset& d, std::size_t j,
                             std::size_t k) {
    if (j == k) throw std::invalid_argument("joint_pair_importance: need two features");
    if (j >= d.n_cols() || k >= d.n_cols())
        throw std::invalid_argument("joint_pair_importance: feature out of range");
    double total = 0.0;
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        const double t = o.beta[j] * (d.x(i, j) - o.col_means[j]) +
                         o.beta[k] * (d.x(i, k) - o.col_means[k]);
        total += t * t;
    }
    return total;
}

}  // namespace permdiag
