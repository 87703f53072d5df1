#pragma once

#include <cstddef>
#include <vector>

#include "permdiag/copula.hpp"
#include "permdiag/linear.hpp"
#include "permdiag/predictor.hpp"
#include "permdiag/rng.hpp"

namespace permdiag {

/// Closed-form ingredients of the permute-and-predict expectation for a
/// fitted linear model: coefficients, column means, and centered sums of
/// squares S_j.
struct LinearOracle {
    double beta0 = 0.0;
    std::vector<double> beta;
    std::vector<double> col_means;
    std::vector<double> s_centered;

    static LinearOracle from_model(const LinearModel& m, const Dataset& d);
};

/// Expected permute-and-predict importance of each feature: 2 beta_j^2 S_j.
std::vector<double> theorem1_vi(const LinearOracle& o);

struct Line {
    double intercept = 0.0;
    double slope = 0.0;
};

/// Exact partial-dependence line of a fitted linear model along feature j.
Line theorem1_pd_line(const LinearOracle& o, std::size_t j);
/// Exact ICE line of one observation along feature j.
Line theorem1_ice_line(const LinearOracle& o, std::span<const double> row, std::size_t j);

/// Least-squares regression of one feature column on all the others.
struct FeatureRegression {
    double gamma0 = 0.0;
    std::vector<double> gamma;  ///< Coefficients over the remaining columns, in order.
    std::vector<double> delta;  ///< Residuals.
    double d_sum = 0.0;         ///< Sum of squared residuals D_j.
};

FeatureRegression regress_feature(const Dataset& d, std::size_t j);

/// Per-feature inter-feature dependence summaries: the regression residuals
/// D_j and the conditional-variance sums V_j.
struct DependenceOracle {
    std::vector<FeatureRegression> regressions;
    std::vector<double> v_sum;
};

DependenceOracle dependence_oracle(const Dataset& d, const CopulaSpec& spec,
                                   std::size_t n_mc, SeededStream& rng);

/// Expected scores of the retraining and conditional measures under a linear
/// learner: drop = beta_j^2 D_j, relearn = 2 beta_j^2 D_j (shared by both
/// relearn variants), conditional = 2 beta_j^2 V_j.
struct Theorem2Targets {
    std::vector<double> drop;
    std::vector<double> relearn;
    std::vector<double> conditional;
};

Theorem2Targets theorem2_targets(const DependenceOracle& dep,
                                 std::span<const double> beta);

/// Sum over rows of var(x_ij | x_i,-j) under the copula feature law: exact
/// N/12 for features independent of all others, Monte Carlo with n_mc draws
/// per row for the coupled pair.
double conditional_variance_sum(const CopulaSpec& spec, const FeatureMatrix& x,
                                std::size_t j, std::size_t n_mc, SeededStream& rng);

/// Exact permute-and-predict expectation by enumerating all N! permutations
/// of column j. Requires N <= 8.
double brute_force_vi(const Predictor& model, const Dataset& d, std::size_t j);

/// Joint two-feature importance sum((beta_j (x_ij - mean_j) + beta_k (x_ik - mean_k))^2).
double joint_pair_importance(const LinearOracle& o, const Dataset& d, std::size_t j,
                             std::size_t k);

}  // namespace permdiag
