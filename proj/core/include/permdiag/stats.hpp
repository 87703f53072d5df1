#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace permdiag {

double mean(std::span<const double> v);

/// Variance with divisor n - ddof (ddof = 1 gives the sample variance).
double variance(std::span<const double> v, int ddof = 1);
double stddev(std::span<const double> v, int ddof = 1);

double pearson(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation (no tie correction; inputs assumed continuous).
double spearman(std::span<const double> x, std::span<const double> y);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against Uniform[0,1].
KsResult ks_test_uniform(std::span<const double> sample);

/// Two-sample two-dimensional KS test (Fasano-Franceschini statistic with
/// the Press et al. significance approximation). Points are (x, y) pairs.
KsResult ks2d_two_sample(std::span<const std::pair<double, double>> a,
                         std::span<const std::pair<double, double>> b);

/// Kolmogorov tail probability Q(t) = 2 * sum_k (-1)^(k-1) exp(-2 k^2 t^2).
double kolmogorov_q(double t);

}  // namespace permdiag
