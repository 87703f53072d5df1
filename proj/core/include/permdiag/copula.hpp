#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "permdiag/dataset.hpp"
#include "permdiag/rng.hpp"

namespace permdiag {

// Feature law: uniform marginals on [0,1]; one designated pair is coupled
// through a Gaussian copula with latent correlation rho, the rest are
// independent.
struct CopulaSpec {
    std::size_t p = 10;
    std::pair<std::size_t, std::size_t> pair{0, 1};
    double rho = 0.0;

    void validate() const;
};

// Linear signal plus Gaussian noise on top of the features.
struct ResponseSpec {
    double beta0 = 0.0;
    std::vector<double> beta;
    double sigma = 0.1;

    static ResponseSpec benchmark_linear();
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

FeatureMatrix sample_features(const CopulaSpec& spec, std::size_t n, SeededStream& rng);

// Law of one pair member given the other under the Gaussian copula.
// Draws from it, or returns the central +-k_sd band of it.
double conditional_sample(const CopulaSpec& spec, double given, SeededStream& rng);
Interval conditional_range(const CopulaSpec& spec, double given, double k_sd);

std::vector<double> gen_response(const ResponseSpec& spec, const FeatureMatrix& x,
                                 SeededStream& rng);

Dataset make_dataset(const CopulaSpec& cspec, const ResponseSpec& rspec, std::size_t n,
                     SeededStream& rng);

// Population Spearman correlation implied by latent correlation rho.
double copula_spearman(double rho);

}  // namespace permdiag
