#pragma once

#include <vector>

#include "permdiag/predictor.hpp"

namespace permdiag {

// Ordinary least squares with intercept.
class LinearModel : public Predictor {
public:
    LinearModel(double beta0, std::vector<double> beta, std::vector<double> column_means);

    std::vector<double> predict(const FeatureMatrix& x) const override;
    std::size_t n_features() const override { return beta_.size(); }

    double beta0() const { return beta0_; }
    const std::vector<double>& beta() const { return beta_; }
    // Training-column means, kept for the closed-form effect curves.
    const std::vector<double>& column_means() const { return column_means_; }

private:
    double beta0_;
    std::vector<double> beta_;
    std::vector<double> column_means_;
};

// Throws std::runtime_error when the design (with intercept) is rank deficient.
LinearModel fit_linear(const Dataset& data);

class LinearLearner : public Learner {
public:
    std::unique_ptr<Predictor> fit(const Dataset& data) const override;
    std::unique_ptr<Predictor> fit_with_seed(const Dataset& data,
                                             std::uint64_t seed) const override;
};

}  // namespace permdiag
