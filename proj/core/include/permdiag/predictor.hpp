#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "permdiag/dataset.hpp"

namespace permdiag {

class Predictor {
public:
    virtual ~Predictor() = default;
    virtual std::vector<double> predict(const FeatureMatrix& x) const = 0;
    virtual std::size_t n_features() const = 0;

    double predict_row(std::span<const double> row) const {
        return predict(FeatureMatrix::from_row(row)).front();
    }
};

/// A learner can be refit on modified data; required by the retraining-based
/// importance measures. fit() uses the learner's own seed; fit_with_seed()
/// substitutes a fresh one while keeping every other setting, so repeated
/// refits stay comparable to the baseline.
class Learner {
public:
    virtual ~Learner() = default;
    virtual std::unique_ptr<Predictor> fit(const Dataset& data) const = 0;
    virtual std::unique_ptr<Predictor> fit_with_seed(const Dataset& data,
                                                     std::uint64_t seed) const = 0;
};

}  // namespace permdiag
