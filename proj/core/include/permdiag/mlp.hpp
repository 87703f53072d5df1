#pragma once

#include <cstdint>
#include <vector>

#include "permdiag/predictor.hpp"

namespace permdiag {

struct MlpConfig {
    std::size_t hidden = 20;
    std::size_t max_iter = 1000;
    double l2_decay = 0.0;
    std::uint64_t seed = 0;
    double init_scale = 1.0;
    double grad_tol = 1e-7;
};

struct MlpTrainInfo {
    std::size_t iterations = 0;
    bool converged = false;  ///< False past max_iter: best iterate kept, warning only.
    double grad_norm = 0.0;
    double final_loss = 0.0;
};

/// Flat parameter layout: hidden-layer weights (hidden x p, row-major),
/// hidden biases, output weights, output bias. Inputs standardized, response
/// centered; the output bias is the prediction of the zero-weight network in
/// standardized space.
class MLPModel : public Predictor {
public:
    MLPModel(MlpConfig config, std::vector<double> params, std::vector<double> x_mean,
             std::vector<double> x_sd, double y_mean, MlpTrainInfo info);

    std::vector<double> predict(const FeatureMatrix& x) const override;
    std::size_t n_features() const override { return x_mean_.size(); }

    const MlpConfig& config() const { return config_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<double>& x_mean() const { return x_mean_; }
    const std::vector<double>& x_sd() const { return x_sd_; }
    double y_mean() const { return y_mean_; }
    const MlpTrainInfo& info() const { return info_; }

private:
    MlpConfig config_;
    std::vector<double> params_;
    std::vector<double> x_mean_;
    std::vector<double> x_sd_;
    double y_mean_;
    MlpTrainInfo info_;
};

std::size_t mlp_param_count(std::size_t hidden, std::size_t p);

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad;
};

/// Mean-squared-error loss and its analytic gradient at the given parameters,
/// on pre-standardized inputs z and centered response yc. Exposed so the
/// gradient can be checked against finite differences.
LossGrad mlp_loss_grad(std::span<const double> params, const FeatureMatrix& z,
                       std::span<const double> yc, std::size_t hidden, double l2_decay);

MLPModel fit_mlp(const Dataset& d, const MlpConfig& config);

class MlpLearner : public Learner {
public:
    explicit MlpLearner(MlpConfig config) : config_(config) {}

    std::unique_ptr<Predictor> fit(const Dataset& data) const override;
    std::unique_ptr<Predictor> fit_with_seed(const Dataset& data,
                                             std::uint64_t seed) const override;

    const MlpConfig& config() const { return config_; }

private:
    MlpConfig config_;
};

}  // namespace permdiag
