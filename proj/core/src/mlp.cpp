#include "permdiag/mlp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>

#include "permdiag/rng.hpp"
#include "permdiag/stats.hpp"

namespace permdiag {

namespace {

double logistic(double a) {
    if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
    const double e = std::exp(a);
    return e / (1.0 + e);
}

struct ParamView {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        w1;
    Eigen::Map<const Eigen::VectorXd> b1;
    Eigen::Map<const Eigen::VectorXd> w2;
    double b2;
};

ParamView view(std::span<const double> params, std::size_t hidden, std::size_t p) {
    const auto h = static_cast<Eigen::Index>(hidden);
    const auto pe = static_cast<Eigen::Index>(p);
    const double* base = params.data();
    return {{base, h, pe},
            {base + hidden * p, h},
            {base + hidden * p + hidden, h},
            params[hidden * p + 2 * hidden]};
}

Eigen::MatrixXd to_eigen(const FeatureMatrix& x) {
    Eigen::MatrixXd m(x.n_rows(), x.n_cols());
    for (std::size_t j = 0; j < x.n_cols(); ++j)
        for (std::size_t i = 0; i < x.n_rows(); ++i)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x(i, j);
    return m;
}

}  // namespace

std::size_t mlp_param_count(std::size_t hidden, std::size_t p) {
    return hidden * p + 2 * hidden + 1;
}

LossGrad mlp_loss_grad(std::span<const double> params, const FeatureMatrix& z,
                       std::span<const double> yc, std::size_t hidden,
                       double l2_decay) {
    const std::size_t n = z.n_rows();
    const std::size_t p = z.n_cols();
    if (n == 0 || yc.size() != n)
        throw std::invalid_argument("mlp_loss_grad: response/row mismatch");
    if (params.size() != mlp_param_count(hidden, p))
        throw std::invalid_argument("mlp_loss_grad: parameter count mismatch");

    const ParamView pv = view(params, hidden, p);
    const Eigen::MatrixXd zm = to_eigen(z);
    Eigen::Map<const Eigen::VectorXd> y(yc.data(), static_cast<Eigen::Index>(n));

    Eigen::MatrixXd act = zm * pv.w1.transpose();
    act.rowwise() += pv.b1.transpose();
    const Eigen::MatrixXd hmat =
        act.unaryExpr([](double a) { return logistic(a); });
    const Eigen::VectorXd pred =
        (hmat * pv.w2).array() + pv.b2;
    const Eigen::VectorXd err = pred - y;

    const double inv_n = 1.0 / static_cast<double>(n);
    LossGrad out;
    out.loss = err.squaredNorm() * inv_n +
               l2_decay * (pv.w1.squaredNorm() + pv.w2.squaredNorm());
    out.grad.assign(params.size(), 0.0);

    const auto h = static_cast<Eigen::Index>(hidden);
    const auto pe = static_cast<Eigen::Index>(p);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        gw1(out.grad.data(), h, pe);
    Eigen::Map<Eigen::VectorXd> gb1(out.grad.data() + hidden * p, h);
    Eigen::Map<Eigen::VectorXd> gw2(out.grad.data() + hidden * p + hidden, h);
    double& gb2 = out.grad[hidden * p + 2 * hidden];

    const Eigen::VectorXd scaled_err = (2.0 * inv_n) * err;
    gb2 = scaled_err.sum();
    gw2 = hmat.transpose() * scaled_err + 2.0 * l2_decay * pv.w2;
    const Eigen::MatrixXd back =
        (scaled_err * pv.w2.transpose()).cwiseProduct(
            hmat.cwiseProduct(Eigen::MatrixXd::Ones(hmat.rows(), hmat.cols()) - hmat));
    gb1 = back.colwise().sum();
    gw1 = back.transpose() * zm + 2.0 * l2_decay * pv.w1;
    return out;
}

MLPModel::MLPModel(MlpConfig config, std::vector<double> params,
                   std::vector<double> x_mean, std::vector<double> x_sd, double y_mean,
                   MlpTrainInfo info)
    : config_(config), params_(std::move(params)), x_mean_(std::move(x_mean)),
      x_sd_(std::move(x_sd)), y_mean_(y_mean), info_(info) {
    if (x_mean_.size() != x_sd_.size())
        throw std::invalid_argument("MLPModel: standardization size mismatch");
    if (params_.size() != mlp_param_count(config_.hidden, x_mean_.size()))
        throw std::invalid_argument("MLPModel: parameter count mismatch");
    for (double v : params_)
        if (!std::isfinite(v)) throw std::invalid_argument("MLPModel: non-finite weight");
}

std::vector<double> MLPModel::predict(const FeatureMatrix& x) const {
    const std::size_t p = x_mean_.size();
    if (x.n_cols() != p)
        throw std::invalid_argument("MLPModel::predict: feature count mismatch");

    const ParamView pv = view(params_, config_.hidden, p);
    std::vector<double> out(x.n_rows());
    std::vector<double> z(p);
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
        for (std::size_t j = 0; j < p; ++j) z[j] = (x(i, j) - x_mean_[j]) / x_sd_[j];
        double s = pv.b2;
        for (std::size_t u = 0; u < config_.hidden; ++u) {
            double a = pv.b1(static_cast<Eigen::Index>(u));
            for (std::size_t j = 0; j < p; ++j)
                a += pv.w1(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(j)) *
                     z[j];
            s += pv.w2(static_cast<Eigen::Index>(u)) * logistic(a);
        }
        out[i] = s + y_mean_;
    }
    return out;
}

MLPModel fit_mlp(const Dataset& d, const MlpConfig& config) {
    const std::size_t n = d.n_rows();
    const std::size_t p = d.n_cols();
    if (config.hidden < 1) throw std::invalid_argument("fit_mlp: hidden must be >= 1");

    std::vector<double> x_mean(p), x_sd(p);
    for (std::size_t j = 0; j < p; ++j) {
        const auto col = d.x.col(j);
        x_mean[j] = mean(col);
        x_sd[j] = n >= 2 ? stddev(col) : 0.0;
        if (x_sd[j] == 0.0) x_sd[j] = 1.0;
    }
    const double y_mean = mean(d.y);

    FeatureMatrix z(n, p);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < n; ++i) z(i, j) = (d.x(i, j) - x_mean[j]) / x_sd[j];
    std::vector<double> yc(n);
    for (std::size_t i = 0; i < n; ++i) yc[i] = d.y[i] - y_mean;

    // Hidden layer starts at small random weights to break symmetry; the
    // output layer starts at zero so the untrained network predicts the
    // centered-response mean exactly.
    std::vector<double> params(mlp_param_count(config.hidden, p), 0.0);
    SeededStream init = derive_stream(config.seed, 0, "mlp-init");
    for (std::size_t k = 0; k < config.hidden * p + config.hidden; ++k)
        params[k] = config.init_scale * init.uniform(-0.5, 0.5);

    MlpTrainInfo info;
    LossGrad lg = mlp_loss_grad(params, z, yc, config.hidden, config.l2_decay);
    double step = 1.0;
    std::vector<double> trial(params.size());
    for (std::size_t it = 0; it < config.max_iter; ++it) {
        double gnorm2 = 0.0;
        for (double g : lg.grad) gnorm2 += g * g;
        if (std::sqrt(gnorm2) < config.grad_tol) {
            info.converged = true;
            break;
        }

        // Backtracking line search with an Armijo acceptance test; the step
        // carries over (doubled) so easy stretches take few evaluations.
        bool accepted = false;
        while (step > 1e-14) {
            for (std::size_t k = 0; k < params.size(); ++k)
                trial[k] = params[k] - step * lg.grad[k];
            LossGrad tlg = mlp_loss_grad(trial, z, yc, config.hidden, config.l2_decay);
            if (tlg.loss <= lg.loss - 1e-4 * step * gnorm2) {
                params.swap(trial);
                lg = std::move(tlg);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        info.iterations += 1;
        step = std::min(step * 2.0, 1e6);
    }

    double gnorm2 = 0.0;
    for (double g : lg.grad) gnorm2 += g * g;
    info.grad_norm = std::sqrt(gnorm2);
    info.final_loss = lg.loss;
    if (info.grad_norm < config.grad_tol) info.converged = true;

    return MLPModel(config, std::move(params), std::move(x_mean), std::move(x_sd),
                    y_mean, info);
}

std::unique_ptr<Predictor> MlpLearner::fit(const Dataset& data) const {
    return std::make_unique<MLPModel>(fit_mlp(data, config_));
}

std::unique_ptr<Predictor> MlpLearner::fit_with_seed(const Dataset& data,
                                                     std::uint64_t seed) const {
    MlpConfig c = config_;
    c.seed = seed;
    return std::make_unique<MLPModel>(fit_mlp(data, c));
}

}  // namespace permdiag
