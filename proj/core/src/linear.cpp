#include "permdiag/linear.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

namespace permdiag {

LinearModel::LinearModel(double beta0, std::vector<double> beta,
                         std::vector<double> column_means)
    : beta0_(beta0), beta_(std::move(beta)), column_means_(std::move(column_means)) {
    if (beta_.size() != column_means_.size())
        throw std::invalid_argument("LinearModel: beta and column_means disagree");
}

std::vector<double> LinearModel::predict(const FeatureMatrix& x) const {
    if (x.n_cols() != beta_.size())
        throw std::invalid_argument("LinearModel::predict: feature count mismatch");
    std::vector<double> out(x.n_rows());
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
        double s = beta0_;
        for (std::size_t j = 0; j < x.n_cols(); ++j) s += beta_[j] * x(i, j);
        out[i] = s;
    }
    return out;
}

LinearModel fit_linear(const Dataset& data) {
    const std::size_t n = data.n_rows();
    const std::size_t p = data.n_cols();
    if (n < p + 1)
        throw std::runtime_error("fit_linear: fewer rows than coefficients");

    Eigen::MatrixXd design(n, p + 1);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        for (std::size_t j = 0; j < p; ++j) design(i, j + 1) = data.x(i, j);
        y(static_cast<Eigen::Index>(i)) = data.y[i];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < static_cast<Eigen::Index>(p + 1))
        throw std::runtime_error("fit_linear: design matrix is rank deficient");
    Eigen::VectorXd coef = qr.solve(y);

    std::vector<double> beta(p), means(p);
    for (std::size_t j = 0; j < p; ++j) {
        beta[j] = coef(static_cast<Eigen::Index>(j + 1));
        const auto col = data.x.col(j);
        double m = 0.0;
        for (double v : col) m += v;
        means[j] = m / static_cast<double>(n);
    }
    return LinearModel(coef(0), std::move(beta), std::move(means));
}

std::unique_ptr<Predictor> LinearLearner::fit(const Dataset& data) const {
    return std::make_unique<LinearModel>(fit_linear(data));
}

std::unique_ptr<Predictor> LinearLearner::fit_with_seed(const Dataset& data,
                                                        std::uint64_t) const {
    return fit(data);
}

}  // namespace permdiag
