#include "permdiag/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace permdiag {

FeatureMatrix::FeatureMatrix(std::size_t n_rows, std::size_t n_cols, double fill)
    : n_rows_(n_rows), n_cols_(n_cols), data_(n_rows * n_cols, fill) {}

std::vector<double> FeatureMatrix::row(std::size_t i) const {
    std::vector<double> r(n_cols_);
    for (std::size_t j = 0; j < n_cols_; ++j) r[j] = (*this)(i, j);
    return r;
}

FeatureMatrix FeatureMatrix::without_column(std::size_t j) const {
    if (j >= n_cols_) throw std::out_of_range("without_column: index");
    FeatureMatrix out(n_rows_, n_cols_ - 1);
    std::size_t dst = 0;
    for (std::size_t c = 0; c < n_cols_; ++c) {
        if (c == j) continue;
        auto src = col(c);
        std::copy(src.begin(), src.end(), out.col(dst).begin());
        ++dst;
    }
    return out;
}

FeatureMatrix FeatureMatrix::from_row(std::span<const double> r) {
    FeatureMatrix out(1, r.size());
    for (std::size_t j = 0; j < r.size(); ++j) out(0, j) = r[j];
    return out;
}

bool FeatureMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

bool Permutation::is_valid() const {
    std::vector<bool> seen(order.size(), false);
    for (std::size_t v : order) {
        if (v >= order.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

Permutation Permutation::identity(std::size_t n) {
    Permutation p;
    p.order.resize(n);
    std::iota(p.order.begin(), p.order.end(), std::size_t{0});
    return p;
}

Dataset::Dataset(FeatureMatrix features, std::vector<double> response,
                 std::vector<std::string> feature_names)
    : x(std::move(features)), y(std::move(response)), names(std::move(feature_names)) {
    if (x.n_rows() < 1 || x.n_cols() < 1)
        throw std::invalid_argument("Dataset: need at least one row and one column");
    if (y.size() != x.n_rows())
        throw std::invalid_argument("Dataset: response length != row count");
    if (names.size() != x.n_cols())
        throw std::invalid_argument("Dataset: name count != column count");
    if (!x.all_finite())
        throw std::invalid_argument("Dataset: non-finite feature value");
    for (double v : y)
        if (!std::isfinite(v))
            throw std::invalid_argument("Dataset: non-finite response value");
    std::set<std::string> uniq(names.begin(), names.end());
    if (uniq.size() != names.size())
        throw std::invalid_argument("Dataset: feature names must be distinct");
}

Dataset Dataset::without_feature(std::size_t j) const {
    if (j >= n_cols()) throw std::out_of_range("without_feature: index");
    if (n_cols() == 1)
        throw std::invalid_argument("without_feature: cannot drop the only feature");
    std::vector<std::string> nm;
    nm.reserve(names.size() - 1);
    for (std::size_t c = 0; c < names.size(); ++c)
        if (c != j) nm.push_back(names[c]);
    return Dataset(x.without_column(j), y, std::move(nm));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    FeatureMatrix xs(rows.size(), n_cols());
    std::vector<double> ys(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= n_rows()) throw std::out_of_range("subset: row index");
        for (std::size_t j = 0; j < n_cols(); ++j) xs(i, j) = x(rows[i], j);
        ys[i] = y[rows[i]];
    }
    return Dataset(std::move(xs), std::move(ys), names);
}

std::vector<std::string> default_names(std::size_t p) {
    std::vector<std::string> names(p);
    for (std::size_t j = 0; j < p; ++j) names[j] = "x" + std::to_string(j + 1);
    return names;
}

FeatureMatrix permute_column(const FeatureMatrix& x, std::size_t j,
                             const Permutation& perm) {
    if (j >= x.n_cols()) throw std::out_of_range("permute_column: index");
    if (perm.size() != x.n_rows())
        throw std::invalid_argument("permute_column: permutation length != N");
    if (!perm.is_valid())
        throw std::invalid_argument("permute_column: not a bijection");
    FeatureMatrix out = x;
    auto src = x.col(j);
    auto dst = out.col(j);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[perm.order[i]];
    return out;
}

Dataset permute_column(const Dataset& d, std::size_t j, const Permutation& perm) {
    return Dataset(permute_column(d.x, j, perm), d.y, d.names);
}

FeatureMatrix set_column(const FeatureMatrix& x, std::size_t j, double value) {
    if (j >= x.n_cols()) throw std::out_of_range("set_column: index");
    if (!std::isfinite(value))
        throw std::invalid_argument("set_column: non-finite value");
    FeatureMatrix out = x;
    auto dst = out.col(j);
    std::fill(dst.begin(), dst.end(), value);
    return out;
}

Dataset set_column(const Dataset& d, std::size_t j, double x) {
    return Dataset(set_column(d.x, j, x), d.y, d.names);
}

FeatureMatrix replace_column(const FeatureMatrix& x, std::size_t j,
                             std::span<const double> values) {
    if (j >= x.n_cols()) throw std::out_of_range("replace_column: index");
    if (values.size() != x.n_rows())
        throw std::invalid_argument("replace_column: length mismatch");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("replace_column: non-finite entry");
    FeatureMatrix out = x;
    auto dst = out.col(j);
    std::copy(values.begin(), values.end(), dst.begin());
    return out;
}

Dataset replace_column(const Dataset& d, std::size_t j,
                       std::span<const double> values) {
    return Dataset(replace_column(d.x, j, values), d.y, d.names);
}

LossVector squared_loss(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size())
        throw std::invalid_argument("squared_loss: length mismatch");
    LossVector out;
    out.per_row.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - yhat[i];
        out.per_row[i] = r * r;
        out.total += out.per_row[i];
    }
    return out;
}

std::vector<int> rank_scores(std::span<const double> scores) {
    const std::size_t p = scores.size();
    for (double s : scores)
        if (!std::isfinite(s))
            throw std::invalid_argument("rank_scores: non-finite score");
    std::vector<std::size_t> idx(p);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] < scores[b];
    });
    std::vector<int> ranks(p);
    for (std::size_t r = 0; r < p; ++r) ranks[idx[r]] = static_cast<int>(r + 1);
    return ranks;
}

}  // namespace permdiag
