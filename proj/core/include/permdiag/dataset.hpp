#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace permdiag {

/// Dense real matrix stored column-major; column access is the hot path for
/// the column-replacement constructions and for tree splitting.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t n_rows, std::size_t n_cols, double fill = 0.0);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return n_cols_; }

    double operator()(std::size_t i, std::size_t j) const {
        return data_[j * n_rows_ + i];
    }
    double& operator()(std::size_t i, std::size_t j) {
        return data_[j * n_rows_ + i];
    }

    std::span<const double> col(std::size_t j) const {
        return {data_.data() + j * n_rows_, n_rows_};
    }
    std::span<double> col(std::size_t j) {
        return {data_.data() + j * n_rows_, n_rows_};
    }

    std::vector<double> row(std::size_t i) const;

    /// Matrix with the given column removed (width p-1).
    FeatureMatrix without_column(std::size_t j) const;

    /// Single-row matrix view of one observation.
    static FeatureMatrix from_row(std::span<const double> r);

    bool all_finite() const;

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::vector<double> data_;
};

/// A bijection on {0, ..., n-1}.
struct Permutation {
    std::vector<std::size_t> order;

    std::size_t size() const { return order.size(); }
    bool is_valid() const;
    static Permutation identity(std::size_t n);
};

/// Per-row losses with their total; total always equals the sum of per_row.
struct LossVector {
    std::vector<double> per_row;
    double total = 0.0;
};

/// Feature matrix plus response and feature names. Immutable by convention:
/// every operation returns a new value.
struct Dataset {
    FeatureMatrix x;
    std::vector<double> y;
    std::vector<std::string> names;

    Dataset() = default;
    Dataset(FeatureMatrix features, std::vector<double> response,
            std::vector<std::string> feature_names);

    std::size_t n_rows() const { return x.n_rows(); }
    std::size_t n_cols() const { return x.n_cols(); }

    /// Dataset with feature j removed (names and columns shift down).
    Dataset without_feature(std::size_t j) const;

    /// Dataset restricted to the given rows, in the given order.
    Dataset subset(std::span<const std::size_t> rows) const;
};

/// Default names x1..xp.
std::vector<std::string> default_names(std::size_t p);

/// Column j reordered by perm: out[i] = in[perm[i]]. Everything else copies.
Dataset permute_column(const Dataset& d, std::size_t j, const Permutation& perm);
FeatureMatrix permute_column(const FeatureMatrix& x, std::size_t j,
                             const Permutation& perm);

/// Column j set to the constant value x everywhere.
Dataset set_column(const Dataset& d, std::size_t j, double x);
FeatureMatrix set_column(const FeatureMatrix& x, std::size_t j, double value);

/// Column j replaced by an arbitrary length-N vector.
Dataset replace_column(const Dataset& d, std::size_t j,
                       std::span<const double> values);
FeatureMatrix replace_column(const FeatureMatrix& x, std::size_t j,
                             std::span<const double> values);

/// Squared-error loss per row and in total.
LossVector squared_loss(std::span<const double> y, std::span<const double> yhat);

/// Ranks 1..p from least to greatest score; ties go to the lower index.
std::vector<int> rank_scores(std::span<const double> scores);

}  // namespace permdiag
