#pragma once

#include <cstdint>
#include <vector>

#include "permdiag/predictor.hpp"

namespace permdiag {

struct ForestConfig {
    std::size_t n_trees = 500;
    std::size_t mtry = 0;  ///< 0 means max(1, floor(p/3)).
    std::size_t min_leaf = 5;
    bool bootstrap = true;
    std::uint64_t seed = 0;

    std::size_t resolved_mtry(std::size_t p) const;
};

/// Binary tree node. feature < 0 marks a leaf; leaves carry the distinct
/// training rows that landed there with their bootstrap multiplicities, and
/// value equals the multiplicity-weighted mean of their responses.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
    std::vector<std::uint32_t> rows;
    std::vector<std::uint32_t> counts;
};

struct Tree {
    std::vector<TreeNode> nodes;

    std::size_t leaf_index(const FeatureMatrix& x, std::size_t i) const;
    /// Leaf value for row i, optionally pretending feature override_j holds
    /// override_value; used by the out-of-bag permutation walk.
    double leaf_value(const FeatureMatrix& x, std::size_t i,
                      std::int32_t override_j = -1, double override_value = 0.0) const;
};

class ForestModel : public Predictor {
public:
    ForestModel(std::vector<Tree> trees, std::vector<std::vector<std::uint32_t>> inbag,
                ForestConfig config, std::size_t p);

    std::vector<double> predict(const FeatureMatrix& x) const override;
    std::size_t n_features() const override { return p_; }

    const std::vector<Tree>& trees() const { return trees_; }
    /// Bootstrap multiplicity of each training row per tree; 0 means out of bag.
    const std::vector<std::vector<std::uint32_t>>& inbag() const { return inbag_; }
    const ForestConfig& config() const { return config_; }
    std::size_t n_train_rows() const { return inbag_.empty() ? 0 : inbag_.front().size(); }

private:
    std::vector<Tree> trees_;
    std::vector<std::vector<std::uint32_t>> inbag_;
    ForestConfig config_;
    std::size_t p_;
};

ForestModel fit_forest(const Dataset& d, const ForestConfig& config, std::size_t n_jobs = 1);

struct OobResult {
    std::vector<double> prediction;  ///< NaN where no tree left the row out.
    std::vector<std::size_t> n_trees_oob;
};

OobResult oob_predictions(const ForestModel& m, const Dataset& d);

/// Per-tree training rows sharing the query's leaf, each repeated by its
/// bootstrap multiplicity. The mean response over any tree's list equals that
/// tree's prediction at x.
std::vector<std::vector<std::size_t>> leaf_comembers(const ForestModel& m,
                                                     std::span<const double> x);

class ForestLearner : public Learner {
public:
    explicit ForestLearner(ForestConfig config, std::size_t n_jobs = 1)
        : config_(config), n_jobs_(n_jobs) {}

    std::unique_ptr<Predictor> fit(const Dataset& data) const override;
    std::unique_ptr<Predictor> fit_with_seed(const Dataset& data,
                                             std::uint64_t seed) const override;

    const ForestConfig& config() const { return config_; }

private:
    ForestConfig config_;
    std::size_t n_jobs_;
};

}  // namespace permdiag
