#include "permdiag/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "permdiag/parallel.hpp"
#include "permdiag/rng.hpp"

namespace permdiag {

std::size_t ForestConfig::resolved_mtry(std::size_t p) const {
    if (mtry > 0) return std::min(mtry, p);
    return std::max<std::size_t>(1, p / 3);
}

std::size_t Tree::leaf_index(const FeatureMatrix& x, std::size_t i) const {
    std::size_t k = 0;
    while (nodes[k].feature >= 0) {
        const TreeNode& nd = nodes[k];
        k = static_cast<std::size_t>(
            x(i, static_cast<std::size_t>(nd.feature)) <= nd.threshold ? nd.left
                                                                       : nd.right);
    }
    return k;
}

double Tree::leaf_value(const FeatureMatrix& x, std::size_t i, std::int32_t override_j,
                        double override_value) const {
    std::size_t k = 0;
    while (nodes[k].feature >= 0) {
        const TreeNode& nd = nodes[k];
        const double v = nd.feature == override_j
                             ? override_value
                             : x(i, static_cast<std::size_t>(nd.feature));
        k = static_cast<std::size_t>(v <= nd.threshold ? nd.left : nd.right);
    }
    return nodes[k].value;
}

namespace {

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = -1.0;
};

class TreeBuilder {
public:
    TreeBuilder(const Dataset& d, std::size_t mtry, std::size_t min_leaf,
                SeededStream& rng)
        : d_(d), mtry_(mtry), min_leaf_(min_leaf), rng_(rng), pool_(d.n_cols()) {}

    Tree build(std::vector<std::uint32_t> draws) {
        idx_ = std::move(draws);
        Tree t;
        t.nodes.reserve(2 * idx_.size() / std::max<std::size_t>(1, min_leaf_) + 4);
        grow(t, 0, idx_.size());
        return t;
    }

private:
    std::int32_t grow(Tree& t, std::size_t lo, std::size_t hi) {
        const auto me = static_cast<std::int32_t>(t.nodes.size());
        t.nodes.emplace_back();
        const std::size_t n = hi - lo;

        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double y = d_.y[idx_[i]];
            sum += y;
            sumsq += y * y;
        }
        const double sse = sumsq - sum * sum / static_cast<double>(n);
        const bool pure = sse <= 1e-12 * std::max(1.0, sumsq);

        SplitChoice best;
        if (n >= 2 * min_leaf_ && !pure) best = best_split(lo, hi, sum);
        if (!best.found) {
            finish_leaf(t.nodes[static_cast<std::size_t>(me)], lo, hi, sum);
            return me;
        }

        const double thr = best.threshold;
        const std::size_t jf = best.feature;
        const auto split_it = std::stable_partition(
            idx_.begin() + static_cast<std::ptrdiff_t>(lo),
            idx_.begin() + static_cast<std::ptrdiff_t>(hi),
            [&](std::uint32_t r) { return d_.x(r, jf) <= thr; });
        const auto mid = static_cast<std::size_t>(split_it - idx_.begin());

        t.nodes[static_cast<std::size_t>(me)].feature = static_cast<std::int32_t>(jf);
        t.nodes[static_cast<std::size_t>(me)].threshold = thr;
        const std::int32_t l = grow(t, lo, mid);
        t.nodes[static_cast<std::size_t>(me)].left = l;
        const std::int32_t r = grow(t, mid, hi);
        t.nodes[static_cast<std::size_t>(me)].right = r;
        return me;
    }

    SplitChoice best_split(std::size_t lo, std::size_t hi, double total_sum) {
        const std::size_t p = d_.n_cols();
        const std::size_t m = std::min(mtry_, p);
        std::iota(pool_.begin(), pool_.end(), std::size_t{0});
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t r =
                k + static_cast<std::size_t>(rng_.uniform_index(p - k));
            std::swap(pool_[k], pool_[r]);
        }
        std::sort(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(m));

        const std::size_t n = hi - lo;
        xy_.resize(n);
        SplitChoice best;
        for (std::size_t c = 0; c < m; ++c) {
            const std::size_t j = pool_[c];
            for (std::size_t i = lo; i < hi; ++i)
                xy_[i - lo] = {d_.x(idx_[i], j), d_.y[idx_[i]]};
            std::sort(xy_.begin(), xy_.end());
            if (xy_.front().first == xy_.back().first) continue;

            double sl = 0.0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                sl += xy_[k].second;
                const double a = xy_[k].first, b = xy_[k + 1].first;
                if (a == b) continue;
                const std::size_t nl = k + 1, nr = n - nl;
                if (nl < min_leaf_ || nr < min_leaf_) continue;
                // Midpoint must strictly separate, else the partition below
                // would disagree with the counts used here.
                const double thr = a + 0.5 * (b - a);
                if (!(thr > a && thr < b)) continue;
                const double sr = total_sum - sl;
                const double gain = sl * sl / static_cast<double>(nl) +
                                    sr * sr / static_cast<double>(nr);
                if (gain > best.gain) best = {true, j, thr, gain};
            }
        }
        return best;
    }

    void finish_leaf(TreeNode& leaf, std::size_t lo, std::size_t hi, double sum) {
        const std::size_t n = hi - lo;
        leaf.value = sum / static_cast<double>(n);
        member_scratch_.assign(idx_.begin() + static_cast<std::ptrdiff_t>(lo),
                               idx_.begin() + static_cast<std::ptrdiff_t>(hi));
        std::sort(member_scratch_.begin(), member_scratch_.end());
        for (std::size_t i = 0; i < member_scratch_.size();) {
            std::size_t run = i + 1;
            while (run < member_scratch_.size() &&
                   member_scratch_[run] == member_scratch_[i])
                ++run;
            leaf.rows.push_back(member_scratch_[i]);
            leaf.counts.push_back(static_cast<std::uint32_t>(run - i));
            i = run;
        }
    }

    const Dataset& d_;
    std::size_t mtry_;
    std::size_t min_leaf_;
    SeededStream& rng_;
    std::vector<std::size_t> pool_;
    std::vector<std::uint32_t> idx_;
    std::vector<std::uint32_t> member_scratch_;
    std::vector<std::pair<double, double>> xy_;
};

}  // namespace

ForestModel::ForestModel(std::vector<Tree> trees,
                         std::vector<std::vector<std::uint32_t>> inbag,
                         ForestConfig config, std::size_t p)
    : trees_(std::move(trees)), inbag_(std::move(inbag)), config_(config), p_(p) {
    if (trees_.empty()) throw std::invalid_argument("ForestModel: needs at least one tree");
    if (inbag_.size() != trees_.size())
        throw std::invalid_argument("ForestModel: inbag/tree count mismatch");
}

std::vector<double> ForestModel::predict(const FeatureMatrix& x) const {
    if (x.n_cols() != p_)
        throw std::invalid_argument("ForestModel::predict: feature count mismatch");
    std::vector<double> out(x.n_rows(), 0.0);
    for (const Tree& t : trees_)
        for (std::size_t i = 0; i < x.n_rows(); ++i) out[i] += t.leaf_value(x, i);
    const double scale = 1.0 / static_cast<double>(trees_.size());
    for (double& v : out) v *= scale;
    return out;
}

ForestModel fit_forest(const Dataset& d, const ForestConfig& config, std::size_t n_jobs) {
    const std::size_t n = d.n_rows();
    const std::size_t p = d.n_cols();
    if (config.n_trees < 1) throw std::invalid_argument("fit_forest: n_trees must be >= 1");
    if (config.min_leaf < 1) throw std::invalid_argument("fit_forest: min_leaf must be >= 1");
    if (n < 2 * config.min_leaf)
        throw std::invalid_argument("fit_forest: need at least 2*min_leaf rows");

    const std::size_t mtry = config.resolved_mtry(p);
    std::vector<Tree> trees(config.n_trees);
    std::vector<std::vector<std::uint32_t>> inbag(config.n_trees);

    parallel_for(config.n_trees, n_jobs, [&](std::size_t t) {
        SeededStream rng = derive_stream(config.seed, t, "tree");
        std::vector<std::uint32_t> draws(n);
        if (config.bootstrap) {
            for (std::size_t i = 0; i < n; ++i)
                draws[i] = static_cast<std::uint32_t>(rng.uniform_index(n));
        } else {
            std::iota(draws.begin(), draws.end(), std::uint32_t{0});
        }
        auto& bag = inbag[t];
        bag.assign(n, 0);
        for (std::uint32_t r : draws) bag[r] += 1;

        TreeBuilder builder(d, mtry, config.min_leaf, rng);
        trees[t] = builder.build(std::move(draws));
    });

    ForestConfig echo = config;
    echo.mtry = mtry;
    return ForestModel(std::move(trees), std::move(inbag), echo, p);
}

OobResult oob_predictions(const ForestModel& m, const Dataset& d) {
    if (m.n_train_rows() != d.n_rows())
        throw std::invalid_argument("oob_predictions: row count mismatch with training data");
    if (m.n_features() != d.n_cols())
        throw std::invalid_argument("oob_predictions: feature count mismatch");

    const std::size_t n = d.n_rows();
    std::vector<double> sum(n, 0.0);
    std::vector<std::size_t> cnt(n, 0);
    for (std::size_t t = 0; t < m.trees().size(); ++t) {
        const auto& bag = m.inbag()[t];
        const Tree& tree = m.trees()[t];
        for (std::size_t i = 0; i < n; ++i) {
            if (bag[i] != 0) continue;
            sum[i] += tree.leaf_value(d.x, i);
            cnt[i] += 1;
        }
    }
    OobResult r;
    r.prediction.resize(n);
    r.n_trees_oob = std::move(cnt);
    for (std::size_t i = 0; i < n; ++i)
        r.prediction[i] = r.n_trees_oob[i] == 0
                              ? std::numeric_limits<double>::quiet_NaN()
                              : sum[i] / static_cast<double>(r.n_trees_oob[i]);
    return r;
}

std::vector<std::vector<std::size_t>> leaf_comembers(const ForestModel& m,
                                                     std::span<const double> x) {
    if (x.size() != m.n_features())
        throw std::invalid_argument("leaf_comembers: feature count mismatch");
    for (double v : x)
        if (!std::isfinite(v))
            throw std::invalid_argument("leaf_comembers: query must be finite");

    const FeatureMatrix q = FeatureMatrix::from_row(x);
    std::vector<std::vector<std::size_t>> out;
    out.reserve(m.trees().size());
    for (const Tree& t : m.trees()) {
        const TreeNode& leaf = t.nodes[t.leaf_index(q, 0)];
        std::vector<std::size_t> members;
        for (std::size_t k = 0; k < leaf.rows.size(); ++k)
            members.insert(members.end(), leaf.counts[k], leaf.rows[k]);
        out.push_back(std::move(members));
    }
    return out;
}

std::unique_ptr<Predictor> ForestLearner::fit(const Dataset& data) const {
    return std::make_unique<ForestModel>(fit_forest(data, config_, n_jobs_));
}

std::unique_ptr<Predictor> ForestLearner::fit_with_seed(const Dataset& data,
                                                        std::uint64_t seed) const {
    ForestConfig c = config_;
    c.seed = seed;
    return std::make_unique<ForestModel>(fit_forest(data, c, n_jobs_));
}

}  // namespace permdiag
