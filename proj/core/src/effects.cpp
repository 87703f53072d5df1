#include "permdiag/effects.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace permdiag {

double GridField::axis_value(std::size_t axis, std::size_t index) const {
    const auto [lo, hi] = bounds[axis];
    const std::size_t r = resolution[axis];
    if (r == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(index) / static_cast<double>(r - 1);
}

CopulaSupport::CopulaSupport(CopulaSpec spec, double k_sd) : spec_(spec), k_sd_(k_sd) {
    spec_.validate();
    if (k_sd_ <= 0.0) throw std::invalid_argument("CopulaSupport: k_sd must be positive");
}

bool CopulaSupport::has_range(std::size_t j) const {
    return j == spec_.pair.first || j == spec_.pair.second;
}

Interval CopulaSupport::range(std::size_t j, std::span<const double> row) const {
    if (!has_range(j))
        throw std::invalid_argument("CopulaSupport: feature has no conditional law");
    if (row.size() != spec_.p)
        throw std::invalid_argument("CopulaSupport: row width mismatch");
    const std::size_t partner =
        j == spec_.pair.first ? spec_.pair.second : spec_.pair.first;
    const double given = row[partner];
    // Continuous extension at the partner's extremes, where the conditional
    // law collapses onto the matching corner (band independent of the partner
    // when the pair is uncoupled).
    if (given <= 0.0 || given >= 1.0) {
        if (spec_.rho == 0.0) return conditional_range(spec_, 0.5, k_sd_);
        double corner = (given <= 0.0) == (spec_.rho > 0.0) ? 0.0 : 1.0;
        return {corner, corner};
    }
    return conditional_range(spec_, given, k_sd_);
}

std::vector<double> default_grid(std::size_t points, double lo, double hi) {
    if (points < 2) throw std::invalid_argument("default_grid: need at least 2 points");
    std::vector<double> g(points);
    for (std::size_t k = 0; k < points; ++k)
        g[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    g.front() = lo;
    g.back() = hi;
    return g;
}

namespace {

void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("effects: empty grid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!std::isfinite(grid[k]))
            throw std::invalid_argument("effects: non-finite grid value");
        if (k > 0 && !(grid[k] > grid[k - 1]))
            throw std::invalid_argument("effects: grid must be strictly ascending");
    }
}

}  // namespace

EffectCurve partial_dependence(const Predictor& model, const Dataset& d, std::size_t j,
                               std::span<const double> grid) {
    if (j >= d.n_cols())
        throw std::invalid_argument("partial_dependence: feature index out of range");
    check_grid(grid);

    EffectCurve curve;
    curve.feature = j;
    curve.grid.assign(grid.begin(), grid.end());
    std::vector<double> pd(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const FeatureMatrix xg = set_column(d.x, j, grid[g]);
        const auto pred = model.predict(xg);
        double s = 0.0;
        for (double v : pred) s += v;
        pd[g] = s / static_cast<double>(pred.size());
    }
    curve.values.push_back(std::move(pd));
    curve.supported.emplace_back(grid.size(), true);
    return curve;
}

EffectCurve ice_curves(const Predictor& model, const Dataset& d,
                       std::span<const std::size_t> rows, std::size_t j,
                       std::span<const double> grid, const SupportProvider* support) {
    if (j >= d.n_cols())
        throw std::invalid_argument("ice_curves: feature index out of range");
    if (rows.empty()) throw std::invalid_argument("ice_curves: no rows requested");
    for (std::size_t i : rows)
        if (i >= d.n_rows()) throw std::invalid_argument("ice_curves: row out of range");
    check_grid(grid);

    EffectCurve curve;
    curve.feature = j;
    curve.grid.assign(grid.begin(), grid.end());
    curve.row_ids.assign(rows.begin(), rows.end());
    curve.values.assign(rows.size(), std::vector<double>(grid.size()));
    curve.supported.assign(rows.size(), std::vector<bool>(grid.size(), true));

    // One batch prediction per grid value over the requested rows.
    FeatureMatrix sub(rows.size(), d.n_cols());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < d.n_cols(); ++c) sub(r, c) = d.x(rows[r], c);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const FeatureMatrix xg = set_column(sub, j, grid[g]);
        const auto pred = model.predict(xg);
        for (std::size_t r = 0; r < rows.size(); ++r) curve.values[r][g] = pred[r];
    }

    if (support != nullptr) {
        if (!support->has_range(j)) {
            curve.support_warning = true;
        } else {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const auto row = d.x.row(rows[r]);
                const Interval band = support->range(j, row);
                for (std::size_t g = 0; g < grid.size(); ++g)
                    curve.supported[r][g] = grid[g] >= band.lo && grid[g] <= band.hi;
            }
        }
    }
    return curve;
}

GridField prediction_grid(const std::vector<const Predictor*>& models,
                          const std::array<std::pair<double, double>, 2>& bounds,
                          const std::array<std::size_t, 2>& resolution) {
    if (models.empty()) throw std::invalid_argument("prediction_grid: no models");
    for (const Predictor* m : models) {
        if (m == nullptr) throw std::invalid_argument("prediction_grid: null model");
        if (m->n_features() != 2)
            throw std::invalid_argument("prediction_grid: models must take 2 features");
    }
    for (std::size_t a = 0; a < 2; ++a) {
        if (resolution[a] < 1)
            throw std::invalid_argument("prediction_grid: zero resolution");
        if (!(bounds[a].second >= bounds[a].first))
            throw std::invalid_argument("prediction_grid: bad bounds");
    }

    GridField field;
    field.bounds = bounds;
    field.resolution = resolution;
    const std::size_t cells = resolution[0] * resolution[1];

    FeatureMatrix pts(cells, 2);
    for (std::size_t i1 = 0; i1 < resolution[0]; ++i1)
        for (std::size_t i2 = 0; i2 < resolution[1]; ++i2) {
            const std::size_t k = i1 * resolution[1] + i2;
            pts(k, 0) = field.axis_value(0, i1);
            pts(k, 1) = field.axis_value(1, i2);
        }

    std::vector<double> sum(cells, 0.0), sumsq(cells, 0.0);
    for (const Predictor* m : models) {
        const auto pred = m->predict(pts);
        for (std::size_t k = 0; k < cells; ++k) {
            sum[k] += pred[k];
            sumsq[k] += pred[k] * pred[k];
        }
    }

    const auto n_models = static_cast<double>(models.size());
    field.mean.resize(cells);
    field.sd.assign(cells, 0.0);
    for (std::size_t k = 0; k < cells; ++k) {
        field.mean[k] = sum[k] / n_models;
        if (models.size() > 1) {
            const double ss = sumsq[k] - sum[k] * sum[k] / n_models;
            field.sd[k] = std::sqrt(std::max(0.0, ss / (n_models - 1.0)));
        }
    }
    return field;
}

}  // namespace permdiag
