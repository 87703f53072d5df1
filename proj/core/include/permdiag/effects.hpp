#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "permdiag/copula.hpp"
#include "permdiag/predictor.hpp"

namespace permdiag {

/// Prediction curves along one feature. PD holds one curve (the average over
/// rows, row_ids empty); ICE holds one curve per requested row. supported has
/// the shape of values; PD rows are always fully supported.
struct EffectCurve {
    std::size_t feature = 0;
    std::vector<double> grid;
    std::vector<std::size_t> row_ids;
    std::vector<std::vector<double>> values;
    std::vector<std::vector<bool>> supported;
    bool support_warning = false;  ///< Support asked for a feature with no conditional law.

    bool is_pd() const { return row_ids.empty(); }
};

/// 2-D grid of ensemble prediction mean and pointwise standard deviation.
/// Values are stored row-major: index i1 * resolution[1] + i2, where axis 0
/// is the first feature.
struct GridField {
    std::array<std::pair<double, double>, 2> bounds{};
    std::array<std::size_t, 2> resolution{};
    std::vector<double> mean;
    std::vector<double> sd;
    std::vector<std::array<double, 2>> training_points;

    double axis_value(std::size_t axis, std::size_t index) const;
};

/// Tells which grid points are inside the central band of a feature's
/// conditional law given the rest of a row.
class SupportProvider {
public:
    virtual ~SupportProvider() = default;
    virtual bool has_range(std::size_t j) const = 0;
    virtual Interval range(std::size_t j, std::span<const double> row) const = 0;
};

/// Support bands of the copula design: only the coupled pair has a nontrivial
/// conditional law, bounded by k_sd conditional standard deviations around the
/// conditional mean (in latent space).
class CopulaSupport : public SupportProvider {
public:
    explicit CopulaSupport(CopulaSpec spec, double k_sd = 2.0);

    bool has_range(std::size_t j) const override;
    Interval range(std::size_t j, std::span<const double> row) const override;

    double k_sd() const { return k_sd_; }

private:
    CopulaSpec spec_;
    double k_sd_;
};

std::vector<double> default_grid(std::size_t points = 21, double lo = 0.0,
                                 double hi = 1.0);

EffectCurve partial_dependence(const Predictor& model, const Dataset& d, std::size_t j,
                               std::span<const double> grid);

EffectCurve ice_curves(const Predictor& model, const Dataset& d,
                       std::span<const std::size_t> rows, std::size_t j,
                       std::span<const double> grid,
                       const SupportProvider* support = nullptr);

GridField prediction_grid(const std::vector<const Predictor*>& models,
                          const std::array<std::pair<double, double>, 2>& bounds,
                          const std::array<std::size_t, 2>& resolution);

}  // namespace permdiag
