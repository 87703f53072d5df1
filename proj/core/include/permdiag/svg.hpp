#pragma once

#include <string>
#include <utility>
#include <vector>

#include "permdiag/effects.hpp"
#include "permdiag/importance.hpp"

namespace permdiag {

struct SvgStyle {
    double width = 640.0;
    double height = 480.0;
    std::string title;
};

/// Mean ranks per feature, one point series per labelled table.
std::string svg_rank_scatter(
    const std::vector<std::pair<std::string, RankTable>>& series,
    const std::vector<std::string>& feature_names, const SvgStyle& style);

/// PD/ICE curves as polylines; unsupported stretches are dashed.
std::string svg_curves(const EffectCurve& curve, const SvgStyle& style);

/// Heatmap of a field (mean or sd) with optional training-point overlay.
std::string svg_field(const GridField& field, bool use_sd, const SvgStyle& style);

}  // namespace permdiag
