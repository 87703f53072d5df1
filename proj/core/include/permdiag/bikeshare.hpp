#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permdiag/dataset.hpp"
#include "permdiag/forest.hpp"

namespace permdiag {

struct BikeShareConfig {
    std::string path;
    std::optional<std::size_t> subsample;
    std::uint64_t seed = 0;
};

struct BikeShareLoad {
    Dataset data;                       ///< Response is ln(count).
    std::vector<std::size_t> rejected;  ///< 1-based source rows with count < 1, dropped.
};

/// Hourly rental file: keeps every predictor column (record index, date
/// string, and the casual/registered count components are dropped) and maps
/// the count column through the natural log.
BikeShareLoad load_bikeshare(const BikeShareConfig& cfg);

/// Predictor column names expected in the source header, in output order.
const std::vector<std::string>& bikeshare_feature_names();

struct PairedRanks {
    std::vector<std::string> feature;
    std::vector<int> oob_rank;
    std::vector<int> relearn_rank;
};

/// Fits one forest, then ranks every feature under the out-of-bag
/// permutation measure and under permute-relearn.
PairedRanks rank_comparison(const Dataset& d, const ForestConfig& forest_config,
                            std::size_t relearn_reps, std::uint64_t seed,
                            std::size_t n_jobs = 1);

}  // namespace permdiag
