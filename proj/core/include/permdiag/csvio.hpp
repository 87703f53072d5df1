#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "permdiag/bikeshare.hpp"
#include "permdiag/dataset.hpp"
#include "permdiag/effects.hpp"
#include "permdiag/importance.hpp"

namespace permdiag {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

std::vector<std::string> split_csv_line(std::string_view line);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

/// Dataset CSV: header is the feature names plus "response".
std::string dataset_to_csv(const Dataset& d);
Dataset dataset_from_csv(std::string_view text);
Dataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const Dataset& d, const std::string& path);

/// Report CSV: measure, feature, score, rank, n_reps, seed.
std::string report_to_csv(const ImportanceReport& report,
                          const std::vector<std::string>& feature_names);

/// Curve CSV: row_id (empty for the PD curve), grid_value, prediction, supported.
std::string curve_to_csv(const EffectCurve& curve);

/// Field CSV: x1, x2, mean, sd.
std::string field_to_csv(const GridField& field);

struct OracleRow {
    std::string feature;
    int theorem = 1;
    std::string target_name;
    double value = 0.0;
};

/// Oracle CSV: feature, theorem, target_name, value.
std::string oracle_to_csv(const std::vector<OracleRow>& rows);

/// Paired-rank CSV: feature, oob_rank, relearn_rank.
std::string paired_ranks_to_csv(const PairedRanks& table);

}  // namespace permdiag
