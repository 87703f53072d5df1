#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "permdiag/effects.hpp"
#include "permdiag/errors.hpp"
#include "permdiag/importance.hpp"

namespace permdiag {

/// Resolved experiment settings. Zero/empty members mean "preset default";
/// apply_preset_defaults fills them in.
struct ExperimentConfig {
    std::string preset;
    std::uint64_t seed = 1;
    std::size_t replicates = 0;
    std::string out_dir = "out";
    bool full_scale = false;
    std::size_t jobs = 1;

    std::size_t n = 0;
    std::vector<std::size_t> n_list;
    std::vector<double> rho_list;
    std::size_t measure_reps = 0;
    std::size_t forest_trees = 0;
    std::size_t mlp_max_iter = 0;

    std::string bikeshare_path;
    std::size_t bikeshare_subsample = 0;
};

const std::vector<std::string>& preset_names();
bool is_preset(std::string_view name);

/// Toolkit version string recorded in manifests.
const char* toolkit_version();

/// Key = value sections; # and ; start comments. Unknown sections or keys are
/// configuration errors, as are unparsable values.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config_file(const std::string& path);

/// Fills preset defaults into zero/empty fields and validates the result.
void apply_preset_defaults(ExperimentConfig& cfg);

/// One replicate's computed artifacts, before any file is written.
struct ReplicateResult {
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::vector<std::pair<std::string, ImportanceReport>> reports;
    std::vector<std::pair<std::string, EffectCurve>> curves;
};

struct RunSummary {
    std::string output_dir;
    std::vector<std::string> files;  ///< Relative names, manifest excluded.
    bool checks_passed = true;       ///< Meaningful for the oracle-check preset.
};

/// Runs a preset end to end: computes replicates (parallel up to cfg.jobs,
/// results independent of scheduling), then writes CSVs, SVGs, and a manifest
/// listing every output with a content hash.
RunSummary run_experiment(const ExperimentConfig& cfg);

/// FNV-1a 64-bit content hash, as used in the manifest.
std::uint64_t content_hash(std::string_view bytes);

}  // namespace permdiag
