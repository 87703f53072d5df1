#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "permdiag/copula.hpp"
#include "permdiag/forest.hpp"
#include "permdiag/predictor.hpp"
#include "permdiag/rng.hpp"

namespace permdiag {

enum class Measure { PaP, OOB, COND, DROP, PERM_RELEARN, COND_RELEARN };

std::string_view measure_name(Measure m);
Measure measure_from_name(std::string_view name);

/// One importance evaluation of every feature under one measure. All measures
/// share the sign convention degraded loss minus baseline loss, so a feature
/// the model relies on scores positive.
struct ImportanceReport {
    Measure measure = Measure::PaP;
    std::vector<double> scores;
    std::size_t n_reps = 1;
    double baseline_loss = 0.0;
    std::uint64_t seed = 0;
};

/// Per-replicate ranks (1 = least important) plus their feature-wise mean.
struct RankTable {
    std::vector<std::vector<int>> ranks;
    std::vector<double> mean_rank;
};

/// Draws replacement columns from the conditional law of one feature given
/// the rest. Implementations may support only some features.
class ConditionalSampler {
public:
    virtual ~ConditionalSampler() = default;
    virtual std::size_t n_features() const = 0;
    virtual bool supports(std::size_t j) const = 0;
    virtual std::vector<double> draw_column(const FeatureMatrix& x, std::size_t j,
                                            SeededStream& rng) const = 0;
};

/// Analytic conditional law of the copula design: the coupled pair conditions
/// on its partner, every other feature is independent of the rest so its
/// conditional is the uniform marginal.
class CopulaConditional : public ConditionalSampler {
public:
    explicit CopulaConditional(CopulaSpec spec);

    std::size_t n_features() const override { return spec_.p; }
    bool supports(std::size_t j) const override { return j < spec_.p; }
    std::vector<double> draw_column(const FeatureMatrix& x, std::size_t j,
                                    SeededStream& rng) const override;

    const CopulaSpec& spec() const { return spec_; }

private:
    CopulaSpec spec_;
};

double vi_pap(const Predictor& model, const Dataset& d, std::size_t j,
              std::size_t n_reps, SeededStream& rng);

double vi_oob(const ForestModel& m, const Dataset& d, std::size_t j,
              std::size_t n_reps, SeededStream& rng);

double vi_conditional(const Predictor& model, const Dataset& d, std::size_t j,
                      const ConditionalSampler& sampler, std::size_t n_reps,
                      SeededStream& rng);

double vi_drop(const Learner& learner, const Dataset& d, std::size_t j);

double vi_permute_relearn(const Learner& learner, const Dataset& d, std::size_t j,
                          std::size_t n_reps, SeededStream& rng);

double vi_condition_relearn(const Learner& learner, const Dataset& d, std::size_t j,
                            const ConditionalSampler& sampler, std::size_t n_reps,
                            SeededStream& rng);

RankTable aggregate_ranks(const std::vector<ImportanceReport>& reports);

/// Everything a measure might need; unused members may stay null, and the
/// driver checks the ones its measure requires.
struct ReportInputs {
    const Predictor* model = nullptr;           ///< PaP, COND
    const ForestModel* forest = nullptr;        ///< OOB
    const Learner* learner = nullptr;           ///< DROP and the relearn pair
    const ConditionalSampler* sampler = nullptr;  ///< COND, COND_RELEARN
};

/// Scores every feature of d under one measure, with a per-feature stream
/// derived from (seed, feature, measure name) so feature order and
/// parallelism cannot change results.
ImportanceReport compute_report(Measure measure, const ReportInputs& in,
                                const Dataset& d, std::size_t n_reps,
                                std::uint64_t seed);

}  // namespace permdiag
