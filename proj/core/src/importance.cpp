#include "permdiag/importance.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace permdiag {

std::string_view measure_name(Measure m) {
    switch (m) {
        case Measure::PaP: return "PaP";
        case Measure::OOB: return "OOB";
        case Measure::COND: return "COND";
        case Measure::DROP: return "DROP";
        case Measure::PERM_RELEARN: return "PERM_RELEARN";
        case Measure::COND_RELEARN: return "COND_RELEARN";
    }
    throw std::logic_error("measure_name: unknown measure");
}

Measure measure_from_name(std::string_view name) {
    for (Measure m : {Measure::PaP, Measure::OOB, Measure::COND, Measure::DROP,
                      Measure::PERM_RELEARN, Measure::COND_RELEARN})
        if (measure_name(m) == name) return m;
    throw std::invalid_argument("measure_from_name: unknown measure name");
}

CopulaConditional::CopulaConditional(CopulaSpec spec) : spec_(spec) {
    spec_.validate();
}

std::vector<double> CopulaConditional::draw_column(const FeatureMatrix& x,
                                                   std::size_t j,
                                                   SeededStream& rng) const {
    if (x.n_cols() != spec_.p)
        throw std::invalid_argument("CopulaConditional: feature count mismatch");
    if (!supports(j))
        throw std::invalid_argument("CopulaConditional: unsupported feature");

    const std::size_t n = x.n_rows();
    std::vector<double> col(n);
    if (j == spec_.pair.first || j == spec_.pair.second) {
        const std::size_t partner =
            j == spec_.pair.first ? spec_.pair.second : spec_.pair.first;
        for (std::size_t i = 0; i < n; ++i)
            col[i] = conditional_sample(spec_, x(i, partner), rng);
    } else {
        for (std::size_t i = 0; i < n; ++i) col[i] = rng.uniform_open();
    }
    return col;
}

namespace {

double baseline_loss(const Predictor& model, const Dataset& d) {
    return squared_loss(d.y, model.predict(d.x)).total;
}

void check_reps(std::size_t n_reps) {
    if (n_reps < 1) throw std::invalid_argument("importance: n_reps must be >= 1");
}

}  // namespace

double vi_pap(const Predictor& model, const Dataset& d, std::size_t j,
              std::size_t n_reps, SeededStream& rng) {
    if (j >= d.n_cols()) throw std::invalid_argument("vi_pap: feature index out of range");
    check_reps(n_reps);

    const double base = baseline_loss(model, d);
    double acc = 0.0;
    for (std::size_t rep = 0; rep < n_reps; ++rep) {
        Permutation perm{rng.permutation(d.n_rows())};
        const FeatureMatrix xp = permute_column(d.x, j, perm);
        acc += squared_loss(d.y, model.predict(xp)).total - base;
    }
    return acc / static_cast<double>(n_reps);
}

double vi_oob(const ForestModel& m, const Dataset& d, std::size_t j,
              std::size_t n_reps, SeededStream& rng) {
    if (m.n_train_rows() != d.n_rows())
        throw std::invalid_argument("vi_oob: row count mismatch with training data");
    if (j >= d.n_cols()) throw std::invalid_argument("vi_oob: feature index out of range");
    check_reps(n_reps);

    const std::size_t n_trees = m.trees().size();
    // Per-tree OOB rows and unpermuted loss, shared across reps.
    std::vector<std::vector<std::size_t>> oob_rows(n_trees);
    std::vector<double> loss0(n_trees, 0.0);
    for (std::size_t t = 0; t < n_trees; ++t) {
        const auto& bag = m.inbag()[t];
        for (std::size_t i = 0; i < d.n_rows(); ++i)
            if (bag[i] == 0) oob_rows[t].push_back(i);
        for (std::size_t i : oob_rows[t]) {
            const double e = d.y[i] - m.trees()[t].leaf_value(d.x, i);
            loss0[t] += e * e;
        }
    }

    const auto jf = static_cast<std::int32_t>(j);
    double acc = 0.0;
    for (std::size_t rep = 0; rep < n_reps; ++rep) {
        double diff_sum = 0.0;
        std::size_t contributing = 0;
        for (std::size_t t = 0; t < n_trees; ++t) {
            const auto& rows = oob_rows[t];
            if (rows.empty()) continue;
            const auto perm = rng.permutation(rows.size());
            double lossp = 0.0;
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const double xj = d.x(rows[perm[k]], j);
                const double e =
                    d.y[rows[k]] - m.trees()[t].leaf_value(d.x, rows[k], jf, xj);
                lossp += e * e;
            }
            diff_sum += lossp - loss0[t];
            contributing += 1;
        }
        if (contributing == 0)
            throw std::runtime_error("vi_oob: no tree has out-of-bag rows");
        acc += diff_sum / static_cast<double>(contributing);
    }
    return acc / static_cast<double>(n_reps);
}

double vi_conditional(const Predictor& model, const Dataset& d, std::size_t j,
                      const ConditionalSampler& sampler, std::size_t n_reps,
                      SeededStream& rng) {
    if (j >= d.n_cols())
        throw std::invalid_argument("vi_conditional: feature index out of range");
    if (!sampler.supports(j))
        throw std::invalid_argument("vi_conditional: no conditional law for feature");
    check_reps(n_reps);

    const double base = baseline_loss(model, d);
    double acc = 0.0;
    for (std::size_t rep = 0; rep < n_reps; ++rep) {
        const auto col = sampler.draw_column(d.x, j, rng);
        const FeatureMatrix xc = replace_column(d.x, j, col);
        acc += squared_loss(d.y, model.predict(xc)).total - base;
    }
    return acc / static_cast<double>(n_reps);
}

double vi_drop(const Learner& learner, const Dataset& d, std::size_t j) {
    if (j >= d.n_cols()) throw std::invalid_argument("vi_drop: feature index out of range");
    if (d.n_cols() < 2)
        throw std::invalid_argument("vi_drop: cannot drop the only feature");

    const auto full = learner.fit(d);
    const double base = squared_loss(d.y, full->predict(d.x)).total;
    const Dataset reduced = d.without_feature(j);
    const auto partial = learner.fit(reduced);
    return squared_loss(reduced.y, partial->predict(reduced.x)).total - base;
}

double vi_permute_relearn(const Learner& learner, const Dataset& d, std::size_t j,
                          std::size_t n_reps, SeededStream& rng) {
    if (j >= d.n_cols())
        throw std::invalid_argument("vi_permute_relearn: feature index out of range");
    check_reps(n_reps);

    const auto full = learner.fit(d);
    const double base = squared_loss(d.y, full->predict(d.x)).total;
    double acc = 0.0;
    for (std::size_t rep = 0; rep < n_reps; ++rep) {
        const std::uint64_t refit_seed = rng.next_u64();
        Permutation perm{rng.permutation(d.n_rows())};
        const Dataset dp = permute_column(d, j, perm);
        const auto refit = learner.fit_with_seed(dp, refit_seed);
        // Loss evaluated at the original, unpermuted rows.
        acc += squared_loss(d.y, refit->predict(d.x)).total - base;
    }
    return acc / static_cast<double>(n_reps);
}

double vi_condition_relearn(const Learner& learner, const Dataset& d, std::size_t j,
                            const ConditionalSampler& sampler, std::size_t n_reps,
                            SeededStream& rng) {
    if (j >= d.n_cols())
        throw std::invalid_argument("vi_condition_relearn: feature index out of range");
    if (!sampler.supports(j))
        throw std::invalid_argument("vi_condition_relearn: no conditional law for feature");
    check_reps(n_reps);

    const auto full = learner.fit(d);
    const double base = squared_loss(d.y, full->predict(d.x)).total;
    double acc = 0.0;
    for (std::size_t rep = 0; rep < n_reps; ++rep) {
        const std::uint64_t refit_seed = rng.next_u64();
        const auto col = sampler.draw_column(d.x, j, rng);
        const Dataset dc = replace_column(d, j, col);
        const auto refit = learner.fit_with_seed(dc, refit_seed);
        acc += squared_loss(d.y, refit->predict(d.x)).total - base;
    }
    return acc / static_cast<double>(n_reps);
}

RankTable aggregate_ranks(const std::vector<ImportanceReport>& reports) {
    if (reports.empty())
        throw std::invalid_argument("aggregate_ranks: no reports");
    const Measure m = reports.front().measure;
    const std::size_t p = reports.front().scores.size();

    RankTable table;
    table.mean_rank.assign(p, 0.0);
    for (const auto& rep : reports) {
        if (rep.measure != m)
            throw std::invalid_argument("aggregate_ranks: mixed measure ids");
        if (rep.scores.size() != p)
            throw std::invalid_argument("aggregate_ranks: feature count mismatch");
        table.ranks.push_back(rank_scores(rep.scores));
        for (std::size_t jf = 0; jf < p; ++jf)
            table.mean_rank[jf] += table.ranks.back()[jf];
    }
    for (double& v : table.mean_rank) v /= static_cast<double>(reports.size());
    return table;
}

ImportanceReport compute_report(Measure measure, const ReportInputs& in,
                                const Dataset& d, std::size_t n_reps,
                                std::uint64_t seed) {
    check_reps(n_reps);
    const std::size_t p = d.n_cols();
    auto require = [](const void* ptr, const char* what) {
        if (ptr == nullptr)
            throw std::invalid_argument(std::string("compute_report: missing ") + what);
    };

    ImportanceReport report;
    report.measure = measure;
    report.n_reps = measure == Measure::DROP ? 1 : n_reps;
    report.seed = seed;
    report.scores.resize(p);

    // The learner-backed measures share one baseline fit across features;
    // scores match the per-feature entry points exactly because fit() with a
    // fixed seed is bit-reproducible.
    std::unique_ptr<Predictor> full;
    switch (measure) {
        case Measure::PaP:
            require(in.model, "model");
            report.baseline_loss = baseline_loss(*in.model, d);
            break;
        case Measure::OOB:
            require(in.forest, "forest");
            report.baseline_loss = baseline_loss(*in.forest, d);
            break;
        case Measure::COND:
            require(in.model, "model");
            require(in.sampler, "sampler");
            report.baseline_loss = baseline_loss(*in.model, d);
            break;
        case Measure::DROP:
        case Measure::PERM_RELEARN:
        case Measure::COND_RELEARN:
            require(in.learner, "learner");
            if (measure == Measure::COND_RELEARN) require(in.sampler, "sampler");
            full = in.learner->fit(d);
            report.baseline_loss = baseline_loss(*full, d);
            break;
    }

    for (std::size_t j = 0; j < p; ++j) {
        SeededStream rng = derive_stream(seed, j, measure_name(measure));
        switch (measure) {
            case Measure::PaP:
                report.scores[j] = vi_pap(*in.model, d, j, n_reps, rng);
                break;
            case Measure::OOB:
                report.scores[j] = vi_oob(*in.forest, d, j, n_reps, rng);
                break;
            case Measure::COND:
                report.scores[j] =
                    vi_conditional(*in.model, d, j, *in.sampler, n_reps, rng);
                break;
            case Measure::DROP: {
                const Dataset reduced = d.without_feature(j);
                const auto partial = in.learner->fit(reduced);
                report.scores[j] =
                    squared_loss(reduced.y, partial->predict(reduced.x)).total -
                    report.baseline_loss;
                break;
            }
            case Measure::PERM_RELEARN: {
                double acc = 0.0;
                for (std::size_t rep = 0; rep < n_reps; ++rep) {
                    const std::uint64_t refit_seed = rng.next_u64();
                    Permutation perm{rng.permutation(d.n_rows())};
                    const Dataset dp = permute_column(d, j, perm);
                    const auto refit = in.learner->fit_with_seed(dp, refit_seed);
                    acc += squared_loss(d.y, refit->predict(d.x)).total -
                           report.baseline_loss;
                }
                report.scores[j] = acc / static_cast<double>(n_reps);
                break;
            }
            case Measure::COND_RELEARN: {
                double acc = 0.0;
                for (std::size_t rep = 0; rep < n_reps; ++rep) {
                    const std::uint64_t refit_seed = rng.next_u64();
                    const auto col = in.sampler->draw_column(d.x, j, rng);
                    const Dataset dc = replace_column(d, j, col);
                    const auto refit = in.learner->fit_with_seed(dc, refit_seed);
                    acc += squared_loss(d.y, refit->predict(d.x)).total -
                           report.baseline_loss;
                }
                report.scores[j] = acc / static_cast<double>(n_reps);
                break;
            }
        }
    }
    return report;
}

}  // namespace permdiag
