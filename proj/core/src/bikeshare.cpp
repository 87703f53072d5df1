#include "permdiag/bikeshare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "permdiag/csvio.hpp"
#include "permdiag/errors.hpp"
#include "permdiag/importance.hpp"
#include "permdiag/rng.hpp"

namespace permdiag {

const std::vector<std::string>& bikeshare_feature_names() {
    static const std::vector<std::string> names = {
        "season", "yr",         "mnth", "hr",   "holiday", "weekday",
        "workingday", "weathersit", "temp", "atemp", "hum",     "windspeed"};
    return names;
}

BikeShareLoad load_bikeshare(const BikeShareConfig& cfg) {
    const std::string text = read_text_file(cfg.path);

    std::vector<std::string_view> lines;
    std::string_view sv = text;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= sv.size(); ++i) {
        if (i == sv.size() || sv[i] == '\n') {
            std::string_view line = sv.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (!line.empty()) lines.push_back(line);
            start = i + 1;
        }
    }
    if (lines.empty()) throw DataError("bikeshare: empty file " + cfg.path);

    const auto header = split_csv_line(lines[0]);
    const auto& wanted = bikeshare_feature_names();
    std::vector<std::size_t> col_of(wanted.size());
    std::vector<std::string> missing;
    for (std::size_t j = 0; j < wanted.size(); ++j) {
        const auto it = std::find(header.begin(), header.end(), wanted[j]);
        if (it == header.end())
            missing.push_back(wanted[j]);
        else
            col_of[j] = static_cast<std::size_t>(it - header.begin());
    }
    const auto cnt_it = std::find(header.begin(), header.end(), "cnt");
    if (cnt_it == header.end()) missing.push_back("cnt");
    if (!missing.empty()) {
        std::string msg = "bikeshare: schema mismatch, missing columns:";
        for (const auto& m : missing) msg += " " + m;
        throw DataError(msg);
    }
    const auto cnt_col = static_cast<std::size_t>(cnt_it - header.begin());

    const std::size_t n_source = lines.size() - 1;
    std::vector<double> xs;
    xs.reserve(n_source * wanted.size());
    std::vector<double> ys;
    ys.reserve(n_source);
    std::vector<std::size_t> rejected;
    for (std::size_t i = 0; i < n_source; ++i) {
        const auto cells = split_csv_line(lines[i + 1]);
        if (cells.size() != header.size())
            throw DataError("bikeshare: row " + std::to_string(i + 2) +
                            " has wrong cell count");
        const double cnt = parse_double(cells[cnt_col]);
        if (cnt < 1.0) {
            rejected.push_back(i + 1);
            continue;
        }
        for (std::size_t j = 0; j < wanted.size(); ++j)
            xs.push_back(parse_double(cells[col_of[j]]));
        ys.push_back(std::log(cnt));
    }
    if (ys.empty()) throw DataError("bikeshare: no usable rows in " + cfg.path);

    const std::size_t n = ys.size();
    FeatureMatrix x(n, wanted.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < wanted.size(); ++j)
            x(i, j) = xs[i * wanted.size() + j];
    Dataset d(std::move(x), std::move(ys), wanted);

    if (cfg.subsample && *cfg.subsample < d.n_rows()) {
        SeededStream rng = derive_stream(cfg.seed, 0, "bikeshare-subsample");
        auto order = rng.permutation(d.n_rows());
        order.resize(*cfg.subsample);
        std::sort(order.begin(), order.end());
        d = d.subset(order);
    }
    return {std::move(d), std::move(rejected)};
}

PairedRanks rank_comparison(const Dataset& d, const ForestConfig& forest_config,
                            std::size_t relearn_reps, std::uint64_t seed,
                            std::size_t n_jobs) {
    ForestConfig fc = forest_config;
    fc.seed = derive_seed(seed, 0, "fig7-forest");
    const ForestModel forest = fit_forest(d, fc, n_jobs);

    ReportInputs oob_in;
    oob_in.forest = &forest;
    const ImportanceReport oob = compute_report(Measure::OOB, oob_in, d, relearn_reps,
                                                derive_seed(seed, 0, "fig7-oob"));

    ForestLearner learner(fc, n_jobs);
    ReportInputs rl_in;
    rl_in.learner = &learner;
    const ImportanceReport relearn =
        compute_report(Measure::PERM_RELEARN, rl_in, d, relearn_reps,
                       derive_seed(seed, 0, "fig7-relearn"));

    PairedRanks out;
    out.feature = d.names;
    out.oob_rank = rank_scores(oob.scores);
    out.relearn_rank = rank_scores(relearn.scores);
    return out;
}

}  // namespace permdiag
