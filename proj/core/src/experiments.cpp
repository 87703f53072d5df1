#include "permdiag/experiments.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "permdiag/bikeshare.hpp"
#include "permdiag/copula.hpp"
#include "permdiag/csvio.hpp"
#include "permdiag/forest.hpp"
#include "permdiag/linear.hpp"
#include "permdiag/mlp.hpp"
#include "permdiag/oracle.hpp"
#include "permdiag/parallel.hpp"
#include "permdiag/rng.hpp"
#include "permdiag/stats.hpp"
#include "permdiag/svg.hpp"

namespace permdiag {
namespace {

constexpr const char* kVersion = "0.1.0";

// Effectively "no subsampling" once defaults are applied.
constexpr std::size_t kAllRows = static_cast<std::size_t>(-1);

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::uint64_t parse_u64(std::string_view v, const std::string& what) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("invalid integer for " + what + ": '" + std::string(v) + "'");
    return out;
}

double parse_f64(std::string_view v, const std::string& what) {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("invalid number for " + what + ": '" + std::string(v) + "'");
    return out;
}

bool parse_bool(std::string_view v, const std::string& what) {
    std::string s = lower(trim(v));
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("invalid boolean for " + what + ": '" + std::string(v) + "'");
}

std::vector<std::string_view> split_list(std::string_view v) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        std::size_t comma = v.find(',', start);
        if (comma == std::string_view::npos) comma = v.size();
        std::string_view item = trim(v.substr(start, comma - start));
        if (!item.empty()) out.push_back(item);
        start = comma + 1;
    }
    return out;
}

std::string rho_label(double rho) { return format_double(rho); }

std::string index_tag(const char* stem, std::size_t value, std::size_t total) {
    int width = 1;
    for (std::size_t t = total > 0 ? total - 1 : 0; t >= 10; t /= 10) ++width;
    width = std::max(width, 2);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%0*zu", stem, width, value);
    return buf;
}

// Output files are accumulated in memory so the manifest can hash every one,
// then written together. Insertion order is the manifest order.
class Emitter {
public:
    explicit Emitter(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void add(std::string name, std::string role, std::string content) {
        files_.push_back({std::move(name), std::move(role), std::move(content)});
    }

    json& extra() { return extra_; }

    void set_replicate_seconds(std::vector<double> seconds) { rep_seconds_ = std::move(seconds); }

    RunSummary finalize(const ExperimentConfig& cfg, double total_seconds, bool checks_passed) {
        RunSummary summary;
        summary.output_dir = dir_.string();
        summary.checks_passed = checks_passed;
        json manifest;
        manifest["preset"] = cfg.preset;
        manifest["versions"] = {{"permdiag", kVersion}, {"compiler", __VERSION__}};
        manifest["seed"] = cfg.seed;
        manifest["config"] = config_json(cfg);
        manifest["wall_seconds"] = {{"total", total_seconds}, {"replicates", rep_seconds_}};
        manifest["extra"] = extra_;
        json files = json::array();
        for (const OutFile& f : files_) {
            write_text_file((dir_ / f.name).string(), f.content);
            char hex[17];
            std::snprintf(hex, sizeof hex, "%016llx",
                          static_cast<unsigned long long>(content_hash(f.content)));
            files.push_back({{"name", f.name}, {"role", f.role}, {"hash", hex}});
            summary.files.push_back(f.name);
        }
        manifest["files"] = files;
        write_text_file((dir_ / "manifest.json").string(), manifest.dump(2) + "\n");
        return summary;
    }

private:
    struct OutFile {
        std::string name;
        std::string role;
        std::string content;
    };

    static json config_json(const ExperimentConfig& cfg) {
        json j;
        j["preset"] = cfg.preset;
        j["seed"] = cfg.seed;
        j["replicates"] = cfg.replicates;
        j["out_dir"] = cfg.out_dir;
        j["full_scale"] = cfg.full_scale;
        j["jobs"] = cfg.jobs;
        j["n"] = cfg.n;
        j["n_list"] = cfg.n_list;
        j["rho"] = cfg.rho_list;
        j["measure_reps"] = cfg.measure_reps;
        j["forest_trees"] = cfg.forest_trees;
        j["mlp_max_iter"] = cfg.mlp_max_iter;
        j["bikeshare_path"] = cfg.bikeshare_path;
        j["bikeshare_subsample"] =
            cfg.bikeshare_subsample == kAllRows ? json("all") : json(cfg.bikeshare_subsample);
        return j;
    }

    std::filesystem::path dir_;
    std::vector<OutFile> files_;
    std::vector<double> rep_seconds_;
    json extra_ = json::object();
};

CopulaSpec benchmark_copula(double rho, std::size_t p = 10) {
    CopulaSpec spec;
    spec.p = p;
    spec.pair = {0, 1};
    spec.rho = rho;
    return spec;
}

// Same derived stream for every rho: the shared-uniform draws couple the
// datasets so only the paired column moves when rho changes.
Dataset synth_data(const CopulaSpec& cspec, const ResponseSpec& rspec, std::size_t n,
                   std::uint64_t master, std::uint64_t replicate, const std::string& role) {
    SeededStream rng = derive_stream(master, replicate, role);
    return make_dataset(cspec, rspec, n, rng);
}

ForestConfig forest_config(const ExperimentConfig& cfg, std::uint64_t seed) {
    ForestConfig fc;
    fc.n_trees = cfg.forest_trees;
    fc.seed = seed;
    return fc;
}

MlpConfig mlp_config(const ExperimentConfig& cfg, std::uint64_t seed) {
    MlpConfig mc;
    mc.max_iter = cfg.mlp_max_iter;
    mc.seed = seed;
    return mc;
}

std::string report_file_name(std::size_t replicate, std::size_t n_replicates,
                             const std::string& rho_lbl, std::string_view learner,
                             Measure measure) {
    return index_tag("rep", replicate, n_replicates) + "_rho" + rho_lbl + "_" +
           lower(measure_name(measure)) + "_" + std::string(learner) + ".csv";
}

struct LabeledReport {
    std::string rho_lbl;
    std::string learner;
    ImportanceReport report;
};

// Mean-rank CSV across replicates for every (rho, learner, measure) group.
void emit_rank_outputs(Emitter& em, const ExperimentConfig& cfg,
                       const std::vector<std::vector<LabeledReport>>& slots,
                       const std::vector<std::string>& feature_names) {
    for (std::size_t r = 0; r < slots.size(); ++r)
        for (const LabeledReport& lr : slots[r])
            em.add(report_file_name(r, slots.size(), lr.rho_lbl, lr.learner, lr.report.measure),
                   "replicate-report", report_to_csv(lr.report, feature_names));

    struct Group {
        std::string rho_lbl;
        std::string learner;
        Measure measure;
        std::vector<ImportanceReport> reports;
    };
    std::vector<Group> groups;
    for (const auto& slot : slots)
        for (const LabeledReport& lr : slot) {
            auto match = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
                return g.rho_lbl == lr.rho_lbl && g.learner == lr.learner &&
                       g.measure == lr.report.measure;
            });
            if (match == groups.end()) {
                groups.push_back({lr.rho_lbl, lr.learner, lr.report.measure, {}});
                match = groups.end() - 1;
            }
            match->reports.push_back(lr.report);
        }

    std::string csv = "measure,learner,rho,feature,mean_rank,replicates\n";
    std::vector<std::pair<std::string, RankTable>> tables;
    tables.reserve(groups.size());
    for (const Group& g : groups) {
        RankTable rt = aggregate_ranks(g.reports);
        for (std::size_t j = 0; j < rt.mean_rank.size(); ++j) {
            csv += std::string(measure_name(g.measure)) + "," + g.learner + "," + g.rho_lbl +
                   "," + feature_names[j] + "," + format_double(rt.mean_rank[j]) + "," +
                   std::to_string(g.reports.size()) + "\n";
        }
        tables.emplace_back(lower(measure_name(g.measure)) + " " + g.learner + " rho=" + g.rho_lbl,
                            std::move(rt));
    }
    em.add("mean_ranks.csv", "aggregate", csv);

    for (double rho : cfg.rho_list) {
        std::string lbl = rho_label(rho);
        std::vector<std::pair<std::string, RankTable>> series;
        for (std::size_t gi = 0; gi < groups.size(); ++gi)
            if (groups[gi].rho_lbl == lbl)
                series.emplace_back(lower(std::string(measure_name(groups[gi].measure))) + " " +
                                        groups[gi].learner,
                                    tables[gi].second);
        SvgStyle style;
        style.title = cfg.preset + " mean ranks, rho=" + lbl;
        em.add("ranks_rho" + lbl + ".svg", "figure",
               svg_rank_scatter(series, feature_names, style));
    }
}

// --- fig1: permutation importances across learners -------------------------

void run_fig1(const ExperimentConfig& cfg, Emitter& em) {
    const ResponseSpec resp = ResponseSpec::benchmark_linear();
    std::vector<std::vector<LabeledReport>> slots(cfg.replicates);
    std::vector<double> times(cfg.replicates, 0.0);

    parallel_for(cfg.replicates, cfg.jobs, [&](std::size_t r) {
        auto t0 = Clock::now();
        for (double rho : cfg.rho_list) {
            std::string lbl = rho_label(rho);
            CopulaSpec cspec = benchmark_copula(rho, resp.beta.size());
            Dataset d = synth_data(cspec, resp, cfg.n, cfg.seed, r, "data");

            ForestModel forest = fit_forest(
                d, forest_config(cfg, derive_seed(cfg.seed, r, "forest:rho=" + lbl)));
            MLPModel mlp = fit_mlp(d, mlp_config(cfg, derive_seed(cfg.seed, r, "mlp:rho=" + lbl)));
            LinearModel linear = fit_linear(d);

            auto pap = [&](const Predictor& model, const std::string& learner) {
                ReportInputs in;
                in.model = &model;
                ImportanceReport rep =
                    compute_report(Measure::PaP, in, d, cfg.measure_reps,
                                   derive_seed(cfg.seed, r, "pap:" + learner + ":rho=" + lbl));
                slots[r].push_back({lbl, learner, std::move(rep)});
            };
            pap(forest, "forest");
            pap(mlp, "mlp");
            pap(linear, "linear");

            ReportInputs oob_in;
            oob_in.forest = &forest;
            ImportanceReport oob = compute_report(Measure::OOB, oob_in, d, cfg.measure_reps,
                                                  derive_seed(cfg.seed, r, "oob:rho=" + lbl));
            slots[r].push_back({lbl, "forest", std::move(oob)});
        }
        times[r] = seconds_since(t0);
    });

    em.set_replicate_seconds(times);
    emit_rank_outputs(em, cfg, slots, default_names(resp.beta.size()));
}

// --- fig2: rank of the coupled feature across (n, rho) ---------------------

void run_fig2(const ExperimentConfig& cfg, Emitter& em) {
    ResponseSpec resp = ResponseSpec::benchmark_linear();
    resp.beta[0] = 0.8;  // coupled pair pulled below the strongest signals
    resp.beta[1] = 0.8;

    struct Cell {
        std::size_t n = 0;
        double rho = 0.0;
        int rank_x1 = 0;
    };
    std::vector<std::vector<Cell>> slots(cfg.replicates);
    std::vector<double> times(cfg.replicates, 0.0);

    parallel_for(cfg.replicates, cfg.jobs, [&](std::size_t r) {
        auto t0 = Clock::now();
        for (std::size_t n : cfg.n_list) {
            std::string n_tag = std::to_string(n);
            for (double rho : cfg.rho_list) {
                std::string lbl = rho_label(rho);
                CopulaSpec cspec = benchmark_copula(rho, resp.beta.size());
                Dataset d = synth_data(cspec, resp, n, cfg.seed, r, "data:n=" + n_tag);
                ForestModel forest = fit_forest(
                    d, forest_config(cfg, derive_seed(cfg.seed, r,
                                                      "forest:n=" + n_tag + ":rho=" + lbl)));
                ReportInputs in;
                in.forest = &forest;
                ImportanceReport rep = compute_report(
                    Measure::OOB, in, d, cfg.measure_reps,
                    derive_seed(cfg.seed, r, "oob:n=" + n_tag + ":rho=" + lbl));
                slots[r].push_back({n, rho, rank_scores(rep.scores)[0]});
            }
        }
        times[r] = seconds_since(t0);
    });
    em.set_replicate_seconds(times);

    std::string raw = "replicate,n,rho,rank_x1\n";
    for (std::size_t r = 0; r < slots.size(); ++r)
        for (const Cell& c : slots[r])
            raw += std::to_string(r) + "," + std::to_string(c.n) + "," + rho_label(c.rho) + "," +
                   std::to_string(c.rank_x1) + "\n";
    em.add("ranks.csv", "replicate-report", raw);

    std::string agg = "n,rho,mean_rank_x1,replicates\n";
    EffectCurve chart;
    chart.feature = 0;
    chart.grid = cfg.rho_list;
    for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
        std::size_t n = cfg.n_list[ni];
        chart.row_ids.push_back(n);
        std::vector<double> row;
        for (double rho : cfg.rho_list) {
            double sum = 0.0;
            std::size_t count = 0;
            for (const auto& slot : slots)
                for (const Cell& c : slot)
                    if (c.n == n && c.rho == rho) {
                        sum += c.rank_x1;
                        ++count;
                    }
            double mean = sum / static_cast<double>(count);
            agg += std::to_string(n) + "," + rho_label(rho) + "," + format_double(mean) + "," +
                   std::to_string(count) + "\n";
            row.push_back(mean);
        }
        chart.values.push_back(row);
        chart.supported.emplace_back(row.size(), true);
    }
    em.add("mean_rank_x1.csv", "aggregate", agg);

    SvgStyle style;
    style.title = "mean out-of-bag rank of x1 by rho, one curve per n";
    em.add("rank_vs_rho.svg", "figure", svg_curves(chart, style));
}

// --- fig3: PD and ICE on the coupled feature --------------------------------

void run_fig3(const ExperimentConfig& cfg, Emitter& em) {
    const ResponseSpec resp = ResponseSpec::benchmark_linear();
    const std::size_t p = resp.beta.size();
    const std::vector<double> grid = default_grid(21);

    // 11 query rows with x1 = x2 = i/10; the free coordinates are drawn once
    // per run and echoed in the manifest.
    const std::size_t n_query = 11;
    FeatureMatrix queries(n_query, p);
    {
        SeededStream qrng = derive_stream(cfg.seed, 0, "queries");
        json echo = json::array();
        for (std::size_t i = 0; i < n_query; ++i) {
            json row = json::array();
            double t = static_cast<double>(i) / 10.0;
            queries(i, 0) = t;
            queries(i, 1) = t;
            for (std::size_t j = 2; j < p; ++j) {
                queries(i, j) = qrng.uniform();
                row.push_back(queries(i, j));
            }
            echo.push_back(row);
        }
        em.extra()["query_free_coordinates"] = echo;
    }
    std::vector<std::size_t> query_rows(n_query);
    for (std::size_t i = 0; i < n_query; ++i) query_rows[i] = i;

    struct Slot {
        // Keyed by rho label: PD per learner plus forest ICE.
        std::vector<std::pair<std::string, EffectCurve>> pd_forest, pd_linear, ice_forest;
    };
    std::vector<Slot> slots(cfg.replicates);
    std::vector<double> times(cfg.replicates, 0.0);

    parallel_for(cfg.replicates, cfg.jobs, [&](std::size_t r) {
        auto t0 = Clock::now();
        for (double rho : cfg.rho_list) {
            std::string lbl = rho_label(rho);
            CopulaSpec cspec = benchmark_copula(rho, p);
            Dataset d = synth_data(cspec, resp, cfg.n, cfg.seed, r, "data");
            Dataset qd{queries, std::vector<double>(n_query, 0.0), d.names};

            ForestModel forest = fit_forest(
                d, forest_config(cfg, derive_seed(cfg.seed, r, "forest:rho=" + lbl)));
            LinearModel linear = fit_linear(d);
            CopulaSupport support(cspec);

            slots[r].pd_forest.emplace_back(lbl, partial_dependence(forest, d, 0, grid));
            slots[r].pd_linear.emplace_back(lbl, partial_dependence(linear, d, 0, grid));
            slots[r].ice_forest.emplace_back(
                lbl, ice_curves(forest, qd, query_rows, 0, grid, &support));
        }
        times[r] = seconds_since(t0);
    });
    em.set_replicate_seconds(times);

    auto find_curve = [](const std::vector<std::pair<std::string, EffectCurve>>& v,
                         const std::string& lbl) -> const EffectCurve& {
        for (const auto& [l, c] : v)
            if (l == lbl) return c;
        throw std::logic_error("fig3: missing rho label");
    };

    for (std::size_t r = 0; r < slots.size(); ++r) {
        std::string tag = index_tag("rep", r, cfg.replicates);
        for (double rho : cfg.rho_list) {
            std::string lbl = rho_label(rho);
            em.add("pd_rho" + lbl + "_forest_" + tag + ".csv", "replicate-curve",
                   curve_to_csv(find_curve(slots[r].pd_forest, lbl)));
            em.add("pd_rho" + lbl + "_linear_" + tag + ".csv", "replicate-curve",
                   curve_to_csv(find_curve(slots[r].pd_linear, lbl)));
            em.add("ice_rho" + lbl + "_forest_" + tag + ".csv", "replicate-curve",
                   curve_to_csv(find_curve(slots[r].ice_forest, lbl)));
        }
    }

    // Pointwise mean and sd of the forest PD across replicates, same schema as
    // the per-replicate curves.
    for (double rho : cfg.rho_list) {
        std::string lbl = rho_label(rho);
        EffectCurve mean_curve = find_curve(slots[0].pd_forest, lbl);
        EffectCurve sd_curve = mean_curve;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            std::vector<double> vals;
            vals.reserve(cfg.replicates);
            for (const Slot& s : slots) vals.push_back(find_curve(s.pd_forest, lbl).values[0][g]);
            mean_curve.values[0][g] = mean(vals);
            sd_curve.values[0][g] = vals.size() > 1 ? stddev(vals, 1) : 0.0;
        }
        em.add("pd_rho" + lbl + "_forest_mean.csv", "aggregate", curve_to_csv(mean_curve));
        em.add("pd_rho" + lbl + "_forest_sd.csv", "aggregate", curve_to_csv(sd_curve));

        SvgStyle pd_style;
        pd_style.title = "partial dependence on x1, rho=" + lbl + " (first replicate)";
        em.add("pd_rho" + lbl + ".svg", "figure",
               svg_curves(find_curve(slots[0].pd_forest, lbl), pd_style));
        SvgStyle ice_style;
        ice_style.title = "ICE on x1, rho=" + lbl + " (first replicate)";
        em.add("ice_rho" + lbl + ".svg", "figure",
               svg_curves(find_curve(slots[0].ice_forest, lbl), ice_style));
    }
}

// --- fig4: extrapolation surface of an ensemble of forests ------------------

struct TwoFeatureEnsemble {
    std::vector<std::unique_ptr<Predictor>> models;
    Dataset first_data;
};

ResponseSpec two_feature_response() {
    ResponseSpec resp;
    resp.beta = {1.0, 0.0};
    resp.sigma = 0.05;
    return resp;
}

TwoFeatureEnsemble fit_two_feature_forests(const ExperimentConfig& cfg,
                                           std::vector<double>& times) {
    const ResponseSpec resp = two_feature_response();
    const CopulaSpec cspec = benchmark_copula(cfg.rho_list.front(), 2);
    TwoFeatureEnsemble out;
    out.models.resize(cfg.replicates);
    parallel_for(cfg.replicates, cfg.jobs, [&](std::size_t r) {
        auto t0 = Clock::now();
        Dataset d = synth_data(cspec, resp, cfg.n, cfg.seed, r, "data");
        out.models[r] = std::make_unique<ForestModel>(
            fit_forest(d, forest_config(cfg, derive_seed(cfg.seed, r, "forest"))));
        if (r == 0) out.first_data = d;
        times[r] = seconds_since(t0);
    });
    return out;
}

GridField ensemble_field(const TwoFeatureEnsemble& ens) {
    std::vector<const Predictor*> views;
    views.reserve(ens.models.size());
    for (const auto& m : ens.models) views.push_back(m.get());
    GridField field = prediction_grid(views, {{{0.0, 1.0}, {0.0, 1.0}}}, {101, 101});
    for (std::size_t i = 0; i < ens.first_data.n_rows(); ++i)
        field.training_points.push_back({ens.first_data.x(i, 0), ens.first_data.x(i, 1)});
    return field;
}

void emit_field_outputs(Emitter& em, const GridField& field, const std::string& what) {
    em.add("field.csv", "aggregate", field_to_csv(field));
    SvgStyle mean_style;
    mean_style.title = "mean " + what + " prediction surface";
    em.add("field_mean.svg", "figure", svg_field(field, false, mean_style));
    SvgStyle sd_style;
    sd_style.title = "pointwise sd of the " + what + " prediction surface";
    em.add("field_sd.svg", "figure", svg_field(field, true, sd_style));
}

void run_fig4(const ExperimentConfig& cfg, Emitter& em) {
    std::vector<double> times(cfg.replicates, 0.0);
    TwoFeatureEnsemble ens = fit_two_feature_forests(cfg, times);
    em.set_replicate_seconds(times);
    emit_field_outputs(em, ensemble_field(ens), "forest");

    const Dataset& d = ens.first_data;
    const auto& forest = static_cast<const ForestModel&>(*ens.models.front());

    // Rows sharing a leaf with the off-manifold query, tallied with bootstrap
    // multiplicity over trees.
    const std::array<double, 2> query{0.9, 0.1};
    std::vector<std::size_t> tally(d.n_rows(), 0);
    for (const auto& tree_rows : leaf_comembers(forest, std::span(query.data(), 2)))
        for (std::size_t row : tree_rows) ++tally[row];
    std::string co = "row,x1,x2,weight\n";
    for (std::size_t i = 0; i < d.n_rows(); ++i)
        if (tally[i] > 0)
            co += std::to_string(i) + "," + format_double(d.x(i, 0)) + "," +
                  format_double(d.x(i, 1)) + "," + std::to_string(tally[i]) + "\n";
    em.add("comembers.csv", "diagnostic", co);
    em.extra()["comember_query"] = {query[0], query[1]};

    // The permuted cloud a marginal-permutation query set lives on.
    SeededStream srng = derive_stream(cfg.seed, 0, "scatter");
    std::vector<std::size_t> order = srng.permutation(d.n_rows());
    std::string sc = "kind,x1,x2\n";
    for (std::size_t i = 0; i < d.n_rows(); ++i)
        sc += "data," + format_double(d.x(i, 0)) + "," + format_double(d.x(i, 1)) + "\n";
    for (std::size_t i = 0; i < d.n_rows(); ++i)
        sc += "permuted," + format_double(d.x(order[i], 0)) + "," +
              format_double(d.x(i, 1)) + "\n";
    em.add("permutation_scatter.csv", "diagnostic", sc);
}

// --- fig5: conditional, drop, and relearn importances -----------------------

void run_fig5(const ExperimentConfig& cfg, Emitter& em) {
    const ResponseSpec resp = ResponseSpec::benchmark_linear();
    const std::array<Measure, 4> measures{Measure::COND, Measure::DROP, Measure::PERM_RELEARN,
                                          Measure::COND_RELEARN};
    std::vector<std::vector<LabeledReport>> slots(cfg.replicates);
    std::vector<double> times(cfg.replicates, 0.0);

    parallel_for(cfg.replicates, cfg.jobs, [&](std::size_t r) {
        auto t0 = Clock::now();
        for (double rho : cfg.rho_list) {
            std::string lbl = rho_label(rho);
            CopulaSpec cspec = benchmark_copula(rho, resp.beta.size());
            Dataset d = synth_data(cspec, resp, cfg.n, cfg.seed, r, "data");
            CopulaConditional sampler(cspec);

            ForestLearner forest_lr(
                forest_config(cfg, derive_seed(cfg.seed, r, "forest:rho=" + lbl)));
            MlpLearner mlp_lr(mlp_config(cfg, derive_seed(cfg.seed, r, "mlp:rho=" + lbl)));
            LinearLearner linear_lr;
            const std::array<std::pair<std::string, const Learner*>, 3> learners{
                {{"forest", &forest_lr}, {"mlp", &mlp_lr}, {"linear", &linear_lr}}};

            for (const auto& [lname, lr] : learners) {
                std::unique_ptr<Predictor> model = lr->fit(d);
                for (Measure m : measures) {
                    ReportInputs in;
                    in.sampler = &sampler;
                    if (m == Measure::COND)
                        in.model = model.get();
                    else
                        in.learner = lr;
                    ImportanceReport rep = compute_report(
                        m, in, d, cfg.measure_reps,
                        derive_seed(cfg.seed, r,
                                    std::string(measure_name(m)) + ":" + lname + ":rho=" + lbl));
                    slots[r].push_back({lbl, lname, std::move(rep)});
                }
            }
        }
        times[r] = seconds_since(t0);
    });

    em.set_replicate_seconds(times);
    emit_rank_outputs(em, cfg, slots, default_names(resp.beta.size()));
}

// --- fig6: variability of a neural-network ensemble -------------------------

void run_fig6(const ExperimentConfig& cfg, Emitter& em) {
    const ResponseSpec resp = two_feature_response();
    const CopulaSpec cspec = benchmark_copula(cfg.rho_list.front(), 2);
    TwoFeatureEnsemble ens;
    ens.models.resize(cfg.replicates);
    std::vector<double> times(cfg.replicates, 0.0);
    parallel_for(cfg.replicates, cfg.jobs, [&](std::size_t r) {
        auto t0 = Clock::now();
        Dataset d = synth_data(cspec, resp, cfg.n, cfg.seed, r, "data");
        ens.models[r] = std::make_unique<MLPModel>(
            fit_mlp(d, mlp_config(cfg, derive_seed(cfg.seed, r, "mlp"))));
        if (r == 0) ens.first_data = d;
        times[r] = seconds_since(t0);
    });
    em.set_replicate_seconds(times);
    emit_field_outputs(em, ensemble_field(ens), "network");
}

// --- fig7: rank disagreement on the rental data ------------------------------

std::string resolve_bikeshare_path(const ExperimentConfig& cfg) {
    if (!cfg.bikeshare_path.empty()) return cfg.bikeshare_path;
    if (const char* env = std::getenv("PERMDIAG_BIKESHARE_CSV"); env && *env) return env;
    return "data/hour.csv";
}

void run_fig7(const ExperimentConfig& cfg, Emitter& em) {
    BikeShareConfig bcfg;
    bcfg.path = resolve_bikeshare_path(cfg);
    if (cfg.bikeshare_subsample != kAllRows) bcfg.subsample = cfg.bikeshare_subsample;
    bcfg.seed = cfg.seed;
    auto t0 = Clock::now();
    BikeShareLoad load = load_bikeshare(bcfg);

    PairedRanks ranks = rank_comparison(load.data, forest_config(cfg, 0), cfg.measure_reps,
                                        cfg.seed, cfg.jobs);
    em.set_replicate_seconds({seconds_since(t0)});
    em.add("paired_ranks.csv", "aggregate", paired_ranks_to_csv(ranks));

    auto as_table = [&](const std::vector<int>& r) {
        RankTable rt;
        rt.ranks.push_back(r);
        rt.mean_rank.assign(r.begin(), r.end());
        return rt;
    };
    SvgStyle style;
    style.title = "feature ranks on the rental data: out-of-bag vs permute-relearn";
    em.add("ranks.svg", "figure",
           svg_rank_scatter({{"oob", as_table(ranks.oob_rank)},
                             {"permute_relearn", as_table(ranks.relearn_rank)}},
                            ranks.feature, style));

    em.extra()["source_path"] = bcfg.path;
    em.extra()["rows_used"] = load.data.n_rows();
    em.extra()["rejected_source_rows"] = load.rejected;
}

// --- oracle equivalence checks ----------------------------------------------

struct CheckRow {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
};

bool close_rel(double a, double b, double tol) {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * scale;
}

void run_theorem_check(const ExperimentConfig& cfg, Emitter& em, bool& all_passed) {
    std::vector<CheckRow> checks;
    auto record = [&](std::string name, double observed, double target, double tol,
                      bool relative) {
        bool ok = relative ? close_rel(observed, target, tol)
                           : std::abs(observed - target) <= tol;
        checks.push_back({std::move(name), ok, observed, target, tol});
    };

    // Enumerated permutation importance equals the closed form exactly.
    {
        CopulaSpec cspec = benchmark_copula(0.5, 3);
        ResponseSpec resp;
        resp.beta0 = 0.25;
        resp.beta = {1.0, -0.7, 0.4};
        resp.sigma = 0.3;
        SeededStream rng = derive_stream(cfg.seed, 0, "enumerable");
        Dataset d = make_dataset(cspec, resp, 6, rng);
        LinearModel m = fit_linear(d);
        LinearOracle o = LinearOracle::from_model(m, d);
        std::vector<double> targets = theorem1_vi(o);
        for (std::size_t j = 0; j < 3; ++j)
            record("perm_vi_enumerated_x" + std::to_string(j + 1), brute_force_vi(m, d, j),
                   targets[j], 1e-9, true);
    }

    // PD and ICE of a linear fit are the predicted lines.
    {
        CopulaSpec cspec = benchmark_copula(0.5);
        SeededStream rng = derive_stream(cfg.seed, 0, "lines");
        Dataset d = make_dataset(cspec, ResponseSpec::benchmark_linear(), 200, rng);
        LinearModel m = fit_linear(d);
        LinearOracle o = LinearOracle::from_model(m, d);
        std::vector<double> grid = default_grid(21);

        EffectCurve pd = partial_dependence(m, d, 0, grid);
        Line pd_line = theorem1_pd_line(o, 0);
        double dev = 0.0;
        for (std::size_t g = 0; g < grid.size(); ++g)
            dev = std::max(dev,
                           std::abs(pd.values[0][g] - (pd_line.intercept + pd_line.slope * grid[g])));
        record("pd_line_max_abs_dev", dev, 0.0, 1e-8, false);

        std::vector<std::size_t> rows{0, 57, 123};
        EffectCurve ice = ice_curves(m, d, rows, 0, grid);
        dev = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::vector<double> row = d.x.row(rows[i]);
            Line line = theorem1_ice_line(o, row, 0);
            for (std::size_t g = 0; g < grid.size(); ++g)
                dev = std::max(dev,
                               std::abs(ice.values[i][g] - (line.intercept + line.slope * grid[g])));
        }
        record("ice_line_max_abs_dev", dev, 0.0, 1e-8, false);
    }

    // Retraining measures against their targets on the benchmark design.
    {
        CopulaSpec cspec = benchmark_copula(0.9);
        SeededStream rng = derive_stream(cfg.seed, 0, "targets");
        Dataset d = make_dataset(cspec, ResponseSpec::benchmark_linear(), 2000, rng);
        LinearModel m = fit_linear(d);
        LinearLearner learner;
        SeededStream mc = derive_stream(cfg.seed, 0, "targets-mc");
        DependenceOracle dep = dependence_oracle(d, cspec, 4000, mc);
        Theorem2Targets targets = theorem2_targets(dep, m.beta());

        double drop_x1 = vi_drop(learner, d, 0);
        record("drop_identity_x1", drop_x1, targets.drop[0], 1e-8, true);
        double drop_x8 = vi_drop(learner, d, 7);
        record("drop_identity_x8", drop_x8, targets.drop[7], 1e-8, true);

        // A refit on a permuted column loses the feature entirely, so its
        // expected loss increase is the drop value, the limit of the refit.
        SeededStream rl = derive_stream(cfg.seed, 0, "relearn");
        double relearn_x1 = vi_permute_relearn(learner, d, 0, 60, rl);
        record("relearn_refit_limit_x1", relearn_x1, targets.drop[0], 0.10, true);
        record("relearn_vs_drop_ratio_x1", relearn_x1 / drop_x1, 1.0, 0.12, true);

        CopulaConditional sampler(cspec);
        SeededStream cd = derive_stream(cfg.seed, 0, "conditional");
        record("conditional_expectation_x1", vi_conditional(m, d, 0, sampler, 100, cd),
               targets.conditional[0], 0.10, true);

        LinearOracle o = LinearOracle::from_model(m, d);
        std::vector<double> vi = theorem1_vi(o);
        std::vector<OracleRow> rows;
        std::vector<std::string> names = default_names(10);
        for (std::size_t j = 0; j < 10; ++j) {
            rows.push_back({names[j], 1, "expected_perm_vi", vi[j]});
            Line line = theorem1_pd_line(o, j);
            rows.push_back({names[j], 1, "pd_intercept", line.intercept});
            rows.push_back({names[j], 1, "pd_slope", line.slope});
            rows.push_back({names[j], 2, "drop_target", targets.drop[j]});
            rows.push_back({names[j], 2, "relearn_target", targets.relearn[j]});
            rows.push_back({names[j], 2, "conditional_target", targets.conditional[j]});
        }
        em.add("oracle_values.csv", "oracle", oracle_to_csv(rows));
    }

    // Rank correlation induced by the latent coupling matches its closed form.
    {
        CopulaSpec cspec = benchmark_copula(0.9, 2);
        SeededStream rng = derive_stream(cfg.seed, 0, "spearman");
        FeatureMatrix x = sample_features(cspec, 20000, rng);
        std::vector<double> a(x.col(0).begin(), x.col(0).end());
        std::vector<double> b(x.col(1).begin(), x.col(1).end());
        record("spearman_closed_form", spearman(a, b), copula_spearman(0.9), 0.02, false);
    }

    std::string csv = "check,passed,observed,target,tolerance\n";
    all_passed = true;
    for (const CheckRow& c : checks) {
        all_passed = all_passed && c.passed;
        csv += c.name + "," + (c.passed ? "1" : "0") + "," + format_double(c.observed) + "," +
               format_double(c.target) + "," + format_double(c.tolerance) + "\n";
    }
    em.add("checks.csv", "aggregate", csv);
    em.set_replicate_seconds({});
}

}  // namespace

const char* toolkit_version() { return kVersion; }

std::uint64_t content_hash(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{
        "fig1_ranks",   "fig2_grid",         "fig3_effects",  "fig4_contour",
        "fig5_alternatives", "fig6_nn_variance", "fig7_bikeshare", "theorem_check"};
    return names;
}

bool is_preset(std::string_view name) {
    const auto& names = preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

ExperimentConfig parse_config_text(std::string_view text) {
    ExperimentConfig cfg;
    std::string section;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view raw = text.substr(start, nl - start);
        start = nl + 1;
        ++line_no;

        if (std::size_t h = raw.find_first_of("#;"); h != std::string_view::npos)
            raw = raw.substr(0, h);
        std::string_view line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            static const std::array<std::string_view, 6> known{"run",    "synth",    "forest",
                                                               "mlp",    "measures", "bikeshare"};
            if (std::find(known.begin(), known.end(), section) == known.end())
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key(trim(line.substr(0, eq)));
        std::string_view value = trim(line.substr(eq + 1));
        std::string what = "[" + section + "] " + key;

        if (section == "run") {
            if (key == "preset") cfg.preset = std::string(value);
            else if (key == "seed") cfg.seed = parse_u64(value, what);
            else if (key == "replicates") cfg.replicates = parse_u64(value, what);
            else if (key == "out") cfg.out_dir = std::string(value);
            else if (key == "full") cfg.full_scale = parse_bool(value, what);
            else if (key == "jobs") cfg.jobs = parse_u64(value, what);
            else throw ConfigError("unknown key '" + key + "' in section [run]");
        } else if (section == "synth") {
            if (key == "n") cfg.n = parse_u64(value, what);
            else if (key == "n_list") {
                cfg.n_list.clear();
                for (std::string_view item : split_list(value))
                    cfg.n_list.push_back(parse_u64(item, what));
            } else if (key == "rho") {
                cfg.rho_list.clear();
                for (std::string_view item : split_list(value))
                    cfg.rho_list.push_back(parse_f64(item, what));
            } else throw ConfigError("unknown key '" + key + "' in section [synth]");
        } else if (section == "forest") {
            if (key == "trees") cfg.forest_trees = parse_u64(value, what);
            else throw ConfigError("unknown key '" + key + "' in section [forest]");
        } else if (section == "mlp") {
            if (key == "max_iter") cfg.mlp_max_iter = parse_u64(value, what);
            else throw ConfigError("unknown key '" + key + "' in section [mlp]");
        } else if (section == "measures") {
            if (key == "reps") cfg.measure_reps = parse_u64(value, what);
            else throw ConfigError("unknown key '" + key + "' in section [measures]");
        } else if (section == "bikeshare") {
            if (key == "path") cfg.bikeshare_path = std::string(value);
            else if (key == "subsample") cfg.bikeshare_subsample = parse_u64(value, what);
            else throw ConfigError("unknown key '" + key + "' in section [bikeshare]");
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        }
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const DataError& e) {
        throw ConfigError(std::string("cannot read config file: ") + e.what());
    }
    return parse_config_text(text);
}

void apply_preset_defaults(ExperimentConfig& cfg) {
    if (!is_preset(cfg.preset))
        throw ConfigError("unknown preset '" + cfg.preset + "'");
    if (cfg.jobs == 0) throw ConfigError("jobs must be at least 1");
    const bool full = cfg.full_scale;
    auto defaulted = [](std::size_t& field, std::size_t value) {
        if (field == 0) field = value;
    };
    auto default_rho = [&](std::initializer_list<double> values) {
        if (cfg.rho_list.empty()) cfg.rho_list = values;
    };

    if (cfg.preset == "fig1_ranks") {
        defaulted(cfg.n, 2000);
        defaulted(cfg.replicates, full ? 50 : 10);
        defaulted(cfg.measure_reps, 10);
        default_rho({0.0, 0.9});
    } else if (cfg.preset == "fig2_grid") {
        if (cfg.n_list.empty())
            cfg.n_list = full ? std::vector<std::size_t>{100, 200, 500, 1000, 2000, 5000}
                              : std::vector<std::size_t>{100, 500, 2000};
        defaulted(cfg.replicates, full ? 20 : 5);
        defaulted(cfg.measure_reps, 10);
        default_rho({0.0, 0.1, 0.25, 0.35, 0.5, 0.75, 0.9});
    } else if (cfg.preset == "fig3_effects") {
        defaulted(cfg.n, 2000);
        defaulted(cfg.replicates, full ? 50 : 10);
        defaulted(cfg.measure_reps, 10);
        default_rho({0.0, 0.9});
    } else if (cfg.preset == "fig4_contour") {
        defaulted(cfg.n, 200);
        defaulted(cfg.replicates, full ? 100 : 30);
        defaulted(cfg.measure_reps, 10);
        default_rho({0.9});
    } else if (cfg.preset == "fig5_alternatives") {
        defaulted(cfg.n, 200);
        defaulted(cfg.replicates, full ? 50 : 10);
        defaulted(cfg.measure_reps, full ? 10 : 5);
        default_rho({0.0, 0.9});
        defaulted(cfg.forest_trees, full ? 500 : 100);
        defaulted(cfg.mlp_max_iter, full ? 500 : 200);
    } else if (cfg.preset == "fig6_nn_variance") {
        defaulted(cfg.n, 200);
        defaulted(cfg.replicates, full ? 100 : 30);
        defaulted(cfg.measure_reps, 10);
        default_rho({0.9});
    } else if (cfg.preset == "fig7_bikeshare") {
        defaulted(cfg.replicates, 1);
        defaulted(cfg.measure_reps, full ? 10 : 3);
        defaulted(cfg.bikeshare_subsample, full ? kAllRows : 4000);
        defaulted(cfg.forest_trees, full ? 500 : 100);
        default_rho({0.0});
        defaulted(cfg.n, 1);
    } else if (cfg.preset == "theorem_check") {
        defaulted(cfg.replicates, 1);
        defaulted(cfg.measure_reps, 1);
        default_rho({0.0});
        defaulted(cfg.n, 1);
    }
    defaulted(cfg.forest_trees, 500);
    defaulted(cfg.mlp_max_iter, 500);

    if (cfg.replicates == 0) throw ConfigError("replicates must be at least 1");
    if (cfg.measure_reps == 0) throw ConfigError("measure reps must be at least 1");
    for (double rho : cfg.rho_list)
        if (!(rho >= -1.0 && rho <= 1.0))
            throw ConfigError("rho must lie in [-1, 1], got " + format_double(rho));
    std::sort(cfg.rho_list.begin(), cfg.rho_list.end());
    cfg.rho_list.erase(std::unique(cfg.rho_list.begin(), cfg.rho_list.end()),
                       cfg.rho_list.end());
    std::sort(cfg.n_list.begin(), cfg.n_list.end());
    cfg.n_list.erase(std::unique(cfg.n_list.begin(), cfg.n_list.end()), cfg.n_list.end());
}

RunSummary run_experiment(const ExperimentConfig& input) {
    ExperimentConfig cfg = input;
    apply_preset_defaults(cfg);

    std::filesystem::path dir = std::filesystem::path(cfg.out_dir) / cfg.preset;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());

    Emitter em(dir);
    auto t0 = Clock::now();
    bool checks_passed = true;
    if (cfg.preset == "fig1_ranks") run_fig1(cfg, em);
    else if (cfg.preset == "fig2_grid") run_fig2(cfg, em);
    else if (cfg.preset == "fig3_effects") run_fig3(cfg, em);
    else if (cfg.preset == "fig4_contour") run_fig4(cfg, em);
    else if (cfg.preset == "fig5_alternatives") run_fig5(cfg, em);
    else if (cfg.preset == "fig6_nn_variance") run_fig6(cfg, em);
    else if (cfg.preset == "fig7_bikeshare") run_fig7(cfg, em);
    else run_theorem_check(cfg, em, checks_passed);

    return em.finalize(cfg, seconds_since(t0), checks_passed);
}

}  // namespace permdiag
