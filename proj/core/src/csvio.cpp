#include "permdiag/csvio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "permdiag/errors.hpp"

namespace permdiag {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw DataError("not a number: '" + std::string(s) + "'");
    return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.emplace_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string dataset_to_csv(const Dataset& d) {
    std::string out;
    for (const auto& name : d.names) {
        out += name;
        out += ',';
    }
    out += "response\n";
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        for (std::size_t j = 0; j < d.n_cols(); ++j) {
            out += format_double(d.x(i, j));
            out += ',';
        }
        out += format_double(d.y[i]);
        out += '\n';
    }
    return out;
}

Dataset dataset_from_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string_view line = text.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (!line.empty()) lines.push_back(line);
            start = i + 1;
        }
    }
    if (lines.size() < 2) throw DataError("dataset CSV needs a header and rows");

    const auto header = split_csv_line(lines[0]);
    if (header.size() < 2 || header.back() != "response")
        throw DataError("dataset CSV header must end with 'response'");
    std::vector<std::string> names(header.begin(), header.end() - 1);

    const std::size_t p = names.size();
    const std::size_t n = lines.size() - 1;
    FeatureMatrix x(n, p);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto cells = split_csv_line(lines[i + 1]);
        if (cells.size() != p + 1)
            throw DataError("dataset CSV row " + std::to_string(i + 2) +
                            " has wrong cell count");
        for (std::size_t j = 0; j < p; ++j) x(i, j) = parse_double(cells[j]);
        y[i] = parse_double(cells[p]);
    }
    return Dataset(std::move(x), std::move(y), std::move(names));
}

Dataset load_dataset_csv(const std::string& path) {
    return dataset_from_csv(read_text_file(path));
}

void save_dataset_csv(const Dataset& d, const std::string& path) {
    write_text_file(path, dataset_to_csv(d));
}

std::string report_to_csv(const ImportanceReport& report,
                          const std::vector<std::string>& feature_names) {
    if (feature_names.size() != report.scores.size())
        throw std::invalid_argument("report_to_csv: name count mismatch");
    const auto ranks = rank_scores(report.scores);
    std::string out = "measure,feature,score,rank,n_reps,seed\n";
    for (std::size_t j = 0; j < report.scores.size(); ++j) {
        out += measure_name(report.measure);
        out += ',';
        out += feature_names[j];
        out += ',';
        out += format_double(report.scores[j]);
        out += ',';
        out += std::to_string(ranks[j]);
        out += ',';
        out += std::to_string(report.n_reps);
        out += ',';
        out += std::to_string(report.seed);
        out += '\n';
    }
    return out;
}

std::string curve_to_csv(const EffectCurve& curve) {
    std::string out = "row_id,grid_value,prediction,supported\n";
    for (std::size_t r = 0; r < curve.values.size(); ++r) {
        const std::string id =
            curve.is_pd() ? std::string{} : std::to_string(curve.row_ids[r]);
        for (std::size_t g = 0; g < curve.grid.size(); ++g) {
            out += id;
            out += ',';
            out += format_double(curve.grid[g]);
            out += ',';
            out += format_double(curve.values[r][g]);
            out += ',';
            out += curve.supported[r][g] ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

std::string field_to_csv(const GridField& field) {
    std::string out = "x1,x2,mean,sd\n";
    for (std::size_t i1 = 0; i1 < field.resolution[0]; ++i1)
        for (std::size_t i2 = 0; i2 < field.resolution[1]; ++i2) {
            const std::size_t k = i1 * field.resolution[1] + i2;
            out += format_double(field.axis_value(0, i1));
            out += ',';
            out += format_double(field.axis_value(1, i2));
            out += ',';
            out += format_double(field.mean[k]);
            out += ',';
            out += format_double(field.sd[k]);
            out += '\n';
        }
    return out;
}

std::string oracle_to_csv(const std::vector<OracleRow>& rows) {
    std::string out = "feature,theorem,target_name,value\n";
    for (const auto& r : rows) {
        out += r.feature;
        out += ',';
        out += std::to_string(r.theorem);
        out += ',';
        out += r.target_name;
        out += ',';
        out += format_double(r.value);
        out += '\n';
    }
    return out;
}

std::string paired_ranks_to_csv(const PairedRanks& table) {
    if (table.feature.size() != table.oob_rank.size() ||
        table.feature.size() != table.relearn_rank.size())
        throw std::invalid_argument("paired_ranks_to_csv: column length mismatch");
    std::string out = "feature,oob_rank,relearn_rank\n";
    for (std::size_t j = 0; j < table.feature.size(); ++j) {
        out += table.feature[j];
        out += ',';
        out += std::to_string(table.oob_rank[j]);
        out += ',';
        out += std::to_string(table.relearn_rank[j]);
        out += '\n';
    }
    return out;
}

}  // namespace permdiag
