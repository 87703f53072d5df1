#include "permdiag/model_io.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "permdiag/csvio.hpp"

namespace permdiag {

namespace {

constexpr std::string_view kMagic = "permdiag-model 1";

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    /// Next non-empty line split on single spaces.
    std::vector<std::string> next() {
        while (pos_ < text_.size()) {
            std::size_t end = text_.find('\n', pos_);
            if (end == std::string_view::npos) end = text_.size();
            std::string_view line = text_.substr(pos_, end - pos_);
            pos_ = end + 1;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (line.empty()) continue;
            std::vector<std::string> tokens;
            std::size_t start = 0;
            for (std::size_t i = 0; i <= line.size(); ++i) {
                if (i == line.size() || line[i] == ' ') {
                    if (i > start) tokens.emplace_back(line.substr(start, i - start));
                    start = i + 1;
                }
            }
            return tokens;
        }
        throw std::runtime_error("model text: unexpected end of input");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

double tok_double(const std::string& s) { return parse_double(s); }

std::uint64_t tok_u64(const std::string& s) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("model text: bad integer '" + s + "'");
    return v;
}

std::int64_t tok_i64(const std::string& s) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("model text: bad integer '" + s + "'");
    return v;
}

void expect(const std::vector<std::string>& tokens, std::string_view word) {
    if (tokens.empty() || tokens[0] != word)
        throw std::runtime_error("model text: expected '" + std::string(word) + "'");
}

void append_values(std::string& out, std::string_view key,
                   std::span<const double> values) {
    out += key;
    for (double v : values) {
        out += ' ';
        out += format_double(v);
    }
    out += '\n';
}

std::vector<double> read_values(const std::vector<std::string>& tokens,
                                std::string_view key, std::size_t count) {
    expect(tokens, key);
    if (tokens.size() != count + 1)
        throw std::runtime_error("model text: wrong value count for '" +
                                 std::string(key) + "'");
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = tok_double(tokens[i + 1]);
    return v;
}

}  // namespace

std::string model_to_text(const LinearModel& m) {
    std::string out(kMagic);
    out += "\nkind linear\np " + std::to_string(m.n_features()) + "\n";
    out += "beta0 " + format_double(m.beta0()) + "\n";
    append_values(out, "beta", m.beta());
    append_values(out, "col_means", m.column_means());
    out += "end\n";
    return out;
}

std::string model_to_text(const ForestModel& m) {
    std::string out(kMagic);
    out += "\nkind forest\np " + std::to_string(m.n_features()) + "\n";
    out += "n_train " + std::to_string(m.n_train_rows()) + "\n";
    const auto& c = m.config();
    out += "config " + std::to_string(c.n_trees) + " " + std::to_string(c.mtry) + " " +
           std::to_string(c.min_leaf) + " " + std::to_string(c.bootstrap ? 1 : 0) +
           " " + std::to_string(c.seed) + "\n";
    out += "trees " + std::to_string(m.trees().size()) + "\n";
    for (std::size_t t = 0; t < m.trees().size(); ++t) {
        const auto& nodes = m.trees()[t].nodes;
        out += "tree " + std::to_string(t) + " " + std::to_string(nodes.size()) + "\n";
        for (const auto& nd : nodes) {
            if (nd.feature >= 0) {
                out += "s " + std::to_string(nd.feature) + " " +
                       format_double(nd.threshold) + " " + std::to_string(nd.left) +
                       " " + std::to_string(nd.right) + "\n";
            } else {
                out += "l " + format_double(nd.value) + " " +
                       std::to_string(nd.rows.size());
                for (std::size_t k = 0; k < nd.rows.size(); ++k)
                    out += " " + std::to_string(nd.rows[k]) + " " +
                           std::to_string(nd.counts[k]);
                out += '\n';
            }
        }
    }
    out += "end\n";
    return out;
}

std::string model_to_text(const MLPModel& m) {
    std::string out(kMagic);
    out += "\nkind mlp\np " + std::to_string(m.n_features()) + "\n";
    const auto& c = m.config();
    out += "config " + std::to_string(c.hidden) + " " + std::to_string(c.max_iter) +
           " " + format_double(c.l2_decay) + " " + std::to_string(c.seed) + " " +
           format_double(c.init_scale) + " " + format_double(c.grad_tol) + "\n";
    append_values(out, "x_mean", m.x_mean());
    append_values(out, "x_sd", m.x_sd());
    out += "y_mean " + format_double(m.y_mean()) + "\n";
    append_values(out, "params", m.params());
    const auto& info = m.info();
    out += "info " + std::to_string(info.iterations) + " " +
           std::to_string(info.converged ? 1 : 0) + " " +
           format_double(info.grad_norm) + " " + format_double(info.final_loss) + "\n";
    out += "end\n";
    return out;
}

std::string model_kind(std::string_view text) {
    LineReader r(text);
    const auto magic = r.next();
    if (magic.size() != 2 || magic[0] != "permdiag-model" || magic[1] != "1")
        throw std::runtime_error("model text: bad magic line");
    const auto kind = r.next();
    expect(kind, "kind");
    if (kind.size() != 2) throw std::runtime_error("model text: bad kind line");
    return kind[1];
}

namespace {

std::unique_ptr<Predictor> load_linear(LineReader& r) {
    auto line = r.next();
    expect(line, "p");
    const auto p = static_cast<std::size_t>(tok_u64(line.at(1)));
    line = r.next();
    expect(line, "beta0");
    const double beta0 = tok_double(line.at(1));
    auto beta = read_values(r.next(), "beta", p);
    auto means = read_values(r.next(), "col_means", p);
    expect(r.next(), "end");
    return std::make_unique<LinearModel>(beta0, std::move(beta), std::move(means));
}

std::unique_ptr<Predictor> load_forest(LineReader& r) {
    auto line = r.next();
    expect(line, "p");
    const auto p = static_cast<std::size_t>(tok_u64(line.at(1)));
    line = r.next();
    expect(line, "n_train");
    const auto n_train = static_cast<std::size_t>(tok_u64(line.at(1)));
    line = r.next();
    expect(line, "config");
    if (line.size() != 6) throw std::runtime_error("model text: bad forest config");
    ForestConfig cfg;
    cfg.n_trees = static_cast<std::size_t>(tok_u64(line[1]));
    cfg.mtry = static_cast<std::size_t>(tok_u64(line[2]));
    cfg.min_leaf = static_cast<std::size_t>(tok_u64(line[3]));
    cfg.bootstrap = tok_u64(line[4]) != 0;
    cfg.seed = tok_u64(line[5]);

    line = r.next();
    expect(line, "trees");
    const auto n_trees = static_cast<std::size_t>(tok_u64(line.at(1)));
    std::vector<Tree> trees(n_trees);
    std::vector<std::vector<std::uint32_t>> inbag(n_trees);
    for (std::size_t t = 0; t < n_trees; ++t) {
        line = r.next();
        expect(line, "tree");
        if (line.size() != 3 || static_cast<std::size_t>(tok_u64(line[1])) != t)
            throw std::runtime_error("model text: bad tree header");
        const auto n_nodes = static_cast<std::size_t>(tok_u64(line[2]));
        auto& tree = trees[t];
        tree.nodes.resize(n_nodes);
        // In-bag multiplicities are implied by the leaves: each bootstrap draw
        // lands in exactly one leaf.
        inbag[t].assign(n_train, 0);
        for (std::size_t k = 0; k < n_nodes; ++k) {
            line = r.next();
            auto& nd = tree.nodes[k];
            if (line.at(0) == "s") {
                if (line.size() != 5)
                    throw std::runtime_error("model text: bad split node");
                nd.feature = static_cast<std::int32_t>(tok_i64(line[1]));
                nd.threshold = tok_double(line[2]);
                nd.left = static_cast<std::int32_t>(tok_i64(line[3]));
                nd.right = static_cast<std::int32_t>(tok_i64(line[4]));
            } else if (line.at(0) == "l") {
                const auto n_members = static_cast<std::size_t>(tok_u64(line.at(2)));
                if (line.size() != 3 + 2 * n_members)
                    throw std::runtime_error("model text: bad leaf node");
                nd.feature = -1;
                nd.value = tok_double(line[1]);
                nd.rows.resize(n_members);
                nd.counts.resize(n_members);
                for (std::size_t i = 0; i < n_members; ++i) {
                    nd.rows[i] = static_cast<std::uint32_t>(tok_u64(line[3 + 2 * i]));
                    nd.counts[i] =
                        static_cast<std::uint32_t>(tok_u64(line[4 + 2 * i]));
                    if (nd.rows[i] >= n_train)
                        throw std::runtime_error("model text: leaf row out of range");
                    inbag[t][nd.rows[i]] += nd.counts[i];
                }
            } else {
                throw std::runtime_error("model text: unknown node tag");
            }
        }
    }
    expect(r.next(), "end");
    return std::make_unique<ForestModel>(std::move(trees), std::move(inbag), cfg, p);
}

std::unique_ptr<Predictor> load_mlp(LineReader& r) {
    auto line = r.next();
    expect(line, "p");
    const auto p = static_cast<std::size_t>(tok_u64(line.at(1)));
    line = r.next();
    expect(line, "config");
    if (line.size() != 7) throw std::runtime_error("model text: bad mlp config");
    MlpConfig cfg;
    cfg.hidden = static_cast<std::size_t>(tok_u64(line[1]));
    cfg.max_iter = static_cast<std::size_t>(tok_u64(line[2]));
    cfg.l2_decay = tok_double(line[3]);
    cfg.seed = tok_u64(line[4]);
    cfg.init_scale = tok_double(line[5]);
    cfg.grad_tol = tok_double(line[6]);

    auto x_mean = read_values(r.next(), "x_mean", p);
    auto x_sd = read_values(r.next(), "x_sd", p);
    line = r.next();
    expect(line, "y_mean");
    const double y_mean = tok_double(line.at(1));
    auto params = read_values(r.next(), "params", mlp_param_count(cfg.hidden, p));
    line = r.next();
    expect(line, "info");
    if (line.size() != 5) throw std::runtime_error("model text: bad mlp info");
    MlpTrainInfo info;
    info.iterations = static_cast<std::size_t>(tok_u64(line[1]));
    info.converged = tok_u64(line[2]) != 0;
    info.grad_norm = tok_double(line[3]);
    info.final_loss = tok_double(line[4]);
    expect(r.next(), "end");
    return std::make_unique<MLPModel>(cfg, std::move(params), std::move(x_mean),
                                      std::move(x_sd), y_mean, info);
}

}  // namespace

std::unique_ptr<Predictor> model_from_text(std::string_view text) {
    const std::string kind = model_kind(text);
    LineReader r(text);
    r.next();  // magic
    r.next();  // kind
    if (kind == "linear") return load_linear(r);
    if (kind == "forest") return load_forest(r);
    if (kind == "mlp") return load_mlp(r);
    throw std::runtime_error("model text: unknown kind '" + kind + "'");
}

void save_model_file(const std::string& path, std::string_view text) {
    write_text_file(path, text);
}

std::unique_ptr<Predictor> load_model_file(const std::string& path) {
    return model_from_text(read_text_file(path));
}

}  // namespace permdiag
