#include "permdiag/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace permdiag {

namespace {

std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

const char* palette(std::size_t k) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return colors[k % (sizeof(colors) / sizeof(colors[0]))];
}

std::string header(const SvgStyle& s) {
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      num(s.width) + "\" height=\"" + num(s.height) +
                      "\" viewBox=\"0 0 " + num(s.width) + " " + num(s.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!s.title.empty())
        out += "<text x=\"" + num(s.width / 2) +
               "\" y=\"16\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"13\">" +
               s.title + "</text>\n";
    return out;
}

struct Frame {
    double x0, y0, x1, y1;  // pixel corners, y0 = top

    double px(double t) const { return x0 + t * (x1 - x0); }
    double py(double t) const { return y1 - t * (y1 - y0); }  // t=0 at bottom
};

std::string axes(const Frame& f) {
    return "<rect x=\"" + num(f.x0) + "\" y=\"" + num(f.y0) + "\" width=\"" +
           num(f.x1 - f.x0) + "\" height=\"" + num(f.y1 - f.y0) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
}

}  // namespace

std::string svg_rank_scatter(
    const std::vector<std::pair<std::string, RankTable>>& series,
    const std::vector<std::string>& feature_names, const SvgStyle& style) {
    if (series.empty()) throw std::invalid_argument("svg_rank_scatter: no series");
    const std::size_t p = feature_names.size();
    for (const auto& [label, table] : series)
        if (table.mean_rank.size() != p)
            throw std::invalid_argument("svg_rank_scatter: series width mismatch");

    const Frame f{50, 30, style.width - 120, style.height - 40};
    std::string out = header(style);
    out += axes(f);

    for (std::size_t j = 0; j < p; ++j) {
        const double tx = (static_cast<double>(j) + 0.5) / static_cast<double>(p);
        out += "<text x=\"" + num(f.px(tx)) + "\" y=\"" + num(f.y1 + 14) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
               feature_names[j] + "</text>\n";
    }

    const double pmax = static_cast<double>(p);
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& table = series[s].second;
        for (std::size_t j = 0; j < p; ++j) {
            const double tx = (static_cast<double>(j) + 0.5) / static_cast<double>(p);
            const double ty = (table.mean_rank[j] - 0.5) / pmax;
            out += "<circle cx=\"" + num(f.px(tx)) + "\" cy=\"" + num(f.py(ty)) +
                   "\" r=\"4\" fill=\"" + palette(s) + "\"/>\n";
        }
        out += "<text x=\"" + num(f.x1 + 8) + "\" y=\"" +
               num(f.y0 + 14 * static_cast<double>(s + 1)) +
               "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + palette(s) +
               "\">" + series[s].first + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string svg_curves(const EffectCurve& curve, const SvgStyle& style) {
    if (curve.grid.empty() || curve.values.empty())
        throw std::invalid_argument("svg_curves: empty curve");

    double vmin = curve.values[0][0], vmax = vmin;
    for (const auto& row : curve.values)
        for (double v : row) {
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    if (vmax == vmin) {
        vmax += 0.5;
        vmin -= 0.5;
    }
    const double gmin = curve.grid.front(), gmax = curve.grid.back();

    const Frame f{50, 30, style.width - 20, style.height - 40};
    std::string out = header(style);
    out += axes(f);

    auto emit_run = [&](const std::vector<double>& vals, std::size_t lo, std::size_t hi,
                        bool supported, const char* color) {
        // A one-point run still needs a visible mark; widen it to a dot-like
        // two-point segment at the same coordinates.
        std::string pts;
        for (std::size_t g = lo; g <= hi; ++g) {
            const double tx = (curve.grid[g] - gmin) / (gmax - gmin);
            const double ty = (vals[g] - vmin) / (vmax - vmin);
            pts += num(f.px(tx)) + "," + num(f.py(ty)) + " ";
            if (lo == hi) pts += num(f.px(tx) + 0.1) + "," + num(f.py(ty)) + " ";
        }
        pts.pop_back();
        out += "<polyline fill=\"none\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"1.5\"";
        if (!supported) out += " stroke-dasharray=\"6 4\"";
        out += " points=\"" + pts + "\"/>\n";
    };

    for (std::size_t r = 0; r < curve.values.size(); ++r) {
        const char* color = curve.is_pd() ? "#000000" : palette(r);
        const auto& sup = curve.supported[r];
        std::size_t lo = 0;
        for (std::size_t g = 1; g <= curve.grid.size(); ++g) {
            if (g == curve.grid.size() || sup[g] != sup[lo]) {
                emit_run(curve.values[r], lo, g - 1, sup[lo], color);
                lo = g;
            }
        }
    }
    out += "</svg>\n";
    return out;
}

std::string svg_field(const GridField& field, bool use_sd, const SvgStyle& style) {
    const auto& vals = use_sd ? field.sd : field.mean;
    if (vals.empty()) throw std::invalid_argument("svg_field: empty field");

    double vmin = vals[0], vmax = vals[0];
    for (double v : vals) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    const double span = vmax > vmin ? vmax - vmin : 1.0;

    const Frame f{50, 30, style.width - 20, style.height - 40};
    std::string out = header(style);

    const std::size_t r0 = field.resolution[0], r1 = field.resolution[1];
    const double cw = (f.x1 - f.x0) / static_cast<double>(r0);
    const double ch = (f.y1 - f.y0) / static_cast<double>(r1);
    for (std::size_t i1 = 0; i1 < r0; ++i1)
        for (std::size_t i2 = 0; i2 < r1; ++i2) {
            const double t = (vals[i1 * r1 + i2] - vmin) / span;
            const int red = static_cast<int>(std::lround(255.0 * t));
            const int blue = 255 - red;
            char color[8];
            std::snprintf(color, sizeof(color), "#%02x40%02x", red, blue);
            out += "<rect x=\"" + num(f.x0 + cw * static_cast<double>(i1)) + "\" y=\"" +
                   num(f.y1 - ch * static_cast<double>(i2 + 1)) + "\" width=\"" +
                   num(cw + 0.5) + "\" height=\"" + num(ch + 0.5) + "\" fill=\"" +
                   color + "\"/>\n";
        }

    const auto [lo0, hi0] = field.bounds[0];
    const auto [lo1, hi1] = field.bounds[1];
    for (const auto& pt : field.training_points) {
        const double tx = (pt[0] - lo0) / (hi0 > lo0 ? hi0 - lo0 : 1.0);
        const double ty = (pt[1] - lo1) / (hi1 > lo1 ? hi1 - lo1 : 1.0);
        out += "<circle cx=\"" + num(f.px(tx)) + "\" cy=\"" + num(f.py(ty)) +
               "\" r=\"2\" fill=\"black\"/>\n";
    }
    out += axes(f);
    out += "</svg>\n";
    return out;
}

}  // namespace permdiag
