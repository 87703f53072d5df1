#include "permdiag/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace permdiag {

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty input");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(std::span<const double> v, int ddof) {
    if (v.size() <= static_cast<std::size_t>(ddof))
        throw std::invalid_argument("variance: too few observations");
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size() - ddof);
}

double stddev(std::span<const double> v, int ddof) {
    return std::sqrt(variance(v, ddof));
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson: bad input sizes");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("pearson: zero-variance input");
    return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<double> fractional_ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        r[idx[k]] = static_cast<double>(k + 1);
    return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    const auto rx = fractional_ranks(x);
    const auto ry = fractional_ranks(y);
    return pearson(rx, ry);
}

double kolmogorov_q(double t) {
    if (t <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test_uniform(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("ks_test_uniform: empty sample");
    std::vector<double> u(sample.begin(), sample.end());
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < 0.0 || u[i] > 1.0)
            throw std::invalid_argument("ks_test_uniform: value outside [0,1]");
        const double hi = (static_cast<double>(i) + 1.0) / n - u[i];
        const double lo = u[i] - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    // Stephens' small-sample adjustment of the asymptotic distribution.
    const double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    return {d, kolmogorov_q(t)};
}

namespace {

// Quadrant fractions of one sample around sweep origins. Points with
// x <= sweep position sit in a Fenwick tree keyed by y rank, so each origin
// costs O(log n) after sorting.
class QuadrantCounter {
public:
    QuadrantCounter(std::span<const std::pair<double, double>> pts,
                    const std::vector<double>& y_grid)
        : pts_(pts.begin(), pts.end()), y_grid_(y_grid),
          tree_(y_grid.size() + 1, 0) {
        std::sort(pts_.begin(), pts_.end());
        sorted_y_.reserve(pts_.size());
        for (const auto& p : pts_) sorted_y_.push_back(p.second);
        std::sort(sorted_y_.begin(), sorted_y_.end());
    }

    void advance(double x0) {
        while (next_ < pts_.size() && pts_[next_].first <= x0) {
            add(y_rank(pts_[next_].second));
            ++next_;
        }
    }

    // Quadrant fractions (<=,<=), (<=,>), (>,<=), (>,>) at the current sweep x.
    void fractions(double y0, double out[4]) const {
        const double n = static_cast<double>(pts_.size());
        const double q1 = static_cast<double>(prefix(y_rank(y0)));
        const double in_x = static_cast<double>(next_);
        const double le_y = static_cast<double>(
            std::upper_bound(sorted_y_.begin(), sorted_y_.end(), y0) -
            sorted_y_.begin());
        out[0] = q1 / n;
        out[1] = (in_x - q1) / n;
        out[2] = (le_y - q1) / n;
        out[3] = (n - in_x - le_y + q1) / n;
    }

private:
    std::size_t y_rank(double y) const {
        return static_cast<std::size_t>(
            std::upper_bound(y_grid_.begin(), y_grid_.end(), y) - y_grid_.begin());
    }
    void add(std::size_t i) {
        for (; i < tree_.size(); i += i & (~i + 1)) tree_[i] += 1;
    }
    std::size_t prefix(std::size_t i) const {
        std::size_t s = 0;
        for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
        return s;
    }

    std::vector<std::pair<double, double>> pts_;
    std::vector<double> sorted_y_;
    const std::vector<double>& y_grid_;
    std::vector<std::size_t> tree_;
    std::size_t next_ = 0;
};

}  // namespace

KsResult ks2d_two_sample(std::span<const std::pair<double, double>> a,
                         std::span<const std::pair<double, double>> b) {
    if (a.size() < 20 || b.size() < 20)
        throw std::invalid_argument("ks2d_two_sample: samples too small");

    std::vector<double> y_grid;
    y_grid.reserve(a.size() + b.size());
    for (const auto& p : a) y_grid.push_back(p.second);
    for (const auto& p : b) y_grid.push_back(p.second);
    std::sort(y_grid.begin(), y_grid.end());
    y_grid.erase(std::unique(y_grid.begin(), y_grid.end()), y_grid.end());

    std::vector<std::pair<double, double>> origins;
    origins.reserve(a.size() + b.size());
    origins.insert(origins.end(), a.begin(), a.end());
    origins.insert(origins.end(), b.begin(), b.end());
    std::sort(origins.begin(), origins.end());

    QuadrantCounter ca(a, y_grid), cb(b, y_grid);
    double d = 0.0;
    for (const auto& o : origins) {
        ca.advance(o.first);
        cb.advance(o.first);
        double fa[4], fb[4];
        ca.fractions(o.second, fa);
        cb.fractions(o.second, fb);
        for (int q = 0; q < 4; ++q) d = std::max(d, std::fabs(fa[q] - fb[q]));
    }

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ne = na * nb / (na + nb);

    // Press et al. approximation: sharpen the 1-D Kolmogorov tail with the
    // average squared correlation of the two samples.
    auto corr2 = [](std::span<const std::pair<double, double>> s) {
        std::vector<double> xs, ys;
        xs.reserve(s.size());
        ys.reserve(s.size());
        for (const auto& p : s) {
            xs.push_back(p.first);
            ys.push_back(p.second);
        }
        const double r = pearson(xs, ys);
        return r * r;
    };
    const double r2 = 0.5 * (corr2(a) + corr2(b));
    const double t = std::sqrt(ne) * d /
                     (1.0 + std::sqrt(1.0 - r2) * (0.25 - 0.75 / std::sqrt(ne)));
    return {d, kolmogorov_q(t)};
}

}  // namespace permdiag
