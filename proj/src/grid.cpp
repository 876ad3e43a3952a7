#include "colehopf/grid.hpp"

#include "colehopf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace colehopf {

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
    if (!(b > a)) throw ConfigError("grid interval must satisfy a < b");
    if (n < 2) throw ConfigError("grid needs at least two points");
    std::vector<double> xs(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) xs[i] = a + h * static_cast<double>(i);
    xs.back() = b;
    return xs;
}

std::vector<double> derivative_row(const std::vector<double>& f, double dx) {
    const std::size_t n = f.size();
    if (n < 5) throw ConfigError("derivative stencil needs at least 5 samples");
    std::vector<double> g(n);
    const double s = 1.0 / (12.0 * dx);
    g[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    g[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for (std::size_t i = 2; i + 2 < n; ++i)
        g[i] = s * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    g[n - 2] = s * (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] -
                    f[n - 5]);
    g[n - 1] = s * (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
                    3.0 * f[n - 5]);
    return g;
}

void PoleMask::add_center(double c) {
    const double lo = c - half_width, hi = c + half_width;
    // insert keeping intervals sorted, then merge overlaps
    auto it = std::lower_bound(intervals.begin(), intervals.end(), std::make_pair(lo, hi));
    intervals.insert(it, {lo, hi});
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : intervals) {
        if (!merged.empty() && iv.first <= merged.back().second) {
            merged.back().second = std::max(merged.back().second, iv.second);
        } else {
            merged.push_back(iv);
        }
    }
    intervals = std::move(merged);
}

bool PoleMask::covers(double x) const {
    auto it = std::upper_bound(intervals.begin(), intervals.end(), x,
                               [](double v, const auto& iv) { return v < iv.first; });
    if (it == intervals.begin()) return false;
    --it;
    return x <= it->second;
}

double PoleMask::fraction(const std::vector<double>& xs) const {
    if (xs.empty()) return 0.0;
    std::size_t hit = 0;
    for (double x : xs)
        if (covers(x)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(xs.size());
}

ResidualReport make_residual_report(std::string equation, double threshold,
                                    std::vector<double> x, std::vector<double> residual,
                                    std::vector<bool> masked) {
    if (x.size() != residual.size()) throw ConfigError("residual/grid size mismatch");
    if (masked.empty()) masked.assign(x.size(), false);
    if (masked.size() != x.size()) throw ConfigError("mask/grid size mismatch");

    ResidualReport rr;
    rr.equation = std::move(equation);
    rr.threshold = threshold;
    rr.x = std::move(x);
    rr.residual = std::move(residual);
    rr.masked = std::move(masked);

    double sumsq = 0.0;
    for (std::size_t i = 0; i < rr.x.size(); ++i) {
        if (rr.masked[i]) continue;
        const double a = std::abs(rr.residual[i]);
        rr.linf = std::max(rr.linf, a);
        sumsq += a * a;
        ++rr.n_used;
    }
    rr.mask_fraction = rr.x.empty()
                           ? 0.0
                           : 1.0 - static_cast<double>(rr.n_used) /
                                       static_cast<double>(rr.x.size());
    if (rr.n_used == 0) {
        rr.linf = std::numeric_limits<double>::infinity();
        rr.l2 = rr.linf;
        rr.pass = false;
        return rr;
    }
    rr.l2 = std::sqrt(sumsq / static_cast<double>(rr.n_used));
    rr.pass = rr.linf <= threshold;
    return rr;
}

} // namespace colehopf
