#include "colehopf/oracle.hpp"

#include "colehopf/errors.hpp"
#include "colehopf/rk45.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace colehopf::oracle {

namespace {

const Expr& coeff(const NonlinearSpec& spec, const char* name) {
    for (const auto& [n, e] : spec.coeffs)
        if (n == name) return e;
    throw ConfigError("family '" + spec.family + "' is missing coefficient '" + name +
                      "'");
}

double param(const NonlinearSpec& spec, const char* name) {
    const double* v = spec.params.find(name);
    if (!v)
        throw ConfigError("family '" + spec.family + "' is missing parameter '" +
                          std::string(name) + "'");
    return *v;
}

Bindings merged(const NonlinearSpec& spec, const Bindings& bound) {
    Bindings b = spec.params;
    for (const auto& [name, value] : bound.items()) b.set(name, value);
    return b;
}

// psi'' as a function of (x, psi, psi') for each supported family
std::function<double(double, double, double)> make_rhs(const NonlinearSpec& spec,
                                                       const Bindings& bound) {
    const Bindings bb = merged(spec, bound);
    if (spec.family == "vdp") {
        const double mu = param(spec, "mu"), beta = param(spec, "beta"),
                     alpha = param(spec, "alpha");
        const Expr v = coeff(spec, "v"), h = coeff(spec, "h"), g = coeff(spec, "g"),
                   f = coeff(spec, "f");
        return [=](double x, double s, double ds) {
            const double s2 = s * s;
            return mu * (beta - s2) * ds - alpha * s + eval(v, x, bb) * s2 +
                   eval(h, x, bb) * s2 * s + eval(g, x, bb) * s2 * s2 + eval(f, x, bb);
        };
    }
    if (spec.family == "lienard") {
        const Expr c0 = coeff(spec, "c0"), c1 = coeff(spec, "c1"), c2 = coeff(spec, "c2");
        const Expr b0 = coeff(spec, "b0"), b1 = coeff(spec, "b1"), b2 = coeff(spec, "b2"),
                   b3 = coeff(spec, "b3"), b4 = coeff(spec, "b4");
        return [=](double x, double s, double ds) {
            const double damp =
                eval(c2, x, bb) * s * s + eval(c1, x, bb) * s + eval(c0, x, bb);
            const double poly =
                (((eval(b4, x, bb) * s + eval(b3, x, bb)) * s + eval(b2, x, bb)) * s +
                 eval(b1, x, bb)) *
                    s +
                eval(b0, x, bb);
            return -damp * ds - poly;
        };
    }
    if (spec.family == "painleve3") {
        const double alpha = param(spec, "alpha"), beta = param(spec, "beta"),
                     gamma = param(spec, "gamma"), delta = param(spec, "delta");
        return [=](double x, double s, double ds) {
            return ds * ds / s - ds / x + (alpha * s * s + beta) / x +
                   gamma * s * s * s + delta / s;
        };
    }
    if (spec.family == "convective") {
        const Expr F = coeff(spec, "F"), W = coeff(spec, "W"), V = coeff(spec, "V"),
                   S = coeff(spec, "S");
        return [=](double x, double s, double ds) {
            return eval(S, x, bb) + (eval(V, x, bb) + eval(F, x, bb) * ds) * s +
                   eval(W, x, bb) * s * s;
        };
    }
    throw ConfigError("unknown equation family '" + spec.family + "'");
}

} // namespace

OdeOracleResult integrate_ode(const NonlinearSpec& spec, std::array<double, 2> ic,
                              double a, double b, std::size_t n, double tol) {
    if (!(tol >= 1e-12 && tol <= 1e-6))
        throw ConfigError("oracle tolerance must lie in [1e-12, 1e-6]");
    auto rhs2 = make_rhs(spec, {});
    OdeRhs rhs = [&rhs2](double x, const double* y, double* dy) {
        dy[0] = y[1];
        dy[1] = rhs2(x, y[0], y[1]);
    };

    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = 1e-2 * tol;
    opt.blowup = 1e8;

    OdeOracleResult out;
    out.g.x = uniform_grid(a, b, n);
    SampleResult res = integrate_samples(rhs, 2, a, b, ic, out.g.x, opt);
    out.blew_up = res.blew_up;
    out.stop = res.stop;
    out.g.rows.resize(3);
    out.g.rows[0] = std::move(res.rows[0]);
    out.g.rows[1] = std::move(res.rows[1]);
    auto& dd = out.g.rows[2];
    dd.assign(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n; ++i) {
        const double s = out.g.rows[0][i], ds = out.g.rows[1][i];
        if (std::isfinite(s) && std::isfinite(ds)) dd[i] = rhs2(out.g.x[i], s, ds);
    }
    return out;
}

FieldOracleResult integrate_pde_mol(const Expr& M, const Expr& H, const Expr& V,
                                    const Expr& W, const std::vector<double>& psi0,
                                    double a, double b, double t_end, std::size_t nx,
                                    const std::function<double(double)>& left,
                                    const std::function<double(double)>& right,
                                    std::size_t nt_out, double tol,
                                    const Bindings& bound) {
    if (nx < 100) throw ConfigError("method-of-lines grid needs nx >= 100");
    if (psi0.size() != nx) throw ConfigError("psi0 must be sampled on the nx-grid");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (nt_out < 2) throw ConfigError("need at least two output times");

    FieldOracleResult out;
    out.g.x = uniform_grid(a, b, nx);
    const double dx = (b - a) / static_cast<double>(nx - 1);
    const double dx2 = dx * dx;

    std::vector<double> m(nx), hh(nx), vv(nx), ww(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        m[i] = eval(M, out.g.x[i], bound);
        hh[i] = eval(H, out.g.x[i], bound);
        vv[i] = eval(V, out.g.x[i], bound);
        ww[i] = eval(W, out.g.x[i], bound);
    }

    const std::size_t dim = nx - 2;
    OdeRhs rhs = [&](double t, const double* y, double* dy) {
        const double lv = left(t), rv = right(t);
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            const double c = y[i - 1];
            const double lo = i == 1 ? lv : y[i - 2];
            const double hi = i + 2 == nx ? rv : y[i];
            const double d2 = (hi - 2.0 * c + lo) / dx2;
            const double d1 = (hi - lo) / (2.0 * dx);
            dy[i - 1] = m[i] * d2 + hh[i] * c * d1 + vv[i] * c + ww[i] * c * c;
        }
    };

    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = 1e-2 * tol;
    opt.blowup = 1e8;

    std::vector<double> ic(psi0.begin() + 1, psi0.end() - 1);
    out.g.t = uniform_grid(0.0, t_end, nt_out);
    SampleResult res = integrate_samples(rhs, dim, 0.0, t_end, ic, out.g.t, opt);
    out.blew_up = res.blew_up;
    out.stop = res.stop;

    out.g.rows.assign(nt_out, std::vector<double>(nx));
    for (std::size_t j = 0; j < nt_out; ++j) {
        const bool alive = std::isfinite(res.rows[0][j]);
        out.g.rows[j][0] =
            alive ? left(out.g.t[j]) : std::numeric_limits<double>::quiet_NaN();
        out.g.rows[j][nx - 1] =
            alive ? right(out.g.t[j]) : std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 1; i + 1 < nx; ++i)
            out.g.rows[j][i] = res.rows[i - 1][j];
    }
    // initial row is the caller's data verbatim
    out.g.rows[0].assign(psi0.begin(), psi0.end());
    return out;
}

namespace {

ResidualReport profile_report(const NonlinearSpec& spec, const GridFunction& cand,
                              double threshold, const PoleMask& mask,
                              const Bindings& bound) {
    if (cand.rows.size() < 3)
        throw ConfigError("candidate lacks psi'/psi'' rows for a residual check");
    auto rhs2 = make_rhs(spec, bound);
    const std::size_t n = cand.x.size();
    std::vector<double> resid(n);
    std::vector<bool> masked(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = cand.rows[0][i], ds = cand.rows[1][i], dds = cand.rows[2][i];
        resid[i] = dds - rhs2(cand.x[i], s, ds);
        masked[i] = mask.covers(cand.x[i]) || !std::isfinite(resid[i]);
    }
    return make_residual_report(spec.family, threshold, cand.x, std::move(resid),
                                std::move(masked));
}

ResidualReport field_report(const NonlinearSpec& spec, const GridFunction& cand,
                            double threshold, const PoleMask& mask,
                            const Bindings& bound) {
    if (spec.family != "burgers")
        throw ConfigError("field residuals are only defined for family 'burgers'");
    const std::size_t nx = cand.nx(), nt = cand.nt();
    if (nx < 5 || nt < 5)
        throw ConfigError("field residual needs at least a 5x5 grid");
    const double dx = cand.x[1] - cand.x[0];
    const double dt = cand.t[1] - cand.t[0];

    const Bindings bb = merged(spec, bound);
    const Expr M = coeff(spec, "M"), H = coeff(spec, "H"), V = coeff(spec, "V"),
               W = coeff(spec, "W");
    std::vector<double> m(nx), hh(nx), vv(nx), ww(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        m[i] = eval(M, cand.x[i], bb);
        hh[i] = eval(H, cand.x[i], bb);
        vv[i] = eval(V, cand.x[i], bb);
        ww[i] = eval(W, cand.x[i], bb);
    }

    // spatial derivatives per row, time derivative per column
    std::vector<std::vector<double>> sx(nt), sxx(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        sx[j] = derivative_row(cand.rows[j], dx);
        sxx[j] = derivative_row(sx[j], dx);
    }
    std::vector<std::vector<double>> st(nt, std::vector<double>(nx));
    std::vector<double> column(nt);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nt; ++j) column[j] = cand.rows[j][i];
        auto dcol = derivative_row(column, dt);
        for (std::size_t j = 0; j < nt; ++j) st[j][i] = dcol[j];
    }

    std::vector<double> worst(nx, 0.0);
    std::vector<bool> masked(nx, false);
    for (std::size_t i = 0; i < nx; ++i) {
        if (mask.covers(cand.x[i])) {
            masked[i] = true;
            continue;
        }
        bool any = false;
        for (std::size_t j = 0; j < nt; ++j) {
            const double s = cand.rows[j][i];
            const double r = st[j][i] - (m[i] * sxx[j][i] + hh[i] * s * sx[j][i] +
                                         vv[i] * s + ww[i] * s * s);
            if (!std::isfinite(r)) continue;
            any = true;
            worst[i] = std::max(worst[i], std::abs(r));
        }
        if (!any) masked[i] = true;
    }
    return make_residual_report(spec.family, threshold, cand.x, std::move(worst),
                                std::move(masked));
}

} // namespace

ResidualReport residual_report(const NonlinearSpec& spec, const GridFunction& candidate,
                               double threshold, const PoleMask& mask,
                               const Bindings& bound) {
    if (candidate.is_field()) return field_report(spec, candidate, threshold, mask, bound);
    return profile_report(spec, candidate, threshold, mask, bound);
}

PoleMask pole_detect(const GridFunction& g) {
    if (g.rows.empty()) throw ConfigError("pole detection needs a value row");
    const std::vector<double>& f = g.rows[0];
    const std::size_t n = g.x.size();
    if (f.size() != n || n < 2) throw ConfigError("pole detection needs a sampled row");

    PoleMask mask;
    mask.half_width = 2.0 * (g.x.back() - g.x.front()) / static_cast<double>(n - 1);
    double amax = 0.0;
    for (double v : f)
        if (std::isfinite(v)) amax = std::max(amax, std::abs(v));
    if (amax == 0.0) {
        mask.add_center(0.5 * (g.x.front() + g.x.back()));
        return mask;
    }
    const double cutoff = 1e-8 * amax;

    for (std::size_t i = 0; i < n; ++i)
        if (std::isfinite(f[i]) && std::abs(f[i]) < cutoff) mask.add_center(g.x[i]);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!std::isfinite(f[i]) || !std::isfinite(f[i + 1])) continue;
        if (std::abs(f[i]) < cutoff || std::abs(f[i + 1]) < cutoff) continue;
        if (f[i] * f[i + 1] >= 0.0) continue;
        // bisection on the linear interpolant between the two samples
        double lo = g.x[i], hi = g.x[i + 1];
        const double slope = (f[i + 1] - f[i]) / (hi - lo);
        auto interp = [&](double x) { return f[i] + slope * (x - g.x[i]); };
        double flo = f[i];
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            const double fm = interp(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((flo < 0.0) == (fm < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        mask.add_center(0.5 * (lo + hi));
    }
    return mask;
}

} // namespace colehopf::oracle
