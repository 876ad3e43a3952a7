#include "colehopf/burgers.hpp"

#include "colehopf/errors.hpp"
#include "colehopf/lincore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace colehopf::burgers {

namespace {

double need(const Bindings& params, const std::string& name) {
    if (auto v = params.find(name)) return *v;
    throw ConfigError("missing family parameter '" + name + "'");
}

double opt(const Bindings& params, const std::string& name, double fallback) {
    if (auto v = params.find(name)) return *v;
    return fallback;
}

// direct 4th order second derivative of a row (no stacking of first-derivative
// stencils, which doubles the truncation noise)
std::vector<double> second_derivative_row(const std::vector<double>& f, double dx) {
    const std::size_t n = f.size();
    if (n < 6) throw ConfigError("second derivative stencil needs at least 6 samples");
    std::vector<double> g(n);
    const double s = 1.0 / (dx * dx);
    g[0] = s * (15.0 / 4.0 * f[0] - 77.0 / 6.0 * f[1] + 107.0 / 6.0 * f[2] - 13.0 * f[3] +
                61.0 / 12.0 * f[4] - 5.0 / 6.0 * f[5]);
    g[1] = s * (5.0 / 6.0 * f[0] - 5.0 / 4.0 * f[1] - f[2] / 3.0 + 7.0 / 6.0 * f[3] -
                f[4] / 2.0 + f[5] / 12.0);
    for (std::size_t i = 2; i + 2 < n; ++i)
        g[i] = s * (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) /
               12.0;
    g[n - 2] = s * (5.0 / 6.0 * f[n - 1] - 5.0 / 4.0 * f[n - 2] - f[n - 3] / 3.0 +
                    7.0 / 6.0 * f[n - 4] - f[n - 5] / 2.0 + f[n - 6] / 12.0);
    g[n - 1] = s * (15.0 / 4.0 * f[n - 1] - 77.0 / 6.0 * f[n - 2] + 107.0 / 6.0 * f[n - 3] -
                    13.0 * f[n - 4] + 61.0 / 12.0 * f[n - 5] - 5.0 / 6.0 * f[n - 6]);
    return g;
}

} // namespace

NonlinearSpec BurgersFamily::nonlinear() const {
    NonlinearSpec spec;
    spec.family = "burgers";
    spec.coeffs = {{"M", M}, {"H", H}, {"V", V}, {"W", W}};
    return spec;
}

BurgersFamily burgers_derive(const Expr& M, const Expr& H, double a, double b) {
    auto xs = uniform_grid(a, b, 201);

    double hmax = 0.0;
    for (double x : xs) hmax = std::max(hmax, std::abs(eval(H, x)));
    bool have_sign = false, hneg = false;
    for (double x : xs) {
        const double h = eval(H, x);
        if (!std::isfinite(h) || std::abs(h) < 1e-12 * hmax)
            throw DomainError("H vanishes on the working domain");
        if (!have_sign) {
            hneg = h < 0.0;
            have_sign = true;
        } else if ((h < 0.0) != hneg) {
            throw DomainError("H changes sign on the working domain");
        }
    }
    for (double x : xs) {
        const double m = eval(M, x);
        if (!std::isfinite(m) || m <= 0.0)
            throw ValidationError("M must be strictly positive on the working domain");
    }

    BurgersFamily fam;
    fam.M = M;
    fam.H = H;
    fam.a = a;
    fam.b = b;
    fam.Q = 2.0 * M / H;
    fam.P = 2.0 * M * diff(H) / (H * H) - diff(M) / H;
    fam.W = -(H * diff(M)) / (2.0 * M) + diff(H);
    fam.V = -(M * diff(H, 2)) / H;

    // the leftover a0 condition; P is kept symbolic inside it
    Expr compat = ((H * diff(M)) / (2.0 * M) - diff(H)) * fam.P * fam.P +
                  ((M * diff(H, 2)) / H - H * diff(fam.P)) * fam.P -
                  M * diff(fam.P, 2);
    double worst = 0.0;
    for (double x : xs) worst = std::max(worst, std::abs(eval(compat, x)));
    fam.compat_norm = worst;
    return fam;
}

FamilyKind family_kind(const std::string& name) {
    if (name == "expH") return FamilyKind::expH;
    if (name == "rationalH") return FamilyKind::rationalH;
    if (name == "cosH") return FamilyKind::cosH;
    if (name == "quadraticM") return FamilyKind::quadraticM;
    throw ConfigError("unknown family '" + name +
                      "' (expected expH, rationalH, cosH or quadraticM)");
}

BurgersFamily burgers_families(FamilyKind kind, const Bindings& params, double x0,
                               double x1) {
    if (!(x0 < x1)) throw ConfigError("empty working domain");
    Expr x = variable();
    Expr M = constant(opt(params, "A", 1.0));
    Expr H;

    switch (kind) {
    case FamilyKind::expH: {
        const double C = need(params, "C");
        if (C == 0.0) throw ConfigError("expH needs C != 0");
        H = constant(C) * exp(constant(need(params, "alphaH")) * x);
        break;
    }
    case FamilyKind::rationalH: {
        const double pa = need(params, "a"), pb = need(params, "b");
        if (pa == 0.0 && pb == 0.0) throw ConfigError("rationalH needs a or b nonzero");
        if (pa != 0.0) {
            const double root = -pb / pa;
            if (root >= x0 && root <= x1)
                throw ConfigError("rationalH pole a x + b = 0 inside the domain");
        }
        H = 1.0 / (constant(pa) * x + constant(pb));
        break;
    }
    case FamilyKind::cosH: {
        const double B = need(params, "B"), omega = need(params, "omega"),
                     beta0 = opt(params, "beta0", 0.0);
        if (B == 0.0) throw ConfigError("cosH needs B != 0");
        if (omega == 0.0) {
            if (std::abs(std::cos(beta0)) < 1e-12)
                throw ConfigError("cosH with omega = 0 needs cos(beta0) != 0");
        } else {
            // zeros of cos(omega x + beta0) sit at (pi/2 + k pi - beta0)/omega;
            // keep the domain 0.1/|omega| clear of each one
            const double margin = 0.1 / std::abs(omega);
            const double lo = x0 - margin, hi = x1 + margin;
            const double kmin =
                std::floor((std::min(omega * lo, omega * hi) + beta0 - M_PI_2) / M_PI) -
                1.0;
            const double kmax =
                std::ceil((std::max(omega * lo, omega * hi) + beta0 - M_PI_2) / M_PI) +
                1.0;
            for (double k = kmin; k <= kmax; k += 1.0) {
                const double z = (M_PI_2 + k * M_PI - beta0) / omega;
                if (z >= lo && z <= hi)
                    throw ConfigError(
                        "cosH domain too close to a zero of the cosine (margin 0.1/omega)");
            }
        }
        H = constant(B) / cos(constant(omega) * x + constant(beta0));
        break;
    }
    case FamilyKind::quadraticM: {
        const double a1 = need(params, "a1"), b1 = need(params, "b1");
        if (a1 == 0.0 && b1 == 0.0) throw ConfigError("quadraticM needs a1 or b1 nonzero");
        if (a1 != 0.0) {
            const double root = -b1 / a1;
            if (root >= x0 && root <= x1)
                throw ConfigError("quadraticM zero of M inside the domain");
        }
        Expr w = constant(a1) * x + constant(b1);
        M = w * w;
        H = constant(1.0);
        break;
    }
    }

    auto fam = burgers_derive(M, H, x0, x1);
    if (!fam.accepted())
        throw ValidationError("family failed its own compatibility check (norm " +
                              std::to_string(fam.compat_norm) + ")");
    return fam;
}

double h_admissibility_defect(const Expr& H, double a, double b, std::size_t n) {
    Expr d = H * H * diff(H, 3) - 5.0 * H * diff(H) * diff(H, 2) +
             4.0 * diff(H) * diff(H) * diff(H);
    double worst = 0.0;
    for (double x : uniform_grid(a, b, n)) worst = std::max(worst, std::abs(eval(d, x)));
    return worst;
}

double m_admissibility_defect(const Expr& M, double a, double b, std::size_t n) {
    Expr w = sqrt(M);
    Expr d = w * diff(w, 2);
    double worst = 0.0;
    for (double x : uniform_grid(a, b, n)) worst = std::max(worst, std::abs(eval(d, x)));
    return worst;
}

BurgersSolution burgers_solve(const BurgersFamily& fam, const Expr& phi_init,
                              double t_end, std::size_t nx, std::size_t nt,
                              double threshold) {
    if (!fam.accepted())
        throw ValidationError("refusing to solve a family whose compatibility norm is " +
                              std::to_string(fam.compat_norm));
    auto xs = uniform_grid(fam.a, fam.b, nx);
    for (double x : xs) {
        const double p0 = eval(phi_init, x);
        if (!(std::isfinite(p0) && p0 > 0.0))
            throw ValidationError("phi_init must be strictly positive on the grid");
    }

    // freeze the initial log-derivative at both ends; any heat solution maps
    // to a solution of the nonlinear equation, the BC only picks which one
    const Jet jl = eval_jet(phi_init, fam.a, 1);
    const Jet jr = eval_jet(phi_init, fam.b, 1);
    lincore::HeatSpec heat;
    heat.diffusivity = fam.M;
    heat.a = fam.a;
    heat.b = fam.b;
    heat.left = {lincore::BcKind::logderiv, constant(jl.d[1] / jl.d[0])};
    heat.right = {lincore::BcKind::logderiv, constant(jr.d[1] / jr.d[0])};

    if (nx < 6 || nt < 6)
        throw ConfigError("residual stencils need at least a 6x6 grid");
    GridFunction phi = lincore::solve_heat(heat, phi_init, t_end, nx, nt);
    const std::size_t nrow = phi.t.size();
    const double dt = t_end / static_cast<double>(nt);

    // pointwise coefficient data
    std::vector<Jet> pj(nx), qj(nx);
    std::vector<double> mv(nx), hv(nx), vv(nx), wv(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        pj[i] = eval_jet(fam.P, xs[i], 2);
        qj[i] = eval_jet(fam.Q, xs[i], 2);
        mv[i] = eval(fam.M, xs[i]);
        hv[i] = eval(fam.H, xs[i]);
        vv[i] = eval(fam.V, xs[i]);
        wv[i] = eval(fam.W, xs[i]);
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    BurgersSolution out;
    out.phi = phi;
    out.psi.x = xs;
    out.psi.t = phi.t;
    out.psi.rows.assign(nrow, std::vector<double>(nx, nan));

    std::vector<std::vector<bool>> masked(nrow, std::vector<bool>(nx, false));
    std::size_t nmasked = 0;
    for (std::size_t j = 0; j < nrow; ++j) {
        double amax = 0.0;
        for (double v : phi.rows[j])
            if (std::isfinite(v)) amax = std::max(amax, std::abs(v));
        const double cutoff = 1e-8 * amax;
        for (std::size_t i = 0; i < nx; ++i) {
            const double f = phi.rows[j][i];
            if (!std::isfinite(f) || std::abs(f) <= cutoff) {
                masked[j][i] = true;
                ++nmasked;
                continue;
            }
            out.psi.rows[j][i] = pj[i].d[0] + qj[i].d[0] * phi.xderiv[j][i] / f;
        }
    }
    out.mask_fraction =
        static_cast<double>(nmasked) / static_cast<double>(nrow * nx);
    if (out.mask_fraction > 0.20)
        throw NumericError("phi spends more than 20% of the grid near zero");

    // The residual is evaluated where the time stepper is actually
    // consistent: at the interval midpoints, with the field and its spatial
    // ladder taken as two-row averages, psi_t as the two-row difference, and
    // phi_xx from a direct 4th-order stencil of the averaged row. The third
    // derivative, which stacked stencils cannot deliver at useful accuracy,
    // is closed through the evolution law phi_xxx = phi_xt/M - phi_t M'/M^2.
    // The first max(2, nt/10) intervals are excluded: initial data is rarely
    // compatible with the boundary rows to first order, and the corner layer
    // it sheds is a property of the data, not of the construction. Past the
    // burn-in the measured value tracks the solver's spatial truncation and
    // shrinks at second order under refinement.
    const double dx = (fam.b - fam.a) / static_cast<double>(nx - 1);
    std::vector<double> mdj(nx); // M'(x_i)
    for (std::size_t i = 0; i < nx; ++i) mdj[i] = eval_jet(fam.M, xs[i], 1).d[1];

    std::size_t m0 = nt / 10;
    if (m0 < 2) m0 = 2;

    std::vector<double> worst(nx, nan);
    std::vector<bool> colmask(nx, true);
    std::vector<double> avg(nx), avgx(nx), ft(nx), fxt(nx);
    for (std::size_t m = m0; m + 1 < nrow; ++m) {
        for (std::size_t i = 0; i < nx; ++i) {
            avg[i] = 0.5 * (phi.rows[m][i] + phi.rows[m + 1][i]);
            avgx[i] = 0.5 * (phi.xderiv[m][i] + phi.xderiv[m + 1][i]);
            ft[i] = (phi.rows[m + 1][i] - phi.rows[m][i]) / dt;
            fxt[i] = (phi.xderiv[m + 1][i] - phi.xderiv[m][i]) / dt;
        }
        const auto avgxx = second_derivative_row(avg, dx);
        for (std::size_t i = 0; i < nx; ++i) {
            // spatial stencils span up to six columns; require the whole
            // footprint clean in both rows
            bool usable = true;
            const bool edge = i < 2 || i + 2 >= nx;
            const std::size_t li = (i < 2) ? 0 : (i + 2 >= nx ? nx - 6 : i - 2);
            for (std::size_t k = li; usable && k < li + (edge ? 6 : 5); ++k)
                usable = !masked[m][k] && !masked[m + 1][k];
            if (!usable) continue;

            const double f = avg[i];
            const double r = avgx[i] / f;
            const double fxxx = fxt[i] / mv[i] - ft[i] * mdj[i] / (mv[i] * mv[i]);
            const double rt = fxt[i] / f - r * (ft[i] / f);
            const double rx = avgxx[i] / f - r * r;
            const double rxx = fxxx / f - r * (avgxx[i] / f) - 2.0 * r * rx;

            const double s = pj[i].d[0] + qj[i].d[0] * r;
            const double st = qj[i].d[0] * rt;
            const double sx = pj[i].d[1] + qj[i].d[1] * r + qj[i].d[0] * rx;
            const double sxx = pj[i].d[2] + qj[i].d[2] * r + 2.0 * qj[i].d[1] * rx +
                               qj[i].d[0] * rxx;

            const double res = st - mv[i] * sxx - hv[i] * s * sx - vv[i] * s -
                               wv[i] * s * s;
            if (!std::isfinite(res)) continue;
            if (colmask[i] || std::abs(res) > std::abs(worst[i])) worst[i] = res;
            colmask[i] = false;
        }
    }
    out.report = make_residual_report("burgers", threshold, xs, std::move(worst),
                                      std::move(colmask));
    return out;
}

} // namespace colehopf::burgers
