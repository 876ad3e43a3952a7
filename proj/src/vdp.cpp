#include "colehopf/vdp.hpp"

#include "colehopf/errors.hpp"
#include "colehopf/grid.hpp"

#include <cmath>
#include <string>

namespace colehopf::vdp {

VdpParams::VdpParams(double mu_, double beta_, double alpha_)
    : mu(mu_), beta(beta_), alpha(alpha_) {
    const double ksq = mu * mu * beta * beta - 4.0 * alpha;
    if (ksq >= 0.0) k = std::sqrt(ksq);
}

VdpSystem vdp_coeffs(const Expr& P, const VdpParams& params) {
    const double mu = params.mu, beta = params.beta, alpha = params.alpha;
    const double mb = mu * beta;

    Expr P1 = diff(P);
    Expr U = 3.0 * P * P - mb * P + constant(alpha / 2.0);
    Expr g = constant(-mu);
    Expr h = 2.0 * mu * P + 2.0;
    Expr v = mu * P1 + mu * U - (mu * P + 6.0) * P + mb;
    Expr f = diff(P, 2) - 2.0 * mb * P1 + (6.0 * P1 + constant(alpha + mb * mb)) * P +
             4.0 * (P - mb) * P * P - constant(mb * alpha / 2.0);

    VdpSystem sys{params, P, g, h, v, U, f};
    return sys;
}

NonlinearSpec VdpSystem::nonlinear() const {
    NonlinearSpec spec;
    spec.family = "vdp";
    spec.params.set("mu", params.mu);
    spec.params.set("beta", params.beta);
    spec.params.set("alpha", params.alpha);
    spec.coeffs = {{"v", v}, {"h", h}, {"g", g}, {"f", f}};
    return spec;
}

LinearizationPair VdpSystem::pair() const {
    LinearizationPair p;
    p.P = P;
    p.Q = constant(1.0);
    p.linear.kind = LinearSpec::Kind::ode;
    p.linear.potential = U;
    p.nonlinear = nonlinear();
    return p;
}

std::array<double, 5> vdp_residuals(const VdpSystem& sys, double x,
                                    const Bindings& bound) {
    const double mu = sys.params.mu, beta = sys.params.beta, alpha = sys.params.alpha;
    const Jet pj = eval_jet(sys.P, x, 2, bound);
    const double P = pj.d[0], P1 = pj.d[1], P2 = pj.d[2];
    const Jet uj = eval_jet(sys.U, x, 1, bound);
    const double U = uj.d[0], U1 = uj.d[1];
    const double g = eval(sys.g, x, bound);
    const double h = eval(sys.h, x, bound);
    const double v = eval(sys.v, x, bound);
    const double f = eval(sys.f, x, bound);

    std::array<double, 5> a{};
    a[4] = -mu - g;
    a[3] = -(2.0 * mu + 4.0 * g) * P - h + 2.0;
    a[2] = mu * P1 - (6.0 * g + mu) * P * P - 3.0 * h * P - v + mu * U + mu * beta;
    a[1] = -4.0 * g * P * P * P - 3.0 * h * P * P +
           (2.0 * mu * P1 - 2.0 * v + 2.0 * mu * U) * P - 2.0 * U + alpha;
    a[0] = P2 + mu * (P * P - beta) * P1 + U1 - g * P * P * P * P - h * P * P * P +
           (mu * U - v) * P * P + alpha * P - mu * beta * U - f;
    return a;
}

Expr vdp_unforced_P(const VdpParams& params, double C1, double C2, double a, double b) {
    if (!params.k)
        throw ValidationError("k^2 = mu^2 beta^2 - 4 alpha < 0: complex-k branch is "
                              "unsupported");
    const double mu = params.mu, beta = params.beta;
    const double mb = mu * beta;
    const double k = *params.k;
    Expr x = variable();

    Expr P, denom;
    if (std::abs(k - mb) <= 1e-12 * std::max(1.0, std::abs(mb))) {
        // alpha = 0 degeneration, recomputed directly from the general form
        const double c = C1 + C2;
        Expr E = exp(constant(-mb) * x);
        denom = E + constant(c);
        P = constant(c * mb / 2.0) / denom;
    } else {
        Expr em = exp(constant(mb / 2.0) * x);
        Expr ep = exp(constant(k / 2.0) * x);
        Expr en = exp(constant(-k / 2.0) * x);
        denom = constant(C1) * em + constant(C2) * ep + en;
        P = (constant(2.0 * C1 * mb) * em + constant(C2 * (mb + k)) * ep +
             constant(mb - k) * en) /
            (4.0 * denom);
    }

    // pole scan: the formula is only usable while its denominator keeps sign
    auto xs = uniform_grid(a, b, 201);
    double dmax = 0.0;
    for (double xi : xs) dmax = std::max(dmax, std::abs(eval(denom, xi)));
    bool sign_known = false;
    bool negative = false;
    for (double xi : xs) {
        const double d = eval(denom, xi);
        if (std::abs(d) < 1e-12 * dmax)
            throw ValidationError("P formula denominator vanishes inside the domain");
        if (!sign_known) {
            negative = d < 0.0;
            sign_known = true;
        } else if ((d < 0.0) != negative) {
            throw ValidationError("P formula denominator vanishes inside the domain");
        }
    }

    // consistency: the returned P must zero the forcing expression
    Expr f = vdp_coeffs(P, params).f;
    auto check = uniform_grid(a, b, 50);
    double worst = 0.0;
    for (double xi : check) worst = std::max(worst, std::abs(eval(f, xi)));
    if (worst > 1e-9)
        throw ValidationError("unforced P failed the f = 0 self-check (max |f| = " +
                              std::to_string(worst) + ")");
    return P;
}

VdpSystem vdp_forced_family(const Expr& g, ForcedBranch branch,
                            const VdpParams& params) {
    Expr P = branch == ForcedBranch::plus
                 ? g
                 : constant(params.mu * params.beta / 3.0) - g;
    return vdp_coeffs(P, params);
}

} // namespace colehopf::vdp
