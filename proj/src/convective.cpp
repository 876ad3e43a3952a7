#include "colehopf/convective.hpp"

#include "colehopf/errors.hpp"
#include "colehopf/rk45.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace colehopf::convective {
namespace {

// Every formula below divides by this coefficient, so a zero anywhere on the
// domain poisons the whole construction, not just one sample.
void require_nonvanishing(const Expr& e, const char* name, double a, double b,
                          const char* hint) {
    const auto xs = uniform_grid(a, b, 201);
    double mx = 0.0;
    for (double x : xs) mx = std::max(mx, std::abs(eval(e, x)));
    if (!(mx > 0.0))
        throw DomainError(std::string(name) + " vanishes identically on the domain" + hint);
    double prev = eval(e, xs.front());
    for (double x : xs) {
        const double v = eval(e, x);
        if (std::abs(v) <= 1e-12 * mx || v * prev < 0.0)
            throw DomainError(std::string(name) + " vanishes near x = " + std::to_string(x) +
                              hint);
        prev = v;
    }
}

// Cubic Hermite through a sampled profile (rows: value, derivative).
std::array<double, 2> hermite_eval(const GridFunction& g, double x) {
    if (g.x.size() < 2 || g.rows.size() < 2)
        throw ConfigError("no sampled profile to interpolate");
    const auto& xs = g.x;
    if (x < xs.front() - 1e-12 || x > xs.back() + 1e-12)
        throw DomainError("evaluation point outside the working domain");
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    if (i + 1 >= xs.size()) i = xs.size() - 2;
    const double h = xs[i + 1] - xs[i];
    const double s = (x - xs[i]) / h;
    const double f0 = g.rows[0][i], f1 = g.rows[0][i + 1];
    const double d0 = g.rows[1][i], d1 = g.rows[1][i + 1];
    const double s2 = s * s, s3 = s2 * s;
    const double f = (2.0 * s3 - 3.0 * s2 + 1.0) * f0 + (s3 - 2.0 * s2 + s) * h * d0 +
                     (-2.0 * s3 + 3.0 * s2) * f1 + (s3 - s2) * h * d1;
    const double df = ((6.0 * s2 - 6.0 * s) * (f0 - f1) / h) + (3.0 * s2 - 4.0 * s + 1.0) * d0 +
                      (3.0 * s2 - 2.0 * s) * d1;
    return {f, df};
}

// Integrate the scalar equation y' = f(x, y) from (x0, y0) onto the ascending
// samples xs. The integrator only runs forward, so the part of the domain
// left of x0 is covered in the mirrored coordinate s = x0 - x.
std::vector<double> sweep_scalar(const std::function<double(double, double)>& f, double x0,
                                 double y0, const std::vector<double>& xs, const char* what) {
    OdeOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    opt.blowup = 1e12;
    std::vector<double> out(xs.size());
    std::vector<double> right, left_s;
    std::vector<std::size_t> right_idx, left_idx;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] >= x0) {
            right.push_back(xs[i]);
            right_idx.push_back(i);
        } else {
            left_s.push_back(x0 - xs[i]);
            left_idx.push_back(i);
        }
    }
    std::reverse(left_s.begin(), left_s.end());
    std::reverse(left_idx.begin(), left_idx.end());

    const auto run = [&](double lo, double hi, const OdeRhs& rhs,
                         const std::vector<double>& samples) {
        const double y_init[1] = {y0};
        auto res = integrate_samples(rhs, 1, lo, hi, y_init, samples, opt);
        if (res.blew_up || res.n_complete != samples.size())
            throw NumericError(std::string(what) + " blew up before covering the domain");
        return std::move(res.rows[0]);
    };

    if (!right.empty()) {
        if (right.back() > x0) {
            const OdeRhs rhs = [&](double x, const double* y, double* dy) {
                dy[0] = f(x, y[0]);
            };
            const auto vals = run(x0, right.back(), rhs, right);
            for (std::size_t k = 0; k < right.size(); ++k) out[right_idx[k]] = vals[k];
        } else {
            for (std::size_t k = 0; k < right.size(); ++k) out[right_idx[k]] = y0;
        }
    }
    if (!left_s.empty()) {
        const OdeRhs rhs = [&](double s, const double* y, double* dy) {
            dy[0] = -f(x0 - s, y[0]);
        };
        const auto vals = run(0.0, left_s.back(), rhs, left_s);
        for (std::size_t k = 0; k < left_s.size(); ++k) out[left_idx[k]] = vals[k];
    }
    for (double v : out)
        if (!std::isfinite(v))
            throw NumericError(std::string(what) + " produced non-finite values");
    return out;
}

Expr assemble_u_rate(const Expr& F, const Expr& P) { return P * F + (2.0 * diff(F)) / F; }

Expr assemble_u_source(const Expr& F, const Expr& W, const Expr& V, const Expr& S,
                       const Expr& P) {
    return (F / 2.0) * (diff(P, 2) - W * (P * P) - (V + F * diff(P)) * P - S);
}

void check_domain(double a, double b, std::size_t n) {
    if (!(b > a)) throw ConfigError("domain must satisfy a < b");
    if (n < 5) throw ConfigError("profile needs at least 5 samples");
}

} // namespace

Expr forward_constraint(const Expr& F, const Expr& W, const Expr& V) {
    return V + (diff(F, 2) - 2.0 * diff(W)) / F +
           (6.0 * W * diff(F) - 2.0 * diff(F) * diff(F) - 4.0 * W * W) / (F * F);
}

std::array<double, 2> ConvectiveSystem::potential_at(double x) const {
    if (U) {
        const auto j = eval_jet(*U, x, 1);
        return {j.d[0], j.d[1]};
    }
    return hermite_eval(U_profile, x);
}

NonlinearSpec ConvectiveSystem::nonlinear() const {
    NonlinearSpec ns;
    ns.family = "convective";
    ns.coeffs = {{"F", F}, {"W", W}, {"V", V}, {"S", S}};
    return ns;
}

LinearizationPair ConvectiveSystem::pair() const {
    if (!U)
        throw ConfigError("no closed-form potential: only constant-coefficient forward "
                          "systems and the reverse direction carry one");
    LinearizationPair pr;
    pr.P = P;
    pr.Q = Q;
    pr.linear.kind = LinearSpec::Kind::ode;
    pr.linear.potential = *U;
    pr.nonlinear = nonlinear();
    return pr;
}

ConvectiveSystem conv_forward(const Expr& F, const Expr& W, const Expr& V, const Expr& S,
                              double U0, double x0, double a, double b, std::size_t n) {
    check_domain(a, b, n);
    if (!(x0 >= a && x0 <= b)) throw ConfigError("anchor x0 must lie inside the domain");
    require_nonvanishing(F, "F", a, b,
                         "; the pairing divides by F, and the psi^3 augmentation that would "
                         "absorb a vanishing F is not implemented");

    ConvectiveSystem sys;
    sys.F = F;
    sys.W = W;
    sys.V = V;
    sys.S = S;
    sys.a = a;
    sys.b = b;
    sys.Q = -2.0 / F;
    sys.P = (-2.0 * W) / (F * F);

    const Expr obstruction = forward_constraint(F, W, V);
    const auto scan = uniform_grid(a, b, 201);
    double worst = 0.0, worst_x = a;
    for (double x : scan) {
        const double v = std::abs(eval(obstruction, x));
        if (v > worst) {
            worst = v;
            worst_x = x;
        }
    }
    sys.constraint_norm = worst;
    if (worst > 1e-8) {
        std::ostringstream msg;
        msg << "F, W, V do not admit the pairing: sup of the obstruction is " << worst
            << " at x = " << worst_x;
        throw ValidationError(msg.str());
    }

    sys.u_rate = assemble_u_rate(F, sys.P);
    sys.u_source = assemble_u_source(F, W, V, S, sys.P);

    const auto xs = uniform_grid(a, b, n);
    sys.U_profile.x = xs;
    sys.U_profile.rows.assign(2, std::vector<double>(n));

    if (!depends_on_var(sys.u_rate) && !depends_on_var(sys.u_source)) {
        const double mid = 0.5 * (a + b);
        const double alpha = eval(sys.u_rate, mid);
        const double beta = eval(sys.u_source, mid);
        if (alpha == 0.0) {
            sys.U = constant(U0) + constant(beta) * (variable() - constant(x0));
        } else {
            sys.U = constant(-beta / alpha) +
                    constant(U0 + beta / alpha) *
                        exp(constant(alpha) * (variable() - constant(x0)));
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = eval_jet(*sys.U, xs[i], 1);
            sys.U_profile.rows[0][i] = j.d[0];
            sys.U_profile.rows[1][i] = j.d[1];
        }
    } else {
        const auto f = [&](double x, double y) {
            return eval(sys.u_rate, x) * y + eval(sys.u_source, x);
        };
        sys.U_profile.rows[0] = sweep_scalar(f, x0, U0, xs, "potential integration");
        for (std::size_t i = 0; i < n; ++i)
            sys.U_profile.rows[1][i] = f(xs[i], sys.U_profile.rows[0][i]);
    }
    return sys;
}

ConvectiveSystem conv_reverse(const Expr& P, const Expr& Q, const Expr& U, double a, double b,
                              std::size_t n) {
    check_domain(a, b, n);
    require_nonvanishing(Q, "Q", a, b, "; the transform divides by Q");

    ConvectiveSystem sys;
    sys.P = P;
    sys.Q = Q;
    sys.U = U;
    sys.a = a;
    sys.b = b;
    sys.F = -2.0 / Q;
    sys.W = (-2.0 * P) / (Q * Q);
    sys.V = (Q * diff(Q, 2) + 4.0 * (P * P) + 2.0 * diff(P * Q)) / (Q * Q);
    sys.S = diff(P, 2) + Q * diff(U) + 2.0 * (diff(Q) + P) * U - P * diff(Q, 2) / Q -
            (2.0 * (P * P) * (diff(Q) + P)) / (Q * Q);
    sys.u_rate = assemble_u_rate(sys.F, P);
    sys.u_source = assemble_u_source(sys.F, sys.W, sys.V, sys.S, P);

    const Expr obstruction = forward_constraint(sys.F, sys.W, sys.V);
    double worst = 0.0;
    for (double x : uniform_grid(a, b, 201))
        worst = std::max(worst, std::abs(eval(obstruction, x)));
    sys.constraint_norm = worst;

    const auto xs = uniform_grid(a, b, n);
    sys.U_profile.x = xs;
    sys.U_profile.rows.assign(2, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = eval_jet(U, xs[i], 1);
        sys.U_profile.rows[0][i] = j.d[0];
        sys.U_profile.rows[1][i] = j.d[1];
    }
    return sys;
}

std::array<double, 4> conv_ai_residuals(const ConvectiveSystem& sys, double x) {
    const auto jq = eval_jet(sys.Q, x, 2);
    const auto jp = eval_jet(sys.P, x, 2);
    const double f = eval(sys.F, x);
    const double w = eval(sys.W, x);
    const double v = eval(sys.V, x);
    const double s = eval(sys.S, x);
    const auto [u, du] = sys.potential_at(x);
    const double q = jq.d[0], dq = jq.d[1], ddq = jq.d[2];
    const double p = jp.d[0], dp = jp.d[1], ddp = jp.d[2];

    const double a3 = q * f + 2.0;
    const double a2 = q * (f * p - w * q) - (2.0 + f * q) * dq;
    const double a1 = ddq - f * p * dq - u * f * q * q - (2.0 * u + v + f * dp + 2.0 * w * p) * q;
    const double a0 = ddp - w * p * p - (f * q * u + v + f * dp) * p + q * du + 2.0 * u * dq - s;
    return {a0, a1, a2, a3};
}

std::array<double, 2> ReducedSystem::p_at(double x) const {
    if (p_exact) {
        const auto j = eval_jet(*p_exact, x, 1);
        return {j.d[0], j.d[1]};
    }
    return hermite_eval(p, x);
}

double ReducedSystem::Ft(double x) const { return eval(F, x) / p_at(x)[0]; }

double ReducedSystem::Wt(double x) const {
    const auto [pv, dpv] = p_at(x);
    return eval(W, x) / pv - eval(F, x) * dpv / (pv * pv);
}

double ReducedSystem::St(double x) const { return p_at(x)[0] * eval(S, x); }

ReducedSystem conv_reduce(const Expr& V1, const Expr& F, const Expr& V, const Expr& W,
                          const Expr& S, double x0, double a, double b, std::size_t n) {
    check_domain(a, b, n);
    if (!(x0 >= a && x0 <= b)) throw ConfigError("anchor x0 must lie inside the domain");

    ReducedSystem red;
    red.V1 = V1;
    red.F = F;
    red.V = V;
    red.W = W;
    red.S = S;
    red.a = a;
    red.b = b;
    red.x0 = x0;
    red.Vt = V + (V1 * V1) / 4.0 - diff(V1) / 2.0;

    const auto xs = uniform_grid(a, b, n);
    red.p.x = xs;
    red.p.rows.assign(2, std::vector<double>(n));

    if (!depends_on_var(V1)) {
        const double v1 = eval(V1, 0.5 * (a + b));
        red.p_exact = exp(constant(-0.5 * v1) * (variable() - constant(x0)));
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = eval_jet(*red.p_exact, xs[i], 1);
            red.p.rows[0][i] = j.d[0];
            red.p.rows[1][i] = j.d[1];
        }
        return red;
    }

    const auto f = [&](double x, double) { return eval(V1, x); };
    const auto integral = sweep_scalar(f, x0, 0.0, xs, "the damping integral");
    for (std::size_t i = 0; i < n; ++i) {
        const double pv = std::exp(-0.5 * integral[i]);
        if (!std::isfinite(pv) || pv == 0.0)
            throw NumericError("the damping integral diverges on the domain");
        red.p.rows[0][i] = pv;
        red.p.rows[1][i] = -0.5 * eval(V1, xs[i]) * pv;
    }
    return red;
}

} // namespace colehopf::convective
