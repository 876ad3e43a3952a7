#include "colehopf/painleve3.hpp"

#include "colehopf/errors.hpp"

#include <cmath>

namespace colehopf::painleve3 {

P3Config p3_linearize(double alpha, double beta, double gamma, const Expr& P,
                      bool negative_root) {
    if (!(gamma > 0.0))
        throw ConfigError("gamma must be positive: Q solves gamma Q^2 = 1");
    const double Q = (negative_root ? -1.0 : 1.0) / std::sqrt(gamma);
    const double aq = alpha * Q + 2.0;
    if (aq == 0.0)
        throw ConfigError("alpha Q + 2 = 0: the linearizable delta is undefined");

    Expr x = variable();
    Expr K = -(2.0 * x * P + constant(alpha * Q * Q + Q)) / (Q * x);
    Expr U = -diff(P) / Q - P * P / (Q * Q) - ((alpha * Q + 1.0) / Q) * P / x +
             constant(beta / (Q * aq));

    P3Config cfg;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.gamma = gamma;
    cfg.Q = Q;
    cfg.delta = -beta * beta / (aq * aq);
    cfg.P = P;
    cfg.K = K;
    cfg.U = U;
    return cfg;
}

NonlinearSpec P3Config::nonlinear() const {
    NonlinearSpec spec;
    spec.family = "painleve3";
    spec.params.set("alpha", alpha);
    spec.params.set("beta", beta);
    spec.params.set("gamma", gamma);
    spec.params.set("delta", delta);
    return spec;
}

LinearizationPair P3Config::pair() const {
    LinearizationPair p;
    p.P = P;
    p.Q = constant(Q);
    p.linear.kind = LinearSpec::Kind::ode;
    p.linear.potential = U;
    p.linear.drift = K;
    p.nonlinear = nonlinear();
    return p;
}

ResidualReport p3_residual(const P3Config& cfg, const GridFunction& candidate,
                           double threshold, const PoleMask& mask,
                           double delta_override) {
    if (candidate.is_field() || candidate.rows.size() < 3)
        throw ConfigError("p3_residual needs a profile with psi, psi', psi'' rows");
    const double delta = std::isnan(delta_override) ? cfg.delta : delta_override;

    const auto& xs = candidate.x;
    const auto& s = candidate.rows[0];
    const auto& ds = candidate.rows[1];
    const auto& dds = candidate.rows[2];

    double smax = 0.0;
    for (double v : s)
        if (std::isfinite(v)) smax = std::max(smax, std::abs(v));
    const double cutoff = 1e-8 * smax;

    std::vector<double> residual(xs.size());
    std::vector<bool> masked(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        const bool bad = !std::isfinite(s[i]) || !std::isfinite(ds[i]) ||
                         !std::isfinite(dds[i]) || std::abs(s[i]) <= cutoff ||
                         x <= 0.0;
        masked[i] = bad || mask.covers(x);
        if (masked[i]) {
            residual[i] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double rhs = ds[i] * ds[i] / s[i] - ds[i] / x +
                           (cfg.alpha * s[i] * s[i] + cfg.beta) / x +
                           cfg.gamma * s[i] * s[i] * s[i] + delta / s[i];
        residual[i] = dds[i] - rhs;
    }
    return make_residual_report("painleve3", threshold, xs, std::move(residual),
                                std::move(masked));
}

lincore::ClosedFormEntry p3_example_phi(int example, const Bindings& params, double C1,
                                        double C2) {
    if (example < 1 || example > 3)
        throw ConfigError("example must be 1, 2 or 3");
    Bindings p = params;
    p.set("C1", C1);
    p.set("C2", C2);
    return lincore::catalog_phi("painleve-ex" + std::to_string(example), p, 0.5, 3.0);
}

} // namespace colehopf::painleve3
