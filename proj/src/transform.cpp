#include "colehopf/transform.hpp"

#include "colehopf/errors.hpp"

#include <cmath>
#include <limits>

namespace colehopf {

TransformResult apply_transform(const Expr& P, const Expr& Q,
                                const std::vector<double>& x,
                                const std::vector<double>& phi,
                                const std::vector<double>& dphi,
                                const Bindings& bound) {
    const std::size_t n = x.size();
    if (n < 2) throw ConfigError("transform needs at least two grid points");
    if (phi.size() != n || dphi.size() != n)
        throw ConfigError("phi samples do not match the grid");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x[i] > x[i - 1])) throw ConfigError("grid must be strictly increasing");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(phi[i]) || !std::isfinite(dphi[i]))
            throw ValidationError("phi samples must be finite");

    double amax = 0.0;
    for (double v : phi) amax = std::max(amax, std::abs(v));

    TransformResult out;
    out.mask.half_width = 2.0 * (x.back() - x.front()) / static_cast<double>(n - 1);
    if (amax == 0.0) throw NumericError("solution entirely singular: phi vanishes");

    const double cutoff = 1e-8 * amax;
    out.psi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(phi[i]) < cutoff) out.mask.add_center(x[i]);
        out.psi[i] = phi[i] == 0.0
                         ? std::numeric_limits<double>::quiet_NaN()
                         : eval(P, x[i], bound) + eval(Q, x[i], bound) * dphi[i] / phi[i];
    }
    if (out.mask.fraction(x) >= 1.0)
        throw NumericError("solution entirely singular: every point is pole-masked");
    return out;
}

TransformedProfile psi_with_derivatives(const Expr& P, const Expr& Q,
                                        const LinearSpec& linear,
                                        const std::vector<double>& x,
                                        const std::vector<double>& phi,
                                        const std::vector<double>& dphi,
                                        const Bindings& bound) {
    if (linear.kind != LinearSpec::Kind::ode)
        throw ConfigError("derivative propagation needs the ODE form of the pair");
    TransformResult base = apply_transform(P, Q, x, phi, dphi, bound);

    TransformedProfile out;
    out.mask = std::move(base.mask);
    out.g.x = x;
    out.g.rows.resize(3);
    out.g.rows[0] = std::move(base.psi);
    auto& d1 = out.g.rows[1];
    auto& d2 = out.g.rows[2];
    d1.assign(x.size(), std::numeric_limits<double>::quiet_NaN());
    d2 = d1;

    for (std::size_t i = 0; i < x.size(); ++i) {
        if (phi[i] == 0.0) continue;
        const double r = dphi[i] / phi[i];
        const Jet p = eval_jet(P, x[i], 2, bound);
        const Jet q = eval_jet(Q, x[i], 2, bound);
        const Jet u = eval_jet(linear.potential, x[i], 1, bound);
        Jet k = Jet::constant(0.0, 1);
        if (linear.drift) k = eval_jet(*linear.drift, x[i], 1, bound);
        const double r1 = u.d[0] + k.d[0] * r - r * r;
        const double r2 = u.d[1] + k.d[1] * r + k.d[0] * r1 - 2.0 * r * r1;
        d1[i] = p.d[1] + q.d[1] * r + q.d[0] * r1;
        d2[i] = p.d[2] + q.d[2] * r + 2.0 * q.d[1] * r1 + q.d[0] * r2;
    }
    return out;
}

std::array<double, 2> ic_from_phi(const Expr& P, const Expr& Q, double phi0,
                                  double dphi0, const LinearSpec& linear, double x0,
                                  const Bindings& bound) {
    if (linear.kind != LinearSpec::Kind::ode)
        throw ConfigError("initial-condition mapping needs the ODE form of the pair");
    if (phi0 == 0.0) throw ValidationError("phi vanishes at the anchor point");
    const double r = dphi0 / phi0;
    const Jet p = eval_jet(P, x0, 1, bound);
    const Jet q = eval_jet(Q, x0, 1, bound);
    const double u = eval(linear.potential, x0, bound);
    const double k = linear.drift ? eval(*linear.drift, x0, bound) : 0.0;
    const double psi = p.d[0] + q.d[0] * r;
    const double dpsi = p.d[1] + q.d[1] * r + q.d[0] * (u + k * r - r * r);
    return {psi, dpsi};
}

} // namespace colehopf
