#include "colehopf/lienard.hpp"

#include "colehopf/grid.hpp"

#include <cmath>

namespace colehopf::lienard {

LienardSystem lienard_b(const Expr& c0, const Expr& c1, const Expr& c2,
                        const Expr& P, const Expr& U) {
    // With psi = P + r the damping polynomial splits as A + B r + C r^2 and
    // psi' = P' + U - r^2, psi'' = P'' + U' - 2 U r + 2 r^3.
    Expr A = c2 * P * P + c1 * P + c0;
    Expr B = 2.0 * c2 * P + c1;
    const Expr& C = c2;
    Expr W = diff(P) + U;

    // zero the r-powers from the top down; each step only uses earlier b's
    Expr b4 = C;
    Expr b3 = B - 4.0 * b4 * P - 2.0;
    Expr b2 = A - C * W - 6.0 * b4 * P * P - 3.0 * b3 * P;
    Expr b1 = 2.0 * U - B * W - 4.0 * b4 * P * P * P - 3.0 * b3 * P * P - 2.0 * b2 * P;
    Expr b0 =
        -(diff(P, 2) + diff(U) + A * W + (((b4 * P + b3) * P + b2) * P + b1) * P);

    LienardSystem sys;
    sys.c = {c0, c1, c2};
    sys.b = {b0, b1, b2, b3, b4};
    sys.P = P;
    sys.U = U;
    return sys;
}

Expr riccati_U(const Expr& P) { return P * P - diff(P); }

NonlinearSpec LienardSystem::nonlinear() const {
    NonlinearSpec spec;
    spec.family = "lienard";
    spec.coeffs = {{"c0", c[0]}, {"c1", c[1]}, {"c2", c[2]}, {"b0", b[0]},
                   {"b1", b[1]}, {"b2", b[2]}, {"b3", b[3]}, {"b4", b[4]}};
    return spec;
}

LinearizationPair LienardSystem::pair() const {
    LinearizationPair p;
    p.P = P;
    p.Q = constant(1.0);
    p.linear.kind = LinearSpec::Kind::ode;
    p.linear.potential = U;
    p.nonlinear = nonlinear();
    return p;
}

std::array<Expr, 5> quoted_b(const Expr& c0, const Expr& c1, const Expr& c2,
                             const Expr& P, const Expr& U) {
    Expr P1 = diff(P);
    Expr b4 = c2;
    Expr b3 = c1 - 2.0 * c2 * P + 2.0;
    Expr b2 = c2 * P * P - 2.0 * (3.0 - c1) * P - c2 * (P1 - U) + c0;
    Expr b1 = (6.0 + c1) * P * P - 2.0 * c0 * P - c1 * P1 - (c1 + 2.0) * U;
    Expr b0 = diff(P, 2) - c0 * P1 + diff(U) - 2.0 * P * P * P + 2.0 * P * U +
              c0 * (P * P - U);
    return {b0, b1, b2, b3, b4};
}

std::vector<CoefficientDiff> quoted_comparison(const LienardSystem& sys, double a,
                                               double b, int n, const Bindings& bound) {
    auto q = quoted_b(sys.c[0], sys.c[1], sys.c[2], sys.P, sys.U);
    auto xs = uniform_grid(a, b, static_cast<std::size_t>(n));

    std::vector<CoefficientDiff> table;
    table.reserve(5);
    for (int k = 0; k < 5; ++k) {
        CoefficientDiff row;
        row.name = "b" + std::to_string(k);
        row.recomputed = sys.b[static_cast<std::size_t>(k)];
        row.quoted = q[static_cast<std::size_t>(k)];
        for (double x : xs) {
            const double d = std::abs(eval(row.recomputed, x, bound) -
                                      eval(row.quoted, x, bound));
            row.max_abs_diff = std::max(row.max_abs_diff, d);
        }
        table.push_back(std::move(row));
    }
    return table;
}

} // namespace colehopf::lienard
