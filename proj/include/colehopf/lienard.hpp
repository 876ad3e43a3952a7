#pragma once

#include "colehopf/expr.hpp"
#include "colehopf/transform.hpp"

#include <array>
#include <string>
#include <vector>

// Polynomial Lienard equations
//
//   psi'' + (c2 psi^2 + c1 psi + c0) psi' + b4 psi^4 + ... + b1 psi + b0 = 0
//
// linearized by psi = P + phi'/phi with phi'' = U phi. Substituting
// r = phi'/phi (so r' = U - r^2) turns the equation into a quartic in r whose
// coefficients must vanish; that triangular system determines b4..b0 from the
// c's, P and U. The module solves that system symbolically. A commonly quoted
// closed form for the b's disagrees with the solve in several signs, so those
// expressions are kept separately as comparison vectors, never used to build
// equations.
namespace colehopf::lienard {

struct LienardSystem {
    std::array<Expr, 3> c; // c0, c1, c2
    std::array<Expr, 5> b; // b0 .. b4, from the triangular solve
    Expr P, U;

    NonlinearSpec nonlinear() const;
    LinearizationPair pair() const;
};

// Solve the r-power system top-down (r^4 fixes b4, then r^3 fixes b3, ...).
// The c's may depend on x. P needs jets to order 2, U to order 1.
LienardSystem lienard_b(const Expr& c0, const Expr& c1, const Expr& c2,
                        const Expr& P, const Expr& U);

// U = P^2 - P', the choice that makes the recomputed b0 vanish identically
// (the constant term of the quartic drops and c0 stays free).
Expr riccati_U(const Expr& P);

// Quoted closed forms for b0..b4, kept verbatim for comparison.
std::array<Expr, 5> quoted_b(const Expr& c0, const Expr& c1, const Expr& c2,
                             const Expr& P, const Expr& U);

// One row per coefficient: the recomputed and quoted expressions plus the
// largest pointwise gap between them on a sample grid over [a, b].
struct CoefficientDiff {
    std::string name;
    Expr recomputed;
    Expr quoted;
    double max_abs_diff = 0.0;
};

std::vector<CoefficientDiff> quoted_comparison(const LienardSystem& sys, double a,
                                               double b, int n = 50,
                                               const Bindings& bound = {});

} // namespace colehopf::lienard
