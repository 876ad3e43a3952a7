#pragma once

#include "colehopf/expr.hpp"
#include "colehopf/grid.hpp"
#include "colehopf/transform.hpp"

#include <array>
#include <cstddef>
#include <optional>

// Second order convective ODEs
//
//   psi'' = S(x) + [V(x) + F(x) psi'] psi + W(x) psi^2
//
// paired with phi'' = U(x) phi through psi = P + Q phi'/phi. Matching powers
// of phi'/phi gives four conditions. The cubic and quadratic ones fix
//
//   Q = -2/F,  P = -2W/F^2,
//
// the linear one loses its U dependence entirely and collapses into a
// constraint on F, W, V alone, and the constant one is a linear first-order
// equation for the potential, U' = u_rate U + u_source. Dividing by F is
// essential: F = 0 would need a cubic psi^3 term on the nonlinear side,
// which this module does not cover.
namespace colehopf::convective {

struct ConvectiveSystem {
    Expr F, W, V, S; // nonlinear side
    Expr Q, P;       // transform data
    double a = 0.0, b = 1.0;
    double constraint_norm = 0.0; // sup of the F-W-V obstruction over [a, b]

    // The potential: closed form when the first-order equation has constant
    // coefficients (and always for the reverse direction), sampled profile
    // with rows U, U' otherwise.
    std::optional<Expr> U;
    GridFunction U_profile;
    Expr u_rate, u_source;

    // {U, U'} anywhere in [a, b]: exact when the closed form exists, cubic
    // Hermite between profile samples otherwise.
    std::array<double, 2> potential_at(double x) const;

    NonlinearSpec nonlinear() const; // family "convective", coeffs F, W, V, S
    LinearizationPair pair() const;  // requires the closed-form potential
};

// The psi'-power obstruction with Q and P already eliminated:
//   V + (F'' - 2W')/F + (6WF' - 2(F')^2 - 4W^2)/F^2
Expr forward_constraint(const Expr& F, const Expr& W, const Expr& V);

// Given the nonlinear side, recover Q, P and integrate the potential from
// U(x0) = U0. F must not vanish on [a, b] (DomainError; the psi^3-augmented
// variant that would cover F = 0 is out of scope), the constraint must hold
// to 1e-8 (ValidationError reporting the worst offender), and x0 must lie in
// [a, b]. The potential integration uses adaptive RK45 in both directions
// from x0; n is the stored profile resolution.
ConvectiveSystem conv_forward(const Expr& F, const Expr& W, const Expr& V, const Expr& S,
                              double U0, double x0, double a, double b,
                              std::size_t n = 401);

// Given transform data and a closed-form potential, synthesize the nonlinear
// side. Q must not vanish on [a, b]. S comes from the same power-matching
// identity the forward direction integrates, so a forward residual check on
// the result vanishes identically.
ConvectiveSystem conv_reverse(const Expr& P, const Expr& Q, const Expr& U, double a,
                              double b, std::size_t n = 401);

// The four matching coefficients evaluated as printed, returned as
// {a0, a1, a2, a3}. For an accepted system all four vanish.
std::array<double, 4> conv_ai_residuals(const ConvectiveSystem& sys, double x);

// Damping elimination: psi'' = S + (V + F psi') psi + V1 psi' + W psi^2 maps
// to the undamped form under xi = p psi with p = exp(-1/2 int_{x0}^x V1).
// The transformed quadratic coefficient V + p''/p is exact (p''/p =
// V1^2/4 - V1'/2); p itself is integrated numerically, so the remaining
// coefficients are exposed pointwise.
struct ReducedSystem {
    Expr V1;
    Expr F, V, W, S; // original coefficients
    Expr Vt;         // V + V1^2/4 - V1'/2
    std::optional<Expr> p_exact; // closed form for constant V1
    GridFunction p;  // rows: p, p'
    double a = 0.0, b = 1.0, x0 = 0.0;

    std::array<double, 2> p_at(double x) const; // {p, p'}
    double Ft(double x) const;                  // F/p
    double Wt(double x) const;                  // W/p - F p'/p^2
    double St(double x) const;                  // p S
};

ReducedSystem conv_reduce(const Expr& V1, const Expr& F, const Expr& V, const Expr& W,
                          const Expr& S, double x0, double a, double b,
                          std::size_t n = 401);

} // namespace colehopf::convective
