#pragma once

#include "colehopf/expr.hpp"
#include "colehopf/grid.hpp"
#include "colehopf/transform.hpp"

#include <string>

// Generalized Burgers equations
//
//   psi_t - M(x) psi_xx = H(x) psi psi_x + V(x) psi + W(x) psi^2
//
// pair with the plain heat equation phi_t = M(x) phi_xx through
// psi = P + Q phi_x/phi. Matching powers of phi_x/phi forces
//
//   Q = 2M/H,  P = 2MH'/H^2 - M'/H,  W = -HM'/(2M) + H',  V = -MH''/H
//
// and leaves one genuine obstruction, a third-order ODE tying M to H; its
// pointwise size is the family's compat_norm. For constant M the obstruction
// factors through 1/H being affine-or-cosine-or-exponential; for H = 1 it
// admits M a perfect square of an affine function.
namespace colehopf::burgers {

struct BurgersFamily {
    Expr M, H;
    Expr Q, P, W, V;
    double a = 0.0, b = 1.0;  // working domain
    double compat_norm = 0.0; // sup of the M-H obstruction over the domain

    bool accepted() const { return compat_norm <= 1e-8; }
    NonlinearSpec nonlinear() const; // family "burgers", coeffs M, H, V, W
};

// Derive Q, P, W, V from (M, H) and measure the obstruction on [a, b].
// Throws DomainError when H vanishes on the domain, ValidationError when M
// is not strictly positive there. A large compat_norm is not an error here:
// callers inspect accepted().
BurgersFamily burgers_derive(const Expr& M, const Expr& H, double a, double b);

enum class FamilyKind { expH, rationalH, cosH, quadraticM };

FamilyKind family_kind(const std::string& name);

// The closed admissible families:
//   expH        M = A,            H = C e^{alphaH x}    (params A, C, alphaH)
//   rationalH   M = A,            H = 1/(a x + b)       (params A, a, b)
//   cosH        M = A,            H = B/cos(omega x + beta0)
//                                                       (params A, B, omega, beta0)
//   quadraticM  M = (a1 x + b1)^2, H = 1                (params a1, b1)
// A defaults to 1. Parameter sets that let H vanish or M touch zero on
// [x0, x1] are rejected (ConfigError); the cosH domain must additionally stay
// 0.1/|omega| away from every zero of the cosine. The derived family must
// come out accepted, otherwise ValidationError.
BurgersFamily burgers_families(FamilyKind kind, const Bindings& params, double x0,
                               double x1);

// Constant-M obstruction in its reduced form, sup over [a, b] of
// |H^2 H''' - 5 H H' H'' + 4 (H')^3|.
double h_admissibility_defect(const Expr& H, double a, double b, std::size_t n = 201);

// H = 1 obstruction: with w = sqrt(M), sup over [a, b] of |w w''|. M must be
// positive there.
double m_admissibility_defect(const Expr& M, double a, double b, std::size_t n = 201);

struct BurgersSolution {
    GridFunction psi;      // field; masked points are NaN
    GridFunction phi;      // underlying heat solve (values + phi_x rows)
    double mask_fraction = 0.0;
    ResidualReport report; // chain-rule residual of the nonlinear equation
};

// End-to-end solve on the family's domain: run the heat equation from
// phi_init (kept on log-derivative boundary conditions frozen at their t = 0
// values), transform, and evaluate the pointwise residual with analytic
// derivatives of P and Q and finite differences of phi. The residual is
// measured at interval midpoints (two-row averages and differences, where the
// stepper is consistent) and its report covers t in [max(2, nt/10) dt, t_end]:
// the burn-in absorbs the corner layer shed by data that is only weakly
// compatible with the boundary rows. Past it the value tracks the solver's
// truncation error and shrinks at second order under grid refinement.
// phi_init must be strictly positive on the grid; if more than 20% of the
// transformed samples end up masked the solve aborts with NumericError.
BurgersSolution burgers_solve(const BurgersFamily& fam, const Expr& phi_init,
                              double t_end, std::size_t nx, std::size_t nt,
                              double threshold = 1e-3);

} // namespace colehopf::burgers
