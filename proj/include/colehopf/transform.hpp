#pragma once

#include "colehopf/expr.hpp"
#include "colehopf/grid.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace colehopf {

// Linear side of a linearization: either phi'' = K phi' + U phi (ode) or
// phi_t = M phi_xx (heat).
struct LinearSpec {
    enum class Kind { ode, heat };
    Kind kind = Kind::ode;
    Expr potential;            // U
    std::optional<Expr> drift; // K, ode form only
    Expr diffusivity;          // M, heat form only
};

// Nonlinear side: which equation family the pair belongs to plus its named
// coefficient functions. `params` carries the numeric parameters the family
// was built from, so a pair round-trips through serialization.
struct NonlinearSpec {
    std::string family;
    std::vector<std::pair<std::string, Expr>> coeffs;
    Bindings params;
};

struct LinearizationPair {
    Expr P;
    Expr Q;
    LinearSpec linear;
    NonlinearSpec nonlinear;
};

struct TransformResult {
    std::vector<double> psi; // NaN where phi vanishes exactly
    PoleMask mask;
};

// psi_i = P(x_i) + Q(x_i) phi'_i / phi_i. Points with |phi_i| below
// 1e-8·max|phi| seed mask intervals of half-width two grid steps; if the mask
// swallows the whole grid the profile is useless and we give up.
TransformResult apply_transform(const Expr& P, const Expr& Q,
                                const std::vector<double>& x,
                                const std::vector<double>& phi,
                                const std::vector<double>& dphi,
                                const Bindings& bound = {});

struct TransformedProfile {
    GridFunction g; // rows: psi, psi', psi''
    PoleMask mask;
};

// Like apply_transform, but also propagates psi' and psi'' analytically: with
// r = phi'/phi the linear equation gives r' = U + K r - r^2, so
//   psi'  = P' + Q' r + Q r'
//   psi'' = P'' + Q'' r + 2 Q' r' + Q (U' + K' r + K r' - 2 r r').
// No finite differencing of the phi samples is involved.
TransformedProfile psi_with_derivatives(const Expr& P, const Expr& Q,
                                        const LinearSpec& linear,
                                        const std::vector<double>& x,
                                        const std::vector<double>& phi,
                                        const std::vector<double>& dphi,
                                        const Bindings& bound = {});

// Map linear initial values to nonlinear ones at the anchor x0. With
// r = phi0'/phi0:  psi = P + Q r,  psi' = P' + Q' r + Q (U + K r - r^2).
// The second component uses the linear equation for phi'', never finite
// differences.
std::array<double, 2> ic_from_phi(const Expr& P, const Expr& Q, double phi0,
                                  double dphi0, const LinearSpec& linear, double x0,
                                  const Bindings& bound = {});

} // namespace colehopf
