#pragma once

#include "colehopf/expr.hpp"
#include "colehopf/grid.hpp"
#include "colehopf/transform.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace colehopf::oracle {

// Direct integration of the nonlinear equation named by spec.family:
//   vdp         psi'' = mu (beta - psi^2) psi' - alpha psi
//                       + v psi^2 + h psi^3 + g psi^4 + f
//               params mu, beta, alpha; coeff Exprs v, h, g, f
//   lienard     psi'' + (c2 psi^2 + c1 psi + c0) psi'
//                      + b4 psi^4 + ... + b1 psi + b0 = 0
//               coeff Exprs c0..c2, b0..b4
//   painleve3   psi'' = psi'^2/psi - psi'/x + (alpha psi^2 + beta)/x
//                       + gamma psi^3 + delta/psi
//               params alpha, beta, gamma, delta
//   convective  psi'' = S + (V + F psi') psi + W psi^2
//               coeff Exprs F, W, V, S
// The forms are written out here on purpose: the oracle never reuses the
// composed coefficient machinery of the family modules, only plain pointwise
// evaluation of the supplied Exprs.

struct OdeOracleResult {
    GridFunction g; // rows: psi, psi', psi''; NaN past a blow-up
    bool blew_up = false;
    double stop = 0.0; // last x reached (== b when the run completes)
};

OdeOracleResult integrate_ode(const NonlinearSpec& spec, std::array<double, 2> ic,
                              double a, double b, std::size_t n, double tol = 1e-9);

struct FieldOracleResult {
    GridFunction g; // field rows over the returned t axis
    bool blew_up = false;
    double stop = 0.0; // last t reached
};

// Method-of-lines integration of
//   psi_t = M psi_xx + H psi psi_x + V psi + W psi^2
// with second-order centered differences on nx points and Dirichlet traces
// left(t), right(t) supplied by the caller (typically the transformed
// solution's boundary values). psi0 must be sampled on the same nx-grid.
FieldOracleResult integrate_pde_mol(const Expr& M, const Expr& H, const Expr& V,
                                    const Expr& W, const std::vector<double>& psi0,
                                    double a, double b, double t_end, std::size_t nx,
                                    const std::function<double(double)>& left,
                                    const std::function<double(double)>& right,
                                    std::size_t nt_out = 11, double tol = 1e-8,
                                    const Bindings& bound = {});

// Pointwise defect of a candidate against the family equation. Profile
// candidates need rows psi, psi', psi''; field candidates need only the value
// rows (x- and t-derivatives are taken by high-order differencing, and the
// reported per-x residual is the worst over t). Points covered by `mask` or
// with non-finite values are excluded from the norms.
ResidualReport residual_report(const NonlinearSpec& spec, const GridFunction& candidate,
                               double threshold, const PoleMask& mask = {},
                               const Bindings& bound = {});

// Zeros of row 0: grid values below 1e-8·max|f| plus sign changes, the latter
// pinned down by bisection on the linear interpolant to width 1e-10.
PoleMask pole_detect(const GridFunction& g);

} // namespace colehopf::oracle
