#pragma once

#include "colehopf/expr.hpp"
#include "colehopf/grid.hpp"
#include "colehopf/lincore.hpp"
#include "colehopf/transform.hpp"

#include <limits>

// Painleve III
//
//   psi'' = (psi')^2/psi - psi'/x + (alpha psi^2 + beta)/x + gamma psi^3
//           + delta/psi
//
// linearizes through psi = P + Q phi'/phi when delta is tied to the other
// three parameters. Q comes out constant (gamma Q^2 = 1) and P stays a free
// function; the drift K and potential U of phi'' = K phi' + U phi follow from
// P. All of it lives on x > 0 since the equation itself has 1/x terms.
namespace colehopf::painleve3 {

struct P3Config {
    double alpha, beta, gamma;
    double Q;     // gamma Q^2 = 1; positive root unless asked otherwise
    double delta; // -beta^2/(alpha Q + 2)^2, the linearizable value
    Expr P;
    Expr K, U;

    NonlinearSpec nonlinear() const;
    LinearizationPair pair() const;
};

// Build the linearization for a free profile P. Throws ConfigError when
// gamma <= 0 (no real Q) or alpha Q + 2 == 0 (delta undefined).
P3Config p3_linearize(double alpha, double beta, double gamma, const Expr& P,
                      bool negative_root = false);

// Pointwise defect of candidate samples (rows psi, psi', psi'') in the
// equation above. Points where psi vanishes, or that the caller's mask
// covers, are excluded. delta_override substitutes a different delta, which
// is how a perturbed parameter set gets tested against the same samples.
ResidualReport p3_residual(const P3Config& cfg, const GridFunction& candidate,
                           double threshold, const PoleMask& mask = {},
                           double delta_override = std::numeric_limits<double>::quiet_NaN());

// The three worked solution families for (alpha, beta, gamma) = (-1, 1, 1),
// revalidated against phi'' = K phi' + U phi on [0.5, 3]. Example 1 reads the
// cubic coefficients a, b, c, d from params.
lincore::ClosedFormEntry p3_example_phi(int example, const Bindings& params, double C1,
                                        double C2);

} // namespace colehopf::painleve3
