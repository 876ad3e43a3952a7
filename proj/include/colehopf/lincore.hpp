#pragma once

#include "colehopf/expr.hpp"
#include "colehopf/grid.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace colehopf::lincore {

// Linear profile problem phi'' = K phi' + U phi on [a, b]; K may be absent.
struct OdeSpec {
    Expr potential;             // U
    std::optional<Expr> drift;  // K
    double a = 0.0, b = 1.0;
};

// phi and phi' on a uniform n-point grid, integrated by adaptive RK45 with
// dense-output sampling.
GridFunction solve_profile(const OdeSpec& spec, double phi0, double dphi0, std::size_t n,
                           const Bindings& bound = {}, double rtol = 1e-10,
                           double atol = 1e-12);

enum class BcKind { dirichlet, neumann, logderiv };

// Boundary data as a function of t. `dirichlet` pins phi, `neumann` pins
// phi_x (4th-order one-sided stencil), `logderiv` pins phi_x - c(t)·phi = 0.
struct BoundaryCondition {
    BcKind kind = BcKind::dirichlet;
    Expr value;
};

struct HeatSpec {
    Expr diffusivity; // M(x) > 0
    double a = 0.0, b = 1.0;
    BoundaryCondition left, right;
};

// Crank-Nicolson in time with a backward-Euler startup over the first two
// intervals (damps ringing from data that is only weakly compatible with the
// boundary rows), second-order centered interior in space; boundary rows are
// algebraic and eliminated exactly to keep the system tridiagonal. Returns
// the field phi(x_i, t_j), j = 0..nt, with phi_x rows filled in.
GridFunction solve_heat(const HeatSpec& spec, const Expr& phi_init, double t_end,
                        std::size_t nx, std::size_t nt, const Bindings& bound = {});

// A closed-form linear-side solution candidate together with its recorded
// validation verdict. Failed entries keep their residual profile for reports
// and must never be used as solutions.
struct ClosedFormEntry {
    std::string name;
    std::string display;                                 // formula text
    std::function<std::array<double, 3>(double)> eval;   // phi, phi', phi''
    bool validated = false;
    std::string note;                                    // failure reason etc.
    double residual_linf = 0.0;                          // relative, see below
    std::vector<double> sample_x;
    std::vector<double> residual;                        // phi'' - K phi' - U phi
};

// Check an explicit form against phi'' = K phi' + U phi at `n` points of
// [spec.a, spec.b]; the gate is |defect| <= tol·(1 + |phi''|) pointwise.
ClosedFormEntry validate_closed_form(std::string name, std::string display,
                                     std::function<std::array<double, 3>(double)> eval,
                                     const OdeSpec& spec, const Bindings& bound = {},
                                     std::size_t n = 50, double tol = 1e-9);

// Named catalog of candidate closed forms; every entry is validated at call
// time on [a, b]. Unknown names raise ConfigError. Parameter names per entry
// are listed in the README.
ClosedFormEntry catalog_phi(const std::string& name, const Bindings& params, double a,
                            double b);
std::vector<std::string> catalog_names();

} // namespace colehopf::lincore
