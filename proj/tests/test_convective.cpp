#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "colehopf/convective.hpp"
#include "colehopf/errors.hpp"
#include "colehopf/lincore.hpp"
#include "colehopf/oracle.hpp"
#include "colehopf/rk45.hpp"
#include "colehopf/transform.hpp"

#include <array>
#include <cmath>
#include <vector>

using namespace colehopf;
using namespace colehopf::convective;

namespace {

// the constant-coefficient system F = 1, W = a, V = 4a^2, S = 0 at a = 1,
// whose potential is U0' e^{-2x} shifted by a^2
ConvectiveSystem textbook(double U0 = 2.0) {
    return conv_forward(constant(1.0), constant(1.0), constant(4.0), constant(0.0), U0, 0.0,
                        0.0, 2.0);
}

} // namespace

TEST_CASE("constant coefficients hit the exponential-potential fast path") {
    auto sys = textbook();
    CHECK(sys.constraint_norm == 0.0);
    REQUIRE(sys.U.has_value());

    for (double x : uniform_grid(0.0, 2.0, 9)) {
        CHECK(eval(sys.Q, x) == doctest::Approx(-2.0).epsilon(1e-15));
        CHECK(eval(sys.P, x) == doctest::Approx(-2.0).epsilon(1e-15));
        const auto [u, du] = sys.potential_at(x);
        CHECK(u == doctest::Approx(1.0 + std::exp(-2.0 * x)).epsilon(1e-14));
        CHECK(du == doctest::Approx(-2.0 * std::exp(-2.0 * x)).epsilon(1e-13));
        for (double ai : conv_ai_residuals(sys, x)) CHECK(std::abs(ai) <= 1e-12);
    }

    // the anchor value is honored and another U0 shifts only the decaying part
    auto other = textbook(5.0);
    CHECK(other.potential_at(0.0)[0] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(other.potential_at(2.0)[0] ==
          doctest::Approx(1.0 + 4.0 * std::exp(-4.0)).epsilon(1e-13));
}

TEST_CASE("zero quadratic term collapses to the trivial potential") {
    auto sys = conv_forward(constant(1.0), constant(0.0), constant(0.0), constant(0.0), 0.0,
                            0.0, 0.0, 2.0);
    REQUIRE(sys.U.has_value());
    for (double x : {0.0, 0.7, 2.0}) {
        CHECK(eval(sys.P, x) == 0.0);
        CHECK(sys.potential_at(x)[0] == 0.0);
        for (double ai : conv_ai_residuals(sys, x)) CHECK(std::abs(ai) <= 1e-15);
    }
}

TEST_CASE("rejections: obstruction, vanishing F, bad anchor") {
    // V = 0 where the pairing demands 4W^2/F^2 = 4
    CHECK_THROWS_AS(conv_forward(constant(1.0), constant(1.0), constant(0.0), constant(0.0),
                                 1.0, 0.0, 0.0, 2.0),
                    ValidationError);
    CHECK(std::abs(eval(forward_constraint(constant(1.0), constant(1.0), constant(0.0)), 0.5) +
                   4.0) <= 1e-15);

    // F crosses zero inside the domain
    CHECK_THROWS_AS(conv_forward(variable(), constant(0.0), constant(0.0), constant(0.0), 1.0,
                                 0.0, -1.0, 1.0),
                    DomainError);

    CHECK_THROWS_AS(conv_forward(constant(1.0), constant(1.0), constant(4.0), constant(0.0),
                                 1.0, 5.0, 0.0, 2.0),
                    ConfigError);
}

TEST_CASE("matching coefficients respond linearly to coefficient tampering") {
    auto sys = textbook();
    auto bent = sys;
    bent.V = sys.V + constant(1.0);

    for (double x : {0.3, 1.1, 1.9}) {
        const auto good = conv_ai_residuals(sys, x);
        const auto bad = conv_ai_residuals(bent, x);
        // a1 picks up -(delta V) Q = +2, a0 picks up -(delta V) P = +2
        CHECK(bad[1] - good[1] == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(bad[0] - good[0] == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(bad[2] == doctest::Approx(good[2]).epsilon(1e-15));
        CHECK(bad[3] == doctest::Approx(good[3]).epsilon(1e-15));
    }
}

TEST_CASE("reverse direction reproduces hand-computed coefficient sets") {
    Expr x = variable();

    SUBCASE("constant transform data, exponential potential") {
        auto sys = conv_reverse(constant(-2.0), constant(-2.0),
                                exp(constant(-2.0) * x) + 1.0, 0.0, 2.0);
        CHECK(sys.constraint_norm <= 1e-12);
        for (double xi : uniform_grid(0.0, 2.0, 9)) {
            CHECK(eval(sys.F, xi) == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(eval(sys.W, xi) == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(eval(sys.V, xi) == doctest::Approx(4.0).epsilon(1e-13));
            CHECK(std::abs(eval(sys.S, xi)) <= 1e-13);
        }
    }

    SUBCASE("flat P wipes the quadratic and linear terms") {
        auto sys = conv_reverse(constant(0.0), constant(-2.0), constant(0.8), 0.0, 2.0);
        for (double xi : {0.0, 1.0, 2.0}) {
            CHECK(eval(sys.F, xi) == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(eval(sys.W, xi) == 0.0);
            CHECK(eval(sys.V, xi) == 0.0);
            CHECK(std::abs(eval(sys.S, xi)) <= 1e-15);
        }
    }

    SUBCASE("linear P against a flat potential") {
        auto sys = conv_reverse(x, constant(-2.0), constant(0.0), 0.0, 2.0);
        for (double xi : uniform_grid(0.0, 2.0, 9)) {
            CHECK(eval(sys.F, xi) == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(eval(sys.W, xi) == doctest::Approx(-0.5 * xi).epsilon(1e-14));
            CHECK(eval(sys.V, xi) == doctest::Approx(xi * xi - 1.0).epsilon(1e-13));
            CHECK(eval(sys.S, xi) == doctest::Approx(-0.5 * xi * xi * xi).epsilon(1e-13));
        }
        for (double xi : {0.25, 1.5}) {
            for (double ai : conv_ai_residuals(sys, xi)) CHECK(std::abs(ai) <= 1e-13);
        }
    }

    SUBCASE("Q with a zero is refused") {
        CHECK_THROWS_AS(conv_reverse(constant(0.0), x - 1.0, constant(0.0), 0.0, 2.0),
                        DomainError);
    }
}

TEST_CASE("round trips are stable in both directions") {
    Expr x = variable();

    SUBCASE("synthesize then recover") {
        auto rev = conv_reverse(x, constant(-2.0), constant(0.0), 0.0, 2.0);
        auto fwd = conv_forward(rev.F, rev.W, rev.V, rev.S, 0.0, 1.0, 0.0, 2.0);
        for (double xi : uniform_grid(0.0, 2.0, 21)) {
            CHECK(std::abs(eval(fwd.P, xi) - xi) <= 1e-10);
            CHECK(std::abs(eval(fwd.Q, xi) + 2.0) <= 1e-10);
            CHECK(std::abs(fwd.potential_at(xi)[0]) <= 1e-10);
        }
    }

    SUBCASE("recover then synthesize") {
        auto fwd = textbook();
        auto rev = conv_reverse(fwd.P, fwd.Q, *fwd.U, 0.0, 2.0);
        for (double xi : uniform_grid(0.0, 2.0, 21)) {
            CHECK(std::abs(eval(rev.F, xi) - 1.0) <= 1e-10);
            CHECK(std::abs(eval(rev.W, xi) - 1.0) <= 1e-10);
            CHECK(std::abs(eval(rev.V, xi) - 4.0) <= 1e-10);
            CHECK(std::abs(eval(rev.S, xi)) <= 1e-10);
        }
    }
}

TEST_CASE("x-dependent coefficients take the integrated-potential path") {
    Expr x = variable();
    Expr F = 1.0 + 0.25 * sin(x);
    Expr W = 0.3 * cos(x);
    // pick V so the obstruction cancels identically
    Expr V = constant(0.0) - (forward_constraint(F, W, constant(0.0)));
    Expr S = 0.1 * x;

    auto sys = conv_forward(F, W, V, S, 0.7, 1.0, 0.0, 2.0, 801);
    CHECK(!sys.U.has_value());
    CHECK(sys.constraint_norm <= 1e-14);
    CHECK(sys.potential_at(1.0)[0] == doctest::Approx(0.7).epsilon(1e-12));

    // on profile nodes the interpolant is exact, so only integrator error shows
    const auto& xs = sys.U_profile.x;
    for (std::size_t i = 40; i + 40 < xs.size(); i += 80) {
        const auto ai = conv_ai_residuals(sys, xs[i]);
        CHECK(std::abs(ai[0]) <= 1e-10);
        CHECK(std::abs(ai[1]) <= 1e-12);
        CHECK(std::abs(ai[2]) <= 1e-14);
        CHECK(std::abs(ai[3]) <= 1e-15);
    }
    // between nodes the cubic interpolant carries its own (small) error
    for (double xi : {0.31640625, 0.94921875, 1.64453125}) {
        CHECK(std::abs(conv_ai_residuals(sys, xi)[0]) <= 1e-6);
    }
}

TEST_CASE("damping elimination: transformed coefficients match hand results") {
    Expr x = variable();

    SUBCASE("no damping is the identity") {
        auto red = conv_reduce(constant(0.0), constant(1.0), constant(4.0), constant(1.0),
                               constant(0.0), 0.0, 0.0, 2.0);
        REQUIRE(red.p_exact.has_value());
        for (double xi : {0.0, 0.9, 2.0}) {
            CHECK(red.p_at(xi)[0] == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(red.p_at(xi)[1] == 0.0);
            CHECK(eval(red.Vt, xi) == doctest::Approx(4.0).epsilon(1e-15));
            CHECK(red.Ft(xi) == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(red.Wt(xi) == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(red.St(xi) == 0.0);
        }
    }

    SUBCASE("constant damping gives an exponential weight") {
        auto red = conv_reduce(constant(-2.0), constant(1.0), constant(4.0), constant(1.0),
                               constant(0.0), 0.0, 0.0, 2.0);
        REQUIRE(red.p_exact.has_value());
        CHECK(red.p_at(1.5)[0] == doctest::Approx(std::exp(1.5)).epsilon(1e-13));
        CHECK(red.p_at(1.5)[1] == doctest::Approx(std::exp(1.5)).epsilon(1e-13));
        for (double xi : {0.0, 1.0, 2.0})
            CHECK(eval(red.Vt, xi) == doctest::Approx(5.0).epsilon(1e-14));
    }

    SUBCASE("x-dependent damping integrates to a linear weight") {
        Expr V1 = constant(-2.0) / x;
        auto red = conv_reduce(V1, exp(x), x * x, constant(0.5), x, 1.0, 1.0, 2.0);
        CHECK(!red.p_exact.has_value());
        for (double xi : uniform_grid(1.0, 2.0, 11)) {
            CHECK(red.p_at(xi)[0] == doctest::Approx(xi).epsilon(1e-10));
            CHECK(red.p_at(xi)[1] == doctest::Approx(1.0).epsilon(1e-9));
            // V1^2/4 - V1'/2 cancels for this weight
            CHECK(eval(red.Vt, xi) == doctest::Approx(xi * xi).epsilon(1e-13));
            CHECK(red.Ft(xi) == doctest::Approx(std::exp(xi) / xi).epsilon(1e-10));
            CHECK(red.Wt(xi) ==
                  doctest::Approx(0.5 / xi - std::exp(xi) / (xi * xi)).epsilon(1e-9));
            CHECK(red.St(xi) == doctest::Approx(xi * xi).epsilon(1e-10));
        }
    }
}

TEST_CASE("damped solutions map to the undamped family under the weight") {
    Expr x = variable();
    Expr V1 = constant(-2.0) / x;
    const double a = 1.0, b = 2.0;
    auto red = conv_reduce(V1, constant(1.0), constant(4.0), constant(1.0), constant(0.0),
                           a, a, b);

    // integrate the damped equation directly
    const auto rhs = [&](double xi, const double* y, double* dy) {
        dy[0] = y[1];
        dy[1] = (4.0 + y[1]) * y[0] + eval(V1, xi) * y[1] + y[0] * y[0];
    };
    const double ic[2] = {0.3, -0.1};
    auto sol = integrate_dense(rhs, 2, a, b, ic);
    REQUIRE(!sol.blew_up);

    double worst = 0.0;
    for (double xi : red.p.x) {
        double y[2];
        sol.eval(xi, y);
        double dy[2];
        rhs(xi, y, dy);
        const auto [pv, dpv] = red.p_at(xi);
        const double ddp = pv * (eval(V1 * V1, xi) / 4.0 - eval(diff(V1), xi) / 2.0);
        const double xi0 = pv * y[0];
        const double xi1 = dpv * y[0] + pv * y[1];
        const double xi2 = ddp * y[0] + 2.0 * dpv * y[1] + pv * dy[1];
        const double defect =
            xi2 - (red.St(xi) + (eval(red.Vt, xi) + red.Ft(xi) * xi1) * xi0 +
                   red.Wt(xi) * xi0 * xi0);
        worst = std::max(worst, std::abs(defect));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("catalog profile agrees with direct integration of the paired equation") {
    auto sys = textbook();

    Bindings params;
    params.set("C", 1.0);
    params.set("a", 1.0);
    params.set("C1", 1.0);
    params.set("C2", 0.0);
    auto entry = lincore::catalog_phi("bessel-convective", params, 0.0, 2.0);
    REQUIRE(entry.validated);

    const auto v0 = entry.eval(0.0);
    lincore::OdeSpec ode{*sys.U, {}, 0.0, 2.0};
    auto phi = lincore::solve_profile(ode, v0[0], v0[1], 201);
    double worst = 0.0;
    for (std::size_t i = 0; i < phi.x.size(); ++i) {
        const double want = entry.eval(phi.x[i])[0];
        worst = std::max(worst, std::abs(phi.rows[0][i] - want) / std::abs(want));
    }
    CHECK(worst <= 1e-8);

    Bindings mixed;
    mixed.set("C", 1.0);
    mixed.set("a", 1.0);
    mixed.set("C1", 0.4);
    mixed.set("C2", 0.6);
    auto entry2 = lincore::catalog_phi("bessel-convective", mixed, 0.5, 2.0);
    CHECK(entry2.validated);
}

TEST_CASE("transformed profile solves the nonlinear equation and matches the oracle") {
    auto sys = textbook();
    auto pr = sys.pair();

    Bindings params;
    params.set("C", 1.0);
    params.set("a", 1.0);
    params.set("C1", 1.0);
    params.set("C2", 0.0);
    auto entry = lincore::catalog_phi("bessel-convective", params, 0.0, 2.0);
    REQUIRE(entry.validated);

    auto xs = uniform_grid(0.0, 2.0, 161);
    std::vector<double> phi(xs.size()), dphi(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto v = entry.eval(xs[i]);
        phi[i] = v[0];
        dphi[i] = v[1];
    }
    auto prof = psi_with_derivatives(pr.P, pr.Q, pr.linear, xs, phi, dphi);
    REQUIRE(prof.mask.intervals.empty());

    for (std::size_t i = 0; i < xs.size(); i += 20)
        CHECK(prof.g.rows[0][i] ==
              doctest::Approx(-2.0 - 2.0 * dphi[i] / phi[i]).epsilon(1e-14));

    auto rep = oracle::residual_report(pr.nonlinear, prof.g, 1e-7, prof.mask);
    CHECK(rep.pass);
    CHECK(rep.linf <= 1e-7);

    // independent integration of the nonlinear equation from mapped data
    auto ic = ic_from_phi(pr.P, pr.Q, phi[0], dphi[0], pr.linear, 0.0);
    auto res = oracle::integrate_ode(pr.nonlinear, ic, 0.0, 1.5, 151, 1e-10);
    REQUIRE(!res.blew_up);
    auto xs2 = uniform_grid(0.0, 1.5, 151);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs2.size(); ++i) {
        const auto v = entry.eval(xs2[i]);
        const double want = -2.0 - 2.0 * v[1] / v[0];
        worst = std::max(worst,
                         std::abs(res.g.rows[0][i] - want) / std::max(1.0, std::abs(want)));
    }
    CHECK(worst <= 1e-6);

    // numeric-potential systems cannot produce a symbolic pair
    Expr x = variable();
    Expr F = 1.0 + 0.25 * sin(x);
    Expr W = 0.3 * cos(x);
    Expr V = constant(0.0) - (forward_constraint(F, W, constant(0.0)));
    auto numeric = conv_forward(F, W, V, constant(0.0), 0.7, 1.0, 0.0, 2.0);
    CHECK_THROWS_AS(numeric.pair(), ConfigError);
}
