#pragma once

#include <array>

namespace colehopf {

// A truncated Taylor jet: function value plus raw derivatives up to `order`
// at a single point. Order is capped at 4, which covers every derivative the
// coefficient formulas need (second derivatives of quantities that already
// contain second derivatives). The static cap keeps evaluation on the stack.
inline constexpr int kMaxJetOrder = 4;

struct Jet {
    int order = 0;
    std::array<double, kMaxJetOrder + 1> d{}; // d[n] = n-th derivative

    static Jet constant(double value, int order);
    static Jet variable(double value, int order); // d/dx x = 1

    double value() const { return d[0]; }
};

Jet jadd(const Jet& a, const Jet& b);
Jet jsub(const Jet& a, const Jet& b);
Jet jneg(const Jet& a);
Jet jmul(const Jet& a, const Jet& b);
Jet jdiv(const Jet& a, const Jet& b);   // throws DomainError on zero denominator
Jet jscale(const Jet& a, double c);

// Integer and real powers. The real branch requires a positive base.
Jet jpow_int(const Jet& a, long long n);
Jet jpow_real(const Jet& a, double e);

Jet jsin(const Jet& u);
Jet jcos(const Jet& u);
Jet jtan(const Jet& u);   // throws DomainError within 1e-12 of a pole
Jet jexp(const Jet& u);
Jet jln(const Jet& u);    // throws DomainError for u <= 0
Jet jsinh(const Jet& u);
Jet jcosh(const Jet& u);
Jet jtanh(const Jet& u);
Jet jsqrt(const Jet& u);  // throws DomainError for u < 0 (or u == 0 with order > 0)

} // namespace colehopf
