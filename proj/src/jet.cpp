#include "colehopf/jet.hpp"

#include "colehopf/errors.hpp"

#include <cmath>
#include <cstdlib>

namespace colehopf {

namespace {

constexpr double kBinom[5][5] = {
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 2, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {1, 4, 6, 4, 1},
};

int join_order(const Jet& a, const Jet& b) {
    return a.order < b.order ? a.order : b.order;
}

// Faa di Bruno to order 4. f[k] is the k-th derivative of the outer function
// evaluated at g.d[0]; g supplies the raw inner derivatives.
Jet compose(const std::array<double, 5>& f, const Jet& g) {
    Jet h;
    h.order = g.order;
    const double g1 = g.d[1], g2 = g.d[2], g3 = g.d[3], g4 = g.d[4];
    h.d[0] = f[0];
    if (h.order >= 1) h.d[1] = f[1] * g1;
    if (h.order >= 2) h.d[2] = f[2] * g1 * g1 + f[1] * g2;
    if (h.order >= 3) h.d[3] = f[3] * g1 * g1 * g1 + 3.0 * f[2] * g1 * g2 + f[1] * g3;
    if (h.order >= 4)
        h.d[4] = f[4] * g1 * g1 * g1 * g1 + 6.0 * f[3] * g1 * g1 * g2 +
                 f[2] * (3.0 * g2 * g2 + 4.0 * g1 * g3) + f[1] * g4;
    return h;
}

} // namespace

Jet Jet::constant(double value, int order) {
    Jet j;
    j.order = order;
    j.d[0] = value;
    return j;
}

Jet Jet::variable(double value, int order) {
    Jet j;
    j.order = order;
    j.d[0] = value;
    if (order >= 1) j.d[1] = 1.0;
    return j;
}

Jet jadd(const Jet& a, const Jet& b) {
    Jet h;
    h.order = join_order(a, b);
    for (int n = 0; n <= h.order; ++n) h.d[n] = a.d[n] + b.d[n];
    return h;
}

Jet jsub(const Jet& a, const Jet& b) {
    Jet h;
    h.order = join_order(a, b);
    for (int n = 0; n <= h.order; ++n) h.d[n] = a.d[n] - b.d[n];
    return h;
}

Jet jneg(const Jet& a) {
    Jet h;
    h.order = a.order;
    for (int n = 0; n <= h.order; ++n) h.d[n] = -a.d[n];
    return h;
}

Jet jscale(const Jet& a, double c) {
    Jet h;
    h.order = a.order;
    for (int n = 0; n <= h.order; ++n) h.d[n] = c * a.d[n];
    return h;
}

Jet jmul(const Jet& a, const Jet& b) {
    Jet h;
    h.order = join_order(a, b);
    for (int n = 0; n <= h.order; ++n) {
        double s = 0.0;
        for (int k = 0; k <= n; ++k) s += kBinom[n][k] * a.d[k] * b.d[n - k];
        h.d[n] = s;
    }
    return h;
}

Jet jdiv(const Jet& a, const Jet& b) {
    if (b.d[0] == 0.0) throw DomainError("division by zero");
    Jet h;
    h.order = join_order(a, b);
    for (int n = 0; n <= h.order; ++n) {
        double s = a.d[n];
        for (int k = 0; k < n; ++k) s -= kBinom[n][k] * h.d[k] * b.d[n - k];
        h.d[n] = s / b.d[0];
    }
    return h;
}

Jet jpow_int(const Jet& a, long long n) {
    if (n < 0) return jdiv(Jet::constant(1.0, a.order), jpow_int(a, -n));
    Jet result = Jet::constant(1.0, a.order);
    Jet base = a;
    unsigned long long m = static_cast<unsigned long long>(n);
    while (m > 0) {
        if (m & 1ull) result = jmul(result, base);
        base = jmul(base, base);
        m >>= 1;
    }
    return result;
}

Jet jpow_real(const Jet& a, double e) {
    const double u = a.d[0];
    if (u <= 0.0) throw DomainError("non-integer power of a non-positive base");
    std::array<double, 5> f{};
    double c = 1.0, p = std::pow(u, e);
    for (int k = 0; k <= 4; ++k) {
        f[k] = c * p;
        c *= (e - k);
        p /= u;
    }
    return compose(f, a);
}

Jet jsin(const Jet& u) {
    const double s = std::sin(u.d[0]), c = std::cos(u.d[0]);
    return compose({s, c, -s, -c, s}, u);
}

Jet jcos(const Jet& u) {
    const double s = std::sin(u.d[0]), c = std::cos(u.d[0]);
    return compose({c, -s, -c, s, c}, u);
}

Jet jtan(const Jet& u) {
    if (std::abs(std::cos(u.d[0])) < 1e-12) throw DomainError("tangent pole");
    const double t = std::tan(u.d[0]);
    const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2, t5 = t4 * t;
    return compose({t,
                    1.0 + t2,
                    2.0 * t + 2.0 * t3,
                    2.0 + 8.0 * t2 + 6.0 * t4,
                    16.0 * t + 40.0 * t3 + 24.0 * t5},
                   u);
}

Jet jexp(const Jet& u) {
    const double e = std::exp(u.d[0]);
    return compose({e, e, e, e, e}, u);
}

Jet jln(const Jet& u) {
    const double v = u.d[0];
    if (v <= 0.0) throw DomainError("logarithm of a non-positive number");
    const double i = 1.0 / v, i2 = i * i;
    return compose({std::log(v), i, -i2, 2.0 * i2 * i, -6.0 * i2 * i2}, u);
}

Jet jsinh(const Jet& u) {
    const double s = std::sinh(u.d[0]), c = std::cosh(u.d[0]);
    return compose({s, c, s, c, s}, u);
}

Jet jcosh(const Jet& u) {
    const double s = std::sinh(u.d[0]), c = std::cosh(u.d[0]);
    return compose({c, s, c, s, c}, u);
}

Jet jtanh(const Jet& u) {
    const double t = std::tanh(u.d[0]);
    const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2, t5 = t4 * t;
    return compose({t,
                    1.0 - t2,
                    -2.0 * t + 2.0 * t3,
                    -2.0 + 8.0 * t2 - 6.0 * t4,
                    16.0 * t - 40.0 * t3 + 24.0 * t5},
                   u);
}

Jet jsqrt(const Jet& u) {
    const double v = u.d[0];
    if (v < 0.0) throw DomainError("square root of a negative number");
    if (v == 0.0) {
        if (u.order > 0) throw DomainError("square root derivative at zero");
        return Jet::constant(0.0, 0);
    }
    const double r = std::sqrt(v), i = 1.0 / v;
    return compose({r,
                    0.5 * r * i,
                    -0.25 * r * i * i,
                    0.375 * r * i * i * i,
                    -0.9375 * r * i * i * i * i},
                   u);
}

} // namespace colehopf
