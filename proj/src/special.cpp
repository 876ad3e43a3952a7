#include "colehopf/special.hpp"

#include "colehopf/errors.hpp"

#include <cmath>

namespace colehopf {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

} // namespace

Bessel1 modified_i1(double z) {
    // I1(z) = sum_m (z/2)^(2m+1) / (m! (m+1)!)
    if (z == 0.0) return {0.0, 0.5, 0.0};
    const double q = 0.25 * z * z;
    double term = 0.5 * z; // m = 0
    double s = term, s1 = 0.5; // s1 accumulates dI1/dz
    double dterm = 0.5;
    for (int m = 1; m < 80; ++m) {
        term *= q / (static_cast<double>(m) * (m + 1.0));
        // d/dz of the m-th term: (2m+1)/z times the term
        dterm = term * (2.0 * m + 1.0) / z;
        s += term;
        s1 += dterm;
        if (std::abs(term) < 1e-18 * std::abs(s) && std::abs(dterm) < 1e-18 * std::abs(s1))
            break;
    }
    Bessel1 out;
    out.f = s;
    out.df = s1;
    out.ddf = ((z * z + 1.0) * out.f - z * out.df) / (z * z);
    return out;
}

Bessel1 modified_k1(double z) {
    if (!(z > 0.0)) throw DomainError("modified Bessel K1 requires z > 0");
    // K1(z) = ln(z/2) I1(z) + 1/z - (z/4) S(w),  w = z^2/4,
    // S(w)  = sum_k [psi(k+1) + psi(k+2)] / (k! (k+1)!) w^k
    const double w = 0.25 * z * z;
    double psi1 = -kEulerGamma;        // psi(1)
    double psi2 = 1.0 - kEulerGamma;   // psi(2)
    double coef = 1.0;                 // 1 / (k! (k+1)!)
    double wk = 1.0;                   // w^k
    double S = 0.0, dS = 0.0;          // S and dS/dw
    for (int k = 0; k < 80; ++k) {
        const double c = (psi1 + psi2) * coef;
        const double term = c * wk;
        S += term;
        if (k >= 1) dS += c * static_cast<double>(k) * wk / w;
        if (k >= 2 && std::abs(term) < 1e-18 * std::abs(S)) break;
        psi1 += 1.0 / (k + 1.0);
        psi2 += 1.0 / (k + 2.0);
        coef /= (k + 1.0) * (k + 2.0);
        wk *= w;
    }
    const Bessel1 i1 = modified_i1(z);
    const double L = std::log(0.5 * z);
    Bessel1 out;
    out.f = L * i1.f + 1.0 / z - 0.25 * z * S;
    out.df = i1.f / z + L * i1.df - 1.0 / (z * z) - 0.25 * S - 0.125 * z * z * dS;
    out.ddf = ((z * z + 1.0) * out.f - z * out.df) / (z * z);
    return out;
}

} // namespace colehopf
