#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace colehopf {

// Sampled function data. Two layouts share the type:
//  - profile: `t` empty, rows[k][i] holds the k-th derivative at x[i]
//  - field:   rows[j][i] holds the value at (x[i], t[j]); the x-derivative
//    companions live in xderiv/xxderiv when a producer fills them in
struct GridFunction {
    std::vector<double> x;
    std::vector<double> t;
    std::vector<std::vector<double>> rows;
    std::vector<std::vector<double>> xderiv;
    std::vector<std::vector<double>> xxderiv;

    bool is_field() const { return !t.empty(); }
    std::size_t nx() const { return x.size(); }
    std::size_t nt() const { return t.size(); }
};

std::vector<double> uniform_grid(double a, double b, std::size_t n);

// First derivative of a uniformly sampled row, 4th order: central stencils
// inside, one-sided 5-point stencils at the two points nearest each edge.
// Needs at least 5 samples.
std::vector<double> derivative_row(const std::vector<double>& f, double dx);

// Union of symmetric intervals around detected zeros of a denominator.
struct PoleMask {
    double half_width = 0.0;
    std::vector<std::pair<double, double>> intervals; // sorted, disjoint

    void add_center(double c);
    bool covers(double x) const;
    bool empty() const { return intervals.empty(); }
    double fraction(const std::vector<double>& xs) const;
};

// Pointwise defect of a candidate solution against one equation, with norms
// taken over unmasked points only.
struct ResidualReport {
    std::string equation;
    double threshold = 0.0;
    std::vector<double> x;
    std::vector<double> residual;  // signed defect, aligned with x
    std::vector<bool> masked;
    double linf = 0.0;
    double l2 = 0.0;
    double mask_fraction = 0.0;
    std::size_t n_used = 0;
    bool pass = false;
};

ResidualReport make_residual_report(std::string equation, double threshold,
                                    std::vector<double> x, std::vector<double> residual,
                                    std::vector<bool> masked);

} // namespace colehopf
