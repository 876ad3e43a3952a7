#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace colehopf {

// Adaptive Dormand-Prince 5(4) with dense output. Forward integration only.
struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.0;          // 0: limited only by the interval
    std::size_t max_steps = 10'000'000;
    double blowup = 0.0;            // 0: disabled; else stop once |y|_inf crosses it
};

using OdeRhs = std::function<void(double x, const double* y, double* dy)>;

// Dense-output record for one accepted step: u(theta) on [x0, x0+h].
struct DenseStep {
    double x0 = 0.0, h = 0.0;
    std::vector<double> r; // 5 blocks of dim coefficients
    void eval(double x, double* out, std::size_t dim) const;
};

// Full trajectory with stored dense output; suitable for small systems that
// must be queried at arbitrary points afterwards.
struct OdeSolution {
    std::size_t dim = 0;
    double start = 0.0, end = 0.0;
    bool blew_up = false;
    std::vector<double> y_end;
    std::vector<DenseStep> steps;
    std::size_t n_accepted = 0, n_rejected = 0;

    void eval(double x, double* out) const;
    double eval1(double x) const; // first component
};

OdeSolution integrate_dense(const OdeRhs& rhs, std::size_t dim, double a, double b,
                            std::span<const double> y0, const OdeOptions& opt = {});

// Streaming variant: fills component-major rows at the requested ascending
// sample points without retaining the trajectory. On blow-up the remaining
// samples are NaN and `n_complete` marks how many were filled.
struct SampleResult {
    std::vector<std::vector<double>> rows; // rows[c][k], c < dim
    bool blew_up = false;
    double stop = 0.0;
    std::vector<double> y_end;
    std::size_t n_complete = 0;
    std::size_t n_accepted = 0, n_rejected = 0;
};

SampleResult integrate_samples(const OdeRhs& rhs, std::size_t dim, double a, double b,
                               std::span<const double> y0,
                               const std::vector<double>& sample_xs,
                               const OdeOptions& opt = {});

} // namespace colehopf
