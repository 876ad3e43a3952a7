#include "colehopf/rk45.hpp"

#include "colehopf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace colehopf {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Stepper {
    const OdeRhs& rhs;
    std::size_t dim;
    std::vector<double> y, ynew, ysti, k1, k2, k3, k4, k5, k6, k7;

    Stepper(const OdeRhs& f, std::size_t n) : rhs(f), dim(n) {
        for (auto* v : {&y, &ynew, &ysti, &k1, &k2, &k3, &k4, &k5, &k6, &k7}) v->resize(n);
    }

    // one trial step from (x, y, k1); fills ynew, k7 and returns the error norm
    double attempt(double x, double h) {
        for (std::size_t i = 0; i < dim; ++i) ysti[i] = y[i] + h * a21 * k1[i];
        rhs(x + c2 * h, ysti.data(), k2.data());
        for (std::size_t i = 0; i < dim; ++i)
            ysti[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(x + c3 * h, ysti.data(), k3.data());
        for (std::size_t i = 0; i < dim; ++i)
            ysti[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(x + c4 * h, ysti.data(), k4.data());
        for (std::size_t i = 0; i < dim; ++i)
            ysti[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(x + c5 * h, ysti.data(), k5.data());
        for (std::size_t i = 0; i < dim; ++i)
            ysti[i] = y[i] +
                      h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                           a65 * k5[i]);
        rhs(x + h, ysti.data(), k6.data());
        for (std::size_t i = 0; i < dim; ++i)
            ynew[i] = y[i] +
                      h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                           a76 * k6[i]);
        rhs(x + h, ynew.data(), k7.data());

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double sc =
                atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k7[i]);
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / static_cast<double>(dim));
        return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
    }

    void dense_coeffs(double h, std::vector<double>& r) const {
        r.resize(5 * dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const double dy = ynew[i] - y[i];
            const double bspl = h * k1[i] - dy;
            r[i] = y[i];
            r[dim + i] = dy;
            r[2 * dim + i] = bspl;
            r[3 * dim + i] = dy - h * k7[i] - bspl;
            r[4 * dim + i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                  d6 * k6[i] + d7 * k7[i]);
        }
    }

    double rtol = 1e-10, atol = 1e-12;
};

void dense_eval(const std::vector<double>& r, std::size_t dim, double theta, double* out) {
    const double t1 = 1.0 - theta;
    for (std::size_t i = 0; i < dim; ++i) {
        out[i] = r[i] +
                 theta * (r[dim + i] +
                          t1 * (r[2 * dim + i] +
                                theta * (r[3 * dim + i] + t1 * r[4 * dim + i])));
    }
}

double hinit(const OdeRhs& rhs, std::size_t dim, double x0, const std::vector<double>& y0,
             const std::vector<double>& f0, double rtol, double atol, double hmax) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double sc = atol + rtol * std::abs(y0[i]);
        dnf += (f0[i] / sc) * (f0[i] / sc);
        dny += (y0[i] / sc) * (y0[i] / sc);
    }
    double h;
    if (dnf <= 1e-10 || dny <= 1e-10) {
        h = 1e-6;
    } else {
        h = 0.01 * std::sqrt(dny / dnf);
    }
    h = std::min(h, hmax);

    std::vector<double> y1(dim), f1(dim);
    for (std::size_t i = 0; i < dim; ++i) y1[i] = y0[i] + h * f0[i];
    rhs(x0 + h, y1.data(), f1.data());
    double der2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double sc = atol + rtol * std::abs(y0[i]);
        der2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
    }
    der2 = std::sqrt(der2) / h;

    const double der12 = std::max(std::sqrt(dnf), der2);
    double h1;
    if (der12 <= 1e-15) {
        h1 = std::max(1e-6, h * 1e-3);
    } else {
        h1 = std::pow(0.01 / der12, 0.2);
    }
    return std::min({100.0 * h, h1, hmax});
}

// Shared driver; per accepted step the callback receives the dense record and
// may truncate the run (used for blow-up refinement and for sampling).
struct StepRecord {
    double x0, h;
    const std::vector<double>* r;
};

template <typename OnStep>
void drive(const OdeRhs& rhs, std::size_t dim, double a, double b,
           std::span<const double> y0, const OdeOptions& opt, Stepper& st, OnStep&& on_step,
           bool& blew_up, double& x_stop, std::vector<double>& y_stop,
           std::size_t& n_accepted, std::size_t& n_rejected) {
    if (!(b > a)) throw ConfigError("integration interval must satisfy a < b");
    if (y0.size() != dim) throw ConfigError("initial state size mismatch");

    st.rtol = opt.rtol;
    st.atol = opt.atol;
    std::copy(y0.begin(), y0.end(), st.y.begin());

    const double hmax = opt.max_step > 0.0 ? opt.max_step : b - a;
    double x = a;
    rhs(x, st.y.data(), st.k1.data());
    double h = hinit(rhs, dim, x, st.y, st.k1, opt.rtol, opt.atol, hmax);

    constexpr double expo1 = 0.2 - 0.04 * 0.75;
    constexpr double safe = 0.9, facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
    double facold = 1e-4;
    bool reject = false;
    bool last = false;
    std::vector<double> r, probe(dim);

    std::size_t steps = 0;
    blew_up = false;
    while (x < b) {
        if (++steps > opt.max_steps) throw NumericError("too many integration steps");
        if (0.1 * h <= std::abs(x) * 2.3e-16)
            throw NumericError("step size underflow at x = " + std::to_string(x));
        if (x + 1.0001 * h > b) {
            h = b - x;
            last = true;
        } else {
            last = false;
        }

        const double err = st.attempt(x, h);
        const double fac11 = std::pow(err, expo1);
        double fac = fac11 / std::pow(facold, 0.04);
        fac = std::max(facc2, std::min(facc1, fac / safe));
        if (err <= 1.0) {
            facold = std::max(err, 1e-4);
            double hnew = h / fac;

            st.dense_coeffs(h, r);
            double theta_cap = 1.0;
            if (opt.blowup > 0.0) {
                double mx = 0.0;
                for (std::size_t i = 0; i < dim; ++i)
                    mx = std::max(mx, std::abs(st.ynew[i]));
                if (mx > opt.blowup || !std::isfinite(mx)) {
                    // bisect the first crossing of the threshold inside the step
                    double lo = 0.0, hi = 1.0;
                    for (int it = 0; it < 100 && (hi - lo) * h > 1e-12; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        dense_eval(r, dim, mid, probe.data());
                        double pm = 0.0;
                        for (std::size_t i = 0; i < dim; ++i)
                            pm = std::max(pm, std::abs(probe[i]));
                        if (pm > opt.blowup || !std::isfinite(pm)) {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    theta_cap = lo;
                    blew_up = true;
                }
            }

            on_step(StepRecord{x, h, &r}, theta_cap);

            if (blew_up) {
                x_stop = x + theta_cap * h;
                y_stop.resize(dim);
                dense_eval(r, dim, theta_cap, y_stop.data());
                ++n_accepted;
                return;
            }

            std::swap(st.y, st.ynew);
            std::swap(st.k1, st.k7); // FSAL
            x = last ? b : x + h;
            ++n_accepted;
            if (reject) hnew = std::min(hnew, h);
            reject = false;
            h = std::min(hnew, hmax);
        } else {
            h = h / std::min(facc1, fac11 / safe);
            reject = true;
            ++n_rejected;
        }
    }
    x_stop = b;
    y_stop = st.y;
}

} // namespace

void DenseStep::eval(double x, double* out, std::size_t dim) const {
    const double theta = (x - x0) / h;
    dense_eval(r, dim, theta, out);
}

void OdeSolution::eval(double x, double* out) const {
    if (steps.empty()) throw NumericError("empty trajectory");
    // right-most step whose interval contains x (clamped to the span covered)
    auto it = std::upper_bound(steps.begin(), steps.end(), x,
                               [](double v, const DenseStep& s) { return v < s.x0; });
    if (it != steps.begin()) --it;
    it->eval(x, out, dim);
}

double OdeSolution::eval1(double x) const {
    std::vector<double> buf(dim);
    eval(x, buf.data());
    return buf[0];
}

OdeSolution integrate_dense(const OdeRhs& rhs, std::size_t dim, double a, double b,
                            std::span<const double> y0, const OdeOptions& opt) {
    Stepper st(rhs, dim);
    OdeSolution sol;
    sol.dim = dim;
    sol.start = a;
    auto on_step = [&](const StepRecord& rec, double theta_cap) {
        DenseStep ds;
        ds.x0 = rec.x0;
        ds.h = rec.h;
        ds.r = *rec.r;
        sol.steps.push_back(std::move(ds));
        (void)theta_cap;
    };
    drive(rhs, dim, a, b, y0, opt, st, on_step, sol.blew_up, sol.end, sol.y_end,
          sol.n_accepted, sol.n_rejected);
    return sol;
}

SampleResult integrate_samples(const OdeRhs& rhs, std::size_t dim, double a, double b,
                               std::span<const double> y0,
                               const std::vector<double>& sample_xs,
                               const OdeOptions& opt) {
    for (std::size_t k = 0; k + 1 < sample_xs.size(); ++k)
        if (!(sample_xs[k] < sample_xs[k + 1]))
            throw ConfigError("sample points must be strictly increasing");
    if (!sample_xs.empty() && (sample_xs.front() < a || sample_xs.back() > b))
        throw ConfigError("sample points must lie inside the integration interval");

    SampleResult out;
    out.rows.assign(dim, std::vector<double>(sample_xs.size(),
                                             std::numeric_limits<double>::quiet_NaN()));
    std::size_t next = 0;
    std::vector<double> buf(dim);

    // samples that coincide with the start
    while (next < sample_xs.size() && sample_xs[next] <= a) {
        for (std::size_t c = 0; c < dim; ++c) out.rows[c][next] = y0[c];
        ++next;
    }

    Stepper st(rhs, dim);
    auto on_step = [&](const StepRecord& rec, double theta_cap) {
        const double xhi = rec.x0 + theta_cap * rec.h;
        while (next < sample_xs.size() && sample_xs[next] <= xhi + 1e-14 * std::abs(xhi)) {
            const double theta = (sample_xs[next] - rec.x0) / rec.h;
            dense_eval(*rec.r, dim, theta, buf.data());
            for (std::size_t c = 0; c < dim; ++c) out.rows[c][next] = buf[c];
            ++next;
        }
    };
    drive(rhs, dim, a, b, y0, opt, st, on_step, out.blew_up, out.stop, out.y_end,
          out.n_accepted, out.n_rejected);
    out.n_complete = next;
    return out;
}

} // namespace colehopf
