#pragma once

namespace colehopf {

// Order-one modified Bessel functions with first and second derivative,
// from their power series (second derivative closed through the defining
// equation z^2 w'' + z w' - (z^2 + 1) w = 0).
struct Bessel1 {
    double f = 0.0, df = 0.0, ddf = 0.0;
};

Bessel1 modified_i1(double z);
Bessel1 modified_k1(double z); // requires z > 0

} // namespace colehopf
