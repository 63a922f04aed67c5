#pragma once

#include "common/types.hpp"

namespace magcurv {

// Periodic sample calculus on N uniform nodes s_j = j / N of [0, 1). Matrices
// hold one component per row and one node per column.

// d/ds by FFT; the Nyquist coefficient is dropped.
Mat spectral_derivative(const Mat& f);
Mat spectral_second_derivative(const Mat& f);

// Riesz representative in the metric int <a,b> + <a',b'> ds: divides each
// Fourier coefficient by 1 + (2 pi j)^2.
Mat h1_riesz(const Mat& c);

// F with F' = f - mean(f) and F(0) = 0, by FFT.
Vec spectral_primitive(const Vec& f);

// F_j = integral of f over [0, s_j] by the trapezoid rule, F_0 = 0.
Vec cumulative_trapezoid(const Vec& f);

// Band-limited evaluation of periodic samples at an arbitrary s.
Vec spectral_interpolate(const Mat& f, double s);

}  // namespace magcurv
