#include "loop/spectral.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "common/error.hpp"

namespace magcurv {
namespace {

using Complex = std::complex<double>;

// Signed wavenumber of FFT bin j; the Nyquist bin maps to 0.
double wavenumber(int j, int N) {
  if (2 * j == N) return 0.0;
  return j < (N + 1) / 2 ? j : j - N;
}

Mat apply_multiplier(const Mat& f, int order) {
  const int N = static_cast<int>(f.cols());
  require(N >= 2, "spectral calculus needs at least two nodes");
  Eigen::FFT<double> fft;
  Mat out(f.rows(), N);
  std::vector<Complex> in(N), spec, back;
  for (Eigen::Index r = 0; r < f.rows(); ++r) {
    for (int j = 0; j < N; ++j) in[j] = f(r, j);
    fft.fwd(spec, in);
    for (int j = 0; j < N; ++j) {
      const Complex ik(0.0, 2.0 * M_PI * wavenumber(j, N));
      Complex m = 1.0;
      for (int p = 0; p < order; ++p) m *= ik;
      spec[j] *= m;
    }
    fft.inv(back, spec);
    for (int j = 0; j < N; ++j) out(r, j) = back[j].real();
  }
  return out;
}

}  // namespace

Mat spectral_derivative(const Mat& f) { return apply_multiplier(f, 1); }

Mat spectral_second_derivative(const Mat& f) { return apply_multiplier(f, 2); }

Mat h1_riesz(const Mat& c) {
  const int N = static_cast<int>(c.cols());
  require(N >= 2, "spectral calculus needs at least two nodes");
  Eigen::FFT<double> fft;
  Mat out(c.rows(), N);
  std::vector<Complex> in(N), spec, back;
  for (Eigen::Index r = 0; r < c.rows(); ++r) {
    for (int j = 0; j < N; ++j) in[j] = c(r, j);
    fft.fwd(spec, in);
    for (int j = 0; j < N; ++j) {
      const double kw = 2 * j == N ? 0.5 * N : wavenumber(j, N);
      spec[j] /= 1.0 + 4.0 * M_PI * M_PI * kw * kw;
    }
    fft.inv(back, spec);
    for (int j = 0; j < N; ++j) out(r, j) = back[j].real();
  }
  return out;
}

Vec spectral_primitive(const Vec& f) {
  const int N = static_cast<int>(f.size());
  require(N >= 2, "spectral calculus needs at least two nodes");
  Eigen::FFT<double> fft;
  std::vector<Complex> in(N), spec, back;
  for (int j = 0; j < N; ++j) in[j] = f[j];
  fft.fwd(spec, in);
  spec[0] = 0.0;
  for (int j = 1; j < N; ++j) {
    const double kw = wavenumber(j, N);
    spec[j] = kw == 0.0 ? Complex(0.0) : spec[j] / Complex(0.0, 2.0 * M_PI * kw);
  }
  fft.inv(back, spec);
  Vec F(N);
  for (int j = 0; j < N; ++j) F[j] = back[j].real() - back[0].real();
  return F;
}

Vec cumulative_trapezoid(const Vec& f) {
  const Eigen::Index N = f.size();
  Vec F(N);
  if (N == 0) return F;
  F[0] = 0.0;
  for (Eigen::Index j = 1; j < N; ++j) F[j] = F[j - 1] + 0.5 * (f[j - 1] + f[j]) / static_cast<double>(N);
  return F;
}

Vec spectral_interpolate(const Mat& f, double s) {
  const int N = static_cast<int>(f.cols());
  Eigen::FFT<double> fft;
  Vec out(f.rows());
  std::vector<Complex> in(N), spec;
  for (Eigen::Index r = 0; r < f.rows(); ++r) {
    for (int j = 0; j < N; ++j) in[j] = f(r, j);
    fft.fwd(spec, in);
    double acc = 0.0;
    for (int j = 0; j < N; ++j) {
      double kw = wavenumber(j, N);
      if (2 * j == N) {
        acc += (spec[j] * std::cos(M_PI * N * s)).real();
        continue;
      }
      acc += (spec[j] * std::exp(Complex(0.0, 2.0 * M_PI * kw * s))).real();
    }
    out[r] = acc / N;
  }
  return out;
}

}  // namespace magcurv
