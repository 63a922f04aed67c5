#include "loop/variations.hpp"

#include <cmath>

#include "flow/transport.hpp"
#include "loop/spectral.hpp"

namespace magcurv {

TestVariation make_test_variation(const LoopSamples& ls, const Mat& V, const std::optional<Mat>& Vdot) {
  require(V.rows() == ls.n && V.cols() == ls.N, "field has wrong shape");
  for (int j = 0; j < ls.N; ++j) {
    const PointJet& jet = ls.jets[j];
    const double sp = ls.speed[j];
    if (!(sp > 0.0)) fail(ErrorKind::Degenerate, "singular parametrization");
    if (std::abs(jet.inner(V.col(j), ls.xdot.col(j))) > 1e-8 * std::max(1.0, jet.norm(V.col(j))) * sp)
      fail(ErrorKind::InvalidArgument, "test variation needs a field normal to the velocity");
  }
  const Mat dV = Vdot ? *Vdot : covariant_derivative(ls, V);
  require(dV.rows() == ls.n && dV.cols() == ls.N, "field derivative has wrong shape");

  Vec q(ls.N);
  for (int j = 0; j < ls.N; ++j) q[j] = ls.jets[j].inner(dV.col(j), ls.xdot.col(j)) / (ls.speed[j] * ls.speed[j]);
  const double mean = q.mean();
  const double tau = ls.T * mean;
  const Vec g = Vdot ? Vec(-ls.T * cumulative_trapezoid(q.array() - mean)) : Vec(-ls.T * spectral_primitive(q));

  TestVariation out;
  out.g = g;
  out.W.tau = tau;
  out.W.V = V;
  Mat dW = dV;
  for (int j = 0; j < ls.N; ++j) {
    out.W.V.col(j) += g[j] * ls.xdot.col(j);
    dW.col(j) += -(q[j] - mean) * ls.xdot.col(j) + g[j] * ls.acc.col(j);
  }
  out.W.Vdot = dW;
  return out;
}

Mat omega_tilde_along(const LoopSamples& ls, const Mat& V) {
  require(V.rows() == ls.n && V.cols() == ls.N, "field has wrong shape");
  Mat out(ls.n, ls.N);
  for (int j = 0; j < ls.N; ++j)
    out.col(j) = omega_tilde_matrix(ls.jets[j].g, ls.jets[j].omega, ls.xdot.col(j)) * V.col(j);
  return out;
}

SineWindow sine_window(const LoopSamples& ls, int j, int m) {
  require(m >= 0 && j >= 0 && j <= m, "window index out of range");
  const double T = ls.T;
  const double h = T / ls.N;
  const auto edge = [&](int e) { return std::round(static_cast<double>(e) * ls.N / (m + 1)); };
  SineWindow w{Vec::Zero(ls.N), Vec::Zero(ls.N), (edge(j) + 0.5) * h, (edge(j + 1) - edge(j)) * h};
  if (!(w.length > 0.0)) fail(ErrorKind::InvalidArgument, "too few nodes for the requested windows");
  const double omega = M_PI / w.length;
  for (int i = 0; i < ls.N; ++i) {
    double phase = std::fmod(T * i / ls.N - w.start, T);
    if (phase < 0.0) phase += T;
    if (phase >= w.length) continue;
    w.f[i] = std::sin(omega * phase);
    w.fdot[i] = omega * std::cos(omega * phase);
  }
  return w;
}

TestVariation sine_mode_variation(const LoopSamples& ls, const Mat& V, int j, int m) {
  const SineWindow w = sine_window(ls, j, m);
  const Mat dV = omega_tilde_along(ls, V);
  Mat Vf(ls.n, ls.N), dVf(ls.n, ls.N);
  for (int i = 0; i < ls.N; ++i) {
    Vf.col(i) = w.f[i] * V.col(i);
    dVf.col(i) = w.fdot[i] * V.col(i) + w.f[i] * dV.col(i);
  }
  return make_test_variation(ls, Vf, dVf);
}

}  // namespace magcurv
