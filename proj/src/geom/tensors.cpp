#include "geom/tensors.hpp"

#include <cmath>

namespace magcurv {

double PointJet::norm(const Vec& a) const { return std::sqrt(std::max(0.0, inner(a, a))); }

PointJet evaluate_jet(const ChartedSystem& sys, const Vec& x, JetOrder order) {
  const int n = sys.dimension();
  PointJet jet;
  jet.x = x;
  jet.order = order;
  jet.g = sys.metric(x);
  Eigen::LLT<Mat> llt(jet.g);
  jet.g_inv = llt.solve(Mat::Identity(n, n));
  jet.g_inv = 0.5 * (jet.g_inv + jet.g_inv.transpose());
  jet.sigma = sys.two_form(x);
  jet.omega = jet.g_inv * jet.sigma;

  const MatList dg = sys.metric_d1(x);

  // First-kind symbols first[l](i, j) = Gamma_{l,ij}.
  MatList first(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        first[l](i, j) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));

  jet.gamma.assign(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const double gkl = jet.g_inv(k, l);
      if (gkl != 0.0) jet.gamma[k] += gkl * first[l];
    }

  if (order == JetOrder::Connection) return jet;

  const MatList ds = sys.two_form_d1(x);
  jet.d_omega.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) jet.d_omega[i] = jet.g_inv * (ds[i] - dg[i] * jet.omega);

  if (order == JetOrder::Covariant) return jet;

  const MatList d2g = sys.metric_d2(x);
  jet.d_gamma.assign(static_cast<std::size_t>(n * n), Mat::Zero(n, n));
  for (int m = 0; m < n; ++m) {
    const Mat dginv = -jet.g_inv * dg[m] * jet.g_inv;
    MatList d_first(static_cast<std::size_t>(n), Mat::Zero(n, n));
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          d_first[l](i, j) =
              0.5 * (d2g[m * n + i](j, l) + d2g[m * n + j](i, l) - d2g[m * n + l](i, j));
    for (int k = 0; k < n; ++k) {
      Mat& out = jet.d_gamma[m * n + k];
      for (int l = 0; l < n; ++l) out += dginv(k, l) * first[l] + jet.g_inv(k, l) * d_first[l];
    }
  }
  return jet;
}

Vec contract_gamma(const PointJet& jet, const Vec& a, const Vec& b) {
  const int n = jet.dim();
  Vec out(n);
  for (int k = 0; k < n; ++k) out[k] = a.dot(jet.gamma[k] * b);
  return out;
}

Mat gamma_matrix(const PointJet& jet, const Vec& a) {
  const int n = jet.dim();
  Mat out(n, n);
  for (int k = 0; k < n; ++k) out.row(k) = a.transpose() * jet.gamma[k];
  return out;
}

namespace {

// sum_i u^i d_i Gamma^l(v, w)
Vec derivative_gamma(const PointJet& jet, const Vec& u, const Vec& v, const Vec& w) {
  const int n = jet.dim();
  Vec out = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (u[i] == 0.0) continue;
    for (int l = 0; l < n; ++l) out[l] += u[i] * v.dot(jet.d_gamma[i * n + l] * w);
  }
  return out;
}

void require_curvature(const PointJet& jet) {
  if (jet.order != JetOrder::Curvature) fail(ErrorKind::Internal, "jet lacks curvature data");
}

void require_covariant(const PointJet& jet) {
  if (jet.order == JetOrder::Connection) fail(ErrorKind::Internal, "jet lacks covariant data");
}

}  // namespace

Vec riemann(const PointJet& jet, const Vec& u, const Vec& v, const Vec& w) {
  require_curvature(jet);
  return derivative_gamma(jet, u, v, w) - derivative_gamma(jet, v, u, w) +
         contract_gamma(jet, u, contract_gamma(jet, v, w)) -
         contract_gamma(jet, v, contract_gamma(jet, u, w));
}

Mat riemann_matrix_first_slot(const PointJet& jet, const Vec& a, const Vec& b) {
  const int n = jet.dim();
  Mat out(n, n);
  for (int i = 0; i < n; ++i) out.col(i) = riemann(jet, Vec::Unit(n, i), a, b);
  return out;
}

Mat nabla_omega_matrix(const PointJet& jet, const Vec& w) {
  require_covariant(jet);
  const int n = jet.dim();
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    if (w[i] != 0.0) out += w[i] * jet.d_omega[i];
  const Mat G = gamma_matrix(jet, w);
  out += G * jet.omega - jet.omega * G;
  return out;
}

Mat nabla_omega_direction_matrix(const PointJet& jet, const Vec& v) {
  const int n = jet.dim();
  Mat out(n, n);
  for (int i = 0; i < n; ++i) out.col(i) = nabla_omega_matrix(jet, Vec::Unit(n, i)) * v;
  return out;
}

MatList christoffel(const ChartedSystem& sys, const Vec& x) {
  return evaluate_jet(sys, x, JetOrder::Connection).gamma;
}

Vec riemann(const ChartedSystem& sys, const Vec& x, const Vec& u, const Vec& v, const Vec& w) {
  return riemann(evaluate_jet(sys, x, JetOrder::Curvature), u, v, w);
}

Vec lorentz(const ChartedSystem& sys, const Vec& x, const Vec& w) {
  const Mat g = sys.metric(x);
  return g.llt().solve(sys.two_form(x) * w);
}

Vec nabla_omega(const ChartedSystem& sys, const Vec& x, const Vec& w, const Vec& v) {
  return nabla_omega_matrix(evaluate_jet(sys, x, JetOrder::Covariant), w) * v;
}

double cyclic_identity_residual(const PointJet& jet, const Vec& v, const Vec& w, const Vec& z) {
  return jet.inner(nabla_omega_matrix(jet, w) * v, z) + jet.inner(nabla_omega_matrix(jet, z) * w, v) +
         jet.inner(nabla_omega_matrix(jet, v) * z, w);
}

Mat orthonormal_completion(const PointJet& jet, const Vec& v) {
  const int n = jet.dim();
  const double nv = jet.norm(v);
  if (!(nv > 0.0)) fail(ErrorKind::Degenerate, "degenerate frame");
  Mat frame(n, n);
  frame.col(0) = v / nv;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int c = 1; c < n; ++c) {
    int best = -1;
    double best_norm = -1.0;
    Vec best_vec;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      Vec r = Vec::Unit(n, i);
      // Two Gram-Schmidt sweeps keep the frame orthonormal to roundoff.
      for (int sweep = 0; sweep < 2; ++sweep)
        for (int j = 0; j < c; ++j) r -= jet.inner(frame.col(j), r) * frame.col(j);
      const double rn = jet.norm(r);
      if (rn > best_norm) {
        best_norm = rn;
        best = i;
        best_vec = r;
      }
    }
    const double scale = std::sqrt(jet.g_inv.diagonal().maxCoeff());
    if (best < 0 || !(best_norm > 1e-10 / std::max(scale, 1e-300)))
      fail(ErrorKind::Degenerate, "degenerate frame");
    used[best] = true;
    frame.col(c) = best_vec / best_norm;
  }
  return frame;
}

}  // namespace magcurv
