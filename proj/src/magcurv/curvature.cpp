#include "magcurv/curvature.hpp"

#include <cmath>

namespace magcurv {

void check_frame(const PointJet& jet, const Vec& v, const Vec* w, bool unit_w) {
  const int n = jet.dim();
  if (v.size() != n || (w && w->size() != n)) fail(ErrorKind::InvalidArgument, "frame violation: wrong dimension");
  if (std::abs(jet.norm(v) - 1.0) > kFrameTolerance) fail(ErrorKind::InvalidArgument, "frame violation: |v| != 1");
  if (!w) return;
  const double wn = jet.norm(*w);
  if (std::abs(jet.inner(v, *w)) > kFrameTolerance * std::max(1.0, wn))
    fail(ErrorKind::InvalidArgument, "frame violation: <v, w> != 0");
  if (unit_w && std::abs(wn - 1.0) > kFrameTolerance) fail(ErrorKind::InvalidArgument, "frame violation: |w| != 1");
}

namespace {

Vec a_unchecked(const PointJet& jet, const Vec& v, const Vec& w) {
  const Vec ov = jet.omega * v;
  const Vec ow = jet.omega * w;
  return 0.75 * jet.inner(w, ov) * ov - 0.25 * (jet.omega * ow) - 0.25 * jet.inner(ow, ov) * v;
}

Vec r_unchecked(const PointJet& jet, const Vec& v, const Vec& w, double k) {
  const Vec nv = nabla_omega_matrix(jet, v) * w;
  const Vec mag = nabla_omega_matrix(jet, w) * v - 0.5 * nv + 0.5 * jet.inner(nv, v) * v;
  return 2.0 * k * riemann(jet, w, v, v) - std::sqrt(2.0 * k) * mag;
}

void check_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) fail(ErrorKind::InvalidArgument, "energy k must be positive");
}

}  // namespace

Vec a_omega(const PointJet& jet, const Vec& v, const Vec& w) {
  check_frame(jet, v, &w);
  return a_unchecked(jet, v, w);
}

Vec r_omega_k(const PointJet& jet, const Vec& v, const Vec& w, double k) {
  check_k(k);
  check_frame(jet, v, &w);
  return r_unchecked(jet, v, w, k);
}

Vec m_omega_k(const PointJet& jet, const Vec& v, const Vec& w, double k) {
  check_k(k);
  check_frame(jet, v, &w);
  return r_unchecked(jet, v, w, k) + a_unchecked(jet, v, w);
}

SecParts sec_parts(const PointJet& jet, const Vec& v, const Vec& w) {
  SecParts p;
  p.riemann = jet.inner(riemann(jet, w, v, v), w);
  p.nabla = jet.inner(nabla_omega_matrix(jet, w) * v, w);
  const double wov = jet.inner(w, jet.omega * v);
  const Vec ow = jet.omega * w;
  p.magnetic = 0.75 * wov * wov + 0.25 * jet.inner(ow, ow);
  return p;
}

double sec_omega_k(const PointJet& jet, const Vec& v, const Vec& w, double k) {
  check_k(k);
  check_frame(jet, v, &w, true);
  return sec_parts(jet, v, w).at(k);
}

double m_form(const PointJet& jet, const Vec& v, const Vec& w, double k) {
  check_k(k);
  check_frame(jet, v, &w);
  return jet.inner(r_unchecked(jet, v, w, k) + a_unchecked(jet, v, w), w);
}

double ric_omega_k_in_basis(const PointJet& jet, const Vec& v, const Mat& basis, double k) {
  check_k(k);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    const Vec e = basis.col(i);
    sum += jet.inner(r_unchecked(jet, v, e, k) + a_unchecked(jet, v, e), e);
  }
  return sum;
}

double ric_omega_k(const PointJet& jet, const Vec& v, double k) {
  check_k(k);
  check_frame(jet, v);
  const Mat frame = orthonormal_completion(jet, v);
  return ric_omega_k_in_basis(jet, v, frame.rightCols(jet.dim() - 1), k);
}

SecParts ric_parts(const PointJet& jet, const Vec& v) {
  SecParts p;
  p.riemann = riemann_matrix_first_slot(jet, v, v).trace();
  p.nabla = nabla_omega_direction_matrix(jet, v).trace();
  p.magnetic = trace_a_omega_closed(jet, v);
  return p;
}

double ric_omega_k_trace(const PointJet& jet, const Vec& v, double k) {
  check_k(k);
  check_frame(jet, v);
  return ric_parts(jet, v).at(k);
}

double trace_a_omega(const PointJet& jet, const Vec& v) {
  check_frame(jet, v);
  const Mat frame = orthonormal_completion(jet, v);
  const Vec ov = jet.omega * v;
  const int n = jet.dim();
  double sum = 0.0;
  for (int i = 1; i < n; ++i) {
    const double c = jet.inner(frame.col(i), ov);
    sum += c * c;
    const Vec oe = jet.omega * frame.col(i);
    for (int j = 1; j < n; ++j) {
      const double d = jet.inner(oe, frame.col(j));
      sum += 0.25 * d * d;
    }
  }
  return sum;
}

double trace_a_omega_closed(const PointJet& jet, const Vec& v) {
  const Vec ov = jet.omega * v;
  return 0.5 * jet.inner(ov, ov) - 0.25 * (jet.omega * jet.omega).trace();
}

Mat m_omega_restricted(const PointJet& jet, const Vec& v, double k) {
  check_k(k);
  check_frame(jet, v);
  const int n = jet.dim();
  const Mat frame = orthonormal_completion(jet, v);
  Mat out(n - 1, n - 1);
  for (int j = 1; j < n; ++j) {
    const Vec e = frame.col(j);
    const Vec m = r_unchecked(jet, v, e, k) + a_unchecked(jet, v, e);
    for (int i = 1; i < n; ++i) out(i - 1, j - 1) = jet.inner(frame.col(i), m);
  }
  return out;
}

CurvatureSample curvature_sample(const ChartedSystem& sys, const Vec& x, const Vec& v,
                                 const std::optional<Vec>& w, double k) {
  const PointJet jet = evaluate_jet(sys, x, JetOrder::Curvature);
  CurvatureSample s;
  s.x = x;
  s.v = v;
  s.w = w;
  s.k = k;
  if (w) s.sec = sec_omega_k(jet, v, *w, k);
  s.ric = ric_omega_k(jet, v, k);
  s.trace_a = trace_a_omega(jet, v);
  return s;
}

Vec a_omega(const ChartedSystem& sys, const Vec& x, const Vec& v, const Vec& w) {
  return a_omega(evaluate_jet(sys, x, JetOrder::Connection), v, w);
}

Vec r_omega_k(const ChartedSystem& sys, const Vec& x, const Vec& v, const Vec& w, double k) {
  return r_omega_k(evaluate_jet(sys, x, JetOrder::Curvature), v, w, k);
}

double sec_omega_k(const ChartedSystem& sys, const Vec& x, const Vec& v, const Vec& w, double k) {
  return sec_omega_k(evaluate_jet(sys, x, JetOrder::Curvature), v, w, k);
}

double ric_omega_k(const ChartedSystem& sys, const Vec& x, const Vec& v, double k) {
  return ric_omega_k(evaluate_jet(sys, x, JetOrder::Curvature), v, k);
}

double trace_a_omega(const ChartedSystem& sys, const Vec& x, const Vec& v) {
  return trace_a_omega(evaluate_jet(sys, x, JetOrder::Connection), v);
}

SurfaceFields surface_fields(const ChartedSystem& sys, const Vec& x) {
  if (sys.dimension() != 2) fail(ErrorKind::InvalidArgument, "surface formula needs a 2-dimensional chart");
  if (!sys.oriented()) fail(ErrorKind::InvalidArgument, "surface formula needs an oriented chart");
  const PointJet jet = evaluate_jet(sys, x, JetOrder::Curvature);
  const double det = jet.g.determinant();
  const double root = std::sqrt(det);
  SurfaceFields s;
  s.K = jet.inner(riemann(jet, Vec::Unit(2, 0), Vec::Unit(2, 1), Vec::Unit(2, 1)), Vec::Unit(2, 0)) / det;
  s.b = jet.sigma(0, 1) / root;
  const MatList dg = sys.metric_d1(x);
  const MatList ds = sys.two_form_d1(x);
  s.db.resize(2);
  for (int i = 0; i < 2; ++i) {
    const double droot = 0.5 * root * (jet.g_inv * dg[i]).trace();
    s.db[i] = (ds[i](0, 1) - s.b * droot) / root;
  }
  Mat mu(2, 2);
  mu << 0.0, root, -root, 0.0;
  s.J = jet.g_inv * mu;
  return s;
}

double surface_sec_b(double K, double b, const Vec& db, const Vec& Jv, double k) {
  if (!(k > 0.0)) fail(ErrorKind::InvalidArgument, "energy k must be positive");
  if (db.size() != 2 || Jv.size() != 2) fail(ErrorKind::InvalidArgument, "surface formula needs 2-vectors");
  return 2.0 * k * K - std::sqrt(2.0 * k) * db.dot(Jv) + b * b;
}

double surface_sec_b(const SurfaceFields& s, const Vec& v, double k) {
  return surface_sec_b(s.K, s.b, s.db, s.J * v, k);
}

}  // namespace magcurv
