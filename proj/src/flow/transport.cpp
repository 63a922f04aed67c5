#include "flow/transport.hpp"

#include "flow/driver.hpp"
#include "geom/tensors.hpp"

namespace magcurv {

Mat omega_tilde_matrix(const Mat& g, const Mat& omega, const Vec& v) {
  const double vv = v.dot(g * v);
  if (!(vv > 0.0)) fail(ErrorKind::Degenerate, "omega_tilde needs a nonzero velocity");
  const int n = static_cast<int>(v.size());
  const Mat P1 = v * (g * v).transpose() / vv;  // projection on span(v)
  const Mat P2 = Mat::Identity(n, n) - P1;
  return omega * P1 + P1 * omega + 0.5 * P2 * omega * P2;
}

Vec omega_tilde(const ChartedSystem& sys, const PhaseState& s, const Vec& V) {
  const Mat g = sys.metric(s.x);
  const Mat omega = g.llt().solve(sys.two_form(s.x));
  return omega_tilde_matrix(g, omega, s.v) * V;
}

TransportResult magnetic_transport(const ChartedSystem& sys, const Orbit& orbit, const Mat& V0,
                                   double tolerance) {
  const int n = sys.dimension();
  require(V0.rows() == n && V0.cols() >= 1, "initial fields have wrong shape");
  require(tolerance > 0.0, "tolerance must be positive");
  const OrbitInterpolant base(orbit);
  const int m = static_cast<int>(V0.cols());

  detail::OdeState y(static_cast<std::size_t>(n * m));
  Eigen::Map<Mat>(y.data(), n, m) = V0;

  auto rhs = [&](const detail::OdeState& z, detail::OdeState& dz, double t) {
    const PhaseState s = base(t);
    const PointJet jet = evaluate_jet(sys, s.x, JetOrder::Connection);
    const Mat A = omega_tilde_matrix(jet.g, jet.omega, s.v) - gamma_matrix(jet, s.v);
    Eigen::Map<Mat>(dz.data(), n, m) = A * Eigen::Map<const Mat>(z.data(), n, m);
  };

  TransportResult r;
  auto on_output = [&](std::size_t i, const detail::OdeState& z) {
    r.t.push_back(orbit.t[i]);
    r.fields.push_back(Eigen::Map<const Mat>(z.data(), n, m));
  };
  r.steps = detail::drive(rhs, y, orbit.t, tolerance, {}, on_output).steps;
  r.end = r.fields.back();
  return r;
}

Mat transport_end_map(const ChartedSystem& sys, const Orbit& orbit, double tolerance) {
  const int n = sys.dimension();
  return magnetic_transport(sys, orbit, Mat::Identity(n, n), tolerance).end;
}

}  // namespace magcurv
