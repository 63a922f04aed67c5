#include "loop/loop.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "loop/spectral.hpp"

namespace magcurv {
namespace {

double node_s(int j, int N) { return static_cast<double>(j) / N; }

void check_parametrization(const LoopSamples& ls, bool allow_constant) {
  const double vmax = ls.speed.maxCoeff();
  if (vmax == 0.0) {
    if (allow_constant) return;
    fail(ErrorKind::Degenerate, "singular parametrization (constant loop)");
  }
  if (ls.speed.minCoeff() <= 1e-10 * vmax) fail(ErrorKind::Degenerate, "singular parametrization");
}

}  // namespace

void validate_loop(const ChartedSystem& sys, const DiscreteLoop& loop) {
  const int n = sys.dimension();
  require(loop.dim() == n, "loop has wrong dimension");
  require(loop.size() >= 8, "loop needs at least 8 nodes");
  require(loop.T > 0.0 && std::isfinite(loop.T), "loop period must be positive");
  require(loop.nodes.allFinite(), "loop nodes must be finite");
  const Vec shift = loop.lattice_shift();
  require(shift.size() == n, "loop shift has wrong dimension");
  for (int i = 0; i < n; ++i) {
    if (!sys.periodic(i)) {
      require(shift[i] == 0.0, "loop shift must vanish on non-periodic coordinates");
      continue;
    }
    const double L = sys.lattice()[static_cast<std::size_t>(i)];
    require(std::abs(shift[i] / L - std::round(shift[i] / L)) < 1e-9, "loop shift must be a lattice vector");
    for (int j = 0; j < loop.size(); ++j) {
      const double next = j + 1 < loop.size() ? loop.nodes(i, j + 1) : loop.nodes(i, 0) + shift[i];
      require(std::abs(next - loop.nodes(i, j)) < 0.5 * L, "loop nodes must be a continuous lift");
    }
  }
}

DiscreteLoop loop_from_orbit(const ChartedSystem& sys, const Orbit& orbit, int N) {
  require(N >= 8, "loop needs at least 8 nodes");
  const OrbitInterpolant interp(orbit);
  const int n = sys.dimension();
  DiscreteLoop loop;
  loop.T = orbit.period;
  loop.nodes.resize(n, N);
  for (int j = 0; j < N; ++j) loop.nodes.col(j) = interp(orbit.period * node_s(j, N)).x;
  loop.shift = Vec::Zero(n);
  const Vec gap = orbit.x_unwrapped.back() - orbit.x_unwrapped.front();
  for (int i = 0; i < n; ++i)
    if (sys.periodic(i)) {
      const double L = sys.lattice()[static_cast<std::size_t>(i)];
      loop.shift[i] = L * std::round(gap[i] / L);
    }
  return loop;
}

DiscreteLoop circle_loop(const Vec& center, double radius, double T, int N, bool clockwise) {
  require(center.size() >= 2, "circle needs at least two coordinates");
  DiscreteLoop loop;
  loop.T = T;
  loop.nodes = center.replicate(1, N);
  const double sign = clockwise ? -1.0 : 1.0;
  for (int j = 0; j < N; ++j) {
    const double a = 2.0 * M_PI * node_s(j, N);
    loop.nodes(0, j) += radius * std::cos(a);
    loop.nodes(1, j) += sign * radius * std::sin(a);
  }
  loop.shift = Vec::Zero(center.size());
  return loop;
}

Eigen::VectorXi loop_winding(const ChartedSystem& sys, const DiscreteLoop& loop) {
  const int n = sys.dimension();
  const Vec shift = loop.lattice_shift();
  Eigen::VectorXi w = Eigen::VectorXi::Zero(n);
  for (int i = 0; i < n; ++i)
    if (sys.periodic(i)) w[i] = static_cast<int>(std::lround(shift[i] / sys.lattice()[static_cast<std::size_t>(i)]));
  return w;
}

bool is_contractible(const ChartedSystem& sys, const DiscreteLoop& loop) {
  return loop_winding(sys, loop).isZero();
}

LoopSamples sample_loop(const ChartedSystem& sys, const DiscreteLoop& loop, JetOrder order) {
  validate_loop(sys, loop);
  LoopSamples ls;
  ls.n = loop.dim();
  ls.N = loop.size();
  ls.T = loop.T;
  ls.x = loop.nodes;
  const Vec shift = loop.lattice_shift();
  Mat periodic = loop.nodes;
  for (int j = 0; j < ls.N; ++j) periodic.col(j) -= shift * node_s(j, ls.N);
  Mat d1 = spectral_derivative(periodic);
  d1.colwise() += shift;
  ls.xdot = d1 / ls.T;
  const Mat xddot = spectral_second_derivative(periodic) / (ls.T * ls.T);
  ls.acc.resize(ls.n, ls.N);
  ls.speed.resize(ls.N);
  ls.jets.reserve(static_cast<std::size_t>(ls.N));
  for (int j = 0; j < ls.N; ++j) {
    ls.jets.push_back(evaluate_jet(sys, loop.nodes.col(j), order));
    const PointJet& jet = ls.jets.back();
    const Vec v = ls.xdot.col(j);
    ls.acc.col(j) = xddot.col(j) + contract_gamma(jet, v, v);
    ls.speed[j] = jet.norm(v);
  }
  return ls;
}

Mat covariant_derivative(const LoopSamples& ls, const Mat& V) {
  require(V.rows() == ls.n && V.cols() == ls.N, "field has wrong shape");
  Mat D = spectral_derivative(V) / ls.T;
  for (int j = 0; j < ls.N; ++j) D.col(j) += gamma_matrix(ls.jets[j], ls.xdot.col(j)) * V.col(j);
  return D;
}

Mat variation_derivative(const LoopSamples& ls, const Variation& var) {
  if (var.Vdot) {
    require(var.Vdot->rows() == ls.n && var.Vdot->cols() == ls.N, "variation derivative has wrong shape");
    return *var.Vdot;
  }
  return covariant_derivative(ls, var.V);
}

double magnetic_term_primitive(const ChartedSystem& sys, const DiscreteLoop& loop) {
  if (!sys.has_primitive()) fail(ErrorKind::InvalidArgument, "no global primitive; action undefined");
  validate_loop(sys, loop);
  const int N = loop.size();
  const Vec shift = loop.lattice_shift();
  Mat periodic = loop.nodes;
  for (int j = 0; j < N; ++j) periodic.col(j) -= shift * node_s(j, N);
  Mat d1 = spectral_derivative(periodic);
  d1.colwise() += shift;
  double sum = 0.0;
  for (int j = 0; j < N; ++j) sum += sys.primitive(loop.nodes.col(j)).dot(d1.col(j));
  return sum / N;
}

double magnetic_term_capping(const ChartedSystem& sys, const DiscreteLoop& loop) {
  validate_loop(sys, loop);
  if (!is_contractible(sys, loop)) fail(ErrorKind::InvalidArgument, "capping disk needs a contractible loop");
  const int N = loop.size();
  const Vec c = loop.nodes.rowwise().mean();
  const Mat d1 = spectral_derivative(loop.nodes);
  auto radial = [&](double r) {
    double sum = 0.0;
    for (int j = 0; j < N; ++j) {
      const Vec dr = loop.nodes.col(j) - c;
      const Mat sigma = sys.two_form(c + r * dr);
      sum += dr.dot(sigma * (r * d1.col(j)));
    }
    return sum / N;
  };
  return boost::math::quadrature::gauss<double, 30>::integrate(radial, 0.0, 1.0);
}

double action(const ChartedSystem& sys, const DiscreteLoop& loop, double k) {
  require(k > 0.0 && std::isfinite(k), "energy k must be positive");
  const LoopSamples ls = sample_loop(sys, loop, JetOrder::Connection);
  double kinetic = 0.0;
  for (int j = 0; j < ls.N; ++j) kinetic += 0.5 * ls.speed[j] * ls.speed[j];
  kinetic *= ls.weight();

  const bool contractible = is_contractible(sys, loop);
  double magnetic = 0.0;
  switch (sys.primitive_scope()) {
    case PrimitiveScope::Global:
      magnetic = magnetic_term_primitive(sys, loop);
      break;
    case PrimitiveScope::Cover:
      if (!contractible) fail(ErrorKind::InvalidArgument, "no global primitive; action undefined");
      magnetic = magnetic_term_primitive(sys, loop);
      break;
    case PrimitiveScope::None:
      if (!contractible) fail(ErrorKind::InvalidArgument, "no global primitive; action undefined");
      magnetic = magnetic_term_capping(sys, loop);
      break;
  }
  return kinetic + k * loop.T + magnetic;
}

double eta_k(const LoopSamples& ls, double k, const Variation& var) {
  require(var.V.rows() == ls.n && var.V.cols() == ls.N, "variation has wrong shape");
  check_parametrization(ls, true);
  double first = 0.0, second = 0.0;
  for (int j = 0; j < ls.N; ++j) {
    const PointJet& jet = ls.jets[j];
    const Vec r = ls.acc.col(j) - jet.omega * ls.xdot.col(j);
    first -= jet.inner(r, var.V.col(j));
    second += k - 0.5 * ls.speed[j] * ls.speed[j];
  }
  return ls.weight() * (first + var.tau / ls.T * second);
}

double eta_k(const ChartedSystem& sys, const DiscreteLoop& loop, double k, const Variation& var) {
  return eta_k(sample_loop(sys, loop, JetOrder::Connection), k, var);
}

double eta_norm(const LoopSamples& ls, double k) {
  double rr = 0.0, energy = 0.0;
  for (int j = 0; j < ls.N; ++j) {
    const PointJet& jet = ls.jets[j];
    const Vec r = ls.acc.col(j) - jet.omega * ls.xdot.col(j);
    rr += jet.inner(r, r);
    energy += k - 0.5 * ls.speed[j] * ls.speed[j];
  }
  rr /= ls.N;
  energy *= ls.weight() / ls.T;
  return std::sqrt(ls.T * ls.T * rr + energy * energy);
}

double eta_norm(const ChartedSystem& sys, const DiscreteLoop& loop, double k) {
  return eta_norm(sample_loop(sys, loop, JetOrder::Connection), k);
}

double eta_gate(double T) { return 1e-5 * (1.0 + T); }

void require_critical(const LoopSamples& ls, double k) {
  check_parametrization(ls, false);
  const double e = eta_norm(ls, k);
  if (!(e < eta_gate(ls.T)))
    fail(ErrorKind::InvalidArgument, "not at a critical loop (eta norm " + std::to_string(e) + ")");
}

}  // namespace magcurv
