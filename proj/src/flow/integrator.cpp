#include "flow/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "common/format.hpp"
#include "flow/driver.hpp"
#include "geom/tensors.hpp"

namespace magcurv {

double energy(const ChartedSystem& sys, const PhaseState& s) {
  return 0.5 * s.v.dot(sys.metric(s.x) * s.v);
}

std::pair<Vec, Vec> magnetic_ode_rhs(const ChartedSystem& sys, const PhaseState& s) {
  const PointJet jet = evaluate_jet(sys, s.x, JetOrder::Connection);
  return {s.v, -contract_gamma(jet, s.v, s.v) + jet.omega * s.v};
}

double closure_residual(const ChartedSystem& sys, const PhaseState& a, const PhaseState& b) {
  return sys.lattice_difference(b.x, a.x).norm() + (b.v - a.v).norm();
}

Orbit integrate(const ChartedSystem& sys, const PhaseState& s0, double t_end, const IntegrateOptions& opt) {
  const int n = sys.dimension();
  require(t_end > 0.0 && std::isfinite(t_end), "t_end must be positive");
  require(opt.tolerance > 0.0, "tolerance must be positive");
  require(opt.samples >= 1, "sample count must be positive");
  require(s0.x.size() == n && s0.v.size() == n, "initial state has wrong dimension");

  Orbit o;
  o.tolerance = opt.tolerance;
  o.period = t_end;
  o.k = energy(sys, s0);
  const double speed_target = std::sqrt(2.0 * o.k);

  std::vector<double> times(static_cast<std::size_t>(opt.samples) + 1);
  for (int i = 0; i <= opt.samples; ++i) times[static_cast<std::size_t>(i)] = t_end * i / opt.samples;
  times.back() = t_end;

  detail::OdeState y(2 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    y[i] = s0.x[i];
    y[n + i] = s0.v[i];
  }
  int chart = 0;
  auto unpack = [n](const detail::OdeState& z) {
    PhaseState s{Vec(n), Vec(n)};
    for (int i = 0; i < n; ++i) {
      s.x[i] = z[i];
      s.v[i] = z[n + i];
    }
    return s;
  };

  auto rhs = [&](const detail::OdeState& z, detail::OdeState& dz, double) {
    const PhaseState s = unpack(z);
    if (!sys.in_domain(s.x)) fail(ErrorKind::Domain, "left chart domain");
    const auto [dx, dv] = magnetic_ode_rhs(sys, s);
    for (int i = 0; i < n; ++i) {
      dz[i] = dx[i];
      dz[n + i] = dv[i];
    }
  };

  const auto& transition = sys.transition();
  auto after_step = [&](detail::OdeState& z) {
    PhaseState s = unpack(z);
    bool changed = false;
    if (transition && !transition->in_safe_region(s.x)) {
      transition->switch_chart(s.x, s.v);
      chart = 1 - chart;
      ++o.chart_switches;
      changed = true;
    }
    if (opt.project_energy && o.k > 0.0) {
      const double sp = std::sqrt(s.v.dot(sys.metric(s.x) * s.v));
      if (sp > 0.0) s.v *= speed_target / sp;
      changed = true;
    }
    if (changed)
      for (int i = 0; i < n; ++i) {
        z[i] = s.x[i];
        z[n + i] = s.v[i];
      }
  };

  auto on_output = [&](std::size_t i, const detail::OdeState& z) {
    const PhaseState s = unpack(z);
    o.t.push_back(times[i]);
    o.x_unwrapped.push_back(s.x);
    o.x.push_back(sys.wrap(s.x));
    o.v.push_back(s.v);
    o.a.push_back(magnetic_ode_rhs(sys, s).second);
    o.chart.push_back(chart);
    o.energy_drift = std::max(o.energy_drift, std::abs(energy(sys, s) - o.k));
  };

  try {
    const detail::DriveStats st = detail::drive(rhs, y, times, opt.tolerance, after_step, on_output);
    o.steps = st.steps;
    o.rejected_steps = st.rejected;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Domain) fail(ErrorKind::Domain, "left chart domain (" + std::string(e.what()) + ")");
    throw;
  }

  const PhaseState first = o.state(0), last = o.final_state();
  o.closure_residual = closure_residual(sys, first, last);
  o.winding = Eigen::VectorXi::Zero(n);
  for (int i = 0; i < n; ++i)
    if (sys.periodic(i)) {
      const double L = sys.lattice()[static_cast<std::size_t>(i)];
      o.winding[i] = static_cast<int>(std::lround((last.x[i] - first.x[i]) / L));
    }
  return o;
}

std::string orbit_csv(const ChartedSystem& sys, const Orbit& o) {
  std::ostringstream os;
  const int n = sys.dimension();
  os << "t";
  for (int i = 0; i < n; ++i) os << ",x" << i + 1;
  for (int i = 0; i < n; ++i) os << ",v" << i + 1;
  os << ",E\n";
  for (std::size_t s = 0; s < o.size(); ++s) {
    os << fmt(o.t[s]);
    for (int i = 0; i < n; ++i) os << "," << fmt(o.x[s][i]);
    for (int i = 0; i < n; ++i) os << "," << fmt(o.v[s][i]);
    os << "," << fmt(energy(sys, {o.x_unwrapped[s], o.v[s]})) << "\n";
  }
  return os.str();
}

nlohmann::json orbit_json(const ChartedSystem& sys, const Orbit& o, bool include_samples) {
  nlohmann::json j;
  j["period"] = o.period;
  j["k"] = o.k;
  j["energy_drift"] = o.energy_drift;
  j["closure_residual"] = o.closure_residual;
  j["winding"] = std::vector<int>(o.winding.data(), o.winding.data() + o.winding.size());
  j["steps"] = o.steps;
  j["rejected_steps"] = o.rejected_steps;
  j["chart_switches"] = o.chart_switches;
  j["tolerance"] = o.tolerance;
  if (include_samples) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t s = 0; s < o.size(); ++s) {
      nlohmann::json r;
      r["t"] = o.t[s];
      r["x"] = std::vector<double>(o.x[s].data(), o.x[s].data() + o.x[s].size());
      r["v"] = std::vector<double>(o.v[s].data(), o.v[s].data() + o.v[s].size());
      r["E"] = energy(sys, {o.x_unwrapped[s], o.v[s]});
      rows.push_back(r);
    }
    j["samples"] = rows;
  }
  return j;
}

OrbitInterpolant::OrbitInterpolant(const Orbit& orbit) : orbit_(&orbit) {
  require(orbit.size() >= 2, "orbit needs at least two samples");
  for (std::size_t i = 1; i < orbit.chart.size(); ++i)
    if (orbit.chart[i] != orbit.chart[0])
      fail(ErrorKind::InvalidArgument, "orbit crosses a chart switch; interpolation needs a single chart");
}

PhaseState OrbitInterpolant::operator()(double t) const {
  const Orbit& o = *orbit_;
  std::size_t i = static_cast<std::size_t>(std::upper_bound(o.t.begin(), o.t.end(), t) - o.t.begin());
  i = std::clamp<std::size_t>(i, 1, o.size() - 1) - 1;
  const double h = o.t[i + 1] - o.t[i];
  const double s = (t - o.t[i]) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5, H1 = s - 6 * s3 + 8 * s4 - 3 * s5,
               H2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5, H3 = 0.5 * s3 - s4 + 0.5 * s5,
               H4 = -4 * s3 + 7 * s4 - 3 * s5, H5 = 10 * s3 - 15 * s4 + 6 * s5;
  const double D0 = -30 * s2 + 60 * s3 - 30 * s4, D1 = 1 - 18 * s2 + 32 * s3 - 15 * s4,
               D2 = s - 4.5 * s2 + 6 * s3 - 2.5 * s4, D3 = 1.5 * s2 - 4 * s3 + 2.5 * s4,
               D4 = -12 * s2 + 28 * s3 - 15 * s4, D5 = 30 * s2 - 60 * s3 + 30 * s4;
  const Vec &p0 = o.x_unwrapped[i], &p1 = o.x_unwrapped[i + 1];
  const Vec &m0 = o.v[i], &m1 = o.v[i + 1], &a0 = o.a[i], &a1 = o.a[i + 1];
  PhaseState out;
  out.x = H0 * p0 + h * H1 * m0 + h * h * H2 * a0 + h * h * H3 * a1 + h * H4 * m1 + H5 * p1;
  out.v = (D0 * p0 + h * D1 * m0 + h * h * D2 * a0 + h * h * D3 * a1 + h * D4 * m1 + D5 * p1) / h;
  return out;
}

}  // namespace magcurv
