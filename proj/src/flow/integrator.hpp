#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "geom/system.hpp"

namespace magcurv {

struct PhaseState {
  Vec x;
  Vec v;
};

double energy(const ChartedSystem& sys, const PhaseState& s);

// (dx/dt, dv/dt) with dv^k/dt = -Gamma^k_ij v^i v^j + Omega^k_j v^j.
std::pair<Vec, Vec> magnetic_ode_rhs(const ChartedSystem& sys, const PhaseState& s);

struct IntegrateOptions {
  double tolerance = 1e-10;
  int samples = 512;             // output intervals on [0, t_end]
  bool project_energy = false;   // rescale |v| back to the initial energy after each step
};

struct Orbit {
  std::vector<double> t;
  VecList x;            // positions reduced to the fundamental domain
  VecList x_unwrapped;  // continuous lift
  VecList v;
  VecList a;            // dv/dt at the samples
  std::vector<int> chart;  // 0 or 1 on two-chart systems
  double period = 0.0;
  double k = 0.0;              // energy of the initial state
  double energy_drift = 0.0;   // max over samples of |E - k|
  double closure_residual = 0.0;
  Eigen::VectorXi winding;     // lattice translation between the ends
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t chart_switches = 0;
  double tolerance = 0.0;

  std::size_t size() const { return t.size(); }
  PhaseState state(std::size_t i) const { return {x_unwrapped[i], v[i]}; }
  PhaseState final_state() const { return state(t.size() - 1); }
};

Orbit integrate(const ChartedSystem& sys, const PhaseState& s0, double t_end,
                const IntegrateOptions& opt = {});

// |x(T) - x(0)| on the lattice-reduced positions plus |v(T) - v(0)|.
double closure_residual(const ChartedSystem& sys, const PhaseState& a, const PhaseState& b);

std::string orbit_csv(const ChartedSystem& sys, const Orbit& o);
nlohmann::json orbit_json(const ChartedSystem& sys, const Orbit& o, bool include_samples = true);

// Quintic Hermite interpolation of the base curve through (x, v, a) samples.
class OrbitInterpolant {
 public:
  explicit OrbitInterpolant(const Orbit& orbit);
  // Position and velocity at time t in [0, T].
  PhaseState operator()(double t) const;

 private:
  const Orbit* orbit_;
};

}  // namespace magcurv
