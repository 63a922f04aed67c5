#pragma once

#include "solve/record.hpp"

namespace magcurv {

struct ShootOptions {
  double tolerance = 1e-12;          // integrator tolerance
  double residual_tolerance = 1e-10;
  int max_iterations = 40;
  double T_floor = 1e-3;
  Eigen::VectorXi target_winding;    // lattice class of x(T) - x(0); empty means zero
  RecordOptions record;
};

// Newton (Gauss-Newton, minimum-norm steps) on the periodicity map
//   F(x0, beta, T) = (x(T) - x0 - L w, v(T) - v0, <x0 - x_ref, v_ref>),
// where v0 has speed sqrt(2k) and direction seed + beta (n - 1 parameters),
// and (x_ref, v_ref) is the seed. Failure to converge yields a "not found"
// record, never a spurious orbit.
OrbitRecord shoot(const ChartedSystem& sys, double k, const PhaseState& seed, double T_guess,
                  const ShootOptions& opt = {});

// Rescales v to speed sqrt(2k) in the metric at x.
PhaseState on_energy_level(const ChartedSystem& sys, const PhaseState& s, double k);

}  // namespace magcurv
