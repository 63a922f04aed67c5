#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "common/error.hpp"

namespace magcurv::detail {

using OdeState = std::vector<double>;

struct DriveStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

// Adaptive RK7(8) Fehlberg integration that lands exactly on each output time.
// `after_step` may modify the state after every accepted step (projection,
// chart switches). Domain errors thrown by the right-hand side during a trial
// step count as rejections; when the step collapses they are rethrown.
template <class Rhs>
DriveStats drive(Rhs&& rhs, OdeState& state, const std::vector<double>& out_times, double tolerance,
                 const std::function<void(OdeState&)>& after_step,
                 const std::function<void(std::size_t, const OdeState&)>& on_output) {
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(tolerance, tolerance, odeint::runge_kutta_fehlberg78<OdeState>());
  auto system = [&](const OdeState& y, OdeState& dy, double t) { rhs(y, dy, t); };

  DriveStats stats;
  double t = out_times.empty() ? 0.0 : out_times.front();
  const double span = out_times.empty() ? 0.0 : out_times.back() - t;
  const double min_step = 1e-13 * std::max(1.0, std::abs(span));
  double dt = std::min(0.01, span > 0.0 ? span / 16.0 : 0.01);
  if (on_output && !out_times.empty()) on_output(0, state);

  for (std::size_t i = 1; i < out_times.size(); ++i) {
    const double target = out_times[i];
    while (target - t > 1e-15 * std::max(1.0, std::abs(target))) {
      const bool truncated = dt >= target - t;
      const double suggested = dt;
      double trial = truncated ? target - t : dt;
      odeint::controlled_step_result res;
      try {
        res = stepper.try_step(system, state, t, trial);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Domain) throw;
        ++stats.rejected;
        dt = 0.5 * (truncated ? target - t : dt);
        if (dt < min_step) throw;
        continue;
      }
      if (res == odeint::fail) {
        ++stats.rejected;
        dt = trial;
        if (dt < min_step || !std::isfinite(dt)) fail(ErrorKind::NotConverged, "stiff or singular trajectory");
        continue;
      }
      ++stats.steps;
      for (double s : state)
        if (!std::isfinite(s)) fail(ErrorKind::NotConverged, "stiff or singular trajectory");
      if (truncated && std::abs(t - target) < 1e-12 * std::max(1.0, std::abs(target))) t = target;
      dt = truncated ? std::max(suggested, trial) : trial;
      if (after_step) after_step(state);
    }
    t = target;
    if (on_output) on_output(i, state);
  }
  return stats;
}

}  // namespace magcurv::detail
