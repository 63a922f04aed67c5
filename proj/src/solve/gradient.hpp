#pragma once

#include <optional>
#include <string>

#include "solve/shoot.hpp"

namespace magcurv {

struct GradientSchedule {
  int max_iterations = 4000;
  double step = 0.1;         // initial step length
  double step_max = 1.0;
  double step_floor = 1e-9;  // below this the run ends as a vanishing sequence
  double T_floor = 1e-3;
  double action_floor = -1.0;  // negative: 1e-6 k
  int min_mode_modes = 3;      // Fourier modes of the reduced basis for the lowest Hessian mode
  double fd_step = 1e-5;
  bool polish = true;          // refine the converged loop with shoot
  ShootOptions shoot;
};

enum class SearchStatus { Converged, Vanishing, PeriodCollapse, IterationCap };

std::string to_string(SearchStatus s);

struct SearchResult {
  SearchStatus status = SearchStatus::IterationCap;
  std::string message;
  std::optional<OrbitRecord> record;
  DiscreteLoop final_loop;
  int iterations = 0;
  std::vector<double> period_trace;
  std::vector<double> action_trace;
  std::vector<double> eta_trace;
};

// Discretized pseudo-gradient flow of the action,
//   X = h(S) grad S / sqrt(1 + |grad S|^2),
// with the gradient taken in the H^1 metric int <V,W> + <V',W'> ds + tau sigma
// on the nodes and period. h vanishes below the action floor and rises
// linearly to 1 at twice the floor. The component along the lowest Hessian
// mode (estimated by finite differences in a reduced Fourier basis) is
// reflected when that mode is negative, so the flow settles on
// mountain-pass critical loops instead of sliding to constants.
SearchResult gradient_search(const ChartedSystem& sys, double k, const DiscreteLoop& initial,
                             const GradientSchedule& schedule = {});

}  // namespace magcurv
