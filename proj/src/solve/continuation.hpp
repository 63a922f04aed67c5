#pragma once

#include "solve/shoot.hpp"

namespace magcurv {

struct Family {
  std::vector<OrbitRecord> records;
  bool truncated = false;
  std::string diagnostic;
};

// Predictor-corrector continuation in k from a certified record: the
// predictor keeps the initial point and direction, rescales the speed to
// sqrt(2k) and extrapolates T linearly from the last two members; shoot is
// the corrector. A corrector failure truncates the family (fold or branch
// loss) with a diagnostic.
Family continue_in_k(const ChartedSystem& sys, const OrbitRecord& start, const std::vector<double>& k_grid,
                     const ShootOptions& opt = {});

}  // namespace magcurv
