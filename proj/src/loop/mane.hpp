#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "geom/system.hpp"

namespace magcurv {

// Nested boxes center +- radius in every coordinate.
struct ManeOptions {
  Vec center;                                // default: origin
  std::vector<double> radii{1, 2, 4, 8, 16};  // increasing
  int samples = 2048;                        // per box, plus the box corners
  std::uint64_t seed = 1;
};

struct ManeReport {
  double bound = 0.0;  // 1/2 (sup |theta|_g)^2 over the largest box
  std::vector<double> radii;
  std::vector<double> sup_norm;  // per box
  bool monotone_growth = false;  // strictly increasing across the boxes
  bool unbounded_evidence = false;
  std::string message;
};

// Upper bound for the critical value from the pointwise estimate
// |xdot|^2/2 + k + theta(xdot) >= k - |theta|^2/2.
ManeReport mane_upper_bound(const ChartedSystem& sys, const ManeOptions& opt = {});

nlohmann::json mane_json(const ManeReport& r);

}  // namespace magcurv
