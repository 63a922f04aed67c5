#include "solve/continuation.hpp"

#include <sstream>

namespace magcurv {

Family continue_in_k(const ChartedSystem& sys, const OrbitRecord& start, const std::vector<double>& k_grid,
                     const ShootOptions& opt) {
  Family fam;
  if (k_grid.empty()) return fam;
  require(start.found, "continuation needs a found starting record");
  for (double k : k_grid) require(k > 0.0 && std::isfinite(k), "k grid entries must be positive");

  ShootOptions so = opt;
  if (!so.target_winding.size()) so.target_winding = start.target_winding;

  std::vector<std::pair<double, double>> history{{start.k, start.T}};
  PhaseState prev = start.initial;
  for (double k : k_grid) {
    double T = history.back().second;
    if (history.size() >= 2) {
      const auto [k1, T1] = history[history.size() - 2];
      const auto [k2, T2] = history.back();
      if (k2 != k1) T = T2 + (T2 - T1) * (k - k2) / (k2 - k1);
      if (!(T > 0.0)) T = T2;
    }
    const PhaseState seed = on_energy_level(sys, prev, k);
    OrbitRecord r;
    try {
      r = shoot(sys, k, seed, T, so);
    } catch (const Error& e) {
      r = not_found_record(k, e.what());
    }
    if (!r.found) {
      fam.truncated = true;
      std::ostringstream os;
      os << "corrector failed at k = " << k << " (fold or branch loss): " << r.message;
      fam.diagnostic = os.str();
      break;
    }
    history.emplace_back(k, r.T);
    prev = r.initial;
    fam.records.push_back(std::move(r));
  }
  return fam;
}

}  // namespace magcurv
