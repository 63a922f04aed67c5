#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "geom/system.hpp"

namespace magcurv {

// Positivity guard: a sampled minimum counts as positive only above this.
inline constexpr double kPositivityGuard = 1e-12;

// Axis-aligned coordinate box sampled by the scans.
struct ScanRegion {
  Vec lower;
  Vec upper;
};

// Fundamental domain on periodic coordinates, [-1, 1] elsewhere.
ScanRegion default_scan_region(const ChartedSystem& sys);

struct ScanReport {
  std::vector<double> k_grid;
  std::vector<double> min_sec;
  std::vector<double> min_ric;
  VecList argmin_sec;
  VecList argmin_ric;
  // Largest grid value of the positive prefix; 0 when the first entry fails.
  double k0_sec = 0.0;
  double k0_ric = 0.0;
  std::size_t prefix_sec = 0;
  std::size_t prefix_ric = 0;
  std::size_t samples = 0;   // accepted points
  std::size_t rejected = 0;  // points outside the chart domain
  std::uint64_t seed = 0;
};

// Samples points by a seeded, randomly shifted Halton sequence over the
// region and, at each point, one random orthonormal pair (v, w) in the
// metric. Minima are under-approximations of the true infima.
ScanReport positivity_scan(const ChartedSystem& sys, const std::vector<double>& k_grid,
                           std::size_t sample_budget, std::uint64_t seed,
                           const ScanRegion& region);
ScanReport positivity_scan(const ChartedSystem& sys, const std::vector<double>& k_grid,
                           std::size_t sample_budget, std::uint64_t seed);

std::string scan_csv(const ScanReport& r);
nlohmann::json scan_json(const ScanReport& r);

struct TheoremBOptions {
  int grid = 32;        // points per axis
  int directions = 24;  // unit directions per point
  int k_samples = 16;   // energies k0 * j / (k_samples + 1), j = 1..k_samples
  double b_zero_tolerance = 1e-12;
};

struct TheoremBReport {
  double k0 = 0.0;
  int grid = 0;
  int directions = 0;
  int k_samples = 0;
  bool positivity = false;  // min Sec_k > guard over all samples
  double min_sec = 0.0;
  Vec argmin_x;
  Vec argmin_v;
  double argmin_k = 0.0;
  std::size_t points = 0;
  VecList zero_set;  // grid points where |b| <= tolerance
  bool b_nowhere_zero = false;
  bool b_identically_zero = false;
  // Set when positivity holds while b has both zeros and non-zeros; this is a
  // resolution issue of the sampled scan, not a counterexample.
  std::string warning;

  // Accepted grid cells in scan order.
  struct Cell {
    Vec x;
    double b = 0.0;
    double min_sec = 0.0;
  };
  std::vector<Cell> cells;
};

TheoremBReport theorem_b_scan(const ChartedSystem& sys, double k0, const ScanRegion& region,
                              const TheoremBOptions& opt = {});

nlohmann::json theorem_b_json(const TheoremBReport& r);
// Columns: x1, x2, b, min_sec, b_zero.
std::string theorem_b_csv(const TheoremBReport& r, double b_zero_tolerance = 1e-12);

}  // namespace magcurv
