#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flow/integrator.hpp"
#include "loop/index.hpp"
#include "loop/loop.hpp"

namespace magcurv {

struct Check {
  std::string name;
  bool applicable = false;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  std::string detail;
};

// Gates for certified status.
inline constexpr double kEnergyGate = 1e-8;
inline constexpr double kClosureGate = 1e-7;

struct OrbitRecord {
  bool found = false;
  bool certified = false;
  std::string status;  // "certified", "uncertified", "not found"
  std::string message;

  double k = 0.0;
  double T = 0.0;
  PhaseState initial;
  Orbit orbit;
  DiscreteLoop loop;
  double closure_residual = 0.0;
  double energy_residual = 0.0;
  double eta_residual = 0.0;
  std::optional<IndexReport> index;
  Eigen::VectorXi winding;
  Eigen::VectorXi target_winding;
  bool contractible = false;
  double min_ric = 0.0;
  double min_sec = 0.0;
  std::vector<Check> checks;
  int iterations = 0;
};

struct RecordOptions {
  int nodes = 512;
  int modes = 32;
  bool compute_index = true;
  double tolerance = 1e-12;
};

// Integrates one period from `initial`, resamples the loop and fills the
// residuals, winding, curvature minima along the orbit and (optionally) the
// Morse index.
OrbitRecord make_record(const ChartedSystem& sys, double k, const PhaseState& initial, double T,
                        const RecordOptions& opt = {});

OrbitRecord not_found_record(double k, const std::string& message);

// Minimum over the loop nodes of Ric_k(u) and of Sec_k(u, w), w in u-perp,
// with u = xdot/|xdot|.
std::pair<double, double> curvature_minima(const ChartedSystem& sys, const DiscreteLoop& loop, double k);

nlohmann::json record_json(const ChartedSystem& sys, const OrbitRecord& r, bool include_samples = false);
std::string records_csv(const std::vector<OrbitRecord>& records);

}  // namespace magcurv
