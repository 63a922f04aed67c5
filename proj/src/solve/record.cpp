#include "solve/record.hpp"

#include <cmath>
#include <sstream>

#include "common/format.hpp"
#include "magcurv/curvature.hpp"

namespace magcurv {

std::pair<double, double> curvature_minima(const ChartedSystem& sys, const DiscreteLoop& loop, double k) {
  const LoopSamples ls = sample_loop(sys, loop, JetOrder::Curvature);
  double min_ric = std::numeric_limits<double>::infinity();
  double min_sec = std::numeric_limits<double>::infinity();
  for (int j = 0; j < ls.N; ++j) {
    const PointJet& jet = ls.jets[j];
    if (!(ls.speed[j] > 0.0)) fail(ErrorKind::Degenerate, "singular parametrization");
    Vec u = ls.xdot.col(j) / ls.speed[j];
    u /= jet.norm(u);
    min_ric = std::min(min_ric, ric_omega_k_trace(jet, u, k));
    const Mat M = m_omega_restricted(jet, u, k);
    const Mat S = 0.5 * (M + M.transpose());
    min_sec = std::min(min_sec, Eigen::SelfAdjointEigenSolver<Mat>(S).eigenvalues().minCoeff());
  }
  return {min_ric, min_sec};
}

OrbitRecord not_found_record(double k, const std::string& message) {
  OrbitRecord r;
  r.k = k;
  r.status = "not found";
  r.message = message;
  return r;
}

OrbitRecord make_record(const ChartedSystem& sys, double k, const PhaseState& initial, double T,
                        const RecordOptions& opt) {
  OrbitRecord r;
  r.found = true;
  r.k = k;
  r.T = T;
  r.initial = initial;
  IntegrateOptions io;
  io.tolerance = opt.tolerance;
  io.samples = opt.nodes;
  r.orbit = integrate(sys, initial, T, io);
  r.closure_residual = r.orbit.closure_residual;
  r.winding = r.orbit.winding;
  r.target_winding = Eigen::VectorXi::Zero(sys.dimension());
  r.contractible = r.winding.isZero();
  r.energy_residual = std::abs(r.orbit.k - k) + r.orbit.energy_drift;
  r.loop = loop_from_orbit(sys, r.orbit, opt.nodes);
  r.eta_residual = eta_norm(sys, r.loop, k);
  std::tie(r.min_ric, r.min_sec) = curvature_minima(sys, r.loop, k);
  const bool gates = r.energy_residual < kEnergyGate && r.closure_residual < kClosureGate &&
                     r.eta_residual < eta_gate(T);
  if (opt.compute_index && r.eta_residual < eta_gate(T)) r.index = morse_index(sys, r.loop, k, opt.modes);
  r.certified = gates;
  r.status = gates ? "certified" : "uncertified";
  if (!gates) {
    std::ostringstream os;
    os << "residual gates failed: energy " << r.energy_residual << ", closure " << r.closure_residual << ", eta "
       << r.eta_residual;
    r.message = os.str();
  }
  return r;
}

nlohmann::json record_json(const ChartedSystem& sys, const OrbitRecord& r, bool include_samples) {
  nlohmann::json j;
  j["status"] = r.status;
  j["found"] = r.found;
  j["certified"] = r.certified;
  j["message"] = r.message;
  j["k"] = r.k;
  if (!r.found) return j;
  j["T"] = r.T;
  j["x0"] = std::vector<double>(r.initial.x.data(), r.initial.x.data() + r.initial.x.size());
  j["v0"] = std::vector<double>(r.initial.v.data(), r.initial.v.data() + r.initial.v.size());
  j["closure_residual"] = r.closure_residual;
  j["energy_residual"] = r.energy_residual;
  j["eta_residual"] = r.eta_residual;
  j["winding"] = std::vector<int>(r.winding.data(), r.winding.data() + r.winding.size());
  j["contractible"] = r.contractible;
  j["min_ric"] = r.min_ric;
  j["min_sec"] = r.min_sec;
  j["iterations"] = r.iterations;
  if (r.index) j["index"] = index_json(*r.index);
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"applicable", c.applicable},
                      {"pass", c.pass},
                      {"value", c.value},
                      {"bound", c.bound},
                      {"margin", c.margin},
                      {"detail", c.detail}});
  j["checks"] = checks;
  j["orbit"] = orbit_json(sys, r.orbit, include_samples);
  return j;
}

std::string records_csv(const std::vector<OrbitRecord>& records) {
  std::ostringstream os;
  os << "k,T,index,min_ric,min_sec,status,checks\n";
  for (const OrbitRecord& r : records) {
    std::string checks;
    bool all = true;
    for (const Check& c : r.checks)
      if (c.applicable && !c.pass) all = false;
    checks = r.checks.empty() ? "none" : (all ? "pass" : "fail");
    os << fmt(r.k) << "," << (r.found ? fmt(r.T) : "") << "," << (r.index ? std::to_string(r.index->negative) : "")
       << "," << (r.found ? fmt(r.min_ric) : "") << "," << (r.found ? fmt(r.min_sec) : "") << "," << r.status << ","
       << checks << "\n";
  }
  return os.str();
}

}  // namespace magcurv
