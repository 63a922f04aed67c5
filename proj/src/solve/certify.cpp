#include "solve/certify.hpp"

#include <cmath>
#include <sstream>

namespace magcurv {

void certify(const ChartedSystem& sys, OrbitRecord& r) {
  require(r.found, "cannot certify a record without an orbit");
  if (!r.index) fail(ErrorKind::InvalidArgument, "missing index; certification needs the Morse index");
  r.checks.clear();

  auto gate = [&](const std::string& name, double value, double bound) {
    Check c;
    c.name = name;
    c.applicable = true;
    c.value = value;
    c.bound = bound;
    c.margin = bound - value;
    c.pass = value < bound;
    r.checks.push_back(c);
  };
  gate("energy_residual", r.energy_residual, kEnergyGate);
  gate("closure_residual", r.closure_residual, kClosureGate);
  gate("eta_residual", r.eta_residual, eta_gate(r.T));

  const int m = r.index->negative;
  {
    Check c;
    c.name = "bonnet_myers";
    c.value = r.T;
    c.applicable = r.min_ric > 0.0;
    if (c.applicable) {
      const double radius = 1.0 / std::sqrt(r.min_ric);
      c.bound = radius * M_PI * (m + 1);
      c.margin = c.bound - r.T;
      c.pass = r.T <= c.bound * (1.0 + kBonnetMyersSlack);
      std::ostringstream os;
      os << "T = " << r.T << " vs r pi (m+1) = " << c.bound << " with r = " << radius << ", m = " << m;
      c.detail = os.str();
    } else {
      c.detail = "min Ric_k <= 0 along the orbit; bound not applicable";
    }
    r.checks.push_back(c);
  }
  {
    Check c;
    c.name = "synge";
    c.value = m;
    c.bound = 1.0;
    c.applicable = sys.dimension() % 2 == 0 && sys.oriented() && r.min_sec > 0.0;
    if (c.applicable) {
      c.pass = m >= 1;
      c.margin = m - 1.0;
      c.detail = "even-dimensional, oriented, min Sec_k = " + std::to_string(r.min_sec) + " > 0";
    } else {
      c.detail = "needs even dimension, orientation and min Sec_k > 0";
    }
    r.checks.push_back(c);
  }
  {
    Check c;
    c.name = "contractibility";
    c.applicable = sys.has_lattice();
    const Eigen::VectorXi target =
        r.target_winding.size() ? r.target_winding : Eigen::VectorXi::Zero(sys.dimension());
    c.value = (r.winding - target).cwiseAbs().sum();
    c.pass = c.value == 0.0;
    c.detail = r.winding.isZero() ? "winding vector zero (contractible)" : "non-zero winding vector";
    r.checks.push_back(c);
  }
}

bool all_checks_pass(const OrbitRecord& r) {
  if (!r.found || !r.certified) return false;
  for (const Check& c : r.checks)
    if (c.applicable && !c.pass) return false;
  return true;
}

}  // namespace magcurv
