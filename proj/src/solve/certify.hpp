#pragma once

#include "solve/record.hpp"

namespace magcurv {

// Relative slack of the Bonnet-Myers comparison.
inline constexpr double kBonnetMyersSlack = 1e-3;

// Fills record.checks:
//   residual gates (energy, closure, eta);
//   bonnet_myers: T <= r pi (index + 1)(1 + slack), 1/r^2 = min Ric_k along
//     the orbit, applicable when min Ric_k > 0;
//   synge: index >= 1, applicable on even-dimensional oriented charts with
//     min Sec_k > 0 along the orbit;
//   contractibility: the winding vector matches the requested class (zero
//     for the contractible orbits of the existence theorem), lattice charts.
// Throws when the record has no index.
void certify(const ChartedSystem& sys, OrbitRecord& record);

bool all_checks_pass(const OrbitRecord& record);

}  // namespace magcurv
