#pragma once

#include "flow/integrator.hpp"

namespace magcurv {

// Omega~(V) = Omega(V_1) + (Omega V)_1 + 1/2 (Omega V_2)_2, with V_1 the
// g-orthogonal projection of V on span(v) and V_2 = V - V_1.
Vec omega_tilde(const ChartedSystem& sys, const PhaseState& s, const Vec& V);
// Matrix form at a point where g and Omega are already known.
Mat omega_tilde_matrix(const Mat& g, const Mat& omega, const Vec& v);

struct TransportResult {
  std::vector<double> t;
  std::vector<Mat> fields;  // fields[i] columns: transported vectors at t[i]
  Mat end;                  // columns at t = T
  std::size_t steps = 0;

  Vec field(std::size_t i, int column = 0) const { return fields[i].col(column); }
};

// Solves DV/dt = Omega~(V) along the orbit for every column of V0, using the
// quintic interpolant of the stored samples for the base curve. Outputs are
// returned at the orbit sample times.
TransportResult magnetic_transport(const ChartedSystem& sys, const Orbit& orbit, const Mat& V0,
                                   double tolerance = 1e-11);

// End map P with V(T) = P V(0), from transporting the coordinate basis.
Mat transport_end_map(const ChartedSystem& sys, const Orbit& orbit, double tolerance = 1e-11);

}  // namespace magcurv
