#pragma once

#include <optional>

#include "flow/integrator.hpp"
#include "geom/tensors.hpp"

namespace magcurv {

// Closed loop with free period. Nodes are a continuous lift sampled at
// s_j = j / N; the lift closes up to `shift`, a lattice translation on
// periodic charts, so x(s + 1) = x(s) + shift. Time is t = s T.
struct DiscreteLoop {
  Mat nodes;  // n x N
  double T = 0.0;
  Vec shift;  // empty or zero for loops closed in the chart

  int dim() const { return static_cast<int>(nodes.rows()); }
  int size() const { return static_cast<int>(nodes.cols()); }
  Vec lattice_shift() const { return shift.size() ? shift : Vec::Zero(nodes.rows()); }
};

// Checks N >= 8, T > 0, finite entries, and that the shift is a lattice vector.
void validate_loop(const ChartedSystem& sys, const DiscreteLoop& loop);

// Resamples an orbit at N uniform times on [0, period].
DiscreteLoop loop_from_orbit(const ChartedSystem& sys, const Orbit& orbit, int N);

// Circle of radius r about c in the (x1, x2) plane, counterclockwise unless
// clockwise is set.
DiscreteLoop circle_loop(const Vec& center, double radius, double T, int N, bool clockwise = false);

Eigen::VectorXi loop_winding(const ChartedSystem& sys, const DiscreteLoop& loop);
bool is_contractible(const ChartedSystem& sys, const DiscreteLoop& loop);

// Variation (V, tau): one vector per node plus the period coefficient. When
// Vdot is set it is taken as the covariant derivative DV/dt at the nodes;
// otherwise it is computed spectrally from V.
struct Variation {
  Mat V;
  double tau = 0.0;
  std::optional<Mat> Vdot;
};

// Per-node geometry of a loop.
struct LoopSamples {
  int n = 0;
  int N = 0;
  double T = 0.0;
  Mat x;      // lift nodes
  Mat xdot;   // dx/dt
  Mat acc;    // covariant acceleration D(xdot)/dt
  Vec speed;  // |xdot|_g
  std::vector<PointJet> jets;

  double weight() const { return T / N; }  // trapezoid weight in t
};

LoopSamples sample_loop(const ChartedSystem& sys, const DiscreteLoop& loop, JetOrder order);

// Covariant derivative DV/dt of a smooth periodic field along the loop.
Mat covariant_derivative(const LoopSamples& ls, const Mat& V);
// The variation's DV/dt (explicit or spectral).
Mat variation_derivative(const LoopSamples& ls, const Variation& var);

// Free-period action: int (|x'|^2 / 2 + k) dt plus the magnetic term, the
// primitive line integral along the lift or, without a primitive, the flux
// through a cone capping disk (contractible loops only).
double action(const ChartedSystem& sys, const DiscreteLoop& loop, double k);
// The magnetic term alone, by each route.
double magnetic_term_primitive(const ChartedSystem& sys, const DiscreteLoop& loop);
double magnetic_term_capping(const ChartedSystem& sys, const DiscreteLoop& loop);

// eta_k(V, tau) = -int <D xdot/dt - Omega xdot, V> dt + (tau / T) int (k - |xdot|^2 / 2) dt.
double eta_k(const ChartedSystem& sys, const DiscreteLoop& loop, double k, const Variation& var);
double eta_k(const LoopSamples& ls, double k, const Variation& var);

// Dual-norm estimate of eta_k in the s-parametrized H^0 x R metric:
// sqrt(T^2 int |r|^2 ds + (int (k - |xdot|^2/2) dt / T)^2), r = D xdot/dt - Omega xdot.
double eta_norm(const LoopSamples& ls, double k);
double eta_norm(const ChartedSystem& sys, const DiscreteLoop& loop, double k);

// Critical-loop gate: eta_norm < 1e-5 (1 + T).
double eta_gate(double T);
void require_critical(const LoopSamples& ls, double k);

}  // namespace magcurv
