#pragma once

#include "loop/loop.hpp"

namespace magcurv {

// W = V + g xdot with tau = int <V', xdot>/|xdot|^2 dt and
// g(t) = -int_0^t (<V', xdot>/|xdot|^2 - tau/T), so g(0) = g(T) = 0 and the
// last square of the Hessian vanishes pointwise. V must be normal to xdot.
// With an explicit Vdot the primitive is taken by the trapezoid rule,
// otherwise spectrally. The result carries its derivative explicitly.
struct TestVariation {
  Variation W;
  Vec g;  // per node
};

TestVariation make_test_variation(const LoopSamples& ls, const Mat& V, const std::optional<Mat>& Vdot = {});

// Omega~ applied to V at each node (the transport right-hand side).
Mat omega_tilde_along(const LoopSamples& ls, const Mat& V);

// Window j of m + 1 windows covering the loop. Edges are snapped to the
// midpoints between nodes, so the node-sum quadrature stays second order
// across the kinks; lengths differ from T / (m + 1) by at most one spacing.
struct SineWindow {
  Vec f;
  Vec fdot;
  double start = 0.0;
  double length = 0.0;
};
SineWindow sine_window(const LoopSamples& ls, int j, int m);

// f_j V passed through make_test_variation, where V is a transported unit
// normal field (DV/dt = Omega~ V, supplied at the nodes).
TestVariation sine_mode_variation(const LoopSamples& ls, const Mat& V, int j, int m);

}  // namespace magcurv
