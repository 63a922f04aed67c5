#pragma once

#include "loop/loop.hpp"

namespace magcurv {

// Per-node matrices H_t of the second variation in z = [V; DV/dt; tau], so
// that Q((V,tau), (W,sigma)) = sum_t (T/N) z_t^T H_t z'_t. The integrand is
//   <V' - Omega V, V'> - <R(V,xdot)xdot - (nabla_V Omega) xdot, V>
//   - <V', xdot>^2 / |xdot|^2 + (<V', xdot>/|xdot| - (tau/T)|xdot|)^2,
// with V' = DV/dt, symmetrized in the two arguments.
std::vector<Mat> hessian_kernels(const LoopSamples& ls);

// Node-stacked z_t for a variation (rows: 2n+1, columns: nodes).
Mat variation_stack(const LoopSamples& ls, const Variation& var);

double hessian_bilinear(const LoopSamples& ls, const std::vector<Mat>& kernels, const Variation& a,
                        const Variation& b);

// Q(V, tau) at a critical loop; fails with "not at a critical loop" when the
// eta gate is violated.
double hessian_form(const ChartedSystem& sys, const DiscreteLoop& loop, double k, const Variation& var);
double hessian_form(const LoopSamples& ls, double k, const Variation& var);

// The same form written with the magnetic curvature operator:
//   |(V')_2 - 1/2 (Omega V_1 + Omega V)_2|^2 - <M_k(u, V_2), V_2>
//   + (<V', xdot>/|xdot| - (tau/T)|xdot|)^2,
// u = xdot/|xdot|, subscripts 1 and 2 the projections on span(u) and its
// complement, 2k = |xdot|^2 pointwise. The curvature term uses the
// unnormalized form, so V_2 = 0 needs no special case.
double hessian_form_curvature(const ChartedSystem& sys, const DiscreteLoop& loop, double k,
                              const Variation& var);
double hessian_form_curvature(const LoopSamples& ls, double k, const Variation& var);

}  // namespace magcurv
