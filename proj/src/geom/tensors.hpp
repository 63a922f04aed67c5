#pragma once

#include "geom/system.hpp"

namespace magcurv {

// How much differential data a PointJet carries.
enum class JetOrder {
  Connection,  // g, g^-1, Gamma, Omega
  Covariant,   // + d(Omega), enough for nabla Omega
  Curvature,   // + d(Gamma), enough for the Riemann tensor
};

// Geometric data at one chart point. Index conventions:
//   gamma[k](i, j)      = Gamma^k_ij
//   omega(k, j)         = Omega^k_j  (Omega = g^-1 sigma)
//   d_omega[i]          = d_i Omega
//   d_gamma[m * n + k]  = d_m Gamma^k (matrix over i, j)
struct PointJet {
  Vec x;
  Mat g;
  Mat g_inv;
  Mat sigma;
  Mat omega;
  MatList gamma;
  MatList d_omega;
  MatList d_gamma;
  JetOrder order = JetOrder::Connection;

  int dim() const { return static_cast<int>(x.size()); }
  double inner(const Vec& a, const Vec& b) const { return a.dot(g * b); }
  double norm(const Vec& a) const;
};

PointJet evaluate_jet(const ChartedSystem& sys, const Vec& x, JetOrder order);

// Connection contraction Gamma^k_ij a^i b^j.
Vec contract_gamma(const PointJet& jet, const Vec& a, const Vec& b);
// Matrix (Gamma_a)^k_j = Gamma^k_ij a^i, so the covariant derivative of a
// field V along a curve with velocity a is dV/dt + Gamma_a V.
Mat gamma_matrix(const PointJet& jet, const Vec& a);

// R(u, v) w with R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
// so <R(u,v)v, u> is the sectional curvature of an orthonormal pair.
Vec riemann(const PointJet& jet, const Vec& u, const Vec& v, const Vec& w);
// Matrix of w -> R(w, a) b.
Mat riemann_matrix_first_slot(const PointJet& jet, const Vec& a, const Vec& b);

// Matrix of (nabla_w Omega) as a (1,1) tensor.
Mat nabla_omega_matrix(const PointJet& jet, const Vec& w);
// Matrix of w -> (nabla_w Omega)(v).
Mat nabla_omega_direction_matrix(const PointJet& jet, const Vec& v);

// Chart-level entry points.
MatList christoffel(const ChartedSystem& sys, const Vec& x);
Vec riemann(const ChartedSystem& sys, const Vec& x, const Vec& u, const Vec& v, const Vec& w);
Vec lorentz(const ChartedSystem& sys, const Vec& x, const Vec& w);
Vec nabla_omega(const ChartedSystem& sys, const Vec& x, const Vec& w, const Vec& v);

// Residual of the cyclic identity
// <(nabla_w Omega) v, z> + <(nabla_z Omega) w, v> + <(nabla_v Omega) z, w>,
// which vanishes because sigma is closed.
double cyclic_identity_residual(const PointJet& jet, const Vec& v, const Vec& w, const Vec& z);

// Orthonormal completion {v, e_2, ..., e_n} of a unit vector v in the metric
// of the jet, by Gram-Schmidt over coordinate vectors with pivoting on the
// largest residual. Column 0 is v. Throws "degenerate frame" on breakdown.
Mat orthonormal_completion(const PointJet& jet, const Vec& v);

}  // namespace magcurv
