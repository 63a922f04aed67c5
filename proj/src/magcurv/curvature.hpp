#pragma once

#include <optional>

#include "geom/tensors.hpp"

namespace magcurv {

// Unit and orthogonality tolerance for frame arguments.
inline constexpr double kFrameTolerance = 1e-12;

// Throws "frame violation" unless |v| = 1 and, when w is given, <v, w> = 0
// (and |w| = 1 if unit_w).
void check_frame(const PointJet& jet, const Vec& v, const Vec* w = nullptr, bool unit_w = false);

// A(v, w) = 3/4 <w, Omega v> Omega v - 1/4 Omega^2 w - 1/4 <Omega w, Omega v> v
Vec a_omega(const PointJet& jet, const Vec& v, const Vec& w);
// R_k(v, w) = 2k R(w,v)v - sqrt(2k) [(nabla_w Omega) v - 1/2 (nabla_v Omega) w
//             + 1/2 <(nabla_v Omega) w, v> v]
Vec r_omega_k(const PointJet& jet, const Vec& v, const Vec& w, double k);
// M_k = R_k + A
Vec m_omega_k(const PointJet& jet, const Vec& v, const Vec& w, double k);

// Closed form 2k Sec(v,w) - sqrt(2k) <(nabla_w Omega) v, w> + 3/4 <w, Omega v>^2
// + 1/4 |Omega w|^2 for an orthonormal pair.
double sec_omega_k(const PointJet& jet, const Vec& v, const Vec& w, double k);
// <M_k(v, w), w> for unit v and any w orthogonal to v (no normalization of w).
double m_form(const PointJet& jet, const Vec& v, const Vec& w, double k);

// Trace of w -> <M_k(v,w), w> over an orthonormal basis of v-perp.
double ric_omega_k(const PointJet& jet, const Vec& v, double k);
// Same quantity from 2k Ric(v) - sqrt(2k) tr(w -> (nabla_w Omega) v) + tr A,
// using coordinate traces only.
double ric_omega_k_trace(const PointJet& jet, const Vec& v, double k);
// Same quantity summed over the given basis of v-perp (columns of `basis`).
double ric_omega_k_in_basis(const PointJet& jet, const Vec& v, const Mat& basis, double k);

// Sum over e_2..e_n of <e_i, Omega v>^2 + 1/4 sum_ij <Omega e_i, e_j>^2.
double trace_a_omega(const PointJet& jet, const Vec& v);
// Basis-free form 1/2 |Omega v|^2 - 1/4 tr(Omega^2).
double trace_a_omega_closed(const PointJet& jet, const Vec& v);

// Matrix of w -> M_k(v, w) restricted to v-perp, in the orthonormal basis
// given by columns 1..n-1 of orthonormal_completion(v).
Mat m_omega_restricted(const PointJet& jet, const Vec& v, double k);

// The k-independent pieces of the sectional curvature of an orthonormal pair,
// so that Sec_k = 2k * riemann - sqrt(2k) * nabla + magnetic.
struct SecParts {
  double riemann = 0.0;
  double nabla = 0.0;
  double magnetic = 0.0;
  double at(double k) const { return 2.0 * k * riemann - std::sqrt(2.0 * k) * nabla + magnetic; }
};
SecParts sec_parts(const PointJet& jet, const Vec& v, const Vec& w);
// Same decomposition of Ric_k(v).
SecParts ric_parts(const PointJet& jet, const Vec& v);

struct CurvatureSample {
  Vec x;
  Vec v;
  std::optional<Vec> w;
  double k = 0.0;
  std::optional<double> sec;
  double ric = 0.0;
  double trace_a = 0.0;
};

CurvatureSample curvature_sample(const ChartedSystem& sys, const Vec& x, const Vec& v,
                                 const std::optional<Vec>& w, double k);

// Chart-level wrappers.
Vec a_omega(const ChartedSystem& sys, const Vec& x, const Vec& v, const Vec& w);
Vec r_omega_k(const ChartedSystem& sys, const Vec& x, const Vec& v, const Vec& w, double k);
double sec_omega_k(const ChartedSystem& sys, const Vec& x, const Vec& v, const Vec& w, double k);
double ric_omega_k(const ChartedSystem& sys, const Vec& x, const Vec& v, double k);
double trace_a_omega(const ChartedSystem& sys, const Vec& x, const Vec& v);

// Surface data at a point of an oriented 2-dimensional chart: Gauss
// curvature K, the density b with sigma = b mu (mu the Riemannian area form),
// its differential, and the rotation J = g^-1 mu so that Omega = b J.
struct SurfaceFields {
  double K = 0.0;
  double b = 0.0;
  Vec db;
  Mat J;
};

SurfaceFields surface_fields(const ChartedSystem& sys, const Vec& x);

// 2k K - sqrt(2k) db(J v) + b^2.
double surface_sec_b(double K, double b, const Vec& db, const Vec& Jv, double k);
double surface_sec_b(const SurfaceFields& s, const Vec& v, double k);

}  // namespace magcurv
