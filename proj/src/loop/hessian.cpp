#include "loop/hessian.hpp"

#include "magcurv/curvature.hpp"

namespace magcurv {

std::vector<Mat> hessian_kernels(const LoopSamples& ls) {
  const int n = ls.n;
  std::vector<Mat> out(static_cast<std::size_t>(ls.N));
  for (int j = 0; j < ls.N; ++j) {
    const PointJet& jet = ls.jets[j];
    if (jet.order != JetOrder::Curvature) fail(ErrorKind::Internal, "hessian needs curvature jets");
    const Vec v = ls.xdot.col(j);
    const double speed = ls.speed[j];
    const Vec gv = jet.g * v;
    const Mat C = riemann_matrix_first_slot(jet, v, v) - nabla_omega_direction_matrix(jet, v);

    Mat H = Mat::Zero(2 * n + 1, 2 * n + 1);
    H.block(n, n, n, n) = jet.g - gv * gv.transpose() / (speed * speed);
    H.block(0, n, n, n) = -0.5 * jet.omega.transpose() * jet.g;
    H.block(n, 0, n, n) = -0.5 * jet.g * jet.omega;
    H.block(0, 0, n, n) = -0.5 * (C.transpose() * jet.g + jet.g * C);
    Vec a = Vec::Zero(2 * n + 1);
    a.segment(n, n) = gv / speed;
    a[2 * n] = -speed / ls.T;
    H += a * a.transpose();
    out[static_cast<std::size_t>(j)] = H;
  }
  return out;
}

Mat variation_stack(const LoopSamples& ls, const Variation& var) {
  require(var.V.rows() == ls.n && var.V.cols() == ls.N, "variation has wrong shape");
  Mat Z(2 * ls.n + 1, ls.N);
  Z.topRows(ls.n) = var.V;
  Z.middleRows(ls.n, ls.n) = variation_derivative(ls, var);
  Z.bottomRows(1).setConstant(var.tau);
  return Z;
}

double hessian_bilinear(const LoopSamples& ls, const std::vector<Mat>& kernels, const Variation& a,
                        const Variation& b) {
  const Mat Za = variation_stack(ls, a);
  const Mat Zb = &a == &b ? Za : variation_stack(ls, b);
  double sum = 0.0;
  for (int j = 0; j < ls.N; ++j) sum += Za.col(j).dot(kernels[static_cast<std::size_t>(j)] * Zb.col(j));
  return ls.weight() * sum;
}

double hessian_form(const LoopSamples& ls, double k, const Variation& var) {
  require_critical(ls, k);
  const std::vector<Mat> kernels = hessian_kernels(ls);
  return hessian_bilinear(ls, kernels, var, var);
}

double hessian_form(const ChartedSystem& sys, const DiscreteLoop& loop, double k, const Variation& var) {
  return hessian_form(sample_loop(sys, loop, JetOrder::Curvature), k, var);
}

double hessian_form_curvature(const LoopSamples& ls, double k, const Variation& var) {
  require_critical(ls, k);
  const Mat Vd = variation_derivative(ls, var);
  double sum = 0.0;
  for (int j = 0; j < ls.N; ++j) {
    const PointJet& jet = ls.jets[j];
    const Vec xdot = ls.xdot.col(j);
    const double speed = ls.speed[j];
    const Vec u = xdot / speed;
    const Vec V = var.V.col(j);
    const Vec dV = Vd.col(j);
    auto normal = [&](const Vec& X) { return Vec(X - jet.inner(X, u) * u); };
    const Vec V1 = jet.inner(V, u) * u;
    const Vec V2 = V - V1;

    const Vec first = normal(dV - 0.5 * (jet.omega * V1 + jet.omega * V));
    const double kk = 0.5 * speed * speed;
    const double curv = m_form(jet, u, V2, kk);
    const double sq = jet.inner(dV, xdot) / speed - var.tau / ls.T * speed;
    sum += jet.inner(first, first) - curv + sq * sq;
  }
  return ls.weight() * sum;
}

double hessian_form_curvature(const ChartedSystem& sys, const DiscreteLoop& loop, double k,
                              const Variation& var) {
  return hessian_form_curvature(sample_loop(sys, loop, JetOrder::Curvature), k, var);
}

}  // namespace magcurv
