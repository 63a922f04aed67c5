#include "loop/index.hpp"

#include <cmath>
#include <sstream>

#include "common/format.hpp"
#include "common/parallel.hpp"
#include "loop/hessian.hpp"

namespace magcurv {
namespace {

std::vector<Mat> frame_fields(const LoopSamples& ls, IndexFrame frame) {
  const int n = ls.n;
  std::vector<Mat> fields;
  if (frame == IndexFrame::Coordinate) {
    for (int a = 0; a < n; ++a) {
      Mat E = Mat::Zero(n, ls.N);
      E.row(a).setOnes();
      fields.push_back(E);
    }
    return fields;
  }
  require(n == 2, "velocity-adapted frame is only available on surfaces");
  Mat U(2, ls.N), JU(2, ls.N);
  for (int j = 0; j < ls.N; ++j) {
    const PointJet& jet = ls.jets[j];
    const Vec u = ls.xdot.col(j) / ls.speed[j];
    const double root = std::sqrt(jet.g.determinant());
    Mat mu(2, 2);
    mu << 0.0, root, -root, 0.0;
    U.col(j) = u;
    JU.col(j) = jet.g_inv * mu * u;
  }
  fields.push_back(U);
  fields.push_back(JU);
  return fields;
}

}  // namespace

IndexReport morse_index(const ChartedSystem& sys, const DiscreteLoop& loop, double k, int m,
                        const IndexOptions& opt) {
  require(m >= 0, "mode count must be nonnegative");
  require(opt.relative_threshold > 0.0, "index threshold must be positive");
  const LoopSamples ls = sample_loop(sys, loop, JetOrder::Curvature);
  require_critical(ls, k);
  require(2 * m + 1 < ls.N, "mode count too large for the node count");
  const int n = ls.n;

  std::vector<Variation> basis;
  const std::vector<Mat> frames = frame_fields(ls, opt.frame);
  for (const Mat& E : frames) {
    for (int j = 0; j <= m; ++j) {
      for (int p = 0; p < (j == 0 ? 1 : 2); ++p) {
        Mat V = E;
        for (int i = 0; i < ls.N; ++i) {
          const double a = 2.0 * M_PI * j * i / ls.N;
          V.col(i) *= j == 0 ? 1.0 : (p == 0 ? std::cos(a) : std::sin(a));
        }
        basis.push_back({V, 0.0, {}});
      }
    }
  }
  basis.push_back({Mat::Zero(n, ls.N), 1.0, {}});
  const int B = static_cast<int>(basis.size());

  std::vector<Mat> stacks(static_cast<std::size_t>(B));
  parallel_for(stacks.size(), [&](std::size_t b) { stacks[b] = variation_stack(ls, basis[b]); });

  const std::vector<Mat> kernels = hessian_kernels(ls);
  // Z[j] holds the stacked basis at node j.
  std::vector<Mat> Z(static_cast<std::size_t>(ls.N), Mat(2 * n + 1, B));
  for (int b = 0; b < B; ++b)
    for (int j = 0; j < ls.N; ++j) Z[static_cast<std::size_t>(j)].col(b) = stacks[static_cast<std::size_t>(b)].col(j);

  const unsigned chunks = std::max(1u, std::min<unsigned>(default_thread_count(), static_cast<unsigned>(ls.N)));
  std::vector<Mat> partH(chunks, Mat::Zero(B, B)), partG(chunks, Mat::Zero(B, B));
  parallel_for(chunks, [&](std::size_t c) {
    for (int j = static_cast<int>(c); j < ls.N; j += static_cast<int>(chunks)) {
      const Mat& Zj = Z[static_cast<std::size_t>(j)];
      partH[c].noalias() += Zj.transpose() * kernels[static_cast<std::size_t>(j)] * Zj;
      const Mat& g = ls.jets[static_cast<std::size_t>(j)].g;
      const auto V = Zj.topRows(n);
      const auto D = Zj.middleRows(n, n);
      partG[c].noalias() += V.transpose() * g * V + ls.T * ls.T * D.transpose() * g * D;
    }
  });
  Mat H = Mat::Zero(B, B), G = Mat::Zero(B, B);
  for (unsigned c = 0; c < chunks; ++c) {
    H += partH[c];
    G += partG[c];
  }
  H *= ls.weight();
  G /= ls.N;
  G(B - 1, B - 1) += 1.0;
  H = 0.5 * (H + H.transpose());
  G = 0.5 * (G + G.transpose());

  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(H, G);
  if (solver.info() != Eigen::Success) fail(ErrorKind::NotConverged, "generalized eigen-solver failed");

  IndexReport r;
  r.mode_count = m;
  r.dimension = B;
  r.nodes = ls.N;
  r.frame = opt.frame == IndexFrame::Coordinate ? "coordinate" : "velocity_adapted";
  r.eigenvalues = solver.eigenvalues();
  r.epsilon = opt.relative_threshold * r.eigenvalues.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
    const double l = r.eigenvalues[i];
    if (l < -r.epsilon)
      ++r.negative;
    else if (l <= r.epsilon)
      ++r.near_zero;
    else
      ++r.positive;
  }
  if (opt.keep_matrices) {
    r.hessian = H;
    r.gram = G;
  }
  return r;
}

nlohmann::json index_json(const IndexReport& r) {
  nlohmann::json j;
  j["index"] = r.negative;
  j["mode_count"] = r.mode_count;
  j["dimension"] = r.dimension;
  j["nodes"] = r.nodes;
  j["frame"] = r.frame;
  j["negative"] = r.negative;
  j["near_zero"] = r.near_zero;
  j["positive"] = r.positive;
  j["epsilon"] = r.epsilon;
  j["eigenvalues"] = std::vector<double>(r.eigenvalues.data(), r.eigenvalues.data() + r.eigenvalues.size());
  if (r.hessian.size()) {
    nlohmann::json h = nlohmann::json::array(), g = nlohmann::json::array();
    for (Eigen::Index i = 0; i < r.hessian.rows(); ++i) {
      h.push_back(std::vector<double>(r.hessian.cols()));
      g.push_back(std::vector<double>(r.gram.cols()));
      for (Eigen::Index c = 0; c < r.hessian.cols(); ++c) {
        h.back()[c] = r.hessian(i, c);
        g.back()[c] = r.gram(i, c);
      }
    }
    j["hessian"] = h;
    j["gram"] = g;
  }
  return j;
}

std::string spectrum_csv(const IndexReport& r) {
  std::ostringstream os;
  os << "i,eigenvalue,class\n";
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
    const double l = r.eigenvalues[i];
    os << i << "," << fmt(l) << "," << (l < -r.epsilon ? "negative" : (l <= r.epsilon ? "near_zero" : "positive"))
       << "\n";
  }
  return os.str();
}

}  // namespace magcurv
