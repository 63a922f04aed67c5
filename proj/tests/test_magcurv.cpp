#include <doctest.h>

#include <cmath>
#include <random>

#include "geom/builtins.hpp"
#include "magcurv/curvature.hpp"
#include "magcurv/scan.hpp"
#include "support.hpp"

using namespace magcurv;

namespace {

// Random unit v and unit w orthogonal to v at x.
std::pair<Vec, Vec> random_pair(const PointJet& jet, std::mt19937_64& rng) {
  const int n = jet.dim();
  const Mat f = orthonormal_completion(jet, random_vec(rng, n));
  Vec c = random_vec(rng, n - 1);
  c /= c.norm();
  Vec w = f.rightCols(n - 1) * c;
  w /= jet.norm(w);
  return {f.col(0), w};
}

// Surface with curved metric and non-constant density b:
// g = e^{2u} I with u = 0.3 sin x1 cos x2, sigma = (1 + 0.5 sin(x1 + x2)) e^{2u} dx1 ^ dx2.
ChartedSystem curved_surface() {
  ExpressionSystemSpec s;
  s.metric = {"exp(0.6*sin(x1)*cos(x2))", "0", "0", "exp(0.6*sin(x1)*cos(x2))"};
  s.two_form = {"(1 + 0.5*sin(x1 + x2))*exp(0.6*sin(x1)*cos(x2))"};
  s.name = "curved_surface";
  return make_expression_system(s);
}

}  // namespace

TEST_CASE("sec and ric: closed-form benchmark values") {
  std::mt19937_64 rng(1);
  for (double k : {0.1, 0.5, 2.0}) {
    for (int i = 0; i < 20; ++i) {
      Vec x = random_vec(rng, 2) * 0.5;
      // Flat torus, constant b: 3/4 b^2 + 1/4 b^2.
      const PointJet t = evaluate_jet(flat_torus(1.7), x, JetOrder::Curvature);
      auto [v, w] = random_pair(t, rng);
      CHECK(std::abs(sec_omega_k(t, v, w, k) - 1.7 * 1.7) < 1e-12);
      CHECK(std::abs(ric_omega_k(t, v, k) - 1.7 * 1.7) < 1e-12);
      // Round sphere: 2k K + b^2 with K = 1.
      const PointJet s = evaluate_jet(round_sphere(0.6), x, JetOrder::Curvature);
      std::tie(v, w) = random_pair(s, rng);
      CHECK(std::abs(sec_omega_k(s, v, w, k) - (2 * k + 0.36)) < 1e-11);
      // Hyperbolic chart: K = -1, density b constant.
      x[1] = 0.5 + std::abs(x[1]);
      const PointJet h = evaluate_jet(hyperbolic_chart(0.9), x, JetOrder::Curvature);
      std::tie(v, w) = random_pair(h, rng);
      CHECK(std::abs(sec_omega_k(h, v, w, k) - (-2 * k + 0.81)) < 1e-11);
    }
  }
}

TEST_CASE("sec: closed form equals <M_k(v,w), w> built from its pieces") {
  for (std::uint64_t seed : {21u, 22u}) {
    const ChartedSystem s = random_system3(seed, true);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 30; ++i) {
      const PointJet jet = evaluate_jet(s, random_vec(rng, 3), JetOrder::Curvature);
      const auto [v, w] = random_pair(jet, rng);
      for (double k : {0.05, 0.5, 3.0}) {
        const double a = sec_omega_k(jet, v, w, k);
        const double b = jet.inner(m_omega_k(jet, v, w, k), w);
        CHECK(std::abs(a - b) < 1e-10 * (1 + std::abs(a)));
        CHECK(std::abs(sec_parts(jet, v, w).at(k) - a) < 1e-10 * (1 + std::abs(a)));
        // R_k + A split.
        const double r = jet.inner(r_omega_k(jet, v, w, k), w) + jet.inner(a_omega(jet, v, w), w);
        CHECK(std::abs(r - a) < 1e-10 * (1 + std::abs(a)));
      }
    }
  }
}

TEST_CASE("ric: basis sum, coordinate trace and basis independence agree") {
  const ChartedSystem s = random_system3(23, true);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 30; ++i) {
    const PointJet jet = evaluate_jet(s, random_vec(rng, 3), JetOrder::Curvature);
    const Mat f = orthonormal_completion(jet, random_vec(rng, 3));
    const Vec v = f.col(0);
    // Rotate the complement by a random angle.
    const double a = std::uniform_real_distribution<double>(0, 2 * M_PI)(rng);
    Mat basis(3, 2);
    basis.col(0) = std::cos(a) * f.col(1) + std::sin(a) * f.col(2);
    basis.col(1) = -std::sin(a) * f.col(1) + std::cos(a) * f.col(2);
    for (double k : {0.2, 1.0}) {
      const double r = ric_omega_k(jet, v, k);
      CHECK(std::abs(r - ric_omega_k_trace(jet, v, k)) < 1e-10 * (1 + std::abs(r)));
      CHECK(std::abs(r - ric_omega_k_in_basis(jet, v, basis, k)) < 1e-10 * (1 + std::abs(r)));
      double sum = 0;
      for (int c = 0; c < 2; ++c) sum += sec_omega_k(jet, v, basis.col(c), k);
      CHECK(std::abs(r - sum) < 1e-10 * (1 + std::abs(r)));
      CHECK(std::abs(ric_parts(jet, v).at(k) - r) < 1e-10 * (1 + std::abs(r)));
      CHECK(std::abs(m_omega_restricted(jet, v, k).trace() - r) < 1e-10 * (1 + std::abs(r)));
    }
  }
}

TEST_CASE("trace A: nonnegative, and the two formulas agree") {
  std::mt19937_64 rng(24);
  int violations = 0;
  for (std::uint64_t seed : {31u, 32u, 33u, 34u}) {
    const ChartedSystem s = random_system3(seed, true);
    for (int i = 0; i < 250; ++i) {
      const PointJet jet = evaluate_jet(s, 2.0 * random_vec(rng, 3), JetOrder::Connection);
      Vec v = random_vec(rng, 3);
      v /= jet.norm(v);
      const double t = trace_a_omega(jet, v);
      CHECK(std::abs(t - trace_a_omega_closed(jet, v)) < 1e-12 * (1 + t));
      if (t < 0) ++violations;
    }
  }
  CHECK(violations == 0);
  // Surface value 3/4 b^2 + 1/4 b^2.
  const PointJet t = evaluate_jet(flat_torus(2.0), V({0.1, 0.2}), JetOrder::Connection);
  CHECK(std::abs(trace_a_omega(t, V({1, 0})) - 4.0) < 1e-14);
}

TEST_CASE("surface formula agrees with the general sectional curvature") {
  std::mt19937_64 rng(25);
  for (const ChartedSystem& s : {flat_torus(1.0, 0.4), round_sphere(1.2), hyperbolic_chart(0.5), curved_surface()}) {
    for (int i = 0; i < 50; ++i) {
      Vec x = random_vec(rng, 2) * 0.7;
      if (s.name() == "hyperbolic_chart") x[1] = 0.3 + std::abs(x[1]);
      const PointJet jet = evaluate_jet(s, x, JetOrder::Curvature);
      const auto [v, w] = random_pair(jet, rng);
      const SurfaceFields f = surface_fields(s, x);
      const double k = std::uniform_real_distribution<double>(0.01, 3.0)(rng);
      const double a = surface_sec_b(f, v, k), b = sec_omega_k(jet, v, w, k);
      CHECK(std::abs(a - b) < 1e-8 * (1 + std::abs(b)));
      CHECK(std::abs(ric_omega_k(jet, v, k) - b) < 1e-10 * (1 + std::abs(b)));
    }
  }
  // Sign conventions: b and J for the standard orientation.
  const SurfaceFields f = surface_fields(flat_torus(1.5), V({0.0, 0.0}));
  CHECK(f.b == 1.5);
  CHECK((f.J * V({1, 0}) - V({0, -1})).norm() < 1e-15);
}

TEST_CASE("frame violations are reported") {
  const PointJet jet = evaluate_jet(flat_torus(1.0), V({0, 0}), JetOrder::Curvature);
  auto msg = [](auto&& f) -> std::string {
    try {
      f();
    } catch (const Error& e) {
      return e.what();
    }
    return "";
  };
  CHECK(msg([&] { sec_omega_k(jet, V({1.1, 0}), V({0, 1}), 0.5); }).find("frame violation") == 0);
  CHECK(msg([&] { sec_omega_k(jet, V({1, 0}), V({0.1, 1}), 0.5); }).find("frame violation") == 0);
  CHECK(msg([&] { ric_omega_k(jet, V({0.5, 0}), 0.5); }).find("frame violation") == 0);
  CHECK_THROWS(ric_omega_k(jet, V({1, 0}), -1.0));
}

TEST_CASE("positivity scan thresholds") {
  const std::vector<double> grid{0.1, 0.25, 0.4, 0.6, 1.0};
  const ScanReport t = positivity_scan(flat_torus(1.0), grid, 500, 3);
  CHECK(t.prefix_sec == grid.size());
  CHECK(t.k0_sec == 1.0);
  for (double m : t.min_sec) CHECK(std::abs(m - 1.0) < 1e-10);

  // -2k + b^2 on the hyperbolic chart with b = 1 turns negative past k = 1/2.
  ScanRegion region{V({-1, 0.5}), V({1, 2})};
  const ScanReport h = positivity_scan(hyperbolic_chart(1.0), grid, 500, 3, region);
  CHECK(h.prefix_sec == 3);
  CHECK(h.k0_sec == 0.4);
  CHECK(std::abs(h.min_sec[2] - 0.2) < 1e-10);
  CHECK(h.rejected == 0);

  const ScanReport a = positivity_scan(flat_torus(1.0, 0.3), grid, 400, 9);
  const ScanReport b = positivity_scan(flat_torus(1.0, 0.3), grid, 400, 9);
  CHECK(scan_csv(a) == scan_csv(b));
  CHECK(scan_json(a).dump() == scan_json(b).dump());
}

TEST_CASE("theorem-b scan dichotomy") {
  TheoremBOptions opt;
  opt.grid = 16;
  opt.directions = 12;
  opt.k_samples = 6;
  // b nowhere zero.
  const ChartedSystem t = flat_torus(1.0, 0.2);
  const TheoremBReport r1 = theorem_b_scan(t, 0.5, default_scan_region(t), opt);
  CHECK(r1.positivity);
  CHECK(r1.b_nowhere_zero);
  CHECK(r1.warning.empty());
  CHECK(r1.cells.size() == 256);
  // b identically zero.
  const ChartedSystem s = round_sphere(0.0);
  const TheoremBReport r2 = theorem_b_scan(s, 0.5, default_scan_region(s), opt);
  CHECK(r2.positivity);
  CHECK(r2.b_identically_zero);
  CHECK(r2.warning.empty());
  // b = sin x1 changes sign: positivity must fail.
  const ChartedSystem z = flat_torus(0.0, 1.0);
  const TheoremBReport r3 = theorem_b_scan(z, 0.5, default_scan_region(z), opt);
  CHECK(!r3.positivity);
  CHECK(!r3.b_nowhere_zero);
  CHECK(!r3.b_identically_zero);
  CHECK(r3.warning.empty());
  CHECK(theorem_b_csv(r3).find("x1,x2,b,min_sec,b_zero\n") == 0);
}
