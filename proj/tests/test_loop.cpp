#include <doctest.h>

#include <cmath>

#include "flow/integrator.hpp"
#include "flow/transport.hpp"
#include "geom/builtins.hpp"
#include "loop/hessian.hpp"
#include "loop/index.hpp"
#include "loop/loop.hpp"
#include "loop/mane.hpp"
#include "loop/spectral.hpp"
#include "loop/variations.hpp"
#include "support.hpp"

using namespace magcurv;

namespace {

struct Bench {
  ChartedSystem sys;
  DiscreteLoop loop;
  double k;
};

// Torus b = 1 and sphere sigma = 0, unit speed (k = 1/2), period 2 pi.
Bench bench(bool sphere, int N) {
  Bench b{sphere ? round_sphere(0.0) : flat_torus(1.0), {}, 0.5};
  // On the sphere the chart's unit circle is a great circle with lambda = 1.
  const PhaseState s0 = sphere ? PhaseState{V({1, 0}), V({0, 1})} : PhaseState{V({0, 0}), V({1, 0})};
  IntegrateOptions io;
  io.tolerance = 1e-12;
  io.samples = N;
  b.loop = loop_from_orbit(b.sys, integrate(b.sys, s0, 2 * M_PI, io), N);
  return b;
}

// Random smooth periodic field with `modes` Fourier modes per component.
Mat random_field(std::mt19937_64& rng, int n, int N, int modes) {
  std::normal_distribution<double> G;
  Mat V = Mat::Zero(n, N);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j <= modes; ++j) {
      const double c = G(rng) / (1 + j), s = G(rng) / (1 + j);
      for (int i = 0; i < N; ++i) {
        const double ang = 2 * M_PI * j * i / N;
        V(a, i) += c * std::cos(ang) + s * std::sin(ang);
      }
    }
  return V;
}

DiscreteLoop displaced(const DiscreteLoop& l, const Mat& V, double tau, double eps) {
  DiscreteLoop out = l;
  out.nodes += eps * V;
  out.T += eps * tau;
  return out;
}

// Unit normal along a surface loop, rotated from the velocity.
Mat unit_normal(const LoopSamples& ls) {
  Mat N(2, ls.N);
  for (int i = 0; i < ls.N; ++i) {
    const Vec u = ls.xdot.col(i);
    Vec w = V({-u[1], u[0]});
    w -= ls.jets[i].inner(w, u) / ls.jets[i].inner(u, u) * u;
    N.col(i) = w / ls.jets[i].norm(w);
  }
  return N;
}

}  // namespace

TEST_CASE("action: closed-form values") {
  const ChartedSystem t = flat_torus(1.0);
  // Constant loop.
  DiscreteLoop c;
  c.nodes = Mat::Constant(2, 16, 0.3);
  c.T = 2.5;
  CHECK(std::abs(action(t, c, 0.5) - 1.25) < 1e-15);
  // Unit circle in time 2 pi: kinetic pi, k T = pi, magnetic +pi counterclockwise, -pi clockwise.
  const double ccw = action(t, circle_loop(V({0, 0}), 1.0, 2 * M_PI, 64, false), 0.5);
  const double cw = action(t, circle_loop(V({0, 0}), 1.0, 2 * M_PI, 64, true), 0.5);
  CHECK(std::abs(ccw - 3 * M_PI) < 1e-12);
  CHECK(std::abs(cw - M_PI) < 1e-12);
  // Capping disk flux agrees with the primitive for contractible loops.
  const DiscreteLoop l = circle_loop(V({0.4, 1.0}), 0.7, 3.0, 128);
  CHECK(std::abs(magnetic_term_capping(flat_torus(1.0, 0.3), l) - magnetic_term_primitive(flat_torus(1.0, 0.3), l)) < 1e-10);
}

TEST_CASE("action: period derivative") {
  const ChartedSystem t = flat_torus(1.0, 0.2);
  const DiscreteLoop l = circle_loop(V({0.5, 0.5}), 0.8, 3.0, 64);
  const double k = 0.7, h = 1e-5;
  const LoopSamples ls = sample_loop(t, l, JetOrder::Connection);
  double mean = 0;
  for (int j = 0; j < ls.N; ++j) mean += 0.5 * ls.speed[j] * ls.speed[j];
  mean /= ls.N;
  // dS/dT = k - mean |xdot|^2 / 2 at fixed nodes.
  const double fd = (action(t, displaced(l, Mat::Zero(2, 64), 1, h), k) - action(t, displaced(l, Mat::Zero(2, 64), 1, -h), k)) / (2 * h);
  CHECK(std::abs(fd - (k - mean)) < 1e-8);
  CHECK(std::abs(eta_k(t, l, k, {Mat::Zero(2, 64), 1.0, {}}) - (k - mean) * 1.0) < 1e-12);
}

TEST_CASE("action: non-contractible loop without a global primitive") {
  DiscreteLoop l;
  l.nodes.resize(2, 32);
  for (int j = 0; j < 32; ++j) l.nodes.col(j) = V({2 * M_PI * j / 32, 0.3});
  l.T = 2 * M_PI;
  l.shift = V({2 * M_PI, 0});
  try {
    action(flat_torus(1.0), l, 0.5);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "no global primitive; action undefined");
  }
  // eta is still defined: the straight line has xdot = (1, 0), D xdot = 0, Omega xdot = (0, -1).
  Mat Vn = Mat::Zero(2, 32);
  Vn.row(1).setOnes();
  CHECK(std::abs(eta_k(flat_torus(1.0), l, 0.5, {Vn, 0.0, {}}) - (-2 * M_PI)) < 1e-12);
}

TEST_CASE("eta: constant loops are not zeros") {
  DiscreteLoop c;
  c.nodes = Mat::Constant(2, 16, 0.3);
  c.T = 2.0;
  CHECK(std::abs(eta_k(flat_torus(1.0), c, 0.5, {Mat::Zero(2, 16), 3.0, {}}) - 1.5) < 1e-15);
}

TEST_CASE("eta: matches the finite-difference action gradient") {
  std::mt19937_64 rng(51);
  struct Case {
    ChartedSystem sys;
    DiscreteLoop loop;
  };
  const std::vector<Case> cases{
      {flat_torus(1.0, 0.2), circle_loop(V({1.0, 2.0}), 0.6, 3.5, 256)},
      {hyperbolic_chart(1.0), circle_loop(V({0.0, 1.5}), 0.4, 2.0, 256)},
      {round_sphere(0.7), circle_loop(V({0.1, -0.2}), 0.5, 4.0, 256)},
  };
  for (const Case& c : cases) {
    for (int t = 0; t < 5; ++t) {
      const Mat Vf = random_field(rng, 2, 256, 4);
      const double tau = std::normal_distribution<double>()(rng);
      const double k = 0.6, h = 1e-5;
      const double fd =
          (action(c.sys, displaced(c.loop, Vf, tau, h), k) - action(c.sys, displaced(c.loop, Vf, tau, -h), k)) / (2 * h);
      const double e = eta_k(c.sys, c.loop, k, {Vf, tau, {}});
      CHECK(std::abs(fd - e) <= 1e-5 * std::max(1.0, std::abs(e)));
    }
  }
}

TEST_CASE("eta: vanishes on integrated closed orbits") {
  std::mt19937_64 rng(52);
  for (bool sphere : {false, true}) {
    const Bench b = bench(sphere, 256);
    const LoopSamples ls = sample_loop(b.sys, b.loop, JetOrder::Connection);
    CHECK(eta_norm(ls, b.k) < 1e-8);
    for (int t = 0; t < 5; ++t) {
      const Mat Vf = random_field(rng, 2, 256, 6);
      const double tau = std::normal_distribution<double>()(rng);
      const double norm = std::sqrt(Vf.squaredNorm() / 256 + tau * tau);
      CHECK(std::abs(eta_k(ls, b.k, {Vf, tau, {}})) < 1e-6 * norm);
    }
  }
}

TEST_CASE("hessian: second differences, kernel direction and the curvature form") {
  std::mt19937_64 rng(53);
  for (bool sphere : {false, true}) {
    const Bench b = bench(sphere, 256);
    const LoopSamples ls = sample_loop(b.sys, b.loop, JetOrder::Curvature);
    CHECK(std::abs(hessian_form(ls, b.k, {ls.xdot, 0.0, {}})) < 1e-8);
    const double S0 = action(b.sys, b.loop, b.k);
    for (int t = 0; t < 6; ++t) {
      const Mat Vf = random_field(rng, 2, 256, 3);
      const double tau = std::normal_distribution<double>()(rng);
      const Variation var{Vf, tau, {}};
      const double q = hessian_form(ls, b.k, var);
      const double qc = hessian_form_curvature(ls, b.k, var);
      CHECK(std::abs(q - qc) <= 1e-6 * std::max(1.0, std::abs(q)));
      const double h = 1e-4;
      const double fd = (action(b.sys, displaced(b.loop, Vf, tau, h), b.k) - 2 * S0 +
                         action(b.sys, displaced(b.loop, Vf, tau, -h), b.k)) /
                        (h * h);
      CHECK(std::abs(fd - q) <= 1e-4 * std::max(1.0, std::abs(q)));
    }
  }
}

TEST_CASE("hessian: gate and the torus normal direction") {
  const Bench b = bench(false, 128);
  const LoopSamples ls = sample_loop(b.sys, b.loop, JetOrder::Curvature);
  // Translations of the flat torus map orbits to orbits.
  Mat e2 = Mat::Zero(2, 128);
  e2.row(1).setOnes();
  CHECK(std::abs(hessian_form(ls, b.k, {e2, 0.0, {}})) < 1e-8);
  const DiscreteLoop off = circle_loop(V({0, 0}), 0.5, 2.0, 64);
  try {
    hessian_form(b.sys, off, 0.5, {Mat::Zero(2, 64), 1.0, {}});
    FAIL("expected gate failure");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("not at a critical loop") != std::string::npos);
  }
}

TEST_CASE("hessian: sigma = 0 reduces to the classical index form on the great circle") {
  // For a unit-speed great circle and a normal field V = f N: Q = int f'^2 - f^2, plus the tau square.
  const Bench b = bench(true, 256);
  const LoopSamples ls = sample_loop(b.sys, b.loop, JetOrder::Curvature);
  const Mat N = unit_normal(ls);
  for (int j : {1, 2, 3}) {
    Mat Vf(2, 256), Vd(2, 256);
    for (int i = 0; i < 256; ++i) {
      const double t = ls.T * i / 256;
      Vf.col(i) = std::sin(j * t) * N.col(i);
      Vd.col(i) = j * std::cos(j * t) * N.col(i);  // N is parallel along the geodesic
    }
    const double q = hessian_form(ls, b.k, {Vf, 0.0, Vd});
    CHECK(std::abs(q - (j * j - 1) * M_PI) < 1e-8);
  }
}

TEST_CASE("test variations on the torus circle") {
  const Bench b = bench(false, 512);
  const LoopSamples ls = sample_loop(b.sys, b.loop, JetOrder::Curvature);
  const Mat N = unit_normal(ls);
  const TestVariation tv = make_test_variation(ls, N, omega_tilde_along(ls, N));
  CHECK(std::abs(tv.g[0]) < 1e-10);
  CHECK(std::abs(hessian_form(ls, b.k, tv.W) + 2 * M_PI) < 1e-6);
  CHECK(std::abs(hessian_form_curvature(ls, b.k, tv.W) + 2 * M_PI) < 1e-6);
  // Last square eliminated pointwise.
  const Mat Wd = variation_derivative(ls, tv.W);
  for (int i = 0; i < ls.N; ++i) {
    const double a = ls.jets[i].inner(Wd.col(i), ls.xdot.col(i)) / ls.speed[i] - tv.W.tau / ls.T * ls.speed[i];
    CHECK(a * a < 1e-10);
  }

  // m = 0: f = sin(t/2), Q = pi/4 - pi.
  const TestVariation s0 = sine_mode_variation(ls, N, 0, 0);
  CHECK(std::abs(hessian_form(ls, b.k, s0.W) + 3 * M_PI / 4) < 1e-4);
  // m = 2: windows of length L ~ 2 pi / 3 and Q = L/2 (pi^2/L^2 - 1) ~ 5 pi / 12 > 0.
  for (int j = 0; j < 3; ++j) {
    const TestVariation s = sine_mode_variation(ls, N, j, 2);
    const double L = sine_window(ls, j, 2).length;
    CHECK(std::abs(L - 2 * M_PI / 3) <= ls.T / ls.N);
    CHECK(std::abs(hessian_form(ls, b.k, s.W) - L / 2 * (M_PI * M_PI / (L * L) - 1)) < 1e-4);
    CHECK(hessian_form(ls, b.k, s.W) > 0);
  }
  // Disjoint windows do not interact in the plain form.
  const std::vector<Mat> ker = hessian_kernels(ls);
  const SineWindow w0 = sine_window(ls, 0, 2), w1 = sine_window(ls, 1, 2);
  const Mat Nd = omega_tilde_along(ls, N);
  auto windowed = [&](const SineWindow& w) {
    Mat Vf(2, ls.N), Vd(2, ls.N);
    for (int i = 0; i < ls.N; ++i) {
      Vf.col(i) = w.f[i] * N.col(i);
      Vd.col(i) = w.fdot[i] * N.col(i) + w.f[i] * Nd.col(i);
    }
    return Variation{Vf, 0.0, Vd};
  };
  CHECK(std::abs(hessian_bilinear(ls, ker, windowed(w0), windowed(w1))) < 1e-12);
}

TEST_CASE("test variation: a field with <V', xdot> = 0 is returned unchanged") {
  // Straight unit-speed line on the flat torus with sigma = 0 is a closed geodesic.
  const ChartedSystem t = flat_torus(0.0);
  DiscreteLoop l;
  l.nodes.resize(2, 64);
  for (int j = 0; j < 64; ++j) l.nodes.col(j) = V({2 * M_PI * j / 64, 1.0});
  l.T = 2 * M_PI;
  l.shift = V({2 * M_PI, 0});
  const LoopSamples ls = sample_loop(t, l, JetOrder::Curvature);
  Mat N = Mat::Zero(2, 64);
  for (int j = 0; j < 64; ++j) N(1, j) = std::sin(2 * M_PI * j / 64);
  const TestVariation tv = make_test_variation(ls, N);
  CHECK(std::abs(tv.W.tau) < 1e-14);
  CHECK(tv.g.cwiseAbs().maxCoeff() < 1e-14);
  CHECK((tv.W.V - N).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("morse index on the benchmarks") {
  for (bool sphere : {false, true}) {
    const Bench b = bench(sphere, 256);
    const IndexReport r16 = morse_index(b.sys, b.loop, b.k, 16);
    const IndexReport r32 = morse_index(b.sys, b.loop, b.k, 32);
    CHECK(r16.index() == 1);
    CHECK(r32.index() == 1);
    CHECK(r32.negative + r32.near_zero + r32.positive == r32.dimension);
    CHECK(r32.dimension == 2 * 65 + 1);
    CHECK(r32.near_zero >= 1);
    IndexOptions adapted;
    adapted.frame = IndexFrame::VelocityAdapted;
    CHECK(morse_index(b.sys, b.loop, b.k, 16, adapted).index() == 1);
    const Bench b2 = bench(sphere, 512);
    CHECK(morse_index(b2.sys, b2.loop, b2.k, 16).index() == 1);
  }
}

TEST_CASE("spectral calculus") {
  const int N = 64;
  Mat f(1, N), df(1, N), d2f(1, N);
  for (int i = 0; i < N; ++i) {
    const double s = static_cast<double>(i) / N;
    f(0, i) = std::sin(2 * M_PI * 3 * s) + 0.5 * std::cos(2 * M_PI * s);
    df(0, i) = 6 * M_PI * std::cos(2 * M_PI * 3 * s) - M_PI * std::sin(2 * M_PI * s);
    d2f(0, i) = -36 * M_PI * M_PI * std::sin(2 * M_PI * 3 * s) - 2 * M_PI * M_PI * std::cos(2 * M_PI * s);
  }
  CHECK((spectral_derivative(f) - df).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((spectral_second_derivative(f) - d2f).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("mane bound examples") {
  CHECK(mane_upper_bound(round_sphere(0.0)).bound == 0.0);
  const ManeReport h = mane_upper_bound(hyperbolic_chart(1.0), {V({0.0, 1.0}), {0.25, 0.5, 0.75}, 512, 1});
  CHECK(std::abs(h.bound - 0.5) < 1e-10);
  CHECK(!h.unbounded_evidence);
  const ManeReport t = mane_upper_bound(flat_torus(1.0));
  CHECK(t.monotone_growth);
  CHECK(t.unbounded_evidence);
  CHECK(t.message == "unbounded primitive evidence; c = +infinity plausible");
  CHECK_THROWS(mane_upper_bound(round_sphere(1.0)));
}
