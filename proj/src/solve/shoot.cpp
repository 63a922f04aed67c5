#include "solve/shoot.hpp"

#include <cmath>
#include <sstream>

namespace magcurv {

PhaseState on_energy_level(const ChartedSystem& sys, const PhaseState& s, double k) {
  require(k > 0.0, "energy k must be positive");
  const double sp = std::sqrt(s.v.dot(sys.metric(s.x) * s.v));
  if (!(sp > 0.0)) fail(ErrorKind::InvalidArgument, "seed velocity must be nonzero");
  return {s.x, s.v * (std::sqrt(2.0 * k) / sp)};
}

namespace {

struct Periodicity {
  const ChartedSystem& sys;
  double k;
  PhaseState ref;
  Mat perp;      // n x (n-1), Euclidean complement of the seed direction
  Vec d_seed;    // unit seed direction
  Vec lattice_shift;
  double tolerance;

  int n() const { return sys.dimension(); }

  PhaseState initial(const Vec& z) const {
    const int dim = n();
    const Vec x0 = z.head(dim);
    const Vec d = d_seed + perp * z.segment(dim, dim - 1);
    return on_energy_level(sys, {x0, d}, k);
  }

  Vec residual(const Vec& z) const {
    const int dim = n();
    const double T = z[2 * dim - 1];
    const PhaseState s0 = initial(z);
    IntegrateOptions io;
    io.tolerance = tolerance;
    io.samples = 1;
    const Orbit o = integrate(sys, s0, T, io);
    const PhaseState s1 = o.final_state();
    Vec F(2 * dim + 1);
    F.head(dim) = s1.x - s0.x - lattice_shift;
    F.segment(dim, dim) = s1.v - s0.v;
    F[2 * dim] = (s0.x - ref.x).dot(ref.v);
    return F;
  }
};

}  // namespace

OrbitRecord shoot(const ChartedSystem& sys, double k, const PhaseState& seed, double T_guess,
                  const ShootOptions& opt) {
  const int n = sys.dimension();
  require(k > 0.0 && std::isfinite(k), "energy k must be positive");
  require(T_guess > 0.0 && std::isfinite(T_guess), "T_guess must be positive");
  require(seed.x.size() == n && seed.v.size() == n, "seed has wrong dimension");
  const double speed = std::sqrt(seed.v.dot(sys.metric(seed.x) * seed.v));
  require(std::abs(speed - std::sqrt(2.0 * k)) <= 1e-12 * std::max(1.0, std::sqrt(2.0 * k)),
          "seed speed must equal sqrt(2k)");

  Periodicity P{sys, k, seed, Mat(), seed.v.normalized(), Vec::Zero(n), opt.tolerance};
  {
    Eigen::HouseholderQR<Mat> qr(P.d_seed);
    const Mat Q = qr.householderQ() * Mat::Identity(n, n);
    P.perp = Q.rightCols(n - 1);
  }
  Eigen::VectorXi target = opt.target_winding.size() ? opt.target_winding : Eigen::VectorXi::Zero(n);
  require(target.size() == n, "target winding has wrong dimension");
  for (int i = 0; i < n; ++i) {
    if (target[i] == 0) continue;
    require(sys.periodic(i), "target winding set on a non-periodic coordinate");
    P.lattice_shift[i] = target[i] * sys.lattice()[static_cast<std::size_t>(i)];
  }

  Vec z(2 * n);
  z.head(n) = seed.x;
  z.segment(n, n - 1).setZero();
  z[2 * n - 1] = T_guess;

  Vec F;
  try {
    F = P.residual(z);
  } catch (const Error& e) {
    return not_found_record(k, std::string("seed integration failed: ") + e.what());
  }

  int iterations = 0;
  int stalls = 0;
  for (; iterations < opt.max_iterations; ++iterations) {
    if (F.norm() < opt.residual_tolerance) break;

    Mat J(2 * n + 1, 2 * n);
    for (int c = 0; c < 2 * n; ++c) {
      const double h = 1e-6 * std::max(1.0, std::abs(z[c]));
      Vec zp = z, zm = z;
      zp[c] += h;
      zm[c] -= h;
      try {
        J.col(c) = (P.residual(zp) - P.residual(zm)) / (2.0 * h);
      } catch (const Error& e) {
        return not_found_record(k, std::string("Jacobian evaluation failed: ") + e.what());
      }
    }
    Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-9);
    const Vec step = -svd.solve(F);

    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 12; ++ls, alpha *= 0.5) {
      Vec trial = z + alpha * step;
      if (trial[2 * n - 1] < opt.T_floor) {
        std::ostringstream os;
        os << "not found: period collapsed below " << opt.T_floor << " (loop shrinking toward constant)";
        OrbitRecord r = not_found_record(k, os.str());
        r.iterations = iterations + 1;
        return r;
      }
      try {
        const Vec Ft = P.residual(trial);
        if (Ft.norm() < F.norm()) {
          z = trial;
          F = Ft;
          accepted = true;
          break;
        }
      } catch (const Error&) {
      }
    }
    if (!accepted) {
      if (F.norm() < 1e3 * opt.residual_tolerance) break;  // at the noise floor of the integrator
      if (++stalls >= 2 && svd.rank() < 2 * n - 1)
        fail(ErrorKind::Degenerate, "degenerate periodicity system; perturb seed");
      if (stalls >= 3) break;
    }
  }
  if (!(F.norm() < 1e3 * opt.residual_tolerance)) {
    std::ostringstream os;
    os << "not found: periodicity residual " << F.norm() << " after " << iterations << " iterations";
    OrbitRecord r = not_found_record(k, os.str());
    r.iterations = iterations;
    return r;
  }

  const double T = z[2 * n - 1];
  OrbitRecord r = make_record(sys, k, P.initial(z), T, opt.record);
  r.iterations = iterations;
  r.target_winding = target;
  r.contractible = r.winding.isZero();
  return r;
}

}  // namespace magcurv
