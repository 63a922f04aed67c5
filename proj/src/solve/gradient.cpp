#include "solve/gradient.hpp"

#include <cmath>
#include <sstream>

#include "loop/spectral.hpp"

namespace magcurv {

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Converged: return "converged";
    case SearchStatus::Vanishing: return "vanishing";
    case SearchStatus::PeriodCollapse: return "period_collapse";
    case SearchStatus::IterationCap: return "iteration_cap";
  }
  return "unknown";
}

namespace {

// Differential of the action at a loop: covector density on the nodes
// (per unit s) and the period component.
struct Differential {
  Mat c;
  double cT = 0.0;
  double eta = 0.0;

  double apply(const Mat& V, double tau) const { return (c.cwiseProduct(V)).sum() / c.cols() + cT * tau; }
};

Differential differential(const ChartedSystem& sys, const DiscreteLoop& loop, double k) {
  const LoopSamples ls = sample_loop(sys, loop, JetOrder::Connection);
  Differential d;
  d.c.resize(ls.n, ls.N);
  double energy = 0.0;
  for (int j = 0; j < ls.N; ++j) {
    const PointJet& jet = ls.jets[j];
    const Vec r = ls.acc.col(j) - jet.omega * ls.xdot.col(j);
    d.c.col(j) = -ls.T * (jet.g * r);
    energy += k - 0.5 * ls.speed[j] * ls.speed[j];
  }
  d.cT = energy / ls.N;
  d.eta = eta_norm(ls, k);
  return d;
}

DiscreteLoop displaced(const DiscreteLoop& loop, const Mat& V, double tau, double a) {
  DiscreteLoop out = loop;
  out.nodes += a * V;
  out.T += a * tau;
  return out;
}

}  // namespace

SearchResult gradient_search(const ChartedSystem& sys, double k, const DiscreteLoop& initial,
                             const GradientSchedule& sch) {
  require(k > 0.0 && std::isfinite(k), "energy k must be positive");
  validate_loop(sys, initial);
  require(sch.step > 0.0 && sch.step_floor > 0.0, "gradient schedule steps must be positive");
  const double floor = sch.action_floor >= 0.0 ? sch.action_floor : 1e-6 * k;
  const int n = initial.dim();
  const int N = initial.size();
  require(2 * sch.min_mode_modes + 1 < N, "reduced basis too large for the node count");

  // Reduced basis for the lowest Hessian mode.
  struct BasisField {
    Mat V;
    double tau;
  };
  std::vector<BasisField> basis;
  for (int a = 0; a < n; ++a)
    for (int j = 0; j <= sch.min_mode_modes; ++j)
      for (int p = 0; p < (j == 0 ? 1 : 2); ++p) {
        Mat V = Mat::Zero(n, N);
        for (int i = 0; i < N; ++i) {
          const double ang = 2.0 * M_PI * j * i / N;
          V(a, i) = j == 0 ? 1.0 : (p == 0 ? std::cos(ang) : std::sin(ang));
        }
        basis.push_back({V, 0.0});
      }
  basis.push_back({Mat::Zero(n, N), 1.0});
  const int B = static_cast<int>(basis.size());
  Mat gram(B, B);
  for (int a = 0; a < B; ++a)
    for (int b = 0; b < B; ++b) {
      const Mat da = spectral_derivative(basis[a].V), db = spectral_derivative(basis[b].V);
      gram(a, b) = ((basis[a].V.cwiseProduct(basis[b].V)).sum() + (da.cwiseProduct(db)).sum()) / N +
                   basis[a].tau * basis[b].tau;
    }

  auto cutoff = [&](double S) {
    if (S <= floor) return 0.0;
    if (S >= 2.0 * floor) return 1.0;
    return (S - floor) / floor;
  };

  SearchResult res;
  DiscreteLoop loop = initial;
  double alpha = sch.step;
  Differential dS = differential(sys, loop, k);

  for (res.iterations = 0;; ++res.iterations) {
    const double S = action(sys, loop, k);
    res.period_trace.push_back(loop.T);
    res.action_trace.push_back(S);
    res.eta_trace.push_back(dS.eta);

    if (dS.eta < eta_gate(loop.T)) {
      res.status = SearchStatus::Converged;
      res.message = "eta gate reached";
      break;
    }
    if (loop.T < sch.T_floor) {
      res.status = SearchStatus::PeriodCollapse;
      res.message = "loop shrinking toward constant (period below floor)";
      break;
    }
    if (res.iterations >= sch.max_iterations) {
      res.status = SearchStatus::IterationCap;
      res.message = "iteration cap reached";
      break;
    }
    const double h = cutoff(S);
    if (h == 0.0) {
      res.status = SearchStatus::Vanishing;
      res.message = "action below floor; vanishing sequence toward a constant loop";
      break;
    }

    const Mat xi = h1_riesz(dS.c);
    const double xiT = dS.cT;
    const double grad2 = std::max(0.0, dS.apply(xi, xiT));

    // Lowest Hessian mode in the reduced basis.
    Mat H(B, B);
    for (int a = 0; a < B; ++a) {
      const double e = sch.fd_step;
      const Differential p = differential(sys, displaced(loop, basis[a].V, basis[a].tau, e), k);
      const Differential m = differential(sys, displaced(loop, basis[a].V, basis[a].tau, -e), k);
      for (int b = 0; b < B; ++b)
        H(a, b) = (p.apply(basis[b].V, basis[b].tau) - m.apply(basis[b].V, basis[b].tau)) / (2.0 * e);
    }
    H = 0.5 * (H + H.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(H, gram);
    Mat dirV = xi;
    double dirT = xiT;
    if (ges.info() == Eigen::Success) {
      const Vec lam = ges.eigenvalues();
      if (lam[0] < -1e-8 * lam.cwiseAbs().maxCoeff()) {
        const Vec coef = ges.eigenvectors().col(0);
        Mat psiV = Mat::Zero(n, N);
        double psiT = 0.0;
        for (int a = 0; a < B; ++a) {
          psiV += coef[a] * basis[a].V;
          psiT += coef[a] * basis[a].tau;
        }
        const double proj = dS.apply(psiV, psiT);
        dirV -= 2.0 * proj * psiV;
        dirT -= 2.0 * proj * psiT;
      }
    }
    const double scale = h / std::sqrt(1.0 + grad2);

    bool accepted = false;
    while (alpha >= sch.step_floor) {
      const DiscreteLoop trial = displaced(loop, dirV, dirT, -alpha * scale);
      if (trial.T > 0.0) {
        try {
          validate_loop(sys, trial);
          const Differential dt = differential(sys, trial, k);
          if (dt.eta < dS.eta) {
            loop = trial;
            dS = dt;
            accepted = true;
            alpha = std::min(1.5 * alpha, sch.step_max);
            break;
          }
        } catch (const Error&) {
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      res.status = SearchStatus::Vanishing;
      res.message = "step below floor; vanishing-sequence report";
      break;
    }
  }
  res.final_loop = loop;

  if (res.status == SearchStatus::Converged) {
    const LoopSamples ls = sample_loop(sys, loop, JetOrder::Connection);
    const PhaseState seed = on_energy_level(sys, {loop.nodes.col(0), ls.xdot.col(0)}, k);
    if (sch.polish) {
      ShootOptions so = sch.shoot;
      so.target_winding = loop_winding(sys, loop);
      OrbitRecord r = shoot(sys, k, seed, loop.T, so);
      if (!r.found) {
        res.status = SearchStatus::Vanishing;
        res.message = "gate reached but shooting polish failed: " + r.message;
      }
      res.record = r;
    } else {
      res.record = make_record(sys, k, seed, loop.T, sch.shoot.record);
    }
  }
  return res;
}

}  // namespace magcurv
