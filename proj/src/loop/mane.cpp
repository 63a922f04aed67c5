#include "loop/mane.hpp"

#include <cmath>
#include <random>

namespace magcurv {

ManeReport mane_upper_bound(const ChartedSystem& sys, const ManeOptions& opt) {
  if (!sys.has_primitive()) fail(ErrorKind::InvalidArgument, "no primitive; Mane bound needs one");
  const int n = sys.dimension();
  const Vec center = opt.center.size() ? opt.center : Vec::Zero(n);
  require(center.size() == n, "Mane center has wrong dimension");
  require(!opt.radii.empty(), "Mane bound needs at least one region");
  require(opt.samples >= 1, "Mane sample count must be positive");
  for (std::size_t i = 0; i < opt.radii.size(); ++i) {
    require(opt.radii[i] > 0.0, "Mane radii must be positive");
    if (i) require(opt.radii[i] > opt.radii[i - 1], "Mane radii must increase");
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  ManeReport r;
  r.radii = opt.radii;
  double running = 0.0;
  for (double R : opt.radii) {
    auto visit = [&](const Vec& x) {
      if (!sys.in_domain(x)) return;
      const Mat g = sys.metric(x);
      const Vec th = sys.primitive(x);
      running = std::max(running, std::sqrt(std::max(0.0, th.dot(g.llt().solve(th)))));
    };
    for (int c = 0; c < (1 << n); ++c) {
      Vec x = center;
      for (int i = 0; i < n; ++i) x[i] += ((c >> i) & 1 ? R : -R);
      visit(x);
    }
    for (int s = 0; s < opt.samples; ++s) {
      Vec x(n);
      for (int i = 0; i < n; ++i) x[i] = center[i] + R * unit(rng);
      visit(x);
    }
    r.sup_norm.push_back(running);
  }
  r.bound = 0.5 * running * running;
  r.monotone_growth = r.sup_norm.size() > 1;
  for (std::size_t i = 1; i < r.sup_norm.size(); ++i)
    if (!(r.sup_norm[i] > r.sup_norm[i - 1] * (1.0 + 1e-9) + 1e-300)) r.monotone_growth = false;
  r.unbounded_evidence = r.monotone_growth && r.sup_norm.back() > 1.5 * r.sup_norm.front();
  r.message = r.unbounded_evidence ? "unbounded primitive evidence; c = +infinity plausible"
                                   : "bounded primitive on the sampled regions; c <= bound";
  return r;
}

nlohmann::json mane_json(const ManeReport& r) {
  return {{"bound", r.bound},
          {"radii", r.radii},
          {"sup_norm", r.sup_norm},
          {"monotone_growth", r.monotone_growth},
          {"unbounded_evidence", r.unbounded_evidence},
          {"message", r.message}};
}

}  // namespace magcurv
