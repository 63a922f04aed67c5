#include "magcurv/scan.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "common/format.hpp"
#include "common/parallel.hpp"
#include "magcurv/curvature.hpp"

namespace magcurv {
namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
  }
  return r;
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

void check_grid(const std::vector<double>& k_grid) {
  require(!k_grid.empty(), "k grid is empty");
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    require(k_grid[i] > 0.0 && std::isfinite(k_grid[i]), "k grid entries must be positive");
    if (i > 0) require(k_grid[i] > k_grid[i - 1], "k grid must be strictly increasing");
  }
}

void check_region(const ChartedSystem& sys, const ScanRegion& region) {
  const int n = sys.dimension();
  require(region.lower.size() == n && region.upper.size() == n, "scan region has wrong dimension");
  for (int i = 0; i < n; ++i)
    require(region.upper[i] >= region.lower[i], "scan region bounds are reversed");
}

struct PointResult {
  bool accepted = false;
  Vec x;
  SecParts sec;
  SecParts ric;
};

std::size_t positive_prefix(const std::vector<double>& mins) {
  std::size_t p = 0;
  while (p < mins.size() && mins[p] > kPositivityGuard) ++p;
  return p;
}

nlohmann::json vec_json(const Vec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

ScanRegion default_scan_region(const ChartedSystem& sys) {
  const int n = sys.dimension();
  ScanRegion r{Vec::Constant(n, -1.0), Vec::Constant(n, 1.0)};
  for (int i = 0; i < n; ++i)
    if (sys.periodic(i)) {
      r.lower[i] = 0.0;
      r.upper[i] = sys.lattice()[static_cast<std::size_t>(i)];
    }
  return r;
}

ScanReport positivity_scan(const ChartedSystem& sys, const std::vector<double>& k_grid,
                           std::size_t sample_budget, std::uint64_t seed) {
  return positivity_scan(sys, k_grid, sample_budget, seed, default_scan_region(sys));
}

ScanReport positivity_scan(const ChartedSystem& sys, const std::vector<double>& k_grid,
                           std::size_t sample_budget, std::uint64_t seed,
                           const ScanRegion& region) {
  check_grid(k_grid);
  require(sample_budget > 0, "sample budget must be positive");
  check_region(sys, region);
  const int n = sys.dimension();
  require(n <= static_cast<int>(std::size(kPrimes)), "dimension too large for the Halton sampler");

  std::mt19937_64 shift_rng = sample_rng(seed, std::numeric_limits<std::uint64_t>::max());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec shift(n);
  for (int i = 0; i < n; ++i) shift[i] = unit(shift_rng);

  std::vector<PointResult> results(sample_budget);
  parallel_for(sample_budget, [&](std::size_t s) {
    PointResult& out = results[s];
    Vec x(n);
    for (int i = 0; i < n; ++i) {
      double u = radical_inverse(s + 1, kPrimes[i]) + shift[i];
      u -= std::floor(u);
      x[i] = region.lower[i] + u * (region.upper[i] - region.lower[i]);
    }
    if (!sys.in_domain(x)) return;
    const PointJet jet = evaluate_jet(sys, x, JetOrder::Curvature);
    std::mt19937_64 rng = sample_rng(seed, s);
    std::normal_distribution<double> gauss;
    const Mat frame = orthonormal_completion(jet, Vec::Unit(n, 0));
    Vec a(n), b(n);
    for (int i = 0; i < n; ++i) a[i] = gauss(rng);
    for (int i = 0; i < n; ++i) b[i] = gauss(rng);
    a.normalize();
    b -= b.dot(a) * a;
    b.normalize();
    const Vec v = frame * a;
    const Vec w = frame * b;
    out.accepted = true;
    out.x = x;
    out.sec = sec_parts(jet, v, w);
    out.ric = ric_parts(jet, v);
  });

  ScanReport r;
  r.k_grid = k_grid;
  r.seed = seed;
  const std::size_t nk = k_grid.size();
  r.min_sec.assign(nk, std::numeric_limits<double>::infinity());
  r.min_ric.assign(nk, std::numeric_limits<double>::infinity());
  r.argmin_sec.assign(nk, Vec());
  r.argmin_ric.assign(nk, Vec());
  for (const PointResult& p : results) {
    if (!p.accepted) {
      ++r.rejected;
      continue;
    }
    ++r.samples;
    for (std::size_t j = 0; j < nk; ++j) {
      const double s = p.sec.at(k_grid[j]);
      const double c = p.ric.at(k_grid[j]);
      if (s < r.min_sec[j]) {
        r.min_sec[j] = s;
        r.argmin_sec[j] = p.x;
      }
      if (c < r.min_ric[j]) {
        r.min_ric[j] = c;
        r.argmin_ric[j] = p.x;
      }
    }
  }
  if (r.samples == 0) fail(ErrorKind::Domain, "no scan sample fell inside the chart domain");
  r.prefix_sec = positive_prefix(r.min_sec);
  r.prefix_ric = positive_prefix(r.min_ric);
  r.k0_sec = r.prefix_sec ? k_grid[r.prefix_sec - 1] : 0.0;
  r.k0_ric = r.prefix_ric ? k_grid[r.prefix_ric - 1] : 0.0;
  return r;
}

std::string scan_csv(const ScanReport& r) {
  std::ostringstream os;
  const Eigen::Index n = r.argmin_sec.empty() ? 0 : r.argmin_sec.front().size();
  os << "k,min_sec,min_ric";
  for (Eigen::Index i = 0; i < n; ++i) os << ",argmin_sec_x" << i + 1;
  for (Eigen::Index i = 0; i < n; ++i) os << ",argmin_ric_x" << i + 1;
  os << "\n";
  for (std::size_t j = 0; j < r.k_grid.size(); ++j) {
    os << fmt(r.k_grid[j]) << "," << fmt(r.min_sec[j]) << "," << fmt(r.min_ric[j]);
    for (Eigen::Index i = 0; i < n; ++i) os << "," << fmt(r.argmin_sec[j][i]);
    for (Eigen::Index i = 0; i < n; ++i) os << "," << fmt(r.argmin_ric[j][i]);
    os << "\n";
  }
  return os.str();
}

nlohmann::json scan_json(const ScanReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t j = 0; j < r.k_grid.size(); ++j)
    rows.push_back({{"k", r.k_grid[j]},
                    {"min_sec", r.min_sec[j]},
                    {"min_ric", r.min_ric[j]},
                    {"argmin_sec", vec_json(r.argmin_sec[j])},
                    {"argmin_ric", vec_json(r.argmin_ric[j])}});
  return {{"rows", rows},
          {"k0_sec", r.k0_sec},
          {"k0_ric", r.k0_ric},
          {"positive_prefix_sec", r.prefix_sec},
          {"positive_prefix_ric", r.prefix_ric},
          {"samples", r.samples},
          {"rejected", r.rejected},
          {"seed", r.seed},
          {"note", "sampled minima over-estimate the true infimum"}};
}

TheoremBReport theorem_b_scan(const ChartedSystem& sys, double k0, const ScanRegion& region,
                              const TheoremBOptions& opt) {
  if (sys.dimension() != 2) fail(ErrorKind::InvalidArgument, "theorem-b scan needs a surface (dimension 2)");
  require(sys.oriented(), "theorem-b scan needs an oriented chart");
  require(k0 > 0.0 && std::isfinite(k0), "k0 must be positive");
  require(opt.grid >= 1 && opt.directions >= 1 && opt.k_samples >= 1, "theorem-b resolution must be positive");
  check_region(sys, region);

  const int g = opt.grid;
  struct Cell {
    bool accepted = false;
    Vec x;
    double b = 0.0;
    double min_sec = std::numeric_limits<double>::infinity();
    Vec v;
    double k = 0.0;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(g * g));
  parallel_for(cells.size(), [&](std::size_t idx) {
    Cell& c = cells[idx];
    const int i = static_cast<int>(idx) / g, j = static_cast<int>(idx) % g;
    Vec x(2);
    x[0] = region.lower[0] + (region.upper[0] - region.lower[0]) * i / g;
    x[1] = region.lower[1] + (region.upper[1] - region.lower[1]) * j / g;
    if (!sys.in_domain(x)) return;
    const SurfaceFields s = surface_fields(sys, x);
    const PointJet jet = evaluate_jet(sys, x, JetOrder::Connection);
    const Mat frame = orthonormal_completion(jet, Vec::Unit(2, 0));
    c.accepted = true;
    c.x = x;
    c.b = s.b;
    for (int d = 0; d < opt.directions; ++d) {
      const double a = 2.0 * M_PI * d / opt.directions;
      const Vec v = std::cos(a) * frame.col(0) + std::sin(a) * frame.col(1);
      for (int m = 1; m <= opt.k_samples; ++m) {
        const double k = k0 * m / (opt.k_samples + 1);
        const double val = surface_sec_b(s, v, k);
        if (val < c.min_sec) {
          c.min_sec = val;
          c.v = v;
          c.k = k;
        }
      }
    }
  });

  TheoremBReport r;
  r.k0 = k0;
  r.grid = g;
  r.directions = opt.directions;
  r.k_samples = opt.k_samples;
  r.min_sec = std::numeric_limits<double>::infinity();
  std::size_t nonzero = 0;
  for (const Cell& c : cells) {
    if (!c.accepted) continue;
    ++r.points;
    r.cells.push_back({c.x, c.b, c.min_sec});
    if (std::abs(c.b) <= opt.b_zero_tolerance)
      r.zero_set.push_back(c.x);
    else
      ++nonzero;
    if (c.min_sec < r.min_sec) {
      r.min_sec = c.min_sec;
      r.argmin_x = c.x;
      r.argmin_v = c.v;
      r.argmin_k = c.k;
    }
  }
  if (r.points == 0) fail(ErrorKind::Domain, "no grid point fell inside the chart domain");
  r.positivity = r.min_sec > kPositivityGuard;
  r.b_nowhere_zero = r.zero_set.empty();
  r.b_identically_zero = nonzero == 0;
  if (r.positivity && !r.b_nowhere_zero && !r.b_identically_zero)
    r.warning = "positivity sampled while b has both zeros and non-zeros; refine the grid or k range";
  return r;
}

nlohmann::json theorem_b_json(const TheoremBReport& r) {
  nlohmann::json zeros = nlohmann::json::array();
  for (const Vec& z : r.zero_set) zeros.push_back(vec_json(z));
  return {{"k0", r.k0},
          {"grid", r.grid},
          {"directions", r.directions},
          {"k_samples", r.k_samples},
          {"points", r.points},
          {"positivity", r.positivity},
          {"min_sec", r.min_sec},
          {"argmin_x", vec_json(r.argmin_x)},
          {"argmin_v", vec_json(r.argmin_v)},
          {"argmin_k", r.argmin_k},
          {"b_nowhere_zero", r.b_nowhere_zero},
          {"b_identically_zero", r.b_identically_zero},
          {"zero_set", zeros},
          {"warning", r.warning}};
}

std::string theorem_b_csv(const TheoremBReport& r, double b_zero_tolerance) {
  std::ostringstream os;
  os << "x1,x2,b,min_sec,b_zero\n";
  for (const auto& c : r.cells)
    os << fmt(c.x[0]) << ',' << fmt(c.x[1]) << ',' << fmt(c.b) << ',' << fmt(c.min_sec) << ','
       << (std::abs(c.b) <= b_zero_tolerance ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace magcurv
