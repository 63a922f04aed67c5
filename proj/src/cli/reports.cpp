#include "cli/reports.hpp"

#include <random>
#include <sstream>

#include "common/format.hpp"
#include "common/parallel.hpp"
#include "magcurv/curvature.hpp"

namespace magcurv {
namespace {

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

nlohmann::json mat_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(to_std(m.row(i).transpose()));
  return rows;
}

}  // namespace

nlohmann::json envelope(const RunConfig& cfg, const ChartedSystem& sys, nlohmann::json result) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = cfg.task.command;
  j["system"] = {{"name", sys.name()}, {"dimension", sys.dimension()}};
  j["seed"] = cfg.task.seed;
  j["result"] = std::move(result);
  return j;
}

nlohmann::json error_json(const std::string& kind, const std::string& message, const std::vector<SchemaIssue>& issues) {
  nlohmann::json err{{"kind", kind}, {"message", message}};
  if (!issues.empty()) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& i : issues) list.push_back({{"path", i.path}, {"message", i.message}});
    err["issues"] = list;
  }
  return {{"schema_version", kSchemaVersion}, {"error", err}};
}

std::vector<CurvatureRow> curvature_rows(const ChartedSystem& sys, const std::vector<double>& ks, int samples,
                                         std::uint64_t seed, const ScanRegion& region) {
  require(samples >= 1, "samples must be positive");
  require(!ks.empty(), "curvature needs at least one k");
  const int n = sys.dimension();
  struct Point {
    Vec x, v, w;
    PointJet jet;
  };
  std::vector<Point> pts(static_cast<std::size_t>(samples));
  parallel_for(pts.size(), [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> normal;
    Vec x(n);
    for (int attempt = 0;; ++attempt) {
      for (int d = 0; d < n; ++d) x[d] = region.lower[d] + (region.upper[d] - region.lower[d]) * uni(rng);
      if (sys.in_domain(x)) break;
      if (attempt > 1000) fail(ErrorKind::Domain, "sampling region misses the chart domain");
    }
    Point& p = pts[i];
    p.x = x;
    p.jet = evaluate_jet(sys, x, JetOrder::Curvature);
    Vec v(n);
    for (int d = 0; d < n; ++d) v[d] = normal(rng);
    const Mat frame = orthonormal_completion(p.jet, v);
    Vec c(n - 1);
    for (int d = 0; d < n - 1; ++d) c[d] = normal(rng);
    c /= c.norm();
    p.v = frame.col(0);
    p.w = frame.rightCols(n - 1) * c;
    p.w /= p.jet.norm(p.w);
  });
  std::vector<CurvatureRow> rows;
  rows.reserve(pts.size() * ks.size());
  for (double k : ks)
    for (const Point& p : pts) {
      CurvatureRow r;
      r.x = p.x;
      r.v = p.v;
      r.w = p.w;
      r.k = k;
      r.sec = sec_omega_k(p.jet, p.v, p.w, k);
      r.ric = ric_omega_k(p.jet, p.v, k);
      r.trace_a = trace_a_omega(p.jet, p.v);
      rows.push_back(std::move(r));
    }
  return rows;
}

std::string curvature_csv(const std::vector<CurvatureRow>& rows, int n) {
  std::ostringstream os;
  for (const char* p : {"x", "v", "w"})
    for (int i = 1; i <= n; ++i) os << p << i << ',';
  os << "k,sec,ric,trace_a\n";
  for (const auto& r : rows) {
    for (const Vec* vec : {&r.x, &r.v, &r.w})
      for (int i = 0; i < n; ++i) os << fmt((*vec)[i]) << ',';
    os << fmt(r.k) << ',' << fmt(r.sec) << ',' << fmt(r.ric) << ',' << fmt(r.trace_a) << '\n';
  }
  return os.str();
}

nlohmann::json curvature_json(const std::vector<CurvatureRow>& rows) {
  nlohmann::json samples = nlohmann::json::array();
  double min_sec = INFINITY, max_sec = -INFINITY, min_ric = INFINITY, max_ric = -INFINITY, min_tr = INFINITY;
  for (const auto& r : rows) {
    samples.push_back({{"x", to_std(r.x)},
                       {"v", to_std(r.v)},
                       {"w", to_std(r.w)},
                       {"k", r.k},
                       {"sec", r.sec},
                       {"ric", r.ric},
                       {"trace_a", r.trace_a}});
    min_sec = std::min(min_sec, r.sec);
    max_sec = std::max(max_sec, r.sec);
    min_ric = std::min(min_ric, r.ric);
    max_ric = std::max(max_ric, r.ric);
    min_tr = std::min(min_tr, r.trace_a);
  }
  return {{"count", rows.size()},
          {"min_sec", min_sec},
          {"max_sec", max_sec},
          {"min_ric", min_ric},
          {"max_ric", max_ric},
          {"min_trace_a", min_tr},
          {"samples", samples}};
}

TransportReport transport_report(const ChartedSystem& sys, const Orbit& orbit, double tolerance) {
  const int n = sys.dimension();
  TransportReport r;
  r.orbit = orbit;
  r.transport = magnetic_transport(sys, orbit, Mat::Identity(n, n), tolerance);
  const Mat g0 = sys.metric(orbit.x_unwrapped.front());
  const Mat G0 = r.transport.fields.front().transpose() * g0 * r.transport.fields.front();
  for (std::size_t i = 0; i < r.transport.t.size(); ++i) {
    const Mat& V = r.transport.fields[i];
    const double d = (V.transpose() * sys.metric(orbit.x_unwrapped[i]) * V - G0).cwiseAbs().maxCoeff();
    r.gram_drift.push_back(d);
    r.max_gram_drift = std::max(r.max_gram_drift, d);
  }
  const Mat gT = sys.metric(orbit.x_unwrapped.back());
  r.end_orthogonality = (r.transport.end.transpose() * gT * r.transport.end - g0).cwiseAbs().maxCoeff();
  return r;
}

std::string transport_csv(const TransportReport& r, int n) {
  std::ostringstream os;
  os << 't';
  for (int c = 1; c <= n; ++c)
    for (int i = 1; i <= n; ++i) os << ",V" << c << '_' << i;
  os << ",gram_drift\n";
  for (std::size_t s = 0; s < r.transport.t.size(); ++s) {
    os << fmt(r.transport.t[s]);
    const Mat& V = r.transport.fields[s];
    for (int c = 0; c < n; ++c)
      for (int i = 0; i < n; ++i) os << ',' << fmt(V(i, c));
    os << ',' << fmt(r.gram_drift[s]) << '\n';
  }
  return os.str();
}

nlohmann::json transport_json(const ChartedSystem& sys, const TransportReport& r) {
  return {{"period", r.orbit.period},
          {"end_map", mat_json(r.transport.end)},
          {"max_gram_drift", r.max_gram_drift},
          {"end_orthogonality", r.end_orthogonality},
          {"steps", r.transport.steps},
          {"orbit", orbit_json(sys, r.orbit, false)}};
}

std::string mane_csv(const ManeReport& r) {
  std::ostringstream os;
  os << "radius,sup_norm\n";
  for (std::size_t i = 0; i < r.radii.size(); ++i) os << fmt(r.radii[i]) << ',' << fmt(r.sup_norm[i]) << '\n';
  return os.str();
}

nlohmann::json records_json(const ChartedSystem& sys, const std::vector<OrbitRecord>& records) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : records) list.push_back(record_json(sys, r));
  return list;
}

}  // namespace magcurv
