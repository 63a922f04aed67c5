#include "cli/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli/reports.hpp"
#include "geom/builtins.hpp"
#include "loop/index.hpp"
#include "loop/mane.hpp"
#include "magcurv/scan.hpp"
#include "solve/certify.hpp"
#include "solve/continuation.hpp"
#include "solve/gradient.hpp"

namespace magcurv {
namespace {

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

void say(std::ostream* log, const std::string& msg) {
  if (log) *log << "magcurv: " << msg << '\n';
}

// Largest d(theta) - sigma mismatch over a few seeded points of the default region.
void check_primitive(const ChartedSystem& sys) {
  const ScanRegion region = default_scan_region(sys);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int n = sys.dimension();
  int tested = 0;
  for (int attempt = 0; attempt < 200 && tested < 8; ++attempt) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = region.lower[i] + (region.upper[i] - region.lower[i]) * uni(rng);
    if (!sys.in_domain(x)) continue;
    double res, scale;
    try {
      res = primitive_residual(sys, x);
      scale = std::max(1.0, sys.two_form(x).cwiseAbs().maxCoeff());
    } catch (const Error&) {
      continue;
    }
    ++tested;
    if (!(res <= 1e-6 * scale)) {
      std::ostringstream os;
      os << "exterior derivative of the primitive differs from two_form by " << res << " at a sampled point";
      throw SchemaError({{"system.primitive", os.str()}});
    }
  }
}

ScanRegion task_region(const RunConfig& cfg, const ChartedSystem& sys) {
  if (!cfg.task.region_lower.empty()) return {to_vec(cfg.task.region_lower), to_vec(cfg.task.region_upper)};
  return default_scan_region(sys);
}

ShootOptions shoot_options(const RunConfig& cfg) {
  const TaskConfig& t = cfg.task;
  ShootOptions so;
  if (t.tolerance) so.tolerance = *t.tolerance;
  if (t.residual_tolerance) so.residual_tolerance = *t.residual_tolerance;
  if (t.max_iterations && t.method == "shoot") so.max_iterations = *t.max_iterations;
  if (!t.target_winding.empty())
    so.target_winding = Eigen::Map<const Eigen::VectorXi>(t.target_winding.data(), static_cast<Eigen::Index>(t.target_winding.size()));
  so.record.nodes = t.nodes;
  so.record.modes = t.modes;
  so.record.tolerance = so.tolerance;
  return so;
}

struct Search {
  OrbitRecord record;
  nlohmann::json search;  // gradient diagnostics, null for shooting
};

Search find_orbit(const RunConfig& cfg, const ChartedSystem& sys, std::ostream* log) {
  const TaskConfig& t = cfg.task;
  const double k = *t.k;
  const ShootOptions so = shoot_options(cfg);
  Search s;
  if (t.method == "shoot") {
    say(log, "shooting from the configured seed");
    const PhaseState seed = on_energy_level(sys, {to_vec(t.x0), to_vec(t.v0)}, k);
    s.record = shoot(sys, k, seed, *t.T, so);
  } else {
    say(log, "gradient search from a circle loop");
    const Vec center = t.loop_center.empty() ? Vec::Zero(sys.dimension()) : to_vec(t.loop_center);
    const DiscreteLoop init = circle_loop(center, t.loop_radius, t.loop_period, t.loop_nodes, t.loop_clockwise);
    GradientSchedule gs;
    if (t.max_iterations) gs.max_iterations = *t.max_iterations;
    gs.shoot = so;
    const SearchResult res = gradient_search(sys, k, init, gs);
    s.search = {{"status", to_string(res.status)},
                {"message", res.message},
                {"iterations", res.iterations},
                {"final_period", res.period_trace.empty() ? 0.0 : res.period_trace.back()},
                {"final_eta", res.eta_trace.empty() ? 0.0 : res.eta_trace.back()}};
    s.record = res.record ? *res.record : not_found_record(k, to_string(res.status) + ": " + res.message);
  }
  if (s.record.found && s.record.index) certify(sys, s.record);
  say(log, "orbit status: " + s.record.status);
  return s;
}

int record_exit(const OrbitRecord& r) { return all_checks_pass(r) ? kExitOk : kExitCertificationFailed; }

void emit(RunOutcome& out, const RunConfig& cfg, const ChartedSystem& sys, nlohmann::json payload,
          std::vector<Artifact> csv) {
  out.summary = envelope(cfg, sys, std::move(payload));
  if (cfg.output.format == "json")
    out.artifacts.push_back({cfg.output.prefix + ".json", out.summary.dump(2) + "\n"});
  else
    for (auto& a : csv) out.artifacts.push_back(std::move(a));
}

}  // namespace

ChartedSystem build_system(const RunConfig& cfg) {
  const SystemConfig& s = cfg.system;
  if (!s.builtin.empty()) return make_builtin(s.builtin, s.b, s.modulation);
  ExpressionSystemSpec spec = s.expression;
  spec.k = cfg.task.k.value_or(0.0);
  ChartedSystem sys = make_expression_system(spec);
  if (sys.has_primitive()) check_primitive(sys);
  return sys;
}

void apply_overrides(RunConfig& cfg, const RunOverrides& o) {
  if (o.seed) cfg.task.seed = *o.seed;
  if (o.out_dir) cfg.output.dir = *o.out_dir;
  if (o.format) {
    if (*o.format != "csv" && *o.format != "json")
      throw SchemaError({{"--format", "'" + *o.format + "' is not one of: csv, json"}});
    cfg.output.format = *o.format;
  }
}

RunOutcome execute(const RunConfig& cfg, std::ostream* log) {
  const ChartedSystem sys = build_system(cfg);
  const TaskConfig& t = cfg.task;
  const std::string& c = t.command;
  const std::string& stem = cfg.output.prefix;
  const int n = sys.dimension();
  RunOutcome out;
  say(log, "running " + c + " on " + sys.name());

  if (c == "integrate") {
    PhaseState s0{to_vec(t.x0), to_vec(t.v0)};
    if (t.k) s0 = on_energy_level(sys, s0, *t.k);
    IntegrateOptions io;
    if (t.tolerance) io.tolerance = *t.tolerance;
    if (t.samples) io.samples = *t.samples;
    io.project_energy = t.project_energy;
    const Orbit o = integrate(sys, s0, *t.T, io);
    emit(out, cfg, sys, orbit_json(sys, o), {{stem + ".csv", orbit_csv(sys, o)}});
  } else if (c == "curvature") {
    const std::vector<double> ks = t.k_grid.empty() ? std::vector<double>{*t.k} : t.k_grid;
    const auto rows = curvature_rows(sys, ks, t.samples.value_or(1000), t.seed, task_region(cfg, sys));
    nlohmann::json payload = curvature_json(rows);
    // trace A is nonnegative for every magnetic system; a violation is a failed certification.
    const bool trace_ok = payload["min_trace_a"].get<double>() >= -1e-12;
    payload["trace_a_nonnegative"] = trace_ok;
    out.exit_code = trace_ok ? kExitOk : kExitCertificationFailed;
    emit(out, cfg, sys, payload, {{stem + ".csv", curvature_csv(rows, n)}});
  } else if (c == "scan-k0") {
    const ScanReport r =
        positivity_scan(sys, t.k_grid, static_cast<std::size_t>(t.samples.value_or(4096)), t.seed, task_region(cfg, sys));
    emit(out, cfg, sys, scan_json(r), {{stem + ".csv", scan_csv(r)}});
  } else if (c == "theorem-b") {
    TheoremBOptions opt;
    opt.grid = t.grid;
    opt.directions = t.directions;
    opt.k_samples = t.k_samples;
    const TheoremBReport r = theorem_b_scan(sys, *t.k0, task_region(cfg, sys), opt);
    out.exit_code = r.warning.empty() ? kExitOk : kExitCertificationFailed;
    emit(out, cfg, sys, theorem_b_json(r), {{stem + ".csv", theorem_b_csv(r, opt.b_zero_tolerance)}});
  } else if (c == "find-orbit") {
    const Search s = find_orbit(cfg, sys, log);
    nlohmann::json payload = record_json(sys, s.record, false);
    if (!s.search.is_null()) payload["search"] = s.search;
    out.exit_code = record_exit(s.record);
    std::vector<Artifact> csv{{stem + ".csv", records_csv({s.record})}};
    if (s.record.found) csv.push_back({stem + "_orbit.csv", orbit_csv(sys, s.record.orbit)});
    emit(out, cfg, sys, payload, std::move(csv));
  } else if (c == "index") {
    const Search s = find_orbit(cfg, sys, log);
    if (!s.record.found) fail(ErrorKind::NotConverged, "no orbit to index: " + s.record.message);
    IndexOptions io;
    io.frame = t.frame == "adapted" ? IndexFrame::VelocityAdapted : IndexFrame::Coordinate;
    io.relative_threshold = t.relative_threshold;
    const IndexReport r = morse_index(sys, s.record.loop, *t.k, t.modes, io);
    nlohmann::json payload = index_json(r);
    payload["orbit_status"] = s.record.status;
    payload["T"] = s.record.T;
    out.exit_code = s.record.certified ? kExitOk : kExitCertificationFailed;
    emit(out, cfg, sys, payload, {{stem + ".csv", spectrum_csv(r)}});
  } else if (c == "transport") {
    PhaseState s0{to_vec(t.x0), to_vec(t.v0)};
    if (t.k) s0 = on_energy_level(sys, s0, *t.k);
    IntegrateOptions io;
    io.tolerance = t.tolerance.value_or(1e-11);
    io.samples = t.samples.value_or(512);
    const Orbit o = integrate(sys, s0, *t.T, io);
    const TransportReport r = transport_report(sys, o, io.tolerance);
    nlohmann::json payload = transport_json(sys, r);
    const bool ok = r.max_gram_drift < 1e-8;
    payload["orthogonal"] = ok;
    out.exit_code = ok ? kExitOk : kExitCertificationFailed;
    emit(out, cfg, sys, payload, {{stem + ".csv", transport_csv(r, n)}});
  } else if (c == "bonnet-myers") {
    const Search s = find_orbit(cfg, sys, log);
    std::vector<OrbitRecord> records;
    nlohmann::json payload;
    bool ok = all_checks_pass(s.record);
    if (s.record.found) {
      say(log, "continuing in k");
      Family fam = continue_in_k(sys, s.record, t.k_grid, shoot_options(cfg));
      for (OrbitRecord& r : fam.records) {
        if (r.index) certify(sys, r);
        ok = ok && all_checks_pass(r);
      }
      ok = ok && !fam.truncated;
      payload["truncated"] = fam.truncated;
      payload["diagnostic"] = fam.diagnostic;
      records = std::move(fam.records);
    } else {
      payload["truncated"] = true;
      payload["diagnostic"] = "no starting orbit: " + s.record.message;
    }
    payload["start"] = record_json(sys, s.record);
    payload["records"] = records_json(sys, records);
    payload["all_pass"] = ok;
    out.exit_code = ok ? kExitOk : kExitCertificationFailed;
    // The family starts at the seed orbit's k; without a family the seed row explains the failure.
    emit(out, cfg, sys, payload, {{stem + ".csv", records_csv(records.empty() ? std::vector<OrbitRecord>{s.record} : records)}});
  } else if (c == "mane-bound") {
    ManeOptions mo;
    mo.center = t.mane_center.empty() ? Vec::Zero(n) : to_vec(t.mane_center);
    if (!t.radii.empty()) mo.radii = t.radii;
    if (t.samples) mo.samples = *t.samples;
    mo.seed = t.seed;
    const ManeReport r = mane_upper_bound(sys, mo);
    emit(out, cfg, sys, mane_json(r), {{stem + ".csv", mane_csv(r)}});
  } else if (c == "report") {
    const Search s = find_orbit(cfg, sys, log);
    const auto rows = curvature_rows(sys, {*t.k}, t.samples.value_or(1000), t.seed, task_region(cfg, sys));
    nlohmann::json curv = curvature_json(rows);
    curv.erase("samples");
    nlohmann::json payload{{"orbit", record_json(sys, s.record)}, {"curvature", curv}};
    if (!s.search.is_null()) payload["search"] = s.search;
    std::vector<Artifact> csv{{stem + "_orbit.csv", records_csv({s.record})},
                              {stem + "_curvature.csv", curvature_csv(rows, n)}};
    if (sys.has_primitive() && sys.primitive_scope() == PrimitiveScope::Global) {
      ManeOptions mo;
      mo.center = Vec::Zero(n);
      mo.seed = t.seed;
      try {
        const ManeReport m = mane_upper_bound(sys, mo);
        payload["mane"] = mane_json(m);
        csv.push_back({stem + "_mane.csv", mane_csv(m)});
      } catch (const Error& e) {
        payload["mane"] = {{"error", e.what()}};
      }
    }
    out.exit_code = record_exit(s.record);
    emit(out, cfg, sys, payload, std::move(csv));
  } else {
    fail(ErrorKind::InvalidArgument, "unknown command '" + c + "'");
  }
  return out;
}

std::vector<std::string> write_artifacts(const std::string& dir, const std::vector<Artifact>& artifacts) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory '" + dir + "': " + ec.message());
  std::vector<fs::path> staged;
  std::vector<std::string> written;
  auto cleanup = [&] {
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const Artifact& a : artifacts) {
    const fs::path tmp = fs::path(dir) / ("." + a.name + ".partial");
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    staged.push_back(tmp);
    f << a.content;
    f.close();
    if (!f) {
      cleanup();
      fail(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
    }
  }
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    const fs::path dst = fs::path(dir) / artifacts[i].name;
    fs::rename(staged[i], dst, ec);
    if (ec) {
      cleanup();
      fail(ErrorKind::Io, "cannot move output into place: " + dst.string());
    }
    written.push_back(dst.string());
  }
  return written;
}

namespace {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NotConverged: return "not_converged";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

int run_loaded(const std::function<RunConfig()>& load, const RunOverrides& o, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load();
    apply_overrides(cfg, o);
    build_system(cfg);
  } catch (const SchemaError& e) {
    err << error_json("schema", e.what(), e.issues()).dump() << '\n';
    return kExitSchema;
  } catch (const Error& e) {
    const bool config = e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::InvalidArgument;
    err << error_json(config ? "schema" : kind_name(e.kind()), e.what()).dump() << '\n';
    return config ? kExitSchema : kExitRuntime;
  }
  try {
    RunOutcome r = execute(cfg, o.verbose ? &err : nullptr);
    const auto files = write_artifacts(cfg.output.dir, r.artifacts);
    nlohmann::json line{{"command", cfg.task.command}, {"exit_code", r.exit_code}, {"files", files}};
    out << line.dump() << '\n';
    return r.exit_code;
  } catch (const SchemaError& e) {
    err << error_json("schema", e.what(), e.issues()).dump() << '\n';
    return kExitSchema;
  } catch (const Error& e) {
    err << error_json(kind_name(e.kind()), e.what()).dump() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << error_json("internal", e.what()).dump() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int run_config_file(const std::string& path, const RunOverrides& o, std::ostream& out, std::ostream& err) {
  return run_loaded([&] { return load_config(path); }, o, out, err);
}

int run_config_text(const std::string& text, const RunOverrides& o, std::ostream& out, std::ostream& err) {
  return run_loaded([&] { return validate_config(parse_config_text(text)); }, o, out, err);
}

}  // namespace magcurv
