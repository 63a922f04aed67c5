#include "magcurv/magcurv.h"

#include <iostream>
#include <sstream>
#include <string>

#include "cli/expression_system.hpp"
#include "cli/reports.hpp"
#include "cli/runner.hpp"
#include "geom/builtins.hpp"
#include "geom/tensors.hpp"
#include "magcurv/curvature.hpp"
#include "solve/certify.hpp"
#include "solve/shoot.hpp"

struct mc_system {
  magcurv::ChartedSystem sys;
};

struct mc_orbit {
  magcurv::Orbit orbit;
};

struct mc_record {
  magcurv::ChartedSystem sys;
  magcurv::OrbitRecord record;
};

namespace {

using magcurv::ErrorKind;
using magcurv::Vec;

thread_local std::string g_last_error;

mc_status to_status(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return MC_ERR_INVALID_ARGUMENT;
    case ErrorKind::Degenerate: return MC_ERR_DEGENERATE;
    case ErrorKind::Domain: return MC_ERR_DOMAIN;
    case ErrorKind::NotConverged: return MC_ERR_NOT_CONVERGED;
    case ErrorKind::Parse: return MC_ERR_PARSE;
    case ErrorKind::Io: return MC_ERR_IO;
    case ErrorKind::Internal: return MC_ERR_INTERNAL;
  }
  return MC_ERR_INTERNAL;
}

template <class F>
mc_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return MC_OK;
  } catch (const magcurv::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MC_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) magcurv::fail(ErrorKind::InvalidArgument, std::string(what) + " is null");
}

Vec vec(const double* p, int n) { return Eigen::Map<const Vec>(p, n); }

void store(const Vec& v, double* out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i];
}

std::vector<std::string> strings(const char* const* p, std::size_t count, const char* what) {
  std::vector<std::string> out;
  if (count) need(p, what);
  for (std::size_t i = 0; i < count; ++i) {
    need(p[i], what);
    out.emplace_back(p[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* mc_version(void) { return "1.0.0"; }
int mc_schema_version(void) { return magcurv::kSchemaVersion; }
const char* mc_last_error(void) { return g_last_error.c_str(); }

mc_status mc_system_create_builtin(const char* name, double b, double modulation, mc_system** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = new mc_system{magcurv::make_builtin(name, b, modulation)};
  });
}

mc_status mc_system_create_expr(int dimension, const char* const* metric, size_t metric_count,
                                const char* const* two_form, size_t two_form_count, const char* const* primitive,
                                size_t primitive_count, const double* lattice, size_t lattice_count, int analytic,
                                double fd_step, double k, mc_system** out) {
  return guarded([&] {
    need(out, "out");
    magcurv::ExpressionSystemSpec spec;
    spec.dimension = dimension;
    spec.metric = strings(metric, metric_count, "metric");
    spec.two_form = strings(two_form, two_form_count, "two_form");
    spec.primitive = strings(primitive, primitive_count, "primitive");
    if (lattice_count) {
      need(lattice, "lattice");
      spec.lattice.assign(lattice, lattice + lattice_count);
    }
    spec.analytic = analytic != 0;
    spec.fd_step = fd_step;
    spec.k = k;
    *out = new mc_system{magcurv::make_expression_system(spec)};
  });
}

void mc_system_destroy(mc_system* sys) { delete sys; }

int mc_system_dimension(const mc_system* sys) { return sys ? sys->sys.dimension() : 0; }

mc_status mc_christoffel(const mc_system* sys, const double* x, double* gamma) {
  return guarded([&] {
    need(sys, "system");
    need(x, "x");
    need(gamma, "gamma");
    const int n = sys->sys.dimension();
    const auto G = magcurv::christoffel(sys->sys, vec(x, n));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gamma[(k * n + i) * n + j] = G[k](i, j);
  });
}

mc_status mc_riemann(const mc_system* sys, const double* x, const double* u, const double* v, const double* w,
                     double* out) {
  return guarded([&] {
    need(sys, "system");
    need(x, "x");
    need(u, "u");
    need(v, "v");
    need(w, "w");
    need(out, "out");
    const int n = sys->sys.dimension();
    store(magcurv::riemann(sys->sys, vec(x, n), vec(u, n), vec(v, n), vec(w, n)), out);
  });
}

mc_status mc_lorentz(const mc_system* sys, const double* x, const double* w, double* out) {
  return guarded([&] {
    need(sys, "system");
    need(x, "x");
    need(w, "w");
    need(out, "out");
    const int n = sys->sys.dimension();
    store(magcurv::lorentz(sys->sys, vec(x, n), vec(w, n)), out);
  });
}

mc_status mc_nabla_omega(const mc_system* sys, const double* x, const double* w, const double* v, double* out) {
  return guarded([&] {
    need(sys, "system");
    need(x, "x");
    need(w, "w");
    need(v, "v");
    need(out, "out");
    const int n = sys->sys.dimension();
    store(magcurv::nabla_omega(sys->sys, vec(x, n), vec(w, n), vec(v, n)), out);
  });
}

mc_status mc_sec_omega_k(const mc_system* sys, const double* x, const double* v, const double* w, double k,
                         double* out) {
  return guarded([&] {
    need(sys, "system");
    need(x, "x");
    need(v, "v");
    need(w, "w");
    need(out, "out");
    const int n = sys->sys.dimension();
    *out = magcurv::sec_omega_k(sys->sys, vec(x, n), vec(v, n), vec(w, n), k);
  });
}

mc_status mc_ric_omega_k(const mc_system* sys, const double* x, const double* v, double k, double* out) {
  return guarded([&] {
    need(sys, "system");
    need(x, "x");
    need(v, "v");
    need(out, "out");
    const int n = sys->sys.dimension();
    *out = magcurv::ric_omega_k(sys->sys, vec(x, n), vec(v, n), k);
  });
}

mc_status mc_trace_a_omega(const mc_system* sys, const double* x, const double* v, double* out) {
  return guarded([&] {
    need(sys, "system");
    need(x, "x");
    need(v, "v");
    need(out, "out");
    const int n = sys->sys.dimension();
    *out = magcurv::trace_a_omega(sys->sys, vec(x, n), vec(v, n));
  });
}

mc_status mc_surface_sec_b(const mc_system* sys, const double* x, const double* v, double k, double* out) {
  return guarded([&] {
    need(sys, "system");
    need(x, "x");
    need(v, "v");
    need(out, "out");
    const auto s = magcurv::surface_fields(sys->sys, vec(x, 2));
    *out = magcurv::surface_sec_b(s, vec(v, 2), k);
  });
}

mc_status mc_integrate(const mc_system* sys, const double* x0, const double* v0, double t_end, double tolerance,
                       int samples, mc_orbit** out) {
  return guarded([&] {
    need(sys, "system");
    need(x0, "x0");
    need(v0, "v0");
    need(out, "out");
    const int n = sys->sys.dimension();
    magcurv::IntegrateOptions io;
    io.tolerance = tolerance;
    io.samples = samples;
    *out = new mc_orbit{magcurv::integrate(sys->sys, {vec(x0, n), vec(v0, n)}, t_end, io)};
  });
}

size_t mc_orbit_size(const mc_orbit* orbit) { return orbit ? orbit->orbit.size() : 0; }

mc_status mc_orbit_sample(const mc_orbit* orbit, size_t i, double* t, double* x, double* v) {
  return guarded([&] {
    need(orbit, "orbit");
    magcurv::require(i < orbit->orbit.size(), "sample index out of range");
    if (t) *t = orbit->orbit.t[i];
    if (x) store(orbit->orbit.x_unwrapped[i], x);
    if (v) store(orbit->orbit.v[i], v);
  });
}

double mc_orbit_energy_drift(const mc_orbit* orbit) { return orbit ? orbit->orbit.energy_drift : 0.0; }

void mc_orbit_destroy(mc_orbit* orbit) { delete orbit; }

mc_status mc_find_orbit(const mc_system* sys, double k, const double* x0, const double* v0, double T, int nodes,
                        int modes, mc_record** out) {
  return guarded([&] {
    need(sys, "system");
    need(x0, "x0");
    need(v0, "v0");
    need(out, "out");
    const int n = sys->sys.dimension();
    magcurv::ShootOptions so;
    so.record.nodes = nodes;
    so.record.modes = modes;
    const auto seed = magcurv::on_energy_level(sys->sys, {vec(x0, n), vec(v0, n)}, k);
    magcurv::OrbitRecord r = magcurv::shoot(sys->sys, k, seed, T, so);
    if (r.found && r.index) magcurv::certify(sys->sys, r);
    *out = new mc_record{sys->sys, std::move(r)};
  });
}

int mc_record_found(const mc_record* rec) { return rec && rec->record.found; }
int mc_record_certified(const mc_record* rec) { return rec && magcurv::all_checks_pass(rec->record); }
double mc_record_period(const mc_record* rec) { return rec ? rec->record.T : 0.0; }
int mc_record_index(const mc_record* rec) {
  return rec && rec->record.index ? rec->record.index->index() : -1;
}

mc_status mc_record_json(const mc_record* rec, char* buffer, size_t capacity, size_t* needed) {
  g_last_error.clear();
  if (!rec) {
    g_last_error = "record is null";
    return MC_ERR_INVALID_ARGUMENT;
  }
  std::string s;
  const mc_status st = guarded([&] { s = magcurv::record_json(rec->sys, rec->record).dump(); });
  if (st != MC_OK) return st;
  if (needed) *needed = s.size() + 1;
  if (!buffer || capacity < s.size() + 1) {
    if (buffer && capacity) buffer[0] = '\0';
    g_last_error = "buffer too small";
    return MC_ERR_BUFFER_TOO_SMALL;
  }
  s.copy(buffer, s.size());
  buffer[s.size()] = '\0';
  return MC_OK;
}

void mc_record_destroy(mc_record* rec) { delete rec; }

mc_status mc_run_config(const char* path, const char* out_dir, const char* format, int has_seed, uint64_t seed,
                        int verbose, int echo, int* exit_code) {
  return guarded([&] {
    need(path, "path");
    need(exit_code, "exit_code");
    magcurv::RunOverrides o;
    if (out_dir) o.out_dir = out_dir;
    if (format) o.format = format;
    if (has_seed) o.seed = seed;
    o.verbose = verbose != 0;
    std::ostringstream err;
    *exit_code = magcurv::run_config_file(path, o, std::cout, err);
    std::cout.flush();
    if (echo) std::cerr << err.str();
    // Progress lines precede the error document, which is the last line.
    std::string text = err.str();
    while (!text.empty() && text.back() == '\n') text.pop_back();
    const auto pos = text.rfind('\n');
    g_last_error = *exit_code >= 2 ? text.substr(pos == std::string::npos ? 0 : pos + 1) : std::string();
  });
}

}  // extern "C"
