#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "magcurv/magcurv.h"

namespace fs = std::filesystem;

namespace {

struct System {
  mc_system* p = nullptr;
  ~System() { mc_system_destroy(p); }
};

}  // namespace

TEST_CASE("capi: version and errors") {
  CHECK(std::string(mc_version()).size() > 0);
  CHECK(mc_schema_version() == 1);
  mc_system* s = nullptr;
  CHECK(mc_system_create_builtin("klein_bottle", 1.0, 0.0, &s) == MC_ERR_INVALID_ARGUMENT);
  CHECK(s == nullptr);
  CHECK(std::string(mc_last_error()).find("klein_bottle") != std::string::npos);
  CHECK(mc_system_create_builtin("flat_torus", 1.0, 0.0, nullptr) == MC_ERR_INVALID_ARGUMENT);
  CHECK(std::string(mc_last_error()) == "out is null");
  System t;
  REQUIRE(mc_system_create_builtin("flat_torus", 1.0, 0.0, &t.p) == MC_OK);
  CHECK(std::string(mc_last_error()).empty());
  CHECK(mc_system_dimension(t.p) == 2);
  CHECK(mc_system_dimension(nullptr) == 0);
  mc_system_destroy(nullptr);
  mc_orbit_destroy(nullptr);
  mc_record_destroy(nullptr);
}

TEST_CASE("capi: tensors and curvature on the builtins") {
  System t, sph;
  REQUIRE(mc_system_create_builtin("flat_torus", 1.0, 0.0, &t.p) == MC_OK);
  REQUIRE(mc_system_create_builtin("round_sphere", 0.0, 0.0, &sph.p) == MC_OK);
  const double x[2] = {0.1, 0.2}, e1[2] = {1, 0}, e2[2] = {0, 1};
  double out[8];
  REQUIRE(mc_lorentz(t.p, x, e2, out) == MC_OK);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 0.0);
  REQUIRE(mc_christoffel(t.p, x, out) == MC_OK);
  for (int i = 0; i < 8; ++i) CHECK(out[i] == 0.0);
  double r = 0;
  REQUIRE(mc_ric_omega_k(t.p, x, e1, 0.5, &r) == MC_OK);
  CHECK(std::abs(r - 1) < 1e-12);
  REQUIRE(mc_sec_omega_k(t.p, x, e1, e2, 0.5, &r) == MC_OK);
  CHECK(std::abs(r - 1) < 1e-12);
  REQUIRE(mc_surface_sec_b(t.p, x, e1, 0.5, &r) == MC_OK);
  CHECK(std::abs(r - 1) < 1e-12);
  REQUIRE(mc_trace_a_omega(t.p, x, e1, &r) == MC_OK);
  CHECK(r >= 0.0);
  REQUIRE(mc_nabla_omega(t.p, x, e1, e2, out) == MC_OK);
  CHECK(std::abs(out[0]) + std::abs(out[1]) == 0.0);

  // At the chart centre the metric is 4 I, so unit vectors are e_i / 2.
  const double o[2] = {0, 0}, u1[2] = {0.5, 0}, u2[2] = {0, 0.5};
  REQUIRE(mc_sec_omega_k(sph.p, o, u1, u2, 0.5, &r) == MC_OK);
  CHECK(std::abs(r - 1) < 1e-10);
  REQUIRE(mc_riemann(sph.p, o, u1, u2, u2, out) == MC_OK);
  CHECK(std::abs(4 * out[0] * 0.5 - 1) < 1e-10);  // <R(u,v)v,u> = 4 R^1 u^1
  CHECK(mc_sec_omega_k(sph.p, o, e1, e2, 0.5, &r) == MC_ERR_INVALID_ARGUMENT);
  CHECK(std::string(mc_last_error()).size() > 0);
}

TEST_CASE("capi: expression systems") {
  const char* metric[] = {"1", "0", "sin(x1)^2"};
  const char* form[] = {"sin(x1)"};
  const char* prim[] = {"0", "-cos(x1)"};
  System s;
  REQUIRE(mc_system_create_expr(2, metric, 3, form, 1, prim, 2, nullptr, 0, 1, 0.0, 0.5, &s.p) == MC_OK);
  const double x[2] = {1.2, 0.3}, v[2] = {1, 0};
  double gamma[8];
  REQUIRE(mc_christoffel(s.p, x, gamma) == MC_OK);
  // Gamma^1_22 = -sin cos, layout [k][i][j].
  CHECK(std::abs(gamma[3] + std::sin(1.2) * std::cos(1.2)) < 1e-12);
  double sec = 0, surf = 0;
  const double w[2] = {0, 1 / std::sin(1.2)};
  REQUIRE(mc_sec_omega_k(s.p, x, v, w, 0.5, &sec) == MC_OK);
  REQUIRE(mc_surface_sec_b(s.p, x, v, 0.5, &surf) == MC_OK);
  CHECK(std::abs(sec - surf) < 1e-10);

  const char* bad[] = {"1", "0", "sin(x1"};
  mc_system* p = nullptr;
  CHECK(mc_system_create_expr(2, bad, 3, form, 1, nullptr, 0, nullptr, 0, 1, 0.0, 0.5, &p) == MC_ERR_PARSE);
  CHECK(p == nullptr);
  CHECK(std::string(mc_last_error()).size() > 0);
  CHECK(mc_system_create_expr(2, metric, 2, form, 1, nullptr, 0, nullptr, 0, 1, 0.0, 0.5, &p) ==
        MC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("capi: integration and orbits") {
  System t;
  REQUIRE(mc_system_create_builtin("flat_torus", 1.0, 0.0, &t.p) == MC_OK);
  const double x0[2] = {0, 0}, v0[2] = {1, 0};
  mc_orbit* o = nullptr;
  REQUIRE(mc_integrate(t.p, x0, v0, 2 * M_PI, 1e-12, 64, &o) == MC_OK);
  CHECK(mc_orbit_size(o) == 65);
  double tt, x[2], v[2];
  REQUIRE(mc_orbit_sample(o, 16, &tt, x, v) == MC_OK);
  CHECK(std::abs(tt - M_PI / 2) < 1e-15);
  CHECK(std::abs(x[0] - 1) < 1e-9);
  CHECK(std::abs(x[1] + 1) < 1e-9);
  CHECK(mc_orbit_energy_drift(o) < 1e-10);
  CHECK(mc_orbit_sample(o, 65, &tt, x, v) == MC_ERR_INVALID_ARGUMENT);
  mc_orbit_destroy(o);

  mc_record* r = nullptr;
  REQUIRE(mc_find_orbit(t.p, 0.5, x0, v0, 6.0, 256, 16, &r) == MC_OK);
  CHECK(mc_record_found(r) == 1);
  CHECK(mc_record_certified(r) == 1);
  CHECK(std::abs(mc_record_period(r) - 2 * M_PI) < 1e-8);
  CHECK(mc_record_index(r) == 1);

  size_t needed = 0;
  char small[8];
  CHECK(mc_record_json(r, small, sizeof small, &needed) == MC_ERR_BUFFER_TOO_SMALL);
  CHECK(small[0] == '\0');
  CHECK(std::string(mc_last_error()) == "buffer too small");
  CHECK(needed > sizeof small);
  CHECK(mc_record_json(r, nullptr, 0, &needed) == MC_ERR_BUFFER_TOO_SMALL);
  std::vector<char> buf(needed);
  REQUIRE(mc_record_json(r, buf.data(), buf.size(), nullptr) == MC_OK);
  const auto j = nlohmann::json::parse(buf.data());
  CHECK(j.at("status") == "certified");
  mc_record_destroy(r);
}

TEST_CASE("capi: run_config") {
  const fs::path dir = fs::temp_directory_path() / ("magcurv_capi_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.toml";
  {
    std::ofstream f(cfg);
    f << "[system]\nbuiltin = \"round_sphere\"\nb = 0\n\n[task]\ncommand = \"curvature\"\nk = 0.5\nsamples = 20\n";
  }
  int code = -1;
  REQUIRE(mc_run_config(cfg.c_str(), (dir / "out").c_str(), "csv", 1, 3, 0, 0, &code) == MC_OK);
  CHECK(code == 0);
  CHECK(fs::exists(dir / "out" / "curvature.csv"));
  CHECK(std::string(mc_last_error()).empty());

  {
    std::ofstream f(cfg);
    f << "[system]\nbuiltin = \"round_sphere\"\n\n[task]\ncommand = \"curvature\"\nk = -1\n";
  }
  REQUIRE(mc_run_config(cfg.c_str(), nullptr, nullptr, 0, 0, 0, 0, &code) == MC_OK);
  CHECK(code == 2);
  const auto err = nlohmann::json::parse(mc_last_error());
  CHECK(err.at("error").at("kind") == "schema");
  CHECK(mc_run_config(nullptr, nullptr, nullptr, 0, 0, 0, 0, &code) == MC_ERR_INVALID_ARGUMENT);
  fs::remove_all(dir);
}
