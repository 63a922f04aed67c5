#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <unistd.h>
#include <sstream>

#include "cli/config.hpp"
#include "cli/expression.hpp"
#include "cli/runner.hpp"
#include "geom/tensors.hpp"

using namespace magcurv;
namespace fs = std::filesystem;

namespace {

Vec V(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

// Random expression text over x1..x3 and k with safe operations only.
std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  std::uniform_real_distribution<double> num(-3.0, 3.0);
  char buf[64];
  switch (pick(rng)) {
    case 0:
      std::snprintf(buf, sizeof buf, "%.6g", num(rng));
      return std::string("(") + buf + ")";
    case 1: return "x" + std::to_string(1 + static_cast<int>(rng() % 3));
    case 2: return "k";
    case 3: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
    case 4: return "(" + random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1) + ")";
    case 5: return "(" + random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1) + ")";
    case 6: return "sin(" + random_expr(rng, depth - 1) + ")";
    case 7: return "exp(-(" + random_expr(rng, depth - 1) + ")^2)";
    case 8: return "sqrt(1 + (" + random_expr(rng, depth - 1) + ")^2)";
    default: return "-" + random_expr(rng, depth - 1) + "/(2 + cos(" + random_expr(rng, depth - 1) + "))";
  }
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("magcurv_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("expression: identity and arithmetic examples") {
  CHECK(std::abs(Expression::parse("sin(x1)^2 + cos(x1)^2").eval(V({0.7})) - 1.0) <= 1e-15);
  CHECK(Expression::parse("1/(x2*x2)").eval(V({0.0, 2.0})) == 0.25);
}

TEST_CASE("expression: syntax error offsets") {
  try {
    Expression::parse("sin(");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(std::string(e.what()).find("offset 4") != std::string::npos);
  }
  auto offset_of = [](const std::string& s) -> long {
    try {
      Expression::parse(s);
    } catch (const ParseError& e) {
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  CHECK(offset_of("1 +") == 3);
  CHECK(offset_of("(1 + 2") == 6);
  CHECK(offset_of("2 ** 3") == 3);
  CHECK(offset_of("1 2") == 2);
  CHECK(offset_of("foo(1)") == 0);
  CHECK(offset_of("x0") == 0);
  CHECK(offset_of("sin x1") == 4);
}

TEST_CASE("expression: precedence") {
  const Vec x = V({2.0});
  CHECK(Expression::parse("-x1^2").eval(x) == -4.0);
  CHECK(Expression::parse("2^3^2").eval(x) == 512.0);
  CHECK(Expression::parse("1 - 2 - 3").eval(x) == -4.0);
  CHECK(Expression::parse("8 / 4 / 2").eval(x) == 1.0);
  CHECK(Expression::parse("2 * 3 + 4").eval(x) == 10.0);
  CHECK(Expression::parse("2^-1").eval(x) == 0.5);
  CHECK(Expression::parse("pi").eval(x) == M_PI);
  CHECK(Expression::parse("3 * k").eval(x, 0.5) == 1.5);
}

TEST_CASE("expression: domain violations raise instead of producing NaN") {
  for (const char* s : {"log(0)", "log(-1)", "sqrt(-1)", "1/0", "x1/(x1-x1)", "(-2)^0.5", "0^-1", "exp(1000)"}) {
    CAPTURE(s);
    try {
      Expression::parse(s).eval(V({1.0}));
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Domain);
    }
  }
}

TEST_CASE("expression: bytecode matches the tree-walking interpreter on a random corpus") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  int compared = 0;
  for (int i = 0; i < 500; ++i) {
    const std::string text = random_expr(rng, 5);
    const Expression e = Expression::parse(text);
    const Expression again = Expression::parse(e.to_string());
    for (int s = 0; s < 4; ++s) {
      const Vec x = V({coord(rng), coord(rng), coord(rng)});
      const double k = std::abs(coord(rng));
      double a, b, c;
      try {
        a = e.eval(x, k);
      } catch (const Error&) {
        CHECK_THROWS(e.eval_tree(x, k));
        continue;
      }
      b = e.eval_tree(x, k);
      c = again.eval(x, k);
      CHECK(a == b);
      CHECK(std::abs(a - c) <= 1e-12 * std::max(1.0, std::abs(a)));
      ++compared;
    }
  }
  CHECK(compared > 1000);
}

TEST_CASE("expression: symbolic derivative matches central differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  for (int i = 0; i < 200; ++i) {
    const Expression e = Expression::parse(random_expr(rng, 4));
    for (int var = 0; var < 3; ++var) {
      const Expression d = e.derivative(var);
      const Vec x = V({coord(rng), coord(rng), coord(rng)});
      const double h = 1e-5;
      Vec xp = x, xm = x;
      xp[var] += h;
      xm[var] -= h;
      double fd, exact;
      try {
        fd = (e.eval(xp, 0.3) - e.eval(xm, 0.3)) / (2 * h);
        exact = d.eval(x, 0.3);
      } catch (const Error&) {
        continue;
      }
      CHECK(std::abs(fd - exact) <= 1e-5 * std::max(1.0, std::abs(exact)));
    }
  }
  CHECK(Expression::parse("x1^3").derivative(0).eval(V({2.0})) == 12.0);
  CHECK(Expression::parse("x2").derivative(0).is_constant_zero());
}

TEST_CASE("config: parse and canonical serialization") {
  const std::string text = R"(# a comment
[system]
builtin = flat_torus
b = 1            # trailing comment
[task]
command = "find-orbit"
k = 0.5
x0 = [0, 0]
v0 = [1, "0"]
T = "2*pi"
[output]
dir = "out dir"
)";
  const RawConfig raw = parse_config_text(text);
  CHECK(raw.sections.at("system").at("builtin").str == "flat_torus");
  CHECK(raw.sections.at("system").at("b").num == 1.0);
  CHECK(raw.sections.at("task").at("x0").items.size() == 2);
  const std::string s1 = serialize_config(raw);
  const RawConfig again = parse_config_text(s1);
  CHECK(again == raw);
  CHECK(serialize_config(again) == s1);

  const RunConfig cfg = validate_config(raw);
  CHECK(cfg.task.T.value() == doctest::Approx(2 * M_PI).epsilon(1e-15));
  CHECK(cfg.output.prefix == "find-orbit");
}

TEST_CASE("config: round trip on awkward values") {
  RawConfig raw;
  raw.sections["task"]["s"] = ConfigValue::string("quote \" backslash \\ tab \t # not a comment");
  raw.sections["task"]["n"] = ConfigValue::number(0.1);
  raw.sections["task"]["tiny"] = ConfigValue::number(-1.2345678901234567e-300);
  raw.sections["task"]["l"] = ConfigValue::list({ConfigValue::number(1), ConfigValue::string("a,b]"), ConfigValue::list({})});
  raw.sections["empty"];
  CHECK_THROWS(parse_config_text(serialize_config(raw)));  // nested lists are not part of the format
  raw.sections["task"]["l"] = ConfigValue::list({ConfigValue::number(1), ConfigValue::string("a,b]")});
  const std::string s = serialize_config(raw);
  CHECK(parse_config_text(s) == raw);
  CHECK(serialize_config(parse_config_text(s)) == s);
}

TEST_CASE("config: syntax errors carry line numbers") {
  auto message = [](const std::string& t) -> std::string {
    try {
      parse_config_text(t);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      return e.what();
    }
    return "";
  };
  CHECK(message("k = 1\n").find("line 1") != std::string::npos);
  CHECK(message("[task]\nk = [1, 2\n").find("line 2") != std::string::npos);
  CHECK(message("[task]\nk = 1\nk = 2\n").find("duplicate") != std::string::npos);
  CHECK(message("[task]\ns = \"open\n").find("unterminated") != std::string::npos);
}

TEST_CASE("config: schema violations are listed exhaustively with key paths") {
  const std::string text = R"([system]
builtin = klein_bottle
metric = ["1"]
[task]
command = find-orbit
k = -1
tolerance = -1e-9
nodes = 3.5
bogus = 1
[output]
format = xml
[extra]
)";
  try {
    validate_config(parse_config_text(text));
    FAIL("expected schema errors");
  } catch (const SchemaError& e) {
    std::set<std::string> paths;
    for (const auto& i : e.issues()) paths.insert(i.path);
    for (const char* p : {"system.builtin", "system.metric", "task.k", "task.tolerance", "task.nodes", "task.bogus",
                          "task.x0", "task.v0", "task.T", "output.format", "extra"})
      CHECK_MESSAGE(paths.count(p) == 1, p);
  }
}

TEST_CASE("config: expression systems are validated") {
  const std::string text = R"([system]
dimension = 2
metric = ["1", "0", "1 + x3"]
two_form = ["sin("]
[task]
command = curvature
k = 0.5
)";
  try {
    validate_config(parse_config_text(text));
    FAIL("expected schema errors");
  } catch (const SchemaError& e) {
    std::set<std::string> paths;
    for (const auto& i : e.issues()) paths.insert(i.path);
    CHECK(paths.count("system.metric[2]") == 1);
    CHECK(paths.count("system.two_form[0]") == 1);
  }
}

TEST_CASE("runner: expression system with a wrong primitive is rejected") {
  TempDir dir;
  const std::string cfg = dir.write("bad.cfg", R"([system]
dimension = 2
metric = ["1", "0", "1"]
two_form = ["1"]
primitive = ["0", "2*x1"]
[task]
command = curvature
k = 0.5
[output]
dir = ")" + (dir.path / "out").string() + "\"\n");
  std::ostringstream out, err;
  CHECK(run_config_file(cfg, {}, out, err) == kExitSchema);
  CHECK(err.str().find("system.primitive") != std::string::npos);
  CHECK(!fs::exists(dir.path / "out"));
}

TEST_CASE("runner: find-orbit on the flat torus") {
  TempDir dir;
  const std::string cfg = dir.write("torus.cfg", R"([system]
builtin = flat_torus
b = 1
[task]
command = find-orbit
k = 0.5
x0 = [0, 0]
v0 = [1, 0]
T = 6
nodes = 256
modes = 16
[output]
dir = ")" + dir.path.string() + "\"\n");
  std::ostringstream out, err;
  const int code = run_config_file(cfg, {}, out, err);
  CHECK(code == kExitOk);
  INFO(err.str());
  const auto j = nlohmann::json::parse(slurp(dir.path / "find-orbit.json"));
  CHECK(j["schema_version"] == 1);
  CHECK(std::abs(j["result"]["T"].get<double>() - 2 * M_PI) < 1e-6);
  CHECK(j["result"]["index"]["negative"] == 1);
  for (const auto& c : j["result"]["checks"])
    if (c["applicable"].get<bool>()) CHECK(c["pass"].get<bool>());
}

TEST_CASE("runner: curvature on the round sphere has constant sec 1") {
  TempDir dir;
  const std::string cfg = dir.write("sphere.cfg", R"([system]
builtin = round_sphere
b = 0
[task]
command = curvature
k = 0.5
samples = 50
[output]
format = csv
dir = ")" + dir.path.string() + "\"\n");
  std::ostringstream out, err;
  REQUIRE(run_config_file(cfg, {}, out, err) == kExitOk);
  std::istringstream csv(slurp(dir.path / "curvature.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "x1,x2,v1,v2,w1,w2,k,sec,ric,trace_a");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    REQUIRE(cells.size() == 10);
    CHECK(std::abs(cells[7] - 1.0) < 1e-10);
    ++rows;
  }
  CHECK(rows == 50);
}

TEST_CASE("runner: negative tolerance is a schema error with no outputs") {
  TempDir dir;
  const std::string cfg = dir.write("neg.cfg", R"([system]
builtin = flat_torus
[task]
command = integrate
x0 = [0, 0]
v0 = [1, 0]
T = 1
tolerance = -1e-10
[output]
dir = ")" + (dir.path / "out").string() + "\"\n");
  std::ostringstream out, err;
  CHECK(run_config_file(cfg, {}, out, err) == kExitSchema);
  const auto j = nlohmann::json::parse(err.str());
  CHECK(j["schema_version"] == 1);
  CHECK(j["error"]["kind"] == "schema");
  CHECK(j["error"]["issues"][0]["path"] == "task.tolerance");
  CHECK(!fs::exists(dir.path / "out"));
  CHECK(out.str().empty());
}

TEST_CASE("runner: runtime failures leave no partial outputs") {
  TempDir dir;
  const std::string cfg = dir.write("bad.cfg", R"([system]
builtin = hyperbolic_chart
[task]
command = integrate
x0 = [0, -1]
v0 = [1, 0]
T = 1
[output]
dir = ")" + (dir.path / "out").string() + "\"\n");
  std::ostringstream out, err;
  CHECK(run_config_file(cfg, {}, out, err) == kExitRuntime);
  CHECK(nlohmann::json::parse(err.str())["error"]["kind"] == "domain");
  CHECK(!fs::exists(dir.path / "out"));
}

TEST_CASE("runner: identical config and seed give byte-identical outputs") {
  TempDir dir;
  const std::string base = R"([system]
builtin = flat_torus
b = 1
modulation = 0.2
[task]
command = scan-k0
k_grid = [0.1, 0.5, 1, 2]
samples = 300
seed = 5
)";
  const std::string cfg = dir.write("scan.cfg", base);
  for (const char* fmt : {"csv", "json"}) {
    RunOverrides o1, o2;
    o1.out_dir = (dir.path / "a").string();
    o2.out_dir = (dir.path / "b").string();
    o1.format = o2.format = fmt;
    std::ostringstream out, err;
    REQUIRE(run_config_file(cfg, o1, out, err) == kExitOk);
    REQUIRE(run_config_file(cfg, o2, out, err) == kExitOk);
    const std::string name = std::string("scan-k0.") + fmt;
    CHECK(slurp(dir.path / "a" / name) == slurp(dir.path / "b" / name));
    CHECK(!slurp(dir.path / "a" / name).empty());
  }
  RunOverrides o3;
  o3.out_dir = (dir.path / "c").string();
  o3.format = "csv";
  o3.seed = 6;
  std::ostringstream out, err;
  REQUIRE(run_config_file(cfg, o3, out, err) == kExitOk);
  CHECK(slurp(dir.path / "a" / "scan-k0.csv") != slurp(dir.path / "c" / "scan-k0.csv"));
}

TEST_CASE("runner: expression system reproduces the builtin torus") {
  const std::string text = R"cfg([system]
dimension = 2
metric = ["1", "0", "1"]
two_form = ["1 + 0.2*sin(x1)"]
primitive = ["0", "x1 - 0.2*cos(x1)"]
primitive_scope = cover
lattice = ["2*pi", "2*pi"]
[task]
command = curvature
k = 0.5
)cfg";
  const RunConfig cfg = validate_config(parse_config_text(text));
  const ChartedSystem e = build_system(cfg);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  for (int i = 0; i < 20; ++i) {
    const Vec x = V({u(rng), u(rng)});
    const PointJet je = evaluate_jet(e, x, JetOrder::Curvature);
    CHECK((je.sigma - Mat{{0.0, 1 + 0.2 * std::sin(x[0])}, {-(1 + 0.2 * std::sin(x[0])), 0.0}}).norm() < 1e-15);
    CHECK(je.d_omega[0](0, 1) == doctest::Approx(0.2 * std::cos(x[0])).epsilon(1e-14));
  }
}
