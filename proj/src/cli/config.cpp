#include "cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "common/format.hpp"
#include "geom/builtins.hpp"

namespace magcurv {

ConfigValue ConfigValue::string(std::string s) {
  ConfigValue v;
  v.type = Type::String;
  v.str = std::move(s);
  return v;
}

ConfigValue ConfigValue::number(double x) {
  ConfigValue v;
  v.type = Type::Number;
  v.num = x;
  return v;
}

ConfigValue ConfigValue::list(std::vector<ConfigValue> items) {
  ConfigValue v;
  v.type = Type::List;
  v.items = std::move(items);
  return v;
}

bool ConfigValue::operator==(const ConfigValue& o) const {
  if (type != o.type) return false;
  switch (type) {
    case Type::String: return str == o.str;
    case Type::Number: return num == o.num;
    case Type::List: return items == o.items;
  }
  return false;
}

namespace {

[[noreturn]] void syntax(int line, const std::string& what) {
  fail(ErrorKind::Parse, "config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool is_key_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

ConfigValue bare_value(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (!tok.empty() && end == tok.c_str() + tok.size() && std::isfinite(v)) return ConfigValue::number(v);
  return ConfigValue::string(tok);
}

// Cursor over the value part of one line.
struct LineReader {
  const std::string& s;
  std::size_t pos;
  int line;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip();
    return pos >= s.size() || s[pos] == '#';
  }

  ConfigValue quoted() {
    ++pos;
    std::string out;
    while (pos < s.size() && s[pos] != '"') {
      char c = s[pos++];
      if (c == '\\') {
        if (pos >= s.size()) syntax(line, "unterminated escape");
        const char e = s[pos++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: syntax(line, std::string("unknown escape \\") + e);
        }
      }
      out += c;
    }
    if (pos >= s.size()) syntax(line, "unterminated string");
    ++pos;
    return ConfigValue::string(out);
  }

  ConfigValue scalar(bool in_list) {
    skip();
    if (pos >= s.size()) syntax(line, "missing value");
    if (s[pos] == '"') return quoted();
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] != '#' && !(in_list && (s[pos] == ',' || s[pos] == ']'))) {
      if (s[pos] == '"' || s[pos] == '[') syntax(line, "unexpected character in bare value");
      ++pos;
    }
    const std::string tok = trim(s.substr(start, pos - start));
    if (tok.empty()) syntax(line, "missing value");
    return bare_value(tok);
  }

  ConfigValue value() {
    skip();
    if (pos < s.size() && s[pos] == '[') {
      ++pos;
      std::vector<ConfigValue> items;
      skip();
      if (pos < s.size() && s[pos] == ']') {
        ++pos;
        return ConfigValue::list(std::move(items));
      }
      for (;;) {
        skip();
        if (pos < s.size() && s[pos] == '[') syntax(line, "nested lists are not supported");
        items.push_back(scalar(true));
        skip();
        if (pos >= s.size()) syntax(line, "unterminated list");
        if (s[pos] == ',') {
          ++pos;
          continue;
        }
        if (s[pos] == ']') {
          ++pos;
          break;
        }
        syntax(line, "expected ',' or ']' in list");
      }
      return ConfigValue::list(std::move(items));
    }
    return scalar(false);
  }
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string render(const ConfigValue& v) {
  switch (v.type) {
    case ConfigValue::Type::String: return quote(v.str);
    case ConfigValue::Type::Number: return fmt(v.num);
    case ConfigValue::Type::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.items.size(); ++i) out += (i ? ", " : "") + render(v.items[i]);
      return out + "]";
    }
  }
  return "";
}

}  // namespace

RawConfig parse_config_text(const std::string& text) {
  RawConfig cfg;
  std::istringstream in(text);
  std::string raw_line;
  std::string section;
  int line = 0;
  while (std::getline(in, raw_line)) {
    ++line;
    if (!raw_line.empty() && raw_line.back() == '\r') raw_line.pop_back();
    const std::string l = trim(raw_line);
    if (l.empty() || l[0] == '#') continue;
    if (l[0] == '[') {
      const std::size_t close = l.find(']');
      if (close == std::string::npos) syntax(line, "unterminated section header");
      const std::string rest = trim(l.substr(close + 1));
      if (!rest.empty() && rest[0] != '#') syntax(line, "text after section header");
      section = trim(l.substr(1, close - 1));
      if (section.empty() || !std::all_of(section.begin(), section.end(), is_key_char))
        syntax(line, "invalid section name '" + section + "'");
      if (cfg.sections.count(section)) syntax(line, "duplicate section [" + section + "]");
      cfg.sections[section];
      continue;
    }
    const std::size_t eq = l.find('=');
    if (eq == std::string::npos) syntax(line, "expected 'key = value'");
    const std::string key = trim(l.substr(0, eq));
    if (key.empty() || !std::all_of(key.begin(), key.end(), is_key_char)) syntax(line, "invalid key '" + key + "'");
    if (section.empty()) syntax(line, "key '" + key + "' outside any section");
    LineReader r{l, eq + 1, line};
    ConfigValue v = r.value();
    if (!r.done()) syntax(line, "unexpected text after value");
    auto& sec = cfg.sections[section];
    if (sec.count(key)) syntax(line, "duplicate key '" + section + "." + key + "'");
    sec.emplace(key, std::move(v));
  }
  return cfg;
}

RawConfig load_raw_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot read config '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return parse_config_text(os.str());
}

std::string serialize_config(const RawConfig& cfg) {
  std::string out;
  bool first = true;
  for (const auto& [name, sec] : cfg.sections) {
    if (!first) out += "\n";
    first = false;
    out += "[" + name + "]\n";
    for (const auto& [key, v] : sec) out += key + " = " + render(v) + "\n";
  }
  return out;
}

namespace {

std::string issue_summary(const std::vector<SchemaIssue>& issues) {
  std::string s = "config schema violations:";
  for (const auto& i : issues) s += "\n  " + i.path + ": " + i.message;
  return s;
}

}  // namespace

SchemaError::SchemaError(std::vector<SchemaIssue> issues)
    : Error(ErrorKind::InvalidArgument, issue_summary(issues)), issues_(std::move(issues)) {}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"integrate", "curvature",    "scan-k0",    "theorem-b", "find-orbit",
                                              "index",     "transport",    "bonnet-myers", "mane-bound", "report"};
  return names;
}

namespace {

enum class Bound { Any, Positive, NonNegative };

// Typed access to one section, recording issues instead of throwing.
class SectionReader {
 public:
  SectionReader(const RawConfig& raw, std::string name, std::vector<SchemaIssue>& issues)
      : name_(std::move(name)), issues_(issues) {
    auto it = raw.sections.find(name_);
    if (it != raw.sections.end()) sec_ = &it->second;
  }

  bool present() const { return sec_ != nullptr; }
  bool has(const std::string& key) const { return sec_ && sec_->count(key); }

  std::optional<double> number(const std::string& key, Bound bound = Bound::Any) {
    const ConfigValue* v = get(key);
    if (!v) return std::nullopt;
    auto d = to_number(*v, path(key));
    if (d && !check_bound(*d, bound, path(key))) return std::nullopt;
    return d;
  }

  std::optional<long long> integer(const std::string& key, long long min) {
    const ConfigValue* v = get(key);
    if (!v) return std::nullopt;
    return to_integer(*v, path(key), min);
  }

  std::optional<std::string> string(const std::string& key, const std::vector<std::string>& allowed = {}) {
    const ConfigValue* v = get(key);
    if (!v) return std::nullopt;
    if (v->type != ConfigValue::Type::String) {
      issue(path(key), "expected a string");
      return std::nullopt;
    }
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v->str) == allowed.end()) {
      std::string opts;
      for (const auto& a : allowed) opts += (opts.empty() ? "" : ", ") + a;
      issue(path(key), "'" + v->str + "' is not one of: " + opts);
      return std::nullopt;
    }
    return v->str;
  }

  std::optional<bool> boolean(const std::string& key) {
    const ConfigValue* v = get(key);
    if (!v) return std::nullopt;
    if (v->type == ConfigValue::Type::String && (v->str == "true" || v->str == "false")) return v->str == "true";
    if (v->type == ConfigValue::Type::Number && (v->num == 0.0 || v->num == 1.0)) return v->num == 1.0;
    issue(path(key), "expected true or false");
    return std::nullopt;
  }

  std::optional<std::vector<double>> numbers(const std::string& key, Bound bound = Bound::Any) {
    const ConfigValue* v = get(key);
    if (!v) return std::nullopt;
    if (v->type != ConfigValue::Type::List) {
      issue(path(key), "expected a list");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t i = 0; i < v->items.size(); ++i) {
      const std::string p = path(key) + "[" + std::to_string(i) + "]";
      auto d = to_number(v->items[i], p);
      if (d && check_bound(*d, bound, p))
        out.push_back(*d);
      else
        ok = false;
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<std::vector<long long>> integers(const std::string& key, long long min) {
    const ConfigValue* v = get(key);
    if (!v) return std::nullopt;
    if (v->type != ConfigValue::Type::List) {
      issue(path(key), "expected a list");
      return std::nullopt;
    }
    std::vector<long long> out;
    bool ok = true;
    for (std::size_t i = 0; i < v->items.size(); ++i) {
      auto d = to_integer(v->items[i], path(key) + "[" + std::to_string(i) + "]", min);
      if (d)
        out.push_back(*d);
      else
        ok = false;
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<std::vector<std::string>> strings(const std::string& key) {
    const ConfigValue* v = get(key);
    if (!v) return std::nullopt;
    if (v->type != ConfigValue::Type::List) {
      issue(path(key), "expected a list of expressions");
      return std::nullopt;
    }
    std::vector<std::string> out;
    for (const ConfigValue& item : v->items)
      out.push_back(item.type == ConfigValue::Type::Number ? fmt(item.num) : item.str);
    for (std::size_t i = 0; i < v->items.size(); ++i)
      if (v->items[i].type == ConfigValue::Type::List) {
        issue(path(key) + "[" + std::to_string(i) + "]", "expected an expression");
        return std::nullopt;
      }
    return out;
  }

  // Reports keys nobody asked for.
  void finish() {
    if (!sec_) return;
    for (const auto& [key, v] : *sec_)
      if (!used_.count(key)) issue(path(key), "unknown key");
  }

  std::string path(const std::string& key) const { return name_ + "." + key; }
  void issue(const std::string& p, const std::string& m) { issues_.push_back({p, m}); }

 private:
  const ConfigValue* get(const std::string& key) {
    used_.insert(key);
    if (!sec_) return nullptr;
    auto it = sec_->find(key);
    return it == sec_->end() ? nullptr : &it->second;
  }

  // Numbers may be written as constant expressions such as "2*pi".
  std::optional<double> to_number(const ConfigValue& v, const std::string& p) {
    if (v.type == ConfigValue::Type::Number) return v.num;
    if (v.type == ConfigValue::Type::String) {
      try {
        const Expression e = Expression::parse(v.str);
        if (e.variable_count() == 0 && !e.uses_energy()) return e.eval(Vec());
        issue(p, "expected a constant, got '" + v.str + "'");
      } catch (const Error&) {
        issue(p, "expected a number, got '" + v.str + "'");
      }
      return std::nullopt;
    }
    issue(p, "expected a number, got a list");
    return std::nullopt;
  }

  std::optional<long long> to_integer(const ConfigValue& v, const std::string& p, long long min) {
    if (v.type != ConfigValue::Type::Number || v.num != std::floor(v.num) || std::abs(v.num) > 9.0e15) {
      issue(p, "expected an integer");
      return std::nullopt;
    }
    const auto i = static_cast<long long>(v.num);
    if (i < min) {
      issue(p, "must be >= " + std::to_string(min));
      return std::nullopt;
    }
    return i;
  }

  bool check_bound(double d, Bound b, const std::string& p) {
    if (b == Bound::Positive && !(d > 0.0)) {
      issue(p, "must be > 0");
      return false;
    }
    if (b == Bound::NonNegative && !(d >= 0.0)) {
      issue(p, "must be >= 0");
      return false;
    }
    return true;
  }

  std::string name_;
  const ConfigSection* sec_ = nullptr;
  std::vector<SchemaIssue>& issues_;
  std::set<std::string> used_;
};

void validate_expressions(SectionReader& r, const std::string& key, const std::vector<std::string>& entries, int n) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string p = r.path(key) + "[" + std::to_string(i) + "]";
    try {
      const Expression e = Expression::parse(entries[i]);
      if (e.variable_count() > n)
        r.issue(p, "uses x" + std::to_string(e.variable_count()) + " beyond dimension " + std::to_string(n));
    } catch (const ParseError& e) {
      r.issue(p, e.what());
    }
  }
}

void read_system(const RawConfig& raw, SystemConfig& sys, std::vector<SchemaIssue>& issues) {
  SectionReader r(raw, "system", issues);
  if (!r.present()) {
    issues.push_back({"system", "missing section"});
    return;
  }
  const auto builtin = r.string("builtin", {"flat_torus", "round_sphere", "hyperbolic_chart"});
  if (auto b = r.number("b")) sys.b = *b;
  if (auto m = r.number("modulation")) sys.modulation = *m;
  const auto dim = r.integer("dimension", 2);
  const auto metric = r.strings("metric");
  const auto two_form = r.strings("two_form");
  const auto primitive = r.strings("primitive");
  const auto scope = r.string("primitive_scope", {"global", "cover"});
  const auto lattice = r.numbers("lattice", Bound::NonNegative);
  const auto scheme = r.string("scheme", {"analytic", "finite_difference"});
  const auto fd_step = r.number("fd_step", Bound::Positive);
  const auto name = r.string("name");

  if (r.has("builtin")) {
    if (builtin) sys.builtin = *builtin;
    for (const char* k : {"dimension", "metric", "two_form", "primitive", "primitive_scope", "lattice", "scheme",
                          "fd_step"})
      if (r.has(k)) r.issue(r.path(k), "not allowed together with system.builtin");
    if (builtin && *builtin != "flat_torus" && r.has("modulation"))
      r.issue(r.path("modulation"), "only flat_torus takes a modulation");
  } else {
    if (r.has("b")) r.issue(r.path("b"), "only builtin systems take b");
    if (r.has("modulation")) r.issue(r.path("modulation"), "only builtin systems take a modulation");
    ExpressionSystemSpec& e = sys.expression;
    if (!r.has("dimension")) r.issue(r.path("dimension"), "required for expression systems");
    if (!r.has("metric")) r.issue(r.path("metric"), "required (or set system.builtin)");
    if (!r.has("two_form")) r.issue(r.path("two_form"), "required (or set system.builtin)");
    if (dim) e.dimension = static_cast<int>(*dim);
    const int n = e.dimension;
    if (metric) {
      e.metric = *metric;
      const std::size_t full = n * n, tri = n * (n + 1) / 2;
      if (dim && metric->size() != full && metric->size() != tri)
        r.issue(r.path("metric"), "needs " + std::to_string(full) + " or " + std::to_string(tri) + " entries");
      validate_expressions(r, "metric", *metric, n);
    }
    if (two_form) {
      e.two_form = *two_form;
      const std::size_t full = n * n, tri = n * (n - 1) / 2;
      if (dim && two_form->size() != full && two_form->size() != tri)
        r.issue(r.path("two_form"), "needs " + std::to_string(full) + " or " + std::to_string(tri) + " entries");
      validate_expressions(r, "two_form", *two_form, n);
    }
    if (primitive) {
      e.primitive = *primitive;
      if (dim && static_cast<int>(primitive->size()) != n)
        r.issue(r.path("primitive"), "needs " + std::to_string(n) + " entries");
      validate_expressions(r, "primitive", *primitive, n);
    }
    if (scope) e.primitive_scope = *scope == "cover" ? PrimitiveScope::Cover : PrimitiveScope::Global;
    if (lattice) {
      e.lattice = *lattice;
      if (dim && static_cast<int>(lattice->size()) != n)
        r.issue(r.path("lattice"), "needs " + std::to_string(n) + " entries (0 for non-periodic)");
    }
    if (scheme) e.analytic = *scheme == "analytic";
    if (fd_step) e.fd_step = *fd_step;
    if (name) e.name = *name;
  }
  r.finish();
}

void read_task(const RawConfig& raw, TaskConfig& t, int n, std::vector<SchemaIssue>& issues) {
  SectionReader r(raw, "task", issues);
  if (!r.present()) {
    issues.push_back({"task", "missing section"});
    return;
  }
  const auto command = r.string("command", command_names());
  if (!r.has("command")) r.issue(r.path("command"), "required");
  if (command) t.command = *command;

  t.k = r.number("k", Bound::Positive);
  if (auto v = r.numbers("k_grid", Bound::Positive)) t.k_grid = *v;
  t.k0 = r.number("k0", Bound::Positive);
  if (auto v = r.numbers("x0")) t.x0 = *v;
  if (auto v = r.numbers("v0")) t.v0 = *v;
  t.T = r.number("T", Bound::Positive);
  if (auto v = r.integer("seed", 0)) t.seed = static_cast<std::uint64_t>(*v);
  t.tolerance = r.number("tolerance", Bound::Positive);
  t.residual_tolerance = r.number("residual_tolerance", Bound::Positive);
  if (auto v = r.integer("samples", 1)) t.samples = static_cast<int>(*v);
  if (auto v = r.integer("nodes", 8)) t.nodes = static_cast<int>(*v);
  if (auto v = r.integer("modes", 1)) t.modes = static_cast<int>(*v);
  if (auto v = r.string("method", {"shoot", "gradient"})) t.method = *v;
  if (auto v = r.numbers("loop_center")) t.loop_center = *v;
  if (auto v = r.number("loop_radius", Bound::Positive)) t.loop_radius = *v;
  if (auto v = r.number("loop_period", Bound::Positive)) t.loop_period = *v;
  if (auto v = r.boolean("loop_clockwise")) t.loop_clockwise = *v;
  if (auto v = r.integer("loop_nodes", 8)) t.loop_nodes = static_cast<int>(*v);
  if (auto v = r.integer("max_iterations", 1)) t.max_iterations = static_cast<int>(*v);
  if (auto v = r.integer("grid", 1)) t.grid = static_cast<int>(*v);
  if (auto v = r.integer("directions", 1)) t.directions = static_cast<int>(*v);
  if (auto v = r.integer("k_samples", 1)) t.k_samples = static_cast<int>(*v);
  if (auto v = r.string("frame", {"coordinate", "adapted"})) t.frame = *v;
  if (auto v = r.number("relative_threshold", Bound::Positive)) t.relative_threshold = *v;
  if (auto v = r.numbers("radii", Bound::Positive)) {
    t.radii = *v;
    for (std::size_t i = 1; i < v->size(); ++i)
      if (!((*v)[i] > (*v)[i - 1])) {
        r.issue(r.path("radii"), "must be strictly increasing");
        break;
      }
  }
  if (auto v = r.numbers("mane_center")) t.mane_center = *v;
  if (auto v = r.numbers("region_lower")) t.region_lower = *v;
  if (auto v = r.numbers("region_upper")) t.region_upper = *v;
  if (auto v = r.integers("target_winding", std::numeric_limits<long long>::min() / 2))
    for (long long w : *v) t.target_winding.push_back(static_cast<int>(w));
  if (auto v = r.boolean("project_energy")) t.project_energy = *v;

  const auto need_len = [&](const char* key, const std::vector<double>& v) {
    if (r.has(key) && !v.empty() && static_cast<int>(v.size()) != n)
      r.issue(r.path(key), "needs " + std::to_string(n) + " entries");
  };
  need_len("x0", t.x0);
  need_len("v0", t.v0);
  need_len("loop_center", t.loop_center);
  need_len("mane_center", t.mane_center);
  need_len("region_lower", t.region_lower);
  need_len("region_upper", t.region_upper);
  if (r.has("target_winding") && !t.target_winding.empty() && static_cast<int>(t.target_winding.size()) != n)
    r.issue(r.path("target_winding"), "needs " + std::to_string(n) + " entries");
  if (r.has("region_lower") != r.has("region_upper"))
    r.issue(r.path(r.has("region_lower") ? "region_upper" : "region_lower"), "region needs both bounds");
  if (t.region_lower.size() == t.region_upper.size())
    for (std::size_t i = 0; i < t.region_lower.size(); ++i)
      if (!(t.region_upper[i] > t.region_lower[i])) {
        r.issue(r.path("region_upper") + "[" + std::to_string(i) + "]", "must exceed region_lower");
        break;
      }

  const auto need = [&](const char* key) {
    if (!r.has(key)) r.issue(r.path(key), "required by command '" + t.command + "'");
  };
  const std::string& c = t.command;
  if (c == "integrate") {
    need("x0");
    need("v0");
    need("T");
  } else if (c == "curvature") {
    if (!r.has("k") && !r.has("k_grid")) r.issue(r.path("k"), "required by command 'curvature' (or k_grid)");
  } else if (c == "scan-k0") {
    need("k_grid");
  } else if (c == "theorem-b") {
    need("k0");
    if (n != 2) r.issue("system.dimension", "theorem-b needs a surface");
  } else if (c == "find-orbit" || c == "index" || c == "report") {
    need("k");
    if (t.method == "shoot") {
      need("x0");
      need("v0");
      need("T");
    } else if (n < 2) {
      r.issue("system.dimension", "gradient search needs dimension >= 2");
    }
  } else if (c == "transport") {
    need("x0");
    need("v0");
    need("T");
  } else if (c == "bonnet-myers") {
    need("k");
    need("k_grid");
    need("x0");
    need("v0");
    need("T");
  }
  r.finish();
}

void read_output(const RawConfig& raw, OutputConfig& o, std::vector<SchemaIssue>& issues) {
  SectionReader r(raw, "output", issues);
  if (auto v = r.string("dir")) o.dir = *v;
  if (auto v = r.string("format", {"csv", "json"})) o.format = *v;
  if (auto v = r.string("prefix")) {
    if (v->empty() || v->find('/') != std::string::npos)
      r.issue(r.path("prefix"), "must be a non-empty file stem without '/'");
    else
      o.prefix = *v;
  }
  r.finish();
}

}  // namespace

RunConfig validate_config(const RawConfig& raw) {
  std::vector<SchemaIssue> issues;
  RunConfig cfg;
  cfg.raw = raw;
  for (const auto& [name, sec] : raw.sections)
    if (name != "system" && name != "task" && name != "output") issues.push_back({name, "unknown section"});
  read_system(raw, cfg.system, issues);
  read_task(raw, cfg.task, cfg.system.dimension(), issues);
  read_output(raw, cfg.output, issues);
  if (!issues.empty()) throw SchemaError(std::move(issues));
  if (cfg.output.prefix.empty()) cfg.output.prefix = cfg.task.command;
  return cfg;
}

RunConfig load_config(const std::string& path) { return validate_config(load_raw_config(path)); }

}  // namespace magcurv
