#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cli/expression_system.hpp"
#include "common/error.hpp"

namespace magcurv {

// One value of the sectioned key = value format: a string (quoted, or a
// bare token that is not a finite number), a number, or a single-line list.
struct ConfigValue {
  enum class Type { String, Number, List };
  Type type = Type::String;
  std::string str;
  double num = 0.0;
  std::vector<ConfigValue> items;

  static ConfigValue string(std::string s);
  static ConfigValue number(double v);
  static ConfigValue list(std::vector<ConfigValue> items);

  bool operator==(const ConfigValue& o) const;
};

using ConfigSection = std::map<std::string, ConfigValue>;

struct RawConfig {
  std::map<std::string, ConfigSection> sections;
  bool operator==(const RawConfig& o) const { return sections == o.sections; }
};

// Syntax:
//   # full-line or trailing comment
//   [section]
//   key = 0.5 | "text" | bare_text | [1, "a", 2]
// Errors are ErrorKind::Parse with the line number.
RawConfig parse_config_text(const std::string& text);
RawConfig load_raw_config(const std::string& path);
// Canonical text: sections and keys sorted, strings quoted, numbers %.17g.
std::string serialize_config(const RawConfig& cfg);

struct SchemaIssue {
  std::string path;  // e.g. "task.tolerance", "system.metric[2]"
  std::string message;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(std::vector<SchemaIssue> issues);
  const std::vector<SchemaIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<SchemaIssue> issues_;
};

struct SystemConfig {
  std::string builtin;  // empty for expression systems
  double b = 1.0;
  double modulation = 0.0;
  ExpressionSystemSpec expression;
  int dimension() const { return builtin.empty() ? expression.dimension : 2; }
};

struct TaskConfig {
  std::string command;
  std::optional<double> k;
  std::vector<double> k_grid;
  std::optional<double> k0;
  std::vector<double> x0;
  std::vector<double> v0;
  std::optional<double> T;
  std::uint64_t seed = 1;
  std::optional<double> tolerance;
  std::optional<double> residual_tolerance;
  std::optional<int> samples;
  int nodes = 512;
  int modes = 32;
  std::string method = "shoot";
  std::vector<double> loop_center;
  double loop_radius = 0.5;
  double loop_period = M_PI;
  bool loop_clockwise = true;
  int loop_nodes = 64;
  std::optional<int> max_iterations;
  int grid = 32;
  int directions = 24;
  int k_samples = 16;
  std::string frame = "coordinate";
  double relative_threshold = 1e-7;
  std::vector<double> radii;
  std::vector<double> mane_center;
  std::vector<double> region_lower;
  std::vector<double> region_upper;
  std::vector<int> target_winding;
  bool project_energy = false;
};

struct OutputConfig {
  std::string dir = ".";
  std::string format = "json";
  std::string prefix;  // file stem; defaults to the command name
};

struct RunConfig {
  SystemConfig system;
  TaskConfig task;
  OutputConfig output;
  RawConfig raw;
};

const std::vector<std::string>& command_names();

// Checks every key and collects all violations before throwing SchemaError.
RunConfig validate_config(const RawConfig& raw);
RunConfig load_config(const std::string& path);

}  // namespace magcurv
