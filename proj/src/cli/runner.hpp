#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"
#include "geom/system.hpp"

namespace magcurv {

enum ExitCode : int {
  kExitOk = 0,
  kExitCertificationFailed = 1,
  kExitSchema = 2,
  kExitRuntime = 3,
};

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;  // csv or json
  bool verbose = false;
};

struct Artifact {
  std::string name;  // file name inside the output directory
  std::string content;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<Artifact> artifacts;
  nlohmann::json summary;  // the JSON envelope, whatever the output format
};

// Builds the configured system; expression parameters bind k to task.k.
// A primitive whose exterior derivative misses sigma is a schema error.
ChartedSystem build_system(const RunConfig& cfg);

// Applies overrides, revalidating the format.
void apply_overrides(RunConfig& cfg, const RunOverrides& o);

// Runs the command in memory. Throws on failure; nothing is written.
RunOutcome execute(const RunConfig& cfg, std::ostream* log = nullptr);

// Writes every artifact or none: files are staged under temporary names and
// renamed once all writes succeeded.
std::vector<std::string> write_artifacts(const std::string& dir, const std::vector<Artifact>& artifacts);

// Whole pipeline: load, override, execute, write. Errors go to `err` as JSON
// and map to the exit codes above.
int run_config_file(const std::string& path, const RunOverrides& o, std::ostream& out, std::ostream& err);
int run_config_text(const std::string& text, const RunOverrides& o, std::ostream& out, std::ostream& err);

}  // namespace magcurv
