#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "magcurv/magcurv.h"

int main(int argc, char** argv) {
  CLI::App app{"Magnetic curvature toolkit: runs one command described by a config file."};
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  bool verbose = false;
  app.add_option("-c,--config", config, "Config file (sections [system], [task], [output])")->required();
  app.add_option("--seed", seed, "Override task.seed");
  app.add_option("--out", out_dir, "Override output.dir");
  app.add_option("--format", format, "Override output.format (csv or json)");
  app.add_flag("-v,--verbose", verbose, "Progress lines on stderr");
  app.set_version_flag("--version", std::string(mc_version()));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  int exit_code = 3;
  const mc_status st = mc_run_config(config.c_str(), out_dir ? out_dir->c_str() : nullptr,
                                     format ? format->c_str() : nullptr, seed.has_value(), seed.value_or(0),
                                     verbose, 1, &exit_code);
  if (st != MC_OK) {
    std::string msg;
    for (const char* p = mc_last_error(); *p; ++p) {
      if (*p == '"' || *p == '\\') msg += '\\';
      msg += static_cast<unsigned char>(*p) < 0x20 ? ' ' : *p;
    }
    std::fprintf(stderr, "{\"schema_version\":%d,\"error\":{\"kind\":\"internal\",\"message\":\"%s\"}}\n",
                 mc_schema_version(), msg.c_str());
    return 3;
  }
  return exit_code;
}
