#pragma once
// Subcommand implementations behind the CLI: each one reads a config,
// runs, writes its outputs plus a manifest into the output directory, and
// prints one PASS/FAIL line per verdict. Returns a process exit code.

#include <cstdint>
#include <optional>
#include <string>

namespace sch {

struct CommandOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<int> paths;      // --paths override
  std::optional<uint64_t> seed;  // --seed override
  bool serial = false;           // force single-threaded reduction
};

int run_simulate(const CommandOptions& opts);
int run_study(const std::string& axis, const CommandOptions& opts);
int run_check_compat(const CommandOptions& opts);
int run_check_energy(const CommandOptions& opts);
int run_check_confinement(const CommandOptions& opts);

// re-runs the manifest's command in serial mode into a scratch directory
// and compares every recorded output byte for byte
int run_replay(const std::string& manifest_path);

}  // namespace sch
