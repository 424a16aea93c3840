#pragma once

#include <string>

#include "core/config.hpp"

namespace difflab {

uint64_t fnv1a64(const std::string& bytes);

struct RunOutcome {
  std::string dir;       // artifacts directory
  int exit_code = 0;     // 0 even with per-row sweep failures
};

// Executes the experiment named by [run] kind and writes artifacts plus a
// manifest. out_dir empty = runs/<stamp>-<hash> under [output] dir.
RunOutcome run_config(const Config& cfg, std::string out_dir = "");
RunOutcome run_config_file(const std::string& path, std::string out_dir = "");

}  // namespace difflab
