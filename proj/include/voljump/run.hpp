#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "voljump/config.hpp"

namespace voljump {

std::string version();

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> outputs;  ///< file names written into out_dir
};

/// Executes one command. Errors are reported on `err`; exit code 1 marks a
/// parse or configuration problem, 2 a numerical failure. Every successful
/// run writes manifest.json next to its outputs.
RunResult run(const RunConfig& config, std::ostream& err);

}  // namespace voljump
