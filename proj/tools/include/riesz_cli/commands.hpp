#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace riesz::cli {

struct Check {
  std::string name;
  std::string verdict;  // "ok", "failed", "unknown"
  nlohmann::json detail;
};

struct CommandReport {
  std::string command;
  std::string status = "ok";
  std::vector<Check> checks;
  std::int64_t timing_ms = 0;

  // status is failed when some check failed, unknown when none failed but
  // some check could not be decided, ok otherwise
  void finalize();
  nlohmann::json to_json() const;
  int exit_code() const;  // 0 for ok, 1 otherwise
};

// Parses argv (program name excluded), dispatches the subcommand, and writes
// the report as JSON to --output or stdout. Returns 0 on success, 1 when a
// check failed or stayed undecided, 2 on usage or input errors (one-line
// diagnostic on stderr).
int run_command(const std::vector<std::string>& argv);

}  // namespace riesz::cli
