#pragma once

// Command-line front end. Every command produces a RunReport printed as JSON
// on stdout; the process exit code is 0 on success, 1 on a domain failure
// (invalid or incompatible model, not extendable, not a Bell inequality),
// 2 on usage or parse errors and 3 when a solver fails.

#include <iosfwd>
#include <string>
#include <vector>

#include "cfrac/json_io.hpp"

namespace cfrac::cli {

enum ExitCode : int { kSuccess = 0, kDomainFailure = 1, kUsageError = 2, kSolverFailure = 3 };

/// command, inputs (path and content hash), config, results, exit code and
/// wall time, in that order.
struct RunReport {
  std::string command;
  Json inputs = Json::array();
  Json config = Json::object();
  Json results = Json::object();
  int exit_code = kSuccess;
  double wall_seconds = 0.0;

  void add_input(const std::string& path);
  Json to_json() const;
};

/// 64-bit FNV-1a of the file contents, as 16 hex digits.
std::string file_hash(const std::string& path);

/// Runs one command line (args excludes the program name). The report goes
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfrac::cli
