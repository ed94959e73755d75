#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "confbvp/cli/config.hpp"
#include "json.hpp"

namespace confbvp::cli {

inline constexpr const char* kToolName = "confbvp";
inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;

struct RunResult {
  int status = kExitOk;
  nlohmann::ordered_json report;
  std::vector<std::filesystem::path> files;
  /// Diagnostic for status 2 and 3.
  std::string message;
};

/// Validates, executes and writes artifacts into config.out_dir. Never throws
/// for bad input or numerical failure; those map to status 2 and 3.
RunResult run(const RunConfig& config);

/// Command-line entry: parses flags (and --config), runs, reports.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace confbvp::cli
