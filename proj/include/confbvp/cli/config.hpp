#pragma once

#include <string>
#include <vector>

#include "confbvp/errors.hpp"
#include "json.hpp"

namespace confbvp::cli {

enum class Command { solve_linear, solve_nonlinear, eigen, lyapunov, greens, convergence };
enum class Format { csv, json, both };

const char* to_string(Command c);
const char* to_string(Format f);
Command command_from_string(const std::string& name);
Format format_from_string(const std::string& name);

/// Validation failure tied to a config field; line is 0 when not known.
class ConfigError : public DomainError {
 public:
  ConfigError(const std::string& field, const std::string& message, int line = 0);
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

struct RunConfig {
  Command command = Command::eigen;
  double a = 0.0;
  double b = 1.0;
  double alpha = 1.5;
  // Function specs, see expression.hpp. y is the linear forcing, f the
  // nonlinear right-hand side f(t, x), q the Lyapunov potential.
  std::string y = "const:1";
  std::string f;
  std::string q = "const:1";
  std::string lower;
  std::string upper;
  int n_grid = 101;
  int rule_size = 64;
  int n = 128;
  double tol = 1e-8;
  int max_iter = 500;
  double damping = 0.5;
  std::string method = "damped_picard";
  /// Convergence studies: "linear" refines rule_size, "eigen" refines n.
  std::string study = "linear";
  std::vector<int> sizes = {8, 16, 32, 64};
  std::string out_dir = ".";
  Format format = Format::both;
  bool plot = false;

  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError naming the first offending field.
void validate(const RunConfig& config);

/// Reads an INI file. Keys before any section apply to every command; the
/// section named after `command` overrides them. Keys are the long flag names
/// (n-grid, rule-size, out-dir, ...).
RunConfig load_ini(const std::string& path, Command command);

/// Applies one key = value pair; used by both the INI reader and the tests.
void set_field(RunConfig& config, const std::string& key, const std::string& value, int line = 0);

nlohmann::ordered_json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

}  // namespace confbvp::cli
