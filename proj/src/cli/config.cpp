#include "confbvp/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "confbvp/cli/expression.hpp"
#include "confbvp/nonlinear.hpp"

namespace confbvp::cli {

namespace {

std::string where(const std::string& field, int line) {
  std::string out = "config field '" + field + "'";
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  return out;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value, int line) {
  const std::string v = trim(value);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(key, "expected a number, got '" + value + "'", line);
  }
  return out;
}

int to_int(const std::string& key, const std::string& value, int line) {
  const std::string v = trim(value);
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(key, "expected an integer, got '" + value + "'", line);
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value, int line) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + value + "'", line);
}

std::vector<int> to_sizes(const std::string& key, const std::string& value, int line) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto end = comma == std::string::npos ? value.size() : comma;
    out.push_back(to_int(key, value.substr(start, end - start), line));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void check_spec(const std::string& field, const std::string& spec, Arity arity) {
  try {
    parse_expression(spec, arity);
  } catch (const ParseError& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace

ConfigError::ConfigError(const std::string& field, const std::string& message, int line)
    : DomainError(where(field, line) + ": " + message), field_(field), line_(line) {}

const char* to_string(Command c) {
  switch (c) {
    case Command::solve_linear: return "solve-linear";
    case Command::solve_nonlinear: return "solve-nonlinear";
    case Command::eigen: return "eigen";
    case Command::lyapunov: return "lyapunov";
    case Command::greens: return "greens";
    case Command::convergence: return "convergence";
  }
  return "unknown";
}

const char* to_string(Format f) {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::both: return "both";
  }
  return "unknown";
}

Command command_from_string(const std::string& name) {
  for (Command c : {Command::solve_linear, Command::solve_nonlinear, Command::eigen, Command::lyapunov,
                    Command::greens, Command::convergence}) {
    if (name == to_string(c)) return c;
  }
  throw ConfigError("command", "unknown command '" + name + "'");
}

Format format_from_string(const std::string& name) {
  for (Format f : {Format::csv, Format::json, Format::both}) {
    if (name == to_string(f)) return f;
  }
  throw ConfigError("format", "expected csv, json or both, got '" + name + "'");
}

void set_field(RunConfig& c, const std::string& key, const std::string& value, int line) {
  if (key == "a") c.a = to_double(key, value, line);
  else if (key == "b") c.b = to_double(key, value, line);
  else if (key == "alpha") c.alpha = to_double(key, value, line);
  else if (key == "y") c.y = trim(value);
  else if (key == "f") c.f = trim(value);
  else if (key == "q") c.q = trim(value);
  else if (key == "lower") c.lower = trim(value);
  else if (key == "upper") c.upper = trim(value);
  else if (key == "n-grid") c.n_grid = to_int(key, value, line);
  else if (key == "rule-size") c.rule_size = to_int(key, value, line);
  else if (key == "n") c.n = to_int(key, value, line);
  else if (key == "tol") c.tol = to_double(key, value, line);
  else if (key == "max-iter") c.max_iter = to_int(key, value, line);
  else if (key == "damping") c.damping = to_double(key, value, line);
  else if (key == "method") c.method = trim(value);
  else if (key == "study") c.study = trim(value);
  else if (key == "sizes") c.sizes = to_sizes(key, value, line);
  else if (key == "out-dir") c.out_dir = trim(value);
  else if (key == "format") {
    try {
      c.format = format_from_string(trim(value));
    } catch (const ConfigError& e) {
      throw ConfigError(key, "expected csv, json or both, got '" + trim(value) + "'", line);
    }
  } else if (key == "plot") c.plot = to_bool(key, value, line);
  else throw ConfigError(key, "unknown key", line);
}

void validate(const RunConfig& c) {
  if (!std::isfinite(c.a) || !std::isfinite(c.b) || !(c.a < c.b)) {
    throw ConfigError("b", "interval needs finite a < b");
  }
  if (!(c.alpha > 1.0 && c.alpha < 2.0)) throw ConfigError("alpha", "alpha must lie in (1, 2)");
  if (c.n_grid < 5) throw ConfigError("n-grid", "n-grid must be at least 5");
  if (c.rule_size < 2) throw ConfigError("rule-size", "rule-size must be at least 2");
  if (c.n < 8) throw ConfigError("n", "n must be at least 8");
  if (!(c.tol > 0.0)) throw ConfigError("tol", "tol must be positive");
  if (c.max_iter < 1) throw ConfigError("max-iter", "max-iter must be positive");
  if (!(c.damping > 0.0 && c.damping <= 1.0)) throw ConfigError("damping", "damping must lie in (0, 1]");
  try {
    nonlinear::method_from_string(c.method);
  } catch (const DomainError& e) {
    throw ConfigError("method", e.what());
  }
  if (c.out_dir.empty()) throw ConfigError("out-dir", "output directory must not be empty");

  switch (c.command) {
    case Command::solve_linear: check_spec("y", c.y, Arity::t_only); break;
    case Command::solve_nonlinear:
      if (c.f.empty()) throw ConfigError("f", "solve-nonlinear needs f");
      if (c.lower.empty()) throw ConfigError("lower", "solve-nonlinear needs a lower solution");
      if (c.upper.empty()) throw ConfigError("upper", "solve-nonlinear needs an upper solution");
      check_spec("f", c.f, Arity::t_and_x);
      check_spec("lower", c.lower, Arity::t_only);
      check_spec("upper", c.upper, Arity::t_only);
      break;
    case Command::lyapunov: check_spec("q", c.q, Arity::t_only); break;
    case Command::convergence:
      if (c.study != "linear" && c.study != "eigen") {
        throw ConfigError("study", "expected linear or eigen, got '" + c.study + "'");
      }
      if (c.sizes.empty()) throw ConfigError("sizes", "need at least one size");
      for (int s : c.sizes) {
        if (s < (c.study == "eigen" ? 8 : 2)) throw ConfigError("sizes", "size " + std::to_string(s) + " too small");
      }
      if (c.study == "linear") check_spec("y", c.y, Arity::t_only);
      break;
    case Command::eigen:
    case Command::greens: break;
  }
}

RunConfig load_ini(const std::string& path, Command command) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", e.message() + " in " + path, static_cast<int>(e.line()));
  }

  // property_tree drops line numbers; recover them for diagnostics.
  std::map<std::string, int> lines;
  {
    std::ifstream in(path);
    std::string raw;
    std::string section;
    for (int line = 1; std::getline(in, raw); ++line) {
      const std::string s = trim(raw);
      if (s.empty() || s[0] == ';' || s[0] == '#') continue;
      if (s.front() == '[') {
        section = trim(s.substr(1, s.find(']') - 1));
        continue;
      }
      lines[section + "." + trim(s.substr(0, s.find('=')))] = line;
    }
  }

  RunConfig config;
  config.command = command;
  const std::string name = to_string(command);
  for (const auto& [key, node] : tree) {
    if (node.empty()) set_field(config, key, node.data(), lines["." + key]);
  }
  if (const auto section = tree.get_child_optional(name)) {
    for (const auto& [key, node] : *section) set_field(config, key, node.data(), lines[name + "." + key]);
  }
  return config;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = to_string(c.command);
  j["a"] = c.a;
  j["b"] = c.b;
  j["alpha"] = c.alpha;
  j["y"] = c.y;
  j["f"] = c.f;
  j["q"] = c.q;
  j["lower"] = c.lower;
  j["upper"] = c.upper;
  j["n_grid"] = c.n_grid;
  j["rule_size"] = c.rule_size;
  j["n"] = c.n;
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["damping"] = c.damping;
  j["method"] = c.method;
  j["study"] = c.study;
  j["sizes"] = c.sizes;
  j["out_dir"] = c.out_dir;
  j["format"] = to_string(c.format);
  j["plot"] = c.plot;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    c.command = command_from_string(j.at("command").get<std::string>());
    c.a = j.at("a").get<double>();
    c.b = j.at("b").get<double>();
    c.alpha = j.at("alpha").get<double>();
    c.y = j.at("y").get<std::string>();
    c.f = j.at("f").get<std::string>();
    c.q = j.at("q").get<std::string>();
    c.lower = j.at("lower").get<std::string>();
    c.upper = j.at("upper").get<std::string>();
    c.n_grid = j.at("n_grid").get<int>();
    c.rule_size = j.at("rule_size").get<int>();
    c.n = j.at("n").get<int>();
    c.tol = j.at("tol").get<double>();
    c.max_iter = j.at("max_iter").get<int>();
    c.damping = j.at("damping").get<double>();
    c.method = j.at("method").get<std::string>();
    c.study = j.at("study").get<std::string>();
    c.sizes = j.at("sizes").get<std::vector<int>>();
    c.out_dir = j.at("out_dir").get<std::string>();
    c.format = format_from_string(j.at("format").get<std::string>());
    c.plot = j.at("plot").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", e.what());
  }
  return c;
}

}  // namespace confbvp::cli
