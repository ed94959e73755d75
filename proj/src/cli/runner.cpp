#include "confbvp/cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "confbvp/cli/expression.hpp"
#include "confbvp/cli/output.hpp"
#include "confbvp/linear.hpp"
#include "confbvp/nonlinear.hpp"
#include "confbvp/spectral.hpp"

namespace confbvp::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Artifacts {
  const RunConfig& config;
  fs::path dir;
  std::vector<fs::path> files;

  bool csv() const { return config.format != Format::json; }

  void table(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<double>>& rows) {
    if (!csv()) return;
    write_csv(dir / name, header, rows);
    files.push_back(dir / name);
  }

  void table(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<std::string>>& rows) {
    if (!csv()) return;
    write_csv(dir / name, header, rows);
    files.push_back(dir / name);
  }

  void plot(const std::string& name, const std::vector<PlotBlock>& blocks) {
    if (!config.plot) return;
    write_plot_data(dir / name, blocks);
    files.push_back(dir / name);
  }
};

std::vector<std::vector<double>> grid_rows(const GridFunction& u) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < u.size(); ++i) rows.push_back({u.nodes()[i], u.values()[i]});
  return rows;
}

PlotBlock grid_block(const std::string& name, const GridFunction& u) {
  return {name, {u.nodes().begin(), u.nodes().end()}, {u.values().begin(), u.values().end()}};
}

ordered_json sample_json(const linear::KernelSample& s) {
  return {{"t", s.t}, {"s", s.s}, {"value", s.value}};
}

// Each command fills `results` and writes its tables; the return value is the
// exit status.
int run_solve_linear(const RunConfig& c, Artifacts& out, ordered_json& results) {
  const linear::LinearProblem problem{Interval(c.a, c.b), Order(c.alpha),
                                      parse_expression(c.y, Arity::t_only).scalar()};
  const auto u = linear::solve_linear(problem, c.n_grid, c.rule_size);
  results["u_sup_norm"] = u.sup_norm();
  results["u_midpoint"] = u(0.5 * (c.a + c.b));
  results["residual_sup"] = linear::residual_linear(u, problem).sup_norm();
  out.table("solution.csv", {"t", "u"}, grid_rows(u));
  out.plot("solution.dat", {grid_block("u", u)});
  return kExitOk;
}

int run_solve_nonlinear(const RunConfig& c, Artifacts& out, ordered_json& results) {
  const Interval interval(c.a, c.b);
  const nonlinear::NonlinearProblem problem{interval, Order(c.alpha),
                                            parse_expression(c.f, Arity::t_and_x).bivariate()};
  const auto lower = parse_expression(c.lower, Arity::t_only).scalar();
  const auto upper = parse_expression(c.upper, Arity::t_only).scalar();
  const auto bracket =
      nonlinear::make_bracket(interval, nonlinear::BoundFunction(lower), nonlinear::BoundFunction(upper));

  nonlinear::SolveConfig sc;
  sc.max_iter = c.max_iter;
  sc.tol = c.tol;
  sc.damping = c.damping;
  sc.method = nonlinear::method_from_string(c.method);
  sc.n_grid = c.n_grid;
  sc.rule_size = c.rule_size;
  const auto r = nonlinear::solve_nonlinear(problem, bracket, sc);

  results["converged"] = r.converged;
  results["iterations"] = r.iterations;
  results["method"] = nonlinear::to_string(r.method);
  results["final_update_norm"] = r.final_update_norm;
  results["residual_norm"] = r.residual_norm;
  results["fixed_point_residual"] = r.fixed_point_residual;
  results["localized"] = r.localized;
  results["max_abs_rhs"] = r.max_abs_rhs;
  results["M0"] = r.M0;
  results["M"] = r.M;
  results["update_history"] = r.update_history;

  out.table("solution.csv", {"t", "u"}, grid_rows(r.solution));
  const auto nodes = r.solution.nodes();
  std::vector<double> lo, hi;
  for (double t : nodes) {
    lo.push_back(bracket.lower(t));
    hi.push_back(bracket.upper(t));
  }
  const std::vector<double> ts(nodes.begin(), nodes.end());
  out.plot("solution.dat", {grid_block("u", r.solution), {"lower", ts, lo}, {"upper", ts, hi}});
  return r.converged ? kExitOk : kExitNonConvergence;
}

int run_eigen(const RunConfig& c, Artifacts& out, ordered_json& results) {
  const Interval interval(c.a, c.b);
  const Order order(c.alpha);
  const auto eig = spectral::principal_eigenvalue(interval, order, c.n);
  results["lambda1"] = eig.lambda1;
  results["estimated_error"] = eig.estimated_error;
  results["validation_gap"] = eig.validation_gap;
  results["discretization_size"] = eig.discretization_size;
  results["power_iterations"] = eig.power_iterations;
  results["sharpness_ratio"] = eig.lambda1 * weight_integral(interval, order) / (4.0 / interval.length());
  out.table("eigenfunction.csv", {"t", "u"}, grid_rows(eig.eigenfunction));
  out.plot("eigenfunction.dat", {grid_block("eigenfunction", eig.eigenfunction)});
  return kExitOk;
}

int run_lyapunov(const RunConfig& c, Artifacts& out, ordered_json& results) {
  const auto r = spectral::lyapunov_check(parse_expression(c.q, Arity::t_only).scalar(), Interval(c.a, c.b),
                                          Order(c.alpha), c.rule_size);
  results["integral"] = r.weighted_q_integral;
  results["bound"] = r.bound;
  results["margin"] = r.margin;
  results["certified"] = r.certified;
  out.table("lyapunov.csv", {"alpha", "a", "b", "integral", "bound", "margin", "certified"},
            std::vector<std::vector<std::string>>{{format_number(r.alpha), format_number(c.a), format_number(c.b),
                                                   format_number(r.weighted_q_integral), format_number(r.bound),
                                                   format_number(r.margin), r.certified ? "true" : "false"}});
  return kExitOk;
}

int run_greens(const RunConfig& c, Artifacts& out, ordered_json& results) {
  const Interval interval(c.a, c.b);
  const linear::GreenKernel kernel(interval);
  const auto bounds = linear::check_green_bounds(kernel, std::max(c.n_grid, 10));
  results["bounds_pass"] = bounds.pass;
  results["max"] = sample_json(bounds.max);
  results["min"] = sample_json(bounds.min);
  results["upper_bound"] = interval.length();
  if (bounds.witness) results["witness"] = sample_json(*bounds.witness);

  const auto nodes = make_nodes(interval, c.n_grid);
  std::vector<std::vector<double>> rows;
  std::vector<PlotBlock> blocks;
  for (double t : nodes) {
    PlotBlock block{"t=" + format_number(t), {}, {}};
    for (double s : nodes) {
      const double g = kernel.eval(t, s);
      rows.push_back({t, s, g});
      block.x.push_back(s);
      block.y.push_back(g);
    }
    blocks.push_back(std::move(block));
  }
  out.table("greens.csv", {"t", "s", "G"}, rows);
  out.plot("greens.dat", blocks);
  return bounds.pass ? kExitOk : kExitNonConvergence;
}

// Self-convergence: the error at size n is the distance to the size-2n result.
int run_convergence(const RunConfig& c, Artifacts& out, ordered_json& results) {
  const Interval interval(c.a, c.b);
  const Order order(c.alpha);
  std::vector<std::vector<double>> rows;
  if (c.study == "linear") {
    const linear::LinearProblem problem{interval, order, parse_expression(c.y, Arity::t_only).scalar()};
    for (int n : c.sizes) {
      const auto coarse = linear::solve_linear(problem, c.n_grid, n);
      const auto fine = linear::solve_linear(problem, c.n_grid, 2 * n);
      rows.push_back({static_cast<double>(n), max_abs_difference(coarse, fine)});
    }
  } else {
    for (int n : c.sizes) {
      rows.push_back({static_cast<double>(n), spectral::principal_eigenvalue(interval, order, n).estimated_error});
    }
  }
  ordered_json table = ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ordered_json row{{"n", static_cast<int>(rows[i][0])}, {"error", rows[i][1]}};
    if (i + 1 < rows.size() && rows[i][1] > 0.0 && rows[i + 1][1] > 0.0) {
      row["observed_order"] = std::log(rows[i][1] / rows[i + 1][1]) / std::log(rows[i + 1][0] / rows[i][0]);
    }
    table.push_back(std::move(row));
  }
  results["study"] = c.study;
  results["rows"] = std::move(table);
  out.table("convergence.csv", {"n", "error"}, rows);
  PlotBlock block{"error", {}, {}};
  for (const auto& r : rows) {
    block.x.push_back(r[0]);
    block.y.push_back(r[1]);
  }
  out.plot("convergence.dat", {block});
  return kExitOk;
}

}  // namespace

RunResult run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.report["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  result.report["config"] = to_json(config);

  try {
    validate(config);
  } catch (const DomainError& e) {
    result.status = kExitValidation;
    result.message = e.what();
    result.report["status"] = "validation-error";
    result.report["error"] = result.message;
    return result;
  }

  Artifacts artifacts{config, fs::path(config.out_dir), {}};
  std::error_code ec;
  fs::create_directories(artifacts.dir, ec);
  if (ec || !fs::is_directory(artifacts.dir)) {
    result.status = kExitValidation;
    result.message = ConfigError("out-dir", "cannot create '" + config.out_dir + "'").what();
    result.report["status"] = "validation-error";
    result.report["error"] = result.message;
    return result;
  }

  ordered_json results = ordered_json::object();
  try {
    switch (config.command) {
      case Command::solve_linear: result.status = run_solve_linear(config, artifacts, results); break;
      case Command::solve_nonlinear: result.status = run_solve_nonlinear(config, artifacts, results); break;
      case Command::eigen: result.status = run_eigen(config, artifacts, results); break;
      case Command::lyapunov: result.status = run_lyapunov(config, artifacts, results); break;
      case Command::greens: result.status = run_greens(config, artifacts, results); break;
      case Command::convergence: result.status = run_convergence(config, artifacts, results); break;
    }
    if (result.status == kExitNonConvergence) result.message = "numerical check did not converge";
  } catch (const ConvergenceError& e) {
    result.status = kExitNonConvergence;
    result.message = e.what();
  } catch (const DomainError& e) {
    result.status = kExitValidation;
    result.message = e.what();
  } catch (const EvaluationError& e) {
    result.status = kExitValidation;
    result.message = e.what();
  }

  result.report["status"] = result.status == kExitOk               ? "ok"
                            : result.status == kExitNonConvergence ? "non-convergence"
                                                                   : "validation-error";
  if (!result.message.empty()) result.report["error"] = result.message;
  result.report["results"] = std::move(results);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  result.report["timings"] = {{"total_seconds", elapsed.count()}};

  if (config.format != Format::csv && result.status != kExitValidation) {
    write_json(artifacts.dir / "report.json", result.report);
    artifacts.files.push_back(artifacts.dir / "report.json");
  }
  result.files = std::move(artifacts.files);
  return result;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirichlet problems for conformable derivatives of order 1 < alpha < 2", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  struct Flags {
    CLI::App* sub = nullptr;
    std::string config_path;
    std::map<std::string, std::string> values;
    bool plot = false;
  };
  const std::vector<std::pair<std::string, std::string>> keys = {
      {"a", "left end"},
      {"b", "right end"},
      {"alpha", "order in (1, 2)"},
      {"y", "linear forcing y(t)"},
      {"f", "right-hand side f(t, x)"},
      {"q", "Lyapunov potential q(t)"},
      {"lower", "lower solution"},
      {"upper", "upper solution"},
      {"n-grid", "output grid size"},
      {"rule-size", "quadrature points per piece"},
      {"n", "eigenvalue discretization size"},
      {"tol", "iteration tolerance"},
      {"max-iter", "iteration cap"},
      {"damping", "Picard damping in (0, 1]"},
      {"method", "picard, damped_picard or newton_collocation"},
      {"study", "convergence study: linear or eigen"},
      {"sizes", "comma-separated sizes for a convergence study"},
      {"out-dir", "output directory"},
      {"format", "csv, json or both"},
  };
  std::vector<Command> commands = {Command::solve_linear, Command::solve_nonlinear, Command::eigen,
                                   Command::lyapunov,     Command::greens,          Command::convergence};
  std::vector<Flags> flags(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i) {
    auto& fl = flags[i];
    fl.sub = app.add_subcommand(to_string(commands[i]));
    fl.sub->add_option("--config", fl.config_path, "INI file; flags override its values");
    for (const auto& [key, help] : keys) fl.sub->add_option("--" + key, fl.values[key], help);
    fl.sub->add_flag("--plot", fl.plot, "also write plot-data files");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    const auto& fl = flags[i];
    if (!fl.sub->parsed()) continue;
    RunConfig config;
    try {
      if (!fl.config_path.empty()) {
        config = load_ini(fl.config_path, commands[i]);
      } else {
        config.command = commands[i];
      }
      for (const auto& [key, help] : keys) {
        if (fl.sub->get_option("--" + key)->count() > 0) set_field(config, key, fl.values.at(key));
      }
      if (fl.plot) config.plot = true;
    } catch (const DomainError& e) {
      err << "error: " << e.what() << '\n';
      return kExitValidation;
    }

    const auto result = run(config);
    if (result.status != kExitOk) err << "error: " << result.message << '\n';
    if (result.report.contains("results")) out << result.report["results"].dump(2) << '\n';
    for (const auto& f : result.files) out << "wrote " << f.string() << '\n';
    return result.status;
  }
  return kExitValidation;
}

}  // namespace confbvp::cli
