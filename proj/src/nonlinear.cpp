#include "confbvp/nonlinear.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "confbvp/calculus.hpp"

namespace confbvp::nonlinear {

BoundFunction::BoundFunction(ScalarFn value, ScalarFn second_derivative)
    : value_(std::move(value)), second_(std::move(second_derivative)) {
  if (!value_) throw DomainError("bound function needs a value callable");
}

BoundFunction BoundFunction::constant(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }};
}

BoundFunction BoundFunction::from_grid(const GridFunction& grid) {
  const auto t = grid.nodes();
  const auto v = grid.values();
  const std::size_t n = t.size();
  std::vector<double> second(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = t[i] - t[i - 1];
    const double hr = t[i + 1] - t[i];
    second[i] = 2.0 * ((v[i + 1] - v[i]) / hr - (v[i] - v[i - 1]) / hl) / (hl + hr);
  }
  second.front() = second[1];
  second.back() = second[n - 2];
  GridFunction curvature(std::vector<double>(t.begin(), t.end()), std::move(second));
  return {[grid](double s) { return grid(s); },
          [curvature = std::move(curvature)](double s) { return curvature(s); }};
}

double BoundFunction::second_derivative(double t) const {
  if (second_) return second_(t);
  return calculus::SmoothProbe{value_, {}, {}}.second(t);
}

Bracket make_bracket(const Interval& interval, BoundFunction lower, BoundFunction upper) {
  const double a = interval.a();
  const double b = interval.b();
  if (lower(a) > 0.0 || lower(b) > 0.0) throw DomainError("lower solution must be <= 0 at a and b");
  if (upper(a) < 0.0 || upper(b) < 0.0) throw DomainError("upper solution must be >= 0 at a and b");
  for (double t : make_nodes(interval, 1000)) {
    if (lower(t) > upper(t) + 1e-12) {
      std::ostringstream msg;
      msg << "bracket crosses at t = " << t << ": lower " << lower(t) << " > upper " << upper(t);
      throw DomainError(msg.str());
    }
  }
  return {std::move(lower), std::move(upper)};
}

namespace {

enum class Side { lower, upper };

CheckReport verify_side(const BoundFunction& candidate, const NonlinearProblem& problem,
                        int n_check, Side side) {
  if (n_check < 1) throw DomainError("need at least one check node");
  const double a = problem.interval.a();
  const double b = problem.interval.b();
  const double sign = side == Side::lower ? 1.0 : -1.0;

  CheckReport report;
  for (double t : {a, b}) {
    const double v = candidate(t);
    if (sign * v > 0.0) {
      report.pass = false;
      report.witness = Witness{t, v};
      report.reason = side == Side::lower ? "lower solution is positive at an endpoint"
                                          : "upper solution is negative at an endpoint";
      return report;
    }
  }

  const double alpha = problem.order.alpha();
  for (int k = 1; k <= n_check; ++k) {
    const double t = a + problem.interval.length() * k / (n_check + 1);
    const double s = candidate(t);
    const double d2 = candidate.second_derivative(t);
    const double lhs = std::pow(t - a, 2.0 - alpha) * d2 + problem.f(t, s);
    if (!std::isfinite(lhs)) {
      throw EvaluationError("differential inequality is not finite", t);
    }
    if (sign * lhs < -kInequalityTol) {
      report.pass = false;
      report.witness = Witness{t, lhs};
      report.reason = side == Side::lower ? "T_alpha s + f(t, s) < 0 at an interior node"
                                          : "T_alpha s + f(t, s) > 0 at an interior node";
      return report;
    }
  }
  return report;
}

}  // namespace

CheckReport verify_lower(const BoundFunction& candidate, const NonlinearProblem& problem,
                         int n_check) {
  return verify_side(candidate, problem, n_check, Side::lower);
}

CheckReport verify_upper(const BoundFunction& candidate, const NonlinearProblem& problem,
                         int n_check) {
  return verify_side(candidate, problem, n_check, Side::upper);
}

ModifiedRHS::ModifiedRHS(NonlinearProblem problem, Bracket bracket, int samples)
    : problem_(std::move(problem)), bracket_(std::move(bracket)) {
  if (samples < 2) throw DomainError("need at least two samples per direction");
  double sup = 0.0;
  for (double t : make_nodes(problem_.interval, samples)) {
    const double lo = bracket_.lower(t);
    const double hi = bracket_.upper(t);
    if (lo > hi + 1e-12) throw DomainError("bracket crosses; lower > upper");
    for (int j = 0; j < samples; ++j) {
      const double x = lo + (hi - lo) * j / (samples - 1);
      const double v = problem_.f(t, x);
      if (!std::isfinite(v)) throw EvaluationError("f is not finite on the bracket region", t);
      sup = std::max(sup, std::abs(v));
    }
  }
  m0_ = 1.1 * sup;
}

double ModifiedRHS::operator()(double t, double x) const {
  const double hi = bracket_.upper(t);
  if (x > hi) return problem_.f(t, hi) + (hi - x) / (x - hi + 1.0);
  const double lo = bracket_.lower(t);
  if (x < lo) return problem_.f(t, lo) + (lo - x) / (lo - x + 1.0);
  return problem_.f(t, x);
}

ModifiedRHS modify_rhs(const NonlinearProblem& problem, const Bracket& bracket) {
  return ModifiedRHS(problem, bracket);
}

FixedPointOperator::FixedPointOperator(const ModifiedRHS& modified, std::vector<double> nodes,
                                       int rule_size)
    : modified_(modified),
      nodes_(std::move(nodes)),
      integrator_(modified.problem().interval, modified.problem().order, nodes_, rule_size) {}

FixedPointOperator::Image FixedPointOperator::apply(const GridFunction& u) const {
  double max_abs = 0.0;
  auto values = integrator_.apply([&](double s) {
    const double v = modified_(s, u(s));
    max_abs = std::max(max_abs, std::abs(v));
    return v;
  });
  values.front() = 0.0;
  values.back() = 0.0;
  return {GridFunction(nodes_, std::move(values)), max_abs};
}

GridFunction apply_A(const GridFunction& u, const ModifiedRHS& modified, int rule_size) {
  const auto nodes = u.nodes();
  if (!(u.interval() == modified.problem().interval)) {
    throw DomainError("iterate does not span the problem interval");
  }
  const FixedPointOperator op(modified, {nodes.begin(), nodes.end()}, rule_size);
  return op.apply(u).value;
}

const char* to_string(Method m) {
  switch (m) {
    case Method::picard: return "picard";
    case Method::damped_picard: return "damped_picard";
    case Method::newton_collocation: return "newton_collocation";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "picard") return Method::picard;
  if (name == "damped_picard") return Method::damped_picard;
  if (name == "newton_collocation") return Method::newton_collocation;
  throw DomainError("unknown iteration method '" + name + "'");
}

namespace {

double sup_distance(std::span<const double> x, std::span<const double> y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

struct IterationState {
  const FixedPointOperator& op;
  std::vector<double> nodes;
  std::vector<double> u;
  double max_abs_rhs = 0.0;

  GridFunction current() const { return {nodes, u}; }

  std::vector<double> image(const std::vector<double>& values) {
    auto img = op.apply(GridFunction(nodes, values));
    max_abs_rhs = std::max(max_abs_rhs, img.max_abs_rhs);
    const auto v = img.value.values();
    return {v.begin(), v.end()};
  }
};

// One Newton step on u - A u = 0 over the interior nodes, forward-difference
// Jacobian, with backtracking on the sup-norm of the residual. Returns the
// sup-norm of the accepted update.
double newton_step(IterationState& state) {
  const std::size_t n = state.u.size();
  const std::size_t m = n - 2;
  const auto base = state.image(state.u);
  Eigen::VectorXd r(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) r[static_cast<Eigen::Index>(i)] = state.u[i + 1] - base[i + 1];

  Eigen::MatrixXd jac(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  const double eps = std::sqrt(std::numeric_limits<double>::epsilon());
  for (std::size_t j = 0; j < m; ++j) {
    auto shifted = state.u;
    const double h = eps * std::max(1.0, std::abs(shifted[j + 1]));
    shifted[j + 1] += h;
    const auto img = state.image(shifted);
    for (std::size_t i = 0; i < m; ++i) {
      const double ri = shifted[i + 1] - img[i + 1];
      jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (ri - r[static_cast<Eigen::Index>(i)]) / h;
    }
  }
  const Eigen::VectorXd delta = jac.partialPivLu().solve(-r);

  const double r0 = r.cwiseAbs().maxCoeff();
  double step = 1.0;
  for (int attempt = 0; attempt < 12; ++attempt, step *= 0.5) {
    auto trial = state.u;
    for (std::size_t i = 0; i < m; ++i) trial[i + 1] += step * delta[static_cast<Eigen::Index>(i)];
    const auto img = state.image(trial);
    double rt = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) rt = std::max(rt, std::abs(trial[i] - img[i]));
    if (rt < r0 || attempt == 11) {
      const double moved = sup_distance(trial, state.u);
      state.u = std::move(trial);
      return moved;
    }
  }
  return 0.0;
}

}  // namespace

SolveReport solve_nonlinear(const NonlinearProblem& problem, const Bracket& bracket,
                            const SolveConfig& config) {
  if (config.max_iter < 1) throw DomainError("max_iter must be positive");
  if (!(config.tol > 0.0)) throw DomainError("tol must be positive");
  if (!(config.damping > 0.0 && config.damping <= 1.0)) throw DomainError("damping must lie in (0, 1]");
  if (config.n_grid < 5) throw DomainError("n_grid must be at least 5");

  if (auto lo = verify_lower(bracket.lower, problem); !lo.pass) {
    throw DomainError("bracket lower side is not a lower solution: " + lo.reason);
  }
  if (auto up = verify_upper(bracket.upper, problem); !up.pass) {
    throw DomainError("bracket upper side is not an upper solution: " + up.reason);
  }

  const ModifiedRHS modified(problem, bracket);
  auto nodes = make_nodes(problem.interval, config.n_grid);
  const FixedPointOperator op(modified, nodes, config.rule_size);

  IterationState state{op, nodes, std::vector<double>(nodes.size()), 0.0};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    state.u[i] = 0.5 * (bracket.lower(nodes[i]) + bracket.upper(nodes[i]));
  }
  state.u.front() = 0.0;
  state.u.back() = 0.0;

  SolveReport report{.solution = state.current()};
  report.M0 = modified.M0();
  report.M = modified.M();
  Method method = config.method;
  const double theta = method == Method::picard ? 1.0 : config.damping;
  int stalled = 0;

  for (int k = 1; k <= config.max_iter; ++k) {
    double update = 0.0;
    if (method == Method::newton_collocation) {
      update = newton_step(state);
    } else {
      const auto img = state.image(state.u);
      for (std::size_t i = 0; i < state.u.size(); ++i) {
        const double next = (1.0 - theta) * state.u[i] + theta * img[i];
        update = std::max(update, std::abs(next - state.u[i]));
        state.u[i] = next;
      }
      if (!report.update_history.empty() && update >= report.update_history.back()) {
        if (++stalled >= config.stall_window) method = Method::newton_collocation;
      } else {
        stalled = 0;
      }
    }
    report.update_history.push_back(update);
    report.iterations = k;
    report.final_update_norm = update;
    if (!std::isfinite(update)) break;
    if (update < config.tol) {
      report.converged = true;
      break;
    }
  }
  report.method = method;

  report.solution = state.current();
  const auto img = state.image(state.u);
  report.fixed_point_residual = sup_distance(img, state.u);
  report.max_abs_rhs = state.max_abs_rhs;
  report.residual_norm = linear::residual(report.solution, problem.order, problem.f).sup_norm();
  report.localized = true;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double v = state.u[i];
    if (v < bracket.lower(nodes[i]) - kLocalizationTol || v > bracket.upper(nodes[i]) + kLocalizationTol) {
      report.localized = false;
      break;
    }
  }
  return report;
}

}  // namespace confbvp::nonlinear
