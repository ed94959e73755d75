#pragma once

// Upper/lower solution method for T_alpha u + f(t, u) = 0, u(a) = u(b) = 0.
//
// A bracket (lower <= upper) satisfying the two differential inequalities
// localizes a solution. The solver iterates the Green-function operator
//   (A u)(t) = \int_a^b G(t,s) (s-a)^(alpha-2) F(s, u(s)) ds
// where F is f truncated outside the bracket, continuous and bounded by M0 + 1.

#include <optional>
#include <string>
#include <vector>

#include "confbvp/core.hpp"
#include "confbvp/linear.hpp"

namespace confbvp::nonlinear {

struct NonlinearProblem {
  Interval interval;
  Order order;
  BivariateFn f;
};

/// A lower or upper solution candidate with its second derivative.
class BoundFunction {
 public:
  BoundFunction(ScalarFn value, ScalarFn second_derivative = {});

  static BoundFunction constant(double c);
  /// Interpolated grid; the second derivative comes from nodal second
  /// differences, interpolated the same way.
  static BoundFunction from_grid(const GridFunction& grid);

  double operator()(double t) const { return value_(t); }
  double second_derivative(double t) const;
  bool has_analytic_second() const noexcept { return static_cast<bool>(second_); }

 private:
  ScalarFn value_;
  ScalarFn second_;
};

struct Bracket {
  BoundFunction lower;
  BoundFunction upper;
};

/// Validates lower <= upper on a 10^3-point sample (tolerance 1e-12) and the
/// boundary signs lower(a), lower(b) <= 0 <= upper(a), upper(b).
Bracket make_bracket(const Interval& interval, BoundFunction lower, BoundFunction upper);

struct Witness {
  double t = 0.0;
  double value = 0.0;
};

struct CheckReport {
  bool pass = true;
  std::optional<Witness> witness;
  std::string reason;
};

inline constexpr int kCheckNodes = 200;
inline constexpr double kInequalityTol = 1e-9;

/// T_alpha s(t) + f(t, s(t)) >= 0 at interior check nodes, s(a) <= 0, s(b) <= 0.
CheckReport verify_lower(const BoundFunction& candidate, const NonlinearProblem& problem,
                         int n_check = kCheckNodes);

/// T_alpha s(t) + f(t, s(t)) <= 0 at interior check nodes, s(a) >= 0, s(b) >= 0.
CheckReport verify_upper(const BoundFunction& candidate, const NonlinearProblem& problem,
                         int n_check = kCheckNodes);

/// f truncated outside the bracket:
///   F(t,x) = f(t, up(t)) + (up(t) - x) / (x - up(t) + 1)   for x > up(t),
///   F(t,x) = f(t, x)                                       inside,
///   F(t,x) = f(t, lo(t)) + (lo(t) - x) / (lo(t) - x + 1)   for x < lo(t).
class ModifiedRHS {
 public:
  /// M0 is the sampled sup of |f| over the bracket region (samples x samples
  /// points) inflated by 10%; M = M0 + 1.
  ModifiedRHS(NonlinearProblem problem, Bracket bracket, int samples = 200);

  double operator()(double t, double x) const;

  double M0() const noexcept { return m0_; }
  double M() const noexcept { return m0_ + 1.0; }
  const NonlinearProblem& problem() const noexcept { return problem_; }
  const Bracket& bracket() const noexcept { return bracket_; }

 private:
  NonlinearProblem problem_;
  Bracket bracket_;
  double m0_ = 0.0;
};

ModifiedRHS modify_rhs(const NonlinearProblem& problem, const Bracket& bracket);

/// A on a fixed grid, with the quadrature precomputed once.
class FixedPointOperator {
 public:
  FixedPointOperator(const ModifiedRHS& modified, std::vector<double> nodes, int rule_size);

  struct Image {
    GridFunction value;
    /// Largest |F| met at any quadrature node during this application.
    double max_abs_rhs;
  };

  Image apply(const GridFunction& u) const;
  std::span<const double> nodes() const noexcept { return nodes_; }

 private:
  ModifiedRHS modified_;
  std::vector<double> nodes_;
  linear::GreenIntegrator integrator_;
};

GridFunction apply_A(const GridFunction& u, const ModifiedRHS& modified, int rule_size);

enum class Method { picard, damped_picard, newton_collocation };

const char* to_string(Method m);
Method method_from_string(const std::string& name);

struct SolveConfig {
  int max_iter = 500;
  double tol = 1e-8;
  double damping = 0.5;
  Method method = Method::damped_picard;
  int n_grid = 101;
  int rule_size = 64;
  /// Picard switches to Newton after this many non-decreasing updates.
  int stall_window = 5;
};

struct SolveReport {
  GridFunction solution;
  int iterations = 0;
  double final_update_norm = 0.0;
  double residual_norm = 0.0;
  bool localized = false;
  /// Method in use when the iteration stopped.
  Method method = Method::damped_picard;
  bool converged = false;
  /// sup |A u - u| at the returned iterate.
  double fixed_point_residual = 0.0;
  /// Largest |F| seen over every operator application.
  double max_abs_rhs = 0.0;
  double M0 = 0.0;
  double M = 0.0;
  std::vector<double> update_history = {};
};

inline constexpr double kLocalizationTol = 1e-9;

/// Fixed-point iteration for A from u0 = (lower + upper) / 2. Both bracket
/// inequalities are checked first (DomainError if either fails).
/// Non-convergence is reported through SolveReport::converged = false.
SolveReport solve_nonlinear(const NonlinearProblem& problem, const Bracket& bracket,
                            const SolveConfig& config = {});

}  // namespace confbvp::nonlinear
