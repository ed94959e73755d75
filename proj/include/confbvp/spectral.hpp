#pragma once

// Lyapunov-type necessary condition for T_alpha u + q u = 0 with Dirichlet
// conditions to have a nontrivial solution:
//   \int_a^b |q(s)| (s-a)^(alpha-2) ds >= 4 / (b-a),
// together with a principal-eigenvalue solver for constant q = lambda.

#include "confbvp/core.hpp"

namespace confbvp::spectral {

inline constexpr double kCertifyTol = 1e-10;

struct LyapunovReport {
  double weighted_q_integral = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool certified = false;
  double alpha = 0.0;
  Interval interval{0.0, 1.0};
};

double weighted_q_norm(const ScalarFn& q, const Interval& interval, const Order& order,
                       int rule_size = 64);

/// certified == false proves the problem with this q has only the trivial
/// solution.
LyapunovReport lyapunov_check(const ScalarFn& q, const Interval& interval, const Order& order,
                              int rule_size = 64);

struct EigenResult {
  double lambda1 = 0.0;
  /// Interior-positive, sup-normalized; zero at both ends.
  GridFunction eigenfunction;
  int discretization_size = 0;
  /// |lambda1(n) - lambda1(2n)|.
  double estimated_error = 0.0;
  /// Relative gap between power iteration and the symmetrized dense solve.
  double validation_gap = 0.0;
  int power_iterations = 0;
};

/// Smallest positive lambda with a nontrivial solution of
/// T_alpha u + lambda u = 0, u(a) = u(b) = 0, from the Nystrom discretization
/// of u = lambda \int G(t,s) rho(s) u(s) ds on the weighted quadrature nodes.
EigenResult principal_eigenvalue(const Interval& interval, const Order& order, int n);

/// Largest eigenvalue of the n x n Nystrom matrix K_ij = G(s_i, s_j) w_j by
/// power iteration, with its eigenvector on the nodes.
struct NystromMode {
  double mu = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> vector;
  int iterations = 0;
  double symmetric_mu = 0.0;
};

NystromMode dominant_nystrom_mode(const Interval& interval, const Order& order, int n,
                                  bool validate = true);

/// lambda1 * \int rho / (4/(b-a)); at least 1 by the Lyapunov inequality.
double sharpness_probe(const Interval& interval, const Order& order, int n);

/// Classical Borg quotient \int_a^b |u''| / u dt divided by 4/(b-a), for u > 0
/// inside (a,b). The integral is truncated symmetrically by a fraction delta of
/// the interval for delta = 1e-2, 1e-3, ..., 1e-6; a convergent sequence is
/// extrapolated, a divergent one reported as +infinity.
struct BorgInput {
  ScalarFn u;
  ScalarFn u2;
};

double borg_ratio(const BorgInput& input, const Interval& interval);
/// Grid form: u'' by second differences of the grid values.
double borg_ratio(const GridFunction& u);

}  // namespace confbvp::spectral
