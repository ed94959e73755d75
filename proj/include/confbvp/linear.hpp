#pragma once

// Green's function solver for T_alpha u + y = 0, u(a) = u(b) = 0:
//   u(t) = \int_a^b G(t,s) y(s) (s-a)^(alpha-2) ds.

#include <optional>
#include <span>
#include <vector>

#include "confbvp/core.hpp"

namespace confbvp::linear {

class GreenKernel {
 public:
  explicit GreenKernel(Interval interval) : interval_(interval) {}

  const Interval& interval() const noexcept { return interval_; }

  /// G(t,s) = (s-a)(b-t)/(b-a) for s <= t and (t-a)(b-s)/(b-a) for t < s.
  /// Arguments outside [a,b] are a DomainError.
  double eval(double t, double s) const;

 private:
  Interval interval_;
};

struct LinearProblem {
  Interval interval;
  Order order;
  ScalarFn forcing;
};

/// Precomputed quadrature for u(t_i) = \int G(t_i,s) phi(s) rho(s) ds at a
/// fixed set of targets. Each target splits the integral at s = t_i, where
/// G(t_i, .) has a kink; the left piece carries the weight singularity.
class GreenIntegrator {
 public:
  GreenIntegrator(const Interval& interval, const Order& order, std::span<const double> targets,
                  int rule_size);

  std::size_t size() const noexcept { return rows_.size(); }

  /// One integral per target; targets at a or b yield exactly 0.
  std::vector<double> apply(const ScalarFn& phi) const;

 private:
  struct Row {
    std::vector<double> nodes;
    std::vector<double> coeffs;  // G(t_i, s_j) * w_j
  };
  std::vector<Row> rows_;
};

GridFunction solve_linear(const LinearProblem& problem, int n_grid, int rule_size,
                          GridKind kind = GridKind::uniform);

struct KernelSample {
  double t = 0.0;
  double s = 0.0;
  double value = 0.0;
};

struct GreenBoundsReport {
  bool pass = true;
  KernelSample max;
  KernelSample min;
  /// First sample outside [-1e-12, (b-a) + 1e-12], when any.
  std::optional<KernelSample> witness;
};

/// Samples an n x n tensor grid of [a,b]^2 plus the diagonal s = t.
GreenBoundsReport check_green_bounds(const GreenKernel& kernel, int n_samples);

/// Residual (t-a)^(2-alpha) u''(t) + y(t) at interior nodes, u'' by second
/// differences. Nodes within the left buffer t < a + 0.05 (b-a) are skipped.
struct ResidualProfile {
  std::vector<double> nodes;
  std::vector<double> values;
  double sup_norm() const;
};

inline constexpr double kResidualBuffer = 0.05;

ResidualProfile residual_linear(const GridFunction& u, const LinearProblem& problem);

/// Same residual with an arbitrary right-hand side y(t, u(t)).
ResidualProfile residual(const GridFunction& u, const Order& order, const BivariateFn& rhs);

}  // namespace confbvp::linear
