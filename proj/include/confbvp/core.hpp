#pragma once

// Shared value types: fractional order, interval, sampled functions and the
// quadrature rule for integrals against the weight (s-a)^(alpha-2).

#include <functional>
#include <span>
#include <vector>

#include "confbvp/errors.hpp"

namespace confbvp {

using ScalarFn = std::function<double(double)>;
using BivariateFn = std::function<double(double, double)>;

/// Fractional order alpha, strictly inside (1, 2).
class Order {
 public:
  explicit Order(double alpha);

  double alpha() const noexcept { return alpha_; }
  /// alpha - 1, in (0, 1).
  double beta() const noexcept { return alpha_ - 1.0; }
  /// alpha - 2, in (-1, 0); exponent of the weight rho(s) = (s-a)^(alpha-2).
  double weight_exponent() const noexcept { return alpha_ - 2.0; }

  friend bool operator==(const Order&, const Order&) = default;

 private:
  double alpha_;
};

/// Finite interval [a, b] with a < b.
class Interval {
 public:
  Interval(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double length() const noexcept { return b_ - a_; }
  bool contains(double t) const noexcept { return t >= a_ && t <= b_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

enum class GridKind { uniform, cosine_clustered };

/// n nodes on [a, b], endpoints included exactly.
std::vector<double> make_nodes(const Interval& interval, int n, GridKind kind = GridKind::uniform);

/// A function sampled on a strictly increasing node set. Evaluation between
/// nodes uses monotone piecewise cubic Hermite interpolation (Fritsch-Carlson
/// slopes), so the interpolant is C^1 and does not overshoot the data.
class GridFunction {
 public:
  GridFunction(std::vector<double> nodes, std::vector<double> values);

  static GridFunction sample(std::vector<double> nodes, const ScalarFn& fn);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  Interval interval() const { return {nodes_.front(), nodes_.back()}; }

  /// Interpolated value; arguments outside [nodes.front(), nodes.back()]
  /// are a DomainError.
  double operator()(double t) const;

  double sup_norm() const;

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// sup_i |f_i - g_i| over two functions sharing the same nodes.
double max_abs_difference(const GridFunction& f, const GridFunction& g);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);

/// Nodes and positive weights approximating
///   \int_lo^hi phi(s) (s - origin)^(alpha-2) ds.
/// For the full interval, origin = a = lo and the endpoint singularity is
/// removed by the substitution s = a + L x^(m/beta); the rule then integrates
/// the weight alone exactly.
struct WeightedQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  /// Polynomial degree integrated exactly in the transformed variable.
  int declared_degree = 0;
  double origin = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double weight_exponent = 0.0;

  double weight_sum() const;
};

/// \int_a^b (s-a)^(alpha-2) ds = (b-a)^(alpha-1) / (alpha-1).
double weight_integral(const Interval& interval, const Order& order);

/// Grading power m of the singular-endpoint substitution for this order.
int grading_power(const Order& order);

WeightedQuadrature build_weighted_quadrature(const Interval& interval, const Order& order,
                                             int n_points);

/// Rule on the piece [lo, hi] of [origin, ...]. When lo == origin the piece
/// carries the singular endpoint and is built as above; otherwise the weight is
/// smooth on the piece and v = (s-origin)^beta with Gauss-Legendre in v is used.
WeightedQuadrature build_weighted_quadrature(double origin, double lo, double hi,
                                             const Order& order, const GaussLegendre& reference);

/// Rule-weighted sum of phi. A non-finite phi value raises EvaluationError
/// naming the node.
double weighted_integral(const WeightedQuadrature& rule, const ScalarFn& phi);

}  // namespace confbvp
