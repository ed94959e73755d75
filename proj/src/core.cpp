#include "confbvp/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace confbvp {

Order::Order(double alpha) : alpha_(alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    std::ostringstream msg;
    msg << "order alpha must lie strictly inside (1, 2), got " << alpha;
    throw DomainError(msg.str());
  }
}

Interval::Interval(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    std::ostringstream msg;
    msg << "interval needs finite a < b, got [" << a << ", " << b << "]";
    throw DomainError(msg.str());
  }
}

std::vector<double> make_nodes(const Interval& interval, int n, GridKind kind) {
  if (n < 2) throw DomainError("a grid needs at least two nodes");
  std::vector<double> nodes(static_cast<std::size_t>(n));
  const double a = interval.a();
  const double len = interval.length();
  for (int i = 0; i < n; ++i) {
    const double r = static_cast<double>(i) / (n - 1);
    const double x = kind == GridKind::uniform
                         ? r
                         : 0.5 * (1.0 - std::cos(std::numbers::pi * r));
    nodes[static_cast<std::size_t>(i)] = a + len * x;
  }
  nodes.front() = interval.a();
  nodes.back() = interval.b();
  return nodes;
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

// Three-point endpoint slope with the shape-preserving corrections.
double edge_slope(double h0, double h1, double d0, double d1) {
  double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (sign(s) != sign(d0)) {
    s = 0.0;
  } else if (sign(d0) != sign(d1) && std::abs(s) > 3.0 * std::abs(d0)) {
    s = 3.0 * d0;
  }
  return s;
}

}  // namespace

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() != values_.size()) {
    throw DomainError("grid function needs as many values as nodes");
  }
  if (nodes_.size() < 3) throw DomainError("grid function needs at least three nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i]) || !std::isfinite(values_[i])) {
      throw EvaluationError("grid function holds a non-finite entry", nodes_[i]);
    }
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
      throw DomainError("grid nodes must be strictly increasing");
    }
  }

  const std::size_t n = nodes_.size();
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = nodes_[k + 1] - nodes_[k];
    delta[k] = (values_[k + 1] - values_[k]) / h[k];
  }
  slopes_.assign(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slopes_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  slopes_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
  slopes_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

GridFunction GridFunction::sample(std::vector<double> nodes, const ScalarFn& fn) {
  std::vector<double> values(nodes.size());
  std::transform(nodes.begin(), nodes.end(), values.begin(), fn);
  return {std::move(nodes), std::move(values)};
}

double GridFunction::operator()(double t) const {
  if (!(t >= nodes_.front() && t <= nodes_.back())) {
    std::ostringstream msg;
    msg << "evaluation point " << t << " outside grid [" << nodes_.front() << ", "
        << nodes_.back() << "]";
    throw DomainError(msg.str());
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t k = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  if (k >= nodes_.size() - 1) k = nodes_.size() - 2;

  const double h = nodes_[k + 1] - nodes_[k];
  const double r = (t - nodes_[k]) / h;
  const double r2 = r * r;
  const double r3 = r2 * r;
  const double h00 = 2.0 * r3 - 3.0 * r2 + 1.0;
  const double h10 = r3 - 2.0 * r2 + r;
  const double h01 = -2.0 * r3 + 3.0 * r2;
  const double h11 = r3 - r2;
  return h00 * values_[k] + h10 * h * slopes_[k] + h01 * values_[k + 1] +
         h11 * h * slopes_[k + 1];
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_difference(const GridFunction& f, const GridFunction& g) {
  if (f.size() != g.size()) throw DomainError("grid functions live on different grids");
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.nodes()[i] != g.nodes()[i]) throw DomainError("grid functions live on different grids");
    m = std::max(m, std::abs(f.values()[i] - g.values()[i]));
  }
  return m;
}

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one point");
  GaussLegendre rule;
  const auto size = static_cast<std::size_t>(n);
  rule.nodes.assign(size, 0.0);
  rule.weights.assign(size, 0.0);
  if (n == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = size - 1 - lo;
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[size / 2] = 0.0;
  return rule;
}

double WeightedQuadrature::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double weight_integral(const Interval& interval, const Order& order) {
  return std::pow(interval.length(), order.beta()) / order.beta();
}

int grading_power(const Order& order) {
  return std::clamp(static_cast<int>(std::ceil(3.0 * order.beta())), 1, 3);
}

WeightedQuadrature build_weighted_quadrature(const Interval& interval, const Order& order,
                                             int n_points) {
  if (n_points < 2) throw DomainError("weighted quadrature needs n_points >= 2");
  return build_weighted_quadrature(interval.a(), interval.a(), interval.b(), order,
                                   gauss_legendre(n_points));
}

WeightedQuadrature build_weighted_quadrature(double origin, double lo, double hi,
                                             const Order& order, const GaussLegendre& reference) {
  if (!(lo >= origin) || !(hi > lo) || !std::isfinite(hi)) {
    throw DomainError("quadrature piece must satisfy origin <= lo < hi");
  }
  const double beta = order.beta();
  const int n = static_cast<int>(reference.nodes.size());

  WeightedQuadrature rule;
  rule.origin = origin;
  rule.lo = lo;
  rule.hi = hi;
  rule.weight_exponent = order.weight_exponent();
  rule.nodes.resize(reference.nodes.size());
  rule.weights.resize(reference.nodes.size());
  const double above = std::nextafter(lo, hi);

  if (lo == origin) {
    // s = lo + L x^(m/beta): the weight becomes (m/beta) L^beta x^(m-1).
    const int m = grading_power(order);
    const double len = hi - lo;
    const double power = m / beta;
    const double scale = m / beta * std::pow(len, beta);
    for (std::size_t i = 0; i < reference.nodes.size(); ++i) {
      const double x = 0.5 * (reference.nodes[i] + 1.0);
      const double wx = 0.5 * reference.weights[i];
      rule.nodes[i] = std::clamp(lo + len * std::pow(x, power), above, hi);
      rule.weights[i] = wx * scale * std::pow(x, m - 1);
    }
    rule.declared_degree = 2 * n - m;
  } else {
    // v = (s - origin)^beta turns the weight into the constant 1/beta.
    const double v_lo = std::pow(lo - origin, beta);
    const double v_hi = std::pow(hi - origin, beta);
    const double half = 0.5 * (v_hi - v_lo);
    for (std::size_t i = 0; i < reference.nodes.size(); ++i) {
      const double v = v_lo + half * (reference.nodes[i] + 1.0);
      rule.nodes[i] = std::clamp(origin + std::pow(v, 1.0 / beta), above, hi);
      rule.weights[i] = half * reference.weights[i] / beta;
    }
    rule.declared_degree = 2 * n - 1;
  }
  return rule;
}

double weighted_integral(const WeightedQuadrature& rule, const ScalarFn& phi) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double value = phi(rule.nodes[i]);
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "integrand is not finite at node s = " << rule.nodes[i];
      throw EvaluationError(msg.str(), rule.nodes[i]);
    }
    sum += rule.weights[i] * value;
  }
  return sum;
}

}  // namespace confbvp
