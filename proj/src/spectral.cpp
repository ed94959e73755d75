#include "confbvp/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "confbvp/linear.hpp"

namespace confbvp::spectral {

double weighted_q_norm(const ScalarFn& q, const Interval& interval, const Order& order,
                       int rule_size) {
  const auto rule = build_weighted_quadrature(interval, order, rule_size);
  return weighted_integral(rule, [&](double s) { return std::abs(q(s)); });
}

LyapunovReport lyapunov_check(const ScalarFn& q, const Interval& interval, const Order& order,
                              int rule_size) {
  LyapunovReport report;
  report.weighted_q_integral = weighted_q_norm(q, interval, order, rule_size);
  report.bound = 4.0 / interval.length();
  report.margin = report.weighted_q_integral - report.bound;
  report.certified = report.margin >= -kCertifyTol;
  report.alpha = order.alpha();
  report.interval = interval;
  return report;
}

NystromMode dominant_nystrom_mode(const Interval& interval, const Order& order, int n,
                                  bool validate) {
  if (n < 8) throw DomainError("principal_eigenvalue needs n >= 8");
  const auto rule = build_weighted_quadrature(interval, order, n);
  const linear::GreenKernel kernel(interval);
  const auto size = static_cast<Eigen::Index>(n);

  Eigen::MatrixXd green(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) {
      green(i, j) = kernel.eval(rule.nodes[static_cast<std::size_t>(i)],
                                rule.nodes[static_cast<std::size_t>(j)]);
    }
  }
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), size);
  const Eigen::MatrixXd k = green * w.asDiagonal();

  NystromMode mode;
  mode.nodes = rule.nodes;
  mode.weights = rule.weights;

  Eigen::VectorXd v = Eigen::VectorXd::Ones(size).normalized();
  double mu = 0.0;
  constexpr int max_steps = 10000;
  constexpr double rel_tol = 1e-12;
  bool settled = false;
  for (int step = 1; step <= max_steps; ++step) {
    Eigen::VectorXd y = k * v;
    const double next = v.dot(y);
    y.normalize();
    const double change = (y - v).lpNorm<Eigen::Infinity>();
    v = std::move(y);
    const bool mu_done = std::abs(next - mu) <= rel_tol * std::abs(next);
    mu = next;
    mode.iterations = step;
    if (mu_done && change <= 1e-10) {
      settled = true;
      break;
    }
  }
  if (!settled) {
    throw ConvergenceError("power iteration did not settle to relative 1e-12 in 10^4 steps");
  }
  mode.mu = mu;
  mode.vector.assign(v.data(), v.data() + size);

  if (validate) {
    // D^(1/2) K D^(-1/2) = D^(1/2) G D^(1/2) is symmetric and similar to K.
    const Eigen::VectorXd sqrt_w = w.cwiseSqrt();
    const Eigen::MatrixXd sym = sqrt_w.asDiagonal() * green * sqrt_w.asDiagonal();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    mode.symmetric_mu = solver.eigenvalues().maxCoeff();
  }
  return mode;
}

EigenResult principal_eigenvalue(const Interval& interval, const Order& order, int n) {
  const auto coarse = dominant_nystrom_mode(interval, order, n, true);
  const auto fine = dominant_nystrom_mode(interval, order, 2 * n, false);

  const double lambda = 1.0 / coarse.mu;
  // Nystrom interpolation, u(t) = lambda \int G(t,s) rho(s) v(s) ds, with the
  // integral split at s = t so the kink of G does not leak into u.
  std::vector<double> knots{interval.a()};
  std::vector<double> knot_values{0.0};
  // Graded nodes clamped against a can coincide in floating point; keep the first.
  for (std::size_t j = 0; j < coarse.nodes.size(); ++j) {
    if (coarse.nodes[j] <= knots.back() || coarse.nodes[j] >= interval.b()) continue;
    knots.push_back(coarse.nodes[j]);
    knot_values.push_back(coarse.vector[j]);
  }
  knots.push_back(interval.b());
  knot_values.push_back(0.0);
  const GridFunction v(std::move(knots), std::move(knot_values));
  auto nodes = make_nodes(interval, n + 1);
  const linear::GreenIntegrator integrator(interval, order, nodes, std::min(8 * n, 2048));
  auto values = integrator.apply([&](double s) { return lambda * v(s); });
  double peak = 0.0;
  for (double v : values) {
    if (std::abs(v) > std::abs(peak)) peak = v;
  }
  if (peak == 0.0) throw ConvergenceError("eigenfunction vanished on the output grid");
  for (double& v : values) v /= peak;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (!(values[i] > 0.0)) {
      throw ConvergenceError("principal eigenfunction changes sign inside the interval");
    }
  }

  EigenResult result{
      .lambda1 = lambda,
      .eigenfunction = GridFunction(std::move(nodes), std::move(values)),
      .discretization_size = n,
      .estimated_error = std::abs(lambda - 1.0 / fine.mu),
      .validation_gap = std::abs(coarse.symmetric_mu - coarse.mu) / coarse.mu,
      .power_iterations = coarse.iterations,
  };
  return result;
}

double sharpness_probe(const Interval& interval, const Order& order, int n) {
  const auto eig = principal_eigenvalue(interval, order, n);
  return eig.lambda1 * weight_integral(interval, order) / (4.0 / interval.length());
}

namespace {

void require_positive_inside(const ScalarFn& u, const Interval& interval) {
  constexpr int samples = 1000;
  for (int i = 1; i < samples; ++i) {
    const double t = interval.a() + interval.length() * i / samples;
    if (!(u(t) > 0.0)) {
      throw DomainError("Borg quotient needs u > 0 inside (a, b); violated at t = " +
                        std::to_string(t));
    }
  }
}

}  // namespace

double borg_ratio(const BorgInput& input, const Interval& interval) {
  require_positive_inside(input.u, interval);
  const double a = interval.a();
  const double len = interval.length();
  const double bound = 4.0 / len;
  constexpr double blowup = 1e12;

  auto integrand = [&](double t) { return std::abs(input.u2(t)) / input.u(t); };
  std::vector<double> partial;
  for (int k = 2; k <= 6; ++k) {
    const double delta = std::pow(10.0, -k) * len;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, a + delta, a + len - delta, 20, 1e-12);
    if (!std::isfinite(value) || value > blowup) return std::numeric_limits<double>::infinity();
    partial.push_back(value);
  }
  const std::size_t m = partial.size();
  const double d1 = partial[m - 2] - partial[m - 3];
  const double d2 = partial[m - 1] - partial[m - 2];
  // Truncation tails of a convergent integral shrink with delta; a tail that
  // keeps pace (logarithmic or worse growth) means the integral diverges.
  if (d2 > 0.5 * d1 && d2 > 1e-9 * std::abs(partial.back())) {
    return std::numeric_limits<double>::infinity();
  }
  double limit = partial.back();
  const double denom = d2 - d1;
  if (std::abs(denom) > 1e-14 * std::abs(limit)) limit = partial.back() - d2 * d2 / denom;
  return limit / bound;
}

double borg_ratio(const GridFunction& u) {
  const auto t = u.nodes();
  const auto v = u.values();
  const Interval interval = u.interval();
  require_positive_inside(u, interval);
  const double lo = interval.a() + 0.01 * interval.length();
  const double hi = interval.b() - 0.01 * interval.length();

  // Trapezoid rule over the nodes inside the truncated interval; the integrand
  // is non-negative, so truncation only lowers the value.
  double sum = 0.0;
  double prev_t = 0.0;
  double prev_f = 0.0;
  bool first = true;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] < lo || t[i] > hi) continue;
    const double hl = t[i] - t[i - 1];
    const double hr = t[i + 1] - t[i];
    const double second = 2.0 * ((v[i + 1] - v[i]) / hr - (v[i] - v[i - 1]) / hl) / (hl + hr);
    const double f = std::abs(second) / v[i];
    if (!first) sum += 0.5 * (f + prev_f) * (t[i] - prev_t);
    first = false;
    prev_t = t[i];
    prev_f = f;
  }
  return sum / (4.0 / interval.length());
}

}  // namespace confbvp::spectral
