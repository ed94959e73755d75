#include "confbvp/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace confbvp::linear {

double GreenKernel::eval(double t, double s) const {
  if (!interval_.contains(t) || !interval_.contains(s)) {
    std::ostringstream msg;
    msg << "Green kernel arguments (" << t << ", " << s << ") outside [" << interval_.a() << ", "
        << interval_.b() << "]";
    throw DomainError(msg.str());
  }
  const double a = interval_.a();
  const double b = interval_.b();
  if (s <= t) return (s - a) * (b - t) / (b - a);
  return (t - a) * (b - s) / (b - a);
}

GreenIntegrator::GreenIntegrator(const Interval& interval, const Order& order,
                                 std::span<const double> targets, int rule_size) {
  if (rule_size < 2) throw DomainError("rule_size must be at least 2");
  const GreenKernel kernel(interval);
  const auto reference = gauss_legendre(rule_size);
  const double a = interval.a();
  const double b = interval.b();

  rows_.reserve(targets.size());
  for (double t : targets) {
    if (!interval.contains(t)) throw DomainError("integration target outside the interval");
    Row row;
    if (t > a && t < b) {
      for (const auto& piece : {build_weighted_quadrature(a, a, t, order, reference),
                                build_weighted_quadrature(a, t, b, order, reference)}) {
        for (std::size_t j = 0; j < piece.nodes.size(); ++j) {
          row.nodes.push_back(piece.nodes[j]);
          row.coeffs.push_back(kernel.eval(t, piece.nodes[j]) * piece.weights[j]);
        }
      }
    }
    rows_.push_back(std::move(row));
  }
}

std::vector<double> GreenIntegrator::apply(const ScalarFn& phi) const {
  std::vector<double> out(rows_.size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Row& row = rows_[i];
    double sum = 0.0;
    for (std::size_t j = 0; j < row.nodes.size(); ++j) {
      const double v = phi(row.nodes[j]);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "integrand is not finite at node s = " << row.nodes[j];
        throw EvaluationError(msg.str(), row.nodes[j]);
      }
      sum += row.coeffs[j] * v;
    }
    out[i] = sum;
  }
  return out;
}

GridFunction solve_linear(const LinearProblem& problem, int n_grid, int rule_size, GridKind kind) {
  if (n_grid < 3) throw DomainError("solve_linear needs n_grid >= 3");
  auto nodes = make_nodes(problem.interval, n_grid, kind);
  const GreenIntegrator integrator(problem.interval, problem.order, nodes, rule_size);
  auto values = integrator.apply(problem.forcing);
  values.front() = 0.0;
  values.back() = 0.0;
  return {std::move(nodes), std::move(values)};
}

GreenBoundsReport check_green_bounds(const GreenKernel& kernel, int n_samples) {
  if (n_samples < 10) throw DomainError("check_green_bounds needs n_samples >= 10");
  const Interval& iv = kernel.interval();
  const auto grid = make_nodes(iv, n_samples);
  const double upper = iv.length() + 1e-12;
  constexpr double lower = -1e-12;

  GreenBoundsReport report;
  report.max.value = -std::numeric_limits<double>::infinity();
  report.min.value = std::numeric_limits<double>::infinity();
  auto visit = [&](double t, double s) {
    const double g = kernel.eval(t, s);
    if (g > report.max.value) report.max = {t, s, g};
    if (g < report.min.value) report.min = {t, s, g};
    if ((g < lower || g > upper) && !report.witness) {
      report.pass = false;
      report.witness = KernelSample{t, s, g};
    }
  };
  for (double t : grid) {
    for (double s : grid) visit(t, s);
  }
  // The diagonal at a finer resolution, where the kernel peaks.
  const auto diag = make_nodes(iv, 4 * n_samples + 1);
  for (double t : diag) visit(t, t);
  return report;
}

double ResidualProfile::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

ResidualProfile residual(const GridFunction& u, const Order& order, const BivariateFn& rhs) {
  if (u.size() < 5) throw DomainError("residual needs at least five grid nodes");
  const auto t = u.nodes();
  const auto v = u.values();
  const double a = t.front();
  const double cutoff = a + kResidualBuffer * (t.back() - a);

  ResidualProfile out;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] < cutoff) continue;
    const double hl = t[i] - t[i - 1];
    const double hr = t[i + 1] - t[i];
    const double second = 2.0 * ((v[i + 1] - v[i]) / hr - (v[i] - v[i - 1]) / hl) / (hl + hr);
    out.nodes.push_back(t[i]);
    out.values.push_back(std::pow(t[i] - a, 2.0 - order.alpha()) * second + rhs(t[i], v[i]));
  }
  return out;
}

ResidualProfile residual_linear(const GridFunction& u, const LinearProblem& problem) {
  if (!(u.interval() == problem.interval)) {
    throw DomainError("grid function does not span the problem interval");
  }
  return residual(u, problem.order,
                  [&](double t, double) { return problem.forcing(t); });
}

}  // namespace confbvp::linear
