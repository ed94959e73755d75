#include "confbvp/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace confbvp::calculus {

namespace {

void require_right_of_a(double t, double a, const char* what) {
  if (!(t > a)) {
    std::ostringstream msg;
    msg << what << " needs t > a, got t = " << t << ", a = " << a;
    throw DomainError(msg.str());
  }
}

void require_in_interval(double t, const Interval& interval, const char* what) {
  require_right_of_a(t, interval.a(), what);
  if (!(t <= interval.b())) {
    std::ostringstream msg;
    msg << what << " needs t <= b, got t = " << t << ", b = " << interval.b();
    throw DomainError(msg.str());
  }
}

}  // namespace

double central_difference(const ScalarFn& fn, double t) {
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(t));
  return (fn(t + h) - fn(t - h)) / (2.0 * h);
}

double SmoothProbe::first(double t) const {
  if (g1) return g1(t);
  return central_difference(g, t);
}

double SmoothProbe::second(double t) const {
  if (g2) return g2(t);
  if (g1) return central_difference(g1, t);
  const double h = std::pow(std::numeric_limits<double>::epsilon(), 0.25) * std::max(1.0, std::abs(t));
  return (g(t + h) - 2.0 * g(t) + g(t - h)) / (h * h);
}

double conformable_derivative(const SmoothProbe& probe, const Order& order,
                              const Interval& interval, double t) {
  require_in_interval(t, interval, "conformable derivative");
  return std::pow(t - interval.a(), 2.0 - order.alpha()) * probe.second(t);
}

double conformable_derivative_sub1(const ScalarFn& g1, double beta, double a, double t,
                                   const ScalarFn& g1_prime) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("sub-unit order must lie in (0, 1)");
  require_right_of_a(t, a, "conformable derivative");
  const double slope = g1_prime ? g1_prime(t) : central_difference(g1, t);
  return std::pow(t - a, 1.0 - beta) * slope;
}

double conformable_integral(const ScalarFn& phi, const Order& order, const Interval& interval,
                            double t, int rule_size) {
  require_in_interval(t, interval, "conformable integral");
  const auto rule = build_weighted_quadrature(Interval(interval.a(), t), order, rule_size);
  return weighted_integral(rule, [&](double s) { return (t - s) * phi(s); });
}

double inversion_check(const SmoothProbe& probe, const Order& order, const Interval& interval,
                       double t, int rule_size) {
  if (!probe.limits_at_a) {
    throw DomainError("inversion check needs finite g(a) and g'(a)");
  }
  const double a = interval.a();
  const double lhs = conformable_integral(
      [&](double s) { return conformable_derivative(probe, order, interval, s); }, order, interval,
      t, rule_size);
  const double rhs = probe.value(t) - probe.value(a) - probe.first(a) * (t - a);
  return lhs - rhs;
}

SignCheck extremum_sign_check(const SmoothProbe& probe, const Order& order,
                              const Interval& interval, double xi, ExtremumKind kind) {
  if (!(xi > interval.a() && xi < interval.b())) {
    throw DomainError("extremum point must lie strictly inside (a, b)");
  }
  constexpr int samples = 10000;
  constexpr double claim_tol = 1e-9;
  constexpr double sign_tol = 1e-10;

  const double peak = probe.value(xi);
  for (int i = 0; i < samples; ++i) {
    const double t = interval.a() + interval.length() * i / (samples - 1);
    const double v = probe.value(t);
    const bool contradicts = kind == ExtremumKind::max ? v > peak + claim_tol : v < peak - claim_tol;
    if (contradicts) return SignCheck::inconclusive;
  }

  const double d = conformable_derivative(probe, order, interval, xi);
  const bool ok = kind == ExtremumKind::max ? d <= sign_tol : d >= -sign_tol;
  return ok ? SignCheck::pass : SignCheck::fail;
}

}  // namespace confbvp::calculus
