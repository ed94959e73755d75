#pragma once

// Conformable derivative and integral for orders 1 < alpha < 2, where
//   T_alpha g(t) = (t-a)^(2-alpha) g''(t),
//   I_alpha g(t) = \int_a^t (t-s) (s-a)^(alpha-2) g(s) ds.

#include <optional>

#include "confbvp/core.hpp"

namespace confbvp::calculus {

/// A function with its first two derivatives. Missing derivatives fall back to
/// central differences with step eps^(1/3) * max(1, |t|).
struct SmoothProbe {
  ScalarFn g;
  ScalarFn g1;
  ScalarFn g2;
  /// Caller asserts g, g1, g2 have finite one-sided limits at a.
  bool limits_at_a = true;

  double value(double t) const { return g(t); }
  double first(double t) const;
  double second(double t) const;
};

/// Central-difference derivative of fn at t.
double central_difference(const ScalarFn& fn, double t);

double conformable_derivative(const SmoothProbe& probe, const Order& order,
                              const Interval& interval, double t);

/// Order-beta (0 < beta < 1) conformable derivative of a first derivative g1:
/// (t-a)^(1-beta) g1'(t). Without g1_prime the derivative is differenced.
double conformable_derivative_sub1(const ScalarFn& g1, double beta, double a, double t,
                                   const ScalarFn& g1_prime = {});

double conformable_integral(const ScalarFn& phi, const Order& order, const Interval& interval,
                            double t, int rule_size);

/// I_alpha[T_alpha g](t) - (g(t) - g(a) - g'(a)(t-a)).
double inversion_check(const SmoothProbe& probe, const Order& order, const Interval& interval,
                       double t, int rule_size = 64);

enum class ExtremumKind { max, min };
enum class SignCheck { pass, fail, inconclusive };

/// Sign of T_alpha g at a claimed interior global extremum xi. The claim is
/// tested by sampling g at 10^4 uniform points; a contradiction yields
/// inconclusive rather than a verdict.
SignCheck extremum_sign_check(const SmoothProbe& probe, const Order& order,
                              const Interval& interval, double xi, ExtremumKind kind);

}  // namespace confbvp::calculus
