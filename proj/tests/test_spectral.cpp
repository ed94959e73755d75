#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "confbvp/linear.hpp"
#include "confbvp/spectral.hpp"

using namespace confbvp;
using namespace confbvp::spectral;

namespace {

const double pi = std::numbers::pi;

// Shooting oracle for u'' = -lambda t^(alpha-2) u on [0,1], u(0) = 0, u'(0) = 1.
// The start is moved off the singular end with the two-term Frobenius expansion
// u = t - lambda t^(alpha+1) / (alpha (alpha+1)).
double shoot(double lambda, double alpha) {
  using State = std::array<double, 2>;
  const double t0 = 1e-8;
  State x{t0 - lambda * std::pow(t0, alpha + 1) / (alpha * (alpha + 1)),
          1.0 - lambda * std::pow(t0, alpha) / alpha};
  auto rhs = [=](const State& y, State& dy, double t) {
    dy[0] = y[1];
    dy[1] = -lambda * std::pow(t, alpha - 2) * y[0];
  };
  namespace ode = boost::numeric::odeint;
  ode::integrate_adaptive(ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>()), rhs, x,
                          t0, 1.0, 1e-10);
  return x[0];
}

// First sign change of u(1) as lambda grows from zero.
double shooting_eigenvalue(double alpha) {
  double lo = 0.25;
  double hi = lo;
  while (shoot(hi, alpha) > 0.0) {
    lo = hi;
    hi += 0.25;
  }
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve([=](double l) { return shoot(l, alpha); }, lo, hi,
                                                   boost::math::tools::eps_tolerance<double>(45), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

TEST_CASE("weighted_q_norm examples") {
  CHECK(weighted_q_norm([](double) { return 1.0; }, Interval(0, 1), Order(1.5)) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(weighted_q_norm([](double) { return 0.0; }, Interval(0, 1), Order(1.5)) == 0.0);
  CHECK(weighted_q_norm([](double t) { return t; }, Interval(0, 1), Order(1.5)) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(weighted_q_norm([](double t) { return -t; }, Interval(0, 1), Order(1.5)) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("weighted_q_norm converges for a kinked integrand") {
  // \int_0^1 |2t-1| t^(-1/2) dt = (4 sqrt(2) - 2) / 3.
  const double exact = (4 * std::sqrt(2.0) - 2) / 3;
  const auto q = [](double t) { return 2 * t - 1; };
  double prev = std::abs(weighted_q_norm(q, Interval(0, 1), Order(1.5), 16) - exact);
  for (int n : {64, 256}) {
    const double err = std::abs(weighted_q_norm(q, Interval(0, 1), Order(1.5), n) - exact);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("lyapunov_check examples") {
  const auto one = lyapunov_check([](double) { return 1.0; }, Interval(0, 1), Order(1.5));
  CHECK(one.weighted_q_integral == doctest::Approx(2.0));
  CHECK(one.bound == doctest::Approx(4.0));
  CHECK(one.margin == doctest::Approx(-2.0));
  CHECK_FALSE(one.certified);
  CHECK(one.alpha == 1.5);

  const double alpha = 1.999;
  const auto classical = lyapunov_check([](double) { return pi * pi; }, Interval(0, 1), Order(alpha));
  CHECK(classical.weighted_q_integral == doctest::Approx(pi * pi / (alpha - 1)).epsilon(1e-10));
  CHECK(classical.weighted_q_integral == doctest::Approx(9.879).epsilon(1e-3));
  CHECK(classical.certified);

  const auto wide = lyapunov_check([](double) { return 1.0; }, Interval(0, 2), Order(1.5));
  CHECK(wide.bound == doctest::Approx(2.0));
  CHECK(wide.interval == Interval(0, 2));

  const auto zero = lyapunov_check([](double) { return 0.0; }, Interval(0, 1), Order(1.2));
  CHECK_FALSE(zero.certified);
}

TEST_CASE("principal eigenvalue near the classical order") {
  const auto eig = principal_eigenvalue(Interval(0, 1), Order(1.999), 128);
  CHECK(std::abs(eig.lambda1 - pi * pi) / (pi * pi) < 0.005);
  CHECK(eig.validation_gap < 1e-8);
}

TEST_CASE("principal eigenvalue matches a shooting oracle") {
  for (double alpha : {1.25, 1.5, 1.75}) {
    const double oracle = shooting_eigenvalue(alpha);
    const auto eig = principal_eigenvalue(Interval(0, 1), Order(alpha), 256);
    MESSAGE("alpha=" << alpha << " nystrom=" << eig.lambda1 << " shooting=" << oracle);
    CHECK(std::abs(eig.lambda1 - oracle) / oracle < 1e-4);
    CHECK(eig.estimated_error < 1e-3 * oracle);
  }
}

TEST_CASE("principal eigenvalue at alpha 1.5 settles under refinement") {
  const Interval unit(0, 1);
  double prev_gap = std::numeric_limits<double>::infinity();
  for (int n : {32, 64, 128}) {
    const auto eig = principal_eigenvalue(unit, Order(1.5), n);
    CHECK(eig.estimated_error < prev_gap);
    prev_gap = eig.estimated_error;
  }
  const double l128 = principal_eigenvalue(unit, Order(1.5), 128).lambda1;
  const double l256 = principal_eigenvalue(unit, Order(1.5), 256).lambda1;
  CHECK(std::abs(l128 - l256) / l256 < 1e-3);
}

TEST_CASE("eigenvalue scales with the interval length") {
  const double alpha = 1.4;
  const double base = principal_eigenvalue(Interval(0, 1), Order(alpha), 128).lambda1;
  for (double len : {0.5, 2.0, 3.0}) {
    const double scaled = principal_eigenvalue(Interval(1.0, 1.0 + len), Order(alpha), 128).lambda1;
    CHECK(scaled == doctest::Approx(base * std::pow(len, -alpha)).epsilon(1e-9));
  }
}

TEST_CASE("eigenfunction invariants and residual") {
  const double alpha = 1.5;
  const auto eig = principal_eigenvalue(Interval(0, 1), Order(alpha), 256);
  const auto& u = eig.eigenfunction;
  CHECK(u.size() == 257);
  CHECK(u.values().front() == 0.0);
  CHECK(u.values().back() == 0.0);
  CHECK(u.sup_norm() == doctest::Approx(1.0));
  for (std::size_t i = 1; i + 1 < u.size(); ++i) CHECK(u.values()[i] > 0.0);

  const double lambda = eig.lambda1;
  const auto res = linear::residual(u, Order(alpha), [=](double, double x) { return lambda * x; });
  MESSAGE("eigen residual " << res.sup_norm());
  CHECK(res.sup_norm() < 1e-3);
}

TEST_CASE("Lyapunov bound holds at the principal eigenvalue") {
  const Interval unit(0, 1);
  for (double alpha : {1.1, 1.25, 1.5, 1.75, 1.9, 1.99}) {
    const auto eig = principal_eigenvalue(unit, Order(alpha), 128);
    const auto report = lyapunov_check([&](double) { return eig.lambda1; }, unit, Order(alpha));
    CHECK(report.certified);
    CHECK(report.margin > 0.0);
    CHECK(sharpness_probe(unit, Order(alpha), 128) >= 1.0);
  }
}

TEST_CASE("sharpness probe") {
  CHECK(sharpness_probe(Interval(0, 1), Order(1.999), 128) == doctest::Approx(pi * pi / 4).epsilon(0.01));
  const double unit = sharpness_probe(Interval(0, 1), Order(1.6), 64);
  CHECK(sharpness_probe(Interval(-2, 5), Order(1.6), 64) == doctest::Approx(unit).epsilon(1e-9));
  CHECK(sharpness_probe(Interval(0, 1), Order(1.05), 64) > 1.0);
}

TEST_CASE("Borg ratio") {
  const BorgInput sine{[](double t) { return std::sin(t); }, [](double t) { return -std::sin(t); }};
  CHECK(borg_ratio(sine, Interval(0, pi)) == doctest::Approx(pi * pi / 4).epsilon(1e-6));

  const BorgInput parabola{[](double t) { return t * (1 - t); }, [](double) { return -2.0; }};
  CHECK(std::isinf(borg_ratio(parabola, Interval(0, 1))));

  const BorgInput crossing{[](double t) { return std::sin(2 * t); }, [](double t) { return -4 * std::sin(2 * t); }};
  CHECK_THROWS_AS(borg_ratio(crossing, Interval(0, pi)), DomainError);

  const auto grid = GridFunction::sample(make_nodes(Interval(0, pi), 2001), [](double t) { return std::sin(t); });
  // The grid form drops 1% at each end, which removes 2% of the integral.
  CHECK(borg_ratio(grid) == doctest::Approx(0.98 * pi * pi / 4).epsilon(1e-3));
}

TEST_CASE("eigen input validation") {
  CHECK_THROWS_AS(principal_eigenvalue(Interval(0, 1), Order(1.5), 4), DomainError);
  const auto mode = dominant_nystrom_mode(Interval(0, 1), Order(1.5), 32);
  CHECK(std::abs(mode.symmetric_mu - mode.mu) < 1e-10 * mode.mu);
  CHECK(mode.iterations > 0);
}

TEST_CASE("classical margin limit") {
  const Interval unit(0, 1);
  const double classical = pi * pi - 4.0;
  double prev = std::numeric_limits<double>::infinity();
  for (double alpha : {1.9, 1.99, 1.999}) {
    const auto report = lyapunov_check([](double) { return pi * pi; }, unit, Order(alpha));
    const double err = std::abs(report.margin - classical);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.02 * classical);
}

TEST_CASE("Borg ratio on the unit interval") {
  const BorgInput mode{[](double t) { return std::sin(pi * t); },
                       [](double t) { return -pi * pi * std::sin(pi * t); }};
  CHECK(borg_ratio(mode, Interval(0, 1)) == doctest::Approx(pi * pi / 4).epsilon(1e-6));
}
