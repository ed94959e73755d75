#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "confbvp/core.hpp"

using namespace confbvp;

namespace {

// Independent reference for \int_a^b phi(s) (s-a)^(alpha-2) ds: double
// exponential quadrature, fed the distance to the singular endpoint directly.
double oracle_weighted(const Interval& iv, const Order& ord, const ScalarFn& phi) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double a = iv.a();
  const double b = iv.b();
  auto f = [&](double s, double sc) {
    // Left of the midpoint sc = a - s, which keeps s - a accurate near a.
    const double dist = sc < 0.0 ? -sc : s - a;
    return phi(s) * std::pow(dist, ord.weight_exponent());
  };
  return integrator.integrate(f, a, b, 1e-15);
}

}  // namespace

TEST_CASE("order and interval validation") {
  CHECK_THROWS_AS(Order(1.0), DomainError);
  CHECK_THROWS_AS(Order(2.0), DomainError);
  CHECK_THROWS_AS(Order(0.5), DomainError);
  CHECK_THROWS_AS(Order(std::numeric_limits<double>::quiet_NaN()), DomainError);
  const Order ord(1.25);
  CHECK(ord.beta() == doctest::Approx(0.25));
  CHECK(ord.weight_exponent() == doctest::Approx(-0.75));

  CHECK_THROWS_AS(Interval(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(Interval(2.0, 1.0), DomainError);
  CHECK_THROWS_AS(Interval(0.0, std::numeric_limits<double>::infinity()), DomainError);
  CHECK(Interval(2.0, 5.0).length() == 3.0);
}

TEST_CASE("grid nodes hit the endpoints exactly") {
  const Interval iv(0.3, 1.7);
  for (auto kind : {GridKind::uniform, GridKind::cosine_clustered}) {
    const auto nodes = make_nodes(iv, 17, kind);
    CHECK(nodes.front() == 0.3);
    CHECK(nodes.back() == 1.7);
    for (std::size_t i = 1; i < nodes.size(); ++i) CHECK(nodes[i] > nodes[i - 1]);
  }
}

TEST_CASE("grid function construction errors") {
  CHECK_THROWS_AS(GridFunction({0.0, 1.0}, {0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(GridFunction({0.0, 0.5, 1.0}, {0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(GridFunction({0.0, 0.5, 0.5}, {0.0, 0.0, 0.0}), DomainError);
  const GridFunction g({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
  CHECK_THROWS_AS(g(1.5), DomainError);
  CHECK(g(0.5) == 1.0);
  CHECK(g.sup_norm() == 1.0);
}

TEST_CASE("monotone Hermite interpolation") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> step(0.0, 1.0);

  SUBCASE("monotone data gives a monotone interpolant") {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x{0.0}, y{0.0};
      for (int i = 1; i < 12; ++i) {
        x.push_back(x.back() + 0.05 + step(rng));
        y.push_back(y.back() + (step(rng) < 0.3 ? 0.0 : step(rng)));
      }
      const GridFunction g(x, y);
      double prev = g(x.front());
      for (int k = 1; k <= 2000; ++k) {
        const double t = x.front() + (x.back() - x.front()) * k / 2000.0;
        const double v = g(std::min(t, x.back()));
        CHECK(v >= prev - 1e-12);
        prev = v;
      }
    }
  }

  SUBCASE("reproduces node values and converges for smooth data") {
    const Interval iv(0.0, 2.0);
    std::vector<double> errs;
    for (int n : {21, 41, 81, 161}) {
      const auto g = GridFunction::sample(make_nodes(iv, n), [](double t) { return std::sin(3 * t); });
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(g(g.nodes()[i]) == g.values()[i]);
      double err = 0.0;
      for (int k = 0; k <= 1000; ++k) {
        const double t = 2.0 * k / 1000.0;
        err = std::max(err, std::abs(g(t) - std::sin(3 * t)));
      }
      errs.push_back(err);
    }
    // Slopes are clamped near extrema, so the rate is only O(h^2) and uneven
    // between single halvings; two halvings must gain at least 8x.
    CHECK(errs[2] < errs[0] / 8.0);
    CHECK(errs[3] < errs[1] / 8.0);
  }
}

TEST_CASE("Gauss-Legendre exactness") {
  for (int n : {1, 2, 5, 16, 64}) {
    const auto gl = gauss_legendre(n);
    double sum = 0.0;
    for (double w : gl.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    // x^(2n-2) integrates to 2/(2n-1).
    double moment = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) moment += gl.weights[i] * std::pow(gl.nodes[i], 2 * n - 2);
    CHECK(moment == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
  }
}

TEST_CASE("build_weighted_quadrature examples") {
  CHECK_THROWS_AS(build_weighted_quadrature(Interval(0, 1), Order(1.5), 1), DomainError);

  const Interval unit(0.0, 1.0);
  const Order half(1.5);
  for (int n : {2, 3, 8, 64}) {
    const auto rule = build_weighted_quadrature(unit, half, n);
    CHECK(weighted_integral(rule, [](double) { return 1.0; }) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rule.declared_degree >= 2 * n - grading_power(half));
  }
  const auto rule = build_weighted_quadrature(unit, half, 16);
  CHECK(weighted_integral(rule, [](double s) { return s; }) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  // [1,3], alpha = 1.25: closed form 2^0.25 / 0.25, and the independent oracle agrees.
  const Interval shifted(1.0, 3.0);
  const Order quarter(1.25);
  const double closed = std::pow(2.0, 0.25) / 0.25;
  const double oracle = oracle_weighted(shifted, quarter, [](double) { return 1.0; });
  CHECK(oracle == doctest::Approx(closed).epsilon(1e-10));
  CHECK(closed == doctest::Approx(4.756828).epsilon(1e-6));
  const auto r2 = build_weighted_quadrature(shifted, quarter, 8);
  CHECK(std::abs(weighted_integral(r2, [](double) { return 1.0; }) - closed) < 1e-12 * closed);

  for (std::size_t i = 0; i < r2.nodes.size(); ++i) {
    CHECK(r2.nodes[i] > shifted.a());
    CHECK(r2.nodes[i] <= shifted.b());
    CHECK(r2.weights[i] > 0.0);
  }
}

TEST_CASE("weight-sum identity over random rules") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> alpha(1.001, 1.999);
  std::uniform_real_distribution<double> left(-5.0, 5.0);
  std::uniform_real_distribution<double> len(0.01, 10.0);
  std::uniform_int_distribution<int> pts(2, 128);
  for (int trial = 0; trial < 300; ++trial) {
    const Order ord(alpha(rng));
    const double a = left(rng);
    const Interval iv(a, a + len(rng));
    const auto rule = build_weighted_quadrature(iv, ord, pts(rng));
    const double expected = weight_integral(iv, ord);
    CHECK(std::abs(rule.weight_sum() - expected) <= 1e-12 * expected);
    for (double w : rule.weights) CHECK(w > 0.0);
  }
}

TEST_CASE("monomial exactness against the power rule") {
  for (double alpha : {1.05, 1.1, 1.25, 1.333, 1.5, 1.6, 1.75, 1.9, 1.999}) {
    const Order ord(alpha);
    const Interval iv(0.5, 2.5);
    const double len = iv.length();
    for (int n : {24, 48, 96}) {
      const auto rule = build_weighted_quadrature(iv, ord, n);
      for (int k = 0; k <= 2; ++k) {
        const double p = ord.beta() + k;
        const double expected = std::pow(len, p) / p;
        const double got = weighted_integral(rule, [&](double s) { return std::pow(s - iv.a(), k); });
        CHECK_MESSAGE(std::abs(got - expected) <= 1e-12 * expected,
                      "alpha=" << alpha << " n=" << n << " k=" << k);
      }
    }
  }
}

TEST_CASE("weighted_integral examples and errors") {
  const Interval unit(0.0, 1.0);
  const Order half(1.5);
  const auto rule = build_weighted_quadrature(unit, half, 32);
  CHECK(weighted_integral(rule, [](double) { return 0.0; }) == 0.0);
  CHECK(weighted_integral(rule, [](double s) { return std::sqrt(s); }) == doctest::Approx(1.0).epsilon(1e-14));

  const double oracle = oracle_weighted(unit, half, [](double s) { return std::sin(s); });
  CHECK(std::abs(weighted_integral(rule, [](double s) { return std::sin(s); }) - oracle) < 1e-10);

  try {
    weighted_integral(rule, [](double s) { return s > 0.5 ? std::numeric_limits<double>::infinity() : 1.0; });
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.where() > 0.5);
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("smooth and weight-cancelling integrands against the oracle") {
  for (double alpha : {1.1, 1.25, 1.5, 1.7, 1.9, 1.999}) {
    const Order ord(alpha);
    const Interval iv(0.0, 1.0);
    const auto rule = build_weighted_quadrature(iv, ord, 64);
    const auto cancel = [&](double s) { return (1 - s) * std::pow(s, 2 - alpha) * std::cos(s); };
    for (const ScalarFn& phi : {ScalarFn([](double s) { return std::exp(s); }), ScalarFn(cancel)}) {
      CHECK_MESSAGE(std::abs(weighted_integral(rule, phi) - oracle_weighted(iv, ord, phi)) < 1e-10,
                    "alpha=" << alpha);
    }
  }
}

TEST_CASE("refinement does not increase the error") {
  const Interval iv(0.0, 1.0);
  const std::vector<ScalarFn> probes{
      [](double s) { return std::sin(s); },
      [](double s) { return std::exp(s); },
      [](double s) { return 1.0 - 3.0 * s + s * s * s * s; },
  };
  for (double alpha : {1.2, 1.5, 1.8}) {
    const Order ord(alpha);
    for (const auto& phi : probes) {
      const double ref = oracle_weighted(iv, ord, phi);
      double prev = std::numeric_limits<double>::infinity();
      for (int n : {4, 8, 16, 32}) {
        const double err = std::abs(weighted_integral(build_weighted_quadrature(iv, ord, n), phi) - ref);
        CHECK(err <= std::max(prev, 1e-14));
        prev = err;
      }
    }
  }
}

TEST_CASE("interior pieces integrate the smooth weight") {
  const Order ord(1.3);
  const auto gl = gauss_legendre(20);
  const auto rule = build_weighted_quadrature(0.0, 0.25, 1.0, ord, gl);
  const double expected = (std::pow(1.0, 0.3) - std::pow(0.25, 0.3)) / 0.3;
  CHECK(rule.weight_sum() == doctest::Approx(expected).epsilon(1e-14));
  CHECK_THROWS_AS(build_weighted_quadrature(0.5, 0.25, 1.0, ord, gl), DomainError);
}
