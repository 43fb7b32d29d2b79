#include <doctest.h>

#include <cmath>

#include "onevstwo/quadrature.hpp"

using namespace onevstwo;

TEST_CASE("gauss-legendre nodes and weights") {
  const GaussRule& r2 = gauss_legendre(2);
  REQUIRE(r2.nodes.size() == 2);
  CHECK(r2.nodes[0] == doctest::Approx(-0.5773502691896257).epsilon(1e-14));
  CHECK(r2.nodes[1] == doctest::Approx(0.5773502691896257).epsilon(1e-14));
  CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-14));

  const GaussRule& r5 = gauss_legendre(5);
  CHECK(r5.nodes[2] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r5.weights[2] == doctest::Approx(0.5688888888888889).epsilon(1e-13));
  CHECK(std::fabs(r5.nodes[4]) ==
        doctest::Approx(0.906179845938664).epsilon(1e-13));

  double wsum = 0.0;
  for (double w : gauss_legendre(12).weights) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

  // degree-2n-1 exactness: x^8 over [-1,1] with n=5
  double moment = 0.0;
  for (std::size_t i = 0; i < r5.nodes.size(); ++i)
    moment += r5.weights[i] * std::pow(r5.nodes[i], 8);
  CHECK(moment == doctest::Approx(2.0 / 9.0).epsilon(1e-13));

  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
}

TEST_CASE("gauss-hermite normal moments") {
  for (int order : {16, 64, 128}) {
    CHECK(normal_expectation([](double) { return 1.0; }, order) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(normal_expectation([](double x) { return x * x; }, order) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(normal_expectation([](double x) { return x * x * x * x; }, order) ==
          doctest::Approx(3.0).epsilon(1e-13));
  }
  // E[cosh(a x)] = exp(a^2/2)
  const double e =
      normal_expectation([](double x) { return std::cosh(2.5 * x); }, 64);
  CHECK(e == doctest::Approx(std::exp(2.5 * 2.5 / 2.0)).epsilon(1e-12));
}

TEST_CASE("adaptive 2-d panels integrate gaussians to tolerance") {
  auto normal2d = [](double x, double y) {
    return std::exp(-0.5 * (x * x + y * y)) / (2.0 * M_PI);
  };
  QuadratureConfig cfg;
  const double mass = integrate2d(normal2d, Box{-8, 8, -8, 8}, cfg);
  CHECK(std::fabs(mass - 1.0) < 1e-10);

  // an off-center, anisotropic bump
  auto bump = [](double x, double y) {
    return std::exp(-2.0 * (x - 1.5) * (x - 1.5) - 0.5 * y * y);
  };
  const double expected = std::sqrt(M_PI / 2.0) * std::sqrt(2.0 * M_PI);
  CHECK(integrate2d(bump, Box{-10, 10, -10, 10}, cfg) ==
        doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("quadrature failure on exhausted budget") {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-14;
  cfg.max_panels = 8;
  auto wiggly = [](double x, double y) {
    return std::sin(40.0 * x) * std::sin(40.0 * y) + 1.0;
  };
  CHECK_THROWS_AS(integrate2d(wiggly, Box{-8, 8, -8, 8}, cfg),
                  QuadratureFailure);
}
