#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "xx0lab/quadrature.hpp"

using namespace xx0lab;
using Catch::Approx;

TEST_CASE("adaptive GK15 on closed-form integrals", "[quadrature]") {
  const double pi = std::numbers::pi;
  SECTION("odd integrand vanishes") {
    const auto r = integrate_adaptive([](double p) { return std::sin(p) * p * p; }, -pi, pi, 1e-12);
    REQUIRE(std::abs(r.value) < 1e-12);
  }
  SECTION("polynomial") {
    const auto r = integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
    REQUIRE(r.value == Approx(1.0 / 3.0).epsilon(1e-13));
  }
  SECTION("modified Bessel identity: integral of e^{cos p} = 2 pi I0(1)") {
    const auto r = integrate_adaptive([](double p) { return std::exp(std::cos(p)); }, -pi, pi, 1e-12);
    REQUIRE(r.value == Approx(2 * pi * std::cyl_bessel_i(0.0, 1.0)).epsilon(1e-12));
  }
  SECTION("oscillatory") {
    const auto r = integrate_adaptive(
        [](double x) { return std::sin(10 * x) * std::sin(10 * x); }, 0.0, 2 * pi, 1e-11);
    REQUIRE(r.value == Approx(pi).epsilon(1e-11));
  }
}

TEST_CASE("quadrature reports effort and converges within budget", "[quadrature]") {
  const auto r = integrate_adaptive([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-10);
  REQUIRE(r.converged);
  REQUIRE(r.error <= 1e-10);
  REQUIRE(r.evaluations <= 1000000);
  REQUIRE(r.value == Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("exhausted budget raises with the achieved error", "[quadrature]") {
  REQUIRE_THROWS_AS(
      integrate_adaptive([](double x) { return std::sqrt(std::abs(x)); }, -1.0, 1.0, 1e-15, 600),
      std::runtime_error);
}
