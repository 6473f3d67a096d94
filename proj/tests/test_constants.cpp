#include <cmath>
#include <numbers>

#include "doctest.h"
#include "halfhilbert/constants.hpp"
#include "halfhilbert/errors.hpp"
#include "oracles.hpp"

using namespace halfhilbert;
using oracle::rel;

namespace {
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
}

TEST_SUITE("constants") {

TEST_CASE("closed form values") {
  CHECK(rel(constants::k_closed({1.0, 1.0, 0.5, 1.0, 1}).value, kPi2 / 6.0) < 1e-14);
  CHECK(rel(constants::k_closed({1.0, 0.0, 0.4, 0.8, 1}).value, kPi2 / (2.0 * 0.8)) < 1e-14);
  CHECK(rel(constants::k_closed({1.0, 0.0, 0.4, 0.8, 1}).value, 6.16850275068085) < 1e-13);
  CHECK(rel(constants::k_closed({1.0, 0.0, 0.5, 1.0, 1}).value, 4.9348022005446793) < 1e-14);
  const KernelParams kp{2.0, 1.0, 0.3, 0.9, 1};
  CHECK(rel(constants::k_closed(kp).value, constants::k_quadrature(kp).value) < 1e-8);
  CHECK(constants::k_closed(kp).method == constants::Method::closed_form);
  CHECK(constants::k_quadrature(kp).method == constants::Method::quadrature);
}

TEST_CASE("closed form against quadrature on the parameter grid") {
  int n = 0;
  for (double rho : {0.5, 1.0, 2.0})
    for (double af : {0.0, 0.5, 1.0})
      for (double gs : {0.3, 0.5, 0.8})
        for (double sigma : {0.5, 0.8, 1.0}) {
          const KernelParams kp{rho, af * rho, gs * sigma, sigma, 1};
          const auto c = constants::k_closed(kp);
          const auto q = constants::k_quadrature(kp);
          CAPTURE(rho);
          CAPTURE(af);
          CAPTURE(gs);
          CAPTURE(sigma);
          CHECK(c.value > 0.0);
          CHECK(rel(q.value, c.value) <= 1e-8);
          CHECK(q.error_estimate >= 0.0);
          ++n;
        }
  CHECK(n == 81);
}

TEST_CASE("special values") {
  auto s = constants::k_special({1.0, 1.0, 0.25, 0.5, 1});
  REQUIRE(s);
  CHECK(rel(s->value, kPi2 / 3.0) < 1e-15);
  CHECK(rel(s->value, 3.28986813369645) < 1e-13);
  s = constants::k_special({3.0, 0.0, 0.5, 1.0, 1});
  REQUIRE(s);
  CHECK(rel(s->value, kPi2 / 18.0) < 1e-15);
  CHECK(rel(s->value, 0.54831135561608) < 1e-13);
  CHECK_FALSE(constants::k_special({1.0, 0.5, 0.3, 0.9, 1}));
}

TEST_CASE("special values agree with the closed form") {
  for (double sigma : {0.5, 0.8, 1.0})
    for (double rho : {0.5, 1.0, 2.0, 3.0}) {
      for (double alpha : {0.0, rho}) {
        const KernelParams kp{rho, alpha, sigma / 2.0, sigma, 1};
        const auto s = constants::k_special(kp);
        REQUIRE(s);
        CHECK(rel(s->value, constants::k_closed(kp).value) <= 1e-10);
      }
      // alpha = rho without gamma = sigma/2 gives K(sigma)
      const KernelParams kz{rho, rho, 0.3 * sigma, sigma, 1};
      const auto s = constants::k_special(kz);
      REQUIRE(s);
      CHECK(rel(s->value, constants::k_closed(kz).value) <= 1e-12);
      CHECK(rel(constants::k_zeta(kz), constants::k_closed(kz).value) <= 1e-12);
    }
}

TEST_CASE("k is nonincreasing in alpha") {
  for (double rho : {0.5, 1.0, 2.0})
    for (double g : {0.2, 0.45})
      for (double sigma : {0.6, 1.0}) {
        double prev = INFINITY;
        for (int i = 0; i <= 10; ++i) {
          const double k = constants::k_closed({rho, rho * i / 10.0, g, sigma, 1}).value;
          CHECK(k <= prev);
          prev = k;
        }
      }
}

TEST_CASE("delta does not enter k") {
  CHECK(constants::k_closed({1.0, 0.5, 0.4, 0.9, 1}).value == constants::k_closed({1.0, 0.5, 0.4, 0.9, -1}).value);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(constants::k_closed({1.0, 1.0, 0.9, 0.5, 1}), DomainError);
  CHECK_THROWS_AS(constants::k_closed({0.0, 0.0, 0.5, 1.0, 1}), DomainError);
  CHECK_THROWS_AS(constants::k_closed({1.0, 1.5, 0.5, 1.0, 1}), DomainError);
  CHECK_THROWS_AS(constants::k_closed({1.0, -0.1, 0.5, 1.0, 1}), DomainError);
  CHECK_THROWS_AS(constants::k_closed({1.0, 1.0, 0.5, 1.0, 0}), DomainError);
  CHECK_THROWS_AS(constants::k_quadrature({1.0, 1.0, 0.5, 0.5, 1}), DomainError);
  const KernelParams bad{-1.0, 2.0, 0.9, 0.5, 3};
  CHECK(bad.violations().size() == 4);
  try {
    bad.require_valid();
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("require 0<gamma<sigma") != std::string::npos);
  }
  CHECK(KernelParams{1.0, 1.0, 0.5, 1.2, 1}.violations().empty());
  CHECK(KernelParams{1.0, 1.0, 0.5, 1.2, 1}.theorem_violations().size() == 1);
}

TEST_CASE("conjugate exponents") {
  for (double p : {2.0, 4.0, -1.0, -3.0, 0.5, 0.75}) {
    const auto e = ExponentPair::from_p(p);
    CHECK(std::fabs(1.0 / e.p + 1.0 / e.q - 1.0) < 4 * kEps);
  }
  CHECK(ExponentPair::from_p(2.0).regime == Regime::p_gt_1);
  CHECK(ExponentPair::from_p(-1.0).regime == Regime::p_lt_0);
  CHECK(ExponentPair::from_p(0.5).regime == Regime::p_in_01);
  CHECK(ExponentPair::from_p(0.5).q == -1.0);
  CHECK_THROWS_AS(ExponentPair::from_p(1.0), DomainError);
  CHECK_THROWS_AS(ExponentPair::from_p(0.0), DomainError);
}

TEST_CASE("kernel Mellin transform pieces add up") {
  const KernelParams kp{1.0, 1.0, 0.5, 1.0, 1};
  const Kernel h(kp);
  const double k = constants::k_closed(kp).value;
  const auto a = constants::kernel_mellin(h, 1.0, 0.0, 2.0);
  const auto b = constants::kernel_mellin(h, 1.0, 2.0, INFINITY);
  CHECK(rel(a.value + b.value, k) < 1e-11);
  CHECK_THROWS_AS(constants::kernel_mellin(h, 0.4, 0.0, 1.0), DivergenceError);
}

}
