#include <cmath>

#include "doctest.h"
#include "halfhilbert/errors.hpp"
#include "halfhilbert/numeric.hpp"
#include "halfhilbert/weights.hpp"
#include "oracles.hpp"

using namespace halfhilbert;
using namespace halfhilbert::weights;
using oracle::rel;

TEST_SUITE("weights") {

TEST_CASE("U closed forms") {
  const WeightScheme one(MuScheme::constant_one(), NuScheme::constant_one());
  CHECK(big_u(7.5, one) == 7.5);
  CHECK(big_u(0.0, one) == 0.0);
  const WeightScheme log1(MuScheme::inverse_power(1.0), NuScheme::constant_one());
  CHECK(rel(big_u(1.0, log1), std::log(2.0)) < 1e-15);
  const WeightScheme half(MuScheme::inverse_power(0.5), NuScheme::constant_one());
  CHECK(rel(big_u(3.0, half), 2.0) < 1e-15);
  CHECK_THROWS_AS(big_u(-1.0, one), DomainError);
  CHECK_THROWS_AS(MuScheme::inverse_power(1.5), DomainError);
}

TEST_CASE("U closed form against quadrature fallback") {
  for (double beta : {0.0, 0.3, 0.5, 0.9}) {
    const auto closed = MuScheme::inverse_power(beta);
    const auto quad = MuScheme::user([beta](double t) { return std::pow(1.0 + t, -beta); }, true);
    for (double x = 1e-3; x < 1e4; x *= 3.7) CHECK(rel(quad.big_u(x), closed.big_u(x)) < 1e-9);
  }
}

TEST_CASE("U strictly increasing and inverse") {
  for (const auto& mu : {MuScheme::constant_one(), MuScheme::inverse_power(0.5), MuScheme::inverse_power(1.0)}) {
    double prev = 0.0;
    for (double x = 1e-4; x < 1e6; x *= 1.9) {
      const double u = mu.big_u(x);
      CHECK(u > prev);
      CHECK(rel(mu.inverse_u(u), x) < 1e-10);
      prev = u;
    }
    CHECK(mu.u_infinite());
  }
}

TEST_CASE("bounded U") {
  const auto mu = MuScheme::user([](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); }, false,
                                 [](double x) { return x / (1.0 + x); });
  CHECK_FALSE(mu.u_infinite());
  CHECK(mu.u_limit() == doctest::Approx(1.0));
  CHECK_THROWS_AS(mu.inverse_u(1.0), DomainError);
}

TEST_CASE("tabulated mu") {
  const auto mu = MuScheme::tabulated({0.0, 1.0, 2.0, 3.0, 4.0}, {1.0, 1.0, 1.0, 1.0, 1.0});
  CHECK(rel(mu.big_u(3.5), 3.5) < 1e-9);
  CHECK(mu.mu(10.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(MuScheme::tabulated({0.0, 1.0}, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(MuScheme::tabulated({0.0, 1.0, 2.0, 3.0}, {1.0, -1.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("V_n") {
  const WeightScheme one(MuScheme::constant_one(), NuScheme::constant_one());
  CHECK(big_v(10, one) == 10.0);
  const WeightScheme harm(MuScheme::constant_one(), NuScheme::shifted_power(1.0, 0.0));
  CHECK(rel(big_v(3, harm), 1.0 + 0.5 + 1.0 / 3.0) < 1e-15);
  const WeightScheme sp(MuScheme::constant_one(), NuScheme::shifted_power(0.5, 0.5));
  CHECK(rel(big_v(2, sp), std::pow(0.5, -0.5) + std::pow(1.5, -0.5)) < 1e-15);
  CHECK(rel(big_v(2, sp), 2.23071) < 1e-5);
  CHECK_THROWS_AS(big_v(0, one), DomainError);
}

TEST_CASE("V_n past the cache matches direct summation") {
  const WeightScheme sp(MuScheme::constant_one(), NuScheme::shifted_power(0.7, 0.3));
  CompensatedSum s;
  for (std::size_t n = 1; n <= 40000; ++n) {
    s += std::pow(n - 0.3, -0.7);
    if (n % 9973 == 0 || n == 40000) CHECK(rel(sp.big_v(n), s.value()) < 1e-13);
  }
}

TEST_CASE("V~_n") {
  CHECK(v_tilde(4, WeightScheme(MuScheme::constant_one(), NuScheme::constant_one().with_half())) == 3.5);
  CHECK(v_tilde(4, WeightScheme(MuScheme::constant_one(), NuScheme::constant_one().with_zero())) == 4.0);
  CHECK(v_tilde(1, WeightScheme(MuScheme::constant_one(), NuScheme::constant_one().with_constant(0.3))) ==
        doctest::Approx(0.7).epsilon(1e-15));
  CHECK_THROWS_AS(NuScheme::constant_one().with_constant(0.6), InvariantError);
  CHECK_THROWS_AS(NuScheme::constant_one().with_fraction(0.7), InvariantError);
  // a constant nu~ eventually exceeds nu_n / 2 for a decaying nu
  CHECK_THROWS_AS(WeightScheme(MuScheme::constant_one(), NuScheme::shifted_power(0.7, 0.3).with_constant(0.5)),
                  InvariantError);
  CHECK_THROWS_AS(WeightScheme(MuScheme::constant_one(), NuScheme::constant_one().with_list({0.1, 0.7})),
                  InvariantError);
}

TEST_CASE("V(y)") {
  const WeightScheme one(MuScheme::constant_one(), NuScheme::constant_one());
  CHECK(big_v_cont(3.25, one) == doctest::Approx(2.75).epsilon(1e-15));
  CHECK(big_v_cont(0.5, one) == 0.0);
  for (int n = 1; n <= 20; ++n) CHECK(big_v_cont(n + 0.5, one) == doctest::Approx(n).epsilon(1e-15));
  const WeightScheme harm(MuScheme::constant_one(), NuScheme::shifted_power(1.0, 0.0));
  CHECK(rel(big_v_cont(2.0, harm), 1.25) < 1e-15);
  CHECK_THROWS_AS(big_v_cont(0.4, one), DomainError);
}

TEST_CASE("V(y) step construction and ordering") {
  for (const auto& nu : {NuScheme::constant_one().with_half(), NuScheme::shifted_power(0.7, 0.3),
                         NuScheme::shifted_power(1.0, 0.5).with_fraction(0.5),
                         NuScheme::user_list({1.0, 3.0, 2.0, 1.5, 1.2}).with_zero()}) {
    const WeightScheme ws(MuScheme::constant_one(), nu);
    for (long long n = 1; n <= 1000; ++n) {
      const double vn = big_v(n, ws);
      CHECK(std::fabs(big_v_cont(n + 0.5, ws) - vn) <= 1e-12 * vn);
      const double vt = v_tilde(n, ws);
      CHECK(big_v_cont(static_cast<double>(n), ws) <= vt * (1 + 1e-15));
      CHECK(vt <= vn);
      CHECK(vt >= vn - ws.nu(n) / 2 - 1e-15 * vn);
    }
  }
}

TEST_CASE("smooth continuation agrees with the integers") {
  const WeightScheme ws(MuScheme::constant_one(), NuScheme::shifted_power(0.7, 0.3).with_fraction(0.25));
  const double from = std::ceil(ws.smooth_from());
  for (double t = from + 3; t < 5e7; t *= 7.0) {
    const auto n = static_cast<std::size_t>(std::floor(t));
    const auto w = ws.at(static_cast<double>(n) + 1e-9);
    CHECK(rel(w.v, ws.big_v(n)) < 1e-9);
    CHECK(rel(w.nu, ws.nu(n)) < 1e-8);
  }
}

TEST_CASE("detect_n0") {
  CHECK(detect_n0(WeightScheme(MuScheme::constant_one(), NuScheme::constant_one())) == 1);
  CHECK(detect_n0(WeightScheme(MuScheme::constant_one(), NuScheme::shifted_power(0.7, 0.3))) == 1);
  const WeightScheme user(MuScheme::constant_one(), NuScheme::user_list({1.0, 3.0, 2.0, 1.5, 1.2}));
  CHECK(detect_n0(user) == 2);
  CHECK(user.n0().value() == 2);
  CHECK_THROWS_AS(detect_n0(user, 1), DomainError);
}

TEST_CASE("detect_n0 without a monotone suffix") {
  std::vector<double> saw;
  for (int i = 0; i < 100; ++i) saw.push_back(i % 2 ? 1.0 : 2.0);
  saw.push_back(1.0);
  const WeightScheme ws(MuScheme::constant_one(), NuScheme::user_list(saw));
  CHECK_THROWS_AS(detect_n0(ws, 61), NotApplicableError);
}

}
