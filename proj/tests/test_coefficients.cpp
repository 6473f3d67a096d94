#include <cmath>
#include <numbers>

#include "doctest.h"
#include "halfhilbert/coefficients.hpp"
#include "halfhilbert/constants.hpp"
#include "halfhilbert/errors.hpp"
#include "halfhilbert/specfun.hpp"
#include "oracles.hpp"

using namespace halfhilbert;
using namespace halfhilbert::coefficients;
using oracle::rel;
using weights::MuScheme;
using weights::NuScheme;
using weights::WeightScheme;

namespace {

const KernelParams kBase{1.0, 1.0, 0.5, 1.0, 1};
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

WeightScheme unit() { return WeightScheme(MuScheme::constant_one(), NuScheme::constant_one()); }

// direct summation of the omega series for mu = nu = 1, nu~ = 0
double omega_oracle(double sigma, double x, const KernelParams& kp) {
  long double s = 0.0L;
  const double z = kp.delta == 1 ? x : 1.0 / x;
  for (int n = 1; n < 50'000'000; ++n) {
    const double u = z * n;
    const double t = specfun::kernel_h(u, kp) * std::pow(u, sigma) / n;
    s += t;
    if (t < 1e-19 * static_cast<double>(s)) break;
  }
  return static_cast<double>(s);
}

// composite Simpson for the integral of h over (0, 1) with gamma = 1/2, sigma = 1, via u = v^2
double theta_oracle() {
  const int m = 20000;
  auto f = [](double v) { return v == 0.0 ? 2.0 : 2.0 * v * specfun::csch(v) * std::exp(-v); };
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(static_cast<double>(i) / m);
  return s / (3.0 * m);
}

}  // namespace

TEST_SUITE("coefficients") {

TEST_CASE("omega at x=1 is below k and matches direct summation") {
  const auto ws = unit();
  const auto o = omega(1.0, 1.0, ws, kBase);
  CHECK(o.value > 0.0);
  CHECK(o.value < kPi2 / 6.0);
  CHECK(rel(o.value, omega_oracle(1.0, 1.0, kBase)) < 1e-11);
}

TEST_CASE("omega is close to k for small U") {
  const auto ws = unit();
  const double k = kPi2 / 6.0;
  const auto o = omega(1.0, 1e-3, ws, kBase);
  const auto th = theta(1.0, 1e-3, ws, kBase);
  CHECK(o.value < k);
  CHECK(o.value > k * th.complement);
  CHECK(rel(o.value, omega_oracle(1.0, 1e-3, kBase)) < 1e-9);
}

TEST_CASE("omega for delta=-1 matches direct summation") {
  auto kp = kBase;
  kp.delta = -1;
  kp.sigma = 0.8;
  kp.gamma_exp = 0.3;
  for (double x : {0.01, 1.0, 50.0}) CHECK(rel(omega(0.8, x, unit(), kp).value, omega_oracle(0.8, x, kp)) < 1e-9);
}

TEST_CASE("omega domain") {
  CHECK_THROWS_AS(omega(1.2, 1.0, unit(), kBase), DomainError);
  CHECK_THROWS_AS(omega(0.4, 1.0, unit(), kBase), DomainError);
  CHECK_THROWS_AS(omega(1.0, 0.0, unit(), kBase), DomainError);
  SeriesBudget b;
  b.max_terms = 5;
  CHECK_THROWS_AS(omega(1.0, 1.0, unit(), kBase, b), DomainError);
}

TEST_CASE("omega budget exhaustion") {
  SeriesBudget b;
  b.max_terms = 20;
  b.tail_mode = false;
  CHECK_THROWS_AS(omega(1.0, 1e-5, unit(), kBase, b), ConvergenceError);
}

TEST_CASE("varpi equals k when U is unbounded") {
  const double k = kPi2 / 6.0;
  for (double beta : {0.0, 0.5, 1.0}) {
    const WeightScheme ws(MuScheme::inverse_power(beta), NuScheme::constant_one());
    for (int d : {1, -1}) {
      auto kp = kBase;
      kp.delta = d;
      for (std::size_t n : {1, 3, 100}) {
        const auto v = varpi(1.0, n, ws, kp);
        CHECK(rel(v.value, k) < 1e-8);
        CHECK(rel(v.direct, v.value) < 1e-8);
      }
    }
  }
  // sigma above 1 is allowed here
  const KernelParams kp{1.0, 1.0, 0.5, 1.4, 1};
  CHECK(rel(varpi(1.4, 2, unit(), kp).value, constants::k_closed(kp).value) < 1e-8);
}

TEST_CASE("varpi is strictly below k when U is bounded") {
  const auto mu = MuScheme::user([](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); }, false,
                                 [](double x) { return x / (1.0 + x); });
  const WeightScheme ws(mu, NuScheme::constant_one());
  const double k = kPi2 / 6.0;
  for (std::size_t n : {1, 2, 10}) {
    const auto v = varpi(1.0, n, ws, kBase);
    // the substituted form is the integral over (0, V~_n)
    const double oracle = constants::kernel_mellin(Kernel(kBase), 1.0, 0.0, static_cast<double>(n)).value;
    CHECK(v.value < k);
    CHECK(rel(v.value, oracle) < 1e-10);
    CHECK(rel(v.direct, v.value) < 1e-8);
  }
  const auto r = run_checks("varpi-equality", ws, kBase, CheckPlan{{1.0}, 5});
  REQUIRE(r.size() == 1);
  CHECK(r[0].pass);
  CHECK(r[0].note.find("not applicable") != std::string::npos);
}

TEST_CASE("theta") {
  const auto ws = unit();
  const auto th = theta(1.0, 1.0, ws, kBase);
  CHECK(th.theta > 0.0);
  CHECK(th.theta < 1.0);
  CHECK(rel(th.theta, theta_oracle() / (kPi2 / 6.0)) < 1e-9);
  CHECK(kPi2 / 6.0 * (1.0 - th.theta) < omega(1.0, 1.0, ws, kBase).value);
  CHECK(th.theta <= th.bound);
  CHECK(th.n0 == 1);
  double prev = 1.0;
  for (double x : {1e-2, 1e-4, 1e-8, 1e-16}) {
    const double t = theta(1.0, x, ws, kBase).theta;
    CHECK(t > 0.0);
    CHECK(t < prev);
    prev = t;
  }
  CHECK(prev < 1e-7);
  // complement stays positive where theta rounds to one
  const auto far = theta(1.0, 1e4, ws, kBase);
  CHECK(far.complement > 0.0);
  CHECK(far.complement < 1e-50);
}

TEST_CASE("theta n0 override") {
  const auto ws = unit();
  const auto a = theta(1.0, 0.1, ws, kBase, {}, 3);
  CHECK(a.n0 == 3);
  CHECK(a.theta > theta(1.0, 0.1, ws, kBase).theta);
  const WeightScheme user(MuScheme::constant_one(), NuScheme::user_list({1.0, 3.0, 2.0, 1.5, 1.2}));
  CHECK_THROWS_AS(theta(1.0, 0.1, user, kBase, {}, 1), PreconditionError);
}

TEST_CASE("envelope L") {
  CHECK(envelope_L({1.0, 0.0, 0.5, 1.0, 1}) == doctest::Approx(1.0).epsilon(1e-9));
  const KernelParams kp{2.0, 2.0, 0.5, 1.0, 1};
  const double L = envelope_L(kp);
  CHECK(L >= 0.5 * (1 - 1e-6));
  const double u = 1e3;
  CHECK(std::pow(u, 0.5) * specfun::kernel_h(u, kp) < 1e-6 * L);
}

TEST_CASE("tail sums") {
  const auto ws = unit();
  auto t = tail_sum(1.0, ws);
  CHECK(rel(t.value, kPi2 / 6.0) < 1e-11);
  CHECK(t.lower == doctest::Approx(1.0));
  CHECK(t.upper == doctest::Approx(2.0));
  CHECK(t.contained);
  t = tail_sum(2.0, ws);
  CHECK(rel(t.value, 1.2020569031595943) < 1e-11);
  CHECK(t.lower == doctest::Approx(0.5));
  CHECK(t.upper == doctest::Approx(1.5));
  CHECK(t.contained);
  t = tail_sum(20.0, ws);
  CHECK(std::fabs(t.value - 1.0) < 1e-6);
  CHECK(t.contained);
  CHECK_THROWS_AS(tail_sum(0.0, ws), DomainError);
}

TEST_CASE("tail sums against a brute-force oracle") {
  const WeightScheme ws(MuScheme::constant_one(), NuScheme::shifted_power(0.7, 0.3));
  const double b = 1.0;
  long double s = 0.0L, v = 0.0L;
  for (int n = 1; n <= 1'000'000; ++n) {
    const long double nu = std::pow(n - 0.3L, -0.7L);
    v += nu;
    s += nu * std::pow(v, -1.0L - b);
  }
  // the remainder past N is below 1/V_N by comparison with the integral of v^-2
  const double tail = static_cast<double>(1.0L / v);
  const auto t = tail_sum(b, ws);
  CHECK(t.value > static_cast<double>(s));
  CHECK(t.value < static_cast<double>(s) + tail);
  CHECK(t.contained);
}

TEST_CASE("bound chain examples") {
  auto r = bracket_check([](double t) { return std::exp(-t); }, 1);
  CHECK(r.holds);
  CHECK(rel(r.integral_from_one, std::exp(-1.0)) < 1e-9);
  CHECK(rel(r.sum, 1.0 / (std::numbers::e - 1.0)) < 1e-9);
  CHECK(rel(r.integral_from_zero, 1.0) < 1e-9);

  r = bracket_check([](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); }, 1);
  CHECK(r.holds);
  CHECK(rel(r.integral_from_one, 0.5) < 1e-9);
  CHECK(rel(r.sum, kPi2 / 6.0 - 1.0) < 1e-9);
  CHECK(rel(r.integral_from_zero, 1.0) < 1e-9);

  const KernelParams kp{1.0, 1.0, 0.4, 0.8, 1};
  const Kernel h(kp);
  r = bracket_check([&](double t) { return h(t + 0.5) * std::pow(t + 0.5, -0.2); }, 1);
  CHECK(r.holds);
  CHECK(rel(r.integral_from_zero, constants::kernel_mellin(h, 0.8, 0.5, INFINITY).value) < 1e-9);
}

TEST_CASE("bound chain precondition") {
  CHECK_THROWS_AS(bracket_check([](double t) { return 1.0 + std::sin(t); }, 1), PreconditionError);
  CHECK_THROWS_AS(bracket_check([](double t) { return t < 3 ? 1.0 : std::exp(-t); }, 1), PreconditionError);
}

TEST_CASE("run_checks on a small plan") {
  CheckPlan plan;
  plan.x_grid = log_grid(1e-3, 1e3, 25);
  plan.n_max = 50;
  for (const char* id : {"unit", "shifted", "power"}) {
    const std::string s = id;
    const WeightScheme ws = s == "unit"      ? unit()
                            : s == "shifted" ? WeightScheme(MuScheme::constant_one(), NuScheme::constant_one().with_constant(0.3))
                                             : WeightScheme(MuScheme::constant_one(), NuScheme::shifted_power(0.7, 0.3));
    for (int d : {1, -1}) {
      auto kp = kBase;
      kp.delta = d;
      const auto r = run_checks("all", ws, kp, plan);
      CHECK(r.size() == check_ids().size());
      for (const auto& c : r) {
        CAPTURE(c.id);
        CAPTURE(s);
        CHECK(c.pass);
        CHECK(c.samples > 0);
      }
    }
  }
  CHECK_THROWS_AS(run_checks("nope", unit(), kBase, plan), DomainError);
  CHECK(run_checks("theta-bound", unit(), kBase, plan).size() == 1);
}

TEST_CASE("log grid") {
  const auto g = log_grid(1e-3, 1e3, 7);
  REQUIRE(g.size() == 7);
  CHECK(g.front() == 1e-3);
  CHECK(rel(g[3], 1.0) < 1e-15);
  CHECK(rel(g.back(), 1e3) < 1e-15);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), DomainError);
}

}
