#include <cmath>
#include <numbers>

#include "doctest.h"
#include "halfhilbert/constants.hpp"
#include "halfhilbert/errors.hpp"
#include "halfhilbert/sharpness.hpp"
#include "oracles.hpp"

using namespace halfhilbert;
using namespace halfhilbert::sharpness;
using oracle::rel;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

struct Fixture {
  lab::Configuration cfg = lab::preset("unit-weights");
  weights::WeightScheme ws = cfg.scheme();
  lab::Problem pb{cfg.params, &ws, {}};
};

}  // namespace

TEST_SUITE("sharpness") {

TEST_CASE("sigma tilde and the extremal pair") {
  const KernelParams kp{1.0, 1.0, 0.5, 1.0, 1};
  const auto two = ExponentPair::from_p(2.0);
  CHECK(sigma_tilde(0.1, two, kp) == doctest::Approx(0.95));
  auto [f, a] = extremal_pair(0.1, two, kp);
  CHECK(f.kind == lab::TestFunction::Kind::extremal);
  CHECK(f.s == doctest::Approx(1.05));
  CHECK(a.s == doctest::Approx(0.95));
  const auto half = ExponentPair::from_p(0.5);
  CHECK(sigma_tilde(0.1, half, kp) == doctest::Approx(1.2));
  std::tie(f, a) = extremal_pair(0.1, half, kp);
  CHECK(f.s == doctest::Approx(1.2));
  // a~ exponent sigma - eps/q - 1 with q = -1
  CHECK(a.s - 1.0 == doctest::Approx(1.0 - 0.1 / half.q - 1.0));
}

TEST_CASE("epsilon interval is open") {
  const KernelParams kp{1.0, 1.0, 0.5, 1.0, 1};
  const auto two = ExponentPair::from_p(2.0);
  CHECK(epsilon_bound(two, kp) == doctest::Approx(1.0));
  CHECK_THROWS_AS(sigma_tilde(1.0, two, kp), DomainError);
  CHECK_THROWS_AS(sigma_tilde(0.0, two, kp), DomainError);
  CHECK_THROWS_AS(extremal_pair(1.0, two, kp), DomainError);
  const auto half = ExponentPair::from_p(0.5);
  CHECK(epsilon_bound(half, kp) == doctest::Approx(0.25));
  CHECK_THROWS_AS(sigma_tilde(0.25, half, kp), DomainError);
  const auto neg = ExponentPair::from_p(-1.0);
  CHECK(epsilon_bound(neg, kp) == doctest::Approx(0.25));
  const auto g = clip_grid(default_grid(), neg, kp);
  CHECK(g == std::vector<double>{0.2, 0.1, 0.05, 0.025});
}

TEST_CASE("probe uses the closed-form function norm") {
  Fixture fx;
  const auto two = ExponentPair::from_p(2.0);
  const auto pr = probe(0.2, two, fx.pb);
  CHECK(rel(pr.norm_f, std::pow(0.2, -0.5)) < 1e-14);
  CHECK(rel(pr.norm_f, lab::norm_f(lab::TestFunction::extremal(1.1), two, fx.pb).value) < 1e-9);
  CHECK(rel(std::pow(pr.norm_a, 2.0), specfun::riemann_zeta(1.2)) < 1e-9);
  CHECK(rel(pr.ratio, pr.I_tilde / (pr.norm_f * pr.norm_a)) < 1e-12);
  CHECK(rel(pr.k_sigma_tilde, constants::k_closed({1.0, 1.0, 0.5, 0.9, 1}).value) < 1e-15);
}

TEST_CASE("forward sweep") {
  Fixture fx;
  const auto r = sweep(default_grid(), ExponentPair::from_p(2.0), fx.pb);
  REQUIRE(r.probes.size() == 5);
  const double k = kPi2 / 6.0;
  CHECK(r.k_sigma == doctest::Approx(k));
  for (std::size_t i = 0; i < r.probes.size(); ++i) {
    CHECK(r.probes[i].ratio < k);
    if (i) CHECK(r.probes[i].ratio > r.probes[i - 1].ratio);
  }
  CHECK(r.gap_nonincreasing);
  REQUIRE(r.limit);
  CHECK(std::fabs(r.limit->value - k) / k < 0.02);
}

TEST_CASE("k(sigma~) approaches k(sigma) along the grid") {
  Fixture fx;
  const auto r = sweep(default_grid(), ExponentPair::from_p(2.0), fx.pb);
  double prev = INFINITY;
  for (const auto& p : r.probes) {
    const double d = std::fabs(p.k_sigma_tilde - r.k_sigma);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("reverse sweeps") {
  Fixture fx;
  const double k = kPi2 / 6.0;
  for (double p : {-1.0, 0.5}) {
    const auto pq = ExponentPair::from_p(p);
    const auto r = reverse_sweep(clip_grid(default_grid(), pq, fx.cfg.params), pq, fx.pb);
    for (const auto& pr : r.probes) CHECK(pr.ratio > k);
    CHECK(r.gap_nonincreasing);
    REQUIRE(r.limit);
    CHECK(std::fabs(r.limit->value - k) / k < 0.02);
  }
}

TEST_CASE("single-point grid has no limit") {
  Fixture fx;
  const auto r = sweep({0.1}, ExponentPair::from_p(2.0), fx.pb);
  CHECK(r.probes.size() == 1);
  CHECK_FALSE(r.limit);
}

TEST_CASE("sweep preconditions") {
  Fixture fx;
  const auto two = ExponentPair::from_p(2.0);
  CHECK_THROWS_AS(sweep({0.1, 0.2}, two, fx.pb), DomainError);
  CHECK_THROWS_AS(sweep({}, two, fx.pb), DomainError);
  CHECK_THROWS_AS(sweep({1.5, 0.1}, two, fx.pb), DomainError);
  CHECK_THROWS_AS(sweep({0.1}, ExponentPair::from_p(0.5), fx.pb), PreconditionError);
  CHECK_THROWS_AS(reverse_sweep({0.1}, two, fx.pb), PreconditionError);
  const auto mu = weights::MuScheme::user([](double t) { return 1.0 / ((1 + t) * (1 + t)); }, false,
                                          [](double x) { return x / (1 + x); });
  const weights::WeightScheme bounded(mu, weights::NuScheme::constant_one());
  const lab::Problem pb{fx.cfg.params, &bounded, {}};
  CHECK_THROWS_AS(sweep({0.1}, two, pb), PreconditionError);
}

TEST_CASE("sweep is independent of the thread count") {
  Fixture fx;
  const auto pq = ExponentPair::from_p(4.0);
  const auto a = sweep({0.4, 0.2, 0.1}, pq, fx.pb, 1);
  const auto b = sweep({0.4, 0.2, 0.1}, pq, fx.pb, 3);
  for (std::size_t i = 0; i < a.probes.size(); ++i) CHECK(a.probes[i].ratio == b.probes[i].ratio);
}

TEST_CASE("richardson") {
  // exact for quadratics
  const auto l = richardson({0.4, 0.2, 0.1}, {3.0 - 0.4 + 0.16, 3.0 - 0.2 + 0.04, 3.0 - 0.1 + 0.01});
  REQUIRE(l);
  CHECK(l->value == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(l->error == doctest::Approx(0.02).epsilon(1e-10));
  CHECK_FALSE(richardson({0.2, 0.1}, {1.0, 2.0}));
  CHECK_THROWS_AS(richardson({0.2, 0.1}, {1.0}), DomainError);
}

}
