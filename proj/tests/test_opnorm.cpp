#include <cmath>
#include <numbers>

#include "doctest.h"
#include "halfhilbert/errors.hpp"
#include "halfhilbert/lab.hpp"

using namespace halfhilbert;
using namespace halfhilbert::lab;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

struct Fixture {
  Configuration cfg = preset("unit-weights");
  weights::WeightScheme ws = cfg.scheme();
  Problem pb{cfg.params, &ws, {}};
};

}  // namespace

TEST_SUITE("opnorm") {

TEST_CASE("p=2 estimate is within 5% and below the ceiling") {
  Fixture fx;
  const double k = kPi2 / 6.0;
  const auto e = estimate_operator_norm(Operator::T1, ExponentPair::from_p(2.0), fx.pb);
  CHECK(e.k_sigma == doctest::Approx(k));
  CHECK(e.estimate <= k * (1 + 1e-6));
  CHECK(e.estimate >= 0.95 * k);
  CHECK(e.trace.size() == e.iterations + 1);
  for (std::size_t i = 1; i < e.trace.size(); ++i) CHECK(e.trace[i] >= e.trace[i - 1] * (1 - 1e-12));
  CHECK(e.function_cells > 512);
  CHECK(e.sequence_cells > 0);
}

TEST_CASE("zero iterations return the initial quotient") {
  Fixture fx;
  const auto e = estimate_operator_norm(Operator::T1, ExponentPair::from_p(2.0), fx.pb, {}, 0);
  CHECK(e.iterations == 0);
  REQUIRE(e.trace.size() == 1);
  CHECK(e.estimate == e.trace[0]);
  CHECK(e.estimate > 0.0);
  CHECK(e.estimate <= e.k_sigma);
}

TEST_CASE("T2 ordering and other exponents") {
  Fixture fx;
  Discretization d;
  d.grid_points = 128;
  for (double p : {1.5, 4.0}) {
    const auto pq = ExponentPair::from_p(p);
    const auto a = estimate_operator_norm(Operator::T1, pq, fx.pb, d, 20);
    const auto b = estimate_operator_norm(Operator::T2, pq, fx.pb, d, 20);
    CHECK(a.estimate <= a.k_sigma * (1 + 1e-6));
    CHECK(b.estimate <= b.k_sigma * (1 + 1e-6));
    CHECK(a.estimate > 0.9 * a.k_sigma);
    CHECK(b.estimate > 0.9 * b.k_sigma);
  }
}

TEST_CASE("other configurations stay below k") {
  Discretization d;
  d.grid_points = 128;
  for (const char* id : {"unit-weights-shifted", "zeta-constant", "csch-square"}) {
    const auto c = preset(id);
    const auto ws = c.scheme();
    const Problem pb{c.params, &ws, {}};
    const auto e = estimate_operator_norm(Operator::T1, ExponentPair::from_p(2.0), pb, d, 20);
    CAPTURE(id);
    CHECK(e.estimate <= e.k_sigma * (1 + 1e-6));
    CHECK(e.estimate > 0.8 * e.k_sigma);
  }
}

TEST_CASE("preconditions") {
  Fixture fx;
  CHECK_THROWS_AS(estimate_operator_norm(Operator::T1, ExponentPair::from_p(0.5), fx.pb), PreconditionError);
  CHECK_THROWS_AS(estimate_operator_norm(Operator::T1, ExponentPair::from_p(-1.0), fx.pb), PreconditionError);
  Discretization bad;
  bad.grid_points = 1;
  CHECK_THROWS_AS(estimate_operator_norm(Operator::T1, ExponentPair::from_p(2.0), fx.pb, bad), DomainError);
  const auto mu = weights::MuScheme::user([](double t) { return 1.0 / ((1 + t) * (1 + t)); }, false,
                                          [](double x) { return x / (1 + x); });
  const weights::WeightScheme bounded(mu, weights::NuScheme::constant_one());
  const Problem pb{fx.cfg.params, &bounded, {}};
  CHECK_THROWS_AS(estimate_operator_norm(Operator::T1, ExponentPair::from_p(2.0), pb), PreconditionError);
}

}
