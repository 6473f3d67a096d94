#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "halfhilbert/params.hpp"
#include "halfhilbert/series.hpp"
#include "halfhilbert/specfun.hpp"
#include "halfhilbert/weights.hpp"

namespace halfhilbert::coefficients {

struct SeriesBudget {
  double term_tol = 1e-12;
  std::size_t max_terms = 10'000'000;
  bool tail_mode = true;

  void validate() const;
  series::Options options() const;
};

struct OmegaResult {
  double value = 0.0;
  double tail = 0.0;
  double error = 0.0;
  std::size_t terms = 0;
};

/// omega(sigma, x) = sum_n h(U^delta(x) V~_n) U^(delta sigma)(x) nu_n / V~_n^(1-sigma),
/// for sigma in (gamma, 1].
OmegaResult omega(double sigma_arg, double x, const weights::WeightScheme& scheme, const KernelParams& params,
                  const SeriesBudget& budget = {});

struct VarpiResult {
  /// Value of the substituted form.
  double value = 0.0;
  /// Value of the direct x-quadrature.
  double direct = 0.0;
  double error = 0.0;
};

/// varpi(sigma, n) = integral over x of h(U^delta(x) V~_n) V~_n^sigma mu(x) / U^(1-delta sigma)(x),
/// evaluated by direct x-quadrature and by the substitution u = U^delta(x) V~_n.
VarpiResult varpi(double sigma_arg, std::size_t n, const weights::WeightScheme& scheme, const KernelParams& params,
                  const specfun::Accuracy& acc = {1e-10, 1e-30, 10'000});

struct ThetaResult {
  double theta = 0.0;
  /// 1 - theta, computed without cancellation.
  double complement = 1.0;
  /// L (U^delta(x) V_n0)^(sigma-gamma) / (k(sigma) (sigma-gamma)).
  double bound = 0.0;
  double error = 0.0;
  std::size_t n0 = 1;
};

/// theta(sigma, x) = (1/k(sigma)) integral of h(u) u^(sigma-1) over (0, U^delta(x) V_n0).
/// n0 defaults to the detected monotonicity index and may only be raised.
ThetaResult theta(double sigma_arg, double x, const weights::WeightScheme& scheme, const KernelParams& params,
                  const specfun::Accuracy& acc = {1e-10, 1e-30, 10'000},
                  std::optional<std::size_t> n0_override = std::nullopt);

/// L = sup over u > 0 of u^gamma h(u), whose limit at 0+ is 1/rho.
double envelope_L(const KernelParams& params, const specfun::Accuracy& acc = {1e-6, 0.0, 10'000});

struct BracketedValue {
  double value = 0.0;
  double error = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool contained = false;
};

/// sum_n nu_n / V~_n^(1+b) with the bracket [1/(b V_n0^b), 1/(b V_n0^b) + sum_{n<=n0} nu_n / V~_n^(1+b)].
BracketedValue tail_sum(double b, const weights::WeightScheme& scheme, const SeriesBudget& budget = {});

struct ChainReport {
  double integral_from_one = 0.0;
  double sum = 0.0;
  double integral_from_zero = 0.0;
  double error = 0.0;
  bool holds = false;
};

/// Evaluates the chain integral_1^inf g < sum_{n>=1} g(n) < integral_0^inf g for a
/// positive decreasing g. Breakpoints mark kinks of g, if any.
ChainReport bracket_check(const std::function<double(double)>& g, std::size_t n0,
                          const specfun::Accuracy& acc = {1e-10, 1e-30, 10'000},
                          const std::vector<double>& breakpoints = {});

}  // namespace halfhilbert::coefficients

namespace halfhilbert::coefficients {

struct CheckPlan {
  std::vector<double> x_grid;
  std::size_t n_max = 1000;
  std::vector<double> tail_b{0.05, 0.2, 1.0, 2.0};
  double equality_tol = 1e-6;
  double consistency_tol = 1e-8;
};

struct CheckSummary {
  std::string id;
  std::size_t samples = 0;
  std::size_t failures = 0;
  /// Smallest relative margin seen; negative when a sample violates the bound.
  double worst_margin = 0.0;
  bool pass = true;
  std::string note;
};

/// Log-spaced grid of n points on [a, b].
std::vector<double> log_grid(double a, double b, std::size_t n);

/// Check ids: omega-upper, varpi-upper, varpi-equality, varpi-consistency,
/// theta-sandwich, theta-bound, tail-bracket; "all" runs every one.
std::vector<std::string> check_ids();
std::vector<CheckSummary> run_checks(const std::string& which, const weights::WeightScheme& scheme,
                                     const KernelParams& params, const CheckPlan& plan);

}  // namespace halfhilbert::coefficients
