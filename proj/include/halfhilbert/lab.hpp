#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "halfhilbert/numeric.hpp"
#include "halfhilbert/params.hpp"
#include "halfhilbert/weights.hpp"

namespace halfhilbert::lab {

struct Accuracy {
  double quad_rel_tol = 1e-10;
  double term_tol = 1e-12;
  std::size_t max_terms = 10'000'000;
  bool tail_mode = true;
};

/// A nonnegative function on (0, inf). With z = U^delta(x) the presets are
///   extremal   (mu/U) z^s            on {x : 0 < x^delta <= 1}, zero elsewhere
///   damped     (mu/U) z^s e^{-c z}
///   two_slope  (mu/U) z^s on x^delta <= 1, continued as a multiple of (mu/U) z^s2
/// plus tabulated values (log-log interpolation, zero off the table) and callables.
struct TestFunction {
  enum class Kind { zero, extremal, damped, two_slope, of_u, tabulated, callable };
  Kind kind = Kind::zero;
  double s = 0.0;
  double s2 = 0.0;
  double c = 0.0;
  std::vector<double> xs, ys;
  std::function<double(double)> fn;
  double support_lo = 0.0;
  double support_hi = std::numeric_limits<double>::infinity();
  std::vector<double> breakpoints;

  static TestFunction zero();
  static TestFunction extremal(double s);
  static TestFunction damped(double s, double c);
  static TestFunction two_slope(double s_low, double s_high);
  /// f(x) = mu(x) g(U(x)); breakpoints are given in u.
  static TestFunction of_u(std::function<double(double)> g, std::vector<double> u_breakpoints = {});
  static TestFunction tabulated(std::vector<double> xs, std::vector<double> ys);
  static TestFunction callable(std::function<double(double)> f, std::vector<double> breakpoints = {});
  std::string label() const;
};

/// A nonnegative sequence. Presets: extremal V~_n^(s-1) nu_n, damped
/// V~_n^(s-1) nu_n e^{-c V~_n}; a finite user list (zero past its end); or a
/// callable a(t), smooth for t >= smooth_from when that is set.
struct TestSequence {
  enum class Kind { zero, extremal, damped, list, callable };
  Kind kind = Kind::zero;
  double s = 0.0;
  double c = 0.0;
  std::vector<double> values;
  std::function<double(double)> fn;
  std::optional<double> smooth_from;

  static TestSequence zero();
  static TestSequence extremal(double s);
  static TestSequence damped(double s, double c);
  static TestSequence list(std::vector<double> values);
  static TestSequence callable(std::function<double(double)> a, std::optional<double> smooth_from);
  std::string label() const;
};

struct Problem {
  KernelParams params;
  const weights::WeightScheme* scheme;
  Accuracy acc;
};

// ------------------------------------------------------------------ norms

/// ||f||_{p,Phi} = (integral Phi f^p)^(1/p), Phi = U^(p(1-delta sigma)-1) / mu^(p-1).
Estimate norm_f(const TestFunction& f, const ExponentPair& pq, const Problem& pb);
/// The same with Phi multiplied by 1 - theta(sigma, x).
Estimate norm_f_theta(const TestFunction& f, const ExponentPair& pq, const Problem& pb);
/// ||a||_{q,Psi~} = (sum Psi~(n) a_n^q)^(1/q), Psi~(n) = V~_n^(q(1-sigma)-1) / nu_n^(q-1).
Estimate norm_a(const TestSequence& a, const ExponentPair& pq, const Problem& pb);

// ------------------------------------------------------- bilinear quantities

enum class Order { integral_outer, series_outer };

/// I = sum_n integral h(U^delta(x) V~_n) a_n f(x) dx.
Estimate bilinear_I(const TestFunction& f, const TestSequence& a, const Problem& pb,
                    Order order = Order::integral_outer);
/// J1 = (sum_n nu_n V~_n^(p sigma - 1) c_n^p)^(1/p), c_n = integral h(U^delta(x) V~_n) f(x) dx.
Estimate j1(const TestFunction& f, const ExponentPair& pq, const Problem& pb);
/// J2 = (integral mu U^(q delta sigma - 1) S^q dx)^(1/q), S(x) = sum_n h(U^delta(x) V~_n) a_n.
/// Throws DivergenceError for q<0; use j_theta there.
Estimate j2(const TestSequence& a, const ExponentPair& pq, const Problem& pb);
/// J = (integral (1-theta)^(1-q) mu U^(q delta sigma - 1) S^q dx)^(1/q), for 0 < p < 1.
Estimate j_theta(const TestSequence& a, const ExponentPair& pq, const Problem& pb);

/// c_1..c_count of T1 f.
std::vector<double> apply_T1(const TestFunction& f, const Problem& pb, std::size_t count);
/// (T2 a)(x) = S(x) at each grid point.
std::vector<double> apply_T2(const TestSequence& a, const Problem& pb, const std::vector<double>& grid);
/// (T1 f, a) = sum a_n c_n.
Estimate inner_T1(const TestFunction& f, const TestSequence& a, const Problem& pb);
/// (T2 a, f) = integral S f dx.
Estimate inner_T2(const TestSequence& a, const TestFunction& f, const Problem& pb);

// ------------------------------------------------------------ verification

struct VerificationReport {
  std::string id;
  std::string regime;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::string direction;
  bool pass = false;
  double budget = 0.0;
};

/// Pass rule: margin = (rhs - lhs)/rhs must clear the budget in the stated direction.
VerificationReport make_report(std::string id, Regime regime, const Estimate& lhs, const Estimate& rhs,
                               const std::string& direction);

/// The three inequalities of the regime and the two Hoelder-chain checks.
std::vector<VerificationReport> verify(const ExponentPair& pq, const TestFunction& f, const TestSequence& a,
                                       const Problem& pb);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_diff = 0.0;
};

/// J1^p against ||a*||^q for a*_n = nu_n V~_n^(p sigma - 1) c_n^(p-1).
IdentityCheck j1_identity(const TestFunction& f, const ExponentPair& pq, const Problem& pb);
/// J2^q against ||f*||^p for f*(x) = mu U^(q delta sigma - 1) S^(q-1). For q<0 both sides carry
/// the theta weight and f* gains the factor (1-theta)^(-q/p).
IdentityCheck j2_identity(const TestSequence& a, const ExponentPair& pq, const Problem& pb);

/// Checks the analytic finiteness conditions of a preset in the given regime and
/// throws DivergenceError when a norm would be infinite.
void validate_function(const TestFunction& f, const ExponentPair& pq, const Problem& pb);
void validate_sequence(const TestSequence& a, const ExponentPair& pq, const Problem& pb);
/// Joint finiteness of the bilinear form near z = 0.
void validate_pair(const TestFunction& f, const TestSequence& a, const Problem& pb);

// ----------------------------------------------------------------- presets

struct Configuration {
  std::string id;
  std::string description;
  KernelParams params;
  weights::MuScheme mu;
  weights::NuScheme nu;

  weights::WeightScheme scheme() const { return weights::WeightScheme(mu, nu); }
};

/// Named particular cases. Unknown ids raise DomainError.
Configuration preset(const std::string& id);
std::vector<std::string> preset_ids();

/// Regime-appropriate test pairs: "extremal", "damped", "zero-sequence", "zero-function".
std::pair<TestFunction, TestSequence> preset_pair(const std::string& name, const ExponentPair& pq,
                                                  const KernelParams& params);
std::vector<std::string> pair_ids();

// -------------------------------------------------------- operator norm

struct Discretization {
  /// Dense log grid of points on [x_lo, x_hi], mapped through U.
  std::size_t grid_points = 512;
  double x_lo = 1e-4;
  double x_hi = 1e4;
  /// The grid continues geometrically by this factor beyond both ends.
  double extension = 1e8;
  /// Sequence indices handled one by one, then in exact geometric bins up to n_exact.
  std::size_t n_single = 256;
  std::size_t n_exact = 10'000;
  double bin_ratio = 1.01;
  /// Bins beyond n_exact up to n_exact * extension use a continuous approximation.
  double tail_bin_ratio = 1.02;
};

enum class Operator { T1, T2 };

struct OperatorNormEstimate {
  double estimate = 0.0;
  double k_sigma = 0.0;
  std::vector<double> trace;
  std::size_t iterations = 0;
  std::size_t function_cells = 0;
  std::size_t sequence_cells = 0;
};

/// Lower bound for ||T1|| = ||T2|| by alternating maximization of
/// (T1 f, a)/(||f|| ||a||) over cell-wise extremal-shaped f and a.
OperatorNormEstimate estimate_operator_norm(Operator which, const ExponentPair& pq, const Problem& pb,
                                            const Discretization& disc = {}, std::size_t iters = 60);

}  // namespace halfhilbert::lab
