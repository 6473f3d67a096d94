#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace halfhilbert::weights {

/// Continuous weight mu on (0, inf) and its primitive U.
class MuScheme {
 public:
  enum class Family { constant_one, inverse_power, user };

  static MuScheme constant_one();
  /// mu(t) = (1+t)^-beta, beta in [0, 1].
  static MuScheme inverse_power(double beta);
  /// Arbitrary positive continuous mu. U falls back to adaptive quadrature
  /// unless a primitive is supplied; u_infinite declares whether U(inf) = inf.
  static MuScheme user(std::function<double(double)> mu, bool u_infinite,
                       std::function<double(double)> big_u = {}, std::string label = "user");
  /// Monotone cubic interpolation through (xs, ys), held constant outside the table.
  static MuScheme tabulated(std::vector<double> xs, std::vector<double> ys);

  Family family() const { return family_; }
  double beta() const { return beta_; }
  const std::string& label() const { return label_; }

  double mu(double t) const;
  double big_u(double x) const;
  /// The x >= 0 with U(x) = w; w must lie in [0, U(inf)).
  double inverse_u(double w) const;
  bool u_infinite() const { return u_infinite_; }
  /// U(inf): infinity when U diverges.
  double u_limit() const;

 private:
  Family family_ = Family::constant_one;
  double beta_ = 0.0;
  bool u_infinite_ = true;
  std::function<double(double)> mu_fn_, u_fn_;
  std::string label_ = "constant-one";
  double u_limit_ = 0.0;
};

/// The sequence nu_n > 0 together with the rule for nu~_n in [0, nu_n / 2].
struct NuScheme {
  enum class Family { constant_one, shifted_power, user_list };
  enum class Tilde { zero, half, constant, fraction, user_list };

  Family family = Family::constant_one;
  /// nu_n = (n - tau)^-beta for shifted_power, and the continuation past a user list.
  double beta = 0.0;
  double tau = 0.0;
  std::vector<double> values;

  Tilde tilde = Tilde::zero;
  /// Constant value or fraction of nu_n, depending on the rule.
  double tilde_value = 0.0;
  std::vector<double> tilde_values;

  static NuScheme constant_one();
  static NuScheme shifted_power(double beta, double tau);
  static NuScheme user_list(std::vector<double> values, double tail_beta = 1.0, double tail_tau = 0.0);

  NuScheme& with_zero();
  NuScheme& with_half();
  NuScheme& with_constant(double t);
  NuScheme& with_fraction(double lambda);
  NuScheme& with_list(std::vector<double> t);

  std::string label() const;
};

/// nu, V and V~ at a (possibly non-integer) index.
struct WeightPoint {
  double nu;
  double v;
  double v_tilde;
};

/// Immutable weight structure (mu, nu, nu~, n0). Prefix sums are precomputed
/// with compensated summation on construction; indices past the cache are
/// summed on demand up to the horizon and taken from the smooth continuation
/// beyond it.
class WeightScheme {
 public:
  WeightScheme(MuScheme mu, NuScheme nu, std::size_t n0_scan_limit = 10'000, std::size_t horizon = 10'000'000);

  const MuScheme& mu() const { return mu_; }
  const NuScheme& nu_scheme() const { return nu_; }
  std::optional<std::size_t> n0() const { return n0_; }
  bool u_infinite() const { return mu_.u_infinite(); }
  bool v_infinite() const { return true; }

  double nu(std::size_t n) const;
  double nu_tilde(std::size_t n) const;
  double big_v(std::size_t n) const;
  double v_tilde(std::size_t n) const;

  /// Exact values at integers; smooth continuation for real t >= smooth_from().
  WeightPoint at(double t) const;
  /// First index from which at() accepts real arguments.
  double smooth_from() const { return smooth_from_; }
  std::string label() const;

 private:
  double nu_raw(std::size_t n) const;
  double nu_tilde_raw(std::size_t n, double nu_n) const;
  double nu_smooth(double t) const;
  double v_smooth(double t) const;
  double tilde_smooth(double t, double nu_t) const;
  double tail_primitive(double t) const;

  MuScheme mu_;
  NuScheme nu_;
  std::optional<std::size_t> n0_;
  std::size_t horizon_;
  std::vector<double> prefix_;  // prefix_[n] = V_n, prefix_[0] = 0
  double smooth_from_ = 1.0;
  double anchor_ = 0.0;         // index where the smooth continuation is pinned
  double anchor_shift_ = 0.0;   // V(anchor) - P(anchor)
};

double big_u(double x, const WeightScheme& scheme);
double big_v(long long n, const WeightScheme& scheme);
double v_tilde(long long n, const WeightScheme& scheme);
/// V(y) = integral of the step function nu(t) = nu_n on (n-1/2, n+1/2] from 1/2 to y.
double big_v_cont(double y, const WeightScheme& scheme);
/// Smallest n0 <= scan_limit with nu nonincreasing on [n0, scan_limit].
std::size_t detect_n0(const WeightScheme& scheme, std::size_t scan_limit = 10'000);

}  // namespace halfhilbert::weights
