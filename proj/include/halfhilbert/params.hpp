#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace halfhilbert {

/// Kernel and weight exponents (rho, alpha, gamma, sigma, delta).
///
/// delta does not enter the constant k(sigma); it is carried because every
/// weighted quantity downstream depends on it.
struct KernelParams {
  double rho = 1.0;
  double alpha = 1.0;
  double gamma_exp = 0.5;
  double sigma = 1.0;
  int delta = 1;

  /// Constraints needed for the kernel and the constant: rho > 0,
  /// 0 <= alpha <= rho, 0 < gamma < sigma, delta in {-1, 1}.
  std::vector<std::string> violations() const;
  /// Additionally requires sigma <= 1, as the weight bounds and the theorems do.
  std::vector<std::string> theorem_violations() const;
  /// Throws DomainError listing every violated constraint.
  void require_valid() const;
  void require_theorem_regime() const;
};

enum class Regime { p_gt_1, p_lt_0, p_in_01 };

const char* to_string(Regime r);

/// Conjugate exponents with q = p / (p - 1).
struct ExponentPair {
  double p = 2.0;
  double q = 2.0;
  Regime regime = Regime::p_gt_1;

  static ExponentPair from_p(double p);
};

/// Precomputed kernel h(t) = csch(rho t^gamma) exp(-alpha t^gamma).
class Kernel {
 public:
  explicit Kernel(const KernelParams& kp)
      : rho_(kp.rho), decay_(kp.alpha + kp.rho), gamma_(kp.gamma_exp) {}

  /// h(t) for t > 0, evaluated as 2 exp(-(alpha+rho) w) / (1 - exp(-2 rho w)), w = t^gamma.
  double operator()(double t) const noexcept {
    const double w = std::pow(t, gamma_);
    return of_w(w);
  }
  /// h as a function of w = t^gamma.
  double of_w(double w) const noexcept {
    return 2.0 * std::exp(-decay_ * w) / -std::expm1(-2.0 * rho_ * w);
  }
  /// t^gamma h(t) as a function of w = t^gamma, with the limit 1/rho at w = 0.
  double envelope_of_w(double w) const noexcept {
    if (w == 0.0) return 1.0 / rho_;
    const double x = 2.0 * rho_ * w;
    // w / (1 - e^{-x}) written to stay accurate for tiny x
    return 2.0 * w * std::exp(-decay_ * w) / -std::expm1(-x);
  }
  double gamma() const noexcept { return gamma_; }
  double rho() const noexcept { return rho_; }
  double decay() const noexcept { return decay_; }

 private:
  double rho_, decay_, gamma_;
};

}  // namespace halfhilbert
