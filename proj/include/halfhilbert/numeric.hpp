#pragma once

#include <cmath>
#include <limits>

namespace halfhilbert {

/// Neumaier's variant of compensated summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// A computed quantity together with an absolute error estimate.
struct Estimate {
  double value = 0.0;
  double error = 0.0;

  double rel_error() const noexcept {
    if (value == 0.0) return error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return error / std::fabs(value);
  }
};

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// exp(v) with the convention that -inf maps to 0.
inline double safe_exp(double v) noexcept { return v == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(v); }

}  // namespace halfhilbert
