#pragma once

#include <cmath>
#include <cstddef>

namespace oracle {

inline double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

struct Bracketed {
  double value;
  double lower;
  double upper;
};

/// sum_{k>=0} (k+a)^-s from n direct terms (summed smallest first) and the
/// integral tail, bracketed by [int_N, int_N + (N+a)^-s].
inline Bracketed hurwitz(double s, double a, std::size_t n = 1'000'000) {
  long double sum = 0.0L;
  for (std::size_t k = n; k-- > 0;) sum += std::pow(static_cast<long double>(k) + a, -static_cast<long double>(s));
  const long double x = static_cast<long double>(n) + a;
  const long double lower = std::pow(x, 1.0L - s) / (s - 1.0L);
  const long double head = std::pow(x, -static_cast<long double>(s));
  // Euler-Maclaurin midpoint of the bracket
  const long double tail = lower + 0.5L * head + s * std::pow(x, -static_cast<long double>(s) - 1.0L) / 12.0L;
  return {static_cast<double>(sum + tail), static_cast<double>(sum + lower), static_cast<double>(sum + lower + head)};
}

}  // namespace oracle
