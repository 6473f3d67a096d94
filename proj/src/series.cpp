#include "halfhilbert/series.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "halfhilbert/errors.hpp"

namespace halfhilbert::series {

namespace {

struct Tail {
  double value;
  double error;
  double bound;
};

// Euler-Maclaurin remainder for sum_{m>n} G(m) with derivatives from
// integer-spaced central differences.
Tail em_tail(const std::function<double(double)>& g, std::size_t n, const std::array<double, 3>& last,
             const quad::Options& qopt) {
  const double t = static_cast<double>(n);
  Estimate b;
  try {
    b = quad::log_upper(g, t, qopt);
  } catch (const DivergenceError&) {
    throw ConvergenceError("series tail is not resolved within the representable range of the index", 0.0, std::numeric_limits<double>::infinity());
  }
  const double gm2 = last[0], gm1 = last[1], g0 = last[2];
  const double gp1 = g(t + 1.0), gp2 = g(t + 2.0);
  const double d1 = (gm2 - 8.0 * gm1 + 8.0 * gp1 - gp2) / 12.0;
  const double d3 = (gp2 - 2.0 * gp1 + 2.0 * gm1 - gm2) / 2.0;
  double value = b.value - 0.5 * g0 - d1 / 12.0 + d3 / 720.0;
  double error = b.error + std::fabs(d3) / 720.0 + 64.0 * kEps * (std::fabs(b.value) + std::fabs(g0));
  // For a decreasing summand the remainder lies in [B - g(n), B].
  if (g0 >= gp1 && (value > b.value + b.error || value < b.value - g0 - b.error)) {
    value = b.value - 0.5 * g0;
    error = 0.5 * g0 + b.error;
  }
  return {value, error, b.value};
}

}  // namespace

Result sum(const std::function<double(double)>& term, std::optional<double> smooth_from, const Options& opt,
           std::optional<std::size_t> length) {
  CompensatedSum s;
  std::array<double, 3> last{0.0, 0.0, 0.0};
  std::size_t next_check = 0;
  std::size_t small_run = 0;
  const std::size_t cap = length ? std::min(*length, opt.max_terms) : opt.max_terms;
  for (std::size_t n = 1;; ++n) {
    const double g = term(static_cast<double>(n));
    if (!std::isfinite(g)) throw DivergenceError("series term is not finite at n=" + std::to_string(n));
    s += g;
    last = {last[1], last[2], g};
    const double total = std::fabs(s.value());
    if (length && n >= *length) return {s.value(), 4.0 * kEps * total * std::sqrt(double(n)), n, 0.0};

    const bool smooth_ok = smooth_from && static_cast<double>(n) >= *smooth_from + 2.0 && n >= 3;
    if (smooth_ok && opt.tail_mode) {
      if (n >= opt.switch_index) {
        const Tail t = em_tail(term, n, last, opt.quad);
        return {s.value() + t.value, t.error + 4.0 * kEps * total * std::sqrt(double(n)), n, t.value};
      }
      if (std::fabs(g) <= opt.term_tol * total && n >= next_check) {
        const Tail t = em_tail(term, n, last, opt.quad);
        if (std::fabs(t.bound) <= opt.term_tol * total)
          return {s.value() + t.value, t.error + 4.0 * kEps * total * std::sqrt(double(n)), n, t.value};
        next_check = 2 * n;
      }
    } else if (!opt.tail_mode && n >= 8) {
      small_run = std::fabs(g) <= opt.term_tol * total ? small_run + 1 : 0;
      if (small_run >= 3) return {s.value(), std::fabs(g) * 3.0, n, 0.0};
    }
    if (n >= cap) {
      throw ConvergenceError("series did not converge within " + std::to_string(cap) + " terms", s.value(),
                             std::fabs(g) * double(n));
    }
  }
}

}  // namespace halfhilbert::series
