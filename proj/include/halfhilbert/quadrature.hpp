#pragma once

#include <functional>
#include <vector>

#include "halfhilbert/numeric.hpp"

namespace halfhilbert::quad {

using RealFn = std::function<double(double)>;

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  /// Maximum number of Gauss-Kronrod segments per panel.
  int max_segments = 400;
  /// Largest panel width in ln x for the semi-infinite sweeps.
  double max_panel = 12.0;
  /// Semi-infinite sweeps stop at these abscissae and close the remainder
  /// with an exponential-in-ln-x tail estimate.
  double x_min = 1e-300;
  double x_max = 1e300;
};

/// Globally adaptive 15-point Gauss-Kronrod on [a, b] in the linear variable.
Estimate gauss_kronrod(const RealFn& f, double a, double b, const Options& opt = {});

/// Integral of f over [a, b] with 0 < a < b, computed in t = ln x on unit panels.
Estimate log_interval(const RealFn& f, double a, double b, const Options& opt = {});

/// Integral of f over [a, inf). The sweep runs outward in ln x and stops once
/// an exponential closure of the remainder is negligible.
Estimate log_upper(const RealFn& f, double a, const Options& opt = {});

/// Integral of f over (0, b].
Estimate log_lower(const RealFn& f, double b, const Options& opt = {});

/// Integral of f over (0, inf) split at the given positive breakpoints.
Estimate half_line(const RealFn& f, std::vector<double> breakpoints, const Options& opt = {});

/// Double-exponential rules (Boost.Math), used where an independent scheme is wanted.
Estimate tanh_sinh(const RealFn& f, double a, double b, double rel_tol);
Estimate exp_sinh(const RealFn& f, double a, double rel_tol);

}  // namespace halfhilbert::quad
