#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "halfhilbert/params.hpp"

namespace halfhilbert::specfun {

struct Accuracy {
  double rel_tol = 1e-15;
  double abs_tol = 0.0;
  std::size_t max_terms = 10'000;

  void validate() const;
};

struct FlaggedValue {
  double value = 0.0;
  bool underflow = false;
};

/// Hyperbolic cosecant 2 / (e^u - e^-u) for u > 0. Returns 0 for u > 710.
double csch(double u);
FlaggedValue csch_flagged(double u);

/// Gamma function for 0 < y <= 171 (Lanczos approximation, g = 607/128).
double gamma(double y);

/// Hurwitz zeta sum_{k>=0} (k+a)^-s for s > 1, 0 < a <= 1, by Euler-Maclaurin
/// summation with Bernoulli corrections through B_12.
double hurwitz_zeta(double s, double a, const Accuracy& acc = {});

/// Riemann zeta, the a = 1 case of hurwitz_zeta.
double riemann_zeta(double s, const Accuracy& acc = {});

/// h(t) = csch(rho t^gamma) / exp(alpha t^gamma).
double kernel_h(double t, const KernelParams& params);

enum class Check { holds, violated, insufficient_points };

const char* to_string(Check c);

struct ShapeViolation {
  std::string condition;
  double t = 0.0;
  double value = 0.0;
};

struct ShapeReport {
  Check positive = Check::holds;
  Check decreasing = Check::holds;
  Check convex = Check::holds;
  std::vector<ShapeViolation> violations;
};

/// Sign checks of h, h' and h'' over an increasing grid. Grid divided
/// differences are combined with central differences at relative step 1e-5.
ShapeReport kernel_shape_report(const KernelParams& params, const std::vector<double>& grid);

}  // namespace halfhilbert::specfun
