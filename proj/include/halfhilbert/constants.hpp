#pragma once

#include <optional>

#include "halfhilbert/numeric.hpp"
#include "halfhilbert/params.hpp"
#include "halfhilbert/specfun.hpp"

namespace halfhilbert::constants {

enum class Method { closed_form, quadrature };

const char* to_string(Method m);

struct ConstantResult {
  double value = 0.0;
  Method method = Method::closed_form;
  double error_estimate = 0.0;
};

/// Accuracy used by the quadrature routes unless overridden.
inline specfun::Accuracy quadrature_accuracy() { return {1e-10, 1e-30, 10'000}; }

/// k(sigma) = 2 Gamma(sigma/gamma) zeta(sigma/gamma, (alpha+rho)/(2 rho)) / (gamma (2 rho)^(sigma/gamma)).
ConstantResult k_closed(const KernelParams& params);

/// k(sigma) as the integral of h(t) t^(sigma-1) over (0, inf), independent of the zeta identity.
ConstantResult k_quadrature(const KernelParams& params, const specfun::Accuracy& acc = quadrature_accuracy());

/// K(sigma) = 2 Gamma(sigma/gamma) zeta(sigma/gamma) / (gamma (2 rho)^(sigma/gamma)), the alpha = rho constant.
double k_zeta(const KernelParams& params);

/// The special cases: alpha = rho gives K(sigma), which is pi^2/(6 sigma rho^2)
/// when gamma = sigma/2; alpha = 0 with gamma = sigma/2 gives pi^2/(2 sigma rho^2).
std::optional<ConstantResult> k_special(const KernelParams& params);

/// Integral of h(u) u^(s-1) over [lo, hi], 0 <= lo < hi <= inf, with s > gamma
/// when lo = 0. Tanh-sinh on the finite pieces, exp-sinh on [max(lo,1), inf).
Estimate kernel_mellin(const Kernel& h, double s, double lo, double hi, double rel_tol = 1e-12);

}  // namespace halfhilbert::constants
