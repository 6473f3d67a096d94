#include "halfhilbert/constants.hpp"

#include <cmath>
#include <limits>

#include "halfhilbert/errors.hpp"
#include "halfhilbert/quadrature.hpp"

namespace halfhilbert::constants {

const char* to_string(Method m) { return m == Method::closed_form ? "closed-form" : "quadrature"; }

namespace {

bool nearly(double a, double b) { return std::fabs(a - b) <= 4.0 * kEps * std::max(std::fabs(a), std::fabs(b)); }

double prefactor(const KernelParams& kp) {
  const double s = kp.sigma / kp.gamma_exp;
  return 2.0 * specfun::gamma(s) / (kp.gamma_exp * std::pow(2.0 * kp.rho, s));
}

}  // namespace

ConstantResult k_closed(const KernelParams& params) {
  params.require_valid();
  const double s = params.sigma / params.gamma_exp;
  const double a = (params.alpha + params.rho) / (2.0 * params.rho);
  const double v = prefactor(params) * specfun::hurwitz_zeta(s, a);
  if (!std::isfinite(v) || !(v > 0.0)) throw OverflowError("k(sigma) is not representable for these parameters");
  return {v, Method::closed_form, 1e-14 * v};
}

double k_zeta(const KernelParams& params) {
  params.require_valid();
  return prefactor(params) * specfun::riemann_zeta(params.sigma / params.gamma_exp);
}

std::optional<ConstantResult> k_special(const KernelParams& params) {
  params.require_valid();
  const bool half = nearly(params.gamma_exp, 0.5 * params.sigma);
  const double r2 = params.rho * params.rho;
  if (nearly(params.alpha, params.rho)) {
    if (half) {
      const double v = kPi * kPi / (6.0 * params.sigma * r2);
      return ConstantResult{v, Method::closed_form, 4.0 * kEps * v};
    }
    const double v = k_zeta(params);
    return ConstantResult{v, Method::closed_form, 1e-14 * v};
  }
  if (params.alpha == 0.0 && half) {
    const double v = kPi * kPi / (2.0 * params.sigma * r2);
    return ConstantResult{v, Method::closed_form, 4.0 * kEps * v};
  }
  return std::nullopt;
}

Estimate kernel_mellin(const Kernel& h, double s, double lo, double hi, double rel_tol) {
  if (!(lo >= 0.0) || !(hi > lo)) return {0.0, 0.0};
  const double g = h.gamma();
  CompensatedSum total;
  double err = 0.0;
  if (lo < 1.0) {
    const double b = std::min(hi, 1.0);
    Estimate e{};
    if (lo == 0.0) {
      const double kappa = s - g;
      if (!(kappa > 0.0)) throw DivergenceError("integral diverges at 0 unless s > gamma");
      // u = b s^(1/kappa): the integrand becomes u^gamma h(u), bounded at 0
      const double bg = std::pow(b, g);
      const double expo = g / kappa;
      auto f = [&](double v) { return h.envelope_of_w(bg * std::pow(v, expo)); };
      e = quad::tanh_sinh(f, 0.0, 1.0, rel_tol);
      const double scale = std::pow(b, kappa) / kappa;
      e.value *= scale;
      e.error *= scale;
    } else {
      auto f = [&](double u) { return h(u) * std::pow(u, s - 1.0); };
      e = quad::tanh_sinh(f, lo, b, rel_tol);
    }
    total += e.value;
    err += e.error;
  }
  if (hi > 1.0) {
    const double a = std::max(lo, 1.0);
    auto f = [&](double u) {
      const double w = std::pow(u, g);
      const double v = h.of_w(w);
      return v == 0.0 ? 0.0 : v * std::pow(u, s - 1.0);
    };
    const Estimate e = std::isinf(hi) ? quad::exp_sinh(f, a, rel_tol) : quad::tanh_sinh(f, a, hi, rel_tol);
    total += e.value;
    err += e.error;
  }
  return {total.value(), err};
}

ConstantResult k_quadrature(const KernelParams& params, const specfun::Accuracy& acc) {
  params.require_valid();
  acc.validate();
  const Kernel h(params);
  const Estimate e = kernel_mellin(h, params.sigma, 0.0, std::numeric_limits<double>::infinity(), acc.rel_tol);
  if (!std::isfinite(e.value) || e.error > std::max(acc.abs_tol, 10.0 * acc.rel_tol * std::fabs(e.value)))
    throw ConvergenceError("k(sigma) quadrature did not reach the requested tolerance", e.value, e.error);
  return {e.value, Method::quadrature, e.error};
}

}  // namespace halfhilbert::constants
