#include "halfhilbert/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "halfhilbert/errors.hpp"
#include "halfhilbert/numeric.hpp"

namespace halfhilbert::specfun {

void Accuracy::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("require rel_tol>0");
  if (!(abs_tol >= 0.0)) throw DomainError("require abs_tol>=0");
  if (max_terms < 1) throw DomainError("require max_terms>=1");
}

FlaggedValue csch_flagged(double u) {
  if (!std::isfinite(u) || !(u > 0.0)) throw DomainError("csch requires a positive finite argument");
  if (u > 710.0) return {0.0, true};
  return {2.0 * std::exp(-u) / -std::expm1(-2.0 * u), false};
}

double csch(double u) { return csch_flagged(u).value; }

namespace {

constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5};

double lanczos_gamma(double y) {
  // Gamma(y) for y >= 0.5
  const double z = y - 1.0;
  double a = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) a += kLanczos[k] / (z + static_cast<double>(k));
  const double t = z + kLanczosG + 0.5;
  // t^(z+1/2) split in two factors so that y near 171 does not overflow
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * a;
}

}  // namespace

double gamma(double y) {
  if (!std::isfinite(y) && y > 0.0) throw OverflowError("gamma overflows for y>171");
  if (!(y > 0.0)) throw DomainError("gamma requires y>0");
  if (y > 171.0) throw OverflowError("gamma overflows for y>171");
  if (y < 0.5) return lanczos_gamma(y + 1.0) / y;
  return lanczos_gamma(y);
}

double hurwitz_zeta(double s, double a, const Accuracy& acc) {
  acc.validate();
  if (!std::isfinite(s) || !(s > 1.0)) throw DomainError("hurwitz_zeta requires s>1");
  if (!std::isfinite(a) || !(a > 0.0) || !(a <= 1.0)) throw DomainError("hurwitz_zeta requires 0<a<=1");

  // Smallest M with (M+a)^(1-s)/(s-1) below rel_tol/10, within [10, cap].
  const double cap = static_cast<double>(std::min<std::size_t>(acc.max_terms, 10'000));
  const double need = std::pow((s - 1.0) * acc.rel_tol / 10.0, 1.0 / (1.0 - s)) - a;
  const double m_real = std::clamp(std::ceil(need), std::min(10.0, cap), cap);
  const auto m = static_cast<std::size_t>(m_real);

  CompensatedSum sum;
  for (std::size_t k = m; k-- > 0;) sum += std::pow(static_cast<double>(k) + a, -s);

  const double x = m_real + a;
  const double xs = std::pow(x, -s);
  CompensatedSum tail;
  tail += x * xs / (s - 1.0);
  tail += 0.5 * xs;
  // B_{2j}/(2j)!, j = 1..6
  constexpr std::array<double, 6> kB = {1.0 / 12.0,         -1.0 / 720.0,        1.0 / 30240.0,
                                        -1.0 / 1209600.0,   1.0 / 47900160.0,    -691.0 / 1307674368000.0};
  double rising = s;  // s (s+1) ... (s+2j-2)
  double power = xs / x;
  for (std::size_t j = 0; j < kB.size(); ++j) {
    tail += kB[j] * rising * power;
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    power /= x * x;
  }
  sum += tail.value();
  return sum.value();
}

double riemann_zeta(double s, const Accuracy& acc) {
  if (!std::isfinite(s) || !(s > 1.0)) throw DomainError("riemann_zeta requires s>1");
  return hurwitz_zeta(s, 1.0, acc);
}

double kernel_h(double t, const KernelParams& params) {
  if (!std::isfinite(t) || !(t > 0.0)) throw DomainError("kernel_h requires t>0");
  params.require_valid();
  return Kernel(params)(t);
}

const char* to_string(Check c) {
  switch (c) {
    case Check::holds: return "holds";
    case Check::violated: return "violated";
    case Check::insufficient_points: return "insufficient points";
  }
  return "?";
}

ShapeReport kernel_shape_report(const KernelParams& params, const std::vector<double>& grid) {
  auto v = params.theorem_violations();
  if (!v.empty()) {
    std::string msg = "kernel shape facts need 0<gamma<sigma<=1, 0<=alpha<=rho:";
    for (const auto& s : v) msg += " " + s;
    throw PreconditionError(msg);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw DomainError("grid points must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("grid must be strictly increasing");
  }
  const Kernel h(params);
  ShapeReport rep;
  std::vector<double> hv(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    hv[i] = h(grid[i]);
    if (!(hv[i] > 0.0)) {
      rep.positive = Check::violated;
      rep.violations.push_back({"h>0", grid[i], hv[i]});
    }
  }
  if (grid.size() < 2) rep.decreasing = Check::insufficient_points;
  if (grid.size() < 3) rep.convex = Check::insufficient_points;

  auto flag = [&](Check& c, const char* what, double t, double val) {
    c = Check::violated;
    rep.violations.push_back({what, t, val});
  };
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double d = (hv[i + 1] - hv[i]) / (grid[i + 1] - grid[i]);
    if (!(d < 0.0) && !(hv[i] == 0.0 && hv[i + 1] == 0.0)) flag(rep.decreasing, "h'<0", grid[i], d);
  }
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double d1 = (hv[i] - hv[i - 1]) / (grid[i] - grid[i - 1]);
    const double d2 = (hv[i + 1] - hv[i]) / (grid[i + 1] - grid[i]);
    const double dd = (d2 - d1) / (grid[i + 1] - grid[i - 1]);
    if (!(dd > 0.0) && d1 != 0.0) flag(rep.convex, "h''>0", grid[i], dd);
  }
  if (grid.size() >= 3) {
    constexpr double eta = 1e-5;
    for (double t : grid) {
      const double lo = h(t * (1.0 - eta)), mid = h(t), hi = h(t * (1.0 + eta));
      if (mid == 0.0) continue;
      const double step = eta * t;
      const double d = (hi - lo) / (2.0 * step);
      const double dd = (hi - 2.0 * mid + lo) / (step * step);
      // second differences at this step resolve curvature only above rounding
      const double noise = 8.0 * kEps * mid / (step * step);
      if (!(d < 0.0)) flag(rep.decreasing, "h'<0 (central)", t, d);
      if (!(dd > -noise)) flag(rep.convex, "h''>0 (central)", t, dd);
    }
  }
  return rep;
}

}  // namespace halfhilbert::specfun
