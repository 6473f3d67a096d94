#include "halfhilbert/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "halfhilbert/coefficients.hpp"
#include "halfhilbert/constants.hpp"
#include "halfhilbert/errors.hpp"
#include "halfhilbert/quadrature.hpp"
#include "halfhilbert/series.hpp"

namespace halfhilbert::lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// Shared evaluation state for one problem.
struct Ctx {
  const KernelParams& kp;
  const weights::WeightScheme& ws;
  Kernel h;
  int delta;
  double sigma;
  double u_one;
  double u_limit;
  quad::Options qo;
  series::Options so;

  explicit Ctx(const Problem& pb) : kp(pb.params), ws(checked(pb)), h(pb.params), delta(pb.params.delta),
                                    sigma(pb.params.sigma) {
    u_one = ws.mu().big_u(1.0);
    u_limit = ws.mu().u_limit();
    qo.rel_tol = pb.acc.quad_rel_tol;
    // kernel sums at z below ~1e-290 need indices beyond the double range
    qo.x_min = 1e-150;
    qo.x_max = 1e150;
    so.term_tol = pb.acc.term_tol;
    so.max_terms = pb.acc.max_terms;
    so.tail_mode = pb.acc.tail_mode;
    so.quad.rel_tol = std::min(1e-11, pb.acc.quad_rel_tol);
  }
  static const weights::WeightScheme& checked(const Problem& pb) {
    if (!pb.scheme) throw PreconditionError("problem has no weight scheme");
    pb.params.require_valid();
    return *pb.scheme;
  }

  /// A point of the integration variable. For closed-form families the variable is
  /// u = U(x) and mu is absorbed into du, so mu = 1 there.
  struct Pt {
    double x, U, mu, z;
  };
  Pt point(double x) const {
    const double U = ws.mu().big_u(x);
    return {x, U, ws.mu().mu(x), delta == 1 ? U : 1.0 / U};
  }
  Pt point_u(double u) const { return {std::numeric_limits<double>::quiet_NaN(), u, 1.0, delta == 1 ? u : 1.0 / u}; }
  bool in_low_side(const Pt& p) const { return delta == 1 ? p.U <= u_one : p.U >= u_one; }
  /// u with u^delta V~ = 1.
  std::optional<double> kernel_scale_u(double vt) const {
    const double u = std::pow(vt, -static_cast<double>(delta));
    if (!(u > 0.0) || !(u < u_limit) || !std::isfinite(u)) return std::nullopt;
    return u;
  }
  /// x with U^delta(x) V~ = 1, when it exists.
  std::optional<double> kernel_scale_x(double vt) const {
    const auto u = kernel_scale_u(vt);
    if (!u) return std::nullopt;
    const double x = ws.mu().inverse_u(*u);
    if (!(x > 0.0) || !std::isfinite(x)) return std::nullopt;
    return x;
  }
};

// --------------------------------------------------------- function values

bool in_u(const TestFunction& f) {
  return f.kind != TestFunction::Kind::tabulated && f.kind != TestFunction::Kind::callable;
}

/// Integration range of f in its natural variable (u for closed forms, x otherwise).
struct Support {
  bool u_variable = true;
  double lo = 0.0, hi = kInf;
  std::vector<double> breakpoints;
};

Support support_of(const TestFunction& f, const Ctx& c) {
  Support s;
  s.u_variable = in_u(f);
  if (s.u_variable) {
    s.hi = c.u_limit;
    s.breakpoints.push_back(c.u_one);
    if (f.kind == TestFunction::Kind::extremal) {
      if (c.delta == 1) s.hi = c.u_one;
      else s.lo = c.u_one;
    }
    if (f.kind == TestFunction::Kind::of_u)
      s.breakpoints.insert(s.breakpoints.end(), f.breakpoints.begin(), f.breakpoints.end());
    return s;
  }
  s.breakpoints.push_back(1.0);
  if (f.kind == TestFunction::Kind::tabulated) {
    s.lo = f.xs.front();
    s.hi = f.xs.back();
    s.breakpoints.insert(s.breakpoints.end(), f.xs.begin(), f.xs.end());
  } else {
    s.lo = f.support_lo;
    s.hi = f.support_hi;
    s.breakpoints.insert(s.breakpoints.end(), f.breakpoints.begin(), f.breakpoints.end());
  }
  return s;
}

Ctx::Pt point_of(const Support& s, const Ctx& c, double v) { return s.u_variable ? c.point_u(v) : c.point(v); }

void add_kernel_scale(Support& s, const Ctx& c, double vt) {
  const auto b = s.u_variable ? c.kernel_scale_u(vt) : c.kernel_scale_x(vt);
  if (b) s.breakpoints.push_back(*b);
}

/// log f at a point; for closed forms this is log(f/mu) as a function of U.
double log_f(const TestFunction& f, const Ctx& c, const Ctx::Pt& p) {
  const double base = std::log(p.mu) - std::log(p.U);
  switch (f.kind) {
    case TestFunction::Kind::zero: return kNegInf;
    case TestFunction::Kind::extremal:
      if (!c.in_low_side(p)) return kNegInf;
      return base + f.s * std::log(p.z);
    case TestFunction::Kind::damped: return base + f.s * std::log(p.z) - f.c * p.z;
    case TestFunction::Kind::two_slope: {
      if (c.in_low_side(p)) return base + f.s * std::log(p.z);
      const double z1 = std::log(c.u_one) * c.delta;
      return base + (f.s - f.s2) * z1 + f.s2 * std::log(p.z);
    }
    case TestFunction::Kind::of_u: {
      const double v = f.fn(p.U);
      return v > 0.0 ? std::log(v) : kNegInf;
    }
    case TestFunction::Kind::tabulated: {
      if (p.x < f.xs.front() || p.x > f.xs.back()) return kNegInf;
      const auto it = std::upper_bound(f.xs.begin(), f.xs.end(), p.x);
      std::size_t i = static_cast<std::size_t>(it - f.xs.begin());
      i = std::clamp<std::size_t>(i, 1, f.xs.size() - 1) - 1;
      const double t = (std::log(p.x) - std::log(f.xs[i])) / (std::log(f.xs[i + 1]) - std::log(f.xs[i]));
      return (1.0 - t) * std::log(f.ys[i]) + t * std::log(f.ys[i + 1]);
    }
    case TestFunction::Kind::callable: {
      const double v = f.fn(p.x);
      return v > 0.0 ? std::log(v) : kNegInf;
    }
  }
  return kNegInf;
}

double log_a(const TestSequence& a, const weights::WeightPoint& w, double t) {
  switch (a.kind) {
    case TestSequence::Kind::zero: return kNegInf;
    case TestSequence::Kind::extremal: return (a.s - 1.0) * std::log(w.v_tilde) + std::log(w.nu);
    case TestSequence::Kind::damped: return (a.s - 1.0) * std::log(w.v_tilde) + std::log(w.nu) - a.c * w.v_tilde;
    case TestSequence::Kind::list: {
      const auto n = static_cast<std::size_t>(t);
      if (n < 1 || n > a.values.size() || !(a.values[n - 1] > 0.0)) return kNegInf;
      return std::log(a.values[n - 1]);
    }
    case TestSequence::Kind::callable: {
      const double v = a.fn(t);
      return v > 0.0 ? std::log(v) : kNegInf;
    }
  }
  return kNegInf;
}

bool is_zero(const TestFunction& f) { return f.kind == TestFunction::Kind::zero; }
bool is_zero(const TestSequence& a) {
  if (a.kind == TestSequence::Kind::zero) return true;
  if (a.kind == TestSequence::Kind::list)
    return std::none_of(a.values.begin(), a.values.end(), [](double v) { return v > 0.0; });
  return false;
}

struct SeriesShape {
  std::optional<double> smooth_from;
  std::optional<std::size_t> length;
};

SeriesShape shape_of(const TestSequence& a, const Ctx& c) {
  SeriesShape s;
  switch (a.kind) {
    case TestSequence::Kind::list: s.length = a.values.size(); break;
    case TestSequence::Kind::callable:
      if (a.smooth_from) s.smooth_from = std::max(*a.smooth_from, c.ws.smooth_from());
      break;
    default: s.smooth_from = c.ws.smooth_from(); break;
  }
  return s;
}

// Integral of F over [lo, hi] (lo may be 0, hi may be inf) split at breakpoints.
Estimate integrate(const quad::RealFn& F, double lo, double hi, std::vector<double> bps, const quad::Options& qo) {
  bps.erase(std::remove_if(bps.begin(), bps.end(), [&](double b) { return !(b > lo && b < hi) || !std::isfinite(b); }),
            bps.end());
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  std::vector<double> pts;
  if (lo > 0.0) pts.push_back(lo);
  pts.insert(pts.end(), bps.begin(), bps.end());
  if (std::isfinite(hi)) pts.push_back(hi);
  if (pts.empty()) pts.push_back(1.0);
  CompensatedSum v;
  double e = 0.0;
  auto add = [&](const Estimate& x) {
    v += x.value;
    e += x.error;
  };
  if (lo == 0.0) add(quad::log_lower(F, pts.front(), qo));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) add(quad::log_interval(F, pts[i], pts[i + 1], qo));
  if (std::isinf(hi)) add(quad::log_upper(F, pts.back(), qo));
  return {v.value(), e};
}

Estimate integrate(const std::function<double(const Ctx::Pt&)>& F, const Support& s, const Ctx& c) {
  auto G = [&](double v) {
    const auto p = point_of(s, c, v);
    if (!(p.U > 0.0)) return 0.0;
    return F(p);
  };
  return integrate(G, s.lo, s.hi, s.breakpoints, c.qo);
}

/// Whole-line range in u with the kernel scale of V~_1 as a breakpoint.
Support u_line(const Ctx& c) {
  Support s;
  s.hi = c.u_limit;
  s.breakpoints.push_back(c.u_one);
  add_kernel_scale(s, c, c.ws.v_tilde(1));
  return s;
}

/// S(z) = sum_n h(z V~_n) a_n.
series::Result kernel_sum(const TestSequence& a, const Ctx& c, double z) {
  const SeriesShape sh = shape_of(a, c);
  auto term = [&](double t) {
    const auto w = c.ws.at(t);
    const double hv = c.h(z * w.v_tilde);
    if (hv == 0.0) return 0.0;
    const double la = log_a(a, w, t);
    return la == kNegInf ? 0.0 : hv * std::exp(la);
  };
  return series::sum(term, sh.smooth_from, c.so, sh.length);
}

/// c(t) = integral of h(U^delta(x) V~(t)) f(x) dx.
Estimate kernel_integral(const TestFunction& f, const Ctx& c, double vt) {
  Support sup = support_of(f, c);
  add_kernel_scale(sup, c, vt);
  auto F = [&](const Ctx::Pt& p) {
    const double hv = c.h(p.z * vt);
    if (hv == 0.0) return 0.0;
    const double lf = log_f(f, c, p);
    return lf == kNegInf ? 0.0 : hv * std::exp(lf);
  };
  return integrate(F, sup, c);
}

/// 1 - theta at z = U^delta(x), without cancellation.
double theta_complement(const Ctx& c, double z) {
  if (!c.ws.n0()) throw NotApplicableError("theta needs a monotone nu tail (no n0 detected)");
  const double b = z * c.ws.big_v(*c.ws.n0());
  if (!(b > 0.0)) return 1.0;
  if (std::isinf(b)) return 0.0;
  const double k = constants::k_closed(c.kp).value;
  if (b <= 1.0) return 1.0 - constants::kernel_mellin(c.h, c.sigma, 0.0, b, 1e-12).value / k;
  return constants::kernel_mellin(c.h, c.sigma, b, kInf, 1e-12).value / k;
}

Estimate power_of(const Estimate& e, double inv) {
  const double v = std::pow(e.value, inv);
  return {v, v * std::fabs(inv) * e.rel_error()};
}

Estimate sequence_sum(const std::function<double(double)>& term, const SeriesShape& sh, const Ctx& c) {
  const series::Result r = series::sum(term, sh.smooth_from, c.so, sh.length);
  return {r.value, r.error};
}

// Raw forms without the outer 1/p or 1/q power.
Estimate norm_f_raw(const TestFunction& f, const ExponentPair& pq, const Ctx& c, bool with_theta) {
  const Support sup = support_of(f, c);
  const double p = pq.p;
  auto F = [&](const Ctx::Pt& pt) {
    const double lf = log_f(f, c, pt);
    if (lf == kNegInf) return p > 0.0 ? 0.0 : kInf;
    double lv = (p * (1.0 - c.delta * c.sigma) - 1.0) * std::log(pt.U) + (1.0 - p) * std::log(pt.mu) + p * lf;
    if (with_theta) {
      const double comp = theta_complement(c, pt.z);
      if (!(comp > 0.0)) return 0.0;
      lv += std::log(comp);
    }
    return safe_exp(lv);
  };
  return integrate(F, sup, c);
}

Estimate norm_a_raw(const TestSequence& a, const ExponentPair& pq, const Ctx& c) {
  const double q = pq.q, sg = c.sigma;
  auto term = [&](double t) {
    const auto w = c.ws.at(t);
    const double la = log_a(a, w, t);
    if (la == kNegInf) return q > 0.0 ? 0.0 : kInf;
    return safe_exp((q * (1.0 - sg) - 1.0) * std::log(w.v_tilde) + (1.0 - q) * std::log(w.nu) + q * la);
  };
  return sequence_sum(term, shape_of(a, c), c);
}

Estimate j1_raw(const TestFunction& f, const ExponentPair& pq, const Ctx& c) {
  const double p = pq.p, sg = c.sigma;
  auto term = [&](double t) {
    const auto w = c.ws.at(t);
    const Estimate cn = kernel_integral(f, c, w.v_tilde);
    if (!(cn.value > 0.0)) return p > 0.0 ? 0.0 : kInf;
    return safe_exp(std::log(w.nu) + (p * sg - 1.0) * std::log(w.v_tilde) + p * std::log(cn.value));
  };
  SeriesShape sh;
  sh.smooth_from = c.ws.smooth_from();
  return sequence_sum(term, sh, c);
}

// integral of (1-theta)^(1-q) mu U^(q delta sigma - 1) S^q dx, taken in u = U(x)
Estimate j2_raw(const TestSequence& a, const ExponentPair& pq, const Ctx& c, bool with_theta) {
  const double q = pq.q, sg = c.sigma;
  auto F = [&](const Ctx::Pt& pt) {
    const double comp = with_theta ? theta_complement(c, pt.z) : 1.0;
    if (!(comp > 0.0)) return 0.0;
    const double s = kernel_sum(a, c, pt.z).value;
    if (!(s > 0.0)) {
      if (q > 0.0) return 0.0;
      // the (1-theta)^(1-q) factor decays faster than S^q grows
      return with_theta ? 0.0 : kInf;
    }
    double lv = q * c.delta * sg * std::log(pt.U) - std::log(pt.U) + q * std::log(s);
    if (with_theta) lv += (1.0 - q) * std::log(comp);
    return safe_exp(lv);
  };
  return integrate(F, u_line(c), c);
}

}  // namespace

// ------------------------------------------------------------ constructors

TestFunction TestFunction::zero() { return {}; }

TestFunction TestFunction::extremal(double s) {
  TestFunction f;
  f.kind = Kind::extremal;
  f.s = s;
  return f;
}

TestFunction TestFunction::damped(double s, double c) {
  if (!(c > 0.0)) throw DomainError("damped test function requires c>0");
  TestFunction f;
  f.kind = Kind::damped;
  f.s = s;
  f.c = c;
  return f;
}

TestFunction TestFunction::two_slope(double s_low, double s_high) {
  TestFunction f;
  f.kind = Kind::two_slope;
  f.s = s_low;
  f.s2 = s_high;
  return f;
}

TestFunction TestFunction::of_u(std::function<double(double)> g, std::vector<double> u_breakpoints) {
  TestFunction f;
  f.kind = Kind::of_u;
  f.fn = std::move(g);
  f.breakpoints = std::move(u_breakpoints);
  return f;
}

TestFunction TestFunction::tabulated(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("tabulated test function needs >= 2 points");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw DomainError("tabulated test function needs positive x and f");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw DomainError("tabulated abscissae must increase");
  }
  TestFunction f;
  f.kind = Kind::tabulated;
  f.xs = std::move(xs);
  f.ys = std::move(ys);
  return f;
}

TestFunction TestFunction::callable(std::function<double(double)> fn, std::vector<double> breakpoints) {
  TestFunction f;
  f.kind = Kind::callable;
  f.fn = std::move(fn);
  f.breakpoints = std::move(breakpoints);
  return f;
}

std::string TestFunction::label() const {
  switch (kind) {
    case Kind::zero: return "zero";
    case Kind::extremal: return "extremal(s=" + num(s) + ")";
    case Kind::damped: return "damped(s=" + num(s) + ",c=" + num(c) + ")";
    case Kind::two_slope: return "two-slope(s=" + num(s) + ",s2=" + num(s2) + ")";
    case Kind::tabulated: return "tabulated(" + std::to_string(xs.size()) + ")";
    case Kind::of_u: return "of-u";
    case Kind::callable: return "callable";
  }
  return "?";
}

TestSequence TestSequence::zero() { return {}; }

TestSequence TestSequence::extremal(double s) {
  TestSequence a;
  a.kind = Kind::extremal;
  a.s = s;
  return a;
}

TestSequence TestSequence::damped(double s, double c) {
  if (!(c > 0.0)) throw DomainError("damped test sequence requires c>0");
  TestSequence a;
  a.kind = Kind::damped;
  a.s = s;
  a.c = c;
  return a;
}

TestSequence TestSequence::list(std::vector<double> values) {
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("test sequence values must be nonnegative");
  TestSequence a;
  a.kind = Kind::list;
  a.values = std::move(values);
  return a;
}

TestSequence TestSequence::callable(std::function<double(double)> fn, std::optional<double> smooth_from) {
  TestSequence a;
  a.kind = Kind::callable;
  a.fn = std::move(fn);
  a.smooth_from = smooth_from;
  return a;
}

std::string TestSequence::label() const {
  switch (kind) {
    case Kind::zero: return "zero";
    case Kind::extremal: return "extremal(s=" + num(s) + ")";
    case Kind::damped: return "damped(s=" + num(s) + ",c=" + num(c) + ")";
    case Kind::list: return "list(" + std::to_string(values.size()) + ")";
    case Kind::callable: return "callable";
  }
  return "?";
}

// ------------------------------------------------------------- validation

void validate_function(const TestFunction& f, const ExponentPair& pq, const Problem& pb) {
  const double p = pq.p, sg = pb.params.sigma, g = pb.params.gamma_exp;
  const bool u_inf = pb.scheme->u_infinite();
  const bool z_to_0 = pb.params.delta == 1 || u_inf;
  const bool z_to_inf = pb.params.delta == -1 || u_inf;
  auto fail = [&](const std::string& why) { throw DivergenceError(f.label() + ": " + why); };
  switch (f.kind) {
    case TestFunction::Kind::extremal:
      if (p < 0.0) fail("vanishing outside 0<x^delta<=1 gives an infinite formal norm when p<0");
      if (z_to_0 && !(p * (f.s - sg) > 0.0)) fail("norm diverges near z=0, need p(s-sigma)>0");
      if (z_to_0 && !(f.s > g)) fail("inner integral diverges near z=0, need s>gamma");
      break;
    case TestFunction::Kind::damped:
      if (z_to_inf && !(p > 0.0)) fail("norm diverges for large z when p<0");
      if (z_to_0 && !(p * (f.s - sg) > 0.0)) fail("norm diverges near z=0, need p(s-sigma)>0");
      if (z_to_0 && !(f.s > g)) fail("inner integral diverges near z=0, need s>gamma");
      break;
    case TestFunction::Kind::two_slope:
      if (z_to_0 && !(p * (f.s - sg) > 0.0)) fail("norm diverges near z=0, need p(s-sigma)>0");
      if (z_to_inf && !(p * (f.s2 - sg) < 0.0)) fail("norm diverges for large z, need p(s2-sigma)<0");
      if (z_to_0 && !(f.s > g)) fail("inner integral diverges near z=0, need s>gamma");
      break;
    case TestFunction::Kind::tabulated:
      if (p < 0.0) fail("compact support gives an infinite formal norm when p<0");
      break;
    default: break;
  }
}

void validate_sequence(const TestSequence& a, const ExponentPair& pq, const Problem& pb) {
  const double q = pq.q, sg = pb.params.sigma;
  auto fail = [&](const std::string& why) { throw DivergenceError(a.label() + ": " + why); };
  switch (a.kind) {
    case TestSequence::Kind::extremal:
      if (!(q * (a.s - sg) < 0.0)) fail("norm diverges, need q(s-sigma)<0");
      break;
    case TestSequence::Kind::damped:
      if (!(q > 0.0)) fail("norm diverges when q<0");
      break;
    case TestSequence::Kind::list:
      if (q < 0.0) fail("finite list gives an infinite formal norm when q<0");
      break;
    default: break;
  }
}

void validate_pair(const TestFunction& f, const TestSequence& a, const Problem& pb) {
  const bool z_to_0 = pb.params.delta == 1 || pb.scheme->u_infinite();
  if (!z_to_0 || a.kind != TestSequence::Kind::extremal) return;
  const bool sloped = f.kind == TestFunction::Kind::extremal || f.kind == TestFunction::Kind::damped ||
                      f.kind == TestFunction::Kind::two_slope;
  if (sloped && !(f.s > a.s))
    throw DivergenceError(f.label() + " with " + a.label() + ": bilinear form diverges near z=0, need s_f>s_a");
}

// ------------------------------------------------------------------ norms

Estimate norm_f(const TestFunction& f, const ExponentPair& pq, const Problem& pb) {
  if (is_zero(f)) return {0.0, 0.0};
  validate_function(f, pq, pb);
  const Ctx c(pb);
  return power_of(norm_f_raw(f, pq, c, false), 1.0 / pq.p);
}

Estimate norm_f_theta(const TestFunction& f, const ExponentPair& pq, const Problem& pb) {
  if (is_zero(f)) return {0.0, 0.0};
  validate_function(f, pq, pb);
  const Ctx c(pb);
  return power_of(norm_f_raw(f, pq, c, true), 1.0 / pq.p);
}

Estimate norm_a(const TestSequence& a, const ExponentPair& pq, const Problem& pb) {
  if (is_zero(a)) return {0.0, 0.0};
  validate_sequence(a, pq, pb);
  const Ctx c(pb);
  return power_of(norm_a_raw(a, pq, c), 1.0 / pq.q);
}

// ---------------------------------------------------- bilinear quantities

Estimate bilinear_I(const TestFunction& f, const TestSequence& a, const Problem& pb, Order order) {
  return order == Order::integral_outer ? inner_T2(a, f, pb) : inner_T1(f, a, pb);
}

Estimate inner_T2(const TestSequence& a, const TestFunction& f, const Problem& pb) {
  if (is_zero(f) || is_zero(a)) return {0.0, 0.0};
  const Ctx c(pb);
  Support sup = support_of(f, c);
  add_kernel_scale(sup, c, c.ws.v_tilde(1));
  auto F = [&](const Ctx::Pt& pt) {
    const double lf = log_f(f, c, pt);
    if (lf == kNegInf) return 0.0;
    const double s = kernel_sum(a, c, pt.z).value;
    return s > 0.0 ? safe_exp(lf + std::log(s)) : 0.0;
  };
  return integrate(F, sup, c);
}

Estimate inner_T1(const TestFunction& f, const TestSequence& a, const Problem& pb) {
  if (is_zero(f) || is_zero(a)) return {0.0, 0.0};
  const Ctx c(pb);
  auto term = [&](double t) {
    const auto w = c.ws.at(t);
    const double la = log_a(a, w, t);
    if (la == kNegInf) return 0.0;
    const Estimate cn = kernel_integral(f, c, w.v_tilde);
    return cn.value > 0.0 ? safe_exp(la + std::log(cn.value)) : 0.0;
  };
  return sequence_sum(term, shape_of(a, c), c);
}

Estimate j1(const TestFunction& f, const ExponentPair& pq, const Problem& pb) {
  if (is_zero(f)) return {0.0, 0.0};
  validate_function(f, pq, pb);
  const Ctx c(pb);
  return power_of(j1_raw(f, pq, c), 1.0 / pq.p);
}

Estimate j2(const TestSequence& a, const ExponentPair& pq, const Problem& pb) {
  if (is_zero(a)) return {0.0, 0.0};
  validate_sequence(a, pq, pb);
  if (pq.q < 0.0) throw DivergenceError("J2 diverges for q<0 since S^q grows without bound at large z");
  const Ctx c(pb);
  return power_of(j2_raw(a, pq, c, false), 1.0 / pq.q);
}

Estimate j_theta(const TestSequence& a, const ExponentPair& pq, const Problem& pb) {
  if (pq.regime != Regime::p_in_01) throw PreconditionError("J with the theta weight is defined for 0<p<1");
  if (is_zero(a)) return {0.0, 0.0};
  validate_sequence(a, pq, pb);
  const Ctx c(pb);
  return power_of(j2_raw(a, pq, c, true), 1.0 / pq.q);
}

std::vector<double> apply_T1(const TestFunction& f, const Problem& pb, std::size_t count) {
  std::vector<double> out(count, 0.0);
  if (is_zero(f)) return out;
  const Ctx c(pb);
  for (std::size_t n = 1; n <= count; ++n) out[n - 1] = kernel_integral(f, c, c.ws.v_tilde(n)).value;
  return out;
}

std::vector<double> apply_T2(const TestSequence& a, const Problem& pb, const std::vector<double>& grid) {
  std::vector<double> out(grid.size(), 0.0);
  if (is_zero(a)) return out;
  const Ctx c(pb);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw DomainError("T2 grid points must be positive");
    out[i] = kernel_sum(a, c, c.point(grid[i]).z).value;
  }
  return out;
}

// ------------------------------------------------------------ verification

VerificationReport make_report(std::string id, Regime regime, const Estimate& lhs, const Estimate& rhs,
                               const std::string& direction) {
  VerificationReport r;
  r.id = std::move(id);
  r.regime = to_string(regime);
  r.lhs = lhs.value;
  r.rhs = rhs.value;
  r.direction = direction;
  r.margin = (rhs.value - lhs.value) / rhs.value;
  r.budget = lhs.rel_error() + rhs.rel_error() + 10.0 * kEps;
  if (direction == "<") r.pass = r.margin > r.budget;
  else if (direction == ">") r.pass = r.margin < -r.budget;
  else if (direction == "<=") r.pass = r.margin >= -r.budget;
  else if (direction == ">=") r.pass = r.margin <= r.budget;
  if (!std::isfinite(r.margin)) r.pass = false;
  return r;
}

namespace {
Estimate times(const Estimate& a, const Estimate& b, double k = 1.0) {
  const double v = a.value * b.value * k;
  return {v, std::fabs(v) * (a.rel_error() + b.rel_error())};
}
}  // namespace

std::vector<VerificationReport> verify(const ExponentPair& pq, const TestFunction& f, const TestSequence& a,
                                       const Problem& pb) {
  pb.params.require_theorem_regime();
  validate_function(f, pq, pb);
  validate_sequence(a, pq, pb);
  validate_pair(f, a, pb);
  const bool mid = pq.regime == Regime::p_in_01;
  const Estimate nf = mid ? norm_f_theta(f, pq, pb) : norm_f(f, pq, pb);
  const Estimate na = norm_a(a, pq, pb);
  if (!(nf.value > 0.0)) throw PreconditionError("norm positivity 0<||f|| violated");
  if (!(na.value > 0.0)) throw PreconditionError("norm positivity 0<||a|| violated");
  const Estimate k = {constants::k_closed(pb.params).value, constants::k_closed(pb.params).error_estimate};

  const Estimate I = bilinear_I(f, a, pb);
  const Estimate J1 = j1(f, pq, pb);
  const Estimate J2 = mid ? j_theta(a, pq, pb) : j2(a, pq, pb);
  const std::string strict = pq.regime == Regime::p_gt_1 ? "<" : ">";
  const std::string weak = pq.regime == Regime::p_gt_1 ? "<=" : ">=";
  const Regime rg = pq.regime;
  std::vector<VerificationReport> out;
  out.push_back(make_report("bilinear", rg, I, times(times(nf, na), k), strict));
  out.push_back(make_report("series-form", rg, J1, times(nf, k), strict));
  out.push_back(make_report(mid ? "integral-form-theta" : "integral-form", rg, J2, times(na, k), strict));
  out.push_back(make_report("holder-series", rg, I, times(J1, na), weak));
  out.push_back(make_report(mid ? "holder-integral-theta" : "holder-integral", rg, I, times(nf, J2), weak));
  return out;
}

IdentityCheck j1_identity(const TestFunction& f, const ExponentPair& pq, const Problem& pb) {
  const Ctx c(pb);
  const Estimate lhs = j1_raw(f, pq, c);
  const double p = pq.p, sg = c.sigma;
  const TestFunction fc = f;
  const weights::WeightScheme* ws = pb.scheme;
  const Problem pcopy = pb;
  auto star = [fc, p, sg, ws, pcopy](double t) {
    const Ctx cc(pcopy);
    const auto w = ws->at(t);
    const double cn = kernel_integral(fc, cc, w.v_tilde).value;
    return safe_exp(std::log(w.nu) + (p * sg - 1.0) * std::log(w.v_tilde) + (p - 1.0) * std::log(cn));
  };
  const TestSequence astar = TestSequence::callable(star, ws->smooth_from());
  const Estimate rhs = norm_a_raw(astar, pq, c);
  return {lhs.value, rhs.value, std::fabs(lhs.value - rhs.value) / std::fabs(rhs.value)};
}

IdentityCheck j2_identity(const TestSequence& a, const ExponentPair& pq, const Problem& pb) {
  const Ctx c(pb);
  const double q = pq.q, sg = c.sigma;
  const bool theta = q < 0.0;
  const Estimate lhs = j2_raw(a, pq, c, theta);
  const int delta = c.delta;
  const double ce = -q / pq.p;
  const TestSequence ac = a;
  const Problem pcopy = pb;
  // f* = mu U^(q delta sigma - 1) S^(q-1) [(1-theta)^(-q/p) when q<0], written as mu(x) g(U(x))
  auto star = [ac, q, sg, delta, pcopy, theta, ce](double u) {
    const Ctx cc(pcopy);
    const double z = cc.point_u(u).z;
    const double s = kernel_sum(ac, cc, z).value;
    if (!(s > 0.0)) return 0.0;
    double lv = (q * delta * sg - 1.0) * std::log(u) + (q - 1.0) * std::log(s);
    if (theta) {
      const double comp = theta_complement(cc, z);
      if (!(comp > 0.0)) return 0.0;
      lv += ce * std::log(comp);
    }
    return safe_exp(lv);
  };
  const TestFunction fstar = TestFunction::of_u(star, u_line(c).breakpoints);
  const Estimate rhs = norm_f_raw(fstar, pq, c, theta);
  return {lhs.value, rhs.value, std::fabs(lhs.value - rhs.value) / std::fabs(rhs.value)};
}

// ----------------------------------------------------------------- presets

Configuration preset(const std::string& id) {
  using weights::MuScheme;
  using weights::NuScheme;
  Configuration c{id, "", KernelParams{}, MuScheme::constant_one(), NuScheme::constant_one()};
  if (id == "unit-weights") {
    c.description = "mu=nu=1, nu~=0: U(x)=x, V_n=n";
  } else if (id == "unit-weights-shifted") {
    c.description = "mu=nu=1, nu~=tau=0.3: weights (n-tau)";
    c.nu = NuScheme::constant_one().with_constant(0.3);
  } else if (id == "power-weights") {
    c.description = "mu=1, nu_n=(n-0.3)^-0.7, nu~=0";
    c.nu = NuScheme::shifted_power(0.7, 0.3);
  } else if (id == "zero-tilde") {
    c.description = "nu~=0 so that Psi(n)=V_n^(q(1-sigma)-1)/nu_n^(q-1); mu=(1+t)^-1/2, nu_n=(n-0.5)^-0.5";
    c.mu = MuScheme::inverse_power(0.5);
    c.nu = NuScheme::shifted_power(0.5, 0.5);
  } else if (id == "non-homogeneous") {
    c.description = "delta=1, non-homogeneous kernel h(U(x)V~_n)";
    c.params.delta = 1;
    c.mu = MuScheme::inverse_power(1.0);
    c.nu = NuScheme::shifted_power(0.5, 0.5).with_half();
  } else if (id == "homogeneous") {
    c.description = "delta=-1, kernel of degree 0 in (U(x), V~_n)";
    c.params.delta = -1;
    c.mu = MuScheme::inverse_power(1.0);
    c.nu = NuScheme::shifted_power(0.5, 0.5).with_half();
  } else if (id == "zeta-constant") {
    c.description = "alpha=rho: k(sigma)=K(sigma)=2Gamma(sigma/gamma)zeta(sigma/gamma)/(gamma(2rho)^(sigma/gamma))";
    c.params = KernelParams{1.0, 1.0, 0.3, 0.9, 1};
  } else if (id == "zeta-square") {
    c.description = "alpha=rho, gamma=sigma/2: k(sigma)=pi^2/(6 sigma rho^2)";
    c.params = KernelParams{1.0, 1.0, 0.5, 1.0, 1};
  } else if (id == "csch-square") {
    c.description = "alpha=0, gamma=sigma/2: k(sigma)=pi^2/(2 sigma rho^2)";
    c.params = KernelParams{1.0, 0.0, 0.5, 1.0, 1};
  } else {
    throw DomainError("unknown preset id '" + id + "'");
  }
  return c;
}

std::vector<std::string> preset_ids() {
  return {"unit-weights", "unit-weights-shifted", "power-weights", "zero-tilde", "non-homogeneous",
          "homogeneous",  "zeta-constant",        "zeta-square",   "csch-square"};
}

std::pair<TestFunction, TestSequence> preset_pair(const std::string& name, const ExponentPair& pq,
                                                  const KernelParams& kp) {
  const double sg = kp.sigma, g = kp.gamma_exp;
  auto damped = [&] {
    switch (pq.regime) {
      case Regime::p_gt_1: return std::pair{TestFunction::damped(sg + 0.25, 1.0), TestSequence::damped(sg, 1.0)};
      case Regime::p_lt_0:
        return std::pair{TestFunction::two_slope(0.5 * (g + sg), sg + 0.25), TestSequence::damped(sg, 1.0)};
      case Regime::p_in_01: break;
    }
    return std::pair{TestFunction::damped(sg + 0.5, 1.0), TestSequence::extremal(sg + 0.25)};
  };
  if (name == "damped") return damped();
  if (name == "extremal") {
    const bool mid = pq.regime == Regime::p_in_01;
    const double bound = mid ? pq.p * (sg - g) : pq.q * (sg - g);
    const double eps = std::min(0.1, 0.5 * bound);
    if (mid) {
      const double st = sg + eps / pq.p;
      return {TestFunction::extremal(st), TestSequence::extremal(st - eps)};
    }
    if (pq.regime == Regime::p_lt_0) {
      // full-support variant: the compactly supported f has an infinite formal norm for p<0
      const double st = sg - eps / pq.q;
      return {TestFunction::two_slope(st + eps, sg - eps / pq.p), TestSequence::extremal(st)};
    }
    const double st = sg - eps / pq.q;
    return {TestFunction::extremal(st + eps), TestSequence::extremal(st)};
  }
  if (name == "zero-sequence") return {damped().first, TestSequence::zero()};
  if (name == "zero-function") return {TestFunction::zero(), damped().second};
  throw DomainError("unknown test pair '" + name + "'");
}

std::vector<std::string> pair_ids() { return {"damped", "extremal", "zero-sequence", "zero-function"}; }

}  // namespace halfhilbert::lab
