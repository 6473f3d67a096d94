#include "halfhilbert/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "halfhilbert/constants.hpp"
#include "halfhilbert/errors.hpp"
#include "halfhilbert/quadrature.hpp"

namespace halfhilbert::coefficients {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

KernelParams with_sigma(KernelParams kp, double s) {
  kp.sigma = s;
  return kp;
}

double z_of(double x, const weights::WeightScheme& scheme, int delta) {
  const double u = scheme.mu().big_u(x);
  return delta == 1 ? u : 1.0 / u;
}

}  // namespace

void SeriesBudget::validate() const {
  if (!(term_tol > 0.0)) throw DomainError("require term_tol>0");
  if (max_terms < 10) throw DomainError("require max_terms>=10");
}

series::Options SeriesBudget::options() const {
  series::Options o;
  o.term_tol = term_tol;
  o.max_terms = max_terms;
  o.tail_mode = tail_mode;
  return o;
}

OmegaResult omega(double sigma_arg, double x, const weights::WeightScheme& scheme, const KernelParams& params,
                  const SeriesBudget& budget) {
  params.require_valid();
  budget.validate();
  if (!(sigma_arg > params.gamma_exp) || !(sigma_arg <= 1.0))
    throw DomainError("omega requires sigma in (gamma, 1]");
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("omega requires x>0");
  const Kernel h(params);
  const double z = z_of(x, scheme, params.delta);
  auto term = [&](double t) {
    const auto w = scheme.at(t);
    const double u = z * w.v_tilde;
    const double hv = h(u);
    if (hv == 0.0) return 0.0;
    return std::pow(u, sigma_arg) * hv * w.nu / w.v_tilde;
  };
  const series::Result r = series::sum(term, scheme.smooth_from(), budget.options());
  return {r.value, r.tail, r.error, r.terms};
}

VarpiResult varpi(double sigma_arg, std::size_t n, const weights::WeightScheme& scheme, const KernelParams& params,
                  const specfun::Accuracy& acc) {
  params.require_valid();
  acc.validate();
  if (n < 1) throw DomainError("varpi requires n>=1");
  if (!(sigma_arg > params.gamma_exp)) throw DomainError("varpi requires sigma>gamma");
  const Kernel h(params);
  const double vt = scheme.v_tilde(n);
  const int delta = params.delta;
  const auto& mu = scheme.mu();

  auto integrand = [&](double x) {
    const double bu = mu.big_u(x);
    if (!(bu > 0.0)) return 0.0;
    const double u = (delta == 1 ? bu : 1.0 / bu) * vt;
    const double hv = h(u);
    if (hv == 0.0 || !std::isfinite(u)) return 0.0;
    return hv * std::pow(u, sigma_arg) * mu.mu(x) / bu;
  };
  std::vector<double> bp{1.0};
  const double target = std::pow(vt, -static_cast<double>(delta));
  if (target < mu.u_limit()) bp.push_back(mu.inverse_u(target));
  quad::Options qo;
  qo.rel_tol = acc.rel_tol;
  qo.abs_tol = std::max(acc.abs_tol, 1e-300);
  std::sort(bp.begin(), bp.end());
  const double ulim = mu.u_limit();
  double lo = 0.0, hi = kInf;
  if (delta == 1)
    hi = std::isinf(ulim) ? kInf : vt * ulim;
  else
    lo = std::isinf(ulim) ? 0.0 : vt / ulim;
  const double rt = std::min(acc.rel_tol, 1e-12);

  // direct route on (0, x_max]; a slowly growing U leaves mass beyond x_max,
  // which is taken from the substituted form over the matching u-range
  CompensatedSum dsum;
  double derr = 0.0;
  auto add = [&](const Estimate& e) {
    dsum += e.value;
    derr += e.error;
  };
  add(quad::log_lower(integrand, bp.front(), qo));
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) add(quad::log_interval(integrand, bp[i], bp[i + 1], qo));
  const double x_edge = qo.x_max;
  add(quad::log_interval(integrand, bp.back(), x_edge, qo));
  const double u_edge = (delta == 1 ? mu.big_u(x_edge) : 1.0 / mu.big_u(x_edge)) * vt;
  if (delta == 1 && u_edge < hi) add(constants::kernel_mellin(h, sigma_arg, u_edge, hi, rt));
  if (delta == -1 && u_edge > lo) add(constants::kernel_mellin(h, sigma_arg, lo, u_edge, rt));
  const Estimate direct{dsum.value(), derr};

  const Estimate sub = constants::kernel_mellin(h, sigma_arg, lo, hi, rt);

  const double tol_d = std::max(direct.error, acc.rel_tol * std::fabs(direct.value));
  const double tol_s = std::max(sub.error, acc.rel_tol * std::fabs(sub.value));
  if (std::fabs(direct.value - sub.value) > 10.0 * (tol_d + tol_s) + acc.abs_tol) {
    throw ConsistencyError("varpi: direct quadrature " + std::to_string(direct.value) +
                           " disagrees with substituted form " + std::to_string(sub.value));
  }
  return {sub.value, direct.value, tol_s};
}

ThetaResult theta(double sigma_arg, double x, const weights::WeightScheme& scheme, const KernelParams& params,
                  const specfun::Accuracy& acc, std::optional<std::size_t> n0_override) {
  params.require_valid();
  acc.validate();
  if (!scheme.n0()) throw NotApplicableError("theta needs a monotone nu tail (no n0 detected)");
  if (!scheme.v_infinite()) throw NotApplicableError("theta needs V(inf)=inf");
  if (!(sigma_arg > params.gamma_exp)) throw DomainError("theta requires sigma>gamma");
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("theta requires x>0");
  std::size_t n0 = *scheme.n0();
  if (n0_override) {
    if (*n0_override < n0) throw PreconditionError("n0 may only be raised above the detected index");
    n0 = *n0_override;
  }
  const KernelParams ks = with_sigma(params, sigma_arg);
  const double k = constants::k_closed(ks).value;
  const Kernel h(params);
  const double b = z_of(x, scheme, params.delta) * scheme.big_v(n0);
  const double rt = std::min(acc.rel_tol, 1e-12);
  ThetaResult r;
  r.n0 = n0;
  if (!(b > 0.0)) {
    r.theta = 0.0;
    r.complement = 1.0;
  } else if (b <= 1.0) {
    const Estimate e = constants::kernel_mellin(h, sigma_arg, 0.0, b, rt);
    r.theta = e.value / k;
    r.complement = 1.0 - r.theta;
    r.error = e.error / k;
  } else {
    const Estimate e = std::isinf(b) ? Estimate{0.0, 0.0} : constants::kernel_mellin(h, sigma_arg, b, kInf, rt);
    r.complement = e.value / k;
    r.theta = 1.0 - r.complement;
    r.error = e.error / k;
  }
  const double kappa = sigma_arg - params.gamma_exp;
  r.bound = envelope_L(params) * std::pow(b, kappa) / (k * kappa);
  return r;
}

double envelope_L(const KernelParams& params, const specfun::Accuracy& acc) {
  params.require_valid();
  const Kernel h(params);
  auto f = [&](double lu) { return h.envelope_of_w(std::pow(std::exp(lu), h.gamma())); };
  constexpr int kPoints = 400;
  const double lo = std::log(1e-12), hi = std::log(1e6);
  double best = 1.0 / params.rho;
  int best_i = -1;
  for (int i = 0; i <= kPoints; ++i) {
    const double v = f(lo + (hi - lo) * i / kPoints);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  if (best_i > 0 && best_i < kPoints) {
    // golden-section refinement around an interior maximum
    const double step = (hi - lo) / kPoints;
    double a = lo + (best_i - 1) * step, b = lo + (best_i + 1) * step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > acc.rel_tol * 1e-3; ++it) {
      if (fc > fd) {
        b = d, d = c, fd = fc, c = b - g * (b - a), fc = f(c);
      } else {
        a = c, c = d, fc = fd, d = a + g * (b - a), fd = f(d);
      }
    }
    best = std::max({best, fc, fd});
  }
  return best;
}

BracketedValue tail_sum(double b, const weights::WeightScheme& scheme, const SeriesBudget& budget) {
  budget.validate();
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("tail_sum requires b>0");
  if (!scheme.n0()) throw NotApplicableError("tail_sum needs a detected n0");
  const std::size_t n0 = *scheme.n0();
  auto term = [&](double t) {
    const auto w = scheme.at(t);
    return w.nu * std::pow(w.v_tilde, -1.0 - b);
  };
  const series::Result r = series::sum(term, scheme.smooth_from(), budget.options());
  BracketedValue out;
  out.value = r.value;
  out.error = r.error;
  out.lower = 1.0 / (b * std::pow(scheme.big_v(n0), b));
  CompensatedSum head;
  for (std::size_t n = 1; n <= n0; ++n) head += term(static_cast<double>(n));
  out.upper = out.lower + head.value();
  out.contained = out.lower <= r.value + r.error && r.value - r.error <= out.upper;
  return out;
}

ChainReport bracket_check(const std::function<double(double)>& g, std::size_t n0, const specfun::Accuracy& acc,
                          const std::vector<double>& breakpoints) {
  acc.validate();
  if (n0 < 1) throw DomainError("bracket_check requires n0>=1");
  // spot-check positivity and monotonicity on a geometric sample
  double prev = g(0.0);
  if (!(prev > 0.0) || !std::isfinite(prev)) throw PreconditionError("g must be positive and finite at 0");
  for (double t = 0.125; t <= 1048576.0; t *= 1.25) {
    const double v = g(t);
    if (!(v > 0.0)) break;
    const bool strict = t >= static_cast<double>(n0);
    if (v > prev || (strict && v == prev))
      throw PreconditionError("g fails the monotonicity spot-check at t=" + std::to_string(t));
    prev = v;
  }
  quad::Options qo;
  qo.rel_tol = acc.rel_tol;
  std::vector<double> bp_hi{1.0}, bp_all{1.0};
  for (double b : breakpoints) {
    if (b > 1.0) bp_hi.push_back(b);
    if (b > 0.0) bp_all.push_back(b);
  }
  std::sort(bp_hi.begin(), bp_hi.end());
  // integral over [1, inf) as the pieces of the half-line beyond 1
  CompensatedSum i1;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < bp_hi.size(); ++i) {
    const Estimate e = quad::log_interval(g, bp_hi[i], bp_hi[i + 1], qo);
    i1 += e.value;
    err += e.error;
  }
  const Estimate up = quad::log_upper(g, bp_hi.back(), qo);
  i1 += up.value;
  err += up.error;
  const Estimate low = quad::log_lower(g, 1.0, qo);
  std::vector<double> bp_low;
  for (double b : bp_all)
    if (b < 1.0) bp_low.push_back(b);
  double lower_part = low.value, lower_err = low.error;
  if (!bp_low.empty()) {
    std::sort(bp_low.begin(), bp_low.end());
    const Estimate head = quad::log_lower(g, bp_low.front(), qo);
    CompensatedSum s;
    s += head.value;
    lower_err = head.error;
    bp_low.push_back(1.0);
    for (std::size_t i = 0; i + 1 < bp_low.size(); ++i) {
      const Estimate e = quad::log_interval(g, bp_low[i], bp_low[i + 1], qo);
      s += e.value;
      lower_err += e.error;
    }
    lower_part = s.value();
  }
  series::Options so;
  so.term_tol = std::max(acc.rel_tol * 1e-2, 1e-14);
  const series::Result sr = series::sum(g, 1.0, so);

  ChainReport rep;
  rep.integral_from_one = i1.value();
  rep.sum = sr.value;
  rep.integral_from_zero = i1.value() + lower_part;
  rep.error = err + lower_err + sr.error;
  rep.holds = rep.integral_from_one + rep.error < rep.sum && rep.sum + rep.error < rep.integral_from_zero;
  return rep;
}

}  // namespace halfhilbert::coefficients

namespace halfhilbert::coefficients {

std::vector<double> log_grid(double a, double b, std::size_t n) {
  if (!(a > 0.0) || !(b >= a) || n == 0) throw DomainError("log grid requires 0<a<=b and n>=1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = n == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

std::vector<std::string> check_ids() {
  return {"omega-upper", "varpi-upper", "varpi-equality", "varpi-consistency", "theta-sandwich", "theta-bound",
          "tail-bracket"};
}

namespace {

struct Tally {
  CheckSummary s;
  bool first = true;
  explicit Tally(std::string id) { s.id = std::move(id); }
  void add(double margin, bool ok) {
    ++s.samples;
    if (!ok) ++s.failures;
    s.worst_margin = first ? margin : std::min(s.worst_margin, margin);
    first = false;
  }
  CheckSummary done() {
    s.pass = s.failures == 0 && s.samples > 0;
    return s;
  }
};

}  // namespace

std::vector<CheckSummary> run_checks(const std::string& which, const weights::WeightScheme& scheme,
                                     const KernelParams& params, const CheckPlan& plan) {
  params.require_valid();
  const auto ids = check_ids();
  if (which != "all" && std::find(ids.begin(), ids.end(), which) == ids.end())
    throw DomainError("unknown coefficient check '" + which + "'");
  auto wanted = [&](const char* id) { return which == "all" || which == id; };
  const double sg = params.sigma;
  const double k = constants::k_closed(params).value;
  std::vector<CheckSummary> out;

  const bool need_omega = wanted("omega-upper") || wanted("theta-sandwich");
  std::vector<OmegaResult> om;
  if (need_omega)
    for (double x : plan.x_grid) om.push_back(omega(sg, x, scheme, params));

  if (wanted("omega-upper")) {
    Tally t("omega-upper");
    for (const auto& o : om) {
      const double m = (k - o.value) / k;
      t.add(m, m > o.error / o.value + 10.0 * kEps);
    }
    out.push_back(t.done());
  }
  if (wanted("theta-sandwich") || wanted("theta-bound")) {
    Tally ts("theta-sandwich"), tb("theta-bound");
    for (std::size_t i = 0; i < plan.x_grid.size(); ++i) {
      const ThetaResult th = theta(sg, plan.x_grid[i], scheme, params);
      if (wanted("theta-sandwich")) {
        const double lower = k * th.complement;
        const double m = (om[i].value - lower) / om[i].value;
        ts.add(m, th.theta > 0.0 && th.complement > 0.0 && m > om[i].error / om[i].value + th.error + 10.0 * kEps);
      }
      if (wanted("theta-bound")) {
        const double m = (th.bound - th.theta) / th.bound;
        tb.add(m, m >= -(th.error / th.theta + 10.0 * kEps));
      }
    }
    if (wanted("theta-sandwich")) out.push_back(ts.done());
    if (wanted("theta-bound")) out.push_back(tb.done());
  }
  if (wanted("varpi-upper") || wanted("varpi-equality") || wanted("varpi-consistency")) {
    Tally tu("varpi-upper"), te("varpi-equality"), tc("varpi-consistency");
    const bool u_inf = scheme.u_infinite();
    for (std::size_t n = 1; n <= plan.n_max; ++n) {
      const VarpiResult v = varpi(sg, n, scheme, params);
      const double tol = v.error / v.value + 10.0 * kEps;
      const double mu = (k - v.value) / k;
      tu.add(mu, mu >= -tol);
      if (u_inf) {
        const double d = std::fabs(v.value - k) / k;
        te.add(plan.equality_tol - d, d <= plan.equality_tol);
      }
      const double c = std::fabs(v.direct - v.value) / v.value;
      tc.add(plan.consistency_tol - c, c <= plan.consistency_tol);
    }
    if (wanted("varpi-upper")) out.push_back(tu.done());
    if (wanted("varpi-equality")) {
      CheckSummary s = te.done();
      if (!u_inf) {
        s.pass = true;
        s.note = "not applicable: U(inf) is finite";
      }
      out.push_back(s);
    }
    if (wanted("varpi-consistency")) out.push_back(tc.done());
  }
  if (wanted("tail-bracket")) {
    Tally t("tail-bracket");
    for (double b : plan.tail_b) {
      const BracketedValue v = tail_sum(b, scheme);
      t.add(std::min(v.value - v.lower, v.upper - v.value) / v.value, v.contained);
    }
    out.push_back(t.done());
  }
  return out;
}

}  // namespace halfhilbert::coefficients
