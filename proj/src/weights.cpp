#include "halfhilbert/weights.hpp"

#include <algorithm>
#include <cmath>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <limits>
#include <memory>
#include <sstream>

#include "halfhilbert/errors.hpp"
#include "halfhilbert/numeric.hpp"
#include "halfhilbert/quadrature.hpp"

namespace halfhilbert::weights {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kCacheSize = 1 << 14;
constexpr double kSmoothAnchor = 64.0;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- MuScheme

MuScheme MuScheme::constant_one() { return MuScheme{}; }

MuScheme MuScheme::inverse_power(double beta) {
  if (!(beta >= 0.0) || !(beta <= 1.0)) throw DomainError("inverse-power mu requires beta in [0,1]");
  MuScheme m;
  m.family_ = Family::inverse_power;
  m.beta_ = beta;
  m.label_ = "inverse-power(beta=" + fmt(beta) + ")";
  return m;
}

MuScheme MuScheme::user(std::function<double(double)> mu, bool u_infinite, std::function<double(double)> big_u,
                        std::string label) {
  if (!mu) throw DomainError("user mu requires a callable");
  MuScheme m;
  m.family_ = Family::user;
  m.mu_fn_ = std::move(mu);
  m.u_fn_ = std::move(big_u);
  m.u_infinite_ = u_infinite;
  m.label_ = std::move(label);
  if (!u_infinite) {
    const double u1 = m.big_u(1.0);
    const Estimate tail = quad::log_upper(m.mu_fn_, 1.0, quad::Options{1e-12});
    m.u_limit_ = u1 + tail.value;
  }
  return m;
}

MuScheme MuScheme::tabulated(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 4) throw DomainError("tabulated mu needs at least 4 (x, mu) pairs");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] > 0.0) || !std::isfinite(ys[i])) throw DomainError("tabulated mu must be positive");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw DomainError("tabulated mu abscissae must increase");
  }
  const double x0 = xs.front(), x1 = xs.back(), y0 = ys.front(), y1 = ys.back();
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(xs), std::move(ys));
  auto fn = [spline, x0, x1, y0, y1](double t) {
    if (t <= x0) return y0;
    if (t >= x1) return y1;
    return std::max((*spline)(t), 0.0);
  };
  return user(fn, true, {}, "tabulated");
}

double MuScheme::mu(double t) const {
  switch (family_) {
    case Family::constant_one: return 1.0;
    case Family::inverse_power: return std::exp(-beta_ * std::log1p(t));
    case Family::user: return mu_fn_(t);
  }
  return 1.0;
}

double MuScheme::big_u(double x) const {
  if (!(x >= 0.0)) throw DomainError("U(x) requires x>=0");
  if (x == 0.0) return 0.0;
  switch (family_) {
    case Family::constant_one: return x;
    case Family::inverse_power:
      if (beta_ == 1.0) return std::log1p(x);
      return std::expm1((1.0 - beta_) * std::log1p(x)) / (1.0 - beta_);
    case Family::user:
      if (u_fn_) return u_fn_(x);
      if (!std::isfinite(x)) return u_limit();
      return quad::log_lower(mu_fn_, x, quad::Options{1e-12}).value;
  }
  return x;
}

double MuScheme::u_limit() const { return u_infinite_ ? kInf : u_limit_; }

double MuScheme::inverse_u(double w) const {
  if (!(w >= 0.0)) throw DomainError("inverse_u requires w>=0");
  if (!(w < u_limit())) throw DomainError("inverse_u argument beyond U(inf)");
  if (w == 0.0) return 0.0;
  switch (family_) {
    case Family::constant_one: return w;
    case Family::inverse_power:
      if (beta_ == 1.0) return std::expm1(w);
      return std::expm1(std::log1p((1.0 - beta_) * w) / (1.0 - beta_));
    case Family::user: break;
  }
  double lo = 0.0, hi = 1.0;
  while (big_u(hi) < w) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw DomainError("inverse_u bracket failed");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (big_u(mid) < w ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- NuScheme

NuScheme NuScheme::constant_one() { return NuScheme{}; }

NuScheme NuScheme::shifted_power(double beta, double tau) {
  if (!(beta >= 0.0) || !(beta <= 1.0)) throw DomainError("shifted-power nu requires beta in [0,1]");
  if (!(tau >= 0.0) || !(tau < 1.0)) throw DomainError("shifted-power nu requires tau in [0,1)");
  NuScheme n;
  n.family = Family::shifted_power;
  n.beta = beta;
  n.tau = tau;
  return n;
}

NuScheme NuScheme::user_list(std::vector<double> values, double tail_beta, double tail_tau) {
  if (values.empty()) throw DomainError("user nu list is empty");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("user nu values must be positive");
  if (!(tail_beta >= 0.0) || !(tail_beta <= 1.0)) throw DomainError("user nu continuation requires beta in [0,1]");
  if (!(tail_tau >= 0.0) || !(tail_tau < 1.0)) throw DomainError("user nu continuation requires tau in [0,1)");
  NuScheme n;
  n.family = Family::user_list;
  n.values = std::move(values);
  n.beta = tail_beta;
  n.tau = tail_tau;
  return n;
}

NuScheme& NuScheme::with_zero() {
  tilde = Tilde::zero;
  return *this;
}
NuScheme& NuScheme::with_half() {
  tilde = Tilde::half;
  return *this;
}
NuScheme& NuScheme::with_constant(double t) {
  if (!(t > 0.0) || !(t <= 0.5)) throw InvariantError("constant nu~ requires tau in (0,1/2]");
  tilde = Tilde::constant;
  tilde_value = t;
  return *this;
}
NuScheme& NuScheme::with_fraction(double lambda) {
  if (!(lambda >= 0.0) || !(lambda <= 0.5)) throw InvariantError("nu~ fraction must lie in [0,1/2]");
  tilde = Tilde::fraction;
  tilde_value = lambda;
  return *this;
}
NuScheme& NuScheme::with_list(std::vector<double> t) {
  for (double v : t)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvariantError("nu~ values must be nonnegative");
  tilde = Tilde::user_list;
  tilde_values = std::move(t);
  return *this;
}

std::string NuScheme::label() const {
  std::string s;
  switch (family) {
    case Family::constant_one: s = "constant-one"; break;
    case Family::shifted_power: s = "shifted-power(beta=" + fmt(beta) + ",tau=" + fmt(tau) + ")"; break;
    case Family::user_list: s = "user-list(" + std::to_string(values.size()) + ")"; break;
  }
  switch (tilde) {
    case Tilde::zero: s += ",tilde=zero"; break;
    case Tilde::half: s += ",tilde=half"; break;
    case Tilde::constant: s += ",tilde=constant(" + fmt(tilde_value) + ")"; break;
    case Tilde::fraction: s += ",tilde=fraction(" + fmt(tilde_value) + ")"; break;
    case Tilde::user_list: s += ",tilde=list(" + std::to_string(tilde_values.size()) + ")"; break;
  }
  return s;
}

// ------------------------------------------------------------ WeightScheme

WeightScheme::WeightScheme(MuScheme mu, NuScheme nu, std::size_t n0_scan_limit, std::size_t horizon)
    : mu_(std::move(mu)), nu_(std::move(nu)), horizon_(horizon) {
  const std::size_t list_len = nu_.family == NuScheme::Family::user_list ? nu_.values.size() : 0;
  const std::size_t tilde_len = nu_.tilde == NuScheme::Tilde::user_list ? nu_.tilde_values.size() : 0;
  const std::size_t cache = std::max({kCacheSize, list_len + 1, tilde_len + 1, n0_scan_limit + 1});

  prefix_.resize(cache + 1);
  prefix_[0] = 0.0;
  CompensatedSum s;
  for (std::size_t n = 1; n <= cache; ++n) {
    s += nu_raw(n);
    prefix_[n] = s.value();
  }

  // nu~ must stay in [0, nu_n/2] for every n; families with a decaying tail
  // cannot carry a positive constant.
  const bool decaying_tail = nu_.family != NuScheme::Family::constant_one && nu_.beta > 0.0;
  if (nu_.tilde == NuScheme::Tilde::constant && decaying_tail)
    throw InvariantError("constant nu~ exceeds nu_n/2 for large n when nu_n decays");
  for (std::size_t n = 1; n <= cache; ++n) {
    const double a = nu_raw(n), t = nu_tilde_raw(n, a);
    if (!(t >= 0.0) || t > 0.5 * a * (1.0 + 4.0 * kEps))
      throw InvariantError("nu~_" + std::to_string(n) + " outside [0, nu_n/2]");
  }

  if (nu_.family == NuScheme::Family::constant_one && tilde_len == 0) {
    smooth_from_ = 1.0;
  } else if (nu_.family == NuScheme::Family::constant_one) {
    smooth_from_ = static_cast<double>(tilde_len + 1);
  } else {
    anchor_ = std::max({kSmoothAnchor, static_cast<double>(list_len + 1), static_cast<double>(tilde_len + 1)});
    smooth_from_ = anchor_;
    anchor_shift_ = prefix_[static_cast<std::size_t>(anchor_)] - tail_primitive(anchor_);
  }

  try {
    n0_ = detect_n0(*this, std::max<std::size_t>(2, n0_scan_limit));
  } catch (const NotApplicableError&) {
    n0_.reset();
  }
}

double WeightScheme::nu_raw(std::size_t n) const {
  switch (nu_.family) {
    case NuScheme::Family::constant_one: return 1.0;
    case NuScheme::Family::shifted_power: return std::pow(static_cast<double>(n) - nu_.tau, -nu_.beta);
    case NuScheme::Family::user_list:
      if (n <= nu_.values.size()) return nu_.values[n - 1];
      return std::pow(static_cast<double>(n) - nu_.tau, -nu_.beta);
  }
  return 1.0;
}

double WeightScheme::nu_tilde_raw(std::size_t n, double nu_n) const {
  switch (nu_.tilde) {
    case NuScheme::Tilde::zero: return 0.0;
    case NuScheme::Tilde::half: return 0.5 * nu_n;
    case NuScheme::Tilde::constant: return nu_.tilde_value;
    case NuScheme::Tilde::fraction: return nu_.tilde_value * nu_n;
    case NuScheme::Tilde::user_list: return n <= nu_.tilde_values.size() ? nu_.tilde_values[n - 1] : 0.0;
  }
  return 0.0;
}

double WeightScheme::nu_smooth(double t) const {
  if (nu_.family == NuScheme::Family::constant_one) return 1.0;
  return std::pow(t - nu_.tau, -nu_.beta);
}

double WeightScheme::tail_primitive(double t) const {
  // Euler-Maclaurin primitive of (t - tau)^-beta through the f''' term.
  const double b = nu_.beta, u = t - nu_.tau;
  const double f = std::pow(u, -b);
  const double big_f = b == 1.0 ? std::log(u) : std::pow(u, 1.0 - b) / (1.0 - b);
  return big_f + 0.5 * f - b * f / (12.0 * u) + b * (b + 1.0) * (b + 2.0) * f / (720.0 * u * u * u);
}

double WeightScheme::v_smooth(double t) const {
  if (nu_.family == NuScheme::Family::constant_one) return t;
  return anchor_shift_ + tail_primitive(t);
}

double WeightScheme::tilde_smooth(double t, double nu_t) const {
  switch (nu_.tilde) {
    case NuScheme::Tilde::zero: return 0.0;
    case NuScheme::Tilde::half: return 0.5 * nu_t;
    case NuScheme::Tilde::constant: return nu_.tilde_value;
    case NuScheme::Tilde::fraction: return nu_.tilde_value * nu_t;
    case NuScheme::Tilde::user_list: return 0.0;
  }
  (void)t;
  return 0.0;
}

double WeightScheme::nu(std::size_t n) const {
  if (n < 1) throw DomainError("index must be >= 1");
  return nu_raw(n);
}

double WeightScheme::nu_tilde(std::size_t n) const { return nu_tilde_raw(n, nu(n)); }

double WeightScheme::big_v(std::size_t n) const {
  if (n < 1) throw DomainError("big_v requires n>=1");
  if (n < prefix_.size()) return prefix_[n];
  if (nu_.family == NuScheme::Family::constant_one) return static_cast<double>(n);
  if (n <= horizon_) {
    CompensatedSum s;
    s += prefix_.back();
    for (std::size_t k = prefix_.size(); k <= n; ++k) s += nu_raw(k);
    return s.value();
  }
  return v_smooth(static_cast<double>(n));
}

double WeightScheme::v_tilde(std::size_t n) const { return big_v(n) - nu_tilde(n); }

WeightPoint WeightScheme::at(double t) const {
  const double fl = std::floor(t);
  if (fl == t && t >= 1.0 && t < static_cast<double>(prefix_.size())) {
    const auto n = static_cast<std::size_t>(t);
    const double a = nu_raw(n);
    return {a, prefix_[n], prefix_[n] - nu_tilde_raw(n, a)};
  }
  if (t >= smooth_from_) {
    const double a = nu_smooth(t);
    const double v = v_smooth(t);
    return {a, v, v - tilde_smooth(t, a)};
  }
  if (fl == t && t >= 1.0) {
    const auto n = static_cast<std::size_t>(t);
    return {nu(n), big_v(n), v_tilde(n)};
  }
  throw DomainError("weights at a non-integer index below the smooth range");
}

std::string WeightScheme::label() const { return "mu=" + mu_.label() + ";nu=" + nu_.label(); }

// ------------------------------------------------------------- free functions

double big_u(double x, const WeightScheme& scheme) { return scheme.mu().big_u(x); }

double big_v(long long n, const WeightScheme& scheme) {
  if (n < 1) throw DomainError("big_v requires n>=1");
  return scheme.big_v(static_cast<std::size_t>(n));
}

double v_tilde(long long n, const WeightScheme& scheme) {
  if (n < 1) throw DomainError("v_tilde requires n>=1");
  return scheme.v_tilde(static_cast<std::size_t>(n));
}

double big_v_cont(double y, const WeightScheme& scheme) {
  if (!(y >= 0.5) || !std::isfinite(y)) throw DomainError("V(y) requires y>=1/2");
  const double nr = std::ceil(y - 0.5);
  if (nr < 1.0) return 0.0;
  const auto n = static_cast<std::size_t>(nr);
  const double prev = n > 1 ? scheme.big_v(n - 1) : 0.0;
  return prev + scheme.nu(n) * (y - (nr - 0.5));
}

std::size_t detect_n0(const WeightScheme& scheme, std::size_t scan_limit) {
  if (scan_limit < 2) throw DomainError("detect_n0 requires scan_limit>=2");
  std::size_t n0 = scan_limit;
  double next = scheme.nu(scan_limit);
  while (n0 > 1) {
    const double cur = scheme.nu(n0 - 1);
    if (!(cur >= next)) break;
    next = cur;
    --n0;
  }
  if (n0 == scan_limit) throw NotApplicableError("no monotone suffix of nu within the scan limit");
  return n0;
}

}  // namespace halfhilbert::weights
