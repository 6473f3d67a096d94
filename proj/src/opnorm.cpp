#include <algorithm>
#include <array>
#include <cmath>

#include "halfhilbert/errors.hpp"
#include "halfhilbert/constants.hpp"
#include "halfhilbert/lab.hpp"
#include "halfhilbert/quadrature.hpp"

namespace halfhilbert::lab {

namespace {

/// H(u) = integral of h(t) t^(sigma-1) over (0, u), tabulated in log u with
/// cubic Hermite interpolation.
class MellinPrimitive {
 public:
  explicit MellinPrimitive(const KernelParams& kp) : h_(kp), sigma_(kp.sigma), gamma_(kp.gamma_exp) {
    lo_ = std::log(1e-30);
    hi_ = std::log(745.0 / (kp.alpha + kp.rho)) / kp.gamma_exp;
    step_ = (hi_ - lo_) / (kNodes - 1);
    vals_.resize(kNodes);
    ders_.resize(kNodes);
    // leading behaviour h(t) ~ 1/(rho t^gamma) below the grid
    const double u0 = std::exp(lo_);
    vals_[0] = std::pow(u0, sigma_ - gamma_) / (kp.rho * (sigma_ - gamma_));
    auto g = [&](double lu) {
      const double u = std::exp(lu);
      return h_(u) * std::pow(u, sigma_);
    };
    quad::Options qo;
    qo.rel_tol = 1e-13;
    qo.abs_tol = 1e-300;
    for (int i = 0; i < kNodes; ++i) {
      ders_[i] = g(lo_ + i * step_);
      if (i > 0) vals_[i] = vals_[i - 1] + quad::gauss_kronrod(g, lo_ + (i - 1) * step_, lo_ + i * step_, qo).value;
    }
    base_ = vals_[0] / std::pow(u0, sigma_ - gamma_);
  }

  double operator()(double u) const {
    if (!(u > 0.0)) return 0.0;
    const double lu = std::log(u);
    if (lu <= lo_) return base_ * std::pow(u, sigma_ - gamma_);
    if (lu >= hi_) return vals_.back();
    const double pos = (lu - lo_) / step_;
    const int i = std::min(static_cast<int>(pos), kNodes - 2);
    const double t = pos - i;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * vals_[i] + (t3 - 2 * t2 + t) * step_ * ders_[i] + (-2 * t3 + 3 * t2) * vals_[i + 1] +
           (t3 - t2) * step_ * ders_[i + 1];
  }

  double total() const { return vals_.back(); }

 private:
  static constexpr int kNodes = 6000;
  Kernel h_;
  double sigma_, gamma_;
  double lo_, hi_, step_, base_;
  std::vector<double> vals_, ders_;
};

// 8-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 8> kGlX{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                     -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                     0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlW{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                     0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                     0.2223810344533745, 0.1012285362903763};

struct Cells {
  std::vector<double> z_edges;
  std::vector<double> W;      // ln(z_b / z_a)
  std::vector<double> omega;  // sum of nu / V~ per sequence cell
  std::vector<double> B;      // sequence cells x function cells
};

Cells build_cells(const Problem& pb, const Discretization& disc) {
  const auto& ws = *pb.scheme;
  const int delta = pb.params.delta;
  Cells c;
  const std::size_t m = disc.grid_points;
  std::vector<double> dense;
  for (std::size_t i = 0; i <= m; ++i) {
    const double x = disc.x_lo * std::pow(disc.x_hi / disc.x_lo, static_cast<double>(i) / m);
    const double u = ws.mu().big_u(x);
    dense.push_back(delta == 1 ? u : 1.0 / u);
  }
  std::sort(dense.begin(), dense.end());
  const double ratio = std::pow(dense.back() / dense.front(), 1.0 / m);
  const auto ext = static_cast<std::size_t>(std::ceil(std::log(disc.extension) / std::log(ratio)));
  for (std::size_t i = ext; i >= 1; --i) c.z_edges.push_back(dense.front() * std::pow(ratio, -static_cast<double>(i)));
  c.z_edges.insert(c.z_edges.end(), dense.begin(), dense.end());
  for (std::size_t i = 1; i <= ext; ++i) c.z_edges.push_back(dense.back() * std::pow(ratio, static_cast<double>(i)));
  const std::size_t J = c.z_edges.size() - 1;
  for (std::size_t j = 0; j < J; ++j) c.W.push_back(std::log(c.z_edges[j + 1] / c.z_edges[j]));

  const MellinPrimitive H(pb.params);
  std::vector<double> hv(J + 1);
  auto accumulate = [&](std::vector<double>& row, double weight, double vt) {
    for (std::size_t j = 0; j <= J; ++j) hv[j] = H(c.z_edges[j] * vt);
    for (std::size_t j = 0; j < J; ++j) row[j] += weight * std::max(0.0, hv[j + 1] - hv[j]);
  };
  auto push_row = [&](std::vector<double>&& row, double om) {
    c.B.insert(c.B.end(), row.begin(), row.end());
    c.omega.push_back(om);
  };

  const double exact_end = std::max(static_cast<double>(disc.n_exact), std::ceil(ws.smooth_from()));
  std::size_t a = 1;
  while (static_cast<double>(a) <= exact_end) {
    std::size_t b = a;
    if (a > disc.n_single) b = std::max(a, static_cast<std::size_t>(std::floor(a * disc.bin_ratio)));
    std::vector<double> row(J, 0.0);
    double om = 0.0;
    for (std::size_t n = a; n <= b; ++n) {
      const auto w = ws.at(static_cast<double>(n));
      const double wt = w.nu / w.v_tilde;
      accumulate(row, wt, w.v_tilde);
      om += wt;
    }
    push_row(std::move(row), om);
    a = b + 1;
  }
  const double n_max = exact_end * disc.extension;
  while (static_cast<double>(a) <= n_max) {
    const auto b = std::max(a, static_cast<std::size_t>(std::floor(a * disc.tail_bin_ratio)));
    // sum over [a, b] approximated by the integral over [a - 1/2, b + 1/2] in log t
    const double l0 = std::log(a - 0.5), l1 = std::log(b + 0.5);
    const double mid = 0.5 * (l0 + l1), half = 0.5 * (l1 - l0);
    std::vector<double> row(J, 0.0);
    double om = 0.0;
    for (std::size_t i = 0; i < kGlX.size(); ++i) {
      const double t = std::exp(mid + half * kGlX[i]);
      const auto w = ws.at(t);
      const double wt = kGlW[i] * half * t * w.nu / w.v_tilde;
      accumulate(row, wt, w.v_tilde);
      om += wt;
    }
    push_row(std::move(row), om);
    a = b + 1;
  }
  return c;
}

double lp_norm(const std::vector<double>& x, const std::vector<double>& w, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0) s += w[i] * std::pow(x[i], p);
  return std::pow(s, 1.0 / p);
}

void normalize(std::vector<double>& x) {
  const double m = *std::max_element(x.begin(), x.end());
  if (m > 0.0)
    for (double& v : x) v /= m;
}

}  // namespace

OperatorNormEstimate estimate_operator_norm(Operator which, const ExponentPair& pq, const Problem& pb,
                                            const Discretization& disc, std::size_t iters) {
  if (!pb.scheme) throw PreconditionError("problem has no weight scheme");
  pb.params.require_theorem_regime();
  if (pq.regime != Regime::p_gt_1) throw PreconditionError("operator norm estimation requires p>1");
  if (!pb.scheme->u_infinite()) throw PreconditionError("operator norm estimation requires U(inf)=inf");
  if (disc.grid_points < 2 || !(disc.x_lo > 0.0) || !(disc.x_hi > disc.x_lo) || !(disc.extension >= 1.0) ||
      !(disc.bin_ratio > 1.0) || !(disc.tail_bin_ratio > 1.0))
    throw DomainError("invalid discretization");

  const Cells c = build_cells(pb, disc);
  const std::size_t J = c.W.size(), K = c.omega.size();
  const double p = pq.p, q = pq.q;
  std::vector<double> F(J, 1.0), A(K, 1.0), cf(K), sa(J);

  auto apply_B = [&] {
    for (std::size_t k = 0; k < K; ++k) {
      const double* row = &c.B[k * J];
      double s = 0.0;
      for (std::size_t j = 0; j < J; ++j) s += row[j] * F[j];
      cf[k] = s;
    }
  };
  auto apply_Bt = [&] {
    std::fill(sa.begin(), sa.end(), 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const double* row = &c.B[k * J];
      for (std::size_t j = 0; j < J; ++j) sa[j] += row[j] * A[k];
    }
  };
  auto ratio = [&] {
    apply_B();
    double I = 0.0;
    for (std::size_t k = 0; k < K; ++k) I += A[k] * cf[k];
    return I / (lp_norm(F, c.W, p) * lp_norm(A, c.omega, q));
  };
  auto update_a = [&] {
    apply_B();
    for (std::size_t k = 0; k < K; ++k) A[k] = std::pow(cf[k] / c.omega[k], p - 1.0);
    normalize(A);
  };
  auto update_f = [&] {
    apply_Bt();
    for (std::size_t j = 0; j < J; ++j) F[j] = std::pow(sa[j] / c.W[j], q - 1.0);
    normalize(F);
  };

  OperatorNormEstimate out;
  out.k_sigma = constants::k_closed(pb.params).value;
  out.function_cells = J;
  out.sequence_cells = K;
  out.trace.push_back(ratio());
  for (std::size_t it = 0; it < iters; ++it) {
    if (which == Operator::T1) {
      update_a();
      update_f();
    } else {
      update_f();
      update_a();
    }
    const double r = ratio();
    out.trace.push_back(r);
    if (!std::isfinite(r) || r < out.trace[out.trace.size() - 2] * (1.0 - 1e-12))
      throw IterationError("operator norm ratio decreased at iteration " + std::to_string(it + 1), out.trace);
    ++out.iterations;
  }
  out.estimate = out.trace.back();
  return out;
}

}  // namespace halfhilbert::lab
