#include "halfhilbert/sharpness.hpp"

#include <algorithm>
#include <cmath>

#include "halfhilbert/constants.hpp"
#include "halfhilbert/errors.hpp"
#include "halfhilbert/parallel.hpp"

namespace halfhilbert::sharpness {

namespace {

KernelParams with_sigma(KernelParams kp, double s) {
  kp.sigma = s;
  return kp;
}

SweepResult run(const std::vector<double>& eps_grid, const ExponentPair& pq, const lab::Problem& pb,
                std::size_t threads, bool forward) {
  pb.params.require_theorem_regime();
  if (!pb.scheme) throw PreconditionError("problem has no weight scheme");
  if (!pb.scheme->u_infinite()) throw PreconditionError("sharpness sweeps require U(inf)=inf");
  if (eps_grid.empty()) throw DomainError("empty epsilon grid");
  for (std::size_t i = 1; i < eps_grid.size(); ++i)
    if (!(eps_grid[i] < eps_grid[i - 1])) throw DomainError("epsilon grid must be strictly decreasing");
  for (double e : eps_grid) (void)sigma_tilde(e, pq, pb.params);

  SweepResult r;
  r.regime = to_string(pq.regime);
  r.k_sigma = constants::k_closed(pb.params).value;
  r.probes = parallel_map(eps_grid, [&](double e) { return probe(e, pq, pb); }, threads);
  for (const auto& p : r.probes) {
    const bool ok = forward ? p.ratio < r.k_sigma * (1.0 + p.budget) : p.ratio > r.k_sigma * (1.0 - p.budget);
    if (!ok)
      throw SharpnessError("ratio " + std::to_string(p.ratio) + " at eps=" + std::to_string(p.epsilon) +
                           (forward ? " exceeds" : " falls below") + " k(sigma)=" + std::to_string(r.k_sigma));
  }
  for (std::size_t i = 1; i < r.probes.size(); ++i)
    if (r.probes[i].gap > r.probes[i - 1].gap * (1.0 + r.probes[i].budget)) r.gap_nonincreasing = false;
  std::vector<double> xs, ys;
  for (const auto& p : r.probes) {
    xs.push_back(p.epsilon);
    ys.push_back(p.ratio);
  }
  r.limit = richardson(xs, ys);
  return r;
}

}  // namespace

double epsilon_bound(const ExponentPair& pq, const KernelParams& params) {
  const double span = params.sigma - params.gamma_exp;
  return pq.regime == Regime::p_in_01 ? pq.p * span : pq.q * span;
}

double sigma_tilde(double epsilon, const ExponentPair& pq, const KernelParams& params) {
  const double bound = epsilon_bound(pq, params);
  if (!(epsilon > 0.0) || !(epsilon < bound))
    throw DomainError("require 0<eps<" + std::to_string(bound) + " for regime " + to_string(pq.regime));
  return pq.regime == Regime::p_in_01 ? params.sigma + epsilon / pq.p : params.sigma - epsilon / pq.q;
}

std::pair<lab::TestFunction, lab::TestSequence> extremal_pair(double epsilon, const ExponentPair& pq,
                                                              const KernelParams& params) {
  const double st = sigma_tilde(epsilon, pq, params);
  if (pq.regime == Regime::p_in_01) return {lab::TestFunction::extremal(st), lab::TestSequence::extremal(st - epsilon)};
  return {lab::TestFunction::extremal(st + epsilon), lab::TestSequence::extremal(st)};
}

std::vector<double> default_grid() { return {0.4, 0.2, 0.1, 0.05, 0.025}; }

std::vector<double> clip_grid(const std::vector<double>& grid, const ExponentPair& pq, const KernelParams& params) {
  const double bound = epsilon_bound(pq, params);
  std::vector<double> out;
  std::copy_if(grid.begin(), grid.end(), std::back_inserter(out), [&](double e) { return e > 0.0 && e < bound; });
  return out;
}

SharpnessProbe probe(double epsilon, const ExponentPair& pq, const lab::Problem& pb) {
  SharpnessProbe pr;
  pr.epsilon = epsilon;
  pr.sigma_tilde = sigma_tilde(epsilon, pq, pb.params);
  pr.k_sigma_tilde = constants::k_closed(with_sigma(pb.params, pr.sigma_tilde)).value;
  const auto [f, a] = extremal_pair(epsilon, pq, pb.params);

  // eps ||f~||^p: closed form U^(delta eps)(1), or with the theta weight for 0<p<1
  const double u1 = pb.scheme->mu().big_u(1.0);
  Estimate eps_fp{std::pow(u1, pb.params.delta * epsilon), 0.0};
  if (pq.regime == Regime::p_in_01) {
    const Estimate nf = lab::norm_f_theta(f, pq, pb);
    const double v = epsilon * std::pow(nf.value, pq.p);
    eps_fp = {v, v * std::fabs(pq.p) * nf.rel_error()};
  }
  const Estimate na = lab::norm_a(a, pq, pb);
  const double eps_aq = epsilon * std::pow(na.value, pq.q);
  const double eps_aq_err = eps_aq * std::fabs(pq.q) * na.rel_error();
  const Estimate I = lab::bilinear_I(f, a, pb);

  const double eps_norms = std::pow(eps_fp.value, 1.0 / pq.p) * std::pow(eps_aq, 1.0 / pq.q);
  pr.I_tilde = I.value;
  pr.norm_f = std::pow(eps_fp.value / epsilon, 1.0 / pq.p);
  pr.norm_a = na.value;
  pr.ratio = (epsilon * I.value) / eps_norms;
  pr.budget = I.rel_error() + eps_fp.rel_error() / std::fabs(pq.p) + eps_aq_err / (eps_aq * std::fabs(pq.q)) +
              10.0 * kEps;
  pr.gap = std::fabs(constants::k_closed(pb.params).value - pr.ratio);
  return pr;
}

SweepResult sweep(const std::vector<double>& eps_grid, const ExponentPair& pq, const lab::Problem& pb,
                  std::size_t threads) {
  if (pq.regime != Regime::p_gt_1) throw PreconditionError("forward sweep requires p>1");
  return run(eps_grid, pq, pb, threads, true);
}

SweepResult reverse_sweep(const std::vector<double>& eps_grid, const ExponentPair& pq, const lab::Problem& pb,
                          std::size_t threads) {
  if (pq.regime == Regime::p_gt_1) throw PreconditionError("reverse sweep requires p<0 or 0<p<1");
  return run(eps_grid, pq, pb, threads, false);
}

std::optional<Limit> richardson(const std::vector<double>& eps, const std::vector<double>& values) {
  if (eps.size() != values.size()) throw DomainError("richardson needs matching abscissae and values");
  const std::size_t n = eps.size();
  if (n < 3) return std::nullopt;
  const double x0 = eps[n - 3], x1 = eps[n - 2], x2 = eps[n - 1];
  const double y0 = values[n - 3], y1 = values[n - 2], y2 = values[n - 1];
  // Lagrange interpolation evaluated at 0
  const double quad = y0 * (x1 * x2) / ((x0 - x1) * (x0 - x2)) + y1 * (x0 * x2) / ((x1 - x0) * (x1 - x2)) +
                      y2 * (x0 * x1) / ((x2 - x0) * (x2 - x1));
  const double lin = (y2 * x1 - y1 * x2) / (x1 - x2);
  return Limit{quad, std::fabs(quad - lin)};
}

}  // namespace halfhilbert::sharpness
