#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "halfhilbert/lab.hpp"

namespace halfhilbert::sharpness {

struct SharpnessProbe {
  double epsilon = 0.0;
  double sigma_tilde = 0.0;
  double I_tilde = 0.0;
  double norm_f = 0.0;
  double norm_a = 0.0;
  /// I~ / (||f~|| ||a~||), formed from eps I~ and eps ||f~|| ||a~||.
  double ratio = 0.0;
  double gap = 0.0;
  double budget = 0.0;
  double k_sigma_tilde = 0.0;
};

struct Limit {
  double value = 0.0;
  double error = 0.0;
};

struct SweepResult {
  std::string regime;
  double k_sigma = 0.0;
  std::vector<SharpnessProbe> probes;
  /// Richardson limit of ratio(eps) at eps = 0; absent for fewer than three probes.
  std::optional<Limit> limit;
  bool gap_nonincreasing = true;
};

/// Open interval of admissible eps for the regime: (0, q(sigma-gamma)) or (0, p(sigma-gamma)).
double epsilon_bound(const ExponentPair& pq, const KernelParams& params);

/// sigma~ = sigma - eps/q (p>1, p<0) or sigma + eps/p (0<p<1).
double sigma_tilde(double epsilon, const ExponentPair& pq, const KernelParams& params);

/// f~ supported on 0 < x^delta <= 1 and a~ for the regime.
std::pair<lab::TestFunction, lab::TestSequence> extremal_pair(double epsilon, const ExponentPair& pq,
                                                              const KernelParams& params);

std::vector<double> default_grid();
/// Grid points inside the admissible interval, order kept.
std::vector<double> clip_grid(const std::vector<double>& grid, const ExponentPair& pq, const KernelParams& params);

SharpnessProbe probe(double epsilon, const ExponentPair& pq, const lab::Problem& pb);

/// Forward sweep for p>1: every ratio must stay below k(sigma).
SweepResult sweep(const std::vector<double>& eps_grid, const ExponentPair& pq, const lab::Problem& pb,
                  std::size_t threads = 0);

/// Reverse sweep for p<0 or 0<p<1: every ratio must stay above k(sigma).
SweepResult reverse_sweep(const std::vector<double>& eps_grid, const ExponentPair& pq, const lab::Problem& pb,
                          std::size_t threads = 0);

/// Quadratic extrapolation to 0 through the last three points; error is its distance
/// from the linear extrapolation through the last two.
std::optional<Limit> richardson(const std::vector<double>& eps, const std::vector<double>& values);

}  // namespace halfhilbert::sharpness
