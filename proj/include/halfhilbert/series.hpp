#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "halfhilbert/quadrature.hpp"

namespace halfhilbert::series {

struct Options {
  /// Relative size below which both the current term and the tail bound must fall.
  double term_tol = 1e-12;
  std::size_t max_terms = 10'000'000;
  /// When off, summation stops on small terms alone and no tail is certified.
  bool tail_mode = true;
  /// Index at which direct summation hands over to the Euler-Maclaurin tail.
  std::size_t switch_index = 512;
  quad::Options quad{1e-11};
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t terms = 0;
  double tail = 0.0;
};

/// Sum of term(n) over n = 1, 2, ...
///
/// term must accept integer arguments; when smooth_from is set it must also
/// accept real t >= smooth_from and be smooth and eventually decreasing there.
/// A finite sequence passes its length and is summed exactly.
Result sum(const std::function<double(double)>& term, std::optional<double> smooth_from, const Options& opt = {},
           std::optional<std::size_t> length = std::nullopt);

}  // namespace halfhilbert::series
