#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace halfhilbert {

enum class ErrorKind {
  domain,
  overflow,
  convergence,
  not_applicable,
  precondition,
  invariant,
  divergence,
  consistency,
  iteration,
  sharpness,
  validation,
};

const char* to_string(ErrorKind kind);

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};

struct OverflowError : Error {
  explicit OverflowError(const std::string& w) : Error(ErrorKind::overflow, w) {}
};

/// Raised when a series or quadrature exhausts its budget. Carries the partial
/// value and the size of the unresolved remainder.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& w, double partial_value, double estimate)
      : Error(ErrorKind::convergence, w), partial(partial_value), remainder(estimate) {}
  double partial;
  double remainder;
};

struct NotApplicableError : Error {
  explicit NotApplicableError(const std::string& w) : Error(ErrorKind::not_applicable, w) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(ErrorKind::precondition, w) {}
};

struct InvariantError : Error {
  explicit InvariantError(const std::string& w) : Error(ErrorKind::invariant, w) {}
};

struct DivergenceError : Error {
  explicit DivergenceError(const std::string& w) : Error(ErrorKind::divergence, w) {}
};

struct ConsistencyError : Error {
  explicit ConsistencyError(const std::string& w) : Error(ErrorKind::consistency, w) {}
};

struct IterationError : Error {
  IterationError(const std::string& w, std::vector<double> ratio_trace)
      : Error(ErrorKind::iteration, w), trace(std::move(ratio_trace)) {}
  std::vector<double> trace;
};

struct SharpnessError : Error {
  explicit SharpnessError(const std::string& w) : Error(ErrorKind::sharpness, w) {}
};

/// Aggregates every violated constraint of a configuration.
struct ValidationError : Error {
  explicit ValidationError(std::vector<std::string> problems);
  std::vector<std::string> violations;
};

}  // namespace halfhilbert
