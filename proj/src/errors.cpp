#include "halfhilbert/errors.hpp"

namespace halfhilbert {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::not_applicable: return "not-applicable";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::invariant: return "invariant";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::consistency: return "internal-consistency";
    case ErrorKind::iteration: return "iteration";
    case ErrorKind::sharpness: return "sharpness-failure";
    case ErrorKind::validation: return "validation";
  }
  return "unknown";
}

namespace {
std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : Error(ErrorKind::validation, join(problems)), violations(std::move(problems)) {}

}  // namespace halfhilbert
