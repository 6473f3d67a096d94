#include "halfhilbert/params.hpp"

#include <sstream>

#include "halfhilbert/errors.hpp"

namespace halfhilbert {

std::vector<std::string> KernelParams::violations() const {
  std::vector<std::string> out;
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(rho) || !(rho > 0.0)) out.emplace_back("require rho>0");
  if (!finite(alpha) || !(alpha >= 0.0) || !(alpha <= rho)) out.emplace_back("require 0<=alpha<=rho");
  if (!finite(gamma_exp) || !finite(sigma) || !(gamma_exp > 0.0) || !(gamma_exp < sigma))
    out.emplace_back("require 0<gamma<sigma");
  if (delta != 1 && delta != -1) out.emplace_back("require delta in {-1,1}");
  return out;
}

std::vector<std::string> KernelParams::theorem_violations() const {
  auto out = violations();
  if (!(sigma <= 1.0)) out.emplace_back("require sigma<=1");
  return out;
}

namespace {
void throw_if(const std::vector<std::string>& v) {
  if (v.empty()) return;
  std::string msg;
  for (const auto& s : v) msg += (msg.empty() ? "" : "; ") + s;
  throw DomainError(msg);
}
}  // namespace

void KernelParams::require_valid() const { throw_if(violations()); }
void KernelParams::require_theorem_regime() const { throw_if(theorem_violations()); }

const char* to_string(Regime r) {
  switch (r) {
    case Regime::p_gt_1: return "p-gt-1";
    case Regime::p_lt_0: return "p-lt-0";
    case Regime::p_in_01: return "p-in-01";
  }
  return "?";
}

ExponentPair ExponentPair::from_p(double p) {
  if (!std::isfinite(p) || p == 0.0 || p == 1.0) throw DomainError("require p != 0, 1 and finite");
  ExponentPair e;
  e.p = p;
  e.q = p / (p - 1.0);
  e.regime = p > 1.0 ? Regime::p_gt_1 : (p < 0.0 ? Regime::p_lt_0 : Regime::p_in_01);
  return e;
}

}  // namespace halfhilbert
