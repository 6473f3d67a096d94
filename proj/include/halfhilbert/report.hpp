#pragma once

#include <string>
#include <vector>

#include "halfhilbert/coefficients.hpp"
#include "halfhilbert/lab.hpp"
#include "halfhilbert/sharpness.hpp"
#include "json.hpp"

namespace halfhilbert::report {

using Json = nlohmann::ordered_json;

/// 17 significant digits, round-trip exact for binary64.
std::string format_double(double v);

/// JSON text with keys in insertion order and doubles written by format_double.
/// Non-finite doubles become null.
std::string dump(const Json& j, int indent = 2);

Json to_json(const lab::VerificationReport& r);
Json to_json(const lab::IdentityCheck& c);
Json to_json(const sharpness::SharpnessProbe& p);
Json to_json(const sharpness::SweepResult& s);
Json to_json(const lab::OperatorNormEstimate& e);
Json to_json(const coefficients::CheckSummary& s);

/// Columns id, regime, lhs, rhs, margin, budget, status.
std::string csv_reports(const std::vector<lab::VerificationReport>& reports);
/// Columns epsilon, ratio, gap, budget.
std::string csv_sweep(const sharpness::SweepResult& s);
/// Header from the keys of the first row; nested values are written as JSON text.
std::string csv_rows(const std::vector<Json>& rows);

}  // namespace halfhilbert::report
