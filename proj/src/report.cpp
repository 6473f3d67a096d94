#include "halfhilbert/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace halfhilbert::report {

namespace {

void emit(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + Json(k).dump() + sep;
        emit(v, indent, depth + 1, out);
      }
      out += nl + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) {
          out += ",";
          out += nl;
        }
        out += pad;
        emit(j[i], indent, depth + 1, out);
      }
      out += nl + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default: out += j.dump(); return;
  }
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_null()) return "";
  if (v.is_structured()) return csv_cell(Json(dump(v, 0)));
  return v.dump();
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const Json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  return out;
}

Json to_json(const lab::VerificationReport& r) {
  Json j;
  j["id"] = r.id;
  j["regime"] = r.regime;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["direction"] = r.direction;
  j["margin"] = r.margin;
  j["budget"] = r.budget;
  j["status"] = r.pass ? "pass" : "fail";
  return j;
}

Json to_json(const lab::IdentityCheck& c) {
  Json j;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["rel_diff"] = c.rel_diff;
  return j;
}

Json to_json(const sharpness::SharpnessProbe& p) {
  Json j;
  j["epsilon"] = p.epsilon;
  j["sigma_tilde"] = p.sigma_tilde;
  j["I_tilde"] = p.I_tilde;
  j["norm_f"] = p.norm_f;
  j["norm_a"] = p.norm_a;
  j["ratio"] = p.ratio;
  j["gap"] = p.gap;
  j["budget"] = p.budget;
  j["k_sigma_tilde"] = p.k_sigma_tilde;
  return j;
}

Json to_json(const sharpness::SweepResult& s) {
  Json j;
  j["regime"] = s.regime;
  j["k_sigma"] = s.k_sigma;
  Json probes = Json::array();
  for (const auto& p : s.probes) probes.push_back(to_json(p));
  j["probes"] = probes;
  if (s.limit) {
    j["limit"] = {{"value", s.limit->value}, {"error", s.limit->error},
                  {"rel_diff", std::fabs(s.limit->value - s.k_sigma) / s.k_sigma}};
  } else {
    j["limit"] = nullptr;
  }
  j["gap_nonincreasing"] = s.gap_nonincreasing;
  return j;
}

Json to_json(const lab::OperatorNormEstimate& e) {
  Json j;
  j["estimate"] = e.estimate;
  j["k_sigma"] = e.k_sigma;
  j["ratio"] = e.estimate / e.k_sigma;
  j["iterations"] = e.iterations;
  j["function_cells"] = e.function_cells;
  j["sequence_cells"] = e.sequence_cells;
  j["trace"] = e.trace;
  return j;
}

Json to_json(const coefficients::CheckSummary& s) {
  Json j;
  j["id"] = s.id;
  j["samples"] = s.samples;
  j["failures"] = s.failures;
  j["worst_margin"] = s.worst_margin;
  j["status"] = s.pass ? "pass" : "fail";
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

std::string csv_reports(const std::vector<lab::VerificationReport>& reports) {
  std::vector<Json> rows;
  for (const auto& r : reports) {
    Json j;
    j["id"] = r.id;
    j["regime"] = r.regime;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["budget"] = r.budget;
    j["status"] = r.pass ? "pass" : "fail";
    rows.push_back(j);
  }
  if (rows.empty()) return "id,regime,lhs,rhs,margin,budget,status\n";
  return csv_rows(rows);
}

std::string csv_sweep(const sharpness::SweepResult& s) {
  std::ostringstream os;
  os << "epsilon,ratio,gap,budget\n";
  for (const auto& p : s.probes)
    os << format_double(p.epsilon) << ',' << format_double(p.ratio) << ',' << format_double(p.gap) << ','
       << format_double(p.budget) << '\n';
  return os.str();
}

std::string csv_rows(const std::vector<Json>& rows) {
  if (rows.empty()) return "";
  std::vector<std::string> keys;
  for (const auto& row : rows)
    for (const auto& [k, v] : row.items())
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  std::ostringstream os;
  for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) os << ',';
      if (row.contains(keys[i])) os << csv_cell(row[keys[i]]);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace halfhilbert::report
