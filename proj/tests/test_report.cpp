#include <cmath>

#include "doctest.h"
#include "halfhilbert/report.hpp"

using namespace halfhilbert;
using report::Json;

TEST_SUITE("report") {

TEST_CASE("doubles round-trip with 17 digits") {
  CHECK(report::format_double(0.1) == "0.10000000000000001");
  CHECK(report::format_double(1.0) == "1");
  CHECK(report::format_double(1e-300) == "1e-300");
  CHECK(report::format_double(2.0 / 3.0) == "0.66666666666666663");
  for (double v : {0.1, 1.0 / 3.0, 1.6449340668482264, 6.02e23, -2.5e-17})
    CHECK(std::stod(report::format_double(v)) == v);
}

TEST_CASE("dump keeps key order and nulls non-finite values") {
  Json j;
  j["zeta"] = 1.5;
  j["alpha"] = NAN;
  j["mid"] = INFINITY;
  j["list"] = Json::array({0.1, 2});
  const std::string s = report::dump(j, -1);
  CHECK(s == R"({"zeta":1.5,"alpha":null,"mid":null,"list":[0.10000000000000001,2]})");
  CHECK(report::dump(j, 2).find("\n  \"zeta\": 1.5") != std::string::npos);
}

TEST_CASE("report serialization") {
  lab::VerificationReport r{"bilinear", "p-gt-1", 1.0, 2.0, 0.5, "<", true, 1e-10};
  const Json j = report::to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"id", "regime", "lhs", "rhs", "direction", "margin", "budget", "status"});
  CHECK(j["status"] == "pass");
  const std::string csv = report::csv_reports({r});
  CHECK(csv == "id,regime,lhs,rhs,margin,budget,status\nbilinear,p-gt-1,1,2,0.5,1e-10,pass\n");
}

TEST_CASE("sweep serialization") {
  sharpness::SweepResult s;
  s.regime = "p-gt-1";
  s.k_sigma = 1.5;
  s.probes.push_back({});
  s.probes.back().epsilon = 0.1;
  auto j = report::to_json(s);
  CHECK(j["limit"].is_null());
  s.limit = sharpness::Limit{1.4, 0.01};
  j = report::to_json(s);
  CHECK(j["limit"]["value"] == 1.4);
  CHECK(report::csv_sweep(s).rfind("epsilon,ratio,gap,budget\n0.10000000000000001,", 0) == 0);
}

TEST_CASE("csv rows") {
  std::vector<Json> rows;
  Json a;
  a["x"] = 1;
  a["note"] = "a,b";
  a["obj"] = Json::object({{"k", 2}});
  rows.push_back(a);
  const std::string csv = report::csv_rows(rows);
  CHECK(csv.rfind("x,note,obj\n", 0) == 0);
  CHECK(csv.find("\"a,b\"") != std::string::npos);
  CHECK(report::csv_rows({}).empty());
}

}
