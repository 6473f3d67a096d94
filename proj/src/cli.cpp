#include "halfhilbert/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "halfhilbert/coefficients.hpp"
#include "halfhilbert/constants.hpp"
#include "halfhilbert/errors.hpp"
#include "halfhilbert/lab.hpp"
#include "halfhilbert/parallel.hpp"
#include "halfhilbert/report.hpp"
#include "halfhilbert/sharpness.hpp"

namespace halfhilbert::cli {

namespace {

using report::Json;

struct RunConfig {
  std::string command;
  std::string preset = "unit-weights";
  std::optional<double> rho, alpha, gamma, sigma;
  std::optional<int> delta;
  std::string mu, nu, nu_tilde;
  double p = 2.0;
  std::string regime;
  std::string pair = "damped";
  bool identities = false;
  std::string eps;
  std::size_t iters = 60;
  std::string op = "T1";
  std::size_t grid_points = 512;
  std::string check = "all";
  std::string x_grid = "log:1e-3:1e3:1000";
  std::size_t n_max = 1000;
  std::string schemes = "unit-weights,unit-weights-shifted,power-weights";
  double quad_tol = 1e-10;
  double term_tol = 1e-12;
  double max_terms = 1e7;
  bool no_tail = false;
  double gate = 1e-8;
  std::string task = "constant";
  std::string rho_list, alpha_list, gamma_list, sigma_list, p_list;
  std::string json_path, csv_path;
  std::string format = "json";
  std::size_t threads = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<double> parse_list(const std::string& s, const std::string& name, std::vector<std::string>& problems) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (const auto& part : split(s, ',')) {
    const auto v = parse_double(part);
    if (!v) {
      problems.push_back(name + ": cannot parse '" + part + "'");
      continue;
    }
    out.push_back(*v);
  }
  return out;
}

/// Parameters, weights and accuracy resolved from the preset and the overrides.
struct Setup {
  KernelParams params;
  lab::Configuration conf{"", "", {}, weights::MuScheme::constant_one(), weights::NuScheme::constant_one()};
  lab::Accuracy acc;
  std::optional<ExponentPair> pq;
};

weights::MuScheme parse_mu(const std::string& s, std::vector<std::string>& problems) {
  const auto parts = split(s, ':');
  if (s == "one") return weights::MuScheme::constant_one();
  if (parts.size() == 2 && parts[0] == "inverse-power") {
    const auto b = parse_double(parts[1]);
    if (b) {
      try {
        return weights::MuScheme::inverse_power(*b);
      } catch (const Error& e) {
        problems.push_back(std::string("mu: ") + e.what());
        return weights::MuScheme::constant_one();
      }
    }
  }
  problems.push_back("mu: expected one or inverse-power:beta, got '" + s + "'");
  return weights::MuScheme::constant_one();
}

weights::NuScheme parse_nu(const std::string& s, std::vector<std::string>& problems) {
  const auto parts = split(s, ':');
  if (s == "one") return weights::NuScheme::constant_one();
  if (parts.size() == 3 && parts[0] == "power") {
    const auto b = parse_double(parts[1]), t = parse_double(parts[2]);
    if (b && t) {
      try {
        return weights::NuScheme::shifted_power(*b, *t);
      } catch (const Error& e) {
        problems.push_back(std::string("nu: ") + e.what());
        return weights::NuScheme::constant_one();
      }
    }
  }
  problems.push_back("nu: expected one or power:beta:tau, got '" + s + "'");
  return weights::NuScheme::constant_one();
}

void apply_nu_tilde(weights::NuScheme& nu, const std::string& s, std::vector<std::string>& problems) {
  const auto parts = split(s, ':');
  try {
    if (s == "zero") {
      nu.with_zero();
      return;
    }
    if (s == "half") {
      nu.with_half();
      return;
    }
    if (parts.size() == 2 && (parts[0] == "const" || parts[0] == "fraction")) {
      if (const auto v = parse_double(parts[1])) {
        if (parts[0] == "const") nu.with_constant(*v);
        else nu.with_fraction(*v);
        return;
      }
    }
  } catch (const Error& e) {
    problems.push_back(std::string("nu-tilde: ") + e.what());
    return;
  }
  problems.push_back("nu-tilde: expected zero, half, const:tau or fraction:lambda, got '" + s + "'");
}

bool needs_theorem(const std::string& cmd) { return cmd == "verify" || cmd == "sharpness" || cmd == "opnorm"; }

Setup resolve(const RunConfig& c) {
  std::vector<std::string> problems;
  Setup s;
  try {
    s.conf = lab::preset(c.preset);
  } catch (const Error& e) {
    problems.push_back(std::string("preset: ") + e.what());
  }
  s.params = s.conf.params;
  if (c.rho) s.params.rho = *c.rho;
  if (c.alpha) s.params.alpha = *c.alpha;
  if (c.gamma) s.params.gamma_exp = *c.gamma;
  if (c.sigma) s.params.sigma = *c.sigma;
  if (c.delta) s.params.delta = *c.delta;
  if (c.command != "sweep") {
    const auto v = needs_theorem(c.command) ? s.params.theorem_violations() : s.params.violations();
    problems.insert(problems.end(), v.begin(), v.end());
  }
  if (!c.mu.empty()) s.conf.mu = parse_mu(c.mu, problems);
  if (!c.nu.empty()) s.conf.nu = parse_nu(c.nu, problems);
  if (!c.nu_tilde.empty()) apply_nu_tilde(s.conf.nu, c.nu_tilde, problems);

  if (!(c.quad_tol > 0.0)) problems.push_back("require quad-tol>0");
  if (!(c.term_tol > 0.0)) problems.push_back("require term-tol>0");
  if (!(c.max_terms >= 10.0)) problems.push_back("require max-terms>=10");
  s.acc.quad_rel_tol = c.quad_tol;
  s.acc.term_tol = c.term_tol;
  s.acc.max_terms = static_cast<std::size_t>(c.max_terms);
  s.acc.tail_mode = !c.no_tail;

  const bool uses_p = c.command == "verify" || c.command == "sharpness" || c.command == "opnorm";
  if (uses_p) {
    if (!std::isfinite(c.p) || c.p == 0.0 || c.p == 1.0) {
      problems.push_back("require p != 0, 1");
    } else {
      s.pq = ExponentPair::from_p(c.p);
      if (!c.regime.empty() && c.regime != to_string(s.pq->regime))
        problems.push_back("regime " + c.regime + " does not match p=" + report::format_double(c.p) + " (" +
                           to_string(s.pq->regime) + ")");
    }
  }
  if (!c.regime.empty() && c.regime != "p-gt-1" && c.regime != "p-lt-0" && c.regime != "p-in-01")
    problems.push_back("regime must be one of p-gt-1, p-lt-0, p-in-01");
  if (c.format != "json" && c.format != "csv") problems.push_back("format must be json or csv");
  if (c.command == "verify") {
    const auto ids = lab::pair_ids();
    if (std::find(ids.begin(), ids.end(), c.pair) == ids.end()) problems.push_back("unknown pair '" + c.pair + "'");
  }
  if (c.command == "opnorm" && c.op != "T1" && c.op != "T2") problems.push_back("operator must be T1 or T2");
  if (c.command == "opnorm" && s.pq && s.pq->regime != Regime::p_gt_1) problems.push_back("opnorm requires p>1");
  if (c.command == "sharpness") {
    for (double e : parse_list(c.eps, "eps", problems))
      if (!(e > 0.0)) problems.push_back("eps values must be positive");
  }
  if (c.command == "coefficients") {
    const auto ids = coefficients::check_ids();
    if (c.check != "all" && std::find(ids.begin(), ids.end(), c.check) == ids.end())
      problems.push_back("unknown check '" + c.check + "'");
    const auto g = split(c.x_grid, ':');
    if (g.size() != 4 || g[0] != "log" || !parse_double(g[1]) || !parse_double(g[2]) || !parse_double(g[3]))
      problems.push_back("x-grid must be log:a:b:n");
  }
  if (c.command == "sweep" && c.task != "constant" && c.task != "verify")
    problems.push_back("task must be constant or verify");
  if (!problems.empty()) throw ValidationError(problems);
  return s;
}

Json params_json(const KernelParams& kp) {
  Json j;
  j["rho"] = kp.rho;
  j["alpha"] = kp.alpha;
  j["gamma"] = kp.gamma_exp;
  j["sigma"] = kp.sigma;
  j["delta"] = kp.delta;
  return j;
}

Json config_json(const RunConfig& c, const Setup& s) {
  Json j;
  j["command"] = c.command;
  j["preset"] = c.preset;
  j["params"] = params_json(s.params);
  j["mu"] = s.conf.mu.label();
  j["nu"] = s.conf.nu.label();
  j["p"] = c.p;
  j["regime"] = s.pq ? Json(to_string(s.pq->regime)) : Json(c.regime);
  j["pair"] = c.pair;
  j["identities"] = c.identities;
  j["eps"] = c.eps;
  j["iters"] = c.iters;
  j["operator"] = c.op;
  j["grid_points"] = c.grid_points;
  j["check"] = c.check;
  j["x_grid"] = c.x_grid;
  j["n_max"] = c.n_max;
  j["schemes"] = c.schemes;
  j["quad_tol"] = c.quad_tol;
  j["term_tol"] = c.term_tol;
  j["max_terms"] = c.max_terms;
  j["tail_mode"] = !c.no_tail;
  j["gate"] = c.gate;
  j["task"] = c.task;
  j["rho_list"] = c.rho_list;
  j["alpha_list"] = c.alpha_list;
  j["gamma_list"] = c.gamma_list;
  j["sigma_list"] = c.sigma_list;
  j["p_list"] = c.p_list;
  j["format"] = c.format;
  return j;
}

struct Outcome {
  Json result;
  bool pass = true;
  std::string csv;
};

Outcome cmd_constant(const RunConfig& c, const Setup& s) {
  Outcome o;
  const auto kc = constants::k_closed(s.params);
  const auto kq = constants::k_quadrature(s.params);
  const double agreement = std::fabs(kc.value - kq.value) / kc.value;
  o.result["k_closed"] = kc.value;
  o.result["k_quadrature"] = kq.value;
  o.result["k_quadrature_error"] = kq.error_estimate;
  o.result["agreement"] = agreement;
  o.result["gate"] = c.gate;
  o.pass = agreement <= c.gate;
  if (const auto ks = constants::k_special(s.params)) {
    const double d = std::fabs(ks->value - kc.value) / kc.value;
    o.result["k_special"] = ks->value;
    o.result["special_agreement"] = d;
    o.pass = o.pass && d <= 1e-10;
  } else {
    o.result["k_special"] = nullptr;
  }
  Json row = o.result;
  o.csv = report::csv_rows({row});
  return o;
}

Outcome cmd_verify(const RunConfig& c, const Setup& s) {
  Outcome o;
  const auto ws = s.conf.scheme();
  const lab::Problem pb{s.params, &ws, s.acc};
  const auto [f, a] = lab::preset_pair(c.pair, *s.pq, s.params);
  const auto reports = lab::verify(*s.pq, f, a, pb);
  o.result["function"] = f.label();
  o.result["sequence"] = a.label();
  Json arr = Json::array();
  for (const auto& r : reports) {
    arr.push_back(report::to_json(r));
    o.pass = o.pass && r.pass;
  }
  o.result["reports"] = arr;
  if (c.identities) {
    Json id;
    const auto i1 = lab::j1_identity(f, *s.pq, pb);
    id["series"] = report::to_json(i1);
    bool ok = i1.rel_diff <= 1e-6;
    const auto i2 = lab::j2_identity(a, *s.pq, pb);
    id["integral"] = report::to_json(i2);
    ok = ok && i2.rel_diff <= 1e-6;
    id["status"] = ok ? "pass" : "fail";
    o.pass = o.pass && ok;
    o.result["identities"] = id;
  }
  o.csv = report::csv_reports(reports);
  return o;
}

Outcome cmd_sharpness(const RunConfig& c, const Setup& s) {
  Outcome o;
  const auto ws = s.conf.scheme();
  const lab::Problem pb{s.params, &ws, s.acc};
  std::vector<std::string> problems;
  std::vector<double> grid = parse_list(c.eps, "eps", problems);
  if (grid.empty()) grid = sharpness::clip_grid(sharpness::default_grid(), *s.pq, s.params);
  const auto r = s.pq->regime == Regime::p_gt_1 ? sharpness::sweep(grid, *s.pq, pb, c.threads)
                                               : sharpness::reverse_sweep(grid, *s.pq, pb, c.threads);
  o.result = report::to_json(r);
  o.pass = r.gap_nonincreasing;
  o.csv = report::csv_sweep(r);
  return o;
}

Outcome cmd_opnorm(const RunConfig& c, const Setup& s) {
  Outcome o;
  const auto ws = s.conf.scheme();
  const lab::Problem pb{s.params, &ws, s.acc};
  lab::Discretization disc;
  disc.grid_points = c.grid_points;
  const auto e = lab::estimate_operator_norm(c.op == "T1" ? lab::Operator::T1 : lab::Operator::T2, *s.pq, pb, disc,
                                             c.iters);
  o.result = report::to_json(e);
  const bool ceiling = e.estimate <= e.k_sigma * (1.0 + 1e-6);
  const bool within = e.estimate >= 0.95 * e.k_sigma;
  o.result["ceiling"] = ceiling ? "pass" : "fail";
  o.result["within_5_percent"] = within ? "pass" : "fail";
  o.pass = ceiling && within;
  Json row;
  row["estimate"] = e.estimate;
  row["k_sigma"] = e.k_sigma;
  row["ratio"] = e.estimate / e.k_sigma;
  row["iterations"] = e.iterations;
  o.csv = report::csv_rows({row});
  return o;
}

Outcome cmd_coefficients(const RunConfig& c, const Setup& s) {
  Outcome o;
  const auto g = split(c.x_grid, ':');
  coefficients::CheckPlan plan;
  plan.x_grid = coefficients::log_grid(*parse_double(g[1]), *parse_double(g[2]),
                                       static_cast<std::size_t>(*parse_double(g[3])));
  plan.n_max = c.n_max;
  std::vector<std::string> ids = split(c.schemes, ',');
  auto run_one = [&](const std::string& id) {
    const auto conf = lab::preset(id);
    const auto ws = conf.scheme();
    return coefficients::run_checks(c.check, ws, s.params, plan);
  };
  const auto all = parallel_map(ids, run_one, c.threads);
  Json arr = Json::array();
  std::vector<Json> rows;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Json entry;
    entry["scheme"] = ids[i];
    Json checks = Json::array();
    for (const auto& cs : all[i]) {
      const Json cj = report::to_json(cs);
      checks.push_back(cj);
      o.pass = o.pass && cs.pass;
      Json row;
      row["scheme"] = ids[i];
      for (const auto& [k, v] : cj.items()) row[k] = v;
      rows.push_back(row);
    }
    entry["checks"] = checks;
    arr.push_back(entry);
  }
  o.result["schemes"] = arr;
  o.csv = report::csv_rows(rows);
  return o;
}

std::vector<double> list_or(const std::string& s, double fallback, const std::string& name,
                            std::vector<std::string>& problems) {
  auto v = parse_list(s, name, problems);
  if (v.empty()) v.push_back(fallback);
  return v;
}

Outcome cmd_sweep(const RunConfig& c, const Setup& s) {
  std::vector<std::string> problems;
  const auto rhos = list_or(c.rho_list, s.params.rho, "rho-list", problems);
  const auto alphas = list_or(c.alpha_list, s.params.alpha, "alpha-list", problems);
  const auto gammas = list_or(c.gamma_list, s.params.gamma_exp, "gamma-list", problems);
  const auto sigmas = list_or(c.sigma_list, s.params.sigma, "sigma-list", problems);
  const auto ps = list_or(c.p_list, c.p, "p-list", problems);
  if (!problems.empty()) throw ValidationError(problems);
  struct Tuple {
    KernelParams kp;
    double p;
  };
  std::vector<Tuple> tuples;
  for (double r : rhos)
    for (double al : alphas)
      for (double g : gammas)
        for (double sg : sigmas)
          for (double p : ps) {
            KernelParams kp = s.params;
            kp.rho = r;
            kp.alpha = al;
            kp.gamma_exp = g;
            kp.sigma = sg;
            tuples.push_back({kp, p});
          }
  const auto ws = s.conf.scheme();
  auto run_row = [&](const Tuple& t) {
    Json row = params_json(t.kp);
    if (c.task == "verify") row["p"] = t.p;
    try {
      if (c.task == "constant") {
        const auto kc = constants::k_closed(t.kp);
        const auto kq = constants::k_quadrature(t.kp);
        const double d = std::fabs(kc.value - kq.value) / kc.value;
        row["k_closed"] = kc.value;
        row["k_quadrature"] = kq.value;
        row["agreement"] = d;
        row["status"] = d <= c.gate ? "pass" : "fail";
      } else {
        if (!std::isfinite(t.p) || t.p == 0.0 || t.p == 1.0) throw ValidationError({"require p != 0, 1"});
        const auto pq = ExponentPair::from_p(t.p);
        const lab::Problem pb{t.kp, &ws, s.acc};
        const auto [f, a] = lab::preset_pair(c.pair, pq, t.kp);
        const auto reports = lab::verify(pq, f, a, pb);
        std::size_t passed = 0;
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& r : reports) {
          passed += r.pass ? 1 : 0;
          worst = std::min(worst, std::fabs(r.margin) - r.budget);
        }
        row["reports"] = reports.size();
        row["passed"] = passed;
        row["worst_excess"] = worst;
        row["status"] = passed == reports.size() ? "pass" : "fail";
      }
    } catch (const Error& e) {
      row["status"] = "error";
      row["error"] = to_string(e.kind());
      row["message"] = e.what();
    }
    return row;
  };
  const auto rows = parallel_map(tuples, run_row, c.threads);
  Outcome o;
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back(r);
    o.pass = o.pass && r["status"] == "pass";
  }
  o.result["rows"] = arr;
  o.csv = report::csv_rows(rows);
  return o;
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation:
    case ErrorKind::domain:
    case ErrorKind::precondition:
    case ErrorKind::not_applicable:
    case ErrorKind::divergence: return validation;
    case ErrorKind::sharpness: return failure;
    default: return convergence;
  }
}

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  f << text;
  return true;
}

void add_options(CLI::App& app, RunConfig& c) {
  app.add_option("--preset", c.preset, "configuration id: " + [] {
    std::string s;
    for (const auto& id : lab::preset_ids()) s += (s.empty() ? "" : ", ") + id;
    return s;
  }());
  app.add_option("--rho", c.rho, "kernel rho > 0");
  app.add_option("--alpha", c.alpha, "kernel alpha, 0 <= alpha <= rho");
  app.add_option("--gamma", c.gamma, "kernel exponent gamma");
  app.add_option("--sigma", c.sigma, "sigma, with 0 < gamma < sigma");
  app.add_option("--delta", c.delta, "delta in {-1, 1}");
  app.add_option("--mu", c.mu, "one | inverse-power:beta");
  app.add_option("--nu", c.nu, "one | power:beta:tau");
  app.add_option("--nu-tilde", c.nu_tilde, "zero | half | const:tau | fraction:lambda");
  app.add_option("--p", c.p, "exponent p (q = p/(p-1))");
  app.add_option("--regime", c.regime, "p-gt-1 | p-lt-0 | p-in-01, checked against p");
  app.add_option("--pair", c.pair, "test pair: damped | extremal | zero-sequence | zero-function");
  app.add_flag("--identities", c.identities, "also check the substitution identities");
  app.add_option("--eps", c.eps, "comma-separated decreasing epsilon grid");
  app.add_option("--iters", c.iters, "alternating maximization iterations");
  app.add_option("--operator", c.op, "T1 | T2");
  app.add_option("--grid-points", c.grid_points, "dense function cells on [1e-4, 1e4]");
  app.add_option("--check", c.check, "coefficient check id or all");
  app.add_option("--x-grid", c.x_grid, "log:a:b:n");
  app.add_option("--n-max", c.n_max, "largest n for the varpi checks");
  app.add_option("--schemes", c.schemes, "comma-separated configuration ids for coefficients");
  app.add_option("--quad-tol", c.quad_tol, "relative quadrature tolerance");
  app.add_option("--term-tol", c.term_tol, "relative series term tolerance");
  app.add_option("--max-terms", c.max_terms, "series term cap");
  app.add_flag("--no-tail", c.no_tail, "disable integral tail bounds");
  app.add_option("--gate", c.gate, "agreement gate for constant");
  app.add_option("--task", c.task, "sweep task: constant | verify");
  app.add_option("--rho-list", c.rho_list, "sweep values");
  app.add_option("--alpha-list", c.alpha_list, "sweep values");
  app.add_option("--gamma-list", c.gamma_list, "sweep values");
  app.add_option("--sigma-list", c.sigma_list, "sweep values");
  app.add_option("--p-list", c.p_list, "sweep values");
  app.add_option("--json", c.json_path, "write JSON here instead of stdout");
  app.add_option("--csv", c.csv_path, "also write CSV here");
  app.add_option("--format", c.format, "stdout format: json | csv");
  app.add_option("--threads", c.threads, "worker threads, 0 for all cores");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Numerical laboratory for half-discrete Hilbert-type inequalities"};
  app.set_config("--config", "", "flat key=value file; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  add_options(app, c);
  app.fallthrough();
  const std::vector<std::pair<std::string, std::string>> commands{
      {"constant", "k(sigma) by closed form, quadrature and special values"},
      {"verify", "inequality reports for a preset pair"},
      {"sharpness", "extremal-family sweep toward k(sigma)"},
      {"opnorm", "operator-norm lower bound by alternating maximization"},
      {"coefficients", "weight-coefficient bound checks"},
      {"sweep", "parameter cross-product driver"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? ok : validation;
  }
  for (const auto* sub : app.get_subcommands()) c.command = sub->get_name();

  try {
    const Setup s = resolve(c);
    Outcome o;
    if (c.command == "constant") o = cmd_constant(c, s);
    else if (c.command == "verify") o = cmd_verify(c, s);
    else if (c.command == "sharpness") o = cmd_sharpness(c, s);
    else if (c.command == "opnorm") o = cmd_opnorm(c, s);
    else if (c.command == "coefficients") o = cmd_coefficients(c, s);
    else o = cmd_sweep(c, s);

    Json doc;
    doc["command"] = c.command;
    doc["config"] = config_json(c, s);
    doc["result"] = o.result;
    doc["status"] = o.pass ? "pass" : "fail";
    const std::string json = report::dump(doc) + "\n";
    if (!c.json_path.empty()) {
      if (!write_file(c.json_path, json, err)) return validation;
    } else if (c.format == "json") {
      out << json;
    }
    if (!c.csv_path.empty() && !write_file(c.csv_path, o.csv, err)) return validation;
    if (c.format == "csv") out << o.csv;
    return o.pass ? ok : failure;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return convergence;
  }
}

}  // namespace halfhilbert::cli
