#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "annulus/analytic_solver.hpp"
#include "annulus/certify.hpp"
#include "annulus/inequalities.hpp"
#include "annulus/solution_io.hpp"
#include "annulus/svg.hpp"

namespace annulus::cli {

enum Exit { Ok = 0, Failed = 1, BadParameter = 2, IoFailure = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Grid {
  double lo = 0, hi = 0;
  int n = 0;
};

struct RunConfig {
  std::string command;
  double a = 1.0, b = 3.0;
  std::vector<double> lambdas;
  std::optional<Grid> grid;
  std::string out;     // empty: stdout
  std::string format;  // empty: command default
  std::uint64_t seed = 1;
  OracleLimits budget;
  int n_max = 52;
  // solve
  std::string variant = "ring";  // ring, inner, outer
  // render
  int member = 0;
  std::string solution_path;
  // certify
  bool descent = true;
  int descent_M = 360;
  int restarts = 16;
  bool timing = false;
  // fuzz
  long long fuzz_n = 10000;
};

// ---------------------------------------------------------------------------
// parsing helpers

inline double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t k = 0;
    double v = std::stod(s, &k);
    if (k != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParameterError(std::string("cannot parse ") + what + ": '" + s + "'");
  }
}

inline long long parse_int(const std::string& s, const char* what) {
  try {
    std::size_t k = 0;
    long long v = std::stoll(s, &k);
    if (k != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParameterError(std::string("cannot parse ") + what + ": '" + s + "'");
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

inline std::vector<double> parse_lambda_list(const std::string& s) {
  std::vector<double> v;
  for (auto const& p : split(s, ',')) v.push_back(parse_double(p, "lambda"));
  if (v.empty()) throw ParameterError("empty lambda list");
  return v;
}

inline Grid parse_grid(const std::string& s) {
  auto p = split(s, ':');
  if (p.size() != 3) throw ParameterError("lambda grid must be lo:hi:n");
  Grid g{parse_double(p[0], "grid lo"), parse_double(p[1], "grid hi"), static_cast<int>(parse_int(p[2], "grid n"))};
  if (!(g.lo < g.hi) || g.n < 2) throw ParameterError("lambda grid needs lo < hi and n >= 2");
  return g;
}

inline OracleLimits parse_budget(const std::string& s) {
  auto p = split(s, ':');
  if (p.size() != 3) throw ParameterError("oracle budget must be p:q:grid");
  OracleLimits l;
  l.p_max = static_cast<int>(parse_int(p[0], "budget p"));
  l.q_max = static_cast<int>(parse_int(p[1], "budget q"));
  l.grid_n = static_cast<int>(parse_int(p[2], "budget grid"));
  if (l.p_max < -1 || l.q_max < 1 || l.grid_n < 2) throw ParameterError("oracle budget out of range");
  return l;
}

inline std::vector<double> grid_points(const Grid& g) {
  std::vector<double> v(static_cast<std::size_t>(g.n));
  for (int i = 0; i < g.n; ++i) v[static_cast<std::size_t>(i)] = g.lo + (g.hi - g.lo) * i / (g.n - 1);
  v.back() = g.hi;
  return v;
}

inline std::vector<double> all_lambdas(const RunConfig& c) {
  if (c.grid) return grid_points(*c.grid);
  return c.lambdas;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void emit(const RunConfig& c, const std::string& text, std::ostream& os) {
  if (c.out.empty()) {
    os << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw IoError("cannot open " + c.out + " for writing");
  f << text;
  if (!f) throw IoError("write to " + c.out + " failed");
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline double single_lambda(const RunConfig& c) {
  if (c.grid || c.lambdas.size() != 1) throw ParameterError("this command needs exactly one --lambda value");
  return c.lambdas.front();
}

// ---------------------------------------------------------------------------
// commands; each returns an exit code and writes its payload

inline nlohmann::json no_solution_json(const NoSolution& n, double a, double lambda) {
  nlohmann::json j;
  j["no_solution"] = true;
  j["reason"] = n.reason;
  j["a"] = sig(a);
  j["lambda"] = sig(lambda);
  nlohmann::json w = nlohmann::json::array();
  for (std::size_t i = 0; i < n.witness_b.size(); ++i) w.push_back({{"b", sig(n.witness_b[i])}, {"J", sig(n.witness_J[i])}});
  j["witnesses"] = w;
  return j;
}

inline int cmd_solve(const RunConfig& c, std::ostream& os) {
  double lambda = single_lambda(c);
  nlohmann::json j;
  if (c.variant == "ring") {
    j = solution_to_json(solve(make_ring(c.a, c.b), lambda));
  } else if (c.variant == "inner") {
    auto r = solve_inner_only(c.a, lambda);
    if (auto* s = std::get_if<Solution>(&r)) j = solution_to_json(*s);
    else j = no_solution_json(std::get<NoSolution>(r), c.a, lambda);
  } else if (c.variant == "outer") {
    j = solution_to_json(solve_outer_only(c.b, lambda));
  } else {
    throw ParameterError("variant must be ring, inner or outer");
  }
  emit(c, dump(j), os);
  return Ok;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& os) {
  if (!c.grid) throw ParameterError("sweep needs --lambda-grid lo:hi:n");
  auto rows = sweep(make_ring(c.a, c.b), grid_points(*c.grid));
  std::string fmt = c.format.empty() ? "csv" : c.format;
  if (fmt == "csv") emit(c, sweep_csv(rows), os);
  else if (fmt == "json") emit(c, dump(sweep_json(rows)), os);
  else throw ParameterError("sweep format must be csv or json");
  return Ok;
}

inline std::string beta_table_csv(int n_max) {
  if (n_max < 3) throw ParameterError("n-max must be >= 3");
  std::string s = "n,beta,betahat\n";
  char buf[96];
  for (int n = 3; n <= n_max; ++n) {
    std::snprintf(buf, sizeof buf, "%d,%.5f,%.5f\n", n, beta(n), betahat(n));
    s += buf;
  }
  return s;
}

inline int cmd_beta_table(const RunConfig& c, std::ostream& os) {
  emit(c, beta_table_csv(c.n_max), os);
  return Ok;
}

inline Solution load_solution(const std::string& path) {
  std::string text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(path + ": " + e.what());
  }
  return solution_from_json(j);
}

inline int cmd_render(const RunConfig& c, std::ostream& os) {
  Solution s;
  if (!c.solution_path.empty()) {
    s = load_solution(c.solution_path);
  } else if (c.variant == "outer") {
    s = solve_outer_only(c.b, single_lambda(c));
  } else {
    s = solve(make_ring(c.a, c.b), single_lambda(c));
  }
  if (s.bodies.empty()) throw ParameterError("solution carries no body to render");
  if (c.member < 0 || c.member >= static_cast<int>(s.bodies.size()))
    throw ParameterError("member index out of range (0.." + std::to_string(s.bodies.size() - 1) + ")");
  SvgOptions o;
  o.title = std::string(to_string(s.regime)) + " lambda=" + num::fmt_sig(s.lambda) + " a=" + num::fmt_sig(s.a) +
            " b=" + num::fmt_sig(s.b);
  emit(c, render_svg(s.bodies[static_cast<std::size_t>(c.member)], s.a, s.b, o), os);
  return Ok;
}

inline CertifyBudget certify_budget(const RunConfig& c) {
  CertifyBudget bud;
  bud.enumeration = c.budget;
  bud.run_descent = c.descent;
  bud.descent.M = c.descent_M;
  bud.descent.restarts = c.restarts;
  bud.descent.seed = c.seed;
  return bud;
}

inline int cmd_certify(const RunConfig& c, std::ostream& os) {
  CertifyBudget bud = certify_budget(c);
  std::vector<CertifyReport> reps;
  if (!c.solution_path.empty()) {
    Solution s = load_solution(c.solution_path);
    RingParams ring = make_ring(s.a, s.b);
    reps.push_back(certify(s, ring, s.lambda, bud));
  } else {
    auto ls = all_lambdas(c);
    if (ls.empty()) throw ParameterError("certify needs --solution, --lambda or --lambda-grid");
    RingParams ring = make_ring(c.a, c.b);
    for (double l : ls) reps.push_back(certify(solve(ring, l), ring, l, bud));
  }
  nlohmann::json arr = nlohmann::json::array();
  bool pass = true;
  for (auto const& r : reps) {
    arr.push_back(report_to_json(r, c.timing));
    pass = pass && r.pass;
  }
  nlohmann::json j{{"pass", pass}, {"reports", arr}};
  emit(c, dump(j), os);
  return pass ? Ok : Failed;
}

inline int cmd_fuzz(const RunConfig& c, std::ostream& os) {
  FuzzOptions o;
  o.n = c.fuzz_n;
  o.seed = c.seed;
  FuzzSummary s = fuzz(o);
  std::string fmt = c.format.empty() ? "json" : c.format;
  if (fmt == "json") emit(c, dump(fuzz_to_json(s)), os);
  else if (fmt == "csv") emit(c, witnesses_csv(s), os);
  else throw ParameterError("fuzz format must be json or csv");
  return s.ok() ? Ok : Failed;
}

// Dispatch with the exit-code mapping; messages go to err.
inline int run(const RunConfig& c, std::ostream& os, std::ostream& err) {
  try {
    if (c.command == "solve") return cmd_solve(c, os);
    if (c.command == "sweep") return cmd_sweep(c, os);
    if (c.command == "beta-table") return cmd_beta_table(c, os);
    if (c.command == "render") return cmd_render(c, os);
    if (c.command == "certify") return cmd_certify(c, os);
    if (c.command == "fuzz") return cmd_fuzz(c, os);
    err << "unknown command '" << c.command << "'\n";
    return BadParameter;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return IoFailure;
  } catch (const std::invalid_argument& e) {  // ParameterError, ConfigError
    err << "error: " << e.what() << "\n";
    return BadParameter;
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << "\n";
    return BadParameter;
  } catch (const RegimeError& e) {
    err << "error: " << e.what() << "\n";
    return BadParameter;
  }
}

}  // namespace annulus::cli
