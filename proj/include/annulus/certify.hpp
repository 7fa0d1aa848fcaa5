#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <json.hpp>

#include "annulus/analytic_solver.hpp"
#include "annulus/oracle.hpp"
#include "annulus/solution_io.hpp"

namespace annulus {

inline constexpr double enumeration_tol = 1e-9;
inline constexpr double descent_tol = 5e-2;

struct CertifyBudget {
  OracleLimits enumeration;
  SupportDescentOptions descent;
  bool run_descent = true;
};

struct OracleCheck {
  OracleMethod method = OracleMethod::ConfigEnumeration;
  double J_oracle = 0.0;
  double gap = 0.0;  // J(solution) - J(oracle); <= tol passes
  double tol = 0.0;
  bool pass = false;
  long long evaluations = 0;
  double wall_ms = 0.0;
};

struct CertifyReport {
  double lambda = 0.0, a = 0.0, b = 0.0;
  std::string regime;
  double J_solution = 0.0;
  std::vector<OracleCheck> checks;
  bool pass = false;
  std::string note;  // set when the solution itself is unusable
};

// J of a solution recomputed from its data rather than trusted: the config if
// one is present, else the canonical body.
inline double recompute_J(const Solution& s, const RingParams& ring, double lambda) {
  if (s.config) return evaluate_J(*s.config, ring, lambda);
  if (!s.bodies.empty()) return lambda * area(s.bodies.front()) - perimeter(s.bodies.front());
  return s.J;
}

inline CertifyReport certify(const Solution& sol, const RingParams& ring, double lambda, const CertifyBudget& budget = {}) {
  CertifyReport rep;
  rep.lambda = lambda;
  rep.a = ring.a;
  rep.b = ring.b;
  rep.regime = to_string(sol.regime);
  try {
    rep.J_solution = recompute_J(sol, ring, lambda);
  } catch (const std::exception& e) {
    rep.note = std::string("solution does not evaluate: ") + e.what();
    rep.pass = false;
    return rep;
  }
  using clock = std::chrono::steady_clock;
  auto run = [&](OracleMethod m) {
    OracleCheck c;
    c.method = m;
    auto t0 = clock::now();
    OracleResult r = m == OracleMethod::ConfigEnumeration ? enumerate_configs(ring, lambda, budget.enumeration)
                                                          : support_descent(ring, lambda, budget.descent);
    c.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    c.J_oracle = r.J;
    c.gap = rep.J_solution - r.J;
    c.tol = m == OracleMethod::ConfigEnumeration ? enumeration_tol : descent_tol;
    c.pass = c.gap <= c.tol;
    c.evaluations = r.evaluations;
    rep.checks.push_back(c);
  };
  run(OracleMethod::ConfigEnumeration);
  if (budget.run_descent) run(OracleMethod::SupportDescent);
  rep.pass = true;
  for (auto const& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

// Wall time breaks byte-determinism of reports, so it is opt-in.
inline nlohmann::json report_to_json(const CertifyReport& r, bool timing = false) {
  nlohmann::json j;
  j["lambda"] = sig(r.lambda);
  j["a"] = sig(r.a);
  j["b"] = sig(r.b);
  j["regime"] = r.regime;
  j["J_solution"] = sig(r.J_solution);
  j["pass"] = r.pass;
  if (!r.note.empty()) j["note"] = r.note;
  nlohmann::json cs = nlohmann::json::array();
  for (auto const& c : r.checks) {
    nlohmann::json o;
    o["oracle"] = to_string(c.method);
    o["J"] = sig(c.J_oracle);
    o["gap"] = sig(c.gap);
    o["tol"] = c.tol;
    o["pass"] = c.pass;
    o["evaluations"] = c.evaluations;
    if (timing) o["wall_ms"] = sig(c.wall_ms);
    cs.push_back(o);
  }
  j["oracles"] = cs;
  return j;
}

}  // namespace annulus
