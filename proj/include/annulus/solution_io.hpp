#pragma once

#include <sstream>
#include <string>

#include <json.hpp>

#include "annulus/analytic_solver.hpp"
#include "annulus/body_io.hpp"

namespace annulus {

// Scalars go out with 10 significant digits; bodies keep full precision.
inline nlohmann::json sig(double v) { return num::round_sig(v, 10); }

inline nlohmann::json config_to_json(const AngleConfig& c) {
  nlohmann::json t = nlohmann::json::array(), ch = nlohmann::json::array();
  for (double x : c.tangent) t.push_back(sig(x));
  for (double x : c.chords) ch.push_back(sig(x));
  return {{"p", c.p}, {"tangent", t}, {"chords", ch}};
}

inline AngleConfig config_from_json(const nlohmann::json& j) {
  try {
    AngleConfig c;
    c.p = j.at("p").get<int>();
    c.tangent = j.value("tangent", std::vector<double>{});
    c.chords = j.value("chords", std::vector<double>{});
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed config JSON: ") + e.what());
  }
}

inline nlohmann::json certificate_to_json(const Certificate& c) {
  nlohmann::json j;
  j["kkt_residual"] = sig(c.kkt_residual);
  j["mu0"] = sig(c.mu0);
  j["multiplier_underdetermined"] = c.multiplier_underdetermined;
  auto opt = [](const std::optional<double>& v) { return v ? sig(*v) : nlohmann::json(nullptr); };
  j["xi0_multiplier_tangent"] = opt(c.xi0_multiplier_tangent);
  j["xi0_multiplier_chord"] = opt(c.xi0_multiplier_chord);
  j["chord_pair_residual"] = opt(c.chord_pair_residual);
  nlohmann::json ev = nlohmann::json::array();
  for (double v : c.hessian_eigenvalues) ev.push_back(sig(v));
  j["hessian_eigenvalues"] = ev;
  j["second_order_ok"] = c.second_order_ok;
  j["second_order_status"] = to_string(c.second_order_status);
  j["hpr_sum"] = opt(c.hpr_sum);
  return j;
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
  Certificate c;
  auto opt = [&](const char* k) -> std::optional<double> {
    if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
    return j.at(k).get<double>();
  };
  c.kkt_residual = j.value("kkt_residual", 0.0);
  c.mu0 = j.value("mu0", 0.0);
  c.multiplier_underdetermined = j.value("multiplier_underdetermined", false);
  c.xi0_multiplier_tangent = opt("xi0_multiplier_tangent");
  c.xi0_multiplier_chord = opt("xi0_multiplier_chord");
  c.chord_pair_residual = opt("chord_pair_residual");
  c.hessian_eigenvalues = j.value("hessian_eigenvalues", std::vector<double>{});
  c.second_order_ok = j.value("second_order_ok", false);
  std::string st = j.value("second_order_status", std::string("fail"));
  c.second_order_status = st == "ok" ? SecondOrderStatus::Ok
                          : st == "indeterminate" ? SecondOrderStatus::Indeterminate
                                                  : SecondOrderStatus::Fail;
  c.hpr_sum = opt("hpr_sum");
  return c;
}

inline nlohmann::json solution_to_json(const Solution& s) {
  nlohmann::json j;
  j["regime"] = to_string(s.regime);
  j["lambda"] = sig(s.lambda);
  j["a"] = sig(s.a);
  j["b"] = sig(s.b);
  j["config"] = s.config ? config_to_json(*s.config) : nlohmann::json(nullptr);
  j["J"] = sig(s.J);
  j["area"] = sig(s.area);
  j["perimeter"] = sig(s.perimeter);
  j["certificate"] = certificate_to_json(s.certificate);
  nlohmann::json bodies = nlohmann::json::array();
  for (auto const& b : s.bodies) bodies.push_back(body_to_json(b));
  j["bodies"] = bodies;
  if (s.configs.size() > 1) {
    nlohmann::json ties = nlohmann::json::array();
    for (auto const& c : s.configs) ties.push_back(config_to_json(c));
    j["tied_configs"] = ties;
  }
  if (s.family_note) j["family_note"] = *s.family_note;
  return j;
}

inline Solution solution_from_json(const nlohmann::json& j) {
  try {
    Solution s;
    auto tag = regime_from_string(j.at("regime").get<std::string>());
    if (!tag) throw ParameterError("unknown regime " + j.at("regime").get<std::string>());
    s.regime = *tag;
    s.lambda = j.at("lambda").get<double>();
    s.a = j.at("a").get<double>();
    s.b = j.at("b").get<double>();
    if (j.contains("config") && !j.at("config").is_null()) s.config = config_from_json(j.at("config"));
    s.J = j.at("J").get<double>();
    s.area = j.at("area").get<double>();
    s.perimeter = j.at("perimeter").get<double>();
    if (j.contains("certificate")) s.certificate = certificate_from_json(j.at("certificate"));
    if (j.contains("bodies"))
      for (auto const& b : j.at("bodies")) s.bodies.push_back(body_from_json(b));
    if (j.contains("tied_configs"))
      for (auto const& c : j.at("tied_configs")) s.configs.push_back(config_from_json(c));
    else if (s.config)
      s.configs.push_back(*s.config);
    if (j.contains("family_note")) s.family_note = j.at("family_note").get<std::string>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed solution JSON: ") + e.what());
  }
}

inline std::string join_angles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + num::fmt_sig(v[i]);
  return s;
}

inline const char* sweep_csv_header() {
  return "lambda_lo,lambda_hi,regime,shape,p,tangent_angles,chord_angles,area,perimeter,J\n";
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << sweep_csv_header();
  for (auto const& r : rows) {
    os << num::fmt_sig(r.lambda_lo) << ',' << num::fmt_sig(r.lambda_hi) << ',' << r.regime << ','
       << r.shape.describe() << ',';
    if (r.config)
      os << r.config->p << ',' << join_angles(r.config->tangent) << ',' << join_angles(r.config->chords);
    else
      os << ",,";
    os << ',' << num::fmt_sig(r.area) << ',' << num::fmt_sig(r.perimeter) << ',' << num::fmt_sig(r.J) << '\n';
  }
  return os.str();
}

inline nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (auto const& r : rows) {
    nlohmann::json j;
    j["lambda_lo"] = sig(r.lambda_lo);
    j["lambda_hi"] = sig(r.lambda_hi);
    j["regime"] = r.regime;
    j["shape"] = r.shape.describe();
    j["config"] = r.config ? config_to_json(*r.config) : nlohmann::json(nullptr);
    j["area"] = sig(r.area);
    j["perimeter"] = sig(r.perimeter);
    j["J"] = sig(r.J);
    out.push_back(j);
  }
  return out;
}

}  // namespace annulus
