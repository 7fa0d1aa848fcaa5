#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "annulus/angle_model.hpp"
#include "annulus/geometry.hpp"
#include "annulus/numerics.hpp"
#include "annulus/oracle.hpp"

namespace annulus {

enum class Regime {
  OuterDisk,
  InscribedRegular,
  InscribedQuasiRegular,
  TriangleBand,
  MinSidePolygon,
  CircumscribedFamily,
  InnerDisk,
  OracleFallback,
  DoubleDiameter,  // only from solve_outer_only
};

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::OuterDisk: return "OuterDisk";
    case Regime::InscribedRegular: return "InscribedRegular";
    case Regime::InscribedQuasiRegular: return "InscribedQuasiRegular";
    case Regime::TriangleBand: return "TriangleBand";
    case Regime::MinSidePolygon: return "MinSidePolygon";
    case Regime::CircumscribedFamily: return "CircumscribedFamily";
    case Regime::InnerDisk: return "InnerDisk";
    case Regime::OracleFallback: return "OracleFallback";
    case Regime::DoubleDiameter: return "DoubleDiameter";
  }
  return "?";
}

inline std::optional<Regime> regime_from_string(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(Regime::DoubleDiameter); ++i)
    if (s == to_string(static_cast<Regime>(i))) return static_cast<Regime>(i);
  return std::nullopt;
}

struct Solution {
  Regime regime = Regime::OuterDisk;
  double lambda = 0.0;
  double a = 0.0;  // 0 when the inner constraint is absent
  double b = 0.0;
  std::vector<ConvexBody> bodies;    // canonical first
  std::vector<AngleConfig> configs;  // one per polygonal body, same order
  std::optional<AngleConfig> config;
  double J = 0.0;
  double area = 0.0;
  double perimeter = 0.0;
  Certificate certificate;
  std::optional<std::string> family_note;
};

struct NoSolution {
  std::string reason;
  std::vector<double> witness_b;  // outer radii of the witness triangles
  std::vector<double> witness_J;  // strictly decreasing
};

inline constexpr double tie_tol = 1e-9;

namespace detail {

inline void check_lambda(double lambda) {
  if (!num::finite(lambda) || lambda < 0) throw ParameterError("lambda must be finite and >= 0");
}

struct Candidate {
  AngleConfig config;
  double J;
};

inline bool config_less(const AngleConfig& u, const AngleConfig& v) {
  if (u.sides() != v.sides()) return u.sides() < v.sides();
  if (u.p != v.p) return u.p < v.p;
  if (u.tangent != v.tangent) return u.tangent < v.tangent;
  return u.chords < v.chords;
}

inline bool config_close(const AngleConfig& u, const AngleConfig& v) {
  if (u.p != v.p || u.tangent.size() != v.tangent.size() || u.chords.size() != v.chords.size()) return false;
  for (std::size_t i = 0; i < u.tangent.size(); ++i)
    if (std::abs(u.tangent[i] - v.tangent[i]) > 1e-10) return false;
  for (std::size_t i = 0; i < u.chords.size(); ++i)
    if (std::abs(u.chords[i] - v.chords[i]) > 1e-10) return false;
  return true;
}

// Adds a candidate if it normalizes and realizes; silently skips otherwise.
inline void push_candidate(std::vector<Candidate>& out, AngleConfig c, const RingParams& ring, double lambda) {
  try {
    c = normalize(c, ring);
    if (c.p == 0 && !c.tangent.empty() && !c.chords.empty()) return;
    double J = evaluate_J(c, ring, lambda);
    for (auto const& e : out)
      if (config_close(e.config, c)) return;
    out.push_back({std::move(c), J});
  } catch (const ConfigError&) {
  }
}

// All candidates within tie_tol of the best, canonical order.
inline std::vector<Candidate> minimizers(std::vector<Candidate> cands) {
  if (cands.empty()) throw RegimeError("no admissible candidate");
  double best = cands.front().J;
  for (auto const& c : cands) best = std::min(best, c.J);
  std::vector<Candidate> out;
  for (auto& c : cands)
    if (c.J <= best + tie_tol) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(), [](auto const& u, auto const& v) { return config_less(u.config, v.config); });
  return out;
}

inline Solution polygon_solution(Regime tag, const std::vector<Candidate>& winners, const RingParams& ring,
                                 double lambda) {
  Solution s;
  s.regime = tag;
  s.lambda = lambda;
  s.a = ring.a;
  s.b = ring.b;
  for (auto const& w : winners) {
    s.configs.push_back(w.config);
    s.bodies.push_back(synthesize_polygon(w.config, ring));
  }
  s.config = winners.front().config;
  Measures m = config_measures(*s.config, ring);
  s.area = m.area;
  s.perimeter = m.perimeter;
  s.J = lambda * m.area - m.perimeter;
  s.certificate = certificate(*s.config, ring, lambda);
  return s;
}

inline Solution disk_solution(Regime tag, double r, double a, double b, double lambda) {
  Solution s;
  s.regime = tag;
  s.lambda = lambda;
  s.a = a;
  s.b = b;
  s.bodies.push_back(ConvexBody::disk(r));
  s.area = pi * r * r;
  s.perimeter = 2 * pi * r;
  s.J = lambda * s.area - s.perimeter;
  s.certificate.second_order_ok = true;
  s.certificate.second_order_status = SecondOrderStatus::Ok;
  return s;
}

inline AngleConfig regular(int n) {
  AngleConfig c;
  c.chords.assign(static_cast<std::size_t>(n), pi / n);
  return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Transition sequences in the variable lambda b / 2.

namespace detail {

// sin t - t cos t, with a series where it cancels
inline double sin_minus_tcos(double t) {
  if (t < 0.5) {
    // sum_{k>=1} (-1)^{k+1} 2k t^{2k+1} / (2k+1)!
    double t2 = t * t, term = t * t2 / 6.0, s = 0.0;  // t^3/3!
    for (int k = 1; k < 14; ++k) {
      s += (k % 2 ? 1.0 : -1.0) * 2 * k * term;
      term *= t2 / ((2 * k + 2) * (2 * k + 3));
    }
    return s;
  }
  return std::sin(t) - t * std::cos(t);
}

// sinc(x1) - sinc(x2) with dx = x1 - x2 supplied exactly
inline double sinc_diff(double x1, double x2, double dx) {
  if (x1 < 0.5) {
    // sinc x = sum (-1)^k x^{2k}/(2k+1)!; difference of even powers factored
    double s = 0.0, f = 1.0;
    double sumx = x1 + x2;
    for (int k = 1; k < 14; ++k) {
      f /= (2 * k) * (2 * k + 1);
      // x1^{2k} - x2^{2k} = (x1^2 - x2^2) * sum_{j<k} x1^{2j} x2^{2(k-1-j)}
      double inner = 0.0, p1 = 1.0;
      for (int j = 0; j < k; ++j) {
        inner += p1 * std::pow(x2 * x2, k - 1 - j);
        p1 *= x1 * x1;
      }
      s += (k % 2 ? -1.0 : 1.0) * f * dx * sumx * inner;
    }
    return s;
  }
  return std::sin(x1) / x1 - std::sin(x2) / x2;
}

}  // namespace detail

inline double beta(int n) {
  if (n < 3) throw ParameterError("beta needs n >= 3");
  double x = pi / n;
  return 2 * detail::sin_minus_tcos(x) / detail::sin_minus_tcos(2 * x);
}

inline double betahat(int n) {
  if (n < 3) throw ParameterError("betahat needs n >= 3");
  double x1 = pi / n, x2 = pi / (n + 1);
  double dx = pi / (static_cast<double>(n) * (n + 1));
  return detail::sinc_diff(x1, x2, dx) / detail::sinc_diff(2 * x1, 2 * x2, 2 * dx);
}

inline double regular_J(double b, double lambda, int n) {
  return lambda * 0.5 * n * b * b * std::sin(2 * pi / n) - 2 * n * b * std::sin(pi / n);
}

// smallest n >= 3 whose regular inscribed n-gon contains D_a
inline int min_feasible_sides(const RingParams& ring) {
  int n = 3;
  while (std::cos(pi / n) < ring.a / ring.b) ++n;
  return n;
}

inline int optimal_regular_N(const RingParams& ring, double lambda) {
  ring.validate();
  if (!(lambda > 1 / (2 * ring.b)) || !(lambda < 1 / ring.b))
    throw ParameterError("optimal_regular_N needs 1/(2b) < lambda < 1/b");
  const double B = lambda * ring.b / 2;
  // smallest N with betahat(N) <= B; betahat decreases to 1/4
  int N;
  if (betahat(3) <= B) {
    N = 3;
  } else {
    int lo = 3, hi = 4;
    while (betahat(hi) > B) {
      lo = hi;
      if (hi > (1 << 26)) throw RegimeError("optimal_regular_N: lambda too close to 1/(2b)");
      hi *= 2;
    }
    while (hi - lo > 1) {
      int mid = lo + (hi - lo) / 2;
      if (betahat(mid) <= B) hi = mid;
      else lo = mid;
    }
    N = hi;
  }
  return std::max(N, min_feasible_sides(ring));
}

struct XBounds {
  double x0, x1;
};

inline XBounds x_bounds(double b, double lambda) {
  double c0 = 1 / (2 * lambda * b), c1 = 1 / (lambda * b) - 1;
  if (!(c0 <= 1) || !(c1 >= -1) || !(c1 <= 1)) throw RegimeError("x_bounds: lambda must exceed 1/(2b)");
  return {std::acos(c0), std::acos(c1)};
}

inline double phi_lambda(double b, double lambda, double x) {
  return std::acos(num::clamp_unit(1 / (lambda * b) - std::cos(x)));
}

struct XY {
  double x, y;
};

inline XY x2y2(double b, double lambda, int q) {
  if (q < 2) throw ParameterError("x2y2 needs q >= 2");
  auto xb = x_bounds(b, lambda);
  if (q == 2) return {xb.x0, xb.x0};
  auto g = [&](double x) { return std::sin(x) - (q - 1) * std::sin(phi_lambda(b, lambda, x)); };
  if (!(g(xb.x0) < 0) || !(g(xb.x1) > 0)) throw RegimeError("x2y2: no tangency point in the octant");
  double x = num::find_root(g, xb.x0, xb.x1, 1e-13);
  return {x, phi_lambda(b, lambda, x)};
}

// Quasi-regular (and uniform) chord configurations for p in [p_lo, p_hi].
inline std::vector<AngleConfig> quasi_regular_candidates(const RingParams& ring, double lambda, int p_lo = 0,
                                                         int p_hi = -1) {
  ring.validate();
  const double b = ring.b, x0 = xi0(ring);
  if (p_hi < 0) p_hi = p0(ring);
  std::vector<AngleConfig> out;
  if (!(lambda > 1 / (2 * b))) return out;
  XBounds xb;
  try {
    xb = x_bounds(b, lambda);
  } catch (const RegimeError&) {
    return out;
  }
  for (int p = p_lo; p <= p_hi; ++p) {
    const double R = pi - p * x0;
    if (R <= 1e-12) continue;
    // uniform chords
    for (int q = 1; q <= 4096; ++q) {
      double x = R / q;
      if (x >= x0) continue;
      AngleConfig c;
      c.p = p;
      c.chords.assign(static_cast<std::size_t>(q), x);
      if (q == 1 || std::cos(x) <= 1 / (2 * lambda * b) + 1e-15) {
        try {
          if (second_order_ok(c, ring, lambda).ok()) out.push_back(normalize(c, ring));
        } catch (const ConfigError&) {
        }
      }
      if (x < 0.5 * xb.x0) break;
    }
    // y < x <= x1 and (q-1) x + y = R force q into (R/x1, R/x1 + 1]
    const int q_lo = std::max(2, static_cast<int>(std::floor(R / xb.x1)));
    const int q_hi = static_cast<int>(std::ceil(R / xb.x1)) + 1;
    for (int q = q_lo; q <= q_hi; ++q) {
      XY t;
      try {
        t = x2y2(b, lambda, q);
      } catch (const RegimeError&) {
        continue;
      }
      auto psi = [&](double x) { return phi_lambda(b, lambda, x) - R + (q - 1) * x; };
      double ps2 = psi(t.x), ps1 = psi(xb.x1);
      if (!(ps2 >= 0) || !(ps1 < 0)) continue;
      double x = ps2 == 0 ? t.x : num::find_root(psi, t.x, xb.x1, 1e-13);
      double y = R - (q - 1) * x;
      if (!(y > 0) || !(x > y) || !(x < x0)) continue;
      if (std::sin(x) < (q - 1) * std::sin(y) - 1e-12) continue;
      AngleConfig c;
      c.p = p;
      c.chords.assign(static_cast<std::size_t>(q - 1), x);
      c.chords.push_back(y);
      try {
        c = normalize(c, ring);
        if (second_order_ok(c, ring, lambda).ok()) out.push_back(c);
      } catch (const ConfigError&) {
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Regime solvers.

inline Solution solve_large_lambda(const RingParams& ring, double lambda) {
  ring.validate();
  const double a = ring.a, b = ring.b;
  if (!(lambda >= 1 / b) || !(lambda < 2 / a)) throw ParameterError("solve_large_lambda needs 1/b <= lambda < 2/a");
  const int P = p0(ring);
  const double x = pi - P * xi0(ring);
  std::vector<detail::Candidate> c;
  if (x <= tau_angle) {
    AngleConfig k;
    k.p = P;
    detail::push_candidate(c, k, ring, lambda);
  } else {
    const double thr = 2 / (b * std::cos(x) + a);
    AngleConfig kc{P, {}, {x}}, kt{P, {x}, {}};
    if (lambda <= thr * (1 + 1e-15)) detail::push_candidate(c, kc, ring, lambda);
    if (lambda >= thr * (1 - 1e-15)) detail::push_candidate(c, kt, ring, lambda);
  }
  return detail::polygon_solution(Regime::MinSidePolygon, detail::minimizers(c), ring, lambda);
}

struct TriangleCandidates {
  std::vector<AngleConfig> configs;
  std::vector<std::string> labels;
};

inline TriangleCandidates triangle_candidates(const RingParams& ring, double lambda) {
  const double b = ring.b, x0 = xi0(ring);
  TriangleCandidates t;
  auto add = [&](AngleConfig c, const char* label) {
    try {
      t.configs.push_back(normalize(c, ring));
      t.labels.push_back(label);
    } catch (const ConfigError&) {
    }
  };
  add({0, {}, {pi / 3, pi / 3, pi / 3}}, "T");
  double disc = 9 - 8 / (lambda * b);
  if (disc >= 0) {
    double xb = std::acos(num::clamp_unit((1 + std::sqrt(disc)) / 4));
    if (xb >= pi / 3 && xb < x0) add({0, {}, {xb, xb, pi - 2 * xb}}, "T'");
  }
  add({1, {}, {(pi - x0) / 2, (pi - x0) / 2}}, "T''");
  double s = 1 / (2 * lambda * b * std::sin(x0 / 2));
  if (s <= 1) {
    double u = pi - std::asin(s) - x0 / 2;
    if (u > (pi - x0) / 2 && u < x0) add({1, {}, {u, pi - x0 - u}}, "T'''");
  }
  add({2, {}, {pi - 2 * x0}}, "T'v");
  return t;
}

inline Solution triangle_band_solver(const RingParams& ring, double lambda) {
  ring.validate();
  const double a = ring.a, b = ring.b;
  if (!(b > 2 * a)) throw ParameterError("triangle_band_solver needs b > 2a");
  if (!(lambda >= 1 / (a + b)) || !(lambda <= 1 / b)) throw ParameterError("triangle_band_solver: lambda outside band");
  std::vector<detail::Candidate> c;
  for (auto const& k : triangle_candidates(ring, lambda).configs) detail::push_candidate(c, k, ring, lambda);
  return detail::polygon_solution(Regime::TriangleBand, detail::minimizers(c), ring, lambda);
}

namespace detail {

inline std::vector<Candidate> inscribed_candidates(const RingParams& ring, double lambda) {
  std::vector<Candidate> c;
  const int nbar = min_feasible_sides(ring);
  int N = nbar;
  if (lambda < 1 / ring.b) N = optimal_regular_N(ring, lambda);
  for (int n : {N - 1, N, N + 1, nbar})
    if (n >= nbar && n >= 3) push_candidate(c, regular(n), ring, lambda);
  for (auto const& k : quasi_regular_candidates(ring, lambda, 0, 0)) push_candidate(c, k, ring, lambda);
  return c;
}

inline Regime inscribed_tag(const AngleConfig& c) {
  bool uniform = c.chords.empty() || c.chords.front() - c.chords.back() <= 1e-12;
  return uniform ? Regime::InscribedRegular : Regime::InscribedQuasiRegular;
}

}  // namespace detail

inline Solution inscribed_solver(const RingParams& ring, double lambda) {
  ring.validate();
  if (!(lambda > 1 / (2 * ring.b)) || !(lambda < 1 / (ring.a + ring.b)))
    throw ParameterError("inscribed_solver needs 1/(2b) < lambda < 1/(a+b)");
  auto w = detail::minimizers(detail::inscribed_candidates(ring, lambda));
  return detail::polygon_solution(detail::inscribed_tag(w.front().config), w, ring, lambda);
}

// Circumscribed figure of D_a with k tangent vertices; J = 0 at lambda = 2/a.
// `member` varies the vertex half-angle.
inline ConvexBody circumscribed_family_member(double a, double theta_cap, int k, int member) {
  double f = 0.3 + 0.15 * (member % 5);
  return circumscribed_hybrid(a, k, f * std::min(theta_cap, pi / k));
}

inline Solution oracle_fallback_solver(const RingParams& ring, double lambda, OracleLimits lim = {}) {
  std::vector<detail::Candidate> c = detail::inscribed_candidates(ring, lambda);
  for (auto const& k : quasi_regular_candidates(ring, lambda)) detail::push_candidate(c, k, ring, lambda);
  for (auto const& k : triangle_candidates(ring, lambda).configs) detail::push_candidate(c, k, ring, lambda);
  const int P = p0(ring);
  const double x = pi - P * xi0(ring);
  if (x <= tau_angle) {
    detail::push_candidate(c, AngleConfig{P, {}, {}}, ring, lambda);
  } else {
    detail::push_candidate(c, AngleConfig{P, {}, {x}}, ring, lambda);
    detail::push_candidate(c, AngleConfig{P, {x}, {}}, ring, lambda);
  }
  OracleResult o = enumerate_configs(ring, lambda, lim);
  if (o.config) detail::push_candidate(c, *o.config, ring, lambda);
  return detail::polygon_solution(Regime::OracleFallback, detail::minimizers(c), ring, lambda);
}

inline Solution solve(const RingParams& ring, double lambda) {
  ring.validate();
  detail::check_lambda(lambda);
  const double a = ring.a, b = ring.b;
  if (lambda <= 1 / (2 * b)) return detail::disk_solution(Regime::OuterDisk, b, a, b, lambda);
  if (std::abs(lambda * a - 2) <= 1e-12) {
    Solution s = detail::disk_solution(Regime::CircumscribedFamily, a, a, b, lambda);
    for (int k = 3; k <= 5; ++k) s.bodies.push_back(circumscribed_family_member(a, xi0(ring), k, k));
    s.family_note = "any circumscribed figure of arcs of D_a and tangent segments attains J = 0";
    return s;
  }
  if (lambda > 2 / a) return detail::disk_solution(Regime::InnerDisk, a, a, b, lambda);
  if (lambda >= 1 / b) return solve_large_lambda(ring, lambda);
  if (lambda >= 1 / (a + b)) {
    if (b > 2 * a) return triangle_band_solver(ring, lambda);
    return oracle_fallback_solver(ring, lambda);
  }
  return inscribed_solver(ring, lambda);
}

inline std::variant<Solution, NoSolution> solve_inner_only(double a, double lambda) {
  if (!(a > 0) || !num::finite(a)) throw ParameterError("solve_inner_only needs a > 0");
  detail::check_lambda(lambda);
  if (std::abs(lambda * a - 2) <= 1e-12) {
    Solution s = detail::disk_solution(Regime::CircumscribedFamily, a, a, 0.0, lambda);
    for (int k = 3; k <= 5; ++k) s.bodies.push_back(circumscribed_family_member(a, pi / 2, k, k));
    s.family_note = "any circumscribed figure of arcs of D_a and tangent segments attains J = 0";
    return s;
  }
  if (lambda > 2 / a) return detail::disk_solution(Regime::InnerDisk, a, a, 0.0, lambda);
  // circumscribed isosceles triangles with two vertices on ever larger disks
  NoSolution ns;
  ns.reason = "J is unbounded below for lambda < 2/a without an outer constraint";
  for (int k = 2; k <= 9; ++k) {
    double bk = a * std::ldexp(1.0, k);
    RingParams r{a, bk};
    AngleConfig c{2, {pi - 2 * xi0(r)}, {}};
    ns.witness_b.push_back(bk);
    ns.witness_J.push_back(evaluate_J(c, r, lambda));
  }
  return ns;
}

inline Solution solve_outer_only(double b, double lambda) {
  if (!(b > 0) || !num::finite(b)) throw ParameterError("solve_outer_only needs b > 0");
  detail::check_lambda(lambda);
  if (lambda <= 1 / (2 * b)) return detail::disk_solution(Regime::OuterDisk, b, 0.0, b, lambda);
  if (lambda >= 1 / b) {
    Solution s;
    s.regime = Regime::DoubleDiameter;
    s.lambda = lambda;
    s.b = b;
    s.bodies.push_back(ConvexBody::double_segment({-b, 0}, {b, 0}));
    s.area = 0.0;
    s.perimeter = 4 * b;
    s.J = -4 * b;
    s.certificate.second_order_ok = true;
    s.certificate.second_order_status = SecondOrderStatus::Ok;
    return s;
  }
  // inner radius shrunk to a vanishing value: only chords remain
  RingParams r{1e-12 * b, b};
  auto w = detail::minimizers(detail::inscribed_candidates(r, lambda));
  Solution s = detail::polygon_solution(detail::inscribed_tag(w.front().config), w, r, lambda);
  s.a = 0.0;
  return s;
}

// ---------------------------------------------------------------------------
// Structural signature and sweep.

struct Shape {
  std::string kind;  // outer_disk, inner_disk, family, polygon, double_diameter
  int p = 0;
  int tangents = 0;
  int chords = 0;
  bool distinct_chords = false;

  friend bool operator==(const Shape&, const Shape&) = default;
  std::string describe() const {
    if (kind != "polygon") return kind;
    std::string s = "polygon p=" + std::to_string(p) + " t=" + std::to_string(tangents) + " c=" + std::to_string(chords);
    if (distinct_chords) s += " quasi";
    return s;
  }
};

inline Shape shape_of(const Solution& s) {
  Shape sh;
  switch (s.regime) {
    case Regime::OuterDisk: sh.kind = "outer_disk"; return sh;
    case Regime::InnerDisk: sh.kind = "inner_disk"; return sh;
    case Regime::CircumscribedFamily: sh.kind = "family"; return sh;
    case Regime::DoubleDiameter: sh.kind = "double_diameter"; return sh;
    default: break;
  }
  sh.kind = "polygon";
  const auto& c = *s.config;
  sh.p = c.p;
  sh.tangents = static_cast<int>(c.tangent.size());
  sh.chords = static_cast<int>(c.chords.size());
  sh.distinct_chords = !c.chords.empty() && c.chords.front() - c.chords.back() > 1e-9;
  return sh;
}

struct SweepRow {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  std::string regime;  // tags met inside the interval, joined by '+'
  Shape shape;
  std::optional<AngleConfig> config;  // at the interval midpoint
  double lambda_mid = 0.0;
  double area = 0.0;
  double perimeter = 0.0;
  double J = 0.0;
};

struct SweepOptions {
  double tol = 1e-7;
  int max_boundaries_per_cell = 64;
};

inline std::vector<SweepRow> sweep(const RingParams& ring, const std::vector<double>& grid, SweepOptions opt = {}) {
  ring.validate();
  if (grid.empty()) return {};
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ParameterError("sweep grid must be strictly ascending");
  struct Sample {
    double lambda;
    Shape shape;
    Regime tag;
  };
  auto sample = [&](double l) {
    Solution s = solve(ring, l);
    return Sample{l, shape_of(s), s.regime};
  };
  std::vector<Sample> pts;
  for (double l : grid) pts.push_back(sample(l));
  std::vector<double> bounds;
  std::vector<Sample> extra;  // tags seen during bisection
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].shape == pts[i + 1].shape) continue;
    int budget = opt.max_boundaries_per_cell;
    // stack of brackets with different end shapes
    std::vector<std::pair<Sample, Sample>> work{{pts[i], pts[i + 1]}};
    std::vector<double> found;
    while (!work.empty() && budget > 0) {
      auto [lo, hi] = work.back();
      work.pop_back();
      while (hi.lambda - lo.lambda > opt.tol) {
        Sample m = sample(0.5 * (lo.lambda + hi.lambda));
        extra.push_back(m);
        if (m.shape == lo.shape) {
          lo = m;
        } else if (m.shape == hi.shape) {
          hi = m;
        } else {
          work.push_back({m, hi});
          hi = m;
        }
      }
      found.push_back(0.5 * (lo.lambda + hi.lambda));
      --budget;
    }
    std::sort(found.begin(), found.end());
    bounds.insert(bounds.end(), found.begin(), found.end());
  }
  std::vector<double> edges{grid.front()};
  edges.insert(edges.end(), bounds.begin(), bounds.end());
  edges.push_back(grid.back());
  std::vector<Sample> all = pts;
  all.insert(all.end(), extra.begin(), extra.end());
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    SweepRow r;
    r.lambda_lo = edges[i];
    r.lambda_hi = edges[i + 1];
    r.lambda_mid = 0.5 * (r.lambda_lo + r.lambda_hi);
    Solution s = solve(ring, r.lambda_mid);
    r.shape = shape_of(s);
    std::vector<std::string> tags{to_string(s.regime)};
    for (auto const& smp : all)
      if (smp.lambda > r.lambda_lo && smp.lambda < r.lambda_hi && smp.shape == r.shape)
        if (std::find(tags.begin(), tags.end(), to_string(smp.tag)) == tags.end()) tags.push_back(to_string(smp.tag));
    std::sort(tags.begin(), tags.end());
    for (std::size_t k = 0; k < tags.size(); ++k) r.regime += (k ? "+" : "") + tags[k];
    r.config = s.config;
    r.area = s.area;
    r.perimeter = s.perimeter;
    r.J = s.J;
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<double> sweep_boundaries(const std::vector<SweepRow>& rows) {
  std::vector<double> b;
  for (std::size_t i = 1; i < rows.size(); ++i) b.push_back(rows[i].lambda_lo);
  return b;
}

}  // namespace annulus
