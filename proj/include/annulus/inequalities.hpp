#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "annulus/geometry.hpp"
#include "annulus/numerics.hpp"
#include "annulus/oracle.hpp"  // parallel_for

namespace annulus {

enum class Inequality { BonnesenFenchel, Favard, NewCircumradius };

inline const char* to_string(Inequality i) {
  switch (i) {
    case Inequality::BonnesenFenchel: return "BonnesenFenchel";
    case Inequality::Favard: return "Favard";
    default: return "NewCircumradius";
  }
}

struct InequalityReport {
  Inequality name = Inequality::BonnesenFenchel;
  double lhs = 0.0, rhs = 0.0;
  double slack = 0.0;  // lhs - rhs, >= 0 when the inequality holds
  bool holds = false;
  bool near_equality = false;
  double scale() const { return std::max({std::abs(lhs), std::abs(rhs), 1.0}); }
};

inline InequalityReport make_report(Inequality n, double lhs, double rhs) {
  InequalityReport r;
  r.name = n;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.holds = r.slack >= -1e-9 * r.scale();
  r.near_equality = std::abs(r.slack) <= 1e-6 * r.scale();
  return r;
}

// P <= 2A / r with the translation-optimal inradius, multiplied through by r
// so that the slack is an area like the other two
inline InequalityReport check_bonnesen_fenchel(const ConvexBody& body) {
  double r = inradius(body);
  if (!(r > 0)) throw GeometryError("Bonnesen-Fenchel check needs a positive inradius");
  return make_report(Inequality::BonnesenFenchel, 2 * area(body), r * perimeter(body));
}

// A >= R (P - 4R)
inline InequalityReport check_favard(const ConvexBody& body) {
  double R = circumradius(body);
  return make_report(Inequality::Favard, area(body), R * (perimeter(body) - 4 * R));
}

// A >= R (2P - 3 pi R)
inline InequalityReport check_new_circumradius(const ConvexBody& body) {
  double R = circumradius(body);
  return make_report(Inequality::NewCircumradius, area(body), R * (2 * perimeter(body) - 3 * pi * R));
}

// degree of the slack under scaling; all three are areas
inline int homogeneity_degree(Inequality) { return 2; }

// perimeter above which the second circumradius bound is the sharper one
inline double crossover(double R) {
  if (!(R > 0)) throw ParameterError("crossover needs R > 0");
  return (3 * pi - 4) * R;
}

// ---------------------------------------------------------------------------

struct FuzzOptions {
  long long n = 10000;
  std::uint64_t seed = 1;
  int vertices_min = 3;
  int vertices_max = 64;
  int variants = 2;  // one scaled and one translated copy per body
  int shards = 16;
  int witnesses = 5;
};

struct FuzzWitness {
  std::uint64_t body_seed = 0;
  int points = 0;
  double slack = 0.0;  // normalized by the report scale
  std::size_t contacts = 0;
  std::vector<Point> vertices;
  double area = 0.0, perimeter = 0.0, inradius = 0.0;
};

struct FuzzSummary {
  long long bodies = 0;
  long long checks = 0;
  long long violations[3] = {0, 0, 0};
  double worst_slack[3] = {1e300, 1e300, 1e300};  // normalized
  long long homogeneity_failures = 0;
  long long translation_failures = 0;
  long long crossover_failures = 0;
  long long above_crossover = 0;
  std::vector<FuzzWitness> bonfen_witnesses;  // smallest normalized slack first
  bool ok() const {
    return violations[0] == 0 && violations[1] == 0 && violations[2] == 0 && homogeneity_failures == 0 &&
           translation_failures == 0 && crossover_failures == 0;
  }
};

namespace detail {

struct BodyChecks {
  InequalityReport r[3];
};

inline BodyChecks check_all(const ConvexBody& b) {
  return {{check_bonnesen_fenchel(b), check_favard(b), check_new_circumradius(b)}};
}

inline void tally(FuzzSummary& s, const BodyChecks& c) {
  for (int i = 0; i < 3; ++i) {
    ++s.checks;
    if (!c.r[i].holds) ++s.violations[i];
    s.worst_slack[i] = std::min(s.worst_slack[i], c.r[i].slack / c.r[i].scale());
  }
}

// rhs_New - rhs_Favard = R (P - (3 pi - 4) R); both sides are compared with
// a dead zone at rounding level
inline bool crossover_consistent(const ConvexBody& b) {
  double R = circumradius(b), P = perimeter(b);
  double d_rhs = R * (2 * P - 3 * pi * R) - R * (P - 4 * R);
  double d_p = P - crossover(R);
  double eps = 1e-12 * std::max(1.0, P * R);
  auto sgn = [&](double v, double e) { return v > e ? 1 : (v < -e ? -1 : 0); };
  int s1 = sgn(d_rhs, eps), s2 = sgn(d_p * R, eps);
  return s1 == s2 || s1 == 0 || s2 == 0;
}

}  // namespace detail

inline FuzzSummary fuzz(const FuzzOptions& opt) {
  if (opt.n < 1) throw ParameterError("fuzz needs n >= 1");
  if (opt.vertices_min < 3 || opt.vertices_max < opt.vertices_min)
    throw ParameterError("fuzz vertex range must satisfy 3 <= min <= max");
  const int S = std::max(1, opt.shards);
  std::vector<std::uint64_t> shard_seed(static_cast<std::size_t>(S));
  std::uint64_t st = opt.seed;
  for (auto& s : shard_seed) s = num::splitmix64(st);
  std::vector<FuzzSummary> part(static_cast<std::size_t>(S));

  parallel_for(static_cast<std::size_t>(S), [&](std::size_t k) {
    FuzzSummary& out = part[k];
    num::Rng rng(shard_seed[k]);
    const long long lo = opt.n * static_cast<long long>(k) / S, hi = opt.n * static_cast<long long>(k + 1) / S;
    for (long long i = lo; i < hi; ++i) {
      const int pts = static_cast<int>(rng.integer(opt.vertices_min, opt.vertices_max));
      const std::uint64_t bseed = rng.next();
      const double radius = rng.uniform(0.1, 10.0);
      ConvexBody body = random_convex_polygon(pts, radius, bseed);
      auto base = detail::check_all(body);
      ++out.bodies;
      detail::tally(out, base);
      if (!detail::crossover_consistent(body)) ++out.crossover_failures;
      if (perimeter(body) > crossover(circumradius(body))) ++out.above_crossover;

      // witnesses: smallest normalized Bonnesen-Fenchel slack
      double ns = base.r[0].slack / base.r[0].scale();
      if (static_cast<int>(out.bonfen_witnesses.size()) < opt.witnesses || ns < out.bonfen_witnesses.back().slack) {
        FuzzWitness w;
        w.body_seed = bseed;
        w.points = pts;
        w.slack = ns;
        auto cc = detail::chebyshev_center(body);
        w.contacts = cc.contacts.size();
        w.vertices = body.junctions();
        w.area = area(body);
        w.perimeter = perimeter(body);
        w.inradius = cc.radius;
        out.bonfen_witnesses.push_back(std::move(w));
        std::sort(out.bonfen_witnesses.begin(), out.bonfen_witnesses.end(),
                  [](const FuzzWitness& x, const FuzzWitness& y) { return x.slack < y.slack; });
        if (static_cast<int>(out.bonfen_witnesses.size()) > opt.witnesses) out.bonfen_witnesses.pop_back();
      }

      for (int v = 0; v < opt.variants; ++v) {
        if (v % 2 == 0) {
          const double s = std::exp(rng.uniform(-3.0, 3.0));
          auto sc = detail::check_all(body.scaled(s));
          detail::tally(out, sc);
          for (int q = 0; q < 3; ++q) {
            const double f = std::pow(s, homogeneity_degree(static_cast<Inequality>(q)));
            if (std::abs(sc.r[q].slack - f * base.r[q].slack) > 1e-9 * f * base.r[q].scale()) ++out.homogeneity_failures;
          }
        } else {
          Point t{rng.uniform(-5, 5), rng.uniform(-5, 5)};
          auto tc = detail::check_all(body.translated(t));
          detail::tally(out, tc);
          for (int q = 0; q < 3; ++q)
            if (std::abs(tc.r[q].slack - base.r[q].slack) > 1e-9 * base.r[q].scale()) ++out.translation_failures;
        }
      }
    }
  });

  FuzzSummary s;
  for (auto const& p : part) {
    s.bodies += p.bodies;
    s.checks += p.checks;
    for (int i = 0; i < 3; ++i) {
      s.violations[i] += p.violations[i];
      s.worst_slack[i] = std::min(s.worst_slack[i], p.worst_slack[i]);
    }
    s.homogeneity_failures += p.homogeneity_failures;
    s.translation_failures += p.translation_failures;
    s.crossover_failures += p.crossover_failures;
    s.above_crossover += p.above_crossover;
    s.bonfen_witnesses.insert(s.bonfen_witnesses.end(), p.bonfen_witnesses.begin(), p.bonfen_witnesses.end());
  }
  std::stable_sort(s.bonfen_witnesses.begin(), s.bonfen_witnesses.end(),
                   [](const FuzzWitness& x, const FuzzWitness& y) { return x.slack < y.slack; });
  if (static_cast<int>(s.bonfen_witnesses.size()) > opt.witnesses)
    s.bonfen_witnesses.resize(static_cast<std::size_t>(opt.witnesses));
  return s;
}

inline nlohmann::json fuzz_to_json(const FuzzSummary& s) {
  auto sig = [](double v) { return num::round_sig(v, 10); };
  nlohmann::json j;
  j["bodies"] = s.bodies;
  j["checks"] = s.checks;
  const Inequality all[3] = {Inequality::BonnesenFenchel, Inequality::Favard, Inequality::NewCircumradius};
  for (int i = 0; i < 3; ++i)
    j["inequalities"][to_string(all[i])] = {{"violations", s.violations[i]}, {"worst_normalized_slack", sig(s.worst_slack[i])}};
  j["homogeneity_failures"] = s.homogeneity_failures;
  j["translation_failures"] = s.translation_failures;
  j["crossover_failures"] = s.crossover_failures;
  j["above_crossover"] = s.above_crossover;
  nlohmann::json w = nlohmann::json::array();
  for (auto const& x : s.bonfen_witnesses)
    w.push_back({{"body_seed", x.body_seed},
                 {"points", x.points},
                 {"normalized_slack", sig(x.slack)},
                 {"inradius_contacts", x.contacts},
                 {"vertices", x.vertices.size()}});
  j["bonnesen_fenchel_witnesses"] = w;
  j["ok"] = s.ok();
  return j;
}

// vertices and measurements of each witness, one vertex per row
inline std::string witnesses_csv(const FuzzSummary& s) {
  std::string out = "witness,body_seed,normalized_slack,area,perimeter,inradius,contacts,x,y\n";
  for (std::size_t i = 0; i < s.bonfen_witnesses.size(); ++i) {
    auto const& w = s.bonfen_witnesses[i];
    for (auto const& p : w.vertices) {
      out += std::to_string(i) + ',' + std::to_string(w.body_seed) + ',' + num::fmt_sig(w.slack) + ',' +
             num::fmt_sig(w.area) + ',' + num::fmt_sig(w.perimeter) + ',' + num::fmt_sig(w.inradius) + ',' +
             std::to_string(w.contacts) + ',' + num::fmt_sig(p.x) + ',' + num::fmt_sig(p.y) + '\n';
    }
  }
  return out;
}

}  // namespace annulus
