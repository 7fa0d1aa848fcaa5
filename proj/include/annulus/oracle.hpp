#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "annulus/angle_model.hpp"
#include "annulus/geometry.hpp"
#include "annulus/numerics.hpp"

namespace annulus {

// Worker cap from ANNULUS_OPT_THREADS (default 1).
inline unsigned worker_count() {
  if (const char* s = std::getenv("ANNULUS_OPT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && v >= 1) return static_cast<unsigned>(std::min(v, 256L));
  }
  return 1;
}

// Runs f(i) for i in [0, n) on up to worker_count() threads.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  unsigned w = std::min<std::size_t>(worker_count(), n == 0 ? 1 : n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += w) f(i);
    });
  for (auto& th : pool) th.join();
}

enum class OracleMethod { ConfigEnumeration, SupportDescent };

inline const char* to_string(OracleMethod m) {
  return m == OracleMethod::ConfigEnumeration ? "ConfigEnumeration" : "SupportDescent";
}

struct OracleResult {
  double J = std::numeric_limits<double>::infinity();
  ConvexBody body;
  std::optional<AngleConfig> config;
  OracleMethod method = OracleMethod::ConfigEnumeration;
  long long evaluations = 0;
  std::string note;
  std::vector<double> trace;  // support descent: J of each accepted state in the winning run
};

struct OracleLimits {
  int p_max = -1;  // -1: p0 of the ring
  int q_max = 64;
  int grid_n = 100;
};

// D_a with k tangent vertices of half-angle theta at equally spaced positions.
inline ConvexBody circumscribed_hybrid(double a, int k, double theta) {
  if (k < 1 || !(theta > 0) || 2 * k * theta > 2 * pi + 1e-12 || theta >= pi / 2)
    throw ParameterError("circumscribed_hybrid: bad pattern");
  std::vector<BoundaryPiece> pcs;
  const double step = 2 * pi / k;
  for (int i = 0; i < k; ++i) {
    double t0 = step * i;
    Point T0 = a * unit(t0), W = (a / std::cos(theta)) * unit(t0 + theta), T1 = a * unit(t0 + 2 * theta);
    pcs.emplace_back(Segment{T0, W});
    pcs.emplace_back(Segment{W, T1});
    double sweep = step - 2 * theta;
    if (sweep > 1e-12) pcs.emplace_back(Arc{a, t0 + 2 * theta, sweep});
  }
  // close exactly onto the first tangency point
  if (auto s = std::get_if<Segment>(&pcs.back())) s->end = std::get<Segment>(pcs.front()).start;
  return ConvexBody::from_pieces(std::move(pcs));
}

inline double circumscribed_hybrid_J(double a, double lambda, int k, double theta) {
  double beta = 2 * pi - 2 * k * theta;
  return a * (lambda * a - 2) * (k * std::tan(theta) + 0.5 * beta);
}

namespace detail {

// One structural pattern of the enumeration: p xi0-copies, optional tangent
// pair, and chords that are empty, q equal, or (q-1) equal plus one other.
struct Pattern {
  int p;
  bool theta;
  int chord_kind;  // 0 none, 1 uniform q, 2 quasi q
  int q;
};

struct PatternEval {
  double R, x0, a, b, tx, lambda;
  const Pattern* pat;
  // J as a function of (theta, x); y implied by the angle sum
  double operator()(double th, double x) const {
    double y = 0.0;
    double nx = 0.0;
    bool has_y = false;
    const auto& P = *pat;
    double rest = R - (P.theta ? th : 0.0);
    if (P.chord_kind == 1) {
      nx = P.q;
    } else if (P.chord_kind == 2) {
      nx = P.q - 1;
      y = rest - nx * x;
      has_y = true;
    }
    double sx = std::sin(x), cx = std::cos(x);
    double area = P.p * a * a * tx, per = P.p * a * tx;
    if (P.theta) {
      double t = std::tan(th);
      area += a * a * t;
      per += a * t;
    }
    if (nx > 0) {
      area += nx * b * b * sx * cx;
      per += nx * b * sx;
    }
    if (has_y) {
      double sy = std::sin(y);
      area += b * b * sy * std::cos(y);
      per += b * sy;
    }
    return lambda * area - 2 * per;
  }
};

}  // namespace detail

// Brute-force minimum over class patterns plus the two disks and, on the
// circumscribed side, 32 arc/tangent hybrids.
inline OracleResult enumerate_configs(const RingParams& ring, double lambda, OracleLimits lim = {}) {
  ring.validate();
  if (!(lambda >= 0) || !num::finite(lambda)) throw ParameterError("lambda must be finite and >= 0");
  const int P0 = p0(ring);
  if (lim.p_max < 0) lim.p_max = P0;
  if (lim.p_max > P0 || lim.q_max > 64 || lim.q_max < 1 || lim.grid_n < 100)
    throw ParameterError("oracle limits need p_max <= p0, 1 <= q_max <= 64, grid_n >= 100");
  const double a = ring.a, b = ring.b, x0 = xi0(ring), tx = tan_xi0(ring);
  const double h = pi / lim.grid_n;

  std::vector<detail::Pattern> pats;
  for (int p = 0; p <= lim.p_max; ++p)
    for (int th = 0; th <= 1; ++th) {
      if (th && p == 0) continue;  // tangent pairs need a xi0-side to attach to
      pats.push_back({p, th == 1, 0, 0});
      for (int q = 1; q <= lim.q_max; ++q) {
        if (th && p == 0) continue;
        pats.push_back({p, th == 1, 1, q});
        if (q >= 2) pats.push_back({p, th == 1, 2, q});
      }
    }

  struct Best {
    double J = std::numeric_limits<double>::infinity();
    double th = 0, x = 0;
    long long evals = 0;
  };
  std::vector<Best> best(pats.size());

  parallel_for(pats.size(), [&](std::size_t i) {
    const auto& P = pats[i];
    detail::PatternEval f{pi - P.p * x0, x0, a, b, tx, lambda, &P};
    const double R = f.R;
    Best& B = best[i];
    auto consider = [&](double th, double x) {
      double J = f(th, x);
      ++B.evals;
      if (J < B.J) {
        B.J = J;
        B.th = th;
        B.x = x;
      }
      return J;
    };
    auto in_open = [&](double v) { return v > 0 && v < x0; };
    const bool pure = !P.theta && P.chord_kind == 0;
    if (pure) {
      if (std::abs(R) <= 1e-12) consider(0, 0);
      return;
    }
    if (R <= 0) return;
    // x-range for a given theta
    auto xrange = [&](double th, double& lo, double& hi) {
      double rest = R - (P.theta ? th : 0.0);
      if (P.chord_kind == 1) {
        lo = hi = rest / P.q;
        return in_open(lo);
      }
      // quasi: y = rest - (q-1) x in (0, x0), x in (0, x0)
      double n = P.q - 1;
      lo = std::max(0.0, (rest - x0) / n);
      hi = std::min(x0, rest / n);
      return hi > lo;
    };
    if (!P.theta && P.chord_kind == 1) {
      double x = R / P.q;
      if (in_open(x)) consider(0, x);
      return;
    }
    if (P.theta && P.chord_kind == 0) {
      if (in_open(R)) consider(R, 0);
      return;
    }
    auto grid1 = [&](double lo, double hi, auto&& g, std::vector<double>& xs, std::vector<double>& vs) {
      int n = std::max(8, static_cast<int>(std::ceil((hi - lo) / h)));
      xs.resize(n);
      vs.resize(n);
      for (int k = 0; k < n; ++k) {
        xs[k] = lo + (hi - lo) * (k + 0.5) / n;
        vs[k] = g(xs[k]);
      }
    };
    // refine the best few grid-local minima of a 1-D profile
    auto refine1 = [&](double lo, double hi, auto&& g) {
      std::vector<double> xs, vs;
      grid1(lo, hi, g, xs, vs);
      std::vector<int> mins;
      for (int k = 0; k < static_cast<int>(xs.size()); ++k) {
        bool left = k == 0 || vs[k] <= vs[k - 1];
        bool right = k + 1 == static_cast<int>(xs.size()) || vs[k] <= vs[k + 1];
        if (left && right) mins.push_back(k);
      }
      std::sort(mins.begin(), mins.end(), [&](int u, int v) { return vs[u] < vs[v]; });
      if (mins.size() > 3) mins.resize(3);
      double bx = xs.empty() ? lo : xs[0], bv = std::numeric_limits<double>::infinity();
      for (int k : mins) {
        double l = k == 0 ? lo : xs[k - 1];
        double r = k + 1 == static_cast<int>(xs.size()) ? hi : xs[k + 1];
        auto m = num::golden_min(g, l, r, 1e-12);
        if (m.fx < bv) {
          bv = m.fx;
          bx = m.x;
        }
        if (vs[k] < bv) {
          bv = vs[k];
          bx = xs[k];
        }
      }
      return std::pair{bx, bv};
    };
    if (!P.theta) {
      // quasi chords, one free variable x
      double lo, hi;
      if (!xrange(0, lo, hi)) return;
      auto g = [&](double x) {
        double y = R - (P.q - 1) * x;
        if (!in_open(x) || !in_open(y)) return std::numeric_limits<double>::infinity();
        return consider(0, x);
      };
      refine1(lo, hi, g);
      return;
    }
    // theta free
    double tlo = 0.0, thi = std::min(x0, R);
    if (P.chord_kind == 1) {
      // theta = R - q x
      double lo = std::max(0.0, (R - x0) / P.q), hi = std::min(x0, R / P.q);
      if (!(hi > lo)) return;
      auto g = [&](double x) {
        double th = R - P.q * x;
        if (!in_open(x) || !in_open(th)) return std::numeric_limits<double>::infinity();
        return consider(th, x);
      };
      refine1(lo, hi, g);
      return;
    }
    // two free variables: theta and x
    auto inner = [&](double th) {
      double lo, hi;
      if (!xrange(th, lo, hi)) return std::pair{0.0, std::numeric_limits<double>::infinity()};
      auto g = [&](double x) {
        double y = R - th - (P.q - 1) * x;
        if (!in_open(x) || !in_open(y)) return std::numeric_limits<double>::infinity();
        return consider(th, x);
      };
      return refine1(lo, hi, g);
    };
    auto outer = [&](double th) {
      if (!in_open(th)) return std::numeric_limits<double>::infinity();
      return inner(th).second;
    };
    refine1(tlo, thi, outer);
  });

  OracleResult res;
  res.method = OracleMethod::ConfigEnumeration;
  std::size_t bi = pats.size();
  for (std::size_t i = 0; i < pats.size(); ++i) {
    res.evaluations += best[i].evals;
    if (best[i].J < res.J) {
      res.J = best[i].J;
      bi = i;
    }
  }
  if (bi != pats.size()) {
    const auto& P = pats[bi];
    const auto& B = best[bi];
    AngleConfig c;
    c.p = P.p;
    double R = pi - P.p * x0;
    if (P.theta) c.tangent.push_back(B.th);
    if (P.chord_kind == 1) c.chords.assign(P.q, B.x);
    if (P.chord_kind == 2) {
      c.chords.assign(P.q - 1, B.x);
      c.chords.push_back(R - (P.theta ? B.th : 0.0) - (P.q - 1) * B.x);
    }
    try {
      c = normalize(c, ring);
      res.config = c;
      res.body = synthesize_polygon(c, ring);
    } catch (const std::exception&) {
      res.J = std::numeric_limits<double>::infinity();
      res.config.reset();
    }
  }
  auto take_body = [&](double J, ConvexBody body, const char* note) {
    ++res.evaluations;
    if (J < res.J) {
      res.J = J;
      res.body = std::move(body);
      res.config.reset();
      res.note = note;
    }
  };
  take_body(lambda * pi * a * a - 2 * pi * a, ConvexBody::disk(a), "inner disk");
  take_body(lambda * pi * b * b - 2 * pi * b, ConvexBody::disk(b), "outer disk");
  // arc/tangent hybrids: k vertices, four fill fractions
  for (int k = 1; k <= 8; ++k)
    for (double f : {0.2, 0.45, 0.7, 0.95}) {
      double th = f * std::min(x0, pi / k);
      double J = circumscribed_hybrid_J(a, lambda, k, th);
      ++res.evaluations;
      if (J < res.J) take_body(J, circumscribed_hybrid(a, k, th), "circumscribed hybrid");
    }
  return res;
}

// ---------------------------------------------------------------------------
// Support-number descent on a fixed fan of M normals.

struct SupportVector {
  std::vector<double> h;
};

struct SupportDescentOptions {
  int M = 360;
  int restarts = 16;
  std::uint64_t seed = 1;
  int max_sweeps = 4000;
};

namespace detail {

struct Fan {
  int M;
  double D, cD, sD, t2;  // Delta, cos, sin, 2 tan(Delta/2)
  double omc;            // 1 - cos Delta without cancellation
  std::vector<Point> u;  // unit normals
  explicit Fan(int m)
      : M(m), D(2 * pi / m), cD(std::cos(D)), sD(std::sin(D)), t2(2 * std::tan(D / 2)),
        omc(2 * std::sin(D / 2) * std::sin(D / 2)) {
    u.reserve(M);
    for (int k = 0; k < M; ++k) u.push_back(unit(D * k));
  }
  int wrap(int k) const { return ((k % M) + M) % M; }
  double face(const std::vector<double>& h, int k) const {
    return (h[wrap(k - 1)] - 2 * h[k] * cD + h[wrap(k + 1)]) / sD;
  }
  double area(const std::vector<double>& h) const {
    double s = 0.0;
    for (int k = 0; k < M; ++k) s += h[k] * h[wrap(k + 1)] - cD * h[k] * h[k];
    return s / sD;
  }
  double perimeter(const std::vector<double>& h) const {
    double s = 0.0;
    for (double v : h) s += v;
    return s * t2;
  }
};

// vertices of the fan polygon, one per consecutive normal pair (CCW)
inline std::vector<Point> fan_vertices(const std::vector<double>& h, const Fan& F) {
  std::vector<Point> v(F.M);
  for (int k = 0; k < F.M; ++k) {
    int j = F.wrap(k + 1);
    const Point &p = F.u[k], &q = F.u[j];
    v[k] = {(h[k] * q.y - h[j] * p.y) / F.sD, (p.x * h[j] - q.x * h[k]) / F.sD};
  }
  return v;
}

// support numbers of a CCW convex polygon on the fan (rotating calipers)
inline void fan_support(const std::vector<Point>& raw, const Fan& F, std::vector<double>& h) {
  // tiny reversals (faces slightly negative) would trap the monotone walk
  const std::vector<Point> poly = convex_hull(raw);
  const int V = static_cast<int>(poly.size());
  int i = 0;
  for (int k = 1; k < V; ++k)
    if (poly[k].x > poly[i].x) i = k;
  for (int j = 0; j < F.M; ++j) {
    const Point& u = F.u[j];
    for (int step = 0; step < V; ++step) {
      int n = (i + 1) % V;
      if (dot(poly[n], u) >= dot(poly[i], u)) i = n;
      else break;
    }
    h[j] = dot(poly[i], u);
  }
}

// half-plane cut <x, u_k> <= t of the fan polygon
inline void cut(std::vector<double>& h, const Fan& F, int k, double t) {
  auto v = fan_vertices(h, F);
  const Point& u = F.u[k];
  std::vector<Point> out;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point p = v[i], q = v[(i + 1) % n];
    double dp = dot(p, u) - t, dq = dot(q, u) - t;
    if (dp <= 0) out.push_back(p);
    if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) out.push_back(p + (dp / (dp - dq)) * (q - p));
  }
  if (out.size() < 3) return;
  fan_support(out, F, h);
}

// h -> s h with s minimizing lambda s^2 A - s P over the feasible scales
inline void dilate(std::vector<double>& h, const Fan& F, double a, double b, double lambda) {
  double hmin = *std::min_element(h.begin(), h.end());
  double r2max = 0;
  for (int k = 0; k < F.M; ++k) {
    int j = F.wrap(k + 1);
    r2max = std::max(r2max, (h[k] * h[k] - 2 * h[k] * h[j] * F.cD + h[j] * h[j]) / (F.sD * F.sD));
  }
  if (!(hmin > 0) || !(r2max > 0)) return;
  const double lo = a / hmin, hi = b / std::sqrt(r2max);
  if (!(hi >= lo)) return;
  const double A = F.area(h), P = F.perimeter(h);
  auto Js = [&](double s) { return lambda * s * s * A - s * P; };
  double best = 1.0;
  for (double s : {lo, hi, std::clamp(P / (2 * lambda * A), lo, hi)})
    if (Js(s) < Js(best)) best = s;
  for (auto& v : h) v = std::max(a, v * best);
}

inline bool feasible(const std::vector<double>& h, const Fan& F, double a, double b) {
  for (int k = 0; k < F.M; ++k) {
    if (h[k] < a - 1e-12) return false;
    if (F.face(h, k) < -tau_geom) return false;
    int j = F.wrap(k + 1);
    // vertex = h_k u_k + t u_k^perp
    double t = ((h[j] - h[k]) + h[k] * F.omc) / F.sD;
    double r2 = h[k] * h[k] + t * t;
    // consecutive nearly parallel lines place a vertex to about eps / sin(Delta)
    if (r2 > b * b * (1 + 1e-13 / F.sD)) return false;
  }
  return true;
}


// Pattern search over the vertices of a polygon with D_a <= P <= D_rho.
inline double poly_J(const std::vector<Point>& v, double lambda) {
  double A = 0, P = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point &p = v[i], &q = v[(i + 1) % v.size()];
    A += cross(p, q);
    P += norm(q - p);
  }
  return lambda * 0.5 * A - P;
}

// Pattern search over polygons whose edge normals are a subset of the fan.
// Such a polygon equals its own fan polygon, so nothing is lost when the
// sparse state is expanded to all M support numbers.
struct SparseEdge {
  int k;     // fan index of the outer normal
  double h;  // support number
};

struct SparsePoly {
  const Fan& F;
  double a, b;
  int gap(const std::vector<SparseEdge>& e, std::size_t i) const {
    return F.wrap(e[(i + 1) % e.size()].k - e[i].k);
  }
  // vertex between edges i and i+1
  Point vertex(const std::vector<SparseEdge>& e, std::size_t i) const {
    const SparseEdge &p = e[i], &q = e[(i + 1) % e.size()];
    const Point &u = F.u[p.k], &w = F.u[q.k];
    double det = u.x * w.y - u.y * w.x;
    return {(p.h * w.y - q.h * u.y) / det, (u.x * q.h - w.x * p.h) / det};
  }
  std::vector<Point> vertices(const std::vector<SparseEdge>& e) const {
    std::vector<Point> v(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) v[i] = vertex(e, i);
    return v;
  }
  // J, or +inf when the state is not a polygon in the ring
  double J(const std::vector<SparseEdge>& e, double lambda) const {
    const std::size_t n = e.size();
    if (n < 3 || n > 48) return std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      int g = gap(e, i);
      if (g <= 0 || 2 * g >= F.M) return std::numeric_limits<double>::infinity();
      if (e[i].h < a) return std::numeric_limits<double>::infinity();
    }
    auto v = vertices(e);
    double A = 0, P = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (dot(v[i], v[i]) > b * b * (1 + 1e-12)) return std::numeric_limits<double>::infinity();
      const Point& prev = v[(i + n - 1) % n];
      const Point& u = F.u[e[i].k];
      double L = dot(v[i] - prev, Point{-u.y, u.x});
      if (L < 1e-9) return std::numeric_limits<double>::infinity();
      P += L;
      A += e[i].h * L;
    }
    return lambda * 0.5 * A - P;
  }
};

// Continuous search over vertex lists in the ring, used to seed the sparse search.
inline bool poly_ok(const std::vector<Point>& v, double a, double b, double emin) {
  if (v.size() < 3 || v.size() > 24) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point &p = v[i], &q = v[(i + 1) % v.size()];
    if (dot(p, p) > b * b) return false;
    double L = norm(q - p);
    if (L < emin || cross(p, q) / L < a) return false;
  }
  return true;
}

inline std::vector<Point> vertex_search(double a, double b, double emin, double lambda, num::Rng& rng,
                                        long long& evals) {
  std::vector<Point> v;
  for (int attempt = 0; attempt < 200 && !poly_ok(v, a, b, emin); ++attempt) {
    int K = static_cast<int>(rng.integer(3, 12));
    std::vector<Point> pts;
    for (int i = 0; i < K; ++i) pts.push_back(b * unit(2 * pi * rng.uniform()));
    v = convex_hull(pts);
  }
  if (!poly_ok(v, a, b, emin)) {
    int n = 3;
    while (b * std::cos(pi / n) < a) ++n;
    double off = 2 * pi * rng.uniform();
    v.clear();
    for (int i = 0; i < n; ++i) v.push_back(b * unit(off + 2 * pi * i / n));
  }
  double J = poly_J(v, lambda);
  ++evals;
  auto accept = [&](std::vector<Point> c) {
    ++evals;
    c = convex_hull(std::move(c));
    if (!poly_ok(c, a, b, emin)) return false;
    double Jc = poly_J(c, lambda);
    if (Jc < J - 1e-14 * (1 + std::abs(J))) {
      v = std::move(c);
      J = Jc;
      return true;
    }
    return false;
  };
  auto clampr = [&](Point p) {
    double r = norm(p);
    return r > b ? (b / r) * p : p;
  };
  double step = 0.25 * b;
  for (int pass = 0; pass < 4000 && step > 1e-10 * b; ++pass) {
    const double J_pass = J;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::size_t n = v.size();
      const Point p = v[i], pm = v[(i + n - 1) % n], pp = v[(i + 1) % n];
      auto with = [&](std::initializer_list<Point> repl) {
        std::vector<Point> c;
        for (std::size_t m = 0; m < n; ++m)
          if (m != i) c.push_back(v[m]);
        c.insert(c.end(), repl);
        return c;
      };
      bool moved = accept(with({}));
      const double r = norm(p), ph = std::atan2(p.y, p.x);
      for (double dr : {step, -step}) {
        if (moved) break;
        moved = accept(with({clampr((std::max(r + dr, 0.0) / r) * p)}));
      }
      for (double dp : {step, -step}) {
        if (moved) break;
        moved = accept(with({r * unit(ph + dp / std::max(r, a))}));
      }
      for (double t : {0.5, step / b}) {
        if (moved || t >= 1) break;
        moved = accept(with({p + t * (pm - p), p + t * (pp - p)}));
      }
      if (!moved) {
        // corner cut by a tangent line of D_a
        Point u = unit(ph);
        double dm = dot(p - pm, u), dq = dot(p - pp, u);
        if (dm > 0 && dq > 0 && r > a) {
          Point c1 = p + ((a - dot(p, u)) / dm) * (p - pm);
          Point c2 = p + ((a - dot(p, u)) / dq) * (p - pp);
          moved = accept(with({c1, c2}));
        }
      }
      for (int k = 0; k < 2 && !moved; ++k)
        moved = accept(with({clampr(p + step * Point{rng.uniform(-1, 1), rng.uniform(-1, 1)})}));
      if (!moved) {
        Point mid = 0.5 * (p + pp);
        Point out{pp.y - p.y, p.x - pp.x};
        out = (1.0 / norm(out)) * out;
        moved = accept(with({p, clampr(mid + step * out)})) || accept(with({p, b * unit(std::atan2(mid.y, mid.x))}));
      }
    }
    if (J_pass - J < 1e-9 * (1 + std::abs(J))) step *= 0.5;
  }
  return v;
}

// Rounds each edge normal of a polygon to the fan and circumscribes; shrinks
// about the origin when a vertex leaves D_b.  Empty when rounding fails.
inline std::vector<SparseEdge> round_to_fan(const std::vector<Point>& v, const Fan& F, double a, double b) {
  std::vector<SparseEdge> e;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point d = v[(i + 1) % n] - v[i];
    int k = F.wrap(static_cast<int>(std::lround(std::atan2(-d.x, d.y) / F.D)));
    if (!e.empty() && e.back().k == k) continue;
    double h = -1e300;
    for (const auto& p : v) h = std::max(h, dot(p, F.u[k]));
    e.push_back({k, h});
  }
  while (e.size() > 1 && e.front().k == e.back().k) e.pop_back();
  std::sort(e.begin(), e.end(), [](const SparseEdge& x, const SparseEdge& y) { return x.k < y.k; });
  const SparsePoly S{F, a, b};
  if (e.size() < 3) return {};
  double rmax = 0;
  for (const auto& p : S.vertices(e)) rmax = std::max(rmax, norm(p));
  if (rmax > b)
    for (auto& x : e) x.h = std::max(a, x.h * b / rmax);
  return e;
}

inline std::vector<SparseEdge> sparse_search(const Fan& F, double a, double b, double lambda, num::Rng& rng,
                                             long long& evals, std::vector<SparseEdge> e = {}) {
  const SparsePoly S{F, a, b};
  const int M = F.M;
  const double inf = std::numeric_limits<double>::infinity();
  double J = e.empty() ? inf : S.J(e, lambda);
  for (int attempt = 0; attempt < 500 && !(J < inf); ++attempt) {
    int K = static_cast<int>(rng.integer(3, 12));
    std::vector<int> ks;
    for (int i = 0; i < K; ++i) ks.push_back(static_cast<int>(rng.integer(0, M - 1)));
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    int maxgap = 0;
    for (std::size_t i = 0; i < ks.size(); ++i)
      maxgap = std::max(maxgap, F.wrap(ks[(i + 1) % ks.size()] - ks[i]));
    double top = b * std::cos(0.5 * maxgap * F.D);
    if (ks.size() < 3 || 2 * maxgap >= M || top < a) continue;
    double c = rng.uniform(a, top);
    e.clear();
    for (int k : ks) e.push_back({k, c});
    J = S.J(e, lambda);
    ++evals;
  }
  if (!(J < inf)) {
    // regular polygon on the fan
    int n = 3;
    while (b * std::cos(pi / n) < a || M % n != 0) ++n;
    e.clear();
    for (int i = 0; i < n; ++i) e.push_back({i * (M / n), b * std::cos(pi / n)});
    J = S.J(e, lambda);
    ++evals;
  }
  auto accept = [&](std::vector<SparseEdge>& c) {
    ++evals;
    double Jc = S.J(c, lambda);
    if (Jc < J - 1e-14 * (1 + std::abs(J))) {
      e = c;
      J = Jc;
      return true;
    }
    return false;
  };
  std::vector<SparseEdge> c;
  double step = 0.25 * b;
  for (int pass = 0; pass < 4000 && step > 1e-10 * b; ++pass) {
    const double J_pass = J;
    const int m = std::max(1, static_cast<int>(std::lround(step / (b * F.D))));
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::size_t n = e.size();
      const std::size_t ip = (i + n - 1) % n, in = (i + 1) % n;
      const Point v0 = S.vertex(e, ip), v1 = S.vertex(e, i);
      bool moved = false;
      auto edit = [&](auto&& fn) {
        if (moved) return;
        c = e;
        fn(c);
        moved = accept(c);
      };
      edit([&](auto& c) { c.erase(c.begin() + static_cast<long>(i)); });
      for (double d : {step, -step}) edit([&](auto& c) { c[i].h += d; });
      for (int dk : {1, -1, m, -m}) {
        const int k = F.wrap(e[i].k + dk);
        edit([&](auto& c) { c[i].k = k; });
        edit([&](auto& c) { c[i] = {k, dot(v0, F.u[k])}; });
        edit([&](auto& c) { c[i] = {k, dot(v1, F.u[k])}; });
        if (m == 1) break;
      }
      // move the vertex between edges i and i+1
      auto move_vertex = [&](Point q) {
        edit([&](auto& c) {
          c[i].h = dot(q, F.u[c[i].k]);
          c[in].h = dot(q, F.u[c[in].k]);
        });
      };
      const double r = norm(v1);
      if (r > 0) {
        const Point rad = (1 / r) * v1, tan{-rad.y, rad.x};
        move_vertex(b * rad);
        move_vertex(v1 + step * rad);
        move_vertex(v1 - step * rad);
        move_vertex(v1 + step * tan);
        move_vertex(v1 - step * tan);
        // slide along D_b
        if (r > b * (1 - 1e-9)) {
          move_vertex(b * unit(std::atan2(v1.y, v1.x) + step / b));
          move_vertex(b * unit(std::atan2(v1.y, v1.x) - step / b));
        }
      }
      // cut the vertex with a new edge
      const int g = S.gap(e, i);
      if (!moved && g >= 2) {
        const int k = F.wrap(e[i].k + g / 2);
        const double sup = dot(v1, F.u[k]);
        for (double hn : {a, sup - step, 0.5 * (a + sup)}) {
          if (hn < a || hn >= sup) continue;
          edit([&](auto& c) { c.insert(c.begin() + static_cast<long>(i) + 1, SparseEdge{k, hn}); });
        }
      }
    }
    if (J_pass - J < 1e-9 * (1 + std::abs(J))) step *= 0.5;
  }
  return e;
}

}  // namespace detail

inline ConvexBody support_polygon(const std::vector<double>& h) {
  const int M = static_cast<int>(h.size());
  detail::Fan F(M);
  std::vector<Point> v;
  for (int k = 0; k < M; ++k) {
    int j = F.wrap(k + 1);
    // intersection of <x,u_k> = h_k and <x,u_j> = h_j
    double tk = F.D * k, tj = F.D * j;
    double c1 = std::cos(tk), s1 = std::sin(tk), c2 = std::cos(tj), s2 = std::sin(tj);
    double det = c1 * s2 - s1 * c2;
    Point p{(h[k] * s2 - h[j] * s1) / det, (c1 * h[j] - c2 * h[k]) / det};
    if (!v.empty() && norm(p - v.back()) < 1e-10) continue;
    v.push_back(p);
  }
  while (v.size() > 3 && norm(v.front() - v.back()) < 1e-10) v.pop_back();
  return ConvexBody::polygon(convex_hull(v));
}

namespace detail {

struct FanResult {
  std::vector<double> h;
  double J = std::numeric_limits<double>::infinity();
  long long evals = 0;
  std::vector<double> trace;
};

// support numbers on a fan of 2M normals of the polygon given on M normals
inline std::vector<double> lift_support(const std::vector<double>& hc, double a) {
  const Fan C(static_cast<int>(hc.size()));
  auto v = fan_vertices(hc, C);
  const Fan F(2 * C.M);
  std::vector<double> h(F.M);
  for (int k = 0; k < C.M; ++k) {
    h[2 * k] = hc[k];
    h[2 * k + 1] = dot(v[k], F.u[2 * k + 1]);
  }
  for (auto& x : h)
    if (x < a && x > a - tau_geom) x = a;
  return h;
}

inline FanResult descent_on_fan(const RingParams& ring, double lambda, const SupportDescentOptions& opt) {
  const double a = ring.a, b = ring.b;
  long long coarse_evals = 0;
  std::vector<double> seed;
  // coarse-to-fine: every polygon on M/2 normals is one on M normals too
  if (opt.M % 2 == 0 && opt.M / 2 >= 90) {
    SupportDescentOptions c = opt;
    c.M = opt.M / 2;
    FanResult cr = descent_on_fan(ring, lambda, c);
    coarse_evals = cr.evals;
    seed = lift_support(cr.h, a);
  }
  detail::Fan F(opt.M);
  const int M = opt.M;
  auto energy = [&](const std::vector<double>& h) { return lambda * F.area(h) - F.perimeter(h); };

  struct Run {
    std::vector<double> h;
    double J = std::numeric_limits<double>::infinity();
    long long evals = 0;
    std::vector<double> trace;
  };
  std::vector<Run> runs(static_cast<std::size_t>(opt.restarts));
  std::uint64_t sm = opt.seed;
  std::vector<std::uint64_t> seeds(runs.size());
  for (auto& s : seeds) s = num::splitmix64(sm);

  parallel_for(runs.size(), [&](std::size_t r) {
    num::Rng rng(seeds[r]);
    Run& run = runs[r];
    // a few cheap sparse searches; only the best one gets polished
    const detail::SparsePoly S{F, a, b};
    std::vector<detail::SparseEdge> edges;
    double best = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 4; ++t) {
      std::vector<detail::SparseEdge> seed_edges;
      if (t % 2 == 1) {
        auto v = detail::vertex_search(a, b, 0.25 * b * F.D, lambda, rng, run.evals);
        seed_edges = detail::round_to_fan(v, F, a, b);
      }
      auto e = detail::sparse_search(F, a, b, lambda, rng, run.evals, seed_edges);
      double Je = S.J(e, lambda);
      if (Je < best) {
        best = Je;
        edges = std::move(e);
      }
    }
    std::vector<double> h(M);
    detail::fan_support(S.vertices(edges), F, h);
    for (auto& v : h)
      if (v < a) v = a;  // rounding only; D_a lies inside poly
    double J = energy(h);
    // regular M-gon of random inradius, dilated to its best scale
    {
      const double rho = b * std::cos(F.D / 2);
      std::vector<double> c(M, rng.uniform(a, rho));
      detail::dilate(c, F, a, b, lambda);
      run.evals += 3;
      double Jc = energy(c);
      if (Jc < J) {
        h = std::move(c);
        J = Jc;
      }
    }
    ++run.evals;
    if (r == 0 && !seed.empty() && detail::feasible(seed, F, a, b)) {
      ++run.evals;
      double Js = energy(seed);
      if (Js < J) {
        h = seed;
        J = Js;
      }
    }
    run.trace.push_back(J);
    std::vector<double> trial(M);
    auto try_state = [&](const std::vector<double>& cand) {
      ++run.evals;
      if (!detail::feasible(cand, F, a, b)) return false;
      double Jc = energy(cand);
      if (Jc < J - 1e-13 * (1 + std::abs(J))) {
        h = cand;
        J = Jc;
        run.trace.push_back(J);
        return true;
      }
      return false;
    };
    const double lc = lambda / F.sD;
    auto coordinate_pass = [&] {
      // J is concave in each h_k, so only the ends of its interval matter
      for (int k = 0; k < M; ++k) {
        const double hm = h[F.wrap(k - 1)], hp = h[F.wrap(k + 1)];
        const double hmm = h[F.wrap(k - 2)], hpp = h[F.wrap(k + 2)];
        double lo = std::max({a, 2 * F.cD * hm - hmm, 2 * F.cD * hp - hpp});
        double hi = (hm + hp) / (2 * F.cD);
        for (double hj : {hm, hp}) {
          double s = std::sqrt(std::max(0.0, b * b - hj * hj));
          lo = std::max(lo, hj * F.cD - F.sD * s);
          hi = std::min(hi, hj * F.cD + F.sD * s);
        }
        if (!(hi >= lo)) continue;
        auto Jk = [&](double t) { return lc * (t * (hm + hp) - F.cD * t * t) - F.t2 * t; };
        double cur = Jk(h[k]);
        double vlo = Jk(lo), vhi = Jk(hi);
        run.evals += 2;
        if (vlo < cur && vlo <= vhi) h[k] = lo;
        else if (vhi < cur) h[k] = hi;
      }
      J = energy(h);
      run.trace.push_back(J);
    };
    // polish on the fan: coordinate passes until they stall, then one round of cuts
    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
      for (int pass = 0; pass < 500; ++pass) {
        double before = J;
        coordinate_pass();
        if (before - J <= 1e-12 * (1 + std::abs(J))) break;
      }
      double before = J;
      trial = h;
      detail::dilate(trial, F, a, b, lambda);
      run.evals += 3;
      try_state(trial);
      for (int k = 0; k < M; ++k) {
        const double hk = h[k];
        for (double f : {0.0, 0.5}) {
          const double t = a + f * (hk - a);
          if (!(t < hk - 1e-12)) continue;
          trial = h;
          detail::cut(trial, F, k, t);
          for (auto& v : trial)
            if (v < a && v > a - tau_geom) v = a;  // clip rounding
          if (try_state(trial)) break;
        }
        // new vertex on D_b at the fan vertex between normals k and k+1
        const Point w = (0.5 * b / std::cos(F.D / 2)) * (F.u[k] + F.u[F.wrap(k + 1)]);
        trial = h;
        bool grew = false;
        for (int j = 0; j < M; ++j) {
          double s = dot(w, F.u[j]);
          if (s > trial[j]) {
            trial[j] = s;
            grew = true;
          }
        }
        if (grew) try_state(trial);
      }
      if (before - J <= 1e-12 * (1 + std::abs(J))) break;
    }
    run.h = std::move(h);
    run.J = J;
  });

  std::size_t bi = 0;
  FanResult out;
  out.evals = coarse_evals;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out.evals += runs[r].evals;
    if (runs[r].J < runs[bi].J || (runs[r].J == runs[bi].J && runs[r].evals < runs[bi].evals)) bi = r;
  }
  out.h = std::move(runs[bi].h);
  out.J = runs[bi].J;
  out.trace = std::move(runs[bi].trace);
  return out;
}

}  // namespace detail

inline OracleResult support_descent(const RingParams& ring, double lambda, SupportDescentOptions opt = {}) {
  ring.validate();
  if (opt.M < 8) throw ParameterError("support_descent needs M >= 8");
  if (opt.restarts < 1) throw ParameterError("support_descent needs restarts >= 1");
  detail::FanResult fr = detail::descent_on_fan(ring, lambda, opt);
  const int M = opt.M;
  OracleResult res;
  res.method = OracleMethod::SupportDescent;
  res.evaluations = fr.evals;
  res.trace = std::move(fr.trace);
  res.body = support_polygon(fr.h);
  res.J = lambda * area(res.body) - perimeter(res.body);
  res.note = "fixed normal fan of " + std::to_string(M) + " directions; polygonal approximation";
  return res;
}

}  // namespace annulus
