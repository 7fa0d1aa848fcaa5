#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "annulus/numerics.hpp"

namespace annulus {

inline constexpr double tau_geom = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point p, Point q) { return {p.x + q.x, p.y + q.y}; }
  friend Point operator-(Point p, Point q) { return {p.x - q.x, p.y - q.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point p, Point q) = default;
};

inline double dot(Point p, Point q) { return p.x * q.x + p.y * q.y; }
inline double cross(Point p, Point q) { return p.x * q.y - p.y * q.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline Point unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

struct Segment {
  Point start;
  Point end;
};

// Counterclockwise arc of the origin-centred circle of given radius.
struct Arc {
  double radius = 0.0;
  double angle_start = 0.0;  // [0, 2pi)
  double angle_sweep = 0.0;  // (0, 2pi]

  Point start_point() const { return radius * unit(angle_start); }
  Point end_point() const { return radius * unit(angle_start + angle_sweep); }
  // true if the direction lies in the closed angular range of the arc
  bool covers(double angle) const {
    double rel = std::fmod(angle - angle_start, 2 * pi);
    if (rel < 0) rel += 2 * pi;
    return rel <= angle_sweep + 1e-15 || rel >= 2 * pi - 1e-15;
  }
};

using BoundaryPiece = std::variant<Segment, Arc>;

inline Point piece_start(const BoundaryPiece& pc) {
  return std::visit([](auto const& s) -> Point {
    if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Segment>) return s.start;
    else return s.start_point();
  }, pc);
}

inline Point piece_end(const BoundaryPiece& pc) {
  return std::visit([](auto const& s) -> Point {
    if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Segment>) return s.end;
    else return s.end_point();
  }, pc);
}

// unit tangent at start / end of a piece, in traversal direction
inline Point piece_tangent_start(const BoundaryPiece& pc) {
  if (auto s = std::get_if<Segment>(&pc)) {
    Point d = s->end - s->start;
    return (1.0 / norm(d)) * d;
  }
  const auto& a = std::get<Arc>(pc);
  return unit(a.angle_start + pi / 2);
}

inline Point piece_tangent_end(const BoundaryPiece& pc) {
  if (std::holds_alternative<Segment>(pc)) return piece_tangent_start(pc);
  const auto& a = std::get<Arc>(pc);
  return unit(a.angle_start + a.angle_sweep + pi / 2);
}

class ConvexBody {
 public:
  ConvexBody() = default;

  // Validates closure, convexity, winding and area. Throws GeometryError.
  static ConvexBody from_pieces(std::vector<BoundaryPiece> pieces, bool degenerate = false) {
    ConvexBody b;
    b.pieces_ = std::move(pieces);
    b.degenerate_ = degenerate;
    for (auto& pc : b.pieces_) {
      if (auto a = std::get_if<Arc>(&pc)) {
        a->angle_start = std::fmod(a->angle_start, 2 * pi);
        if (a->angle_start < 0) a->angle_start += 2 * pi;
      }
    }
    b.validate();
    return b;
  }

  static ConvexBody polygon(std::span<const Point> vertices) {
    std::vector<BoundaryPiece> pcs;
    const std::size_t n = vertices.size();
    pcs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pcs.emplace_back(Segment{vertices[i], vertices[(i + 1) % n]});
    return from_pieces(std::move(pcs));
  }

  static ConvexBody disk(double r) {
    return from_pieces({Arc{r, 0.0, 2 * pi}});
  }

  // Zero-area segment traversed twice.
  static ConvexBody double_segment(Point p, Point q) {
    return from_pieces({Segment{p, q}, Segment{q, p}}, true);
  }

  const std::vector<BoundaryPiece>& pieces() const { return pieces_; }
  bool degenerate() const { return degenerate_; }
  bool is_polygon() const {
    return std::all_of(pieces_.begin(), pieces_.end(),
                       [](auto const& p) { return std::holds_alternative<Segment>(p); });
  }

  // junction points, i.e. the start of every piece
  std::vector<Point> junctions() const {
    std::vector<Point> v;
    v.reserve(pieces_.size());
    for (auto const& p : pieces_) v.push_back(piece_start(p));
    return v;
  }

  ConvexBody scaled(double s) const {
    std::vector<BoundaryPiece> pcs = pieces_;
    for (auto& pc : pcs) {
      if (auto sg = std::get_if<Segment>(&pc)) {
        sg->start = s * sg->start;
        sg->end = s * sg->end;
      } else {
        std::get<Arc>(pc).radius *= s;
      }
    }
    return from_pieces(std::move(pcs), degenerate_);
  }

  // Arcs are pinned to the origin, so only polygons can be translated.
  ConvexBody translated(Point t) const {
    std::vector<BoundaryPiece> pcs = pieces_;
    for (auto& pc : pcs) {
      auto sg = std::get_if<Segment>(&pc);
      if (!sg) throw GeometryError("translated: body has origin-centred arcs");
      sg->start = sg->start + t;
      sg->end = sg->end + t;
    }
    return from_pieces(std::move(pcs), degenerate_);
  }

 private:
  void validate() const {
    if (pieces_.empty()) throw GeometryError("body has no pieces");
    double turning = 0.0;
    const std::size_t n = pieces_.size();
    for (std::size_t k = 0; k < n; ++k) {
      const auto& pc = pieces_[k];
      if (auto s = std::get_if<Segment>(&pc)) {
        if (!num::finite(s->start.x) || !num::finite(s->start.y) || !num::finite(s->end.x) ||
            !num::finite(s->end.y))
          throw GeometryError("non-finite coordinate");
        if (norm(s->end - s->start) <= tau_geom * 1e-3)
          throw GeometryError("segment with coincident endpoints");
      } else {
        const auto& a = std::get<Arc>(pc);
        if (!(a.radius > 0) || !num::finite(a.radius)) throw GeometryError("arc radius must be positive");
        if (!(a.angle_sweep > 0) || a.angle_sweep > 2 * pi + 1e-12)
          throw GeometryError("arc sweep must lie in (0, 2pi]");
        turning += a.angle_sweep;
      }
      const auto& nx = pieces_[(k + 1) % n];
      Point gap = piece_start(nx) - piece_end(pc);
      if (norm(gap) > tau_geom)
        throw GeometryError("boundary not closed at junction " + std::to_string(k));
      Point t0 = piece_tangent_end(pc);
      Point t1 = piece_tangent_start(nx);
      double c = cross(t0, t1);
      double d = dot(t0, t1);
      if (c < -tau_geom) throw GeometryError("boundary turns right at junction " + std::to_string(k));
      const bool reverses = d < -1.0 + 1e-12;
      if (reverses && !degenerate_)
        throw GeometryError("boundary reverses at junction " + std::to_string(k));
      // c may be -0.0 at a reversal, which would flip atan2 to -pi
      double turn = reverses ? pi : std::atan2(c > 0 ? c : 0.0, d);
      turning += turn;
    }
    if (std::abs(turning - 2 * pi) > 1e-6)
      throw GeometryError("boundary does not wind exactly once");
    if (!degenerate_ && !(signed_area() > 0))
      throw GeometryError("body has no positive area");
  }

 public:
  double signed_area() const {
    double s = 0.0;
    for (auto const& pc : pieces_) {
      if (auto sg = std::get_if<Segment>(&pc)) {
        s += 0.5 * cross(sg->start, sg->end);
      } else {
        const auto& a = std::get<Arc>(pc);
        s += 0.5 * a.radius * a.radius * a.angle_sweep;
      }
    }
    return s;
  }

 private:
  std::vector<BoundaryPiece> pieces_;
  bool degenerate_ = false;
};

inline double area(const ConvexBody& body) {
  if (body.degenerate()) return 0.0;
  return body.signed_area();
}

inline double perimeter(const ConvexBody& body) {
  double p = 0.0;
  for (auto const& pc : body.pieces()) {
    if (auto sg = std::get_if<Segment>(&pc)) p += norm(sg->end - sg->start);
    else p += std::get<Arc>(pc).radius * std::get<Arc>(pc).angle_sweep;
  }
  return p;
}

inline double support_value(const ConvexBody& body, double direction) {
  const Point u = unit(direction);
  double h = -std::numeric_limits<double>::infinity();
  for (auto const& pc : body.pieces()) {
    h = std::max(h, dot(piece_start(pc), u));
    if (auto a = std::get_if<Arc>(&pc); a && a->covers(direction)) h = std::max(h, a->radius);
  }
  return h;
}

namespace detail {

struct HalfPlane {
  Point n;   // outward unit normal
  double h;  // offset: <x, n> <= h
};

// Supporting half-planes; arcs contribute tangent lines sampled every 1e-3 rad.
inline std::vector<HalfPlane> supporting_halfplanes(const ConvexBody& body) {
  std::vector<HalfPlane> out;
  for (auto const& pc : body.pieces()) {
    if (auto sg = std::get_if<Segment>(&pc)) {
      Point d = sg->end - sg->start;
      double len = norm(d);
      Point n{d.y / len, -d.x / len};
      out.push_back({n, dot(sg->start, n)});
    } else {
      const auto& a = std::get<Arc>(pc);
      int steps = std::max(1, static_cast<int>(std::ceil(a.angle_sweep / 1e-3)));
      for (int j = 0; j <= steps; ++j) {
        double phi = a.angle_start + a.angle_sweep * j / steps;
        out.push_back({unit(phi), a.radius});
      }
    }
  }
  // merge (nearly) identical normals, keep the tighter offset
  std::sort(out.begin(), out.end(), [](auto const& p, auto const& q) {
    return std::atan2(p.n.y, p.n.x) < std::atan2(q.n.y, q.n.x);
  });
  std::vector<HalfPlane> merged;
  for (auto const& hp : out) {
    if (!merged.empty() && norm(merged.back().n - hp.n) < 1e-12) {
      merged.back().h = std::min(merged.back().h, hp.h);
    } else {
      merged.push_back(hp);
    }
  }
  if (merged.size() > 1 && norm(merged.front().n - merged.back().n) < 1e-12) {
    merged.front().h = std::min(merged.front().h, merged.back().h);
    merged.pop_back();
  }
  return merged;
}

using Vec3 = std::array<double, 3>;

inline double dot3(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }
inline Vec3 cross3(const Vec3& u, const Vec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

struct InradiusResult {
  Point center;
  double radius;
  std::vector<std::size_t> contacts;  // indices of tight half-planes
  std::vector<HalfPlane> planes;
};

// maximize r subject to <c, n_i> + r <= h_i; active-set walk over the
// three variables (cx, cy, r)
inline InradiusResult chebyshev_center(const ConvexBody& body) {
  if (body.degenerate() || !(area(body) > 0)) throw GeometryError("inradius: degenerate body");
  auto planes = supporting_halfplanes(body);
  const std::size_t m = planes.size();
  std::vector<Vec3> A(m);
  for (std::size_t i = 0; i < m; ++i) A[i] = {planes[i].n.x, planes[i].n.y, 1.0};

  // interior start: mean of sampled boundary points
  Point c0{0, 0};
  std::size_t cnt = 0;
  for (auto const& pc : body.pieces()) {
    if (auto sg = std::get_if<Segment>(&pc)) {
      c0 = c0 + sg->start;
      ++cnt;
    } else {
      const auto& a = std::get<Arc>(pc);
      for (int j = 0; j < 8; ++j) {
        c0 = c0 + a.radius * unit(a.angle_start + a.angle_sweep * (j + 0.5) / 8);
        ++cnt;
      }
    }
  }
  c0 = (1.0 / static_cast<double>(cnt)) * c0;
  Vec3 z{c0.x, c0.y, 0.0};
  double r0 = std::numeric_limits<double>::infinity();
  std::size_t i0 = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double s = planes[i].h - dot(c0, planes[i].n);
    if (s < r0) {
      r0 = s;
      i0 = i;
    }
  }
  z[2] = r0;
  std::vector<std::size_t> W{i0};
  const Vec3 g{0, 0, 1};

  auto slack = [&](std::size_t i) { return planes[i].h - dot3(A[i], z); };

  for (std::size_t iter = 0; iter < 20 * m + 100; ++iter) {
    Vec3 d{0, 0, 0};
    if (W.empty()) {
      d = g;
    } else if (W.size() == 1) {
      const Vec3& a = A[W[0]];
      double k = dot3(a, g) / dot3(a, a);
      d = {g[0] - k * a[0], g[1] - k * a[1], g[2] - k * a[2]};
    } else if (W.size() == 2) {
      d = cross3(A[W[0]], A[W[1]]);
      double dn = std::sqrt(dot3(d, d));
      if (dn > 0) d = {d[0] / dn, d[1] / dn, d[2] / dn};
      if (dot3(d, g) < 0) d = {-d[0], -d[1], -d[2]};
    }
    double dn = std::sqrt(dot3(d, d));
    if (W.size() < 3 && dot3(d, g) > 1e-13 * std::max(dn, 1.0)) {
      double best_t = std::numeric_limits<double>::infinity();
      std::size_t best_i = m;
      for (std::size_t i = 0; i < m; ++i) {
        if (std::find(W.begin(), W.end(), i) != W.end()) continue;
        double ad = dot3(A[i], d);
        if (ad <= 1e-15) continue;
        double t = std::max(0.0, slack(i)) / ad;
        if (t < best_t) {
          best_t = t;
          best_i = i;
        }
      }
      if (best_i == m) throw GeometryError("inradius: unbounded program");
      for (int k = 0; k < 3; ++k) z[k] += best_t * d[k];
      W.push_back(best_i);
      continue;
    }
    // multipliers: g = sum mu_j a_j over the working set
    std::vector<double> mu(W.size(), 0.0);
    if (W.size() == 3) {
      const Vec3& a0 = A[W[0]];
      const Vec3& a1 = A[W[1]];
      const Vec3& a2 = A[W[2]];
      double det = dot3(a0, cross3(a1, a2));
      if (std::abs(det) < 1e-14) {
        // dependent rows: drop the newest and keep walking
        W.pop_back();
        continue;
      }
      mu[0] = dot3(g, cross3(a1, a2)) / det;
      mu[1] = dot3(a0, cross3(g, a2)) / det;
      mu[2] = dot3(a0, cross3(a1, g)) / det;
    } else if (W.size() == 2) {
      const Vec3& a0 = A[W[0]];
      const Vec3& a1 = A[W[1]];
      double g00 = dot3(a0, a0), g01 = dot3(a0, a1), g11 = dot3(a1, a1);
      double b0 = dot3(a0, g), b1 = dot3(a1, g);
      double det = g00 * g11 - g01 * g01;
      mu[0] = (b0 * g11 - b1 * g01) / det;
      mu[1] = (g00 * b1 - g01 * b0) / det;
    }
    std::size_t worst = W.size();
    double worst_mu = -1e-12;
    for (std::size_t j = 0; j < W.size(); ++j) {
      if (mu[j] < worst_mu) {
        worst_mu = mu[j];
        worst = j;
      }
    }
    if (worst == W.size()) break;  // optimal
    W.erase(W.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  InradiusResult res;
  res.center = {z[0], z[1]};
  // recompute the radius as the true minimum slack
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) r = std::min(r, planes[i].h - dot(res.center, planes[i].n));
  res.radius = r;
  for (std::size_t i = 0; i < m; ++i)
    if (planes[i].h - dot(res.center, planes[i].n) - r <= 1e-9 * std::max(1.0, std::abs(r)))
      res.contacts.push_back(i);
  res.planes = std::move(planes);
  return res;
}

struct Disk2 {
  Point c;
  double r;
  bool contains(Point p) const { return norm(p - c) <= r * (1 + 1e-14) + 1e-15; }
};

inline Disk2 disk_from(Point p, Point q) {
  return {0.5 * (p + q), 0.5 * norm(p - q)};
}

inline Disk2 disk_from(Point p, Point q, Point s) {
  Point b = q - p;
  Point c = s - p;
  double d = 2 * cross(b, c);
  if (std::abs(d) < 1e-300 || std::abs(d) < 1e-14 * dot(b, b) * std::sqrt(dot(c, c)) / std::max(1.0, norm(b))) {
    // collinear: widest pair
    Disk2 best = disk_from(p, q);
    for (auto cand : {disk_from(p, s), disk_from(q, s)})
      if (cand.r > best.r) best = cand;
    return best;
  }
  double bb = dot(b, b), cc = dot(c, c);
  Point u{(c.y * bb - b.y * cc) / d, (b.x * cc - c.x * bb) / d};
  return {p + u, norm(u)};
}

// Welzl-style incremental minidisk on a deterministically shuffled copy.
inline Disk2 minidisk(std::vector<Point> pts) {
  if (pts.empty()) throw GeometryError("minidisk: no points");
  num::Rng rng(0x5eedULL);
  for (std::size_t i = pts.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(rng.integer(0, static_cast<long long>(i - 1)));
    std::swap(pts[i - 1], pts[j]);
  }
  Disk2 D{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (D.contains(pts[i])) continue;
    D = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (D.contains(pts[j])) continue;
      D = disk_from(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (D.contains(pts[k])) continue;
        D = disk_from(pts[i], pts[j], pts[k]);
      }
    }
  }
  return D;
}

}  // namespace detail

inline double inradius(const ConvexBody& body) { return detail::chebyshev_center(body).radius; }

inline double circumradius(const ConvexBody& body) {
  std::vector<Point> pts = body.junctions();
  std::vector<Arc> arcs;
  for (auto const& pc : body.pieces())
    if (auto a = std::get_if<Arc>(&pc)) arcs.push_back(*a);
  detail::Disk2 D = detail::minidisk(pts);
  for (int round = 0; round < 64 && !arcs.empty(); ++round) {
    bool added = false;
    for (auto const& a : arcs) {
      Point far;
      if (norm(D.c) < 1e-15) {
        far = a.radius * unit(a.angle_start + 0.5 * a.angle_sweep);
      } else {
        double dir = std::atan2(-D.c.y, -D.c.x);
        if (!a.covers(dir)) continue;
        far = a.radius * unit(dir);
      }
      if (norm(far - D.c) > D.r + 1e-12 * (1 + D.r)) {
        pts.push_back(far);
        added = true;
      }
    }
    if (!added) break;
    // a full circle has no finite point set; add a few of its points
    for (auto const& a : arcs)
      for (int j = 0; j <= 4; ++j) pts.push_back(a.radius * unit(a.angle_start + a.angle_sweep * j / 4));
    D = detail::minidisk(pts);
  }
  return D.r;
}

inline bool in_ring(const ConvexBody& body, double a, double b) {
  if (!(a > 0) || !(a < b)) throw ParameterError("in_ring requires 0 < a < b");
  double hmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (auto const& pc : body.pieces()) {
    if (auto sg = std::get_if<Segment>(&pc)) {
      Point d = sg->end - sg->start;
      double len = norm(d);
      Point n{d.y / len, -d.x / len};
      hmin = std::min(hmin, dot(sg->start, n));
      rmax = std::max({rmax, norm(sg->start), norm(sg->end)});
    } else {
      double r = std::get<Arc>(pc).radius;
      hmin = std::min(hmin, r);
      rmax = std::max(rmax, r);
    }
  }
  if (body.degenerate()) hmin = 0.0;
  return hmin >= a - tau_geom && rmax <= b + tau_geom;
}

// Andrew monotone chain; drops collinear points. Counterclockwise output.
inline std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point p, Point q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

inline ConvexBody random_convex_polygon(int n, double radius, std::uint64_t seed) {
  if (n < 3) throw ParameterError("random_convex_polygon needs n >= 3");
  num::Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Point> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) {
      double r = radius * std::sqrt(rng.uniform());
      double t = 2 * pi * rng.uniform();
      p = r * unit(t);
    }
    auto hull = convex_hull(pts);
    if (hull.size() < 3) continue;
    double A = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) A += 0.5 * cross(hull[i], hull[(i + 1) % hull.size()]);
    if (A <= 1e-10 * radius * radius) continue;
    try {
      return ConvexBody::polygon(hull);
    } catch (const GeometryError&) {
      continue;
    }
  }
  throw GeometryError("random_convex_polygon: too many degenerate draws");
}

}  // namespace annulus
