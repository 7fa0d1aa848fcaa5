#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "annulus/geometry.hpp"
#include "annulus/numerics.hpp"

namespace annulus {

inline constexpr double tau_angle = 1e-12;

struct RingParams {
  double a = 0.0;
  double b = 0.0;

  void validate() const {
    if (!num::finite(a) || !num::finite(b) || !(a > 0) || !(a < b))
      throw ParameterError("ring requires finite 0 < a < b (got a=" + num::fmt_sig(a) + ", b=" + num::fmt_sig(b) + ")");
  }
};

inline RingParams make_ring(double a, double b) {
  RingParams r{a, b};
  r.validate();
  return r;
}

inline double xi0(const RingParams& ring) { return std::acos(ring.a / ring.b); }

// tan(xi0) without passing through the angle
inline double tan_xi0(const RingParams& ring) {
  return std::sqrt((ring.b - ring.a) * (ring.b + ring.a)) / ring.a;
}

// largest p with p xi0 <= pi, snapped when pi/xi0 is within 1e-12 of an integer
inline int p0(const RingParams& ring) {
  double r = pi / xi0(ring);
  double n = std::round(r);
  if (std::abs(r - n) <= 1e-12) return static_cast<int>(n);
  return static_cast<int>(std::floor(r));
}

// Half-angle classes: p copies of xi0, tangent half-angles, chord half-angles.
struct AngleConfig {
  int p = 0;
  std::vector<double> tangent;
  std::vector<double> chords;

  std::size_t sides() const { return static_cast<std::size_t>(p) + tangent.size() + chords.size(); }
  friend bool operator==(const AngleConfig&, const AngleConfig&) = default;
};

namespace detail {

inline double sum_desc(std::vector<double> v, double (*f)(double)) {
  std::sort(v.begin(), v.end(), std::greater<>());
  double s = 0.0;
  for (double x : v) s += f(x);
  return s;
}

inline double f_tan(double x) { return std::tan(x); }
inline double f_sin(double x) { return std::sin(x); }
inline double f_sincos(double x) { return std::sin(x) * std::cos(x); }

}  // namespace detail

// Checks the invariants and returns the canonical form: angles equal to xi0
// (within tau_angle) folded into p, classes sorted descending, angle sum
// repaired through the largest free angle when off by at most 1e-9.
inline AngleConfig normalize(AngleConfig c, const RingParams& ring) {
  ring.validate();
  const double x0 = xi0(ring);
  if (c.p < 0) throw ConfigError("p must be >= 0");
  auto fold = [&](std::vector<double>& v) {
    std::vector<double> keep;
    for (double t : v) {
      if (!num::finite(t)) throw ConfigError("non-finite angle");
      if (std::abs(t - x0) <= tau_angle) {
        ++c.p;
      } else {
        keep.push_back(t);
      }
    }
    v = std::move(keep);
  };
  fold(c.tangent);
  fold(c.chords);
  for (auto* v : {&c.tangent, &c.chords})
    for (double t : *v)
      if (!(t > 0) || !(t < x0))
        throw ConfigError("angle " + num::fmt_sig(t) + " outside (0, xi0=" + num::fmt_sig(x0) + ")");
  std::sort(c.tangent.begin(), c.tangent.end(), std::greater<>());
  std::sort(c.chords.begin(), c.chords.end(), std::greater<>());
  double s = c.p * x0;
  for (double t : c.tangent) s += t;
  for (double t : c.chords) s += t;
  double diff = pi - s;
  if (std::abs(diff) > 1e-9)
    throw ConfigError("angle sum " + num::fmt_sig(s, 15) + " differs from pi by " + num::fmt_sig(diff));
  if (std::abs(diff) > tau_angle) {
    double* largest = nullptr;
    if (!c.tangent.empty()) largest = &c.tangent.front();
    if (!c.chords.empty() && (!largest || c.chords.front() > *largest)) largest = &c.chords.front();
    if (largest) {
      *largest += diff;
      if (!(*largest > 0) || !(*largest < x0)) throw ConfigError("angle sum repair leaves (0, xi0)");
    }
  }
  return c;
}

struct Measures {
  double area;
  double perimeter;
};

// closed-form area and perimeter of the polygon encoded by the classes
inline Measures config_measures(const AngleConfig& c, const RingParams& ring) {
  const double a = ring.a, b = ring.b, tx = tan_xi0(ring);
  const double st = detail::sum_desc(c.tangent, detail::f_tan);
  const double sc = detail::sum_desc(c.chords, detail::f_sincos);
  const double ss = detail::sum_desc(c.chords, detail::f_sin);
  Measures m;
  m.area = c.p * a * a * tx + a * a * st + b * b * sc;
  m.perimeter = 2 * (c.p * a * tx + a * st + b * ss);
  return m;
}

inline double evaluate_J(const AngleConfig& config, const RingParams& ring, double lambda) {
  AngleConfig c = normalize(config, ring);
  if (!(lambda >= 0) || !num::finite(lambda)) throw ParameterError("lambda must be finite and >= 0");
  Measures m = config_measures(c, ring);
  return lambda * m.area - m.perimeter;
}

// Canonical polygon. Starts at the D_b vertex in direction 0; tangent pairs sit
// between the two halves of the first xi0-side, then the remaining xi0-sides,
// then the chords.
inline std::vector<Point> synthesize_vertices(const AngleConfig& config, const RingParams& ring) {
  AngleConfig c = normalize(config, ring);
  const double a = ring.a, b = ring.b, x0 = xi0(ring);
  std::vector<Point> v;
  if (c.p == 0 && !c.tangent.empty() && !c.chords.empty())
    throw ConfigError("tangent pairs and chords without a xi0-side cannot be joined");
  if (c.p == 0 && !c.tangent.empty()) {
    double t = 0.0;  // tangency point angle
    for (double th : c.tangent) {
      v.push_back((a / std::cos(th)) * unit(t + th));
      t += 2 * th;
    }
    return v;
  }
  double phi = 0.0;
  if (c.p > 0) {
    v.push_back(b * unit(0.0));
    double t = x0;
    for (double th : c.tangent) {
      v.push_back((a / std::cos(th)) * unit(t + th));
      t += 2 * th;
    }
    phi = t + x0;
    for (int k = 1; k < c.p; ++k) {
      v.push_back(b * unit(phi));
      phi += 2 * x0;
    }
  }
  for (double eta : c.chords) {
    v.push_back(b * unit(phi));
    phi += 2 * eta;
  }
  return v;
}

inline ConvexBody synthesize_polygon(const AngleConfig& config, const RingParams& ring) {
  auto v = synthesize_vertices(config, ring);
  return ConvexBody::polygon(v);
}

// Partial derivatives in the order: xi0 copies (tangent view), tangents, chords.
inline double dJ_tangent(double theta, const RingParams& r, double lambda) {
  double c = std::cos(theta);
  return r.a * r.a * (lambda - 2 / r.a) / (c * c);
}
inline double dJ_chord(double eta, const RingParams& r, double lambda) {
  return lambda * r.b * r.b * std::cos(2 * eta) - 2 * r.b * std::cos(eta);
}
inline double dJ_xi0_tangent_view(const RingParams& r, double lambda) { return r.b * r.b * (lambda - 2 / r.a); }
inline double dJ_xi0_chord_view(const RingParams& r, double lambda) {
  return lambda * (2 * r.a * r.a - r.b * r.b) - 2 * r.a;
}

enum class SecondOrderStatus { Ok, Fail, Indeterminate };

inline const char* to_string(SecondOrderStatus s) {
  switch (s) {
    case SecondOrderStatus::Ok: return "ok";
    case SecondOrderStatus::Fail: return "fail";
    default: return "indeterminate";
  }
}

struct Certificate {
  double kkt_residual = 0.0;
  double mu0 = 0.0;
  bool multiplier_underdetermined = false;
  std::optional<double> xi0_multiplier_tangent;  // >= 0 required
  std::optional<double> xi0_multiplier_chord;    // >= 0 required
  std::optional<double> chord_pair_residual;     // |cos x + cos y - 1/(b lambda)|
  std::vector<double> hessian_eigenvalues;
  bool second_order_ok = false;
  SecondOrderStatus second_order_status = SecondOrderStatus::Fail;
  std::optional<double> hpr_sum;
};

inline Certificate kkt_residuals(const AngleConfig& config, const RingParams& ring, double lambda) {
  AngleConfig c = normalize(config, ring);
  Certificate cert;
  std::vector<double> d;
  for (double t : c.tangent) d.push_back(dJ_tangent(t, ring, lambda));
  for (double e : c.chords) d.push_back(dJ_chord(e, ring, lambda));
  double stat = 0.0;
  if (d.empty()) {
    cert.mu0 = dJ_xi0_tangent_view(ring, lambda);
    cert.multiplier_underdetermined = true;
  } else {
    auto [lo, hi] = std::minmax_element(d.begin(), d.end());
    cert.mu0 = 0.5 * (*lo + *hi);
    stat = 0.5 * (*hi - *lo);
  }
  double viol = 0.0;
  if (c.p > 0 && !d.empty()) {
    // decreasing a xi0-angle must not help: mu_k = mu0 - dJ_k >= 0
    cert.xi0_multiplier_tangent = cert.mu0 - dJ_xi0_tangent_view(ring, lambda);
    cert.xi0_multiplier_chord = cert.mu0 - dJ_xi0_chord_view(ring, lambda);
    viol = std::max({viol, -*cert.xi0_multiplier_tangent, -*cert.xi0_multiplier_chord});
  }
  cert.kkt_residual = std::max(stat, viol);
  if (c.chords.size() >= 2 && lambda > 0) {
    double x = c.chords.front(), y = c.chords.back();
    if (x - y > 1e-9) cert.chord_pair_residual = std::abs(std::cos(x) + std::cos(y) - 1 / (ring.b * lambda));
  }
  return cert;
}

inline double hess_xi0(const RingParams& r, double lambda) {
  return 2 * (r.b * r.b / (r.a * r.a)) * std::sqrt(r.b * r.b - r.a * r.a) * (r.a * lambda - 2);
}
inline double hess_tangent(double theta, const RingParams& r, double lambda) {
  double c = std::cos(theta);
  return 2 * r.a * (r.a * lambda - 2) * std::sin(theta) / (c * c * c);
}
inline double hess_chord(double eta, const RingParams& r, double lambda) {
  return 2 * r.b * (-r.b * lambda * std::sin(2 * eta) + std::sin(eta));
}

inline std::vector<double> hessian_spectrum(const AngleConfig& config, const RingParams& ring, double lambda) {
  AngleConfig c = normalize(config, ring);
  std::vector<double> h;
  for (int k = 0; k < c.p; ++k) h.push_back(hess_xi0(ring, lambda));
  for (double t : c.tangent) h.push_back(hess_tangent(t, ring, lambda));
  for (double e : c.chords) h.push_back(hess_chord(e, ring, lambda));
  return h;
}

struct SecondOrder {
  SecondOrderStatus status = SecondOrderStatus::Ok;
  int negatives = 0;
  std::optional<double> hpr_sum;
  bool ok() const { return status == SecondOrderStatus::Ok; }
};

// Diagonal Hessian restricted to the angle-sum hyperplane; xi0 copies are fixed.
inline SecondOrder second_order_ok(const AngleConfig& config, const RingParams& ring, double lambda) {
  AngleConfig c = normalize(config, ring);
  std::vector<double> h;
  for (double t : c.tangent) h.push_back(hess_tangent(t, ring, lambda));
  for (double e : c.chords) h.push_back(hess_chord(e, ring, lambda));
  SecondOrder res;
  double scale = 0.0;
  for (double v : h) scale = std::max(scale, std::abs(v));
  int zeros = 0;
  for (double v : h) {
    if (std::abs(v) <= 1e-12 * std::max(scale, 1e-300)) ++zeros;
    else if (v < 0) ++res.negatives;
  }
  if (res.negatives == 0) {
    res.status = SecondOrderStatus::Ok;
  } else if (res.negatives >= 2) {
    res.status = SecondOrderStatus::Fail;
  } else if (zeros > 0) {
    res.status = SecondOrderStatus::Indeterminate;
  } else {
    double s = 0.0;
    for (double v : h) s += 1.0 / v;
    res.hpr_sum = s;
    res.status = s <= 0 ? SecondOrderStatus::Ok : SecondOrderStatus::Fail;
  }
  return res;
}

inline Certificate certificate(const AngleConfig& config, const RingParams& ring, double lambda) {
  Certificate cert = kkt_residuals(config, ring, lambda);
  cert.hessian_eigenvalues = hessian_spectrum(config, ring, lambda);
  SecondOrder so = second_order_ok(config, ring, lambda);
  cert.second_order_status = so.status;
  cert.second_order_ok = so.ok();
  cert.hpr_sum = so.hpr_sum;
  return cert;
}

namespace detail {

// x - sin x, accurate for small x
inline double x_minus_sin(double x) {
  if (std::abs(x) < 0.1) {
    double x2 = x * x, term = x * x2 / 6, s = 0.0;
    for (int k = 1; k < 10; ++k) {
      s += term;
      term *= -x2 / ((2 * k + 2) * (2 * k + 3));
    }
    return s;
  }
  return x - std::sin(x);
}

// tan x - x, accurate for small x
inline double tan_minus_x(double x) {
  if (std::abs(x) < 0.05) {
    double x2 = x * x;
    double x3 = x * x2;
    return x3 * (1.0 / 3 + x2 * (2.0 / 15 + x2 * (17.0 / 315 + x2 * (62.0 / 2835 + x2 * 1382.0 / 155925))));
  }
  return std::tan(x) - x;
}

}  // namespace detail

// J(D_b) - J(D_b with the cap over (-eta, eta) cut by its chord)
inline double delta_arc_chord(double b, double lambda, double eta) {
  if (eta < 0 || eta >= pi / 2) throw ParameterError("delta_arc_chord: eta must lie in [0, pi/2)");
  if (eta == 0) return 0.0;
  double e1 = detail::x_minus_sin(eta);            // eta - sin eta
  double e2 = 0.5 * detail::x_minus_sin(2 * eta);  // eta - sin eta cos eta
  return lambda * b * b * e2 - 2 * b * e1;
}

// J(D_a) - J(D_a with the arc over (-eta, eta) replaced by two tangents)
inline double delta_arc_tangent(double a, double lambda, double eta) {
  if (eta < 0 || eta >= pi / 2) throw ParameterError("delta_arc_tangent: eta must lie in [0, pi/2)");
  return -a * a * detail::tan_minus_x(eta) * (lambda - 2 / a);
}

// J with the residual angle x as a chord minus J with it as a tangent pair
inline double delta_slide_vertex(const RingParams& ring, double lambda, double x) {
  const double x0 = xi0(ring);
  if (!(x > 0) || !(x < x0)) throw ParameterError("delta_slide_vertex: x must lie in (0, xi0)");
  const double a = ring.a, b = ring.b, c = std::cos(x);
  return std::tan(x) * (b * c - a) * (b * c + a) * (lambda - 2 / (b * c + a));
}

}  // namespace annulus
