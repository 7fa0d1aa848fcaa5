#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "annulus/analytic_solver.hpp"
#include "annulus/angle_model.hpp"

using namespace annulus;

namespace {

double J_body(const ConvexBody& b, double l) { return l * area(b) - perimeter(b); }

// valid synthesizable config: p >= 1 and free angles filling the rest
AngleConfig random_config(num::Rng& rng, RingParams& ring, double& lambda) {
  for (;;) {
    double a = rng.uniform(0.3, 2.0), b = a * rng.uniform(1.1, 4.0);
    ring = make_ring(a, b);
    lambda = rng.uniform(0.01, 3.0 / a);
    double x0 = xi0(ring);
    AngleConfig c;
    c.p = static_cast<int>(rng.integer(1, p0(ring)));
    double rest = pi - c.p * x0;
    if (rest < 1e-3) continue;
    int n = static_cast<int>(std::ceil(rest / (0.9 * x0))) + static_cast<int>(rng.integer(0, 2));
    std::vector<double> w(static_cast<std::size_t>(n));
    double s = 0;
    for (auto& v : w) s += (v = rng.uniform(0.5, 1.5));
    bool ok = true;
    for (auto& v : w) {
      v *= rest / s;
      ok = ok && v < x0 - 1e-6 && v > 1e-6;
    }
    if (!ok) continue;
    double fix = pi - c.p * x0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) fix -= w[i];
    w.back() = fix;
    if (!(w.back() > 1e-6 && w.back() < x0 - 1e-6)) continue;
    for (double v : w) (rng.uniform() < 0.5 ? c.tangent : c.chords).push_back(v);
    return c;
  }
}

double J_raw(const AngleConfig& c, const RingParams& r, double l) {
  auto m = config_measures(c, r);
  return l * m.area - m.perimeter;
}

}  // namespace

TEST(AngleModel, Xi0) {
  EXPECT_NEAR(xi0(make_ring(1, 3)), 1.230959417, 1e-9);
  EXPECT_NEAR(xi0(make_ring(1, 2)), pi / 3, 1e-15);
  EXPECT_NEAR(xi0(make_ring(1, std::sqrt(2.0))), pi / 4, 1e-15);
}

TEST(AngleModel, P0) {
  EXPECT_EQ(p0(make_ring(1, 3)), 2);
  EXPECT_EQ(p0(make_ring(1, 2)), 3);
  EXPECT_EQ(p0(make_ring(1, std::sqrt(2.0))), 4);
}

TEST(AngleModel, RingValidation) {
  EXPECT_THROW(make_ring(3, 1), ParameterError);
  EXPECT_THROW(make_ring(0, 1), ParameterError);
  EXPECT_THROW(make_ring(1, 1), ParameterError);
  EXPECT_THROW(make_ring(1, INFINITY), ParameterError);
}

TEST(AngleModel, EvaluateJExamples) {
  RingParams r = make_ring(1, 3);
  AngleConfig tri{0, {}, {pi / 3, pi / 3, pi / 3}};
  EXPECT_NEAR(evaluate_J(tri, r, 0.25), 0.25 * 27 * std::sqrt(3.0) / 4 - 9 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(evaluate_J(tri, r, 0.25), -12.6657, 1e-4);
  RingParams s = make_ring(1, std::sqrt(2.0));
  for (double l : {0.0, 0.5, 1.7}) EXPECT_NEAR(evaluate_J(AngleConfig{4, {}, {}}, s, l), 4 * l - 8, 1e-12);
  // tangent and xi0 sides only at lambda = 2/a
  RingParams q = make_ring(1.5, 4);
  double x = pi - p0(q) * xi0(q);
  EXPECT_NEAR(evaluate_J(AngleConfig{p0(q), {x}, {}}, q, 2 / 1.5), 0.0, 1e-12);
  EXPECT_NEAR(evaluate_J(AngleConfig{p0(q), {0.4 * x, 0.6 * x}, {}}, q, 2 / 1.5), 0.0, 1e-12);
  EXPECT_THROW(evaluate_J(tri, r, -1), ParameterError);
}

TEST(AngleModel, SynthesizeExamples) {
  RingParams r = make_ring(1, 3);
  EXPECT_NEAR(area(synthesize_polygon({2, {pi - 2 * xi0(r)}, {}}, r)), 6.4650, 1e-3);
  EXPECT_NEAR(area(synthesize_polygon({0, {}, {pi / 4, pi / 4, pi / 4, pi / 4}}, r)), 18.0, 1e-12);
  EXPECT_NEAR(area(synthesize_polygon({0, {}, std::vector<double>(6, pi / 6)}, r)), 23.3827, 1e-4);
  EXPECT_THROW(synthesize_polygon({0, {1.0}, {pi - 1.0}}, make_ring(1, 10)), ConfigError);
}

TEST(AngleModel, NormalizeContract) {
  RingParams r = make_ring(1, 3);
  double x0 = xi0(r);
  // xi0 entries fold into p, classes sorted descending
  AngleConfig c = normalize({1, {x0, pi - 2 * x0}, {}}, r);
  EXPECT_EQ(c.p, 2);
  ASSERT_EQ(c.tangent.size(), 1u);
  EXPECT_NEAR(c.tangent[0], pi - 2 * x0, 1e-15);
  AngleConfig d = normalize({0, {}, {1.0, 1.2, pi - 2.2}}, r);
  EXPECT_TRUE(std::is_sorted(d.chords.begin(), d.chords.end(), std::greater<>()));
  // small sum error repaired, large rejected
  AngleConfig e = normalize({0, {}, {pi / 3 + 5e-10, pi / 3, pi / 3}}, r);
  double s = 0;
  for (double t : e.chords) s += t;
  EXPECT_NEAR(s, pi, 1e-15);
  EXPECT_THROW(normalize({0, {}, {pi / 3 + 1e-6, pi / 3, pi / 3}}, r), ConfigError);
  EXPECT_THROW(normalize({0, {}, {1.3, 1.3, pi - 2.6}}, r), ConfigError);  // above xi0
  EXPECT_THROW(normalize({-1, {}, {}}, r), ConfigError);
}

TEST(AngleModel, PermutationInvariance) {
  num::Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    RingParams r;
    double l;
    AngleConfig c = random_config(rng, r, l);
    AngleConfig d = c;
    std::reverse(d.tangent.begin(), d.tangent.end());
    std::reverse(d.chords.begin(), d.chords.end());
    EXPECT_EQ(evaluate_J(c, r, l), evaluate_J(d, r, l));
  }
}

TEST(AngleModel, EvaluateMatchesGeometry) {
  num::Rng rng(11);
  int done = 0;
  for (int k = 0; k < 400 && done < 100; ++k) {
    RingParams r;
    double l;
    AngleConfig c = random_config(rng, r, l);
    ConvexBody body;
    try {
      body = synthesize_polygon(c, r);
    } catch (const ConfigError&) {
      continue;
    }
    double J = evaluate_J(c, r, l), G = J_body(body, l);
    EXPECT_NEAR(J, G, 1e-10 * std::max(1.0, std::abs(J)));
    EXPECT_TRUE(in_ring(body, r.a, r.b));
    ++done;
  }
  EXPECT_EQ(done, 100);
}

TEST(AngleModel, GradientFiniteDifferences) {
  num::Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    RingParams r;
    double l;
    AngleConfig c = random_config(rng, r, l);
    auto check = [&](std::vector<double>& v, auto deriv) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        double t = v[i], h = 1e-6;
        v[i] = t + h;
        double jp = J_raw(c, r, l);
        v[i] = t - h;
        double jm = J_raw(c, r, l);
        v[i] = t;
        double fd = (jp - jm) / (2 * h), an = deriv(t);
        EXPECT_NEAR(fd, an, 1e-6 * std::max(1.0, std::abs(an)));
      }
    };
    check(c.tangent, [&](double t) { return dJ_tangent(t, r, l); });
    check(c.chords, [&](double t) { return dJ_chord(t, r, l); });
    EXPECT_NEAR(dJ_tangent(xi0(r), r, l), dJ_xi0_tangent_view(r, l), 1e-9 * std::max(1.0, std::abs(dJ_xi0_tangent_view(r, l))));
    EXPECT_NEAR(dJ_chord(xi0(r), r, l), dJ_xi0_chord_view(r, l), 1e-12 * std::max(1.0, std::abs(dJ_xi0_chord_view(r, l))));
  }
}

TEST(AngleModel, HessianFiniteDifferences) {
  num::Rng rng(22);
  for (int k = 0; k < 50; ++k) {
    RingParams r;
    double l;
    AngleConfig c = random_config(rng, r, l);
    auto eig = hessian_spectrum(c, r, l);
    ASSERT_EQ(eig.size(), c.sides());
    auto check = [&](std::vector<double>& v, auto second) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        double t = v[i], h = 1e-4;
        double j0 = J_raw(c, r, l);
        v[i] = t + h;
        double jp = J_raw(c, r, l);
        v[i] = t - h;
        double jm = J_raw(c, r, l);
        v[i] = t;
        double fd = (jp - 2 * j0 + jm) / (h * h), an = second(t);
        EXPECT_NEAR(fd, an, 1e-4 * std::max(1.0, std::abs(an)));
      }
    };
    check(c.tangent, [&](double t) { return hess_tangent(t, r, l); });
    check(c.chords, [&](double t) { return hess_chord(t, r, l); });
    EXPECT_NEAR(hess_tangent(xi0(r), r, l), hess_xi0(r, l), 1e-9 * std::max(1.0, std::abs(hess_xi0(r, l))));
  }
}

TEST(AngleModel, HessianSigns) {
  RingParams r = make_ring(1, 3);
  double x = pi - 2 * xi0(r);
  for (double v : hessian_spectrum({2, {x}, {}}, r, 2.0)) EXPECT_NEAR(v, 0.0, 1e-12);
  double l = 0.3, eta = std::acos(1 / (2 * 3 * l));
  EXPECT_NEAR(hess_chord(eta, r, l), 0.0, 1e-12);
  for (double t : {0.1, 0.5, 1.0}) EXPECT_LT(hess_tangent(t, r, 1.0), 0.0);
}

TEST(AngleModel, KktExamples) {
  RingParams r = make_ring(1, 3);
  for (double l : {0.1, 0.18, 0.2, 0.25, 0.4, 1.0, 1.9}) {
    Solution s = solve(r, l);
    if (s.config) {
      EXPECT_LE(kkt_residuals(*s.config, r, l).kkt_residual, 1e-9) << l;
    }
  }
  double rest = pi - xi0(r) - 0.8;
  auto bad = kkt_residuals({1, {0.3, 0.5}, {rest}}, r, 1.0);
  EXPECT_GT(bad.kkt_residual, 1e-2);
  // pentagon of the worked example at its fitted lambda
  double x = 0.7829, y = 0.0098, lf = 1 / (3 * (std::cos(x) + std::cos(pi - 4 * x)));
  auto c = kkt_residuals({0, {}, {x, x, x, x, pi - 4 * x}}, r, lf);
  ASSERT_TRUE(c.chord_pair_residual.has_value());
  EXPECT_LE(*c.chord_pair_residual, 1e-3);
  EXPECT_LE(std::abs(std::cos(x) + std::cos(y) - 1 / (3 * lf)), 1e-3);
  // pure xi0 polygon: multiplier left undetermined
  RingParams q = make_ring(1, 2);
  EXPECT_TRUE(kkt_residuals({3, {}, {}}, q, 0.8).multiplier_underdetermined);
}

TEST(AngleModel, SecondOrderExamples) {
  RingParams r = make_ring(1, 3);
  // regular N-gon with cos(pi/N) < 1/(2 b lambda)
  for (int N : {4, 5, 6, 8}) {
    double l = 0.99 / (2 * 3 * std::cos(pi / N));
    EXPECT_TRUE(second_order_ok({0, {}, std::vector<double>(N, pi / N)}, r, l).ok()) << N;
  }
  double rest = pi - xi0(r) - 0.8;
  EXPECT_FALSE(second_order_ok({1, {0.3, 0.5}, {rest}}, r, 1.0).ok());
  // quasi-regular with sin x < (q-1) sin y: x close to y
  double x = 0.80, y = pi - 3 * x;
  ASSERT_LT(std::sin(x) - 3 * std::sin(y), 0);
  double l = 1 / (3 * (std::cos(x) + std::cos(y)));
  EXPECT_FALSE(second_order_ok({0, {}, {x, x, x, y}}, r, l).ok());
  auto cert = certificate({0, {}, {x, x, x, y}}, r, l);
  EXPECT_FALSE(cert.second_order_ok);
  EXPECT_EQ(cert.hessian_eigenvalues.size(), 4u);
}

TEST(AngleModel, DeltaExamples) {
  // 4(e - sin e)/(e - sin e cos e) tends to 1 from above, so just past 1/(2b) the cut still loses
  EXPECT_LT(delta_arc_chord(3, 0.5000001 / 3, 0.1), 0.0);
  EXPECT_GT(delta_arc_chord(3, 0.51 / 3, 0.1), 0.0);
  EXPECT_EQ(delta_arc_chord(3, 0.3, 0.0), 0.0);
  for (double e : {0.1, 0.7, 1.4}) EXPECT_NEAR(delta_arc_tangent(1.5, 2 / 1.5, e), 0.0, 1e-15);
  EXPECT_NEAR(delta_arc_tangent(1, 1, 0.3), std::tan(0.3) - 0.3, 1e-15);
  EXPECT_NEAR(delta_arc_tangent(1, 1, 0.3), 0.009336, 1e-6);
  RingParams r = make_ring(1, 3);
  double x = 1.0;
  double lz = 2 / (3 * std::cos(x) + 1);
  EXPECT_NEAR(delta_slide_vertex(r, lz, x), 0.0, 1e-14);
  for (double l : {0.3, 0.7, 1.5}) {
    double d = delta_slide_vertex(r, l, x);
    EXPECT_EQ(d > 0, l > lz) << l;
  }
  double xr = pi - 2 * xi0(r);
  EXPECT_NEAR(xr, 0.6797, 1e-4);
  EXPECT_NEAR(delta_slide_vertex(r, 0.6, xr), 0.0, 1e-12);
  EXPECT_THROW(delta_arc_chord(3, 0.3, -0.1), ParameterError);
  EXPECT_THROW(delta_slide_vertex(r, 0.6, 2.0), ParameterError);
}

TEST(AngleModel, DeltasMatchGeometry) {
  num::Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    double a = rng.uniform(0.3, 3.0), b = a * rng.uniform(1.05, 3.0), l = rng.uniform(0.01, 3.0);
    double e = rng.uniform(1e-3, 1.5);
    auto Db = ConvexBody::disk(b);
    auto cut = ConvexBody::from_pieces({Segment{b * unit(-e), b * unit(e)}, Arc{b, e, 2 * pi - 2 * e}});
    EXPECT_NEAR(J_body(Db, l) - J_body(cut, l), delta_arc_chord(b, l, e), 1e-10);
    auto Da = ConvexBody::disk(a);
    Point w{a / std::cos(e), 0};
    auto tg = ConvexBody::from_pieces({Segment{a * unit(-e), w}, Segment{w, a * unit(e)}, Arc{a, e, 2 * pi - 2 * e}});
    EXPECT_NEAR(J_body(Da, l) - J_body(tg, l), delta_arc_tangent(a, l, e), 1e-10);
    RingParams r = make_ring(a, b);
    int P = p0(r);
    double x = pi - P * xi0(r);
    if (x > 1e-4 && x < xi0(r) - 1e-4) {
      double d = J_body(synthesize_polygon({P, {}, {x}}, r), l) - J_body(synthesize_polygon({P, {x}, {}}, r), l);
      EXPECT_NEAR(d, delta_slide_vertex(r, l, x), 1e-10);
    }
  }
}
