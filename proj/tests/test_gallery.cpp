#include <gtest/gtest.h>

#include <random>

#include "mcx/contact.hpp"
#include "mcx/gallery.hpp"

using namespace mcx;

namespace {

// sup over a, b ∈ [-λ, λ] of <z, au + bv> + ab u·v; bilinear in (a, b), so
// the four corners suffice.
double h_vertex(const Vec& z, const ObliqueParams& p) {
  double best = -kInf;
  for (double a : {-p.lambda, p.lambda}) {
    for (double b : {-p.lambda, p.lambda}) best = std::max(best, dot(z, a * p.u + b * p.v) + a * b * dot(p.u, p.v));
  }
  return best;
}

// Point in a convex polygon given counter-clockwise vertices, by cross
// products along the edges.
int polygon_side(const Vec& z, const std::vector<Vec>& poly, double tol = 1e-9) {
  double worst = kInf;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    Vec a = poly[k], b = poly[(k + 1) % poly.size()];
    Vec e = b - a, r = z - a;
    worst = std::min(worst, (e[0] * r[1] - e[1] * r[0]) / norm(e));
  }
  return worst > tol ? 1 : (worst >= -tol ? 0 : -1);
}

NonInvolutive small_noninv() {
  NonInvolutiveConfig c;
  c.L = 3.0;
  c.step = 0.1;
  return noninvolutive_triple(c);
}

}  // namespace

TEST(Oblique, ParamsAreUnitSixtyDegrees) {
  ObliqueParams p(2.0);
  EXPECT_NEAR(norm(p.u), 1.0, 1e-15);
  EXPECT_NEAR(norm(p.v), 1.0, 1e-15);
  EXPECT_NEAR(dot(p.u, p.v), 0.5, 1e-15);
  EXPECT_THROW(ObliqueParams(0.0), Error);
  EXPECT_THROW(ObliqueParams(-1.0), Error);
}

TEST(Oblique, HValues) {
  ObliqueParams p(1.0);
  EXPECT_NEAR(h_oblique({0.0, 0.0}, p), 0.5, 1e-15);
  EXPECT_NEAR(h_oblique({2.0, 0.0}, p), 3.5, 1e-15);
  EXPECT_NEAR(h_oblique({0.0, 10.0}, p), kSqrt3 / 2 * 10.0 + 0.5, 1e-12);
  ObliqueParams p2(2.0);
  EXPECT_NEAR(h_oblique({0.0, 0.0}, p2), 0.5 * 4.0, 1e-15);
}

TEST(Oblique, MaxFormulaMatchesVertexSupAndRegions) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-10.0, 10.0), L(0.2, 3.0);
  for (int s = 0; s < 100000; ++s) {
    ObliqueParams p(s % 10 == 0 ? L(rng) : 1.0);
    Vec z{U(rng), U(rng)};
    double h = h_oblique(z, p);
    ASSERT_NEAR(h, h_vertex(z, p), 1e-12 * std::max(1.0, std::abs(h)));
    RegionInfo r = h_region(z, p, 1e-12);
    ASSERT_FALSE(r.regions.empty());
    for (double v : r.values) ASSERT_NEAR(v, h, 1e-12 * std::max(1.0, std::abs(h)));
  }
}

TEST(Oblique, RegionBoundaries) {
  ObliqueParams p(1.0);
  // L1 = R1 ∩ R3 through -w, where h = λ z1.
  Vec z = -1.0 * p.w;
  RegionInfo r = h_region(z, p, 1e-9);
  EXPECT_NE(std::find(r.regions.begin(), r.regions.end(), 1), r.regions.end());
  EXPECT_NE(std::find(r.regions.begin(), r.regions.end(), 3), r.regions.end());
  for (double v : r.values) EXPECT_NEAR(v, 0.5, 1e-12);
  RegionInfo o = h_region({0.0, 0.0}, p);
  EXPECT_EQ(o.regions, (std::vector<int>{3, 4}));
  RegionInfo up = h_region({0.0, 10.0}, p);
  EXPECT_EQ(up.regions, (std::vector<int>{3}));
}

TEST(Oblique, SegmentIndicators) {
  ObliqueParams p(1.0);
  Triple t = oblique_triple(p, 11, Grid::span2(-1.0, 1.0, 0.5));
  EXPECT_EQ(t.f(0.5 * p.u), 0.0);
  EXPECT_TRUE(is_inf(t.f(1.5 * p.u)));
  EXPECT_TRUE(is_inf(t.f(0.5 * p.v)));
  EXPECT_EQ(t.g(-1.0 * p.v), 0.0);
}

TEST(HStar, RhombusValues) {
  ObliqueParams p(1.0);
  EXPECT_NEAR(h_star({0.0, 0.0}, p), -0.5, 1e-15);
  EXPECT_NEAR(h_star(p.w, p), 0.5, 1e-12);
  EXPECT_NEAR(h_star(-1.0 * p.w, p), 0.5, 1e-12);
  EXPECT_NEAR(h_star(p.u + p.v, p), -0.5, 1e-12);
  EXPECT_TRUE(is_inf(h_star({3.0, 0.0}, p)));
  EXPECT_TRUE(is_inf(h_star(1.01 * p.w, p)));
}

TEST(HStar, RhombusMatchesVertexHull) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  ObliqueParams p(1.0);
  RhombusD d{1.0};
  std::vector<Vec> poly{p.u + p.v, p.w, -1.0 * (p.u + p.v), -1.0 * p.w};
  for (int s = 0; s < 20000; ++s) {
    Vec z{U(rng), U(rng)};
    int side = polygon_side(z, poly, 1e-9);
    if (side == 0) continue;
    EXPECT_EQ(d.contains(z), side > 0) << z[0] << "," << z[1];
  }
}

TEST(HStar, IsTheNumericConjugate) {
  // Conjugating sampled h on a box: inside D_λ, away from its edges, the
  // numeric value matches the closed form to grid accuracy.
  ObliqueParams p(1.0);
  GridFunction h = sample(Grid::span2(-6.0, 6.0, 0.05), [&](const Vec& z) { return h_oblique(z, p); });
  Grid dual = Grid::span2(-1.5, 1.5, 0.1);
  GridFunction hs = conjugate(h, dual);
  RhombusD d{1.0};
  for (std::size_t k = 0; k < dual.size(); ++k) {
    Vec y = dual.node(k);
    auto [t, s] = d.decompose(y);
    if (t > 0.8 || s < t - 0.8 || s > 0.8 - t) continue;
    EXPECT_NEAR(hs.values[k], h_star(y, p), 2 * 0.05 * 3.0) << y[0] << "," << y[1];
  }
}

TEST(Hexagon, Membership) {
  ObliqueParams p(1.0);
  EXPECT_EQ(hex_membership({0.0, 0.0}, p), HexSide::inside);
  EXPECT_EQ(hex_membership(2.0 * p.u, p), HexSide::boundary);
  EXPECT_EQ(hex_membership(3.0 * p.u, p), HexSide::outside);
  EXPECT_EQ(hex_membership(2.0 * p.w, p), HexSide::boundary);
}

TEST(Hexagon, HalfPlanesMatchVertexHull) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (double l : {0.5, 1.0, 1.7}) {
    ObliqueParams p(l);
    auto v = HexHull(l).vertices();
    std::vector<Vec> poly(v.begin(), v.end());
    for (int s = 0; s < 5000; ++s) {
      Vec z{U(rng), U(rng)};
      int side = polygon_side(z, poly, 1e-7);
      if (side == 0) continue;
      EXPECT_EQ(hex_membership(z, p), side > 0 ? HexSide::inside : HexSide::outside);
    }
  }
}

TEST(GammaOblique, EveryTupleIsAContact) {
  ObliqueParams p(1.0);
  FiniteGamma g = gamma_oblique(p, 20, 40);
  ASSERT_GT(g.size(), 100u);
  for (const auto& t : g.tuples) {
    const Vec &x = t[0], &y = t[1], &z = t[2];
    // x ∈ I1 and y ∈ I2.
    EXPECT_NEAR(x[1], 0.0, 1e-12);
    EXPECT_LE(std::abs(x[0]), 1.0 + 1e-12);
    EXPECT_NEAR(y[0] * kSqrt3 - y[1], 0.0, 1e-12);
    EXPECT_NEAR(h_vertex(z, p), cost_c(t), 1e-9 * std::max(1.0, std::abs(cost_c(t))));
    // On this Γ, h^*(x + y) = -<x, y>.
    EXPECT_NEAR(h_star(x + y, p), -dot(x, y), 1e-9);
    EXPECT_NE(hex_membership(t.sum(), p), HexSide::inside);
  }
}

TEST(GammaOblique, ContainsTheListedCases) {
  ObliqueParams p(1.0);
  FiniteGamma g = gamma_oblique(p, 21, 40);
  auto has = [&](auto pred) { return std::any_of(g.tuples.begin(), g.tuples.end(), pred); };
  EXPECT_TRUE(has([&](const PointTuple& t) { return t[0] == p.u && t[1] == p.v; }));
  EXPECT_TRUE(has([&](const PointTuple& t) { return t[0] == -1.0 * p.u && t[1] == -1.0 * p.v; }));
  // Edge case with x interior to I1 (here x = 0) and y = λv.
  EXPECT_TRUE(has([&](const PointTuple& t) { return norm(t[0]) < 1e-12 && norm(t[1] - p.v) < 1e-12; }));
}

TEST(Perpendicular, Values) {
  PerpTriple pt = perpendicular_triple(1.0, 11, Grid::span2(-1.0, 1.0, 0.5));
  EXPECT_NEAR(pt.triple.h({2.0, 3.0}), 5.0, 1e-15);
  EXPECT_NEAR(pt.triple.h({-2.0, 3.0}), 5.0, 1e-15);
  EXPECT_EQ(pt.triple.h.conj({0.5, -1.0}), 0.0);
  EXPECT_TRUE(is_inf(pt.triple.h.conj({1.5, 0.0})));
  EXPECT_THROW(perpendicular_triple(-1.0, 11, Grid::span2(-1.0, 1.0, 0.5)), Error);
}

TEST(Perpendicular, ContactTuplesAndCoverage) {
  for (double l : {0.0, 1.0}) {
    FiniteGamma g = gamma_perpendicular(l, 81, 4.0);
    for (const auto& t : g.tuples) {
      double h = l * (std::abs(t[2][0]) + std::abs(t[2][1]));
      EXPECT_NEAR(h, cost_c(t), 1e-9) << "lambda " << l;
    }
    EXPECT_TRUE(hole_report(sum_set(g), Grid::span2(-3.0, 3.0, 0.25)).empty()) << "lambda " << l;
  }
}

TEST(Improper, ValuesGrowQuadratically) {
  // sup over a ∈ [-L, L] of a² u·v is (u·v) L², reached at the endpoints.
  for (double uv : {0.5, 1.0}) {
    ImproperVerdict r = improper_probe(uv, {2.0, 4.0, 8.0});
    EXPECT_TRUE(r.improper);
    ASSERT_EQ(r.values.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(r.values[k], uv * r.boxes[k] * r.boxes[k], 1e-9);
  }
}

TEST(Improper, RejectsPerpendicularAndBadBoxes) {
  EXPECT_THROW(improper_probe(0.0, {2.0, 4.0}), Error);
  EXPECT_THROW(improper_probe(0.5, {4.0, 2.0}), Error);
  EXPECT_THROW(improper_probe(1.5, {2.0}), Error);
}

TEST(NonInvolutive, BuildingBlocks) {
  EXPECT_NEAR(H1_fn({1.0, 0.0}), 1.5, 1e-15);
  EXPECT_NEAR(F1_fn({0.0, 0.0}), 0.0, 1e-15);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int s = 0; s < 1000; ++s) {
    Vec x{U(rng), U(rng)};
    EXPECT_NEAR(F1_fn(x), F1_fn({x[0], -x[1]}), 1e-12);
    EXPECT_GE(F1_fn(x), -1e-12);
  }
}

TEST(NonInvolutive, Construction) {
  NonInvolutive ni = small_noninv();
  EXPECT_GT(ni.m, 0.0);
  EXPECT_TRUE(ni.report.pass());
  auto at = [&](const GridFunction& f, const Vec& x) { return eval_interp(f, x).value(); };
  EXPECT_NEAR(at(ni.G1, {1.0, 0.0}), 1.5, 1e-9);
  EXPECT_NEAR(at(ni.G1, {-1.0, 0.0}), 1.5, 1e-9);
  EXPECT_NEAR(at(ni.G1, {0.0, 0.0}), ni.m, 1e-12);
  EXPECT_NEAR(at(ni.H, {0.0, 0.0}), -ni.m, 1e-12);
  EXPECT_TRUE(check_strong_convexity(ni.F1, 1.0, 1e-9).ok);
  EXPECT_TRUE(check_strong_convexity(ni.G1, 1.0, 1e-9).ok);
  // h is m plus the indicator of the unit l1 ball.
  EXPECT_NEAR(ni.triple.h({0.0, 0.0}), ni.m, 1e-9);
  EXPECT_TRUE(is_inf(ni.triple.h({0.8, 0.8})));
}

TEST(KEpsilon, QuarterMPassesAllChecks) {
  NonInvolutive ni = small_noninv();
  KEpsilon k = k_epsilon_report(ni.H, ni.m, ni.m / 4.0);
  EXPECT_TRUE(k.report.pass());
  EXPECT_NO_THROW(k_epsilon(ni.H, ni.m, ni.m / 4.0));
  std::size_t origin = ni.H.grid.size() / 2;
  ASSERT_LT(norm(ni.H.grid.node(origin)), 1e-9);
  EXPECT_NEAR(k.K.values[origin] - ni.H.values[origin], ni.m / 4.0, 1e-12);
}

TEST(KEpsilon, TwoMBreaksTheSandwich) {
  NonInvolutive ni = small_noninv();
  KEpsilon k = k_epsilon_report(ni.H, ni.m, 2.0 * ni.m);
  EXPECT_FALSE(k.report.find("sandwich")->pass);
  EXPECT_THROW(k_epsilon(ni.H, ni.m, 2.0 * ni.m), Error);
  EXPECT_THROW(k_epsilon_report(ni.H, ni.m, 0.0), Error);
}

TEST(QuadraticTuple, Shape) {
  Grid g = Grid::span(-2.0, 2.0, 0.5);
  auto two = quadratic_tuple(2, g);
  EXPECT_EQ(two[0]({1.0, 0.0}), 0.5);
  EXPECT_EQ(two[0].conj({1.0, 0.0}), 0.5);
  auto three = quadratic_tuple(3, g);
  ASSERT_EQ(three.size(), 3u);
  EXPECT_EQ(three[1]({1.0, 0.0}), 1.0);
  EXPECT_EQ(three[2].prox({3.0, 0.0})[0], 1.0);
  PointTuple ones({{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}});
  EXPECT_EQ(three[0](ones[0]) + three[1](ones[1]) + three[2](ones[2]), cost_c(ones));
  EXPECT_THROW(quadratic_tuple(1, g), Error);
}
