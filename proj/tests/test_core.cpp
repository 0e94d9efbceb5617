#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mcx/core.hpp"
#include "mcx/descriptors.hpp"
#include "mcx/io.hpp"

using namespace mcx;

TEST(Extended, RejectsNegativeInfinityAndNan) {
  EXPECT_THROW(Extended{-kInf}, Error);
  EXPECT_THROW(Extended(std::nan("")), Error);
  EXPECT_NO_THROW(Extended{kInf});
}

TEST(Extended, InfinityAbsorbsFiniteValues) {
  Extended a(3.5), inf = Extended::infinity();
  EXPECT_FALSE((a + inf).is_finite());
  EXPECT_TRUE(a < inf);
  EXPECT_EQ((a + Extended(1.5)).value(), 5.0);
}

TEST(Grid, IndexCoordinateBijection2D) {
  Grid g({-1.0, 2.0}, {0.5, 0.25}, {5, 7});
  ASSERT_EQ(g.size(), 35u);
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto [i, j] = g.multi_index(k);
    EXPECT_EQ(g.index(i, j), k);
    Vec x = g.node(k);
    EXPECT_DOUBLE_EQ(x[0], -1.0 + 0.5 * static_cast<double>(i));
    EXPECT_DOUBLE_EQ(x[1], 2.0 + 0.25 * static_cast<double>(j));
  }
  EXPECT_DOUBLE_EQ(g.hi(0), 1.0);
  EXPECT_DOUBLE_EQ(g.hi(1), 3.5);
}

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(Grid(0.0, 0.0, 5), Error);
  EXPECT_THROW(Grid(0.0, 1.0, 1), Error);
  EXPECT_THROW(Grid(0.0, -1.0, 5), Error);
}

TEST(EvalInterp, ConstantAtCenter) {
  Grid g = Grid::span2(-1.0, 3.0, 0.5);
  GridFunction f(g, 0.0);
  EXPECT_EQ(eval_interp(f, g.center()).value(), 0.0);
}

TEST(EvalInterp, LinearBetweenTwoNodes) {
  // Nodes 1.0 and 1.5 hold q = 0.5 and 1.125; 1.25 is halfway, so the
  // chord value 0.8125 sits above q(1.25) = 0.78125.
  GridFunction f = sample(Grid::span(-2.0, 2.0, 0.5), [](const Vec& x) { return half_sq(x); });
  EXPECT_DOUBLE_EQ(eval_interp(f, {1.25, 0.0}).value(), 0.5 * (0.5 + 1.125));
  EXPECT_GT(eval_interp(f, {1.25, 0.0}).value(), half_sq({1.25, 0.0}));
}

TEST(EvalInterp, OutsideBoxIsInfinite) {
  GridFunction f(Grid::span(-1.0, 1.0, 0.5), 0.0);
  EXPECT_FALSE(eval_interp(f, {1.01, 0.0}).is_finite());
  EXPECT_FALSE(eval_interp(f, {-3.0, 0.0}).is_finite());
}

TEST(EvalInterp, InfiniteStencilNodePropagates) {
  GridFunction f(Grid::span(0.0, 3.0, 1.0), 1.0);
  f.values[2] = kInf;
  EXPECT_FALSE(eval_interp(f, {1.5, 0.0}).is_finite());
  EXPECT_EQ(eval_interp(f, {0.5, 0.0}).value(), 1.0);
  EXPECT_FALSE(eval_interp(f, {2.0, 0.0}).is_finite());
}

TEST(EvalInterp, DimensionMismatchThrows) {
  GridFunction f(Grid::span(0.0, 1.0, 0.5), 0.0);
  EXPECT_THROW(eval_interp(f, {0.5, 0.5}, 2), Error);
}

TEST(EvalInterp, BilinearMatchesHandFormula) {
  // f(x, y) = x*y is reproduced exactly by bilinear interpolation.
  GridFunction f = sample(Grid::span2(-2.0, 2.0, 0.5), [](const Vec& x) { return x[0] * x[1]; });
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    Vec x{U(rng), U(rng)};
    EXPECT_NEAR(eval_interp(f, x).value(), x[0] * x[1], 1e-12);
  }
}

TEST(EvalInterp, NodeValuesComeBackExactly) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-10.0, 10.0);
  Grid g({-1.3, 0.7}, {0.1, 0.3}, {13, 9});
  GridFunction f(g, 0.0);
  for (double& v : f.values) v = U(rng);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(eval_interp(f, g.node(k)).value(), f.values[k]);
}

TEST(EvalInterp, MonotoneInNodeValues) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0), P(0.0, 1.0);
  Grid g = Grid::span2(-1.0, 1.0, 0.25);
  for (int trial = 0; trial < 20; ++trial) {
    GridFunction f(g, 0.0), h(g, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
      f.values[k] = U(rng);
      h.values[k] = P(rng) < 0.1 ? kInf : f.values[k] + P(rng);
    }
    for (int s = 0; s < 50; ++s) {
      Vec x{U(rng), U(rng)};
      EXPECT_LE(eval_interp(f, x), eval_interp(h, x));
    }
  }
}

TEST(IsProper, Cases) {
  Grid g = Grid::span(-1.0, 1.0, 0.5);
  GridFunction f(g, kInf);
  EXPECT_FALSE(is_proper(f));
  f.values[3] = 2.0;
  EXPECT_TRUE(is_proper(f));
  EXPECT_TRUE(is_proper(sample(g, [](const Vec& x) { return half_sq(x); })));
}

TEST(GridFunction, RejectsNegativeInfinity) {
  Grid g = Grid::span(0.0, 1.0, 0.5);
  EXPECT_THROW(GridFunction(g, std::vector<double>{0.0, -kInf, 1.0}), Error);
  EXPECT_THROW(GridFunction(g, std::vector<double>{0.0, 1.0}), Error);
}

TEST(Tolerance, AllStrictlyPositive) {
  ToleranceConfig t;
  EXPECT_NO_THROW(t.validate());
  t.eps_contact = 0.0;
  EXPECT_THROW(t.validate(), Error);
}

TEST(PointTuple, SumAndOrder) {
  PointTuple a({{1.0, 2.0}, {3.0, -1.0}, {0.5, 0.0}});
  Vec s = a.sum();
  EXPECT_DOUBLE_EQ(s[0], 4.5);
  EXPECT_DOUBLE_EQ(s[1], 1.0);
  PointTuple b = a;
  b[2][0] = 0.6;
  EXPECT_LT(a, b);
}

TEST(LatticeAligned, ShiftedByWholeSteps) {
  EXPECT_TRUE(lattice_aligned(Grid::span(-1.0, 1.0, 0.1), Grid::span(-3.0, 3.0, 0.1)));
  EXPECT_FALSE(lattice_aligned(Grid::span(-1.0, 1.0, 0.1), Grid::span(-0.95, 1.05, 0.1)));
  EXPECT_FALSE(lattice_aligned(Grid::span(-1.0, 1.0, 0.1), Grid::span(-1.0, 1.0, 0.2)));
}

TEST(TrustedInterior, MarginFromFaces) {
  Grid g = Grid::span(-1.0, 1.0, 0.25);
  auto m = trusted_interior(g, 0.5);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(m[k], std::abs(g.node(k)[0]) <= 0.5 + 1e-12);
}

TEST(GridDump, RoundTripIsBitExact) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1e3, 1e3);
  Grid g({-1.0 / 3.0, 0.1}, {1.0 / 7.0, 0.3}, {6, 4});
  GridFunction f(g, 0.0);
  for (double& v : f.values) v = U(rng);
  f.values[5] = kInf;
  std::stringstream ss;
  write_grid_function(ss, f);
  GridFunction back = read_grid_function(ss);
  EXPECT_EQ(back.grid, f.grid);
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_EQ(back.values[k], f.values[k]);
}

TEST(GridDump, HeaderFormat) {
  std::stringstream ss;
  write_grid_function(ss, GridFunction(Grid::span(-1.0, 1.0, 1.0), 0.0));
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header.rfind("d=1;count=3;origin=", 0), 0u);
}

TEST(SampleAnalytic, QuadraticAndAbs) {
  Grid g = Grid::span(-1.0, 1.0, 1.0);
  auto q = sample_analytic("quad", g);
  EXPECT_EQ(q.values, (std::vector<double>{0.5, 0.0, 0.5}));
  auto a = sample_analytic("abs", g);
  EXPECT_EQ(a.values, (std::vector<double>{1.0, 0.0, 1.0}));
}

TEST(SampleAnalytic, SegmentIndicatorOnAxis) {
  Grid g = Grid::span2(-2.0, 2.0, 0.25);
  auto f = sample_analytic("segment:lambda=1,ux=1,uy=0", g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    Vec x = g.node(k);
    bool on = x[1] == 0.0 && std::abs(x[0]) <= 1.0;
    EXPECT_EQ(f.values[k], on ? 0.0 : kInf) << x[0] << "," << x[1];
  }
}

TEST(SampleAnalytic, UnknownNameThrows) {
  EXPECT_THROW(sample_analytic("nosuch", Grid::span(0.0, 1.0, 0.5)), Error);
  EXPECT_THROW(parse_descriptor("quad:scale"), Error);
}

TEST(SampleAnalytic, RandomPLIsConvexWithLatticeSlopes) {
  Grid g = Grid::span(-1.0, 1.0, 0.02);
  auto f = sample_analytic("randpl:seed=4,kinks=5,slope=3,quantum=0.02", g);
  std::size_t kinks = 0;
  for (std::size_t k = 1; k + 1 < g.size(); ++k) {
    double s0 = (f.values[k] - f.values[k - 1]) / 0.02, s1 = (f.values[k + 1] - f.values[k]) / 0.02;
    EXPECT_GE(s1, s0 - 1e-9);
    EXPECT_NEAR(s0 / 0.02, std::round(s0 / 0.02), 1e-6);
    if (s1 > s0 + 1e-9) ++kinks;
  }
  EXPECT_LE(kinks, 5u);
}

TEST(ParseGrid, OneAndTwoAxes) {
  Grid a = parse_grid("-1,1,0.5");
  EXPECT_EQ(a.dim(), 1);
  EXPECT_EQ(a.count(0), 5u);
  Grid b = parse_grid("-1,1,0.5;0,3,1");
  EXPECT_EQ(b.dim(), 2);
  EXPECT_EQ(b.count(1), 4u);
  EXPECT_THROW(parse_grid("1,-1,0.5"), Error);
  EXPECT_THROW(parse_grid("0,1"), Error);
}
