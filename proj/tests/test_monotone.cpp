#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "mcx/contact.hpp"
#include "mcx/descriptors.hpp"
#include "mcx/gallery.hpp"
#include "mcx/monotone.hpp"

using namespace mcx;

namespace {

double pair_cost(const std::vector<Vec>& xs) {
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) s += xs[i][0] * xs[j][0] + xs[i][1] * xs[j][1];
  }
  return s;
}

// Largest Σ_j c(x_1^{σ_1(j)}, ..., x_N^{σ_N(j)}) - Σ_j c(x^j) over all
// permutation tuples, by plain enumeration with std::next_permutation.
double oracle_excess(const std::vector<PointTuple>& pts) {
  const std::size_t n = pts.size(), N = pts[0].size();
  double base = 0.0;
  for (const auto& t : pts) base += pair_cost(t.x);
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> perms;
  do perms.push_back(id);
  while (std::next_permutation(id.begin(), id.end()));
  double best = -kInf;
  std::vector<std::size_t> choice(N, 0);
  for (;;) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Vec> row;
      for (std::size_t i = 0; i < N; ++i) row.push_back(pts[static_cast<std::size_t>(perms[choice[i]][j])][i]);
      s += pair_cost(row);
    }
    best = std::max(best, s - base);
    std::size_t i = 0;
    while (i < N && ++choice[i] == perms.size()) choice[i++] = 0;
    if (i == N) break;
  }
  return best;
}

bool oracle_monotone(const FiniteGamma& g, int n) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    std::vector<PointTuple> pts;
    for (auto k : idx) pts.push_back(g.tuples[k]);
    if (oracle_excess(pts) > 1e-9) return false;
    std::size_t k = idx.size();
    while (k > 0 && idx[k - 1] == g.size() - 1) --k;
    if (k == 0) return true;
    ++idx[k - 1];
    for (std::size_t r = k; r < idx.size(); ++r) idx[r] = idx[k - 1];
  }
}

FiniteGamma gamma1d(std::initializer_list<std::initializer_list<double>> rows) {
  FiniteGamma g;
  g.dim = 1;
  for (const auto& r : rows) {
    PointTuple t;
    for (double v : r) t.x.push_back({v, 0.0});
    g.tuples.push_back(t);
  }
  g.normalize();
  return g;
}

FiniteGamma random_gamma(std::mt19937_64& rng, std::size_t m, std::size_t N) {
  std::uniform_int_distribution<int> U(-3, 3);
  FiniteGamma g;
  g.dim = 1;
  for (std::size_t k = 0; k < m; ++k) {
    PointTuple t;
    for (std::size_t i = 0; i < N; ++i) t.x.push_back({static_cast<double>(U(rng)), 0.0});
    g.tuples.push_back(t);
  }
  g.normalize();
  return g;
}

MonotonicityResult monotone(const FiniteGamma& g, int n, double budget = 1e9) {
  return is_n_c_monotone({&g, n, budget, std::nullopt});
}

}  // namespace

TEST(Monotone, SingletonIsMonotone) {
  FiniteGamma g = gamma1d({{1.0, -2.0, 0.5}});
  for (int n = 2; n <= 4; ++n) EXPECT_TRUE(monotone(g, n).monotone);
}

TEST(Monotone, AlignedDiagonalPair) {
  FiniteGamma g = gamma1d({{1, 1, 1}, {2, 2, 2}});
  EXPECT_TRUE(monotone(g, 2).monotone);
}

TEST(Monotone, SwapOnFirstMarginalViolates) {
  // c(0,0,0) + c(1,1,1) = 3 > c(1,0,0) + c(0,1,1) = 1
  FiniteGamma g = gamma1d({{1, 0, 0}, {0, 1, 1}});
  MonotonicityResult r = monotone(g, 2);
  ASSERT_FALSE(r.monotone);
  EXPECT_NEAR(r.excess, 2.0, 1e-12);
  ASSERT_EQ(r.perms.size(), 3u);
  // Replaying the witness reproduces the excess.
  double base = 0.0, perm = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    base += cost_c(g.tuples[r.multiset[j]]);
    PointTuple row;
    for (std::size_t i = 0; i < 3; ++i) row.x.push_back(g.tuples[r.multiset[static_cast<std::size_t>(r.perms[i][j])]][i]);
    perm += cost_c(row);
  }
  EXPECT_NEAR(perm - base, r.excess, 1e-12);
}

TEST(Monotone, IdentityPermutationsAreNeutral) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    FiniteGamma g = random_gamma(rng, 3, 3);
    std::vector<PointTuple> pts(g.tuples.begin(), g.tuples.end());
    EXPECT_GE(oracle_excess(pts), 0.0);
  }
}

TEST(Monotone, AgreesWithOracleOnRandomSets) {
  std::mt19937_64 rng(6);
  int violations = 0;
  for (int trial = 0; trial < 60; ++trial) {
    FiniteGamma g = random_gamma(rng, 4, 3);
    for (int n = 2; n <= 3; ++n) {
      bool lib = monotone(g, n).monotone;
      EXPECT_EQ(lib, oracle_monotone(g, n)) << "trial " << trial << " n=" << n;
      if (!lib) ++violations;
    }
  }
  EXPECT_GT(violations, 0);
}

TEST(Monotone, DownwardClosure) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    FiniteGamma g = random_gamma(rng, 3, 3);
    bool m3 = monotone(g, 3).monotone;
    bool m4 = monotone(g, 4).monotone;
    if (m4) {
      EXPECT_TRUE(m3);
    }
    if (m3) {
      EXPECT_TRUE(monotone(g, 2).monotone);
    }
  }
}

TEST(Monotone, ContactSetsAreMonotone) {
  Grid g = Grid::span(-2.0, 2.0, 0.5);
  FiniteGamma q = contact_set(quadratic_tuple(3, g));
  EXPECT_TRUE(monotone(q, 2).monotone);
  EXPECT_TRUE(monotone(q, 3).monotone);

  Grid gs = Grid::span(-1.0, 1.0, 0.1);
  std::vector<Marginal> fs{marginal_from_grid(random_pl_convex(gs, {3, 2.0, 0.1, 61})),
                           marginal_from_grid(random_pl_convex(gs, {3, 2.0, 0.1, 62}))};
  Grid g1 = Grid::span(-3.0, 3.0, 0.1);
  GridFunction f1 = c_conjugate_factored(fs, g1).f;
  FiniteGamma G = subsample(contact_set({marginal_from_grid(f1), fs[0], fs[1]}), 12, 1);
  ASSERT_GT(G.size(), 3u);
  EXPECT_TRUE(monotone(G, 2).monotone);
  EXPECT_TRUE(monotone(G, 3).monotone);
}

TEST(Monotone, BudgetErrorIsNotAVerdict) {
  Grid g = Grid::span(-2.0, 2.0, 0.05);
  FiniteGamma q = contact_set(quadratic_tuple(3, g));
  EXPECT_THROW(monotone(q, 4, 1e3), BudgetError);
  EXPECT_THROW(monotone(q, 5), BudgetError);
  EXPECT_THROW(monotone(q, 1), Error);
}

TEST(Maximality, MemberCandidateIsAdmissible) {
  FiniteGamma g = gamma1d({{1, 1, 1}, {2, 2, 2}, {-1, -1, -1}});
  EXPECT_TRUE(maximality_probe(g, g.tuples[1], 3));
}

TEST(Maximality, OffDiagonalCandidateIsRejected) {
  FiniteGamma g = gamma1d({{-3, -3, -3}, {-2, -2, -2}, {-1, -1, -1}, {0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}});
  PointTuple cand({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 0.0}});
  EXPECT_FALSE(maximality_probe(g, cand, 2));
  // Oracle: some diagonal (t,t,t) pairs with the candidate in violation.
  bool found = false;
  for (const auto& t : g.tuples) found = found || oracle_excess({t, cand}) > 1e-9;
  EXPECT_TRUE(found);
}

TEST(Maximality, ObliqueOriginExtensionIsPairwiseAdmissible) {
  FiniteGamma g = subsample(gamma_oblique(ObliqueParams(1.0), 20, 40), 60, 3);
  PointTuple zero({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
  EXPECT_TRUE(maximality_probe(g, zero, 2));
}

TEST(Maximality, RejectsNonMonotoneBase) {
  FiniteGamma g = gamma1d({{1, 0, 0}, {0, 1, 1}});
  EXPECT_THROW(maximality_probe(g, g.tuples[0], 2), Error);
}

TEST(ConjectureProbe, EmptySampleIsVacuous) {
  ConjectureOptions o;
  o.sample_size = 0;
  Report r = conjecture_probe(o);
  EXPECT_TRUE(r.pass());
}

TEST(ConjectureProbe, OrderTwoHolds) {
  ConjectureOptions o;
  o.n_max = 2;
  o.sample_size = 5000;
  o.seed = 1;
  EXPECT_TRUE(conjecture_probe(o).pass());
}

TEST(ConjectureProbe, OrderThreeWitness) {
  // Two contact tuples of the oblique example which, together with the
  // origin tuple, violate order-3 monotonicity.
  const ObliqueParams p(1.0);
  const Vec u = p.u, v = p.v;
  PointTuple a({{-1.0, 0.0}, v, {-0.5, 7.3656937965092704}});
  PointTuple b({{1.0, 0.0}, -1.0 * v, {4.7929292929292924, -3.3484848484848486}});
  PointTuple zero({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
  // h by its vertex formula: the sup over the segments of a bilinear form
  // is attained at endpoints.
  auto h = [&](const Vec& z) {
    double best = -kInf;
    for (double s : {-1.0, 1.0}) {
      for (double t : {-1.0, 1.0}) best = std::max(best, dot(z, s * u + t * v) + s * t * dot(u, v));
    }
    return best;
  };
  EXPECT_NEAR(h(a[2]), cost_c(a), 1e-12);
  EXPECT_NEAR(h(b[2]), cost_c(b), 1e-12);
  // The origin tuple sits 1/2 above the cost.
  EXPECT_NEAR(h({0.0, 0.0}) - cost_c(zero), 0.5, 1e-12);
  EXPECT_GT(oracle_excess({zero, a, b}), 0.4);

  FiniteGamma g;
  g.dim = 2;
  g.tuples = {zero, a, b};
  g.normalize();
  MonotonicityResult r = monotone(g, 3);
  EXPECT_FALSE(r.monotone);
  EXPECT_TRUE(monotone(g, 2).monotone);
}

TEST(ConjectureProbe, OrderThreeReportsViolations) {
  ConjectureOptions o;
  o.sample_size = 2000;
  Report r = conjecture_probe(o);
  const CheckRecord* c = r.find("order3");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->pass);
  EXPECT_LE(c->deviation, 0.5 + 1e-9);
  EXPECT_NE(c->witness.find("sample"), std::string::npos);
}

TEST(ConjectureProbe, RejectsBadOrder) {
  ConjectureOptions o;
  o.n_max = 5;
  EXPECT_THROW(conjecture_probe(o), Error);
}
