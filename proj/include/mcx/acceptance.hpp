#ifndef MCX_ACCEPTANCE_HPP
#define MCX_ACCEPTANCE_HPP

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "mcx/contact.hpp"
#include "mcx/core.hpp"
#include "mcx/descriptors.hpp"
#include "mcx/gallery.hpp"
#include "mcx/mmot.hpp"
#include "mcx/monotone.hpp"
#include "mcx/multiconj.hpp"
#include "mcx/multiconj_checks.hpp"
#include "mcx/report.hpp"
#include "mcx/transforms.hpp"

namespace mcx::acceptance {

struct Row {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  /// Zero means no runtime limit.
  double limit = 0.0;

  Row() = default;
  Row(int i, std::string t) : id(i), title(std::move(t)) {}
};

namespace detail {

inline std::string kv(const std::string& k, double v) { return k + "=" + format_sci(v); }

inline std::string kv(const std::string& k, std::size_t v) { return k + "=" + std::to_string(v); }

/// First failing record of a report, as `name(deviation)`.
inline std::string first_failure(const Report& r) {
  for (const auto& c : r.checks) {
    if (!c.pass) return c.check + "(" + format_sci(c.deviation) + ")";
  }
  return "none";
}

}  // namespace detail

// 1. Sum set of the oblique contact set misses exactly the open hexagon.
inline Row hexagon_hole() {
  Row r{1, "hexagon hole of the oblique sum set"};
  r.limit = 10.0;
  ObliqueParams p(1.0);
  FiniteGamma g = gamma_oblique(p, 200, 400);
  Grid probe = Grid::span2(-4.0, 4.0, 0.1);
  SumSet s = sum_set(g, probe);
  HexHull hex(1.0);
  std::size_t covered_inside = 0, uncovered_outside = 0, inside = 0, outside = 0;
  for (std::size_t k = 0; k < probe.size(); ++k) {
    double m = hex.margin(probe.node(k));
    if (m >= 0.1) {
      ++inside;
      if (s.covered[k]) ++covered_inside;
    } else if (m <= -0.1) {
      ++outside;
      if (!s.covered[k]) ++uncovered_outside;
    }
  }
  r.pass = covered_inside == 0 && uncovered_outside == 0;
  r.detail = detail::kv("tuples", g.size()) + " " + detail::kv("inside_nodes", inside) + " " +
             detail::kv("covered_inside", covered_inside) + " " + detail::kv("outside_nodes", outside) + " " +
             detail::kv("uncovered_outside", uncovered_outside);
  return r;
}

// 2. Closed-form h against the vertex sup of the bilinear cost.
inline Row closed_form_h(std::uint64_t seed = 0) {
  Row r{2, "closed-form h equals the c-conjugate of f and g"};
  ObliqueParams p(1.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Vec z{U(rng), U(rng)};
    double best = -kInf;
    for (double a : {-p.lambda, p.lambda}) {
      for (double b : {-p.lambda, p.lambda}) {
        Vec x = a * p.u, y = b * p.v;
        best = std::max(best, dot(x, y) + dot(x, z) + dot(y, z));
      }
    }
    worst = std::max(worst, std::abs(best - h_oblique(z, p)));
  }
  r.pass = worst <= 1e-12;
  r.detail = detail::kv("max_dev", worst) + " tol=1.0e-12";
  return r;
}

// 3. e_f + e_{f*} = q for random PL convex functions.
inline Row moreau_decomposition(std::uint64_t seed = 0) {
  Row r{3, "Moreau decomposition for random PL convex functions"};
  r.limit = 30.0;
  Grid g = Grid::span(-10.0, 10.0, 1e-3);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    GridFunction f = random_pl_convex(g, {12, 4.0, 1e-3, seed + k});
    GridFunction fs = conjugate(f, g);
    GridFunction e1 = moreau_envelope(f, g), e2 = moreau_envelope(fs, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      double x = g.coord(0, i);
      if (std::abs(x) <= 5.0) worst = std::max(worst, std::abs(e1.values[i] + e2.values[i] - 0.5 * x * x));
    }
  }
  r.pass = worst <= 1e-6;
  r.detail = detail::kv("max_dev", worst) + " tol=1.0e-06";
  return r;
}

// 4. Prox maps of the quadratic tuple sum to the identity.
inline Row prox_partition(std::uint64_t seed = 0) {
  Row r{4, "prox partition of the quadratic tuple"};
  const double h = 0.01;
  Grid g = Grid::span(-4.0, 4.0, h);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  std::vector<double> xs(100);
  for (double& x : xs) x = U(rng);
  double analytic = 0.0, grid_dev = 0.0;
  for (int N = 2; N <= 5; ++N) {
    auto t = quadratic_tuple(N, g);
    for (double x0 : xs) {
      Vec x{x0, 0.0};
      Vec s{0.0, 0.0};
      for (const auto& m : t) {
        s = s + m.prox(x);
        grid_dev = std::max(grid_dev, norm(prox(*m.grid, x) - m.prox(x)));
      }
      analytic = std::max(analytic, norm(s - x));
    }
  }
  r.pass = analytic <= 1e-12 && grid_dev <= h;
  r.detail = detail::kv("analytic_dev", analytic) + " tol=1.0e-12 " + detail::kv("grid_prox_dev", grid_dev) +
             " " + detail::kv("step", h);
  return r;
}

// 5. 1D closure is consistent and its contact set covers the line.
inline Row involutivity_1d(std::uint64_t seed = 0) {
  Row r{5, "1D involutivity and sum-set coverage"};
  Grid gs = Grid::span(-1.0, 1.0, 0.02), g1 = Grid::span(-4.0, 4.0, 0.02), probe = Grid::span(-3.0, 3.0, 0.05);
  double worst = 0.0;
  std::size_t holes = 0, improper = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    GridFunction f2 = random_pl_convex(gs, {6, 3.0, 0.02, seed + 100 + 2 * k});
    GridFunction f3 = random_pl_convex(gs, {6, 3.0, 0.02, seed + 101 + 2 * k});
    ClosureResult cl = involutivity_closure({marginal_from_grid(f2, "f2"), marginal_from_grid(f3, "f3")}, g1, {gs, gs});
    if (cl.improper) {
      ++improper;
      continue;
    }
    worst = std::max(worst, cl.report.find("closure")->deviation);
    FiniteGamma G = contact_set(
        {marginal_from_grid(cl.f1, "f1"), marginal_from_grid(cl.rebuilt[0], "f2"), marginal_from_grid(cl.rebuilt[1], "f3")});
    holes += hole_report(sum_set(G), probe).size();
  }
  r.pass = improper == 0 && worst <= 5e-3 && holes == 0;
  r.detail = detail::kv("closure_dev", worst) + " tol=5.0e-03 " + detail::kv("holes", holes) + " " +
             detail::kv("improper", improper);
  return r;
}

// 6. Fast c-conjugate against brute force.
inline Row fast_vs_brute(std::uint64_t seed = 0) {
  Row r{6, "fast c-conjugate matches brute force"};
  r.limit = 20.0;
  // 201 nodes each; the fast path needs the output on the input lattice.
  Grid g = Grid::span(-1.0, 1.0, 0.01), out = g;
  auto mask = trusted_interior(out, 0.25);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    GridFunction f2 = random_pl_convex(g, {10, 3.0, 0.0, seed + 1000 + 2 * k});
    GridFunction f3 = random_pl_convex(g, {10, 3.0, 0.0, seed + 1001 + 2 * k});
    GridFunction b = c_conjugate_brute(std::vector<GridFunction>{f2, f3}, out).f;
    GridFunction f = c_conjugate_fast({f2, f3}, out).f;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (mask[i]) worst = std::max(worst, std::abs(b.values[i] - f.values[i]));
    }
  }
  r.pass = worst <= 1e-6;
  r.detail = detail::kv("max_dev", worst) + " tol=1.0e-06";
  return r;
}

// 7. Non-involutive example: m > 0, K_eps checks, failure at the h slot only.
inline Row non_involutivity() {
  Row r{7, "non-involutive triple fails exactly at h"};
  r.limit = 60.0;
  NonInvolutive ni = noninvolutive_triple();
  KEpsilon ke = k_epsilon_report(ni.H, ni.m, ni.m / 4.0);
  Report tc = is_c_conjugate_tuple(ni.triple.tuple(), std::vector<Grid>{ni.grid, ni.grid, ni.grid});
  bool slots12 = true;
  for (const char* s : {"slot1", "slot2", "slot1.domain", "slot2.domain"}) {
    const CheckRecord* c = tc.find(s);
    slots12 = slots12 && c && c->pass;
  }
  const CheckRecord* h = tc.find("slot3");
  double need = ni.m / 2.0 - 5e-3;
  bool hfails = h && !h->pass && h->deviation >= need;
  r.pass = ni.m > 0.01 && ke.report.pass() && slots12 && hfails;
  r.detail = detail::kv("m", ni.m) + " k_eps=" + (ke.report.pass() ? "pass" : detail::first_failure(ke.report)) +
             " slots12=" + (slots12 ? "pass" : "fail") + " " + detail::kv("h_dev", h ? h->deviation : 0.0) + " " +
             detail::kv("h_needed", need);
  return r;
}

// 8. Dual test: W = U + V fails for the oblique triple, holds for the
// perpendicular one.
inline Row dual_characterization() {
  Row r{8, "dual characterization W = U + V"};
  Grid eval = Grid::span2(-2.0, 2.0, 0.05);
  Grid hstar = Grid::span2(-1.5, 1.5, 0.01);

  ObliqueParams p(1.0);
  Triple ob = oblique_triple(p, 2001, Grid::span2(-1.0, 1.0, 0.5));
  DualMaximalityOptions o1{eval, Grid::span2(-2.0, 2.0, 0.01), 1e-3, 1e-6, 0.5};
  DualMaximality d1 = dual_maximality_check(ob.f, ob.g, ob.h, o1);

  PerpTriple pt = perpendicular_triple(1.0, 2001, Grid::span2(-1.0, 1.0, 0.5));
  DualMaximalityOptions o2{eval, hstar, 1e-3, 1e-6, 0.5};
  DualMaximality d2 = dual_maximality_check(pt.triple.f, pt.triple.g, pt.triple.h, o2);
  double dev = d2.report.find("max_deviation")->deviation;

  r.pass = d1.gap_at_origin >= 0.2 && dev <= 1e-3;
  r.detail = detail::kv("oblique_gap", d1.gap_at_origin) + " min=2.0e-01 " + detail::kv("perp_max_dev", dev) +
             " tol=1.0e-03";
  return r;
}

// 9. Monotone extension by (0,0,0): order 2 exhaustive, order 3 sampled.
inline Row monotone_extension(std::uint64_t seed = 0) {
  Row r{9, "monotone extension of the oblique contact set"};
  FiniteGamma g = subsample(gamma_oblique(ObliqueParams(1.0), 200, 400), 200, seed);
  g.tuples.push_back(PointTuple({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}));
  g.normalize();
  MonotonicityResult m2 = is_n_c_monotone({&g, 2, 1e9, std::nullopt});
  ConjectureOptions co;
  co.seed = seed;
  co.n_max = 3;
  co.sample_size = 10000;
  Report probe = conjecture_probe(co);
  const CheckRecord* o3 = probe.find("order3");
  std::string violations;
  for (const auto& [k, v] : probe.inputs) {
    if (k == "violations_order3") violations = v;
  }
  r.pass = m2.monotone && o3 && o3->pass;
  r.detail = std::string("order2=") + (m2.monotone ? "pass" : "fail") + " " +
             detail::kv("multisets", m2.multisets_checked) + " order3=" + (o3 && o3->pass ? "pass" : "fail") +
             " violations=" + violations + "/10000 " + detail::kv("max_excess", o3 ? o3->deviation : 0.0);
  return r;
}

// 10. Discrete MMOT with uniform marginals on {-1, 0, 1}.
inline Row mmot_bridge() {
  Row r{10, "MMOT optimal plan sits on the contact set"};
  DiscreteMarginal mu = DiscreteMarginal::uniform(1, {{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
  std::vector<DiscreteMarginal> ms{mu, mu, mu};
  OptimalPlan op = brute_force_optimal(ms, Direction::maximize);
  bool diagonal = op.plan.atoms.size() == 3;
  for (const auto& [t, w] : op.plan.atoms) {
    diagonal = diagonal && t[0] == t[1] && t[1] == t[2] && std::abs(w - 1.0 / 3.0) <= 1e-12;
  }
  auto q = quadratic_tuple(3, Grid::span(-2.0, 2.0, 0.5));
  Report wd = weak_duality_check(q, ms, op.plan);
  const CheckRecord* gap = wd.find("gap_nonnegative");
  Report cc = concentration_check(op.plan, q);
  bool gap_ok = gap && gap->pass && gap->deviation <= 1e-9;
  r.pass = diagonal && gap_ok && cc.pass();
  r.detail = std::string("diagonal=") + (diagonal ? "yes" : "no") + " " + detail::kv("gap", gap ? gap->deviation : 0.0) +
             " tol=1.0e-09 concentration=" + (cc.pass() ? "pass" : detail::first_failure(cc));
  return r;
}

// 11. Full-line supports give h = +inf.
inline Row improper_detection() {
  Row r{11, "improper conjugate for full-line supports"};
  ImproperVerdict v = improper_probe(0.5, {2.0, 4.0, 8.0});
  double worst = 0.0;
  for (std::size_t k = 0; k < v.boxes.size(); ++k) {
    worst = std::max(worst, std::abs(v.values[k] - 0.5 * v.boxes[k] * v.boxes[k]));
  }
  bool rejected = false;
  try {
    improper_probe(0.0, {2.0, 4.0, 8.0});
  } catch (const Error&) {
    rejected = true;
  }
  r.pass = worst <= 1e-9 && v.improper && rejected;
  r.detail = detail::kv("max_dev", worst) + " tol=1.0e-09 improper=" + (v.improper ? "yes" : "no") +
             " udotv0_rejected=" + (rejected ? "yes" : "no");
  return r;
}

inline std::vector<std::function<Row()>> battery(std::uint64_t seed = 0) {
  return {hexagon_hole,
          [seed] { return closed_form_h(seed); },
          [seed] { return moreau_decomposition(seed); },
          [seed] { return prox_partition(seed); },
          [seed] { return involutivity_1d(seed); },
          [seed] { return fast_vs_brute(seed); },
          non_involutivity,
          dual_characterization,
          [seed] { return monotone_extension(seed); },
          mmot_bridge,
          improper_detection};
}

/// Runs one criterion, timing it and folding errors and runtime overruns
/// into a failing row.
inline Row run(const std::function<Row()>& fn, int id) {
  auto t0 = std::chrono::steady_clock::now();
  Row r;
  try {
    r = fn();
  } catch (const std::exception& e) {
    r.id = id;
    r.title = "criterion " + std::to_string(id);
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.limit > 0.0 && r.seconds > r.limit) r.pass = false;
  return r;
}

inline std::string format_row(const Row& r) {
  char t[64];
  if (r.limit > 0.0) {
    std::snprintf(t, sizeof t, "time=%.2fs limit=%.0fs", r.seconds, r.limit);
  } else {
    std::snprintf(t, sizeof t, "time=%.2fs", r.seconds);
  }
  return "AC" + std::to_string(r.id) + " " + (r.pass ? "PASS" : "FAIL") + " " + r.title + ": " + r.detail + " " + t;
}

/// Runs every criterion, printing one line each; returns the rows.
inline std::vector<Row> run_all(std::ostream& os, std::uint64_t seed = 0) {
  std::vector<Row> rows;
  int id = 1;
  for (const auto& fn : battery(seed)) {
    rows.push_back(run(fn, id++));
    os << format_row(rows.back()) << '\n' << std::flush;
  }
  return rows;
}

}  // namespace mcx::acceptance

#endif  // MCX_ACCEPTANCE_HPP
