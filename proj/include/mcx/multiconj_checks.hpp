#ifndef MCX_MULTICONJ_CHECKS_HPP
#define MCX_MULTICONJ_CHECKS_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mcx/core.hpp"
#include "mcx/legendre.hpp"
#include "mcx/multiconj.hpp"
#include "mcx/report.hpp"
#include "mcx/transforms.hpp"

namespace mcx {

/// A joint function sampled on N-tuples.
struct JointSamples {
  int dim = 1;
  std::vector<PointTuple> tuples;
  std::vector<double> values;

  std::size_t size() const { return tuples.size(); }
};

/// f_1 ⊕ ... ⊕ f_N sampled on the product of the supports.
inline JointSamples separable_joint(const std::vector<Marginal>& fs) {
  if (fs.empty()) throw Error("separable_joint: empty tuple");
  JointSamples j;
  j.dim = fs[0].dim();
  std::vector<std::size_t> idx(fs.size(), 0);
  for (;;) {
    PointTuple t;
    double v = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      t.x.push_back(fs[i].support.points[idx[i]]);
      v += fs[i].support.values[idx[i]];
    }
    j.tuples.push_back(std::move(t));
    j.values.push_back(v);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == fs[i].support.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return j;
}

/// Largest convex lsc g of the coordinate sum with g(S(x)) <= f(x) on the
/// samples: g* (y) = max over tuples of <S(x),y> - f(x) on the dual grid,
/// then g = (g*)^* on out.
inline GridFunction delta_convex_envelope(const JointSamples& f, const Grid& dual, const Grid& out,
                                          double divergence_cap = 1e6) {
  if (f.size() == 0) throw Error("delta_convex_envelope: no samples");
  if (dual.dim() != f.dim || out.dim() != f.dim) throw Error("delta_convex_envelope: dimension mismatch");
  Samples sums;
  sums.dim = f.dim;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!is_inf(f.values[k])) sums.add(f.tuples[k].sum(), f.values[k]);
  }
  if (sums.size() == 0) throw Error("delta_convex_envelope: joint function is +inf everywhere");
  GridFunction gstar = conjugate_scan(sums, dual);
  GridFunction g = conjugate_factorized(gstar, out);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.values[k] < -divergence_cap) {
      throw Error("delta_convex_envelope: envelope unbounded below at " + witness_point(out.node(k), f.dim));
    }
  }
  return g;
}

struct TupleCheckOptions {
  double eps_equal = 5e-3;
  double divergence_cap = 1e6;
  /// Nodes closer than this to a grid face are not compared.
  double margin = 0.0;
};

namespace detail {

/// Compares f_i with its conjugate at the given points. Values above the
/// cap count as +inf; a point where exactly one side is finite is a domain
/// mismatch.
inline void compare_slot(Report& rep, const std::string& slot, const Marginal& fi,
                         const std::vector<Vec>& points, const std::vector<double>& conj,
                         const TupleCheckOptions& opt) {
  double worst = 0.0;
  std::size_t mismatches = 0;
  std::string wv, wd;
  for (std::size_t k = 0; k < points.size(); ++k) {
    double a = fi(points[k]), b = conj[k];
    bool fa = a <= opt.divergence_cap, fb = b <= opt.divergence_cap;
    if (fa != fb) {
      if (mismatches++ == 0) wd = witness_point(points[k], fi.dim());
      continue;
    }
    if (!fa) continue;
    double dev = std::abs(a - b);
    if (dev > worst) {
      worst = dev;
      wv = witness_point(points[k], fi.dim());
    }
  }
  rep.add_bound(slot, worst, opt.eps_equal, worst > opt.eps_equal ? wv : std::string{});
  rep.add(slot + ".domain", mismatches == 0, static_cast<double>(mismatches), 0.0, wd);
}

inline std::vector<const Marginal*> all_but(const std::vector<Marginal>& fs, std::size_t i) {
  std::vector<const Marginal*> o;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    if (j != i) o.push_back(&fs[j]);
  }
  return o;
}

}  // namespace detail

/// For each slot i: f_i against (⊕_{j≠i} f_j)^c at the given points.
/// Records `slot<i>` (max value deviation) and `slot<i>.domain` (points where
/// exactly one side is finite), i counted from 1.
inline Report is_c_conjugate_tuple(const std::vector<Marginal>& fs,
                                   const std::vector<std::vector<Vec>>& points,
                                   const TupleCheckOptions& opt = {}) {
  if (fs.size() < 2) throw Error("is_c_conjugate_tuple: need N >= 2");
  if (points.size() != fs.size()) throw Error("is_c_conjugate_tuple: one point list per slot");
  Report rep;
  rep.name = "c_conjugate_tuple";
  for (std::size_t i = 0; i < fs.size(); ++i) {
    FactoredConjugate conj(detail::all_but(fs, i));
    std::vector<double> v(points[i].size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = conj(points[i][k]);
    detail::compare_slot(rep, "slot" + std::to_string(i + 1), fs[i], points[i], v, opt);
  }
  return rep;
}

/// Same check on grids, restricted to nodes at least opt.margin from the
/// faces.
inline Report is_c_conjugate_tuple(const std::vector<Marginal>& fs, const std::vector<Grid>& grids,
                                   const TupleCheckOptions& opt = {}) {
  if (fs.size() < 2) throw Error("is_c_conjugate_tuple: need N >= 2");
  if (grids.size() != fs.size()) throw Error("is_c_conjugate_tuple: one grid per slot");
  Report rep;
  rep.name = "c_conjugate_tuple";
  for (std::size_t i = 0; i < fs.size(); ++i) {
    GridFunction c = FactoredConjugate(detail::all_but(fs, i)).on_grid(grids[i]);
    auto mask = trusted_interior(grids[i], opt.margin);
    std::vector<Vec> pts;
    std::vector<double> v;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (!mask[k]) continue;
      pts.push_back(grids[i].node(k));
      v.push_back(c.values[k]);
    }
    detail::compare_slot(rep, "slot" + std::to_string(i + 1), fs[i], pts, v, opt);
  }
  return rep;
}

/// Σ f_i(x_i) >= c(x) - eps on random tuples drawn from the supports.
inline Report lower_bound_certificate(const std::vector<Marginal>& fs, std::size_t samples,
                                      std::uint64_t seed = 0, double eps = 5e-3) {
  Report rep;
  rep.name = "lower_bound";
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  std::string wit;
  for (std::size_t s = 0; s < samples; ++s) {
    PointTuple t;
    double sum = 0.0;
    for (const auto& f : fs) {
      std::uniform_int_distribution<std::size_t> pick(0, f.support.size() - 1);
      std::size_t k = pick(rng);
      t.x.push_back(f.support.points[k]);
      sum += f.support.values[k];
    }
    double gap = cost_c(t) - sum;
    if (gap > worst) {
      worst = gap;
      wit = witness_point(t.sum(), fs[0].dim());
    }
  }
  rep.add_bound("sum_minus_cost", worst, eps, worst > eps ? wit : std::string{});
  return rep;
}

struct ClosureOptions {
  double eps_equal = 5e-3;
  double divergence_cap = 1e6;
  double margin = 0.0;
};

struct ClosureResult {
  GridFunction f1;
  /// f_i' = (⊕_{j≠i})^c rebuilt in order i = 2..N from the closure.
  std::vector<GridFunction> rebuilt;
  /// max |f_i' - f_i| on the trusted interior: zero when the inputs already
  /// satisfied the conjugacy hypotheses for i = 2..N.
  std::vector<double> rebuild_deviation;
  bool improper = false;
  Report report;
};

/// f_1 = (⊕_{j>=2} f_j)^c on grid1, each f_i rebuilt from the closure, and
/// the consistency f_1 = (⊕_{j>=2} f_j')^c reported as `closure`.
/// Impropriety of any transform is a verdict (`proper` fails), not an error.
inline ClosureResult involutivity_closure(const std::vector<Marginal>& rest, const Grid& grid1,
                                          const std::vector<Grid>& rest_grids,
                                          const ClosureOptions& opt = {}) {
  if (rest.empty()) throw Error("involutivity_closure: need at least one function");
  if (rest_grids.size() != rest.size()) throw Error("involutivity_closure: one grid per function");
  ClosureResult r;
  r.report.name = "involutivity_closure";

  CConjugate f1 = c_conjugate_factored(detail::all_but(rest, rest.size()), grid1, opt.divergence_cap);
  r.f1 = f1.f;
  r.improper = f1.improper;

  std::vector<Marginal> cur;
  if (!r.improper) cur.push_back(marginal_from_grid(r.f1, "f1"));
  for (const auto& m : rest) cur.push_back(m);

  for (std::size_t i = 0; i < rest.size() && !r.improper; ++i) {
    CConjugate fi = c_conjugate_factored(detail::all_but(cur, i + 1), rest_grids[i], opt.divergence_cap);
    if (fi.improper || !is_proper(fi.f)) {
      r.improper = true;
      break;
    }
    auto mask = trusted_interior(rest_grids[i], opt.margin);
    double dev = 0.0;
    for (std::size_t k = 0; k < fi.f.size(); ++k) {
      if (!mask[k]) continue;
      double a = fi.f.values[k], b = rest[i](rest_grids[i].node(k));
      bool fa = a <= opt.divergence_cap, fb = b <= opt.divergence_cap;
      if (fa != fb) {
        dev = kInf;
      } else if (fa) {
        dev = std::max(dev, std::abs(a - b));
      }
    }
    r.rebuild_deviation.push_back(dev);
    r.rebuilt.push_back(fi.f);
    cur[i + 1] = marginal_from_grid(fi.f, "f" + std::to_string(i + 2));
  }

  r.report.add("proper", !r.improper, r.improper ? 1.0 : 0.0, 0.0);
  if (r.improper) return r;

  std::vector<Marginal> primes(cur.begin() + 1, cur.end());
  GridFunction back = c_conjugate_factored(detail::all_but(primes, primes.size()), grid1).f;
  auto mask = trusted_interior(grid1, opt.margin);
  double worst = 0.0;
  std::string wit;
  for (std::size_t k = 0; k < back.size(); ++k) {
    if (!mask[k]) continue;
    double dev = std::abs(back.values[k] - r.f1.values[k]);
    if (dev > worst) {
      worst = dev;
      wit = witness_point(grid1.node(k), grid1.dim());
    }
  }
  r.report.add_bound("closure", worst, opt.eps_equal, worst > opt.eps_equal ? wit : std::string{});
  return r;
}

/// q - U has nonnegative second differences (within tol) on U's grid.
inline ConvexityVerdict in_A1_star(const GridFunction& u, double tol = 1e-9) {
  GridFunction r = u;
  for (std::size_t k = 0; k < r.size(); ++k) r.values[k] = half_sq(u.grid.node(k)) - u.values[k];
  return check_strong_convexity(r, 0.0, tol);
}

struct DualTriple {
  GridFunction U, V, W;
};

struct DualMaximalityOptions {
  /// Where U, V, W are compared.
  Grid eval_grid;
  /// Where h* + q is sampled when forming W.
  Grid hstar_grid;
  double tol = 1e-3;
  double convexity_tol = 1e-6;
  double margin = 0.0;
};

struct DualMaximality {
  DualTriple dual;
  /// W(0) - U(0) - V(0).
  double gap_at_origin = 0.0;
  Report report;
};

namespace detail {

/// (f + q)^* on a grid, from the support samples.
inline GridFunction plus_q_conjugate(const Marginal& f, const Grid& out) {
  if (f.grid) {
    GridFunction fq = *f.grid;
    for (std::size_t k = 0; k < fq.size(); ++k) {
      if (!is_inf(fq.values[k])) fq.values[k] += half_sq(fq.grid.node(k));
    }
    return conjugate_factorized(fq, out);
  }
  Samples s = f.support;
  for (std::size_t k = 0; k < s.size(); ++k) s.values[k] += half_sq(s.points[k]);
  return conjugate_scan(s, out);
}

}  // namespace detail

/// U = (f+q)^*, V = (g+q)^*, W = (h^*+q)^*. Records `max_deviation`
/// (|W - (U+V)| on the trusted interior), `membership` (q - (U+V) convex)
/// and `gap_at_origin`. The triple's contact set is maximal iff W = U + V.
inline DualMaximality dual_maximality_check(const Marginal& f, const Marginal& g, const Marginal& h,
                                            const DualMaximalityOptions& opt) {
  const int d = f.dim();
  if (g.dim() != d || h.dim() != d || opt.eval_grid.dim() != d || opt.hstar_grid.dim() != d) {
    throw Error("dual_maximality_check: dimension mismatch");
  }
  DualMaximality r;
  r.report.name = "dual_maximality";
  r.dual.U = detail::plus_q_conjugate(f, opt.eval_grid);
  r.dual.V = detail::plus_q_conjugate(g, opt.eval_grid);

  GridFunction hs(opt.hstar_grid, 0.0);
  if (h.conj) {
    for (std::size_t k = 0; k < hs.size(); ++k) hs.values[k] = h.conj(hs.grid.node(k));
  } else if (h.grid) {
    hs = conjugate_factorized(*h.grid, opt.hstar_grid);
  } else {
    hs = conjugate_scan(h.support, opt.hstar_grid);
  }
  for (std::size_t k = 0; k < hs.size(); ++k) {
    if (!is_inf(hs.values[k])) hs.values[k] += half_sq(hs.grid.node(k));
  }
  if (!is_proper(hs)) throw Error("dual_maximality_check: h* is +inf on the whole sampling grid");
  r.dual.W = conjugate_factorized(hs, opt.eval_grid);

  GridFunction sum = r.dual.U;
  for (std::size_t k = 0; k < sum.size(); ++k) sum.values[k] += r.dual.V.values[k];

  auto mask = trusted_interior(opt.eval_grid, opt.margin);
  double worst = 0.0;
  std::string wit;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    if (!mask[k]) continue;
    double dev = std::abs(r.dual.W.values[k] - sum.values[k]);
    if (dev > worst) {
      worst = dev;
      wit = witness_point(opt.eval_grid.node(k), d);
    }
  }
  r.report.add_bound("max_deviation", worst, opt.tol, worst > opt.tol ? wit : std::string{});

  ConvexityVerdict mem = in_A1_star(sum, opt.convexity_tol);
  r.report.add("membership", mem.ok, std::max(0.0, -mem.worst), opt.convexity_tol,
               mem.ok ? std::string{} : witness_point(mem.witness, d));

  // Values at the origin straight from the definitions.
  const Vec zero{0.0, 0.0};
  auto at0 = [&](const Marginal& m) {
    double best = -kInf;
    for (std::size_t k = 0; k < m.support.size(); ++k) {
      best = std::max(best, -m.support.values[k] - half_sq(m.support.points[k]));
    }
    return best;
  };
  double w0 = -kInf;
  for (std::size_t k = 0; k < hs.size(); ++k) w0 = std::max(w0, -hs.values[k]);
  r.gap_at_origin = w0 - at0(f) - at0(g);
  r.report.add_bound("gap_at_origin", std::abs(r.gap_at_origin), opt.tol,
                     std::abs(r.gap_at_origin) > opt.tol ? witness_point(zero, d) : std::string{});
  return r;
}

}  // namespace mcx

#endif  // MCX_MULTICONJ_CHECKS_HPP
