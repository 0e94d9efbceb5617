#ifndef MCX_TRANSFORMS_HPP
#define MCX_TRANSFORMS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "mcx/core.hpp"
#include "mcx/legendre.hpp"
#include "mcx/report.hpp"

namespace mcx {

enum class ConjugateMethod { fast, brute };

struct ConjugateRequest {
  GridFunction input;
  Grid dual_grid;
  ConjugateMethod method = ConjugateMethod::fast;
};

/// Discrete Fenchel conjugate: value at dual node y is the max over finite
/// input nodes x of <x,y> - f(x).
inline GridFunction conjugate(const GridFunction& f, const Grid& dual,
                              ConjugateMethod method = ConjugateMethod::fast) {
  if (f.grid.dim() != dual.dim()) throw Error("conjugate: dual grid dimension mismatch");
  if (!is_proper(f)) throw Error("conjugate: input is improper (no finite node)");
  if (method == ConjugateMethod::fast) return conjugate_factorized(f, dual);
  return conjugate_scan(to_samples(f), dual);
}

inline GridFunction conjugate(const ConjugateRequest& req) {
  return conjugate(req.input, req.dual_grid, req.method);
}

/// f** evaluated back on f's own grid.
inline GridFunction biconjugate(const GridFunction& f, const Grid& intermediate) {
  return conjugate(conjugate(f, intermediate), f.grid);
}

/// (f □ g)(x) = min over finite nodes y of f(y) + g(x - y), with g read by
/// interpolation and extended by +inf outside its box.
inline GridFunction inf_convolution(const GridFunction& f, const GridFunction& g, const Grid& out) {
  if (f.grid.dim() != g.grid.dim() || f.grid.dim() != out.dim()) {
    throw Error("inf_convolution: dimension mismatch");
  }
  Samples fs = to_samples(f);
  std::vector<double> v(out.size(), kInf);
  for (std::size_t k = 0; k < out.size(); ++k) {
    Vec x = out.node(k);
    double best = kInf;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      Extended gv = eval_interp(g, x - fs.points[i]);
      if (!gv.is_finite()) continue;
      best = std::min(best, fs.values[i] + gv.value());
    }
    v[k] = best;
  }
  return GridFunction(out, std::move(v));
}

/// Moreau envelope e_f = f □ q with q exact: min over finite nodes y of
/// f(y) + |x - y|^2 / 2, evaluated as q(x) - (f + q)^*(x).
inline GridFunction moreau_envelope(const GridFunction& f, const Grid& out) {
  if (f.grid.dim() != out.dim()) throw Error("moreau_envelope: dimension mismatch");
  GridFunction fq = f;
  for (std::size_t k = 0; k < fq.size(); ++k) {
    if (!is_inf(fq.values[k])) fq.values[k] += half_sq(f.grid.node(k));
  }
  GridFunction c = conjugate(fq, out);
  for (std::size_t k = 0; k < out.size(); ++k) c.values[k] = half_sq(out.node(k)) - c.values[k];
  return c;
}

/// Envelope of a sampled function at one point, by direct minimization.
inline double envelope_at(const Samples& s, const Vec& x) {
  double best = kInf;
  for (std::size_t i = 0; i < s.size(); ++i) {
    best = std::min(best, s.values[i] + half_sq(x - s.points[i]));
  }
  return best;
}

/// Proximal point: the finite node minimizing f(y) + |y - x|^2 / 2, ties to
/// the smallest row-major index.
inline Vec prox(const Samples& s, const Vec& x) {
  if (s.size() == 0) throw Error("prox: input is improper (no finite node)");
  std::size_t arg = 0;
  double best = kInf;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double v = s.values[i] + half_sq(s.points[i] - x);
    if (v < best) {
      best = v;
      arg = i;
    }
  }
  return s.points[arg];
}

inline Vec prox(const GridFunction& f, const Vec& x) {
  if (!is_proper(f)) throw Error("prox: input is improper (no finite node)");
  return prox(to_samples(f), x);
}

struct ConvexityVerdict {
  bool ok = true;
  double worst = 0.0;  // most negative second difference seen
  Vec witness{0.0, 0.0};
};

/// f is λ-strongly convex on the grid when g = f - λq has second differences
/// >= -tol along both axes and both diagonals at every interior node whose
/// stencil is finite.
inline ConvexityVerdict check_strong_convexity(const GridFunction& f, double lambda, double tol = 1e-9) {
  if (lambda < 0) throw Error("check_strong_convexity: lambda must be >= 0");
  const Grid& g = f.grid;
  std::vector<double> r(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    r[k] = is_inf(f.values[k]) ? kInf : f.values[k] - lambda * half_sq(g.node(k));
  }
  ConvexityVerdict out;
  auto probe = [&](std::size_t c, std::size_t a, std::size_t b) {
    if (is_inf(r[c]) || is_inf(r[a]) || is_inf(r[b])) return;
    double d2 = r[a] + r[b] - 2.0 * r[c];
    if (d2 < out.worst) out.worst = d2;
    if (d2 < -tol && out.ok) {
      out.ok = false;
      out.witness = g.node(c);
    }
  };
  if (g.dim() == 1) {
    for (std::size_t i = 1; i + 1 < g.count(0); ++i) probe(i, i - 1, i + 1);
    return out;
  }
  for (std::size_t i = 0; i < g.count(0); ++i) {
    for (std::size_t j = 0; j < g.count(1); ++j) {
      std::size_t c = g.index(i, j);
      bool in0 = i > 0 && i + 1 < g.count(0);
      bool in1 = j > 0 && j + 1 < g.count(1);
      if (in0) probe(c, g.index(i - 1, j), g.index(i + 1, j));
      if (in1) probe(c, g.index(i, j - 1), g.index(i, j + 1));
      if (in0 && in1) {
        probe(c, g.index(i - 1, j - 1), g.index(i + 1, j + 1));
        probe(c, g.index(i - 1, j + 1), g.index(i + 1, j - 1));
      }
    }
  }
  return out;
}

/// x ↦ max over finite nodes y of G of H(x + y) - G(y); any +inf term in H
/// makes the value +inf.
inline GridFunction sup_convolution(const GridFunction& h, const GridFunction& g, const Grid& out) {
  if (h.grid.dim() != g.grid.dim() || h.grid.dim() != out.dim()) {
    throw Error("sup_convolution: dimension mismatch");
  }
  Samples gs = to_samples(g);
  if (gs.size() == 0) throw Error("sup_convolution: G is improper");
  std::vector<double> v(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    Vec x = out.node(k);
    double best = -kInf;
    for (std::size_t i = 0; i < gs.size(); ++i) {
      Extended hv = eval_interp(h, x + gs.points[i]);
      if (!hv.is_finite()) {
        best = kInf;
        break;
      }
      best = std::max(best, hv.value() - gs.values[i]);
    }
    v[k] = best;
  }
  return GridFunction(out, std::move(v));
}

struct NestedSupOptions {
  Grid dual_grid;
  double tol = 5e-3;
  /// Boundary-vs-interior slack used to call a truncated sup divergent.
  double divergence_slack = 1e-9;
};

/// Compares sup over x_i of g(x + Σx_i) - Σ f_i(x_i) (g interpolated, +inf
/// outside its box) with (g* - Σ f_i*)*(x) where the outer sup runs over the
/// dual grid. A side is divergent when it is +inf (left) or when its sup is
/// attained strictly on the dual grid boundary (right). Both sides must agree
/// on divergence, and finite values must agree within tol.
inline Report nested_sup_identity_check(const GridFunction& g, const std::vector<GridFunction>& fs,
                                        std::span<const Vec> probes, const NestedSupOptions& opt) {
  const int d = g.grid.dim();
  if (opt.dual_grid.dim() != d) throw Error("nested_sup_identity_check: dual grid dimension mismatch");
  for (const auto& f : fs) {
    if (f.grid.dim() != d) throw Error("nested_sup_identity_check: dimension mismatch");
  }
  if (!check_strong_convexity(g, 0.0).ok) throw Error("nested_sup_identity_check: g is not convex");
  std::vector<Samples> fsamp;
  for (const auto& f : fs) {
    if (!is_proper(f)) throw Error("nested_sup_identity_check: improper input");
    if (!check_strong_convexity(f, 0.0).ok) throw Error("nested_sup_identity_check: f_i is not convex");
    fsamp.push_back(to_samples(f));
  }

  // D = g* - Σ f_i* on the dual grid (finite everywhere since boxes are bounded).
  GridFunction dual = conjugate(g, opt.dual_grid);
  for (const auto& f : fs) {
    GridFunction fc = conjugate(f, opt.dual_grid);
    for (std::size_t k = 0; k < dual.size(); ++k) dual.values[k] -= fc.values[k];
  }
  const Grid& yg = opt.dual_grid;
  auto on_boundary = [&](std::size_t k) {
    auto [i0, i1] = yg.multi_index(k);
    if (i0 == 0 || i0 + 1 == yg.count(0)) return true;
    return d == 2 && (i1 == 0 || i1 + 1 == yg.count(1));
  };

  Report rep;
  rep.name = "nested_sup_identity";
  double worst = 0.0;
  std::size_t mismatched = 0;
  std::string witness;
  for (const Vec& x : probes) {
    // Left side: recursive product scan.
    double lhs = -kInf;
    std::vector<std::size_t> idx(fsamp.size(), 0);
    bool done = fsamp.empty();
    if (done) {
      Extended gv = eval_interp(g, x);
      lhs = gv.value();
    }
    while (!done) {
      Vec s = x;
      double cost = 0.0;
      for (std::size_t i = 0; i < fsamp.size(); ++i) {
        s = s + fsamp[i].points[idx[i]];
        cost += fsamp[i].values[idx[i]];
      }
      Extended gv = eval_interp(g, s);
      if (!gv.is_finite()) {
        lhs = kInf;
        break;
      }
      lhs = std::max(lhs, gv.value() - cost);
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == fsamp[i].size()) idx[i++] = 0;
      done = i == idx.size();
    }
    // Right side.
    double in_best = -kInf, edge_best = -kInf;
    for (std::size_t k = 0; k < yg.size(); ++k) {
      double v = dot(x, yg.node(k)) - dual.values[k];
      if (on_boundary(k)) {
        edge_best = std::max(edge_best, v);
      } else {
        in_best = std::max(in_best, v);
      }
    }
    double rhs = std::max(in_best, edge_best);
    bool lhs_div = is_inf(lhs);
    bool rhs_div = edge_best > in_best + opt.divergence_slack * std::max(1.0, std::abs(in_best));
    if (lhs_div != rhs_div) {
      ++mismatched;
      if (witness.empty()) witness = witness_point(x, d);
      continue;
    }
    if (!lhs_div) {
      double dev = std::abs(lhs - rhs);
      if (dev > worst) {
        worst = dev;
        if (dev > opt.tol) witness = witness_point(x, d);
      }
    }
  }
  rep.add("divergence_agreement", mismatched == 0, static_cast<double>(mismatched), 0.0,
          mismatched ? witness : std::string{});
  rep.add_bound("max_deviation", worst, opt.tol, worst > opt.tol ? witness : std::string{});
  return rep;
}

}  // namespace mcx

#endif  // MCX_TRANSFORMS_HPP
