#ifndef MCX_MULTICONJ_HPP
#define MCX_MULTICONJ_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcx/core.hpp"
#include "mcx/legendre.hpp"
#include "mcx/transforms.hpp"

namespace mcx {

/// c(x) = Σ_{i<j} <x_i, x_j>
inline double cost_c(const PointTuple& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) s += dot(t[i], t[j]);
  }
  return s;
}

struct CostSpec {
  int N = 3;
  int d = 1;

  CostSpec() = default;
  CostSpec(int n, int dim) : N(n), d(dim) {
    if (N < 2) throw Error("CostSpec: N must be >= 2");
    if (d < 1) throw Error("CostSpec: d must be >= 1");
  }
};

/// One entry of a marginal tuple: the finite support that gets enumerated,
/// a pointwise evaluator, and optionally an exact conjugate. Grid-backed
/// marginals keep their grid so conjugate tables can be built on lattices.
struct Marginal {
  std::string name;
  Samples support;
  std::function<double(const Vec&)> eval;
  std::function<double(const Vec&)> conj;
  /// Exact proximal map, when known.
  std::function<Vec(const Vec&)> prox;
  std::optional<GridFunction> grid;

  int dim() const { return support.dim; }
  double operator()(const Vec& x) const { return eval(x); }
};

inline Marginal marginal_from_grid(const GridFunction& f, std::string name = {}) {
  if (!is_proper(f)) throw Error("marginal '" + name + "' is improper");
  Marginal m;
  m.name = std::move(name);
  m.support = to_samples(f);
  m.grid = f;
  auto shared = std::make_shared<GridFunction>(f);
  m.eval = [shared](const Vec& x) { return eval_interp(*shared, x).value(); };
  return m;
}

inline Marginal marginal_from_samples(Samples s, std::function<double(const Vec&)> eval,
                                      std::function<double(const Vec&)> conj = {},
                                      std::string name = {}) {
  if (s.size() == 0) throw Error("marginal '" + name + "' is improper");
  Marginal m;
  m.name = std::move(name);
  m.support = std::move(s);
  m.eval = std::move(eval);
  m.conj = std::move(conj);
  return m;
}

struct CConjugate {
  GridFunction f;
  bool improper = false;
};

namespace detail {

inline bool all_above(const GridFunction& f, double cap) {
  for (double v : f.values) {
    if (v <= cap) return false;
  }
  return true;
}

/// Every combination of support points: the coordinate sum and
/// c(x_2..x_k) - Σ f_i(x_i).
struct Combo {
  Vec sum;
  double val;
  std::size_t lattice_offset[2];
};

inline std::vector<Combo> enumerate_combos(const std::vector<const Samples*>& parts,
                                           const std::vector<const Grid*>& grids) {
  std::vector<Combo> out;
  std::vector<std::size_t> idx(parts.size(), 0);
  for (const auto* p : parts) {
    if (p->size() == 0) throw Error("c-conjugate: empty finite domain");
  }
  std::vector<Vec> pts(parts.size());
  for (;;) {
    Combo c{{0.0, 0.0}, 0.0, {0, 0}};
    for (std::size_t i = 0; i < parts.size(); ++i) {
      pts[i] = parts[i]->points[idx[i]];
      c.sum = c.sum + pts[i];
      c.val -= parts[i]->values[idx[i]];
      if (grids[i]) {
        // offset of this node from its grid origin, in steps
        for (int a = 0; a < grids[i]->dim(); ++a) {
          c.lattice_offset[a] += static_cast<std::size_t>(
              std::llround((pts[i][a] - grids[i]->lo(a)) / grids[i]->step(a)));
        }
      }
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) c.val += dot(pts[i], pts[j]);
    }
    out.push_back(c);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == parts[i]->size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

}  // namespace detail

/// (⊕ f_i)^c on out by the defining product scan over finite nodes.
inline CConjugate c_conjugate_brute(const std::vector<Samples>& fs, const Grid& out,
                                    double divergence_cap = 1e6) {
  if (fs.empty()) throw Error("c_conjugate_brute: need at least one function");
  std::vector<const Samples*> parts;
  std::vector<const Grid*> grids(fs.size(), nullptr);
  for (const auto& s : fs) {
    if (s.dim != out.dim()) throw Error("c_conjugate_brute: dimension mismatch");
    parts.push_back(&s);
  }
  auto combos = detail::enumerate_combos(parts, grids);
  std::vector<double> v(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    Vec x = out.node(k);
    double best = -kInf;
    for (const auto& c : combos) best = std::max(best, dot(x, c.sum) + c.val);
    v[k] = best;
  }
  CConjugate r{GridFunction(out, std::move(v)), false};
  r.improper = detail::all_above(r.f, divergence_cap);
  return r;
}

inline CConjugate c_conjugate_brute(const std::vector<GridFunction>& fs, const Grid& out,
                                    double divergence_cap = 1e6) {
  std::vector<Samples> s;
  for (const auto& f : fs) {
    if (!is_proper(f)) throw Error("c_conjugate_brute: improper input");
    s.push_back(to_samples(f));
  }
  return c_conjugate_brute(s, out, divergence_cap);
}

/// (⊕ others)^c with one marginal collapsed through its conjugate: the max
/// over the remaining supports of <x,S'> + c' - Σ f' + f_tail^*(x + S').
/// The tail is a marginal with an exact conjugate if there is one, else the
/// largest support. A single +inf conjugate term makes the value +inf.
class FactoredConjugate {
 public:
  explicit FactoredConjugate(std::vector<const Marginal*> others) : others_(std::move(others)) {
    if (others_.empty()) throw Error("c_conjugate: need at least one function");
    const int d = others_[0]->dim();
    for (const auto* m : others_) {
      if (m->dim() != d) throw Error("c_conjugate: dimension mismatch");
      if (m->support.size() == 0) throw Error("c_conjugate: marginal '" + m->name + "' is improper");
    }
    tail_ = others_.size();
    for (std::size_t i = 0; i < others_.size(); ++i) {
      if (others_[i]->conj) tail_ = i;
    }
    if (tail_ == others_.size()) {
      std::size_t best = 0;
      for (std::size_t i = 0; i < others_.size(); ++i) {
        if (others_[i]->support.size() >= best) {
          best = others_[i]->support.size();
          tail_ = i;
        }
      }
    }
    std::vector<const Samples*> parts;
    for (std::size_t i = 0; i < others_.size(); ++i) {
      if (i == tail_) continue;
      parts.push_back(&others_[i]->support);
      grids_.push_back(others_[i]->grid ? &others_[i]->grid->grid : nullptr);
    }
    combos_ = detail::enumerate_combos(parts, grids_);
  }

  int dim() const { return others_[0]->dim(); }

  double operator()(const Vec& x) const {
    const Marginal& t = *others_[tail_];
    double best = -kInf;
    for (const auto& c : combos_) {
      double tc = t.conj ? t.conj(x + c.sum) : conjugate_at(t.support, x + c.sum);
      if (is_inf(tc)) return kInf;
      best = std::max(best, dot(x, c.sum) + c.val + tc);
    }
    return best;
  }

  /// Values on a grid. When every enumerated marginal is a grid function on
  /// the out lattice and the tail has a grid, the tail conjugate is
  /// tabulated once on the lattice of sums.
  GridFunction on_grid(const Grid& out) const {
    if (out.dim() != dim()) throw Error("c_conjugate: dimension mismatch");
    const Marginal& t = *others_[tail_];
    bool aligned = !t.conj && t.grid.has_value();
    for (const auto* g : grids_) aligned = aligned && g && lattice_aligned(out, *g);
    std::vector<double> v(out.size());
    if (!aligned) {
      for (std::size_t k = 0; k < out.size(); ++k) v[k] = (*this)(out.node(k));
      return GridFunction(out, std::move(v));
    }
    const int d = out.dim();
    Vec lo{0.0, 0.0};
    std::array<std::size_t, 2> cnt{0, 0};
    for (int a = 0; a < d; ++a) {
      lo[a] = out.lo(a);
      cnt[a] = out.count(a);
      for (const auto* g : grids_) {
        lo[a] += g->lo(a);
        cnt[a] += g->count(a) - 1;
      }
    }
    Grid lat = d == 1 ? Grid(lo[0], out.step(0), cnt[0]) : Grid(lo, {out.step(0), out.step(1)}, cnt);
    GridFunction table = conjugate_factorized(*t.grid, lat);
    for (std::size_t k = 0; k < out.size(); ++k) {
      Vec x = out.node(k);
      auto [i0, i1] = out.multi_index(k);
      double best = -kInf;
      for (const auto& c : combos_) {
        double tc = table.values[lat.index(i0 + c.lattice_offset[0], i1 + c.lattice_offset[1])];
        best = std::max(best, dot(x, c.sum) + c.val + tc);
      }
      v[k] = best;
    }
    return GridFunction(out, std::move(v));
  }

 private:
  std::vector<const Marginal*> others_;
  std::size_t tail_ = 0;
  std::vector<const Grid*> grids_;
  std::vector<detail::Combo> combos_;
};

inline CConjugate c_conjugate_factored(const std::vector<const Marginal*>& others, const Grid& out,
                                       double divergence_cap = 1e6) {
  CConjugate r{FactoredConjugate(others).on_grid(out), false};
  r.improper = detail::all_above(r.f, divergence_cap);
  return r;
}

inline CConjugate c_conjugate_factored(const std::vector<Marginal>& others, const Grid& out,
                                       double divergence_cap = 1e6) {
  std::vector<const Marginal*> p;
  for (const auto& m : others) p.push_back(&m);
  return c_conjugate_factored(p, out, divergence_cap);
}

/// (⊕ f_i)^c through envelopes: (Σ e_{f_i} - (N-2) q)^* - q.
///
/// In one dimension the result is exact for node-restricted inputs: with
/// G = f_2^* + q tabulated on the lattice of sums x_1 + x_3 + ... + x_N,
/// e_{f_2} is the conjugate of that table, e_{f_i} = q - (f_i + q)^* for
/// i >= 3, and the outer sup is attained at the slopes of the table, so the
/// envelope sum is only needed there. The out grid and f_3..f_N must share
/// one lattice.
///
/// In two dimensions the envelopes are sampled on the caller's work grid and
/// the outer sup runs over its nodes, which is an approximation.
inline CConjugate c_conjugate_fast(const std::vector<GridFunction>& fs, const Grid& out,
                                   const std::optional<Grid>& work = std::nullopt,
                                   double divergence_cap = 1e6) {
  if (fs.empty()) throw Error("c_conjugate_fast: need at least one function");
  for (const auto& f : fs) {
    if (f.grid.dim() != out.dim()) throw Error("c_conjugate_fast: dimension mismatch");
    if (!is_proper(f)) throw Error("c_conjugate_fast: improper input");
  }
  const double n_minus_2 = static_cast<double>(fs.size()) - 1.0;
  CConjugate r;

  if (out.dim() == 2) {
    if (!work) throw Error("c_conjugate_fast: two-dimensional inputs need a work grid");
    GridFunction dsum(*work, 0.0);
    for (const auto& f : fs) {
      GridFunction e = moreau_envelope(f, *work);
      for (std::size_t k = 0; k < dsum.size(); ++k) dsum.values[k] += e.values[k];
    }
    for (std::size_t k = 0; k < dsum.size(); ++k) dsum.values[k] -= n_minus_2 * half_sq(work->node(k));
    r.f = conjugate(dsum, out);
    for (std::size_t k = 0; k < out.size(); ++k) r.f.values[k] -= half_sq(out.node(k));
    r.improper = detail::all_above(r.f, divergence_cap);
    return r;
  }

  const double h = out.step(0);
  double lo = out.lo(0);
  std::size_t count = out.count(0);
  for (std::size_t i = 1; i < fs.size(); ++i) {
    if (!lattice_aligned(out, fs[i].grid)) {
      throw Error("c_conjugate_fast: out grid and f_3..f_N must share one lattice");
    }
    lo += fs[i].grid.lo(0);
    count += fs[i].grid.count(0) - 1;
  }
  // G = f_2^* + q on the sum lattice.
  std::vector<double> s(count), gq(count);
  for (std::size_t k = 0; k < count; ++k) s[k] = lo + static_cast<double>(k) * h;
  auto x2 = detail::axis_coords(fs[0].grid, 0);
  auto f2c = legendre_1d(x2, fs[0].values, s);
  for (std::size_t k = 0; k < count; ++k) gq[k] = f2c[k] + 0.5 * s[k] * s[k];

  // Slopes of the table, where the envelope sum is evaluated.
  std::vector<double> ys(count - 1), dvals(count - 1);
  for (std::size_t k = 0; k + 1 < count; ++k) {
    ys[k] = (gq[k + 1] - gq[k]) / h;
    dvals[k] = s[k] * ys[k] - gq[k];  // e_{f_2}(y_k)
  }
  for (std::size_t i = 1; i < fs.size(); ++i) {
    auto xi = detail::axis_coords(fs[i].grid, 0);
    std::vector<double> fq(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j) {
      fq[j] = is_inf(fs[i].values[j]) ? kInf : fs[i].values[j] + 0.5 * xi[j] * xi[j];
    }
    auto c = legendre_1d(xi, fq, ys);
    for (std::size_t k = 0; k < ys.size(); ++k) dvals[k] += 0.5 * ys[k] * ys[k] - c[k];  // e_{f_i}(y_k)
  }
  for (std::size_t k = 0; k < ys.size(); ++k) dvals[k] -= n_minus_2 * 0.5 * ys[k] * ys[k];

  auto xo = detail::axis_coords(out, 0);
  auto v = legendre_1d(ys, dvals, xo);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] -= 0.5 * xo[k] * xo[k];
  r.f = GridFunction(out, std::move(v));
  r.improper = detail::all_above(r.f, divergence_cap);
  return r;
}

}  // namespace mcx

#endif  // MCX_MULTICONJ_HPP
