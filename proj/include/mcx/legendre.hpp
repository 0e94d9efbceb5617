#ifndef MCX_LEGENDRE_HPP
#define MCX_LEGENDRE_HPP

#include <span>
#include <vector>

#include "mcx/core.hpp"

namespace mcx {

/// Discrete Legendre transform in one variable.
///
/// Given nodes xs (strictly increasing) with values fx (+inf allowed) and
/// query slopes ys (non-decreasing), returns max_i xs[i]*y - fx[i] for
/// every y. The finite points are reduced to their lower convex hull and
/// the hull is walked once, so the cost is O(|xs| + |ys|).
inline std::vector<double> legendre_1d(std::span<const double> xs, std::span<const double> fx,
                                       std::span<const double> ys) {
  struct P {
    double x, f;
  };
  std::vector<P> hull;
  hull.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (is_inf(fx[i])) continue;
    P p{xs[i], fx[i]};
    while (hull.size() >= 2) {
      const P& a = hull[hull.size() - 2];
      const P& b = hull.back();
      // b is dropped unless slope(a,b) < slope(b,p).
      if ((b.f - a.f) * (p.x - b.x) >= (p.f - b.f) * (b.x - a.x)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  if (hull.empty()) throw Error("legendre_1d: function is improper (no finite node)");

  std::vector<double> out(ys.size());
  std::size_t k = 0;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    double y = ys[j];
    double best = hull[k].x * y - hull[k].f;
    while (k + 1 < hull.size()) {
      double next = hull[k + 1].x * y - hull[k + 1].f;
      if (next < best) break;
      best = next;
      ++k;
    }
    out[j] = best;
  }
  return out;
}

namespace detail {

inline std::vector<double> axis_coords(const Grid& g, int axis) {
  std::vector<double> c(g.count(axis));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = g.coord(axis, i);
  return c;
}

}  // namespace detail

/// Conjugate of a node-restricted grid function on a dual grid, computed
/// axis by axis (inner transform along axis 1 for each fixed row, then
/// along axis 0).
inline GridFunction conjugate_factorized(const GridFunction& f, const Grid& dual) {
  const Grid& g = f.grid;
  if (g.dim() != dual.dim()) throw Error("conjugate: dual grid dimension mismatch");
  if (!is_proper(f)) throw Error("conjugate: input is improper (no finite node)");

  auto x0 = detail::axis_coords(g, 0);
  auto y0 = detail::axis_coords(dual, 0);
  if (g.dim() == 1) return GridFunction(dual, legendre_1d(x0, f.values, y0));

  auto x1 = detail::axis_coords(g, 1);
  auto y1 = detail::axis_coords(dual, 1);
  const std::size_t n0 = g.count(0), n1 = g.count(1);
  const std::size_t m0 = dual.count(0), m1 = dual.count(1);

  // inner[i0][j1] = max_{i1} x1*y1 - f(i0,i1), stored negated so that the
  // outer pass is another conjugate; empty rows become +inf.
  std::vector<double> neg_inner(n0 * m1, kInf);
  std::vector<double> row(n1);
  for (std::size_t i0 = 0; i0 < n0; ++i0) {
    bool any = false;
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      row[i1] = f.values[i0 * n1 + i1];
      any = any || !is_inf(row[i1]);
    }
    if (!any) continue;
    auto r = legendre_1d(x1, row, y1);
    for (std::size_t j1 = 0; j1 < m1; ++j1) neg_inner[i0 * m1 + j1] = -r[j1];
  }

  std::vector<double> out(m0 * m1);
  std::vector<double> col(n0);
  for (std::size_t j1 = 0; j1 < m1; ++j1) {
    for (std::size_t i0 = 0; i0 < n0; ++i0) col[i0] = neg_inner[i0 * m1 + j1];
    auto c = legendre_1d(x0, col, y0);
    for (std::size_t j0 = 0; j0 < m0; ++j0) out[j0 * m1 + j1] = c[j0];
  }
  return GridFunction(dual, std::move(out));
}

/// Conjugate by a full scan over the finite nodes for every dual node.
inline GridFunction conjugate_scan(const Samples& s, const Grid& dual) {
  if (s.size() == 0) throw Error("conjugate: input is improper (no finite node)");
  std::vector<double> out(dual.size());
  for (std::size_t k = 0; k < dual.size(); ++k) {
    Vec y = dual.node(k);
    double best = -kInf;
    for (std::size_t i = 0; i < s.size(); ++i) {
      double v = dot(s.points[i], y) - s.values[i];
      if (v > best) best = v;
    }
    out[k] = best;
  }
  return GridFunction(dual, std::move(out));
}

/// Conjugate of a sampled function at a single point.
inline double conjugate_at(const Samples& s, const Vec& y) {
  if (s.size() == 0) throw Error("conjugate: input is improper (no finite node)");
  double best = -kInf;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double v = dot(s.points[i], y) - s.values[i];
    if (v > best) best = v;
  }
  return best;
}

}  // namespace mcx

#endif  // MCX_LEGENDRE_HPP
