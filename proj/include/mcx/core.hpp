#ifndef MCX_CORE_HPP
#define MCX_CORE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcx {

/// Raised for malformed inputs: dimension mismatches, improper functions,
/// unknown descriptors and the like.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf(double v) { return v == kInf; }

/// A value in R ∪ {+∞}. Negative infinity and NaN are unrepresentable.
class Extended {
 public:
  constexpr Extended() = default;
  Extended(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v) || v == -kInf) {
      throw Error("Extended: value must be finite or +inf");
    }
  }
  static Extended infinity() { return Extended(kInf); }

  bool is_finite() const { return v_ != kInf; }
  double value() const { return v_; }

  friend Extended operator+(Extended a, Extended b) { return Extended(a.v_ + b.v_); }
  friend bool operator==(Extended a, Extended b) { return a.v_ == b.v_; }
  friend auto operator<=>(Extended a, Extended b) { return a.v_ <=> b.v_; }

 private:
  double v_ = 0.0;
};

/// Points of R^d, d <= 2. One-dimensional points keep a zero second
/// component so that inner products need no dimension argument.
using Vec = std::array<double, 2>;

inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1]; }
inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1]}; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

/// q(x) = |x|^2 / 2
inline double half_sq(const Vec& a) { return 0.5 * dot(a, a); }

/// Uniform box grid in dimension 1 or 2, nodes stored row-major
/// (axis 0 is the slow index).
class Grid {
 public:
  Grid() = default;

  Grid(double origin, double step, std::size_t count) : dim_(1) {
    origin_[0] = origin;
    step_[0] = step;
    count_[0] = count;
    validate();
  }

  Grid(Vec origin, Vec step, std::array<std::size_t, 2> count)
      : dim_(2), origin_(origin), step_(step), count_(count) {
    validate();
  }

  /// Grid over [lo, hi] with the given step; hi is rounded to the nearest node.
  static Grid span(double lo, double hi, double step) {
    auto n = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
    return Grid(lo, step, n);
  }

  static Grid span2(double lo, double hi, double step) {
    auto n = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
    return Grid({lo, lo}, {step, step}, {n, n});
  }

  int dim() const { return dim_; }
  double origin(int axis) const { return origin_[axis]; }
  double step(int axis) const { return step_[axis]; }
  std::size_t count(int axis) const { return count_[axis]; }
  std::size_t size() const { return dim_ == 1 ? count_[0] : count_[0] * count_[1]; }

  double lo(int axis) const { return origin_[axis]; }
  double hi(int axis) const {
    return origin_[axis] + static_cast<double>(count_[axis] - 1) * step_[axis];
  }

  double coord(int axis, std::size_t i) const {
    return origin_[axis] + static_cast<double>(i) * step_[axis];
  }

  std::size_t index(std::size_t i0, std::size_t i1 = 0) const {
    return dim_ == 1 ? i0 : i0 * count_[1] + i1;
  }

  std::array<std::size_t, 2> multi_index(std::size_t k) const {
    if (dim_ == 1) return {k, 0};
    return {k / count_[1], k % count_[1]};
  }

  Vec node(std::size_t k) const {
    auto [i0, i1] = multi_index(k);
    if (dim_ == 1) return {coord(0, i0), 0.0};
    return {coord(0, i0), coord(1, i1)};
  }

  bool contains(const Vec& x) const {
    for (int a = 0; a < dim_; ++a) {
      if (x[a] < lo(a) || x[a] > hi(a)) return false;
    }
    return true;
  }

  /// Distance from x to the nearest box face (negative outside).
  double edge_distance(const Vec& x) const {
    double d = kInf;
    for (int a = 0; a < dim_; ++a) {
      d = std::min(d, std::min(x[a] - lo(a), hi(a) - x[a]));
    }
    return d;
  }

  Vec center() const {
    Vec c{0.0, 0.0};
    for (int a = 0; a < dim_; ++a) c[a] = 0.5 * (lo(a) + hi(a));
    return c;
  }

  double min_step() const { return dim_ == 1 ? step_[0] : std::min(step_[0], step_[1]); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  void validate() const {
    for (int a = 0; a < dim_; ++a) {
      if (!(step_[a] > 0.0) || !std::isfinite(step_[a])) throw Error("Grid: step must be > 0");
      if (count_[a] < 2) throw Error("Grid: count must be >= 2");
      if (!std::isfinite(origin_[a])) throw Error("Grid: origin must be finite");
    }
  }

  int dim_ = 1;
  Vec origin_{0.0, 0.0};
  Vec step_{1.0, 1.0};
  std::array<std::size_t, 2> count_{2, 1};
};

/// Function sampled on a grid; +inf marks nodes outside the effective domain.
struct GridFunction {
  Grid grid;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) throw Error("GridFunction: value count does not match grid");
    for (double x : values) {
      if (std::isnan(x) || x == -kInf) throw Error("GridFunction: values must be finite or +inf");
    }
  }
  explicit GridFunction(Grid g, double fill = 0.0)
      : grid(std::move(g)), values(grid.size(), fill) {}

  std::size_t size() const { return values.size(); }
  Extended at(std::size_t k) const { return Extended(values[k]); }
};

inline bool is_proper(const GridFunction& f) {
  for (double v : f.values) {
    if (!is_inf(v)) return true;
  }
  return false;
}

/// Ordered tuple (x_1, ..., x_N) of points sharing one dimension.
struct PointTuple {
  std::vector<Vec> x;

  PointTuple() = default;
  explicit PointTuple(std::vector<Vec> pts) : x(std::move(pts)) {}

  std::size_t size() const { return x.size(); }
  const Vec& operator[](std::size_t i) const { return x[i]; }
  Vec& operator[](std::size_t i) { return x[i]; }

  Vec sum() const {
    Vec s{0.0, 0.0};
    for (const auto& p : x) s = s + p;
    return s;
  }

  friend bool operator==(const PointTuple&, const PointTuple&) = default;
  friend auto operator<=>(const PointTuple& a, const PointTuple& b) { return a.x <=> b.x; }
};

struct ToleranceConfig {
  double eps_equal = 5e-3;
  double eps_contact = 1e-9;
  double divergence_cap = 1e6;

  void validate() const {
    if (!(eps_equal > 0 && eps_contact > 0 && divergence_cap > 0)) {
      throw Error("ToleranceConfig: all tolerances must be strictly positive");
    }
  }
};

namespace detail {
inline void check_dim(const Grid& g, int d, const char* what) {
  if (g.dim() != d) throw Error(std::string(what) + ": dimension mismatch");
}
}  // namespace detail

/// Multilinear interpolation; +inf outside the box or next to a +inf node.
inline Extended eval_interp(const GridFunction& f, const Vec& x, int dim) {
  detail::check_dim(f.grid, dim, "eval_interp");
  const Grid& g = f.grid;
  if (!g.contains(x)) return Extended::infinity();
  std::array<std::size_t, 2> i{0, 0};
  std::array<double, 2> t{0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) {
    double u = (x[a] - g.lo(a)) / g.step(a);
    auto k = static_cast<std::size_t>(std::floor(u));
    if (k >= g.count(a) - 1) k = g.count(a) - 2;
    i[a] = k;
    t[a] = u - static_cast<double>(k);
    // Snap exact hits so node values come back bit-for-bit.
    if (std::abs(t[a]) < 1e-12) t[a] = 0.0;
    if (std::abs(t[a] - 1.0) < 1e-12) {
      t[a] = 0.0;
      i[a] = k + 1;
    }
  }
  if (g.dim() == 1) {
    double v0 = f.values[i[0]];
    if (t[0] == 0.0) return Extended(v0);
    double v1 = f.values[i[0] + 1];
    if (is_inf(v0) || is_inf(v1)) return Extended::infinity();
    return Extended((1.0 - t[0]) * v0 + t[0] * v1);
  }
  double acc = 0.0;
  for (int c0 = 0; c0 < 2; ++c0) {
    double w0 = c0 ? t[0] : 1.0 - t[0];
    if (w0 == 0.0) continue;
    for (int c1 = 0; c1 < 2; ++c1) {
      double w1 = c1 ? t[1] : 1.0 - t[1];
      if (w1 == 0.0) continue;
      double v = f.values[g.index(i[0] + c0, i[1] + c1)];
      if (is_inf(v)) return Extended::infinity();
      acc += w0 * w1 * v;
    }
  }
  return Extended(acc);
}

inline Extended eval_interp(const GridFunction& f, const Vec& x) {
  return eval_interp(f, x, f.grid.dim());
}

/// Samples a callable at every node.
template <typename Fn>
GridFunction sample(const Grid& grid, Fn&& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) v[k] = fn(grid.node(k));
  return GridFunction(grid, std::move(v));
}

/// True when two grids share step sizes and their nodes sit on one lattice.
inline bool lattice_aligned(const Grid& a, const Grid& b, double rel = 1e-9) {
  if (a.dim() != b.dim()) return false;
  for (int ax = 0; ax < a.dim(); ++ax) {
    double h = a.step(ax);
    if (std::abs(h - b.step(ax)) > rel * h) return false;
    double off = (b.origin(ax) - a.origin(ax)) / h;
    if (std::abs(off - std::round(off)) > 1e-6) return false;
  }
  return true;
}

/// Restriction of a grid function to its finite nodes.
struct Samples {
  int dim = 1;
  std::vector<Vec> points;
  std::vector<double> values;

  std::size_t size() const { return points.size(); }
  void add(const Vec& p, double v) {
    points.push_back(p);
    values.push_back(v);
  }
};

inline Samples to_samples(const GridFunction& f) {
  Samples s;
  s.dim = f.grid.dim();
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!is_inf(f.values[k])) s.add(f.grid.node(k), f.values[k]);
  }
  return s;
}

/// Value of a sampled function at p: exact match within tol, else +inf.
inline double sample_value(const Samples& s, const Vec& p, double tol = 1e-12) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (std::abs(s.points[k][0] - p[0]) <= tol && std::abs(s.points[k][1] - p[1]) <= tol) {
      return s.values[k];
    }
  }
  return kInf;
}

/// Nodes at least `margin` away from every box face.
inline std::vector<bool> trusted_interior(const Grid& g, double margin) {
  std::vector<bool> mask(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) mask[k] = g.edge_distance(g.node(k)) >= margin - 1e-12;
  return mask;
}

}  // namespace mcx

#endif  // MCX_CORE_HPP
