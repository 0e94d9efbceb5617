#ifndef MCX_GALLERY_HPP
#define MCX_GALLERY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "mcx/contact.hpp"
#include "mcx/core.hpp"
#include "mcx/legendre.hpp"
#include "mcx/multiconj.hpp"
#include "mcx/report.hpp"
#include "mcx/transforms.hpp"

namespace mcx {

inline const double kSqrt3 = std::sqrt(3.0);

// ---------------------------------------------------------------------------
// 60-degree segments

struct ObliqueParams {
  double lambda = 1.0;
  Vec u{1.0, 0.0};
  Vec v{0.5, kSqrt3 / 2.0};
  Vec w{-0.5, kSqrt3 / 2.0};  // v - u

  ObliqueParams() = default;
  explicit ObliqueParams(double lam) : lambda(lam) {
    if (!(lam > 0.0) || !std::isfinite(lam)) throw Error("oblique: lambda must be a positive real");
  }
};

enum class HexSide { inside, boundary, outside };

/// Regular hexagon with vertices ±2λu, ±2λv, ±2λ(v-u).
struct HexHull {
  double lambda = 1.0;

  explicit HexHull(double lam = 1.0) : lambda(lam) {}

  std::array<Vec, 6> vertices() const {
    const double l = lambda;
    return {Vec{2 * l, 0.0}, Vec{l, kSqrt3 * l}, Vec{-l, kSqrt3 * l},
            Vec{-2 * l, 0.0}, Vec{-l, -kSqrt3 * l}, Vec{l, -kSqrt3 * l}};
  }

  /// Unit normals of three edge pairs (the other three are their negatives).
  static std::array<Vec, 3> normals() { return {Vec{kSqrt3 / 2, 0.5}, Vec{0.0, 1.0}, Vec{-kSqrt3 / 2, 0.5}}; }

  /// Distance-like margin: apothem minus the largest normal projection.
  /// Positive inside, zero on the boundary.
  double margin(const Vec& p) const {
    double m = 0.0;
    for (const Vec& n : normals()) m = std::max(m, std::abs(dot(n, p)));
    return kSqrt3 * lambda - m;
  }

  HexSide classify(const Vec& p, double tol = 1e-9) const {
    double m = margin(p);
    if (m > tol) return HexSide::inside;
    if (m >= -tol) return HexSide::boundary;
    return HexSide::outside;
  }
};

inline HexSide hex_membership(const Vec& p, const ObliqueParams& prm) { return HexHull(prm.lambda).classify(p); }

/// D_λ = I_1 + I_2, the rhombus with vertices ±λw, ±λ(u+v).
struct RhombusD {
  double lambda = 1.0;

  struct Coords {
    double t, s;
  };

  /// z = ±tλw + sλ(u+v) with t >= 0.
  Coords decompose(const Vec& z) const {
    // Basis w = (-1/2, √3/2), u+v = (3/2, √3/2); determinant -√3.
    const double det = -kSqrt3;
    double alpha = (z[0] * (kSqrt3 / 2) - 1.5 * z[1]) / det;
    double beta = (-0.5 * z[1] - (kSqrt3 / 2) * z[0]) / det;
    return {std::abs(alpha) / lambda, beta / lambda};
  }

  bool contains(const Vec& z, double tol = 1e-12) const {
    auto [t, s] = decompose(z);
    return t <= 1.0 + tol && s >= t - 1.0 - tol && s <= 1.0 - t + tol;
  }
};

/// h(z) = max(λ|u·z + λu·v| + λv·z, λ|u·z - λu·v| - λv·z).
inline double h_oblique(const Vec& z, const ObliqueParams& p) {
  const double l = p.lambda, uv = dot(p.u, p.v);
  double a = l * std::abs(dot(p.u, z) + l * uv) + l * dot(p.v, z);
  double b = l * std::abs(dot(p.u, z) - l * uv) - l * dot(p.v, z);
  return std::max(a, b);
}

struct RegionInfo {
  std::vector<int> regions;  // ids 1..4
  std::vector<double> values;
};

/// Affine piece of h on region R_id.
inline double h_piece(int id, const Vec& z, double l) {
  switch (id) {
    case 1: return 0.5 * l * z[0] - kSqrt3 / 2 * l * z[1] - 0.5 * l * l;
    case 2: return -0.5 * l * z[0] + kSqrt3 / 2 * l * z[1] - 0.5 * l * l;
    case 3: return 1.5 * l * z[0] + kSqrt3 / 2 * l * z[1] + 0.5 * l * l;
    case 4: return -1.5 * l * z[0] - kSqrt3 / 2 * l * z[1] + 0.5 * l * l;
    default: throw Error("h_piece: region id must be 1..4");
  }
}

/// Closed regions containing z, with the affine piece of h on each.
inline RegionInfo h_region(const Vec& z, const ObliqueParams& p, double tol = 1e-12) {
  const double l = p.lambda;
  // R_1 = {z1 >= λ/2, z2 <= -(z1+λ)/√3}, R_2 = {z1 <= -λ/2, z2 >= (λ-z1)/√3}.
  double r1a = z[0] - l / 2, r1b = -(z[0] + l) / kSqrt3 - z[1];
  double r2a = -l / 2 - z[0], r2b = z[1] - (l - z[0]) / kSqrt3;
  bool in1 = r1a >= -tol && r1b >= -tol, int1 = r1a > tol && r1b > tol;
  bool in2 = r2a >= -tol && r2b >= -tol, int2 = r2a > tol && r2b > tol;
  double side = z[1] + kSqrt3 * z[0];
  bool in3 = side >= -tol && !int1 && !int2;
  bool in4 = side <= tol && !int1 && !int2;
  RegionInfo r;
  const bool in[4] = {in1, in2, in3, in4};
  for (int id = 1; id <= 4; ++id) {
    if (!in[id - 1]) continue;
    r.regions.push_back(id);
    r.values.push_back(h_piece(id, z, l));
  }
  return r;
}

/// h^*(z*) = λ²(t - 1/2) on D_λ, +inf outside.
inline double h_star(const Vec& zs, const ObliqueParams& p) {
  RhombusD d{p.lambda};
  if (!d.contains(zs)) return kInf;
  auto [t, s] = d.decompose(zs);
  (void)s;
  return p.lambda * p.lambda * (std::min(t, 1.0) - 0.5);
}

namespace detail {

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 1) return {0.5 * (a + b)};
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  v.back() = b;
  return v;
}

/// Indicator of the segment {a·dir : |a| <= lambda}, sampled at n points.
inline Marginal segment_indicator(const Vec& dir, double lambda, std::size_t n, std::string name) {
  Samples s;
  s.dim = 2;
  for (double a : linspace(-lambda, lambda, n)) s.add(a * dir, 0.0);
  Marginal m = marginal_from_samples(
      std::move(s),
      [dir, lambda](const Vec& x) {
        double a = dot(dir, x);
        Vec perp = x - a * dir;
        return (norm(perp) <= 1e-9 && std::abs(a) <= lambda + 1e-9) ? 0.0 : kInf;
      },
      [dir, lambda](const Vec& y) { return lambda * std::abs(dot(dir, y)); }, std::move(name));
  m.prox = [dir, lambda](const Vec& x) { return std::clamp(dot(dir, x), -lambda, lambda) * dir; };
  return m;
}

}  // namespace detail

struct Triple {
  Marginal f, g, h;

  std::vector<Marginal> tuple() const { return {f, g, h}; }
};

/// f, g: indicators of I_1, I_2 sampled at segment_samples points; h from
/// its max formula, with h^* exact; h's support is sampled on h_grid.
inline Triple oblique_triple(const ObliqueParams& p, std::size_t segment_samples, const Grid& h_grid) {
  if (h_grid.dim() != 2) throw Error("oblique_triple: h grid must be two-dimensional");
  Triple t;
  t.f = detail::segment_indicator(p.u, p.lambda, segment_samples, "f");
  t.g = detail::segment_indicator(p.v, p.lambda, segment_samples, "g");
  t.h = marginal_from_samples(
      to_samples(sample(h_grid, [&](const Vec& z) { return h_oblique(z, p); })),
      [p](const Vec& z) { return h_oblique(z, p); }, [p](const Vec& zs) { return h_star(zs, p); }, "h");
  return t;
}

/// Finite sample of the contact set: corner pairs (x, y) with z on a
/// region_samples x region_samples lattice of [-R, R]^2 restricted to the
/// matching region, and edge pairs (tλu or tλv at boundary_samples values
/// of t) with z at region_samples points along the matching ray.
inline FiniteGamma gamma_oblique(const ObliqueParams& p, std::size_t boundary_samples, std::size_t region_samples,
                                 double R = 6.5) {
  if (boundary_samples < 1 || region_samples < 1) throw Error("gamma_oblique: sample counts must be >= 1");
  const double l = p.lambda;
  const Vec u = p.u, v = p.v, w = p.w;
  FiniteGamma g;
  g.dim = 2;
  g.source = "gamma_oblique";
  g.eps = 1e-9;

  auto lat = detail::linspace(-R, R, region_samples);
  struct Corner {
    Vec x, y;
    int region;
  };
  const Corner corners[4] = {{l * u, l * v, 3}, {-l * u, l * v, 2}, {-l * u, -l * v, 4}, {l * u, -l * v, 1}};
  for (const auto& c : corners) {
    for (double a : lat) {
      for (double b : lat) {
        Vec z{a, b};
        auto info = h_region(z, p);
        if (std::find(info.regions.begin(), info.regions.end(), c.region) == info.regions.end()) continue;
        g.tuples.push_back(PointTuple({c.x, c.y, z}));
      }
    }
  }

  // Rays: start, direction.
  const Vec d1 = (1.0 / norm(Vec{1.0, -1.0 / kSqrt3})) * Vec{1.0, -1.0 / kSqrt3};
  const Vec d2 = -1.0 * d1;
  struct Edge {
    bool moves_x;  // x = tλu (else y = tλv)
    Vec fixed;
    Vec start, dir;
  };
  const Edge edges[4] = {
      {true, l * v, l * w, {0.0, 1.0}},           // L4 = R2 ∩ R3
      {false, -l * u, l * w, d2},                 // L2 = R2 ∩ R4
      {true, -l * v, -l * w, {0.0, -1.0}},        // L3 = R1 ∩ R4
      {false, l * u, -l * w, d1},                 // L1 = R1 ∩ R3
  };
  auto ts = detail::linspace(-1.0, 1.0, boundary_samples);
  auto rs = detail::linspace(0.0, R * std::sqrt(2.0), region_samples);
  if (region_samples == 1) rs = {0.0};
  for (const auto& e : edges) {
    for (double t : ts) {
      Vec x = e.moves_x ? (t * l) * u : e.fixed;
      Vec y = e.moves_x ? e.fixed : (t * l) * v;
      for (double r : rs) g.tuples.push_back(PointTuple({x, y, e.start + r * e.dir}));
    }
  }
  g.normalize();
  return g;
}

// ---------------------------------------------------------------------------
// Perpendicular segments

struct PerpTriple {
  double lambda = 1.0;
  Triple triple;
};

/// u = e1, v = e2. For finite λ > 0: h(z) = λ(|z1| + |z2|), h^* the indicator
/// of [-λ, λ]^2. λ = 0: f = g = indicator of {0}, h = 0. λ = +inf: f, g are
/// indicators of the axes (supports truncated to [-box, box]) and h the
/// indicator of {0}.
inline PerpTriple perpendicular_triple(double lambda, std::size_t segment_samples, const Grid& h_grid,
                                       double box = 4.0) {
  if (std::isnan(lambda) || lambda < 0.0) throw Error("perpendicular: lambda must be in [0, +inf]");
  if (h_grid.dim() != 2) throw Error("perpendicular: h grid must be two-dimensional");
  PerpTriple r;
  r.lambda = lambda;
  const Vec e1{1.0, 0.0}, e2{0.0, 1.0};
  if (is_inf(lambda)) {
    r.triple.f = detail::segment_indicator(e1, box, segment_samples, "f");
    r.triple.g = detail::segment_indicator(e2, box, segment_samples, "g");
    auto axis_conj = [](Vec dir) {
      return [dir](const Vec& y) { return std::abs(dot(dir, y)) <= 1e-12 ? 0.0 : kInf; };
    };
    r.triple.f.eval = [](const Vec& x) { return std::abs(x[1]) <= 1e-9 ? 0.0 : kInf; };
    r.triple.g.eval = [](const Vec& x) { return std::abs(x[0]) <= 1e-9 ? 0.0 : kInf; };
    r.triple.f.conj = axis_conj(e1);
    r.triple.g.conj = axis_conj(e2);
    r.triple.f.prox = [](const Vec& x) { return Vec{x[0], 0.0}; };
    r.triple.g.prox = [](const Vec& x) { return Vec{0.0, x[1]}; };
    Samples s;
    s.dim = 2;
    s.add({0.0, 0.0}, 0.0);
    r.triple.h = marginal_from_samples(
        s, [](const Vec& z) { return norm(z) <= 1e-12 ? 0.0 : kInf; }, [](const Vec&) { return 0.0; }, "h");
    return r;
  }
  if (lambda == 0.0) {
    Samples s;
    s.dim = 2;
    s.add({0.0, 0.0}, 0.0);
    auto point_ind = [](const Vec& x) { return norm(x) <= 1e-12 ? 0.0 : kInf; };
    r.triple.f = marginal_from_samples(s, point_ind, [](const Vec&) { return 0.0; }, "f");
    r.triple.g = marginal_from_samples(s, point_ind, [](const Vec&) { return 0.0; }, "g");
    r.triple.f.prox = r.triple.g.prox = [](const Vec&) { return Vec{0.0, 0.0}; };
    r.triple.h = marginal_from_samples(to_samples(GridFunction(h_grid, 0.0)), [](const Vec&) { return 0.0; },
                                       point_ind, "h");
    return r;
  }
  r.triple.f = detail::segment_indicator(e1, lambda, segment_samples, "f");
  r.triple.g = detail::segment_indicator(e2, lambda, segment_samples, "g");
  auto h = [lambda](const Vec& z) { return lambda * (std::abs(z[0]) + std::abs(z[1])); };
  r.triple.h = marginal_from_samples(
      to_samples(sample(h_grid, h)), h,
      [lambda](const Vec& y) {
        return (std::abs(y[0]) <= lambda + 1e-12 && std::abs(y[1]) <= lambda + 1e-12) ? 0.0 : kInf;
      },
      "h");
  return r;
}

/// Contact-set sample for the perpendicular triple with finite λ > 0:
/// (a e1, b e2) on a samples x samples lattice of [-λ, λ]^2; the third point
/// z satisfies (a, b) ∈ ∂h(z), so z_k = 0 where the coordinate is interior,
/// and z_k runs over [0, box] or [-box, 0] at ±λ.
inline FiniteGamma gamma_perpendicular(double lambda, std::size_t samples, double box) {
  FiniteGamma g;
  g.dim = 2;
  g.source = "gamma_perpendicular";
  g.eps = 1e-9;
  if (lambda == 0.0) {
    for (double a : detail::linspace(-box, box, samples)) {
      for (double b : detail::linspace(-box, box, samples)) g.tuples.push_back(PointTuple({{0, 0}, {0, 0}, {a, b}}));
    }
    g.normalize();
    return g;
  }
  if (is_inf(lambda)) {
    for (double a : detail::linspace(-box, box, samples)) {
      for (double b : detail::linspace(-box, box, samples)) g.tuples.push_back(PointTuple({{a, 0}, {0, b}, {0, 0}}));
    }
    g.normalize();
    return g;
  }
  auto ab = detail::linspace(-lambda, lambda, samples);
  auto zrange = [&](double a) -> std::vector<double> {
    if (a >= lambda) return detail::linspace(0.0, box, samples);
    if (a <= -lambda) return detail::linspace(-box, 0.0, samples);
    return {0.0};
  };
  for (double a : ab) {
    for (double b : ab) {
      for (double z1 : zrange(a)) {
        for (double z2 : zrange(b)) g.tuples.push_back(PointTuple({{a, 0.0}, {0.0, b}, {z1, z2}}));
      }
    }
  }
  g.normalize();
  return g;
}

// ---------------------------------------------------------------------------
// Full-line supports

struct ImproperVerdict {
  double udotv = 0.5;
  std::vector<double> boxes;
  std::vector<double> values;  // (f ⊕ g)^c(0) on each truncated box
  bool improper = false;
  Report report;
};

/// f, g indicators of the lines through u and v (u = e1, |v| = 1,
/// u·v = udotv), truncated to |a|, |b| <= L and sampled with the endpoints
/// included. Improper iff every value reaches 0.1·(u·v)·L² and the values
/// increase with L.
inline ImproperVerdict improper_probe(double udotv, const std::vector<double>& boxes, std::size_t samples = 201) {
  if (!(udotv > 0.0) || udotv > 1.0) throw Error("improper_probe: u·v must lie in (0, 1]");
  if (boxes.empty()) throw Error("improper_probe: need at least one box");
  for (std::size_t k = 1; k < boxes.size(); ++k) {
    if (!(boxes[k] > boxes[k - 1])) throw Error("improper_probe: boxes must increase");
  }
  ImproperVerdict r;
  r.udotv = udotv;
  r.boxes = boxes;
  r.report.name = "improper_probe";
  const Vec u{1.0, 0.0}, v{udotv, std::sqrt(std::max(0.0, 1.0 - udotv * udotv))};
  bool grows = true;
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    const double L = boxes[k];
    auto pts = detail::linspace(-L, L, std::max<std::size_t>(samples, 2));
    Samples fs, gs;
    fs.dim = gs.dim = 2;
    for (double a : pts) {
      fs.add(a * u, 0.0);
      gs.add(a * v, 0.0);
    }
    std::vector<Samples> parts{fs, gs};
    CConjugate c = c_conjugate_brute(parts, Grid({-1e-3, -1e-3}, {1e-3, 1e-3}, {3, 3}));
    double val = c.f.values[4];  // the centre node, z = 0
    r.values.push_back(val);
    double floor = 0.1 * udotv * L * L;
    grows = grows && val >= floor && (k == 0 || val > r.values[k - 1]);
    char name[32];
    std::snprintf(name, sizeof name, "box%g", L);
    r.report.add(name, val >= floor, val, floor);
  }
  r.improper = grows;
  r.report.add("growth", grows, grows ? 0.0 : 1.0, 0.0);
  return r;
}

// ---------------------------------------------------------------------------
// Non-involutive triple

struct NonInvolutiveConfig {
  double L = 4.0;
  double step = 0.05;
  double min_m = 1e-6;
};

struct NonInvolutive {
  Grid grid;
  GridFunction H1, F1, G1;
  double m = 0.0;
  GridFunction H, F, G;
  Triple triple;
  Report report;
};

/// H_1 = max(|x_1|, |x_2|) + q.
inline double H1_fn(const Vec& x) { return std::max(std::abs(x[0]), std::abs(x[1])) + half_sq(x); }

/// F_1(x) = max over y ∈ {±e_1} of H_1(x + y) - H_1(y).
inline double F1_fn(const Vec& x) {
  return std::max(H1_fn(x + Vec{1.0, 0.0}), H1_fn(x - Vec{1.0, 0.0})) - 1.5;
}

/// Builds F_1 exactly, G_1(y) = max over grid x of H_1(x+y) - F_1(x),
/// m = G_1(0), then f = F_1 - q, g = G_1 - m - q and h = (H_1 - m - q)^*,
/// which is m plus the indicator of the unit l1 ball.
inline NonInvolutive noninvolutive_triple(const NonInvolutiveConfig& cfg = {}) {
  if (cfg.L < 3.0) throw Error("noninvolutive_triple: box half-width must be >= 3");
  const double inv = 1.0 / cfg.step;
  const auto shift = static_cast<std::size_t>(std::llround(inv));
  if (std::abs(inv - static_cast<double>(shift)) > 1e-9) {
    throw Error("noninvolutive_triple: step must divide 1");
  }
  NonInvolutive r;
  r.grid = Grid::span2(-cfg.L, cfg.L, cfg.step);
  const Grid& g = r.grid;
  r.H1 = sample(g, H1_fn);
  r.F1 = sample(g, F1_fn);

  // H_1(x+y) = q(x) + x·y + q(y) + max_v v·(x+y) over v ∈ {±e1, ±e2}, so
  // G_1(y) = q(y) + max_v [v·y + (F_1 - q)^*(y + v)].
  GridFunction fmq = r.F1;
  for (std::size_t k = 0; k < g.size(); ++k) fmq.values[k] -= half_sq(g.node(k));
  const std::size_t n = g.count(0);
  Grid ext({-cfg.L - 1.0, -cfg.L - 1.0}, {cfg.step, cfg.step}, {n + 2 * shift, n + 2 * shift});
  GridFunction cj = conjugate_factorized(fmq, ext);
  std::vector<double> gv(g.size());
  const std::array<std::array<long, 2>, 4> dirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto [i, j] = g.multi_index(k);
    Vec y = g.node(k);
    double best = -kInf;
    for (const auto& d : dirs) {
      auto ei = static_cast<std::size_t>(static_cast<long>(i + shift) + d[0] * static_cast<long>(shift));
      auto ej = static_cast<std::size_t>(static_cast<long>(j + shift) + d[1] * static_cast<long>(shift));
      double vy = static_cast<double>(d[0]) * y[0] + static_cast<double>(d[1]) * y[1];
      best = std::max(best, vy + cj.values[ext.index(ei, ej)]);
    }
    gv[k] = half_sq(y) + best;
  }
  r.G1 = GridFunction(g, std::move(gv));

  const std::size_t mid = n / 2;
  const std::size_t origin = g.index(mid, mid);
  if (norm(g.node(origin)) > 1e-9) throw Error("noninvolutive_triple: grid must contain the origin");
  r.m = r.G1.values[origin];
  if (!(r.m > cfg.min_m)) {
    throw Error("noninvolutive_triple: construction failed, m = " + io::format_double(r.m) + " (grid too coarse?)");
  }
  const double m = r.m;
  r.H = r.H1;
  r.G = r.G1;
  for (double& x : r.H.values) x -= m;
  for (double& x : r.G.values) x -= m;
  r.F = r.F1;

  GridFunction f = r.F, gg = r.G;
  for (std::size_t k = 0; k < g.size(); ++k) {
    f.values[k] -= half_sq(g.node(k));
    gg.values[k] -= half_sq(g.node(k));
  }
  r.triple.f = marginal_from_grid(f, "f");
  r.triple.g = marginal_from_grid(gg, "g");
  auto h_eval = [m](const Vec& z) { return std::abs(z[0]) + std::abs(z[1]) <= 1.0 + 1e-12 ? m : kInf; };
  r.triple.h = marginal_from_samples(to_samples(sample(g, h_eval)), h_eval,
                                     [m](const Vec& y) { return std::max(std::abs(y[0]), std::abs(y[1])) - m; },
                                     "h");

  // Diagnostics.
  Report& rep = r.report;
  rep.name = "noninvolutive_triple";
  rep.add("m_positive", m > cfg.min_m, m, cfg.min_m);
  rep.add_bound("F1_origin", std::abs(r.F1.values[origin]), 1e-12);
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      asym = std::max(asym, std::abs(r.F1.values[g.index(i, j)] - r.F1.values[g.index(i, n - 1 - j)]));
    }
  }
  rep.add_bound("F1_symmetric", asym, 1e-12);
  double ge = std::max(std::abs(r.G1.values[g.index(mid + shift, mid)] - 1.5),
                       std::abs(r.G1.values[g.index(mid - shift, mid)] - 1.5));
  rep.add_bound("G1_at_e1", ge, 1e-9);
  auto fs = check_strong_convexity(r.F1, 1.0, 1e-9);
  auto gs = check_strong_convexity(r.G1, 1.0, 1e-9);
  rep.add("F1_strongly_convex", fs.ok, std::max(0.0, -fs.worst), 1e-9);
  rep.add("G1_strongly_convex", gs.ok, std::max(0.0, -gs.worst), 1e-9);
  return r;
}

struct KEpsilon {
  GridFunction K;
  Report report;
};

/// K = max(H, q - m + eps) with the three checks: `sandwich`
/// (H <= K <= max(H, 0)), `strong_convexity` (λ = 1) and `k_at_origin`
/// (K(0) - H(0) = eps > 0). Does not throw on failing checks.
inline KEpsilon k_epsilon_report(const GridFunction& H, double m, double eps) {
  if (!(eps > 0.0)) throw Error("k_epsilon: eps must be positive");
  const Grid& g = H.grid;
  KEpsilon r;
  r.K = H;
  double sand = 0.0;
  std::string wit;
  for (std::size_t k = 0; k < g.size(); ++k) {
    Vec x = g.node(k);
    r.K.values[k] = std::max(H.values[k], half_sq(x) - m + eps);
    double viol = std::max(H.values[k] - r.K.values[k], r.K.values[k] - std::max(H.values[k], 0.0));
    if (viol > sand) {
      sand = viol;
      wit = witness_point(x, g.dim());
    }
  }
  r.report.name = "k_epsilon";
  r.report.add_bound("sandwich", sand, 1e-12, sand > 1e-12 ? wit : std::string{});
  auto sc = check_strong_convexity(r.K, 1.0, 1e-9);
  r.report.add("strong_convexity", sc.ok, std::max(0.0, -sc.worst), 1e-9,
               sc.ok ? std::string{} : witness_point(sc.witness, g.dim()));
  std::size_t origin = g.size();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (norm(g.node(k)) <= 1e-9) origin = k;
  }
  if (origin == g.size()) throw Error("k_epsilon: grid must contain the origin");
  double gap = r.K.values[origin] - H.values[origin];
  r.report.add("k_at_origin", gap > 0.0 && std::abs(gap - eps) <= 1e-12, std::abs(gap - eps), 1e-12);
  return r;
}

/// As k_epsilon_report, but a failing check is an error.
inline KEpsilon k_epsilon(const GridFunction& H, double m, double eps) {
  KEpsilon r = k_epsilon_report(H, m, eps);
  for (const auto& c : r.report.checks) {
    if (!c.pass) throw Error("k_epsilon: check '" + c.check + "' fails at eps = " + io::format_double(eps));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Reference tuple

/// f_i = (N-1) q for i = 1..N, sampled on grid, with exact conjugate
/// q / (N-1) and prox x / N.
inline std::vector<Marginal> quadratic_tuple(int N, const Grid& grid) {
  if (N < 2) throw Error("quadratic_tuple: N must be >= 2");
  const double a = N - 1.0;
  std::vector<Marginal> t;
  for (int i = 0; i < N; ++i) {
    Marginal m = marginal_from_grid(sample(grid, [a](const Vec& x) { return a * half_sq(x); }),
                                    "f" + std::to_string(i + 1));
    m.eval = [a](const Vec& x) { return a * half_sq(x); };
    m.conj = [a](const Vec& y) { return half_sq(y) / a; };
    m.prox = [N](const Vec& x) { return (1.0 / N) * x; };
    t.push_back(std::move(m));
  }
  return t;
}

}  // namespace mcx

#endif  // MCX_GALLERY_HPP
