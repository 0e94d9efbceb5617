#ifndef MCX_DESCRIPTORS_HPP
#define MCX_DESCRIPTORS_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>

#include "mcx/core.hpp"
#include "mcx/gallery.hpp"
#include "mcx/io.hpp"

namespace mcx {

/// `family` or `family:key=value,key=value`.
struct Descriptor {
  std::string family;
  std::map<std::string, std::string> params;

  bool has(const std::string& k) const { return params.count(k) != 0; }

  double num(const std::string& k, double fallback) const {
    auto it = params.find(k);
    return it == params.end() ? fallback : io::parse_double(it->second);
  }

  std::string text() const {
    std::string s = family;
    char sep = ':';
    for (const auto& [k, v] : params) {
      s += sep + k + "=" + v;
      sep = ',';
    }
    return s;
  }
};

inline Descriptor parse_descriptor(std::string_view s) {
  Descriptor d;
  auto colon = s.find(':');
  d.family = std::string(s.substr(0, colon));
  if (d.family.empty()) throw Error("empty descriptor");
  if (colon == std::string_view::npos) return d;
  for (auto kv : io::split(s.substr(colon + 1), ',')) {
    auto eq = kv.find('=');
    if (eq == std::string_view::npos || eq == 0) throw Error("descriptor parameter '" + std::string(kv) + "' is not key=value");
    d.params[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
  }
  return d;
}

/// Random piecewise-linear convex function on a 1D grid: `kinks` breakpoints
/// at distinct interior nodes, slopes drawn from [-slope, slope] and rounded
/// to multiples of `quantum` (no rounding when quantum is 0), a random value
/// in [-1, 1] at the left end. With quantum a multiple of the grid step the conjugate
/// kinks fall on dual grid nodes.
struct RandomPL {
  std::size_t kinks = 8;
  double slope = 4.0;
  double quantum = 0.0;
  std::uint64_t seed = 0;
};

inline GridFunction random_pl_convex(const Grid& grid, const RandomPL& opt) {
  if (grid.dim() != 1) throw Error("random_pl_convex: grid must be one-dimensional");
  const std::size_t n = grid.count(0);
  if (opt.kinks + 2 > n) throw Error("random_pl_convex: too many kinks for the grid");
  if (!(opt.slope > 0.0) || opt.quantum < 0.0) throw Error("random_pl_convex: need slope > 0 and quantum >= 0");
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> node(1, n - 2);
  std::uniform_real_distribution<double> sl(-opt.slope, opt.slope);
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  std::set<std::size_t> at;
  while (at.size() < opt.kinks) at.insert(node(rng));
  std::vector<double> slopes(opt.kinks + 1);
  for (double& s : slopes) {
    s = sl(rng);
    if (opt.quantum > 0.0) s = opt.quantum * std::round(s / opt.quantum);
  }
  std::sort(slopes.begin(), slopes.end());
  std::vector<double> v(n);
  v[0] = off(rng);
  auto kink = at.begin();
  std::size_t seg = 0;
  for (std::size_t k = 1; k < n; ++k) {
    v[k] = v[k - 1] + slopes[seg] * grid.step(0);
    if (kink != at.end() && *kink == k) {
      ++kink;
      ++seg;
    }
  }
  return GridFunction(grid, std::move(v));
}

/// Pointwise evaluator for an analytic family. Known families:
///   quad[:scale=s]          s*q
///   abs[:scale=s]           s*|x| (Euclidean norm in 2D)
///   linf, l1                max-norm, l1-norm
///   segment[:lambda,ux,uy]  indicator of {t*lambda*u : |t| <= 1}, u normalized
///   oblique-h[:lambda]      closed-form h of the oblique example
///   oblique-hstar[:lambda]  its conjugate
///   noninv-H1, noninv-F1    building blocks of the non-involutive example
inline std::function<double(const Vec&)> analytic_fn(const Descriptor& d) {
  const std::string& f = d.family;
  if (f == "quad") {
    double s = d.num("scale", 1.0);
    return [s](const Vec& x) { return s * half_sq(x); };
  }
  if (f == "abs") {
    double s = d.num("scale", 1.0);
    return [s](const Vec& x) { return s * norm(x); };
  }
  if (f == "linf") return [](const Vec& x) { return std::max(std::abs(x[0]), std::abs(x[1])); };
  if (f == "l1") return [](const Vec& x) { return std::abs(x[0]) + std::abs(x[1]); };
  if (f == "segment") {
    double lam = d.num("lambda", 1.0);
    Vec u{d.num("ux", 1.0), d.num("uy", 0.0)};
    double nu = norm(u);
    if (!(nu > 0.0) || !(lam >= 0.0) || !std::isfinite(lam)) throw Error("segment: need lambda >= 0 and u != 0");
    u = (1.0 / nu) * u;
    return [lam, u](const Vec& x) {
      double along = dot(x, u);
      Vec off = x - along * u;
      double tol = 1e-9 * std::max(1.0, lam);
      return (norm(off) <= tol && std::abs(along) <= lam + tol) ? 0.0 : kInf;
    };
  }
  if (f == "oblique-h") {
    ObliqueParams p(d.num("lambda", 1.0));
    return [p](const Vec& x) { return h_oblique(x, p); };
  }
  if (f == "oblique-hstar") {
    ObliqueParams p(d.num("lambda", 1.0));
    return [p](const Vec& x) { return h_star(x, p); };
  }
  if (f == "noninv-H1") return [](const Vec& x) { return H1_fn(x); };
  if (f == "noninv-F1") return [](const Vec& x) { return F1_fn(x); };
  throw Error("unknown descriptor '" + d.text() + "'");
}

///   randpl[:seed,kinks,slope,quantum]  random_pl_convex (1D grids only)
inline GridFunction sample_analytic(const Descriptor& d, const Grid& grid) {
  if (d.family == "randpl") {
    RandomPL o;
    o.seed = static_cast<std::uint64_t>(d.num("seed", 0.0));
    o.kinks = static_cast<std::size_t>(d.num("kinks", 8.0));
    o.slope = d.num("slope", 4.0);
    o.quantum = d.num("quantum", 0.0);
    return random_pl_convex(grid, o);
  }
  return sample(grid, analytic_fn(d));
}

inline GridFunction sample_analytic(std::string_view desc, const Grid& grid) {
  return sample_analytic(parse_descriptor(desc), grid);
}

/// `a,b,step` for 1D; `a,b,step;a,b,step` for 2D.
inline Grid parse_grid(std::string_view s) {
  auto axes = io::split(s, ';');
  if (axes.size() > 2) throw Error("grid: at most two axes");
  std::array<std::array<double, 3>, 2> ax{};
  for (std::size_t a = 0; a < axes.size(); ++a) {
    auto v = io::parse_list(axes[a]);
    if (v.size() != 3) throw Error("grid axis '" + std::string(axes[a]) + "' must be a,b,step");
    if (!(v[1] > v[0])) throw Error("grid axis needs a < b");
    ax[a] = {v[0], v[1], v[2]};
  }
  auto count = [](const std::array<double, 3>& v) {
    if (!(v[2] > 0.0)) throw Error("grid step must be > 0");
    return static_cast<std::size_t>(std::llround((v[1] - v[0]) / v[2])) + 1;
  };
  if (axes.size() == 1) return Grid(ax[0][0], ax[0][2], count(ax[0]));
  return Grid({ax[0][0], ax[1][0]}, {ax[0][2], ax[1][2]}, {count(ax[0]), count(ax[1])});
}

inline std::string format_grid(const Grid& g) {
  std::string s;
  for (int a = 0; a < g.dim(); ++a) {
    if (a) s += ";";
    s += io::format_double(g.lo(a)) + "," + io::format_double(g.hi(a)) + "," + io::format_double(g.step(a));
  }
  return s;
}

/// A function argument: an existing file is read as a grid dump, anything
/// else is a descriptor sampled on `grid`.
inline GridFunction resolve_function(const std::string& arg, const std::optional<Grid>& grid) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return load_grid_function(arg);
  if (!grid) throw Error("descriptor '" + arg + "' needs --grid");
  return sample_analytic(arg, *grid);
}

}  // namespace mcx

#endif  // MCX_DESCRIPTORS_HPP
