#ifndef MCX_CONTACT_HPP
#define MCX_CONTACT_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mcx/core.hpp"
#include "mcx/io.hpp"
#include "mcx/legendre.hpp"
#include "mcx/multiconj.hpp"
#include "mcx/report.hpp"
#include "mcx/transforms.hpp"

namespace mcx {

/// Finite sample of a contact set, stored sorted.
struct FiniteGamma {
  int dim = 1;
  std::vector<PointTuple> tuples;
  std::string source;
  double eps = 0.0;

  std::size_t size() const { return tuples.size(); }
  bool empty() const { return tuples.empty(); }

  void normalize() {
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  }
};

/// Tuples of the support product with Σ f_i(x_i) within eps·max(1,|c|) of
/// c(x). A tuple below c by more than that slack means the functions are
/// not a valid potential tuple and raises an error naming the tuple.
inline FiniteGamma contact_set(const std::vector<Marginal>& fs, double eps = 1e-9) {
  if (fs.size() < 2) throw Error("contact_set: need N >= 2");
  FiniteGamma g;
  g.dim = fs[0].dim();
  g.eps = eps;
  g.source = "contact_set";
  for (const auto& f : fs) {
    if (f.dim() != g.dim) throw Error("contact_set: dimension mismatch");
    if (f.support.size() == 0) throw Error("contact_set: marginal '" + f.name + "' is improper");
  }
  const std::size_t n = fs.size();
  std::vector<std::size_t> idx(n, 0);
  PointTuple t;
  t.x.resize(n);
  for (;;) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      t.x[i] = fs[i].support.points[idx[i]];
      sum += fs[i].support.values[idx[i]];
    }
    double c = cost_c(t);
    double slack = eps * std::max(1.0, std::abs(c));
    if (sum - c < -slack) {
      std::string w;
      for (std::size_t i = 0; i < n; ++i) w += (i ? ";" : "") + io::format_point(t.x[i], g.dim);
      throw Error("contact_set: lower bound violated at " + w);
    }
    if (sum - c <= slack) g.tuples.push_back(t);
    std::size_t i = 0;
    while (i < n && ++idx[i] == fs[i].support.size()) idx[i++] = 0;
    if (i == n) break;
  }
  g.normalize();
  return g;
}

namespace detail {

inline void sort_unique(std::vector<Vec>& v, double tol) {
  std::sort(v.begin(), v.end());
  auto close = [tol](const Vec& a, const Vec& b) {
    return std::abs(a[0] - b[0]) <= tol && std::abs(a[1] - b[1]) <= tol;
  };
  v.erase(std::unique(v.begin(), v.end(), close), v.end());
}

}  // namespace detail

/// Sums Σ_{i≠i0} x_i over tuples whose i0-th point (1-based) lies within
/// radius of x.
inline std::vector<Vec> gamma_section(const FiniteGamma& g, std::size_t i0, const Vec& x, double radius) {
  std::vector<Vec> out;
  for (const auto& t : g.tuples) {
    if (i0 < 1 || i0 > t.size()) throw Error("gamma_section: index out of range");
    if (norm(t[i0 - 1] - x) > radius) continue;
    out.push_back(t.sum() - t[i0 - 1]);
  }
  detail::sort_unique(out, 1e-12);
  return out;
}

struct SumSet {
  int dim = 1;
  std::vector<Vec> sums;
  std::optional<Grid> probe;
  std::vector<bool> covered;

  /// Coverage bitmap as a 0/1 grid function.
  GridFunction bitmap() const {
    if (!probe) throw Error("SumSet: no coverage bitmap built");
    GridFunction b(*probe, 0.0);
    for (std::size_t k = 0; k < b.size(); ++k) b.values[k] = covered[k] ? 1.0 : 0.0;
    return b;
  }
};

/// Marks every probe node within 0.75 probe steps of some sum.
inline void build_coverage(SumSet& s, const Grid& probe) {
  if (probe.dim() != s.dim) throw Error("sum_set: probe dimension mismatch");
  s.probe = probe;
  s.covered.assign(probe.size(), false);
  const double r = 0.75 * probe.min_step();
  for (const Vec& p : s.sums) {
    std::array<std::size_t, 2> lo{0, 0}, hi{0, 0};
    bool any = true;
    for (int a = 0; a < s.dim; ++a) {
      double u0 = std::ceil((p[a] - r - probe.lo(a)) / probe.step(a) - 1e-9);
      double u1 = std::floor((p[a] + r - probe.lo(a)) / probe.step(a) + 1e-9);
      u0 = std::max(u0, 0.0);
      u1 = std::min(u1, static_cast<double>(probe.count(a) - 1));
      if (u0 > u1) {
        any = false;
        break;
      }
      lo[a] = static_cast<std::size_t>(u0);
      hi[a] = static_cast<std::size_t>(u1);
    }
    if (!any) continue;
    for (std::size_t i = lo[0]; i <= hi[0]; ++i) {
      for (std::size_t j = lo[1]; j <= hi[1]; ++j) {
        std::size_t k = probe.index(i, j);
        if (!s.covered[k] && norm(probe.node(k) - p) <= r + 1e-12) s.covered[k] = true;
      }
    }
  }
}

/// Deduplicated coordinate sums of Γ, with an optional coverage bitmap.
inline SumSet sum_set(const FiniteGamma& g, const std::optional<Grid>& probe = std::nullopt) {
  SumSet s;
  s.dim = g.dim;
  s.sums.reserve(g.size());
  for (const auto& t : g.tuples) s.sums.push_back(t.sum());
  detail::sort_unique(s.sums, 1e-12);
  if (probe) build_coverage(s, *probe);
  return s;
}

/// Uncovered probe nodes in row-major order.
inline std::vector<Vec> hole_report(const SumSet& s, const Grid& probe) {
  const SumSet* use = &s;
  SumSet tmp;
  if (!s.probe || !(*s.probe == probe)) {
    tmp = s;
    build_coverage(tmp, probe);
    use = &tmp;
  }
  std::vector<Vec> holes;
  for (std::size_t k = 0; k < probe.size(); ++k) {
    if (!use->covered[k]) holes.push_back(probe.node(k));
  }
  return holes;
}

struct PartitionOptions {
  /// Grid on which each f_i^* is sampled for its envelope.
  Grid conj_grid;
  double prox_tol = 1e-2;
  double envelope_tol = 5e-3;
};

/// At each sample x: |Σ prox_{f_i}(x) - x| (`prox_sum`) and
/// |Σ e_{f_i^*}(x) - q(x)| (`envelope_sum`). Exact prox maps and conjugates
/// are used when a marginal carries them; otherwise both come from the
/// support samples.
inline Report verify_partition_identities(const std::vector<Marginal>& fs, const std::vector<Vec>& xs,
                                          const PartitionOptions& opt) {
  if (fs.empty()) throw Error("verify_partition_identities: empty tuple");
  const int d = fs[0].dim();
  std::vector<Samples> conj;
  for (const auto& f : fs) {
    if (f.dim() != d || opt.conj_grid.dim() != d) throw Error("verify_partition_identities: dimension mismatch");
    GridFunction c = f.conj ? sample(opt.conj_grid, f.conj) : conjugate_scan(f.support, opt.conj_grid);
    if (!is_proper(c)) throw Error("verify_partition_identities: conjugate of '" + f.name + "' is +inf on the grid");
    conj.push_back(to_samples(c));
  }
  Report rep;
  rep.name = "partition_identities";
  double wp = 0.0, we = 0.0;
  std::string witp, wite;
  for (const Vec& x : xs) {
    Vec ps{0.0, 0.0};
    double es = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      ps = ps + (fs[i].prox ? fs[i].prox(x) : prox(fs[i].support, x));
      es += envelope_at(conj[i], x);
    }
    double dp = norm(ps - x), de = std::abs(es - half_sq(x));
    if (dp > wp) {
      wp = dp;
      witp = witness_point(x, d);
    }
    if (de > we) {
      we = de;
      wite = witness_point(x, d);
    }
  }
  rep.add_bound("prox_sum", wp, opt.prox_tol, wp > opt.prox_tol ? witp : std::string{});
  rep.add_bound("envelope_sum", we, opt.envelope_tol, we > opt.envelope_tol ? wite : std::string{});
  return rep;
}

struct SubdifferentialOptions {
  /// Slopes at which ∂f_i is sampled for the reverse inclusion.
  std::vector<Vec> slopes;
  /// Matching radius for (x_i, s_i) pairs.
  double radius = 1e-6;
  double eps = 1e-6;
};

/// Γ_i against ∂f_i for slot i (1-based). `inclusion`: every tuple obeys
/// f_i(x_i) + f_i^*(s_i) = <x_i,s_i> with s_i the sum of the other points.
/// `surjectivity`: for each sampled slope s, some tuple pairs a maximizer x
/// of <x,s> - f_i(x) with s (within radius).
inline Report subdifferential_graph_check(const std::vector<Marginal>& fs, const FiniteGamma& g,
                                          std::size_t i, const SubdifferentialOptions& opt) {
  if (i < 1 || i > fs.size()) throw Error("subdifferential_graph_check: index out of range");
  const Marginal& f = fs[i - 1];
  const int d = f.dim();
  auto fstar = [&](const Vec& s) { return f.conj ? f.conj(s) : conjugate_at(f.support, s); };
  Report rep;
  rep.name = "subdifferential_graph";

  double worst = 0.0;
  std::string wit;
  std::vector<std::pair<Vec, Vec>> pairs;
  for (const auto& t : g.tuples) {
    if (t.size() != fs.size()) throw Error("subdifferential_graph_check: tuple length mismatch");
    const Vec& x = t[i - 1];
    Vec s = t.sum() - x;
    pairs.emplace_back(x, s);
    double dev = f(x) + fstar(s) - dot(x, s);
    dev = is_inf(dev) ? kInf : std::abs(dev);
    if (dev > worst) {
      worst = dev;
      wit = witness_point(x, d);
    }
  }
  rep.add_bound("inclusion", worst, opt.eps, worst > opt.eps ? wit : std::string{});

  std::size_t missing = 0;
  std::string mwit;
  for (const Vec& s : opt.slopes) {
    double best = -kInf;
    for (std::size_t k = 0; k < f.support.size(); ++k) {
      best = std::max(best, dot(f.support.points[k], s) - f.support.values[k]);
    }
    bool found = false;
    for (const auto& [x, sg] : pairs) {
      if (norm(sg - s) > opt.radius) continue;
      if (std::abs(f(x) + best - dot(x, s)) <= opt.eps * std::max(1.0, std::abs(best))) {
        found = true;
        break;
      }
    }
    if (!found && missing++ == 0) mwit = witness_point(s, d);
  }
  rep.add("surjectivity", missing == 0, static_cast<double>(missing), 0.0, mwit);
  return rep;
}

/// One tuple per line, points separated by ';', coordinates by ','.
inline void write_gamma(std::ostream& os, const FiniteGamma& g) {
  for (const auto& t : g.tuples) {
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ";" : "") << io::format_point(t[i], g.dim);
    os << "\n";
  }
}

inline FiniteGamma read_gamma(std::istream& is) {
  FiniteGamma g;
  g.source = "file";
  std::string line;
  bool first = true;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    PointTuple t;
    for (auto tok : io::split(line, ';')) {
      int d = 0;
      t.x.push_back(io::parse_point(tok, &d));
      if (first) {
        g.dim = d;
        first = false;
      } else if (d != g.dim) {
        throw Error("gamma file: mixed point dimensions");
      }
    }
    if (n == 0) n = t.size();
    if (t.size() != n || n < 2) throw Error("gamma file: inconsistent tuple length");
    g.tuples.push_back(std::move(t));
  }
  g.normalize();
  return g;
}

inline void save_gamma(const std::string& path, const FiniteGamma& g) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_gamma(os, g);
}

inline FiniteGamma load_gamma(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "'");
  return read_gamma(is);
}

}  // namespace mcx

#endif  // MCX_CONTACT_HPP
