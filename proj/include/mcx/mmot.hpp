#ifndef MCX_MMOT_HPP
#define MCX_MMOT_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mcx/contact.hpp"
#include "mcx/core.hpp"
#include "mcx/io.hpp"
#include "mcx/multiconj.hpp"
#include "mcx/report.hpp"

namespace mcx {

struct DiscreteMarginal {
  int dim = 1;
  std::vector<Vec> points;
  std::vector<double> weights;

  DiscreteMarginal() = default;
  DiscreteMarginal(int d, std::vector<Vec> pts, std::vector<double> w)
      : dim(d), points(std::move(pts)), weights(std::move(w)) {
    if (points.empty() || points.size() != weights.size()) throw Error("marginal: need one weight per point");
    double s = 0.0;
    for (double x : weights) {
      if (!(x > 0.0)) throw Error("marginal: weights must be positive");
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-12) throw Error("marginal: weights must sum to 1");
  }

  static DiscreteMarginal uniform(int d, std::vector<Vec> pts) {
    std::vector<double> w(pts.size(), 1.0 / static_cast<double>(pts.size()));
    return DiscreteMarginal(d, std::move(pts), std::move(w));
  }

  std::size_t size() const { return points.size(); }
};

struct TransportPlan {
  int dim = 1;
  std::vector<std::pair<PointTuple, double>> atoms;

  double value() const {
    double v = 0.0;
    for (const auto& [t, m] : atoms) v += m * cost_c(t);
    return v;
  }

  /// Largest |pushforward mass - weight| over all marginals and points.
  double marginal_residual(const std::vector<DiscreteMarginal>& ms) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      for (std::size_t k = 0; k < ms[i].size(); ++k) {
        double mass = 0.0;
        for (const auto& [t, m] : atoms) {
          if (t[i] == ms[i].points[k]) mass += m;
        }
        worst = std::max(worst, std::abs(mass - ms[i].weights[k]));
      }
    }
    return worst;
  }
};

enum class Direction { maximize, minimize };

struct OptimalPlan {
  TransportPlan plan;
  double value = 0.0;
  Direction direction = Direction::maximize;
};

/// Monge enumeration for uniform marginals of equal size k: the first
/// marginal stays in order and every other one runs over all k!
/// permutations. Ties go to the first assignment in lexicographic order.
inline OptimalPlan brute_force_optimal(const std::vector<DiscreteMarginal>& ms, Direction dir = Direction::maximize) {
  if (ms.size() < 2) throw Error("brute_force_optimal: need N >= 2 marginals");
  const std::size_t k = ms[0].size();
  for (const auto& m : ms) {
    if (m.size() != k || m.dim != ms[0].dim) throw Error("brute_force_optimal: marginals must share size and dimension");
    for (double w : m.weights) {
      if (std::abs(w - 1.0 / static_cast<double>(k)) > 1e-12) {
        throw Error("brute_force_optimal: unsupported, only uniform marginals (no LP solver)");
      }
    }
  }
  if (k > 6 || ms.size() > 3) throw Error("brute_force_optimal: unsupported size (k <= 6, N <= 3)");
  const std::size_t N = ms.size();
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(k);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  std::vector<std::size_t> sel(N - 1, 0), best_sel;
  double best = 0.0;
  bool have = false;
  PointTuple t;
  t.x.resize(N);
  for (;;) {
    double v = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      t.x[0] = ms[0].points[j];
      for (std::size_t i = 1; i < N; ++i) t.x[i] = ms[i].points[perms[sel[i - 1]][j]];
      v += cost_c(t);
    }
    v /= static_cast<double>(k);
    bool better = !have || (dir == Direction::maximize ? v > best : v < best);
    if (better) {
      best = v;
      best_sel = sel;
      have = true;
    }
    std::size_t i = sel.size();
    while (i > 0 && ++sel[i - 1] == perms.size()) sel[--i] = 0;
    if (i == 0) break;
  }
  OptimalPlan r;
  r.value = best;
  r.direction = dir;
  r.plan.dim = ms[0].dim;
  for (std::size_t j = 0; j < k; ++j) {
    PointTuple a;
    a.x.push_back(ms[0].points[j]);
    for (std::size_t i = 1; i < N; ++i) a.x.push_back(ms[i].points[perms[best_sel[i - 1]][j]]);
    r.plan.atoms.emplace_back(std::move(a), 1.0 / static_cast<double>(k));
  }
  return r;
}

namespace detail {

/// Σ f_i(x_i) >= c(x) - tol on the product of the marginal supports.
inline void require_feasible(const std::vector<Marginal>& fs, const std::vector<DiscreteMarginal>& ms, double tol) {
  if (fs.size() != ms.size()) throw Error("potentials: one potential per marginal");
  std::vector<std::size_t> idx(ms.size(), 0);
  PointTuple t;
  t.x.resize(ms.size());
  for (;;) {
    double s = 0.0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      t.x[i] = ms[i].points[idx[i]];
      s += fs[i](t.x[i]);
    }
    if (s < cost_c(t) - tol) {
      std::string w;
      for (std::size_t i = 0; i < t.size(); ++i) w += (i ? ";" : "") + io::format_point(t[i], ms[0].dim);
      throw Error("potentials infeasible at " + w);
    }
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == ms[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
}

}  // namespace detail

/// Σ_i ∫ f_i dμ_i - ∫ c dπ >= -1e-9 for potentials with Σ f_i >= c. The gap
/// is the record's deviation.
inline Report weak_duality_check(const std::vector<Marginal>& fs, const std::vector<DiscreteMarginal>& ms,
                                 const TransportPlan& plan) {
  detail::require_feasible(fs, ms, 1e-9);
  double dual = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t k = 0; k < ms[i].size(); ++k) dual += ms[i].weights[k] * fs[i](ms[i].points[k]);
  }
  double gap = dual - plan.value();
  Report rep;
  rep.name = "weak_duality";
  rep.echo("orientation", "maximize: potentials dominate the cost");
  rep.add("gap_nonnegative", gap >= -1e-9, gap, 1e-9);
  rep.add_bound("marginals", plan.marginal_residual(ms), 1e-9);
  return rep;
}

/// Every atom with positive mass must satisfy |Σ f_i(x_i) - c(x)| <= eps;
/// each violation gets its own failing record `atom<k>` with the slack.
inline Report concentration_check(const TransportPlan& plan, const std::vector<Marginal>& fs, double eps = 1e-9) {
  Report rep;
  rep.name = "concentration";
  std::size_t bad = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < plan.atoms.size(); ++k) {
    const auto& [t, m] = plan.atoms[k];
    if (!(m > 0.0)) continue;
    if (t.size() != fs.size()) throw Error("concentration_check: tuple length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += fs[i](t[i]);
    double slack = std::abs(s - cost_c(t));
    worst = std::max(worst, slack);
    if (slack > eps) {
      ++bad;
      std::string w;
      for (std::size_t i = 0; i < t.size(); ++i) w += (i ? ";" : "") + io::format_point(t[i], plan.dim);
      rep.add("atom" + std::to_string(k), false, slack, eps, w);
    }
  }
  rep.add("all_atoms", bad == 0, worst, eps);
  return rep;
}

/// Marginal file: `x1[,x2];weight` per line.
inline DiscreteMarginal read_marginal(std::istream& is) {
  std::vector<Vec> pts;
  std::vector<double> w;
  int dim = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto parts = io::split(line, ';');
    if (parts.size() != 2) throw Error("marginal file: expected 'point;weight'");
    int d = 0;
    pts.push_back(io::parse_point(parts[0], &d));
    if (dim == 0) dim = d;
    if (d != dim) throw Error("marginal file: mixed dimensions");
    w.push_back(io::parse_double(parts[1]));
  }
  if (pts.empty()) throw Error("marginal file: no points");
  return DiscreteMarginal(dim, std::move(pts), std::move(w));
}

inline DiscreteMarginal load_marginal(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "'");
  return read_marginal(is);
}

/// Plan output: the tuple format with a trailing `;mass`.
inline void write_plan(std::ostream& os, const TransportPlan& plan) {
  for (const auto& [t, m] : plan.atoms) {
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ";" : "") << io::format_point(t[i], plan.dim);
    os << ";" << io::format_double(m) << "\n";
  }
}

}  // namespace mcx

#endif  // MCX_MMOT_HPP
