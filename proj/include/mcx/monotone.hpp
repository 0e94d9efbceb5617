#ifndef MCX_MONOTONE_HPP
#define MCX_MONOTONE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mcx/contact.hpp"
#include "mcx/core.hpp"
#include "mcx/gallery.hpp"
#include "mcx/multiconj.hpp"
#include "mcx/report.hpp"

namespace mcx {

/// Raised when a search would exceed its combinatorial budget. Never a
/// verdict.
class BudgetError : public Error {
 public:
  using Error::Error;
};

struct MonotonicityQuery {
  const FiniteGamma* gamma = nullptr;
  int n = 2;
  /// Cap on multisets × (n!)^N permutation evaluations.
  double budget = 1e9;
  /// When set, only multisets containing this tuple index are searched.
  std::optional<std::size_t> must_include;
};

struct MonotonicityResult {
  bool monotone = true;
  /// Violating multiset (indices into Γ) and one permutation per marginal.
  std::vector<std::size_t> multiset;
  std::vector<std::vector<int>> perms;
  /// Σ_j c(permuted) - Σ_j c(x^j) at the witness.
  double excess = 0.0;
  std::size_t multisets_checked = 0;
};

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// Number of size-n multisets from m items.
inline double multiset_count(std::size_t m, int n) {
  double c = 1.0;
  for (int k = 1; k <= n; ++k) c = c * static_cast<double>(m + static_cast<std::size_t>(k) - 1) / k;
  return c;
}

inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Checks one multiset against every (σ_1, ..., σ_N) in lexicographic order;
/// fills res and returns false at the first violation.
inline bool check_multiset(const std::vector<const PointTuple*>& pts, const std::vector<std::vector<int>>& perms,
                           std::size_t N, MonotonicityResult& res, double slack) {
  const std::size_t n = pts.size();
  double base = 0.0;
  for (const auto* t : pts) base += cost_c(*t);
  std::vector<std::size_t> sel(N, 0);
  PointTuple row;
  row.x.resize(N);
  for (;;) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < N; ++i) row.x[i] = (*pts[static_cast<std::size_t>(perms[sel[i]][j])])[i];
      total += cost_c(row);
    }
    if (total > base + slack) {
      res.monotone = false;
      res.excess = total - base;
      res.perms.clear();
      for (std::size_t i = 0; i < N; ++i) res.perms.push_back(perms[sel[i]]);
      return false;
    }
    // Odometer with the last marginal fastest, so the order is lexicographic.
    std::size_t i = N;
    while (i > 0 && ++sel[i - 1] == perms.size()) sel[--i] = 0;
    if (i == 0) break;
  }
  return true;
}

}  // namespace detail

/// Every n-element multiset of Γ (lexicographic order of index vectors)
/// against every N-tuple of permutations; slack 1e-9. Multisets of one
/// repeated tuple are skipped (every rearrangement reproduces them).
inline MonotonicityResult is_n_c_monotone(const MonotonicityQuery& q) {
  if (!q.gamma) throw Error("is_n_c_monotone: no gamma");
  if (q.n < 2) throw Error("is_n_c_monotone: order n must be >= 2");
  const FiniteGamma& g = *q.gamma;
  MonotonicityResult res;
  if (g.empty()) return res;
  const std::size_t N = g.tuples[0].size();
  if (q.n > 4 || N > 4) throw BudgetError("is_n_c_monotone: search limited to n <= 4 and N <= 4");
  const double work = detail::multiset_count(g.size(), q.n) * std::pow(detail::factorial(q.n), static_cast<double>(N));
  if (work > q.budget) {
    throw BudgetError("is_n_c_monotone: budget exceeded (" + io::format_double(work) + " > " +
                      io::format_double(q.budget) + ")");
  }
  auto perms = detail::all_permutations(q.n);
  std::vector<std::size_t> idx(static_cast<std::size_t>(q.n), 0);
  std::vector<const PointTuple*> pts(idx.size());
  const std::size_t m = g.size();
  for (;;) {
    bool distinct = idx.front() != idx.back();
    bool wanted = !q.must_include || std::find(idx.begin(), idx.end(), *q.must_include) != idx.end();
    if (distinct && wanted) {
      for (std::size_t k = 0; k < idx.size(); ++k) pts[k] = &g.tuples[idx[k]];
      ++res.multisets_checked;
      if (!detail::check_multiset(pts, perms, N, res, 1e-9)) {
        res.multiset = idx;
        return res;
      }
    }
    // Next non-decreasing index vector.
    std::size_t k = idx.size();
    while (k > 0 && idx[k - 1] == m - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t r = k; r < idx.size(); ++r) idx[r] = idx[k - 1];
  }
  return res;
}

/// True iff Γ ∪ {candidate} is still n-c-monotone for every n <= n_max,
/// that is, the candidate is an admissible extension. Γ itself must be
/// n-c-monotone up to n_max.
inline bool maximality_probe(const FiniteGamma& gamma, const PointTuple& candidate, int n_max, double budget = 1e9) {
  for (int n = 2; n <= n_max; ++n) {
    if (!is_n_c_monotone({&gamma, n, budget, std::nullopt}).monotone) {
      throw Error("maximality_probe: gamma is not " + std::to_string(n) + "-c-monotone");
    }
  }
  FiniteGamma ext = gamma;
  ext.tuples.push_back(candidate);
  ext.normalize();
  auto pos = std::lower_bound(ext.tuples.begin(), ext.tuples.end(), candidate);
  auto at = static_cast<std::size_t>(pos - ext.tuples.begin());
  for (int n = 2; n <= n_max; ++n) {
    if (!is_n_c_monotone({&ext, n, budget, at}).monotone) return false;
  }
  return true;
}

/// `count` tuples of Γ chosen uniformly without replacement.
inline FiniteGamma subsample(const FiniteGamma& g, std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  FiniteGamma out;
  out.dim = g.dim;
  out.eps = g.eps;
  out.source = g.source + "/subsample";
  for (std::size_t k = 0; k < std::min(count, order.size()); ++k) out.tuples.push_back(g.tuples[order[k]]);
  out.normalize();
  return out;
}

struct ConjectureOptions {
  double lambda = 1.0;
  /// Random multisets per order n.
  std::size_t sample_size = 10000;
  int n_max = 3;
  std::uint64_t seed = 0;
  std::size_t boundary_samples = 50;
  std::size_t region_samples = 100;
};

/// Γ from the oblique example plus the tuple (0,0,0). For each n in
/// 2..n_max, sample_size random multisets made of (0,0,0) and n-1 random
/// tuples of Γ are checked against all permutation tuples. Subsets without
/// the origin tuple are skipped: Γ alone is a contact set and cannot
/// violate. The check `order<n>` records the largest excess found.
inline Report conjecture_probe(const ConjectureOptions& opt) {
  if (opt.n_max < 2 || opt.n_max > 4) throw Error("conjecture_probe: n_max must be in 2..4");
  Report rep;
  rep.name = "conjecture_probe";
  rep.echo("lambda", io::format_double(opt.lambda));
  rep.echo("sample_size", std::to_string(opt.sample_size));
  rep.echo("seed", std::to_string(opt.seed));
  FiniteGamma g = gamma_oblique(ObliqueParams(opt.lambda), opt.boundary_samples, opt.region_samples);
  const PointTuple zero({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  for (int n = 2; n <= opt.n_max; ++n) {
    auto perms = detail::all_permutations(n);
    double worst = -kInf;
    std::string wit;
    std::size_t violations = 0;
    for (std::size_t s = 0; s < opt.sample_size; ++s) {
      std::vector<const PointTuple*> pts{&zero};
      for (int k = 1; k < n; ++k) pts.push_back(&g.tuples[pick(rng)]);
      MonotonicityResult r;
      if (!detail::check_multiset(pts, perms, 3, r, 1e-9)) {
        ++violations;
        if (r.excess > worst) {
          worst = r.excess;
          wit = "sample" + std::to_string(s);
          for (const auto* t : pts) {
            wit += " (";
            for (std::size_t i = 0; i < t->size(); ++i) wit += (i ? ";" : "") + io::format_point((*t)[i], 2);
            wit += ")";
          }
          for (const auto& p : r.perms) {
            wit += " [";
            for (int k : p) wit += std::to_string(k);
            wit += "]";
          }
        }
      }
    }
    const bool ok = violations == 0;
    rep.add("order" + std::to_string(n), ok, ok ? 0.0 : worst, 1e-9, wit);
    rep.echo("checked_order" + std::to_string(n), std::to_string(opt.sample_size));
    rep.echo("violations_order" + std::to_string(n), std::to_string(violations));
  }
  return rep;
}

}  // namespace mcx

#endif  // MCX_MONOTONE_HPP
