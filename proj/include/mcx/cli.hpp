#ifndef MCX_CLI_HPP
#define MCX_CLI_HPP

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mcx/acceptance.hpp"
#include "mcx/contact.hpp"
#include "mcx/core.hpp"
#include "mcx/descriptors.hpp"
#include "mcx/gallery.hpp"
#include "mcx/io.hpp"
#include "mcx/mmot.hpp"
#include "mcx/monotone.hpp"
#include "mcx/multiconj.hpp"
#include "mcx/multiconj_checks.hpp"
#include "mcx/report.hpp"
#include "mcx/transforms.hpp"

namespace mcx::cli {

enum Exit : int { kPass = 0, kFail = 1, kUsage = 2 };

namespace detail {

struct Opts {
  std::string grid, dual, out, probe, at, emit, emit_gamma, method = "fast", direction = "max";
  std::vector<std::string> funcs;
  std::string gamma_path, gallery_name;
  double tol_equal = 5e-3, tol_contact = 1e-9, budget = 1e9, lambda = 1.0, margin = 0.0;
  std::uint64_t seed = 0;
  int order = 2, n_max = 3;
  std::size_t samples = 10000, max_holes = 0;
  bool quad_dual = false;
};

inline std::optional<Grid> opt_grid(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_grid(s);
}

inline Grid need_grid(const std::string& s, const char* flag) {
  if (s.empty()) throw Error(std::string("missing ") + flag);
  return parse_grid(s);
}

/// Report to --emit when given, else to out; returns the exit verdict.
inline int finish(const Report& r, const Opts& o, std::ostream& out) {
  if (o.emit.empty()) {
    emit_report(out, r);
  } else {
    emit_report(o.emit, r);
  }
  return r.pass() ? kPass : kFail;
}

inline void put_function(const GridFunction& f, const Opts& o, std::ostream& out) {
  if (o.emit.empty()) {
    write_grid_function(out, f);
  } else {
    save_grid_function(o.emit, f);
  }
}

inline std::vector<GridFunction> load_all(const Opts& o) {
  auto g = opt_grid(o.grid);
  std::vector<GridFunction> fs;
  for (const auto& a : o.funcs) fs.push_back(resolve_function(a, g));
  return fs;
}

inline void require_proper(const std::vector<GridFunction>& fs, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!is_proper(fs[i])) throw Error("input '" + names[i] + "' is improper (+inf everywhere on its grid)");
  }
}

inline std::vector<Marginal> as_marginals(const std::vector<GridFunction>& fs, const std::vector<std::string>& names) {
  std::vector<Marginal> ms;
  for (std::size_t i = 0; i < fs.size(); ++i) ms.push_back(marginal_from_grid(fs[i], names[i]));
  return ms;
}

inline int run_conjugate(const Opts& o, std::ostream& out) {
  auto fs = load_all(o);
  require_proper(fs, o.funcs);
  ConjugateMethod m = ConjugateMethod::fast;
  if (o.method == "scan" || o.method == "brute") {
    m = ConjugateMethod::brute;
  } else if (o.method != "fast") {
    throw Error("unknown --method '" + o.method + "'");
  }
  Grid dual = o.dual.empty() ? fs[0].grid : parse_grid(o.dual);
  put_function(conjugate(fs[0], dual, m), o, out);
  return kPass;
}

inline int run_envelope(const Opts& o, std::ostream& out) {
  auto fs = load_all(o);
  require_proper(fs, o.funcs);
  Grid target = o.out.empty() ? fs[0].grid : parse_grid(o.out);
  put_function(moreau_envelope(fs[0], target), o, out);
  return kPass;
}

inline int run_prox(const Opts& o, std::ostream& out) {
  auto fs = load_all(o);
  require_proper(fs, o.funcs);
  if (o.at.empty()) throw Error("missing --at");
  int d = 1;
  Vec x = io::parse_point(o.at, &d);
  if (d != fs[0].grid.dim()) throw Error("--at dimension does not match the function");
  out << io::format_point(prox(fs[0], x), d) << '\n';
  return kPass;
}

inline int run_cconj(const Opts& o, std::ostream& out) {
  auto fs = load_all(o);
  require_proper(fs, o.funcs);
  Grid target = need_grid(o.out, "--out");
  CConjugate c;
  if (o.method == "brute") {
    c = c_conjugate_brute(fs, target);
  } else if (o.method == "fast") {
    c = c_conjugate_fast(fs, target);
  } else {
    throw Error("unknown --method '" + o.method + "' (brute|fast)");
  }
  if (c.improper) throw Error("c-conjugate is improper: no finite value on the output grid");
  put_function(c.f, o, out);
  return kPass;
}

inline int run_tuple_check(const Opts& o, std::ostream& out) {
  auto fs = load_all(o);
  require_proper(fs, o.funcs);
  std::vector<Grid> grids;
  for (const auto& f : fs) grids.push_back(f.grid);
  TupleCheckOptions t;
  t.eps_equal = o.tol_equal;
  t.margin = o.margin;
  Report r = is_c_conjugate_tuple(as_marginals(fs, o.funcs), grids, t);
  r.echo("tol_equal", io::format_double(o.tol_equal));
  return finish(r, o, out);
}

inline int run_contact(const Opts& o, std::ostream& out) {
  auto fs = load_all(o);
  require_proper(fs, o.funcs);
  Report r;
  r.name = "contact";
  r.echo("tol_contact", io::format_double(o.tol_contact));
  try {
    FiniteGamma g = contact_set(as_marginals(fs, o.funcs), o.tol_contact);
    r.echo("tuples", std::to_string(g.size()));
    r.add("lower_bound", true, 0.0, o.tol_contact);
    if (!o.emit_gamma.empty()) save_gamma(o.emit_gamma, g);
  } catch (const Error& e) {
    std::string what = e.what();
    auto at = what.find("lower bound violated at ");
    if (at == std::string::npos) throw;
    r.add("lower_bound", false, 1.0, o.tol_contact, what.substr(at + 24));
  }
  return finish(r, o, out);
}

inline int run_holes(const Opts& o, std::ostream& out) {
  FiniteGamma g = load_gamma(o.gamma_path);
  Grid probe = need_grid(o.probe, "--probe");
  auto holes = hole_report(sum_set(g), probe);
  Report r;
  r.name = "holes";
  r.echo("tuples", std::to_string(g.size()));
  r.echo("probe", format_grid(probe));
  r.echo("uncovered", std::to_string(holes.size()));
  if (!o.emit_gamma.empty()) {
    std::ofstream f(o.emit_gamma);
    if (!f) throw Error("cannot write '" + o.emit_gamma + "'");
    for (const auto& p : holes) f << io::format_point(p, probe.dim()) << '\n';
  }
  r.add("holes", holes.size() <= o.max_holes, static_cast<double>(holes.size()), static_cast<double>(o.max_holes),
        holes.empty() ? std::string{} : witness_point(holes.front(), probe.dim()));
  return finish(r, o, out);
}

inline int run_monotone(const Opts& o, std::ostream& out) {
  FiniteGamma g = load_gamma(o.gamma_path);
  MonotonicityResult m = is_n_c_monotone({&g, o.order, o.budget, std::nullopt});
  Report r;
  r.name = "monotone";
  r.echo("tuples", std::to_string(g.size()));
  r.echo("order", std::to_string(o.order));
  r.echo("multisets_checked", std::to_string(m.multisets_checked));
  std::string wit;
  if (!m.monotone) {
    for (std::size_t k : m.multiset) wit += (wit.empty() ? "tuples=" : ",") + std::to_string(k);
    for (const auto& p : m.perms) {
      wit += " [";
      for (int i : p) wit += std::to_string(i);
      wit += "]";
    }
  }
  r.add("order" + std::to_string(o.order), m.monotone, m.monotone ? 0.0 : m.excess, 1e-9, wit);
  return finish(r, o, out);
}

inline int run_probe(const Opts& o, std::ostream& out) {
  ConjectureOptions c;
  c.lambda = o.lambda;
  c.seed = o.seed;
  c.sample_size = o.samples;
  c.n_max = o.n_max;
  return finish(conjecture_probe(c), o, out);
}

inline int run_gallery(const Opts& o, std::ostream& out) {
  Descriptor d = parse_descriptor(o.gallery_name);
  Report r;
  r.name = "gallery " + d.text();
  if (d.family == "oblique") {
    ObliqueParams p(d.num("lambda", o.lambda));
    FiniteGamma g = gamma_oblique(p, 200, 400);
    double resid = 0.0;
    for (const auto& t : g.tuples) resid = std::max(resid, std::abs(h_oblique(t[2], p) - cost_c(t)));
    r.echo("tuples", std::to_string(g.size()));
    r.add_bound("contact_residual", resid, 1e-9);
    if (!o.emit_gamma.empty()) save_gamma(o.emit_gamma, g);
  } else if (d.family == "perp") {
    double lam = d.num("lambda", o.lambda);
    FiniteGamma g = gamma_perpendicular(lam, 41, 4.0);
    double resid = 0.0;
    if (std::isfinite(lam) && lam > 0.0) {
      for (const auto& t : g.tuples) {
        double h = lam * (std::abs(t[2][0]) + std::abs(t[2][1]));
        resid = std::max(resid, std::abs(h - cost_c(t)));
      }
    }
    r.echo("tuples", std::to_string(g.size()));
    r.add_bound("contact_residual", resid, 1e-9);
    if (!o.emit_gamma.empty()) save_gamma(o.emit_gamma, g);
  } else if (d.family == "improper") {
    ImproperVerdict v = improper_probe(d.num("udotv", 0.5), {2.0, 4.0, 8.0});
    r = v.report;
    r.name = "gallery " + d.text();
    for (std::size_t k = 0; k < v.boxes.size(); ++k) {
      r.echo("value_L" + io::format_double(v.boxes[k]), io::format_double(v.values[k]));
    }
  } else if (d.family == "noninv") {
    NonInvolutiveConfig c;
    c.L = d.num("L", c.L);
    c.step = d.num("step", c.step);
    NonInvolutive ni = noninvolutive_triple(c);
    r = ni.report;
    r.name = "gallery " + d.text();
    r.echo("m", io::format_double(ni.m));
    r.echo("grid", format_grid(ni.grid));
  } else if (d.family == "quad") {
    int N = static_cast<int>(d.num("N", 3.0));
    Grid g = o.grid.empty() ? Grid::span(-4.0, 4.0, 0.01) : parse_grid(o.grid);
    auto t = quadratic_tuple(N, g);
    std::vector<Vec> xs;
    for (double x = -2.0; x <= 2.0 + 1e-12; x += 0.25) xs.push_back({x, g.dim() == 2 ? -x / 2.0 : 0.0});
    PartitionOptions po;
    po.conj_grid = g;
    r = verify_partition_identities(t, xs, po);
    r.name = "gallery " + d.text();
  } else {
    throw Error("unknown gallery name '" + d.family + "' (oblique, perp, improper, noninv, quad)");
  }
  return finish(r, o, out);
}

inline int run_mmot(const Opts& o, std::ostream& out) {
  if (o.funcs.size() < 2) throw Error("mmot: need at least two marginal files");
  std::vector<DiscreteMarginal> ms;
  for (const auto& p : o.funcs) ms.push_back(load_marginal(p));
  Direction dir = Direction::maximize;
  if (o.direction == "min") {
    dir = Direction::minimize;
  } else if (o.direction != "max") {
    throw Error("unknown --direction '" + o.direction + "' (max|min)");
  }
  OptimalPlan op = brute_force_optimal(ms, dir);
  Report r;
  r.name = "mmot";
  r.echo("value", io::format_double(op.value));
  r.add_bound("marginals", op.plan.marginal_residual(ms), 1e-12);
  if (o.quad_dual) {
    Grid g = ms[0].dim == 2 ? Grid::span2(-4.0, 4.0, 0.5) : Grid::span(-4.0, 4.0, 0.5);
    auto q = quadratic_tuple(static_cast<int>(ms.size()), g);
    r.merge(weak_duality_check(q, ms, op.plan), "duality");
    r.merge(concentration_check(op.plan, q), "concentration");
  }
  if (!o.emit_gamma.empty()) {
    std::ofstream f(o.emit_gamma);
    if (!f) throw Error("cannot write '" + o.emit_gamma + "'");
    write_plan(f, op.plan);
  }
  return finish(r, o, out);
}

inline int run_verify(const Opts& o, std::ostream& out) {
  auto rows = acceptance::run_all(out, o.seed);
  for (const auto& r : rows) {
    if (!r.pass) return kFail;
  }
  return kPass;
}

}  // namespace detail

/// Parses argv and runs one subcommand. Exit codes: 0 pass, 1 failing
/// check, 2 usage or input error.
inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  detail::Opts o;
  CLI::App app{"Multi-marginal c-conjugate toolkit", "mcx"};
  app.require_subcommand(1);

  auto grid_flag = [&](CLI::App* s) {
    s->add_option("--grid", o.grid, "grid a,b,step (semicolon-separated axes for 2D)");
  };
  auto emit_flag = [&](CLI::App* s) { s->add_option("--emit", o.emit, "write output to this path"); };

  auto* conj = app.add_subcommand("conjugate", "Legendre-Fenchel conjugate on a dual grid");
  conj->add_option("function", o.funcs, "descriptor or grid file")->required()->expected(1);
  grid_flag(conj);
  conj->add_option("--dual", o.dual, "dual grid (defaults to --grid)");
  conj->add_option("--method", o.method, "fast|scan");
  emit_flag(conj);

  auto* env = app.add_subcommand("envelope", "Moreau envelope");
  env->add_option("function", o.funcs)->required()->expected(1);
  grid_flag(env);
  env->add_option("--out", o.out, "output grid (defaults to the input grid)");
  emit_flag(env);

  auto* px = app.add_subcommand("prox", "proximal point of one input");
  px->add_option("function", o.funcs)->required()->expected(1);
  grid_flag(px);
  px->add_option("--at", o.at, "point x")->required();

  auto* cc = app.add_subcommand("cconj", "c-conjugate of f_2..f_N");
  cc->add_option("functions", o.funcs)->required();
  grid_flag(cc);
  cc->add_option("--out", o.out, "output grid")->required();
  cc->add_option("--method", o.method, "brute|fast");
  emit_flag(cc);

  auto* tc = app.add_subcommand("tuple-check", "is the tuple c-conjugate in every slot");
  tc->add_option("functions", o.funcs)->required();
  grid_flag(tc);
  tc->add_option("--tol-equal", o.tol_equal);
  tc->add_option("--margin", o.margin, "trusted-interior margin");
  emit_flag(tc);

  auto* ct = app.add_subcommand("contact", "contact set of a tuple");
  ct->add_option("functions", o.funcs)->required();
  grid_flag(ct);
  ct->add_option("--tol-contact", o.tol_contact);
  ct->add_option("--emit-gamma", o.emit_gamma, "write the contact set here");
  emit_flag(ct);

  auto* ho = app.add_subcommand("holes", "uncovered probe nodes of a sum set");
  ho->add_option("gamma", o.gamma_path)->required();
  ho->add_option("--probe", o.probe, "probe grid")->required();
  ho->add_option("--max-holes", o.max_holes, "holes tolerated before the check fails");
  ho->add_option("--emit-gamma", o.emit_gamma, "write the uncovered nodes here");
  emit_flag(ho);

  auto* mo = app.add_subcommand("monotone", "exhaustive c-cyclical monotonicity of order n");
  mo->add_option("gamma", o.gamma_path)->required();
  mo->add_option("--n", o.order, "order")->check(CLI::Range(2, 4));
  mo->add_option("--budget", o.budget);
  emit_flag(mo);

  auto* pc = app.add_subcommand("probe-conjecture", "sampled monotonicity of the oblique contact set plus the origin");
  pc->add_option("--lambda", o.lambda);
  pc->add_option("--seed", o.seed);
  pc->add_option("--samples", o.samples, "random multisets per order");
  pc->add_option("--n-max", o.n_max)->check(CLI::Range(2, 4));
  emit_flag(pc);

  auto* ga = app.add_subcommand("gallery", "closed-form examples");
  ga->add_option("name", o.gallery_name, "oblique:lambda=1 | perp:lambda=1 | improper:udotv=0.5 | noninv | quad:N=3")
      ->required();
  ga->add_option("--lambda", o.lambda);
  ga->add_option("--emit-gamma", o.emit_gamma);
  grid_flag(ga);
  emit_flag(ga);

  auto* mm = app.add_subcommand("mmot", "brute-force discrete multi-marginal transport");
  mm->add_option("marginals", o.funcs, "marginal files")->required();
  mm->add_option("--direction", o.direction, "max|min");
  mm->add_flag("--quad-dual", o.quad_dual, "check weak duality and concentration with the quadratic tuple");
  mm->add_option("--emit-gamma", o.emit_gamma, "write the plan here");
  emit_flag(mm);

  auto* ve = app.add_subcommand("verify", "run the acceptance battery");
  ve->add_option("--seed", o.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "mcx: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*conj) return detail::run_conjugate(o, out);
    if (*env) return detail::run_envelope(o, out);
    if (*px) return detail::run_prox(o, out);
    if (*cc) return detail::run_cconj(o, out);
    if (*tc) return detail::run_tuple_check(o, out);
    if (*ct) return detail::run_contact(o, out);
    if (*ho) return detail::run_holes(o, out);
    if (*mo) return detail::run_monotone(o, out);
    if (*pc) return detail::run_probe(o, out);
    if (*ga) return detail::run_gallery(o, out);
    if (*mm) return detail::run_mmot(o, out);
    if (*ve) return detail::run_verify(o, out);
  } catch (const std::exception& e) {
    err << "mcx: " << e.what() << "\n";
    return kUsage;
  }
  err << app.help();
  return kUsage;
}

}  // namespace mcx::cli

#endif  // MCX_CLI_HPP
