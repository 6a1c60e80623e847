// Command line front end. Every subcommand emits one JSON report on stdout
// (schema in docs/report-schema.md) and exits 0 when all asserted checks
// pass, 1 when one fails, 2 on unknown commands, names or bad input.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ew/catalog.hpp"
#include "ew/lax.hpp"
#include "ew/recursion.hpp"
#include "ew/solver.hpp"
#include "ew/symmetries.hpp"
#include "json.hpp"

namespace {

using ew::cd;
using ew::Point;
using json = nlohmann::ordered_json;

constexpr const char* kSchemaVersion = "1.0";

struct Ctx {
  unsigned seed = 7;
  double tol = -1.0;  // < 0: per-command default applies
  bool no_timestamp = false;
  std::string out;
  bool has_alpha = false, has_b = false;
  double alpha = 0.0, b = 1.0;
};

double tol_or(const Ctx& c, double fallback) {
  return c.tol > 0.0 ? c.tol : fallback;
}

// --alpha/--b override the entry defaults (toda_sep sits at the pure
// rotation angle, everything else at the generic sample angle).
ew::SolutionEntry entry_for(const Ctx& c, const std::string& name) {
  if (!c.has_alpha && !c.has_b) return ew::get(name);
  double a = c.has_alpha ? c.alpha : (name == "toda_sep" ? -M_PI / 2.0 : -0.5);
  return ew::get(name, ew::Params::euclidean(a, c.has_b ? c.b : 1.0));
}

ew::Params params_for(const Ctx& c) {
  return ew::Params::euclidean(c.has_alpha ? c.alpha : -0.5,
                               c.has_b ? c.b : 1.0);
}

/** Random points on a named chart. Reality tags are respected (conjugate
 *  pairs get conjugate values); z-like coordinates stay near 1 so the
 *  power/log branches remain principal, spectral parameters stay away from
 *  the degenerate origin, positive coordinates stay positive and the berger
 *  polar caps are excluded. */
Point sample_point(const ew::Chart& ch, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Point pt;
  for (int i = 0; i < ch.dim(); ++i) {
    const std::string& c = ch.coords[i];
    if (ch.kinds[i] == ew::CoordKind::PairSecond) continue;
    cd val;
    if (c == "theta") {
      val = 0.2 + (M_PI - 0.4) * 0.5 * (U(rng) + 1.0);
    } else if (c == "j" || c == "J") {
      val = 0.8 + 0.6 * (U(rng) + 1.0);
    } else if (!c.empty() && c[0] == 'z') {
      val = cd(1.0 + 0.15 * U(rng), 0.15 * U(rng));
    } else if (c == "lam" || c == "lamt") {
      val = cd(0.7 + 0.5 * U(rng), 0.5 * U(rng));
    } else if (ch.kinds[i] == ew::CoordKind::Real) {
      val = 0.7 * U(rng);
    } else {
      val = cd(0.5 * U(rng), 0.4 * U(rng));
    }
    pt[c] = val;
    if (ch.kinds[i] == ew::CoordKind::PairFirst)
      pt[ch.coords[ch.partner[i]]] = std::conj(val);
  }
  return pt;
}

std::vector<Point> sample_points(const std::string& chartname, int n,
                                 std::mt19937& rng) {
  const ew::Chart& ch = ew::chart(chartname);
  std::vector<Point> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back(sample_point(ch, rng));
  return pts;
}

std::string claim_chart(const ew::SolutionEntry& e, const ew::Claim& c) {
  if (c.equation == "heavenly" || c.equation == "riemann_flat") return "c4";
  if (c.equation == "heavenly_slice") return "e4";
  if (c.equation == "ewred") return "c3";
  if (c.equation == "euclid" || c.equation == "alterform" ||
      c.equation == "hypercr")
    return "r3";
  if (c.equation == "liouville") return "plane";
  if (c.equation == "rjv") return "J_v";
  if (c.equation == "toda") return "toda3";
  if (c.equation == "ew_structure" && e.has_structure && e.structure.h.ch)
    return e.structure.h.ch->name;
  return e.chart;
}

// An entry's field "F" lives on c3 when its claim is the holomorphic form
// and on the slice chart when it is the euclidean one.
std::string f_chart(const ew::SolutionEntry& e) {
  for (const ew::Claim& c : e.claims)
    if (c.field == "F") {
      if (c.equation == "ewred") return "c3";
      if (c.equation == "euclid" || c.equation == "hypercr") return "r3";
    }
  return e.chart;
}

struct Report {
  json j;
  bool all_pass = true;

  explicit Report(const std::string& cmd) {
    j["command"] = cmd;
    j["version"] = kSchemaVersion;
    j["params"] = json::object();
    j["checks"] = json::array();
  }
  void param(const std::string& k, const json& v) { j["params"][k] = v; }
  void check(const std::string& name, double value, double tol) {
    bool pass = std::isfinite(value) && value < tol;
    all_pass = all_pass && pass;
    j["checks"].push_back(
        {{"name", name}, {"value", value}, {"tol", tol}, {"pass", pass}});
  }
  // a computation that could not produce a number: sentinel value -1,
  // tol 0, pass false, with the reason in notes
  void fail(const std::string& name, const std::string& why) {
    all_pass = false;
    j["checks"].push_back(
        {{"name", name}, {"value", -1.0}, {"tol", 0.0}, {"pass", false}});
    note(name + ": " + why);
  }
  void report(const std::string& k, const json& v) {
    if (!j.contains("report")) j["report"] = json::object();
    j["report"][k] = v;
  }
  void note(const std::string& s) {
    if (!j.contains("notes")) j["notes"] = json::array();
    j["notes"].push_back(s);
  }
  int finish(const Ctx& c) {
    if (!c.no_timestamp) {
      char buf[32];
      std::time_t t = std::time(nullptr);
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
      j["timestamp"] = buf;
    }
    std::string s = j.dump(2);
    s += "\n";
    std::fputs(s.c_str(), stdout);
    if (!c.out.empty()) {
      std::ofstream f(c.out, std::ios::binary);
      f << s;
    }
    return all_pass ? 0 : 1;
  }
};

int cmd_catalog_list(const Ctx& c) {
  Report rep("catalog list");
  rep.j["entries"] = ew::catalog_names();
  return rep.finish(c);
}

int cmd_verify(const Ctx& c, const std::string& name, int points) {
  ew::SolutionEntry e = entry_for(c, name);
  Report rep("verify");
  rep.param("name", name);
  rep.param("alpha", e.params.alpha);
  rep.param("b", e.params.b);
  rep.param("points", points);
  rep.param("seed", c.seed);
  std::mt19937 rng(c.seed);
  for (const ew::Claim& cl : e.claims) {
    double val = ew::claim_residual(e, cl);
    if (points > 0) {
      ew::Claim extra = cl;
      extra.pts = sample_points(claim_chart(e, cl), points, rng);
      val = std::max(val, ew::claim_residual(e, extra));
    }
    std::string label =
        cl.equation + (cl.field.empty() ? "" : "(" + cl.field + ")");
    if (cl.zero)
      rep.check(label, val, tol_or(c, cl.tol));
    else
      rep.report(label, val);
  }
  if (!e.notes.empty()) rep.note(e.notes);
  return rep.finish(c);
}

int cmd_reduce(const Ctx& c, const std::string& name, int points) {
  ew::SolutionEntry e = entry_for(c, name);
  ew::ReducedData d;
  d.P = e.params;
  if (e.fields.count("G")) {
    d.F = e.fields.at("G");
    d.form = ew::ReducedForm::Alterform;
  } else if (e.fields.count("Fhat")) {
    d.F = e.fields.at("Fhat");
    d.form = ew::ReducedForm::EWred;
  } else if (e.fields.count("F")) {
    d.F = e.fields.at("F");
    d.form = f_chart(e) == "c3" ? ew::ReducedForm::EWred
                                : ew::ReducedForm::Euclid;
  } else {
    std::fprintf(stderr, "ew: reduce: '%s' carries no reduced potential\n",
                 name.c_str());
    return 2;
  }
  bool slice = d.form != ew::ReducedForm::EWred;
  double tol = tol_or(c, 1e-8);

  Report rep("reduce");
  rep.param("name", name);
  rep.param("alpha", e.params.alpha);
  rep.param("b", e.params.b);
  rep.param("form", slice ? (d.form == ew::ReducedForm::Alterform
                                 ? "alterform"
                                 : "euclid")
                          : "ewred");
  rep.param("points", points);
  rep.param("seed", c.seed);

  std::mt19937 rng(c.seed);
  std::vector<Point> pts = sample_points(slice ? "r3" : "c3", points, rng);
  ew::EwFromF ef = ew::build_ew_from_F(d, pts);

  double chi = 0.0, mono = 0.0;
  for (const Point& pt : pts) {
    chi = std::max(chi, ew::ew_residual_sup(ef.ew, e.params, pt));
    mono = std::max(mono,
                    ew::monopole_closedness(ef.ew, ef.V, e.params, pt));
  }
  rep.check("einstein_weyl_chi", chi, tol);
  rep.check("monopole_closedness", mono, tol);

  if (slice) {
    ew::FrameData fd = ew::frame_and_structure(d, pts);
    double sa = std::sin(e.params.alpha), ca = std::cos(e.params.alpha);
    ew::ExprP tV = fd.twist * fd.frame.V;
    ew::ExprP dV = fd.divergence * fd.frame.V;
    double tlo = 1e300, thi = -1e300, dlo = 1e300, dhi = -1e300;
    double mres = 0.0;
    for (const Point& pt : pts) {
      double tv = ew::eval_real(tV, e.params, pt);
      double dv = ew::eval_real(dV, e.params, pt);
      tlo = std::min(tlo, tv), thi = std::max(thi, tv);
      dlo = std::min(dlo, dv), dhi = std::max(dhi, dv);
      mres = std::max(mres, ew::monopole_residual(ef.ew, ef.V, ef.omega,
                                                  e.params, pt));
    }
    rep.check("twist_V_constant", thi - tlo, tol);
    rep.check("divergence_V_constant", dhi - dlo, tol);
    rep.report("twist_V", 0.5 * (tlo + thi));
    rep.report("divergence_V", 0.5 * (dlo + dhi));
    if (std::abs(ca) > 1e-8) {
      double ratio = 0.5 * (dlo + dhi) / (0.5 * (tlo + thi));
      rep.check("divergence_over_twist_vs_6tan",
                std::abs(ratio - 6.0 * sa / ca), tol);
    } else {
      rep.note("cos(alpha) = 0: divergence/twist ratio not defined");
    }
    rep.check("monopole_residual", mres, tol);
  } else {
    rep.note("holomorphic form: congruence checks live on the slice forms");
  }
  return rep.finish(c);
}

int cmd_symmetries(const Ctx& c, bool table, int points) {
  ew::Params p = params_for(c);
  double tol = tol_or(c, 1e-10);
  Report rep("symmetries");
  rep.param("alpha", p.alpha);
  rep.param("b", p.b);
  rep.param("points", points);
  rep.param("seed", c.seed);
  ew::StructureConstants sc = ew::commutator_table(p, c.seed, points);
  rep.check("commutator_fit", sc.fit_residual, tol);
  if (table) {
    json rows = json::array();
    for (int i = 0; i < 7; ++i) {
      json row = json::array();
      for (int jj = 0; jj < 7; ++jj) {
        json cell = json::object();
        for (int k = 0; k < 7; ++k) {
          double v = sc.c[i][jj][k];
          if (std::abs(v) < 1e-9) continue;
          double r = std::round(v);
          cell["X" + std::to_string(k + 1)] =
              std::abs(v - r) < 1e-9 ? r : v;
        }
        row.push_back(cell);
      }
      rows.push_back(row);
    }
    rep.j["table"] = rows;
  }
  return rep.finish(c);
}

int cmd_lax(const Ctx& c, const std::string& name, int samples,
            std::string kind) {
  ew::SolutionEntry e = entry_for(c, name);
  ew::ExprP bg;
  ew::LaxKind lk = ew::LaxKind::Heavenly;
  if (kind.empty()) {
    if (e.fields.count("Fhat") ||
        (e.fields.count("F") && f_chart(e) == "c3"))
      kind = "reduced";
    else if (e.fields.count("Omega"))
      kind = "heavenly";
    else if (e.fields.count("F"))
      kind = "hypercr";
  }
  std::string chartname;
  if (kind == "heavenly" && e.fields.count("Omega")) {
    bg = e.fields.at("Omega");
    lk = ew::LaxKind::Heavenly;
    chartname = "corr5";
  } else if (kind == "reduced" &&
             (e.fields.count("Fhat") || e.fields.count("F"))) {
    bg = e.fields.count("Fhat") ? e.fields.at("Fhat") : e.fields.at("F");
    lk = ew::LaxKind::Reduced;
    chartname = "corr4";
  } else if (kind == "hypercr" && e.fields.count("F")) {
    bg = e.fields.at("F");
    lk = ew::LaxKind::HyperCR;
    chartname = "r3lam";
  } else {
    std::fprintf(stderr, "ew: lax: no %s background on '%s'\n",
                 kind.empty() ? "usable" : kind.c_str(), name.c_str());
    return 2;
  }
  Report rep("lax");
  rep.param("name", name);
  rep.param("kind", kind);
  rep.param("alpha", e.params.alpha);
  rep.param("b", e.params.b);
  rep.param("samples", samples);
  rep.param("seed", c.seed);
  ew::LaxPair lp = ew::build_lax(bg, lk);
  std::mt19937 rng(c.seed);
  std::vector<double> vals;
  for (const Point& pt : sample_points(chartname, samples, rng))
    vals.push_back(ew::span_residual(lp, e.params, pt));
  std::sort(vals.begin(), vals.end());
  rep.check("span_max", vals.back(), tol_or(c, 1e-8));
  rep.report("span_median", vals[vals.size() / 2]);
  return rep.finish(c);
}

int cmd_recursion(const Ctx& c, const std::string& name, int depth) {
  ew::SolutionEntry e = entry_for(c, name);
  ew::ExprP F;
  if (e.fields.count("Fhat"))
    F = e.fields.at("Fhat");
  else if (e.fields.count("F") && f_chart(e) == "c3")
    F = e.fields.at("F");
  else {
    std::fprintf(stderr,
                 "ew: recursion: '%s' carries no holomorphic potential\n",
                 name.c_str());
    return 2;
  }
  double tol = tol_or(c, 1e-9);
  Report rep("recursion");
  rep.param("name", name);
  rep.param("alpha", e.params.alpha);
  rep.param("b", e.params.b);
  rep.param("depth", depth);
  try {
    std::vector<ew::HierarchyStep> steps = ew::hierarchy(F, e.params, depth);
    for (const ew::HierarchyStep& s : steps) {
      rep.check("linear(" + s.label + ")", s.linear_sup, tol);
      if (s.rec1_sup > 0 || s.rec2_sup > 0) {
        rep.check("rec1(" + s.label + ")", s.rec1_sup, tol);
        rep.check("rec2(" + s.label + ")", s.rec2_sup, tol);
      }
    }
  } catch (const ew::EvalError& err) {
    rep.fail("hierarchy", err.what());
  }
  return rep.finish(c);
}

int cmd_solve(const Ctx& c, const std::vector<int>& grid,
              const std::string& bc, double perturb, int max_iter,
              const std::string& csv, const std::string& history,
              const std::vector<double>& box) {
  if (grid.size() != 3) {
    std::fprintf(stderr, "ew: solve: --grid wants NX,NY,NV\n");
    return 2;
  }
  ew::SolutionEntry e = entry_for(c, bc);
  if (!e.fields.count("G")) {
    std::fprintf(stderr, "ew: solve: '%s' has no slice field G\n", bc.c_str());
    return 2;
  }
  double tol = tol_or(c, 1e-10);
  ew::Grid3 g(grid[0], grid[1], grid[2], box[0], box[1], box[2], box[3],
              box[4], box[5]);
  ew::DiscreteField G0 = ew::sample_field(g, e.fields.at("G"), e.params);
  if (perturb != 0.0) {
    for (int k = 1; k + 1 < g.nv; ++k)
      for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i) {
          double s = std::sin(M_PI * (g.x(i) - g.x0) / (g.x1 - g.x0)) *
                     std::sin(M_PI * (g.y(j) - g.y0) / (g.y1 - g.y0)) *
                     std::sin(M_PI * (g.v(k) - g.v0) / (g.v1 - g.v0));
          G0.val[g.idx(i, j, k)] *= 1.0 + perturb * s;
        }
  }
  Report rep("solve");
  rep.param("bc", bc);
  rep.param("alpha", e.params.alpha);
  rep.param("b", e.params.b);
  rep.param("grid", grid);
  rep.param("box", box);
  rep.param("perturb", perturb);
  ew::NewtonReport nr = ew::solve_newton(G0, e.params, tol, max_iter);
  rep.check("newton_final_residual", nr.history.back(), tol);
  rep.report("iterations", nr.iterations);
  rep.report("converged", nr.converged);
  rep.report("history", nr.history);
  if (!csv.empty()) {
    ew::write_csv(nr.G, csv);
    rep.report("csv", csv);
  }
  if (!history.empty()) {
    ew::write_history_json(nr, history);
    rep.report("history_file", history);
  }
  return rep.finish(c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"einstein-weyl toolkit: verification reports, tables, solver"};
  app.require_subcommand(1);

  Ctx ctx;
  if (const char* env = std::getenv("EW_TOL")) ctx.tol = std::atof(env);
  app.add_option("--seed", ctx.seed, "rng seed for sample points");
  double tol_flag = -1.0;
  app.add_option("--tol", tol_flag, "override every check tolerance");
  app.add_flag("--no-timestamp", ctx.no_timestamp,
               "omit the timestamp (byte-identical reruns)");
  app.add_option("--out", ctx.out, "also write the JSON report to this file");
  auto* oa = app.add_option("--alpha", ctx.alpha, "slice angle in [-pi/2, 0]");
  auto* ob = app.add_option("--b", ctx.b, "family parameter b > 0");

  CLI::App* cat = app.add_subcommand("catalog", "catalog operations");
  cat->fallthrough();
  cat->require_subcommand(1);
  cat->add_subcommand("list", "list the catalog entries");

  std::string name;
  int points = 0;
  CLI::App* ver = app.add_subcommand("verify", "run an entry's claims");
  ver->fallthrough();
  ver->add_option("name", name, "catalog entry")->required();
  ver->add_option("--points", points, "extra random points per claim");

  int rpoints = 20;
  CLI::App* red = app.add_subcommand(
      "reduce", "einstein-weyl structure and congruence from an entry");
  red->fallthrough();
  red->add_option("name", name, "catalog entry")->required();
  red->add_option("--points", rpoints, "sample points");

  bool table = false;
  int spoints = 20;
  CLI::App* sym =
      app.add_subcommand("symmetries", "symmetry algebra structure constants");
  sym->fallthrough();
  sym->add_flag("--table", table, "emit the 7x7 table");
  sym->add_option("--points", spoints, "fit sample points");

  int samples = 50;
  std::string lkind;
  CLI::App* lax = app.add_subcommand("lax", "lax pair span residuals");
  lax->fallthrough();
  lax->add_option("name", name, "catalog entry")->required();
  lax->add_option("--samples", samples, "sample points");
  lax->add_option("--kind", lkind, "heavenly | reduced | hypercr")
      ->check(CLI::IsMember({"heavenly", "reduced", "hypercr"}));

  int depth = 3;
  CLI::App* rec =
      app.add_subcommand("recursion", "closed-form recursion chains");
  rec->fallthrough();
  rec->add_option("name", name, "catalog entry")->required();
  rec->add_option("--depth", depth, "chain depth (0..3)");

  std::vector<int> grid{17, 17, 9};
  std::string bc = "rozw1", csv, histfile;
  double perturb = 0.0;
  int max_iter = 20;
  std::vector<double> box{-0.5, 0.5, -0.5, 0.5, -0.4, 0.4};
  CLI::App* sol = app.add_subcommand("solve", "newton solve on a grid");
  sol->fallthrough();
  sol->add_option("--grid", grid, "NX,NY,NV (odd, >= 9)")->delimiter(',');
  sol->add_option("--bc", bc, "catalog entry supplying boundary data");
  sol->add_option("--perturb", perturb, "relative interior bump amplitude");
  sol->add_option("--max-iter", max_iter, "newton iteration cap");
  sol->add_option("--csv", csv, "dump the solved field as CSV");
  sol->add_option("--history", histfile, "dump the newton history as JSON");
  sol->add_option("--box", box, "x0,x1,y0,y1,v0,v1")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ew: " << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }
  if (tol_flag > 0.0) ctx.tol = tol_flag;
  ctx.has_alpha = oa->count() > 0;
  ctx.has_b = ob->count() > 0;

  try {
    if (cat->parsed()) return cmd_catalog_list(ctx);
    if (ver->parsed()) return cmd_verify(ctx, name, points);
    if (red->parsed()) return cmd_reduce(ctx, name, rpoints);
    if (sym->parsed()) return cmd_symmetries(ctx, table, spoints);
    if (lax->parsed()) return cmd_lax(ctx, name, samples, lkind);
    if (rec->parsed()) return cmd_recursion(ctx, name, depth);
    if (sol->parsed())
      return cmd_solve(ctx, grid, bc, perturb, max_iter, csv, histfile, box);
  } catch (const ew::EvalError& e) {
    std::cerr << "ew: " << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }
  return 2;
}
