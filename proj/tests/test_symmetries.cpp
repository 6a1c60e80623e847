#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ew/catalog.hpp"
#include "ew/symmetries.hpp"

using namespace ew;
using std::abs;

namespace {

const cd I(0.0, 1.0);

Point rp(cd w, double v) {
  return {{"w", w}, {"wb", std::conj(w)}, {"v", v}};
}

std::vector<Point> pts3() {
  return {rp(cd(0.4, 0.2), 0.3), rp(cd(-0.6, 0.5), -0.4),
          rp(cd(0.9, -0.3), 0.1)};
}

// random real polynomial field on (w, wb, v)
ExprP random_field(std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-0.4, 0.4);
  ExprP w = coord("w"), wb = coord("wb"), v = coord("v");
  ExprP f = num(U(rng));
  f = f + U(rng) * w * wb + U(rng) * (w + wb) + U(rng) * sq(v);
  f = f + U(rng) * sq(w) * sq(wb) + U(rng) * (w + wb) * v;
  f = f + U(rng) * w * wb * sq(v) + I * U(rng) * (w - wb) * v;
  return f;
}

struct TableEntry {
  int i, j, k;
  double v;
};

// the quoted bracket table, 0-based, for slice angle a
std::vector<TableEntry> expected_table(double a) {
  double sa = std::sin(a), ca = std::cos(a);
  return {{0, 2, 1, 1.0},  {1, 2, 0, -1.0}, {0, 4, 0, 1.0},
          {1, 4, 1, 1.0},  {3, 5, 5, sa},   {3, 5, 6, ca},
          {3, 6, 6, sa},   {3, 6, 5, -ca},  {4, 5, 5, -1.0},
          {4, 6, 6, -1.0}};
}

}  // namespace

TEST_CASE("generators match the displayed fields") {
  Params p = Params::euclidean(0.0, 1.0);
  Point q = {{"w", cd(0.4, 0.2)}, {"wb", cd(0.4, -0.2)}, {"v", 0.3},
             {"G", 1.7}};
  Vec X1 = generator(1);
  CHECK(abs(eval(X1.comp[0], p, q) - 1.0) < 1e-15);
  CHECK(abs(eval(X1.comp[1], p, q) - 1.0) < 1e-15);
  CHECK(abs(eval(X1.comp[2], p, q)) < 1e-15);
  CHECK(abs(eval(X1.comp[3], p, q)) < 1e-15);

  Vec X5 = generator(5);
  CHECK(abs(eval(X5.comp[0], p, q) - cd(0.4, 0.2)) < 1e-15);
  CHECK(abs(eval(X5.comp[1], p, q) - cd(0.4, -0.2)) < 1e-15);
  CHECK(abs(eval(X5.comp[3], p, q) - 1.7) < 1e-15);

  // at a = 0 the seventh generator degenerates to cos(v) d_G
  Vec X7 = generator(7);
  CHECK(abs(eval(X7.comp[3], p, q) - std::cos(0.3)) < 1e-15);
  CHECK(abs(eval(X7.comp[0], p, q)) < 1e-15);

  CHECK_THROWS_AS((void)generator(0), EvalError);
  CHECK_THROWS_AS((void)generator(8), EvalError);
}

TEST_CASE("commutator table matches the quoted one") {
  for (double a : {0.0, -0.7}) {
    Params p = Params::euclidean(a, 1.0);
    StructureConstants sc = commutator_table(p);
    CHECK(sc.fit_residual < 1e-10);

    auto wanted = expected_table(a);
    double worst = 0.0;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k) {
          double want = 0.0;
          for (const auto& e : wanted) {
            if (e.i == i && e.j == j && e.k == k) want = e.v;
            if (e.i == j && e.j == i && e.k == k) want = -e.v;
          }
          worst = std::max(worst, abs(sc.c[i][j][k] - want));
        }
    CHECK(worst < 1e-12);

    // antisymmetry and the jacobi identity of the extracted constants
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k)
          CHECK(abs(sc.c[i][j][k] + sc.c[j][i][k]) < 1e-12);
    double jac = 0.0;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k)
          for (int l = 0; l < 7; ++l) {
            double s = 0.0;
            for (int m = 0; m < 7; ++m)
              s += sc.c[i][j][m] * sc.c[m][k][l] +
                   sc.c[j][k][m] * sc.c[m][i][l] +
                   sc.c[k][i][m] * sc.c[m][j][l];
            jac = std::max(jac, abs(s));
          }
    CHECK(jac < 1e-9);
  }
}

TEST_CASE("infinitesimal invariance on solutions") {
  Params p = Params::euclidean(-0.5, 1.0);
  ExprP G1 = get("rozw1", p).fields.at("G");
  ExprP G2 = get("rozw2", p).fields.at("G");
  auto pts = pts3();

  CHECK(infinitesimal_invariance(4, G2, p, pts) < 1e-9);
  CHECK(infinitesimal_invariance(7, G1, p, pts) < 1e-9);
  CHECK(infinitesimal_invariance(5, G2, p, pts) < 1e-9);
  // the whole algebra fixes both registered solutions infinitesimally
  for (int i = 1; i <= 7; ++i) {
    CHECK(infinitesimal_invariance(i, G1, p, pts) < 1e-9);
    CHECK(infinitesimal_invariance(i, G2, p, pts) < 1e-9);
  }

  CHECK_THROWS_AS(
      (void)infinitesimal_invariance(4, G2 + coord("v") * coord("w") *
                                            coord("wb"), p, pts),
      EvalError);
}

TEST_CASE("linearized operator against the difference quotient") {
  Params p = Params::euclidean(-0.5, 1.0);
  ExprP G = get("rozw2", p).fields.at("G");
  std::mt19937 rng(5);
  for (int rep = 0; rep < 4; ++rep) {
    ExprP dG = random_field(rng);
    ExprP lin = alterform_linearized(G, dG);
    double eps = 1e-6;
    ReducedData base{G, p, ReducedForm::Alterform};
    ReducedData bumped{G + num(eps) * dG, p, ReducedForm::Alterform};
    for (const auto& q : pts3()) {
      cd fd = (reduced_residual(bumped, q) - reduced_residual(base, q)) / eps;
      CHECK(abs(eval(lin, p, q) - fd) < 1e-5);
    }
  }
  // linearity in the perturbation
  ExprP d1 = random_field(rng), d2 = random_field(rng);
  ExprP gap = alterform_linearized(G, 0.7 * d1 + d2) -
              0.7 * alterform_linearized(G, d1) - alterform_linearized(G, d2);
  for (const auto& q : pts3()) CHECK(abs(eval(gap, p, q)) < 1e-12);
}

TEST_CASE("differential ideal on the solution graph") {
  Params p = Params::euclidean(-0.5, 1.0);
  ExprP G1 = get("rozw1", p).fields.at("G");
  ExprP G2 = get("rozw2", p).fields.at("G");
  for (const auto& q : pts3()) {
    IdealResidual a = ideal_residual(G1, p, q);
    IdealResidual b = ideal_residual(G2, p, q);
    CHECK(a.w1 < 1e-10);
    CHECK(b.w1 < 1e-10);
    // the second form encodes the graph compatibility: an identity
    CHECK(a.w2 < 1e-14);
    CHECK(b.w2 < 1e-14);
  }

  // constants are not solutions: the -4 volume term survives
  IdealResidual c = ideal_residual(num(2.0), p, pts3()[0]);
  CHECK(c.w1 == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(c.w2 < 1e-14);

  // non-solution: the first form detects it
  IdealResidual d =
      ideal_residual(G1 + 0.3 * coord("v") * coord("w") * coord("wb"), p,
                     pts3()[0]);
  CHECK(d.w1 > 1e-3);

  CHECK(ideal_closure_residual(1, p) < 1e-8);
  CHECK(ideal_closure_residual(2, p) < 1e-8);
  CHECK_THROWS_AS((void)ideal_form(3), EvalError);
}

TEST_CASE("scaling flow rescales the structure by a constant") {
  Params p = Params::euclidean(-0.5, 1.0);
  ExprP G = get("rozw2", p).fields.at("G");
  const Chart& r3 = chart("r3");
  double s = 0.37, es = std::exp(s);
  std::map<std::string, ExprP> shrink = {
      {"w", num(1.0 / es) * coord("w")}, {"wb", num(1.0 / es) * coord("wb")}};
  ExprP Gs = num(es) * substitute(G, shrink);

  // the finite flow of X5 stays in the solution family: it is the member
  // with b replaced by b e^s
  ExprP Gb = get("rozw2", Params::euclidean(-0.5, es)).fields.at("G");
  for (const auto& q : pts3()) {
    CHECK(abs(reduced_residual({Gs, p, ReducedForm::Alterform}, q)) < 1e-12);
    CHECK(abs(eval(Gs, p, q) - eval(Gb, Params::euclidean(-0.5, es), q)) <
          1e-12);
  }

  // induced structure: h rescales by the constant e^{2s}, nu is unchanged
  EwFromF e0 = build_ew_from_F({G, p, ReducedForm::Alterform});
  EwFromF e1 = build_ew_from_F({Gs, p, ReducedForm::Alterform});
  Metric hp = pullback(e0.ew.h, r3, shrink);
  Form np = pullback(e0.ew.nu, r3, shrink);
  for (const auto& q : pts3()) {
    CHECK(ew_residual_sup(e1.ew, p, q) < 1e-9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(abs(eval(e1.ew.h.g[i][j], p, q) -
                  es * es * eval(hp.g[i][j], p, q)) < 1e-12);
    for (const auto& kv : e1.ew.nu.comp)
      CHECK(abs(eval(kv.second, p, q) - eval(np(kv.first), p, q)) < 1e-12);
  }
}
