#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "ew/exterior.hpp"

using namespace ew;

static const cd I(0.0, 1.0);

namespace {

cd ev(const Form& f, const std::vector<int>& idx, const Params& p,
      const Point& pt) {
  return eval(f(idx), p, pt);
}

double max_comp(const Form& f, const Params& p, const Point& pt) {
  double m = 0.0;
  for (const auto& [idx, e] : f.comp) m = std::max(m, std::abs(eval(e, p, pt)));
  return m;
}

Point slice_pt(cd w, double v) {
  return {{"w", w}, {"wb", std::conj(w)}, {"v", cd(v, 0.0)}};
}

}  // namespace

TEST_CASE("wedge antisymmetry and degree overflow") {
  const Chart& ch = chart("r3");
  Params p = Params::euclidean(-0.4);
  Point pt = slice_pt(cd(0.3, 0.5), 0.7);
  auto a = one_form(ch, {{"w", coord("v") * coord("w")},
                         {"wb", conj(coord("w"))},
                         {"v", num(2.0)}});
  auto b = one_form(ch, {{"w", exp(coord("w"))}, {"v", coord("v")}});
  auto ab = wedge(a, b), ba = wedge(b, a);
  CHECK(max_comp(ab + ba, p, pt) < 1e-15);
  auto vol3 = wedge(ab, dx(ch, "v"));
  CHECK(wedge(vol3, a).comp.empty());
}

TEST_CASE("d squares to zero and satisfies Leibniz") {
  const Chart& ch = chart("r3");
  Params p = Params::euclidean(-0.9);
  Point pt = slice_pt(cd(-0.2, 0.4), 0.3);
  auto f = exp(coord("w") * coord("v")) + conj(coord("w")) * coord("w");
  auto a = one_form(ch, {{"w", sin(coord("v")) * coord("w")},
                         {"wb", coord("w") * conj(coord("w"))},
                         {"v", cos(coord("w"))}});
  CHECK(max_comp(d(d(a)), p, pt) < 1e-12);
  CHECK(max_comp(d(d(ch, f)), p, pt) < 1e-12);
  auto dfa = d(f * a);
  auto rhs = wedge(d(ch, f), a) + f * d(a);
  CHECK(max_comp(dfa - rhs, p, pt) < 1e-12);
}

TEST_CASE("pullback commutes with d and wedge") {
  const Chart& c3 = chart("c3");
  const Chart& c4t = chart("c4t");
  // map (w, wt, u) -> expressions on c4t
  std::map<std::string, ExprP> m{
      {"w", coord("w") * exp(param("m") * coord("t"))},
      {"wt", coord("wt") + coord("t") * coord("t")},
      {"u", coord("u") * (num(1.0) + coord("t"))}};
  auto a = one_form(c3, {{"w", coord("wt") * coord("u")},
                         {"wt", exp(coord("w"))},
                         {"u", coord("w") * coord("wt")}});
  auto b = one_form(c3, {{"w", coord("u")}, {"u", coord("w")}});
  Params p = Params::euclidean(-0.6);
  Point pt{{"t", cd(0.2, -0.1)}, {"u", cd(0.4, 0.3)},
           {"w", cd(-0.5, 0.2)}, {"wt", cd(0.1, 0.6)}};
  CHECK(max_comp(pullback(d(a), c4t, m) - d(pullback(a, c4t, m)), p, pt) <
        1e-12);
  CHECK(max_comp(pullback(wedge(a, b), c4t, m) -
                     wedge(pullback(a, c4t, m), pullback(b, c4t, m)),
                 p, pt) < 1e-12);
  // identity fallback for unmapped coordinates (c4t orders coords t,u,w,wt)
  auto idpull = pullback(a, c4t, {});
  CHECK(std::abs(ev(idpull, {3}, p, pt) - eval(exp(coord("w")), p, pt)) <
        1e-14);
}

TEST_CASE("hodge star on a flat real 3-chart") {
  const Chart& ch = chart("berger");
  Metric g = metric_zero(ch);
  add_sym(g, num(1.0), dx(ch, "theta"), dx(ch, "theta"));
  add_sym(g, num(1.0), dx(ch, "phi"), dx(ch, "phi"));
  add_sym(g, num(1.0), dx(ch, "psi"), dx(ch, "psi"));
  Geometry geo = geometry(g);
  Params p = Params::euclidean(0.0);
  Point pt{{"theta", cd(0.3, 0)}, {"phi", cd(0.8, 0)}, {"psi", cd(-0.4, 0)}};

  CHECK(std::abs(ev(vol(geo), {0, 1, 2}, p, pt) - cd(1.0, 0)) < 1e-15);
  auto s1 = star(geo, dx(ch, "theta"));
  CHECK(std::abs(ev(s1, {1, 2}, p, pt) - cd(1.0, 0)) < 1e-15);
  auto s2 = star(geo, wedge(dx(ch, "theta"), dx(ch, "phi")));
  CHECK(std::abs(ev(s2, {2}, p, pt) - cd(1.0, 0)) < 1e-15);

  auto a = one_form(ch, {{"theta", sin(coord("phi"))},
                         {"phi", coord("theta") * coord("psi")},
                         {"psi", exp(coord("theta"))}});
  CHECK(max_comp(star(geo, star(geo, a)) - a, p, pt) < 1e-13);
  auto w2 = wedge(a, dx(ch, "phi"));
  CHECK(max_comp(star(geo, star(geo, w2)) - w2, p, pt) < 1e-13);
}

TEST_CASE("hodge star on a conjugate-pair chart matches the real slice") {
  const Chart& ch = chart("r3");
  Metric g = metric_zero(ch);
  add_sym(g, num(1.0), dx(ch, "w"), dx(ch, "wb"));  // dw dwb = dx^2 + dy^2
  add_sym(g, num(1.0), dx(ch, "v"), dx(ch, "v"));
  Geometry geo = geometry(g);
  Params p = Params::euclidean(-0.5);
  Point pt = slice_pt(cd(0.4, -0.7), 0.2);

  CHECK(std::abs(eval(geo.det, p, pt) - cd(-0.25, 0)) < 1e-15);
  CHECK(std::abs(eval(geo.volc, p, pt) - cd(0, 0.5)) < 1e-15);
  // *dv = (i/2) dw ^ dwb  (the euclidean area form dx ^ dy)
  auto sv = star(geo, dx(ch, "v"));
  CHECK(std::abs(ev(sv, {0, 1}, p, pt) - cd(0, 0.5)) < 1e-15);
  // *(dw) = -i dw ^ dv since |dw|^2 pairs with dwb
  auto sw = star(geo, dx(ch, "w"));
  CHECK(std::abs(ev(sw, {0, 2}, p, pt) - cd(0, -1.0)) < 1e-14);
  // ** = id on every degree
  auto a = one_form(ch, {{"w", coord("v") * exp(coord("w"))},
                         {"wb", conj(coord("w"))},
                         {"v", coord("w") * conj(coord("w"))}});
  CHECK(max_comp(star(geo, star(geo, a)) - a, p, pt) < 1e-13);
  auto b = wedge(a, dx(ch, "w") + 2.0 * dx(ch, "v"));
  CHECK(max_comp(star(geo, star(geo, b)) - b, p, pt) < 1e-13);
  // pairing: <dw, dwb> = 2, |dv|^2 = 1 on this metric
  CHECK(std::abs(eval(pair1(geo, dx(ch, "w"), dx(ch, "wb")), p, pt) -
                 cd(2.0, 0)) < 1e-14);
  CHECK(std::abs(eval(pair1(geo, dx(ch, "v"), dx(ch, "v")), p, pt) -
                 cd(1.0, 0)) < 1e-14);
}

TEST_CASE("interior product and cartan identities") {
  const Chart& ch = chart("r3");
  Params p = Params::euclidean(-0.2);
  Point pt = slice_pt(cd(0.6, 0.1), -0.4);
  auto V = vec(ch, {{"w", coord("w") * coord("v")},
                    {"wb", conj(coord("w")) * coord("v")},
                    {"v", num(1.0) + coord("w") * conj(coord("w"))}});
  auto a = one_form(ch, {{"w", sin(coord("v"))}, {"wb", coord("w")}});
  auto b = one_form(ch, {{"v", exp(coord("w"))}, {"wb", num(3.0)}});
  // iota is an antiderivation: i_V(a^b) = (i_V a) b - a (i_V b)
  auto lhs = iota(V, wedge(a, b));
  auto rhs = iota(V, a)({}) * b - iota(V, b)({}) * a;
  CHECK(max_comp(lhs - rhs, p, pt) < 1e-13);
  // cartan lie on functions equals directional derivative
  auto f = coord("w") * conj(coord("w")) + coord("v") * coord("v");
  CHECK(std::abs(ev(lie(V, form0(ch, f)), {}, p, pt) -
                 eval(act(V, f), p, pt)) < 1e-14);
  // L_V d f = d L_V f
  CHECK(max_comp(lie(V, d(ch, f)) - d(ch, act(V, f)), p, pt) < 1e-12);
}

TEST_CASE("vector bracket is the commutator") {
  const Chart& ch = chart("plane");
  auto X = vec(ch, {{"w", coord("w") * coord("w")}, {"wb", num(1.0)}});
  auto Y = vec(ch, {{"w", conj(coord("w"))}, {"wb", coord("wb")}});
  auto f = coord("w") * coord("wb") + exp(coord("w"));
  auto comm = act(X, act(Y, f)) - act(Y, act(X, f));
  auto brak = act(bracket(X, Y), f);
  Params p = Params::euclidean(0.0);
  cd wv(0.25, -0.35);
  Point pt{{"w", wv}, {"wb", std::conj(wv)}};
  CHECK(std::abs(eval(comm, p, pt) - eval(brak, p, pt)) < 1e-13);
}

TEST_CASE("lie derivative of a metric detects symmetry") {
  const Chart& ch = chart("plane");
  Metric g = metric_zero(ch);
  add_sym(g, num(1.0), dx(ch, "w"), dx(ch, "wb"));
  // rotation generator i(w d_w - wb d_wb) preserves dw dwb
  auto R = vec(ch, {{"w", num(I) * coord("w")}, {"wb", num(-I) * coord("wb")}});
  Metric lg = lie(R, g);
  Params p = Params::euclidean(0.0);
  cd wv(0.3, 0.8);
  Point pt{{"w", wv}, {"wb", std::conj(wv)}};
  double worst = 0.0;
  for (int i = 0; i < 2; i++)
    for (int j = 0; j < 2; j++)
      worst = std::max(worst, std::abs(eval(lg.g[i][j], p, pt)));
  CHECK(worst < 1e-15);
  // dilation w d_w + wb d_wb scales it: L_D g = 2 g
  auto D = vec(ch, {{"w", coord("w")}, {"wb", coord("wb")}});
  Metric d2 = lie(D, g) - 2.0 * num(1.0) * g;
  for (int i = 0; i < 2; i++)
    for (int j = 0; j < 2; j++)
      CHECK(std::abs(eval(d2.g[i][j], p, pt)) < 1e-15);
}

TEST_CASE("metric inverse and determinant agree with numerics") {
  const Chart& ch = chart("berger");
  Metric g = metric_zero(ch);
  auto th = coord("theta");
  add_sym(g, num(1.0), dx(ch, "theta"), dx(ch, "theta"));
  add_sym(g, sin(th) * sin(th), dx(ch, "phi"), dx(ch, "phi"));
  add_sym(g, num(0.64), one_form(ch, {{"psi", num(1.0)}, {"phi", -cos(th)}}),
          one_form(ch, {{"psi", num(1.0)}, {"phi", -cos(th)}}));
  Metric gi = metric_inverse(g);
  Params p = Params::euclidean(0.0);
  Point pt{{"theta", cd(0.9, 0)}, {"phi", cd(0.2, 0)}, {"psi", cd(1.1, 0)}};
  // g * g^{-1} = id numerically
  for (int i = 0; i < 3; i++)
    for (int j = 0; j < 3; j++) {
      cd s = 0.0;
      for (int k = 0; k < 3; k++)
        s += eval(g.g[i][k], p, pt) * eval(gi.g[k][j], p, pt);
      CHECK(std::abs(s - (i == j ? cd(1, 0) : cd(0, 0))) < 1e-13);
    }
  double st = std::sin(0.9);
  CHECK(std::abs(eval(metric_det(g), p, pt) - cd(st * st * 0.64, 0)) < 1e-14);
}

TEST_CASE("sharp raises indices") {
  const Chart& ch = chart("r3");
  Metric g = metric_zero(ch);
  add_sym(g, exp(-coord("v")), dx(ch, "w"), dx(ch, "wb"));
  add_sym(g, num(1.0), dx(ch, "v"), dx(ch, "v"));
  Geometry geo = geometry(g);
  auto a = one_form(ch, {{"w", coord("v")}, {"v", coord("w")}});
  auto va = sharp(geo, a);
  Params p = Params::euclidean(0.0);
  Point pt = slice_pt(cd(0.5, 0.2), 0.3);
  // <a, b> = b(sharp(a))
  auto b = one_form(ch, {{"wb", num(2.0)}, {"v", num(1.0)}});
  cd lhs = eval(pair1(geo, a, b), p, pt);
  cd rhs = 0.0;
  for (int i = 0; i < 3; i++) rhs += eval(b({i}), p, pt) * eval(va.comp[i], p, pt);
  CHECK(std::abs(lhs - rhs) < 1e-14);
}
