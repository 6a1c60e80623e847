#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ew/heavenly.hpp"

using namespace ew;

namespace {

Point p4(cd w, cd z, cd wt, cd zt) {
  return {{"w", w}, {"z", z}, {"wt", wt}, {"zt", zt}};
}

// generic sample with z, zt close to 1 so fractional powers stay on the
// principal branch
const Point PT = p4(cd(0.7, -0.4), cd(0.9, -0.3), cd(-0.3, 0.6), cd(1.1, 0.2));
const Point PT2 = p4(cd(-0.2, 0.5), cd(1.2, 0.4), cd(0.8, -0.1), cd(0.9, -0.25));

// reduced scaling-invariant solution lifted to four dimensions:
// F = -w wt / b + 4 b e^{2 rho u} / (1 + 3 sa^2) on the euclidean branch
ExprP curved_solution_potential() {
  ExprP w = coord("w"), wt = coord("wt"), u = coord("u");
  ExprP b = param("b"), sa = param("sa");
  ExprP D = num(1) + 3.0 * sa * sa;
  ExprP F = -(w * wt) / b + (4.0 * b / D) * exp(2.0 * param("rho") * u);
  return potential_from_reduced(F);
}

double form_sup(const Form& f, const Params& p, const Point& pt) {
  double r = 0;
  for (const auto& [idx, e] : f.comp) r = std::max(r, std::abs(eval(e, p, pt)));
  return r;
}

}  // namespace

TEST_CASE("heavenly residual on stock potentials") {
  Params p = Params::generic(2.0);
  PlebanskiData flat{flat_null_potential(), p};
  CHECK(std::abs(heavenly_residual(flat, PT)) < 1e-14);
  CHECK(std::abs(heavenly_residual(flat, PT2)) < 1e-14);

  // terms without tilde derivatives drop out
  ExprP w = coord("w");
  PlebanskiData bent{flat_null_potential() + 0.25 * w * w, p};
  CHECK(std::abs(heavenly_residual(bent, PT)) < 1e-14);

  // non-solution witness
  PlebanskiData bad{coord("w") * coord("wt") + coord("z") * coord("zt"), p};
  CHECK(std::abs(heavenly_residual(bad, PT) - cd(-2.0, 0)) < 1e-14);
}

TEST_CASE("plebanski metric: flat components and determinant identity") {
  Params p = Params::generic(2.0);
  PlebanskiData flat{flat_null_potential(), p};
  Metric g = plebanski_metric(flat);
  // order (w, z, wt, zt): only dw dzt and dz dwt survive, each split in half
  for (int i = 0; i < 4; i++)
    for (int j = 0; j < 4; j++) {
      cd want = 0;
      if ((i == 0 && j == 3) || (i == 3 && j == 0)) want = 0.5;
      if ((i == 1 && j == 2) || (i == 2 && j == 1)) want = 0.5;
      CHECK(std::abs(eval(g.g[i][j], p, PT) - want) < 1e-14);
    }

  // det g = (O_wzt O_zwt - O_wwt O_zzt)^2 / 16 for a generic potential
  const Chart& c = chart("c4");
  ExprP wv = coord("w"), zv = coord("z"), wtv = coord("wt"), ztv = coord("zt");
  ExprP O = wv * ztv + zv * wtv + 0.3 * wv * wv * ztv + 0.2 * zv * ztv * wtv +
            0.1 * wtv * wtv * zv + 0.07 * wv * wtv;
  PlebanskiData gen{O, p};
  ExprP Ow = diff(O, c, "w"), Oz = diff(O, c, "z");
  ExprP blockdet = diff(Ow, c, "zt") * diff(Oz, c, "wt") -
                   diff(Ow, c, "wt") * diff(Oz, c, "zt");
  ExprP dd = metric_det(plebanski_metric(gen)) - sq(blockdet) / 16.0;
  CHECK(std::abs(eval(dd, p, PT)) < 1e-13);
  CHECK(std::abs(eval(dd, p, PT2)) < 1e-13);
}

TEST_CASE("curved scaling-invariant potential solves the heavenly equation") {
  Params p = Params::euclidean(-0.3, 1.3);
  PlebanskiData d{curved_solution_potential(), p};
  CHECK(std::abs(heavenly_residual(d, PT)) < 1e-12);
  CHECK(std::abs(heavenly_residual(d, PT2)) < 1e-12);

  // finite metric entries at the all-ones point
  Params p1 = Params::euclidean(-0.3, 1.0);
  PlebanskiData d1{curved_solution_potential(), p1};
  Metric g = plebanski_metric(d1);
  Point ones = p4(1, 1, 1, 1);
  for (int i = 0; i < 4; i++)
    for (int j = 0; j < 4; j++) {
      cd v = eval(g.g[i][j], p1, ones);
      CHECK(std::isfinite(std::abs(v)));
    }
}

TEST_CASE("flat canonical potential solves the heavenly equation in both "
          "signature conventions") {
  PlebanskiData dg{flat_canonical_potential(), Params::generic(2.0)};
  CHECK(std::abs(heavenly_residual(dg, PT)) < 1e-13);
  PlebanskiData du{flat_canonical_potential(), Params::ultrahyperbolic(0.4)};
  CHECK(std::abs(heavenly_residual(du, PT)) < 1e-13);
  PlebanskiData de{flat_canonical_potential(), Params::euclidean(-0.5)};
  CHECK(std::abs(heavenly_residual(de, PT)) < 1e-13);
}

TEST_CASE("solution metrics are ricci flat") {
  {
    Params p = Params::generic(2.0);
    PlebanskiData d{flat_canonical_potential(), p};
    Metric R = ricci(plebanski_metric(d));
    CHECK(sup_comp(R, p, PT) < 1e-8);
  }
  {
    Params p = Params::euclidean(-0.3, 1.3);
    PlebanskiData d{curved_solution_potential(), p};
    Metric R = ricci(plebanski_metric(d));
    CHECK(sup_comp(R, p, PT) < 1e-8);
    CHECK(sup_comp(R, p, PT2) < 1e-8);
  }
}

TEST_CASE("conformal killing residual") {
  Params p = Params::generic(2.0);
  Vec K = can_killing(p);

  PlebanskiData flat{flat_null_potential(), p};
  // plain translation is exactly Killing
  Vec T = vec(chart("c4"), {{"w", num(1)}});
  CHECK(conformal_killing_residual(flat, T, cd(0, 0), PT) < 1e-14);

  // canonical potential: L_K g = eta g, and the weight is sharp
  PlebanskiData can{flat_canonical_potential(), p};
  CHECK(conformal_killing_residual(can, K, p.eta, PT) < 1e-12);
  CHECK(conformal_killing_residual(can, K, p.eta + 1.0, PT) > 1e-2);

  // the curved solution has the same homothety
  Params pe = Params::euclidean(-0.3, 1.3);
  PlebanskiData d{curved_solution_potential(), pe};
  CHECK(conformal_killing_residual(d, can_killing(pe), pe.eta, PT) < 1e-12);

  // the plain flat potential is *not* scaling invariant when rho != 0
  CHECK(conformal_killing_residual(flat, K, p.eta, PT) > 1e-2);
}

TEST_CASE("self-dual two-forms: components, wedge identity, eigenvalue") {
  Params p = Params::generic(2.0);
  PlebanskiData flat{flat_null_potential(), p};
  SdTwoForms s = sd_two_forms(flat);
  // s01 carries exactly the Hessian entries: dw^dzt + dz^dwt on flat
  CHECK(std::abs(eval(s.s01({0, 3}), p, PT) - cd(1, 0)) < 1e-14);
  CHECK(std::abs(eval(s.s01({1, 2}), p, PT) - cd(1, 0)) < 1e-14);
  CHECK(std::abs(eval(s.s01({0, 1}), p, PT)) < 1e-14);
  CHECK(std::abs(eval(s.s00({2, 3}), p, PT) - cd(1, 0)) < 1e-14);
  CHECK(std::abs(eval(s.s11({0, 1}), p, PT) - cd(1, 0)) < 1e-14);

  CHECK(form_sup(sd_wedge_residual(flat), p, PT) < 1e-14);

  PlebanskiData bad{coord("w") * coord("wt") + coord("z") * coord("zt"), p};
  CHECK(std::abs(eval(sd_wedge_residual(bad)({0, 1, 2, 3}), p, PT) -
                 cd(-4.0, 0)) < 1e-14);

  // wedge residual tracks twice the heavenly residual for any potential
  ExprP w = coord("w"), wt = coord("wt");
  PlebanskiData gen{flat_null_potential() + 0.1 * w * w * wt * wt, p};
  cd wr = eval(sd_wedge_residual(gen)({0, 1, 2, 3}), p, PT);
  CHECK(std::abs(wr - 2.0 * heavenly_residual(gen, PT)) < 1e-13);

  // all three forms sit in one Hodge eigenspace
  cd sig = sd_eigenvalue(flat, PT);
  CHECK(std::abs(sig + 1.0) < 1e-10);
  Params pe = Params::euclidean(-0.3, 1.3);
  PlebanskiData d{curved_solution_potential(), pe};
  CHECK(std::abs(sd_eigenvalue(d, PT) + 1.0) < 1e-8);
}

TEST_CASE("scaling vector acts on s01 with weight eta") {
  {
    Params p = Params::generic(2.0);
    PlebanskiData d{flat_canonical_potential(), p};
    Form s01 = sd_two_forms(d).s01;
    Form r = lie(can_killing(p), s01) - param("eta") * s01;
    CHECK(form_sup(r, p, PT) < 1e-10);
  }
  {
    Params p = Params::euclidean(-0.3, 1.3);
    PlebanskiData d{curved_solution_potential(), p};
    Form s01 = sd_two_forms(d).s01;
    Form r = lie(can_killing(p), s01) - param("eta") * s01;
    CHECK(form_sup(r, p, PT) < 1e-10);
  }
}

TEST_CASE("wave operator") {
  Params p = Params::generic(2.0);
  PlebanskiData d{flat_canonical_potential(), p};
  auto tu = tu_from_zz();

  CHECK(std::abs(eval(wave_operator_4d(d, num(3.5)), p, PT)) < 1e-14);

  // the symmetry-adapted time function is harmonic on any solution
  CHECK(std::abs(eval(wave_operator_4d(d, tu.at("t")), p, PT)) < 1e-10);
  Params pe = Params::euclidean(-0.3, 1.3);
  PlebanskiData dc{curved_solution_potential(), pe};
  CHECK(std::abs(eval(wave_operator_4d(dc, tu.at("t")), pe, PT)) < 1e-10);

  // harmonic perturbation of the potential: box f = -eta^2 |dt|^2 f
  ExprP f = exp(param("eta") * (tu.at("t") - tu.at("u")));
  Geometry geo = geometry(plebanski_metric(d));
  Form dt = ew::d(chart("c4"), tu.at("t"));
  ExprP dt2 = pair1(geo, dt, dt);
  ExprP res = wave_operator_4d(d, f) + sq(param("eta")) * dt2 * f;
  CHECK(std::abs(eval(res, p, PT)) < 1e-9);
  CHECK(std::abs(eval(res, p, PT2)) < 1e-9);
}

TEST_CASE("chart maps between (z, zt) and (t, u) invert each other") {
  Params p = Params::generic(2.0);
  auto zz = zz_from_tu(), tu = tu_from_zz();
  Point ptu{{"t", cd(0.2, 0.1)}, {"u", cd(-0.1, 0.05)},
            {"w", cd(0.3, 0)}, {"wt", cd(0.1, 0)}};
  for (auto name : {"t", "u"}) {
    ExprP back = substitute(tu.at(name), zz);
    CHECK(std::abs(eval(back - coord(name), p, ptu)) < 1e-12);
  }
}

TEST_CASE("euclidean slice: real form of the heavenly equation") {
  Params p = Params::euclidean(-0.3, 1.3);
  ExprP Or = euclidean_slice_potential(curved_solution_potential());

  // residual identity holds with all four slice coordinates independent
  Point ind{{"w", cd(0.7, -0.4)}, {"wb", cd(-0.2, 0.3)},
            {"z", cd(1.1, 0.2)}, {"zb", cd(0.9, -0.1)}};
  CHECK(std::abs(eval(euclidean_slice_residual(Or), p, ind)) < 1e-12);

  // on the genuine slice the potential is real and the residual still zero
  cd w(0.3, 0.2), z(1.1, -0.4);
  Point sl{{"w", w}, {"wb", std::conj(w)}, {"z", z}, {"zb", std::conj(z)}};
  CHECK(std::abs(std::imag(eval(Or, p, sl))) < 1e-12);
  CHECK(std::abs(eval(euclidean_slice_residual(Or), p, sl)) < 1e-12);
}
