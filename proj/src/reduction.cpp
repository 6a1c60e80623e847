#include "ew/reduction.hpp"

#include <cmath>
#include <sstream>

namespace ew {

namespace {

const cd I(0.0, 1.0);

std::string fmt_point(const Point& pt) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : pt) {
    if (!first) os << " ";
    first = false;
    os << k << "=" << v.real();
    if (v.imag() != 0.0) os << (v.imag() > 0 ? "+" : "") << v.imag() << "i";
  }
  return os.str();
}

// derivative shorthands on a fixed chart
ExprP D(const ExprP& f, const Chart& ch, const std::string& c) {
  return diff(f, ch, c);
}

}  // namespace

ExprP G_from_F(const ExprP& F) {
  return exp(param("sa") * coord("v")) * F;
}

ExprP F_from_G(const ExprP& G) {
  return exp(-param("sa") * coord("v")) * G;
}

ExprP slice_from_holomorphic(const ExprP& F) {
  return substitute(F, {{"u", num(I) * coord("v")}, {"wt", -coord("wb")}});
}

ExprP reduced_residual_expr(const ReducedData& d) {
  ExprP eta = param("eta");
  if (d.form == ReducedForm::EWred) {
    const Chart& c3 = chart("c3");
    ExprP F = d.F;
    ExprP Fw = D(F, c3, "w"), Fwt = D(F, c3, "wt"), Fu = D(F, c3, "u");
    ExprP rhs = num(4.0) * param("m") * param("mt") *
                exp(num(2.0) * param("rho") * coord("u"));
    return (eta * Fwt + D(Fu, c3, "wt")) * (eta * Fw - D(Fu, c3, "w")) -
           (sq(eta) * F - D(Fu, c3, "u")) * D(Fw, c3, "wt") - rhs;
  }
  const Chart& r3 = chart("r3");
  ExprP ca = param("ca"), sa = param("sa");
  if (d.form == ReducedForm::Euclid) {
    ExprP F = d.F;
    ExprP Fw = D(F, r3, "w"), Fwb = D(F, r3, "wb"), Fv = D(F, r3, "v");
    return (sq(ca) * F + D(Fv, r3, "v")) * D(Fw, r3, "wb") -
           (ca * Fwb - I * D(Fv, r3, "wb")) * (ca * Fw + I * D(Fv, r3, "w")) -
           num(4.0) * exp(num(-2.0) * sa * coord("v"));
  }
  // Alterform, G = e^{v sa} F
  ExprP G = d.F;
  ExprP Gw = D(G, r3, "w"), Gwb = D(G, r3, "wb"), Gv = D(G, r3, "v");
  return (G + D(Gv, r3, "v") - num(2.0) * sa * Gv) * D(Gw, r3, "wb") -
         (param("m") * Gwb - I * D(Gv, r3, "wb")) *
             (param("mt") * Gw + I * D(Gv, r3, "w")) -
         num(4.0);
}

cd reduced_residual(const ReducedData& d, const Point& pt) {
  return eval(reduced_residual_expr(d), d.P, pt);
}

TodFields todform_fields(const ReducedData& d) {
  ExprP eta = param("eta");
  TodFields f;
  if (d.form == ReducedForm::EWred) {
    const Chart& c3 = chart("c3");
    ExprP F = d.F, Fu = D(d.F, c3, "u");
    f.V = (sq(eta) * F - D(Fu, c3, "u")) / 4.0;
    f.S = (eta * D(F, c3, "w") - D(Fu, c3, "w")) / 2.0;
    f.St = (eta * D(F, c3, "wt") + D(Fu, c3, "wt")) / 2.0;
    return f;
  }
  const Chart& r3 = chart("r3");
  ExprP F = d.form == ReducedForm::Euclid ? d.F : F_from_G(d.F);
  ExprP ca = param("ca");
  ExprP Fv = D(F, r3, "v");
  f.V = (sq(ca) * F + D(Fv, r3, "v")) / 4.0;
  f.S = (ca * D(F, r3, "w") + I * D(Fv, r3, "w")) / 2.0;
  f.St = -bar(f.S, r3);
  return f;
}

std::array<ExprP, 3> todform_residuals(const ReducedData& d,
                                       const TodFields& f) {
  ExprP eta = param("eta");
  if (d.form == ReducedForm::EWred) {
    const Chart& c3 = chart("c3");
    ExprP rhs = param("m") * param("mt") *
                exp(num(2.0) * param("rho") * coord("u"));
    ExprP r1 = f.V - eta * (f.S * f.St - rhs) /
                         (D(f.S, c3, "wt") + D(f.St, c3, "w"));
    ExprP r2 = D(f.S, c3, "u") + eta * f.S - num(2.0) * D(f.V, c3, "w");
    ExprP r3e = -D(f.St, c3, "u") + eta * f.St - num(2.0) * D(f.V, c3, "wt");
    return {r1, r2, r3e};
  }
  // slice operators: d_u = -i d_v, d_wt = -d_wb, e^{2 rho u} = e^{-2 v sa}
  const Chart& r3 = chart("r3");
  ExprP rhs = exp(num(-2.0) * param("sa") * coord("v"));
  ExprP r1 = f.V - eta * (f.S * f.St - rhs) /
                       (-D(f.S, r3, "wb") + D(f.St, r3, "w"));
  ExprP r2 = num(-I) * D(f.S, r3, "v") + eta * f.S - num(2.0) * D(f.V, r3, "w");
  ExprP r3e =
      num(I) * D(f.St, r3, "v") + eta * f.St + num(2.0) * D(f.V, r3, "wb");
  return {r1, r2, r3e};
}

namespace {

// h, nu, omega on the holomorphic chart c3 per the quotient construction
EwFromF build_holomorphic(const ReducedData& rd) {
  const Chart& c3 = chart("c3");
  const Chart& c4t = chart("c4t");
  ExprP eta = param("eta"), rho = param("rho");
  ExprP F = rd.F, Fu = D(F, c3, "u");
  TodFields f = todform_fields(rd);

  Form dw = dx(c3, "w"), dwt = dx(c3, "wt"), du = dx(c3, "u");
  Form q = (sq(eta) * F) * du + (eta * D(F, c3, "w")) * dw -
           (eta * D(F, c3, "wt")) * dwt - d(c3, Fu);
  Metric h = metric_zero(c3);
  add_sym(h, -exp(num(2.0) * rho * coord("u")), dw, dwt);
  add_sym(h, num(-1.0 / 16.0), q, q);

  Form omega = (num(1.0) / (num(2.0) * f.V)) * (f.S * dw + f.St * dwt);
  Form nu = num(4.0) * rho * du +
            (num(1.0) / f.V) *
                ((eta + 2.0 * rho) * f.S * dw + (eta - 2.0 * rho) * f.St * dwt);

  Metric hk = pullback(h, c4t, {});
  Form tpl = dx(c4t, "t") + pullback(omega, c4t, {});
  Metric sec = metric_zero(c4t);
  add_sym(sec, f.V, tpl, tpl);
  Metric g4 = exp(eta * coord("t")) * ((num(1.0) / f.V) * hk + sec);

  return {WeylStructure{h, nu}, f.V, omega, g4};
}

// slice gauge on r3: h = e^{-2 v sa} dw dwb + e3 (x) e3
EwFromF build_slice(const ReducedData& rd) {
  const Chart& r3 = chart("r3");
  const Chart& r4 = chart("r4");
  ExprP ca = param("ca"), sa = param("sa");
  ReducedData de{rd.form == ReducedForm::Euclid ? rd.F : F_from_G(rd.F),
                 rd.P, ReducedForm::Euclid};
  TodFields f = todform_fields(de);
  ExprP Sb = -f.St;  // conj(S)

  Form dw = dx(r3, "w"), dwb = dx(r3, "wb"), dv = dx(r3, "v");
  Form e3 = f.V * dv - (I / 2.0) * (f.S * dw - Sb * dwb);
  Metric h = metric_zero(r3);
  add_sym(h, exp(num(-2.0) * sa * coord("v")), dw, dwb);
  add_sym(h, num(1.0), e3, e3);

  Form omega = (num(1.0) / (num(2.0) * f.V)) * (f.S * dw + Sb * dwb);
  Form nu = (num(2.0) * ca) * omega - (num(4.0) * sa / f.V) * e3;

  Metric hk = pullback(h, r4, {});
  Form tpl = dx(r4, "t") + pullback(omega, r4, {});
  Metric sec = metric_zero(r4);
  add_sym(sec, f.V, tpl, tpl);
  Metric g4 = exp(param("eta") * coord("t")) * ((num(1.0) / f.V) * hk + sec);

  return {WeylStructure{h, nu}, f.V, omega, g4};
}

}  // namespace

EwFromF build_ew_from_F(const ReducedData& rd,
                        const std::vector<Point>& sample_pts) {
  EwFromF r;
  if (rd.form == ReducedForm::EWred) {
    r = build_holomorphic(rd);
  } else if (rd.form == ReducedForm::Euclid) {
    r = build_slice(rd);
  } else {
    r = build_slice(rd);
    // rescale to the G gauge: h -> e^{2 v sa} h, nu -> nu + 2 sa dv,
    // V -> e^{v sa} V (conformal weight -1), omega unchanged
    const Chart& r3 = chart("r3");
    ExprP G = rd.F, sa = param("sa");
    ExprP Gv = D(G, r3, "v");
    ExprP Ghat = G + D(Gv, r3, "v") - num(2.0) * sa * Gv;

    Form dw = dx(r3, "w"), dwb = dx(r3, "wb"), dv = dx(r3, "v");
    Form qG = (G - num(2.0) * sa * Gv) * dv + d(r3, Gv) -
              (I * param("mt") * D(G, r3, "w")) * dw +
              (I * param("m") * D(G, r3, "wb")) * dwb;
    Metric hG = metric_zero(r3);
    add_sym(hG, num(1.0), dw, dwb);
    add_sym(hG, num(1.0 / 16.0), qG, qG);

    ExprP ca = param("ca");
    ExprP cw = (2.0 * (1.0 + sq(sa)) + 2.0 * I * sa * ca) * D(G, r3, "w") +
               (2.0 * I * (ca + 2.0 * I * sa)) * D(Gv, r3, "w");
    ExprP cwb = (2.0 * (1.0 + sq(sa)) - 2.0 * I * sa * ca) * D(G, r3, "wb") -
                (2.0 * I * (ca - 2.0 * I * sa)) * D(Gv, r3, "wb");
    Form nuG = (num(-2.0) * sa) * dv + (cw / Ghat) * dw + (cwb / Ghat) * dwb;

    r.ew = WeylStructure{hG, nuG};
    r.V = Ghat / 4.0;
  }
  for (const auto& pt : sample_pts) {
    cd v = eval(r.V, rd.P, pt);
    if (std::abs(v) < 1e-12)
      throw EvalError("build_ew_from_F: V vanishes at " + fmt_point(pt));
  }
  return r;
}

Form altermetric_nu_displayed(const ExprP& G) {
  const Chart& r3 = chart("r3");
  ExprP ca = param("ca"), sa = param("sa");
  ExprP Gv = D(G, r3, "v");
  ExprP Ghat = G + D(Gv, r3, "v") - num(2.0) * sa * Gv;
  ExprP cw = (2.0 + 2.0 * sq(sa) + 2.0 * I * sa * ca) * D(G, r3, "w") -
             (2.0 * (ca + 2.0 * I * sa)) * D(Gv, r3, "w");
  ExprP cwb = (2.0 + 2.0 * sq(sa) - 2.0 * I * sa * ca) * D(G, r3, "wb") -
              (2.0 * (ca - 2.0 * I * sa)) * D(Gv, r3, "wb");
  return (num(-2.0) * sa) * dx(r3, "v") + (cw / Ghat) * dx(r3, "w") +
         (cwb / Ghat) * dx(r3, "wb");
}

WeylStructure liouville_structure(const ExprP& Psi) {
  const Chart& r3 = chart("r3");
  ExprP sa = param("sa"), ca = param("ca");
  Form dw = dx(r3, "w"), dwb = dx(r3, "wb"), dv = dx(r3, "v");
  Form e = dv - (I * param("mt") * D(Psi, r3, "w")) * dw +
           (I * param("m") * D(Psi, r3, "wb")) * dwb;
  Metric h = metric_zero(r3);
  add_sym(h, num(16.0) * exp(num(-2.0) * Psi), dw, dwb);
  add_sym(h, num(1.0), e, e);
  Form nu = (num(-2.0) * sa) * dv +
            ((2.0 * sq(sa) + 2.0 * I * sa * ca) * D(Psi, r3, "w")) * dw +
            ((2.0 * sq(sa) - 2.0 * I * sa * ca) * D(Psi, r3, "wb")) * dwb;
  return {h, nu};
}

FrameData frame_and_structure(const ReducedData& rd,
                              const std::vector<Point>& sample_pts) {
  if (rd.form == ReducedForm::EWred)
    throw EvalError("frame_and_structure: euclidean slice forms only");
  const Chart& r3 = chart("r3");
  ReducedData de{rd.form == ReducedForm::Euclid ? rd.F : F_from_G(rd.F),
                 rd.P, ReducedForm::Euclid};
  TodFields f = todform_fields(de);
  ExprP Sb = -f.St;
  ExprP ca = param("ca"), sa = param("sa");

  Form dw = dx(r3, "w"), dwb = dx(r3, "wb"), dv = dx(r3, "v");
  ExprP E = exp(I * param("m") * coord("v"));
  ExprP Eb = exp(-I * param("mt") * coord("v"));
  FrameData fd;
  fd.frame.e1 = (E / 2.0) * dw + (Eb / 2.0) * dwb;
  fd.frame.e2 = (I / 2.0 * Eb) * dwb - (I / 2.0 * E) * dw;
  fd.frame.e3 = f.V * dv - (I / 2.0) * (f.S * dw - Sb * dwb);
  fd.frame.V = f.V;
  fd.frame.omega = (num(1.0) / (num(2.0) * f.V)) * (f.S * dw + Sb * dwb);

  const Form& e1 = fd.frame.e1;
  const Form& e2 = fd.frame.e2;
  const Form& e3 = fd.frame.e3;
  fd.af1_residual = d(e3) - ca * wedge(fd.frame.omega, e3) -
                    (ca / f.V) * wedge(e1, e2);
  Form epl = e1 + I * e2;
  fd.af2_residual = d(epl) - param("m") * wedge(fd.frame.omega, epl) -
                    (I * param("m") / f.V) * wedge(e3, epl);

  Metric h = metric_zero(r3);
  add_sym(h, exp(num(-2.0) * sa * coord("v")), dw, dwb);
  add_sym(h, num(1.0), e3, e3);
  Geometry geo = geometry(h);
  Form nu = (num(2.0) * ca) * fd.frame.omega - (num(4.0) * sa / f.V) * e3;

  // the sign of a single Hodge star follows the volume orientation of the
  // (w, wb, v) chart; calibrated so that the twist of a solution is +ca/V
  fd.twist = star(geo, wedge(e3, d(e3)))({});
  fd.divergence_riemannian = star(geo, d(star(geo, e3)))({});
  fd.divergence = fd.divergence_riemannian - 2.0 * pair1(geo, nu, e3);

  for (const auto& pt : sample_pts) {
    if (eval_real(f.V, rd.P, pt) <= 0.0)
      throw EvalError("frame_and_structure: V <= 0 at " + fmt_point(pt));
  }
  return fd;
}

bool chart_map_branch_safe(const Point& pt) {
  for (const char* c : {"z", "zt"}) {
    auto it = pt.find(c);
    if (it == pt.end()) continue;
    cd z = it->second;
    if (z.real() <= 0.0 && std::abs(z.imag()) < 1e-14) return false;
  }
  return true;
}

JonesTod jones_tod(const Metric& g, const std::string& fiber, const Chart& q,
                   const Params& P, const std::vector<Point>& check_pts,
                   cd fiber_value) {
  const Chart& big = *g.ch;
  int fi = big.index(fiber);
  if (q.dim() != big.dim() - 1)
    throw EvalError("jones_tod: quotient chart has the wrong dimension");
  for (int a = 0; a < big.dim(); a++)
    if (a != fi && !q.has(big.coords[a]))
      throw EvalError("jones_tod: quotient chart misses " + big.coords[a]);

  ExprP K2 = g.g[fi][fi];
  Form Kb;
  Kb.ch = &big;
  Kb.deg = 1;
  for (int a = 0; a < big.dim(); a++) Kb.comp[{a}] = g.g[a][fi];

  Metric KK = metric_zero(big);
  add_sym(KK, num(1.0), Kb, Kb);
  Metric h4 = (num(1.0) / K2) * g - (num(1.0) / sq(K2)) * KK;
  Geometry geo = geometry(g);
  // orientation is uniformized across charts: an odd number of conjugate
  // pairs flips the ordered volume at the real slice relative to the
  // holomorphic quotient chart the construction was calibrated on
  int pairs = 0;
  for (auto k : big.kinds)
    if (k == CoordKind::PairFirst) pairs++;
  double orient = (pairs % 2 == 1) ? -1.0 : 1.0;
  Form nu4 = (num(2.0 * orient) / K2) * star(geo, wedge(Kb, d(Kb)));

  for (const auto& pt : check_pts) {
    cd k2 = eval(K2, P, pt);
    if (std::abs(k2) < 1e-10)
      throw EvalError("jones_tod: |K|^2 vanishes at " + fmt_point(pt));
    for (int a = 0; a < big.dim(); a++) {
      if (std::abs(eval(h4.g[fi][a], P, pt)) > 1e-7)
        throw EvalError("jones_tod: fiber row of h does not vanish at " +
                        fmt_point(pt));
    }
    if (std::abs(eval(nu4({fi}), P, pt)) > 1e-7)
      throw EvalError("jones_tod: fiber component of nu does not vanish at " +
                      fmt_point(pt));
    Point pt2 = pt;
    pt2[fiber] = (pt.count(fiber) ? pt.at(fiber) : cd(0.0)) + 0.37;
    for (int a = 0; a < big.dim(); a++) {
      if (a == fi) continue;
      for (int b = 0; b < big.dim(); b++) {
        if (b == fi) continue;
        cd x = eval(h4.g[a][b], P, pt), y = eval(h4.g[a][b], P, pt2);
        if (std::abs(x - y) > 1e-8 * (1.0 + std::abs(x)))
          throw EvalError(
              "jones_tod: reduced data varies along the fiber at " +
              fmt_point(pt));
      }
      cd x = eval(nu4({a}), P, pt), y = eval(nu4({a}), P, pt2);
      if (std::abs(x - y) > 1e-8 * (1.0 + std::abs(x)))
        throw EvalError("jones_tod: reduced data varies along the fiber at " +
                        fmt_point(pt));
    }
  }

  std::map<std::string, ExprP> sub{{fiber, num(fiber_value)}};
  Metric hq = metric_zero(q);
  Form nuq;
  nuq.ch = &q;
  nuq.deg = 1;
  for (int a = 0; a < big.dim(); a++) {
    if (a == fi) continue;
    int ia = q.index(big.coords[a]);
    nuq.comp[{ia}] = substitute(nu4({a}), sub);
    for (int b = 0; b < big.dim(); b++) {
      if (b == fi) continue;
      hq.g[ia][q.index(big.coords[b])] = substitute(h4.g[a][b], sub);
    }
  }
  return {WeylStructure{hq, nuq}, K2};
}

ExprP gauge_fit_phi(const Metric& a, const Metric& b) {
  return pow(metric_det(a) / metric_det(b), num(1.0 / 6.0));
}

double gauge_equivalence_residual(const WeylStructure& a,
                                  const WeylStructure& b, const Params& P,
                                  const Point& pt) {
  const Chart& ch = *a.h.ch;
  ExprP phi = gauge_fit_phi(a.h, b.h);
  double r = 0.0;
  for (int i = 0; i < ch.dim(); i++)
    for (int j = 0; j < ch.dim(); j++)
      r = std::max(r,
                   std::abs(eval(a.h.g[i][j] - sq(phi) * b.h.g[i][j], P, pt)));
  Form dphi = d(ch, phi);
  for (int i = 0; i < ch.dim(); i++)
    r = std::max(r, std::abs(eval(
                     a.nu({i}) - b.nu({i}) - 2.0 * dphi({i}) / phi, P, pt)));
  return r;
}

}  // namespace ew
