#include "ew/heavenly.hpp"

#include <cmath>
#include <stdexcept>

namespace ew {

namespace {

struct Hess {
  ExprP wwt, wzt, zwt, zzt;
};

Hess hessian_block(const ExprP& O) {
  const Chart& c = chart("c4");
  ExprP Ow = diff(O, c, "w");
  ExprP Oz = diff(O, c, "z");
  Hess h;
  h.wwt = diff(Ow, c, "wt");
  h.wzt = diff(Ow, c, "zt");
  h.zwt = diff(Oz, c, "wt");
  h.zzt = diff(Oz, c, "zt");
  return h;
}

}  // namespace

ExprP heavenly_residual_expr(const PlebanskiData& pd) {
  Hess h = hessian_block(pd.Omega);
  return h.wzt * h.zwt - h.wwt * h.zzt - num(1);
}

cd heavenly_residual(const PlebanskiData& pd, const Point& pt) {
  return eval(heavenly_residual_expr(pd), pd.P, pt);
}

Metric plebanski_metric(const PlebanskiData& pd) {
  const Chart& c = chart("c4");
  Hess h = hessian_block(pd.Omega);
  Metric g = metric_zero(c);
  add_sym(g, h.wwt, dx(c, "w"), dx(c, "wt"));
  add_sym(g, h.wzt, dx(c, "w"), dx(c, "zt"));
  add_sym(g, h.zwt, dx(c, "z"), dx(c, "wt"));
  add_sym(g, h.zzt, dx(c, "z"), dx(c, "zt"));
  return g;
}

Vec can_killing(const Params&) {
  const Chart& c = chart("c4");
  ExprP e = param("eta"), r = param("rho");
  return vec(c, {{"z", (e + r) * coord("z")}, {"zt", (e - r) * coord("zt")}});
}

double conformal_killing_residual(const PlebanskiData& pd, const Vec& K,
                                  cd eta, const Point& pt) {
  Metric g = plebanski_metric(pd);
  Metric lg = lie(K, g);
  double r = 0;
  int n = g.ch->dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cd v = eval(lg.g[i][j] - num(eta) * g.g[i][j], pd.P, pt);
      r = std::max(r, std::abs(v));
    }
  return r;
}

SdTwoForms sd_two_forms(const PlebanskiData& pd) {
  const Chart& c = chart("c4");
  Hess h = hessian_block(pd.Omega);
  Form dw = dx(c, "w"), dz = dx(c, "z"), dwt = dx(c, "wt"), dzt = dx(c, "zt");
  SdTwoForms s;
  s.s00 = wedge(dwt, dzt);
  s.s11 = wedge(dw, dz);
  s.s01 = h.wwt * wedge(dw, dwt) + h.wzt * wedge(dw, dzt) +
          h.zwt * wedge(dz, dwt) + h.zzt * wedge(dz, dzt);
  return s;
}

Form sd_wedge_residual(const PlebanskiData& pd) {
  SdTwoForms s = sd_two_forms(pd);
  return wedge(s.s01, s.s01) - 2.0 * wedge(s.s00, s.s11);
}

cd sd_eigenvalue(const PlebanskiData& pd, const Point& pt, double tol) {
  Geometry geo = geometry(plebanski_metric(pd));
  SdTwoForms s = sd_two_forms(pd);
  cd sigma = 0;
  bool have = false;
  for (const Form* f : {&s.s00, &s.s11, &s.s01}) {
    Form sf = star(geo, *f);
    // pick the largest component to read off the candidate eigenvalue
    cd num_ = 0, den = 0;
    for (const auto& [idx, e] : f->comp) {
      cd fv = eval(e, pd.P, pt);
      if (std::abs(fv) > std::abs(den)) {
        den = fv;
        num_ = eval(sf(idx), pd.P, pt);
      }
    }
    if (std::abs(den) < tol) throw EvalError("sd_eigenvalue: degenerate form");
    cd sig = num_ / den;
    if (have && std::abs(sig - sigma) > tol)
      throw EvalError("sd_eigenvalue: forms span different eigenspaces");
    sigma = sig;
    have = true;
    // residual check on every component of f and *f
    Form res = sf - sig * (*f);
    for (const auto& [idx, e] : res.comp)
      if (std::abs(eval(e, pd.P, pt)) > tol * std::max(1.0, std::abs(den)))
        throw EvalError("sd_eigenvalue: not an eigenform");
  }
  return sigma;
}

ExprP wave_operator_4d(const PlebanskiData& pd, const ExprP& f) {
  const Chart& c = chart("c4");
  Geometry geo = geometry(plebanski_metric(pd));
  Form dsdf = d(star(geo, d(c, f)));
  return dsdf({0, 1, 2, 3}) / geo.volc;
}

std::map<std::string, ExprP> zz_from_tu() {
  ExprP t = coord("t"), u = coord("u");
  return {{"z", exp(param("m") * (t + u))}, {"zt", exp(param("mt") * (t - u))}};
}

std::map<std::string, ExprP> tu_from_zz() {
  ExprP lz = log(coord("z")) / param("m");
  ExprP lzt = log(coord("zt")) / param("mt");
  return {{"t", 0.5 * (lz + lzt)}, {"u", 0.5 * (lz - lzt)}};
}

ExprP potential_from_reduced(const ExprP& F) {
  auto m = tu_from_zz();
  return exp(param("eta") * m.at("t")) * substitute(F, {{"u", m.at("u")}});
}

ExprP euclidean_slice_potential(const ExprP& Omega) {
  return substitute(Omega, {{"wt", -coord("wb")}, {"zt", coord("zb")}});
}

ExprP euclidean_slice_residual(const ExprP& Or) {
  const Chart& c = chart("e4");
  ExprP Ow = diff(Or, c, "w");
  ExprP Oz = diff(Or, c, "z");
  return diff(Ow, c, "wb") * diff(Oz, c, "zb") -
         diff(Ow, c, "zb") * diff(Oz, c, "wb") - num(1);
}

ExprP flat_null_potential() {
  return coord("w") * coord("zt") + coord("z") * coord("wt");
}

ExprP flat_canonical_potential() {
  ExprP e = param("eta"), r = param("rho"), mt = param("mt");
  ExprP zt = coord("zt");
  return coord("w") * pow(zt, e / mt) +
         (mt / e) * coord("wt") * coord("z") * pow(zt, -(r / mt));
}

}  // namespace ew
