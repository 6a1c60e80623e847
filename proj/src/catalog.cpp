#include "ew/catalog.hpp"

#include <cmath>
#include <sstream>

namespace ew {

namespace {

const cd I(0.0, 1.0);

cd extra_or(const Params& p, const std::string& k, cd d) {
  auto it = p.extra.find(k);
  return it == p.extra.end() ? d : it->second;
}

Point rp(cd w, double v) {
  return {{"w", w}, {"wb", std::conj(w)}, {"v", v}};
}

std::vector<Point> r3pts() {
  return {rp(cd(0.4, 0.2), 0.3), rp(cd(-0.6, 0.5), -0.4),
          rp(cd(0.9, -0.3), 0.1)};
}

std::vector<Point> planepts() {
  return {{{"w", cd(0.4, 0.2)}, {"wb", cd(0.4, -0.2)}},
          {{"w", cd(-0.7, 0.5)}, {"wb", cd(-0.7, -0.5)}},
          {{"w", cd(1.1, -0.3)}, {"wb", cd(1.1, 0.3)}}};
}

std::vector<Point> c3pts() {
  return {{{"w", cd(0.5, 0.1)}, {"wt", cd(0.4, -0.2)}, {"u", cd(0.2, 0.1)}},
          {{"w", cd(-0.3, 0.4)}, {"wt", cd(0.7, 0.3)}, {"u", cd(-0.1, 0.2)}}};
}

// z, zt kept near 1 so the log/power branches stay principal
std::vector<Point> c4pts() {
  return {{{"w", cd(0.4, 0.2)},
           {"wt", cd(-0.4, 0.2)},
           {"z", cd(1.1, 0.15)},
           {"zt", cd(1.1, -0.15)}},
          {{"w", cd(0.6, -0.3)},
           {"wt", cd(-0.6, -0.3)},
           {"z", cd(0.9, -0.1)},
           {"zt", cd(0.9, 0.1)}}};
}

std::vector<Point> e4pts() {
  return {{{"w", cd(0.5, 0.1)},
           {"wb", cd(0.5, -0.1)},
           {"z", cd(1.1, 0.2)},
           {"zb", cd(1.1, -0.2)}},
          {{"w", cd(-0.3, 0.4)},
           {"wb", cd(-0.3, -0.4)},
           {"z", cd(0.8, -0.15)},
           {"zb", cd(0.8, 0.15)}}};
}

// polar caps excluded: theta in [0.2, pi - 0.2]
std::vector<Point> bergerpts() {
  return {{{"theta", 0.4}, {"phi", 0.3}, {"psi", 1.1}},
          {{"theta", 1.3}, {"phi", -0.8}, {"psi", 0.2}},
          {{"theta", 2.6}, {"phi", 1.9}, {"psi", -0.7}}};
}

std::vector<Point> jvpts() {
  return {{{"J", cd(1.2)}, {"v", 0.3}}, {{"J", cd(2.1)}, {"v", -0.6}}};
}

std::vector<Point> t3pts() {
  return {{{"w", cd(0.3, 0.1)}, {"wb", cd(0.3, -0.1)}, {"j", cd(0.8)}},
          {{"w", cd(-0.5, 0.4)}, {"wb", cd(-0.5, -0.4)}, {"j", cd(1.6)}}};
}

void require_slice_params(const std::string& name, const Params& p) {
  if (p.kind != SliceKind::Euclidean)
    throw EvalError("catalog: " + name + " needs euclidean-slice parameters");
  if (p.alpha < -M_PI / 2.0 - 1e-12 || p.alpha > 1e-12)
    throw EvalError("catalog: " + name + " needs alpha in [-pi/2, 0]");
}

ExprP rozw2_G() {
  ExprP sa = param("sa"), b = param("b"), v = coord("v");
  return exp(sa * v) * coord("w") * coord("wb") / b +
         4.0 * b * exp(-sa * v) / (1.0 + 3.0 * sq(sa));
}

ExprP rozw2_Fhat() {
  ExprP eta = param("eta"), rho = param("rho"), b = param("b");
  ExprP A = 4.0 * param("m") * param("mt") * b / (sq(eta) - 4.0 * sq(rho));
  return -coord("w") * coord("wt") / b + A * exp(2.0 * rho * coord("u"));
}

// e^{eta t} Fhat on the euclidean slice (zt = zb, wt = -wb), with the
// exponent of the second power corrected from the quoted display:
// the weight factors are (z zb)^{ca^2/2} (zb/z)^{i sa ca / 2} and
// (z zb)^{(1+sa^2)/2} (zb/z)^{-i sa ca / 2}
ExprP rozw2_Omega_slice() {
  ExprP zz = coord("z") * coord("zb");
  ExprP ph = coord("zb") / coord("z");
  ExprP sa = param("sa"), ca = param("ca"), b = param("b");
  ExprP t1 = pow(zz, 0.5 * sq(ca)) * pow(ph, (0.5 * I) * sa * ca) *
             coord("w") * coord("wb") / b;
  ExprP t2 = (4.0 * b / (1.0 + 3.0 * sq(sa))) * pow(zz, 0.5 * (1.0 + sq(sa))) *
             pow(ph, (-0.5 * I) * sa * ca);
  return t1 + t2;
}

SolutionEntry build_flat4(const Params& p) {
  SolutionEntry e;
  e.name = "flat4";
  e.chart = "c4";
  e.params = p;
  e.fields["Omega"] = flat_null_potential();
  e.claims = {{"heavenly", "Omega", true, 1e-12, c4pts()},
              {"riemann_flat", "Omega", true, 1e-9, c4pts()}};
  e.notes = "flat metric in null coordinates";
  return e;
}

SolutionEntry build_flat_canonical(const Params& p) {
  if (std::abs(p.eta) < 1e-12)
    throw EvalError("catalog: flat_canonical needs eta != 0");
  SolutionEntry e;
  e.name = "flat_canonical";
  e.chart = "c4";
  e.params = p;
  e.fields["Omega"] = flat_canonical_potential();
  ExprP eta = param("eta"), rho = param("rho"), u = coord("u");
  e.fields["F"] = coord("w") * exp(-eta * u) +
                  (param("mt") / eta) * coord("wt") * exp((eta + 2.0 * rho) * u);
  e.claims = {{"heavenly", "Omega", true, 1e-10, c4pts()},
              {"ewred", "F", true, 1e-10, c3pts()},
              {"riemann_flat", "Omega", true, 1e-7, c4pts()}};
  e.notes = "flat potential adapted to the canonical symmetry; principal "
            "branch of the zt powers (keep zt off the negative reals)";
  return e;
}

SolutionEntry build_rozw1(const Params& p) {
  require_slice_params("rozw1", p);
  SolutionEntry e;
  e.name = "rozw1";
  e.chart = "r3";
  e.params = p;
  ExprP G = 4.0 * param("b") + coord("w") * coord("wb") / param("b");
  e.fields["G"] = G;
  e.fields["Psi"] = log(G);
  e.has_structure = true;
  e.structure = liouville_structure(e.fields["Psi"]);
  e.claims = {{"alterform", "G", true, 1e-10, r3pts()},
              {"liouville", "Psi", true, 1e-10, planepts()},
              {"ew_structure", "", true, 1e-8, r3pts()}};
  e.notes = "v-independent solution G = e^Psi";
  return e;
}

SolutionEntry build_rozw2(const Params& p) {
  require_slice_params("rozw2", p);
  SolutionEntry e;
  e.name = "rozw2";
  e.chart = "r3";
  e.params = p;
  e.fields["G"] = rozw2_G();
  e.fields["F"] = F_from_G(e.fields["G"]);
  e.fields["Fhat"] = rozw2_Fhat();
  e.fields["Omega"] = potential_from_reduced(e.fields["Fhat"]);
  e.fields["Omega_slice"] = rozw2_Omega_slice();
  e.has_structure = true;
  e.structure = build_ew_from_F({e.fields["G"], p, ReducedForm::Alterform}).ew;
  e.claims = {{"alterform", "G", true, 1e-10, r3pts()},
              {"euclid", "F", true, 1e-10, r3pts()},
              {"ewred", "Fhat", true, 1e-10, c3pts()},
              {"heavenly", "Omega", true, 1e-9, c4pts()},
              {"heavenly_slice", "Omega_slice", true, 1e-9, e4pts()},
              {"riemann_flat", "Omega", true, 1e-6, {c4pts()[0]}},
              {"ew_structure", "", true, 1e-8, r3pts()}};
  e.notes = "scaling-invariant solution; the 4-metric is flat. Omega_slice "
            "uses principal branches (z off the negative reals) and the "
            "corrected weight (z zb)^{(1+sa^2)/2} (zb/z)^{-i sa ca/2} on the "
            "second term";
  return e;
}

SolutionEntry build_berger(const Params& p) {
  require_slice_params("berger", p);
  SolutionEntry e;
  e.name = "berger";
  e.chart = "berger";
  e.params = p;
  const Chart& ch = chart("berger");
  Form sig = dx(ch, "psi") - cos(coord("theta")) * dx(ch, "phi");
  Metric h = metric_zero(ch);
  add_sym(h, num(0.25), dx(ch, "theta"), dx(ch, "theta"));
  add_sym(h, 0.25 * sq(sin(coord("theta"))), dx(ch, "phi"), dx(ch, "phi"));
  add_sym(h, 0.25 * sq(param("ca")), sig, sig);
  Form nu = (-2.0 * param("sa") * param("ca")) * sig;
  e.has_structure = true;
  e.structure = {h, nu};
  e.claims = {{"ew_structure", "", true, 1e-8, bergerpts()}};
  e.notes = "squashed sphere at 1/4 the quoted scale, so alpha = 0 is the "
            "unit round sphere (Ricci = 2h); the rescale does not touch nu. "
            "Sampling keeps theta in [0.2, pi - 0.2]";
  return e;
}

SolutionEntry build_liouville_general(const Params& p) {
  require_slice_params("liouville_general", p);
  SolutionEntry e;
  e.name = "liouville_general";
  e.chart = "plane";
  e.params = p;
  e.fields["Psi"] = liouville_psi_from_P(coord("w"));
  e.fields["G"] = exp(e.fields["Psi"]);
  e.claims = {{"liouville", "Psi", true, 1e-10, planepts()},
              {"alterform", "G", true, 1e-10, r3pts()}};
  e.notes = "P = w; other developing maps via liouville_psi_from_P. "
            "Normalization corrected: e^Psi = 2(1 + P Pb)/sqrt(P_w Pb_wb)";
  return e;
}

SolutionEntry build_rjv_separable(const Params& p) {
  require_slice_params("rjv_separable", p);
  double a1 = extra_or(p, "a1", 1.0).real();
  double a2 = extra_or(p, "a2", 0.0).real();
  double a3 = extra_or(p, "a3", 0.0).real();
  SolutionEntry e;
  e.name = "rjv_separable";
  e.chart = "J_v";
  e.params = p;
  e.fields["R"] = rjv_separable(a1, a2, a3);
  e.claims = {{"rjv", "R", false, 0.0, jvpts()}};
  e.notes = "separable candidate; the residual is reported, not asserted: "
            "it is a1 [ (s^2-1)(e^R (a1 s - 1) + 1)/s^3 + 2 ] with "
            "s = sqrt(4 J^-2 + 1), and vanishes iff a1 = 0";
  return e;
}

SolutionEntry build_toda_sep(const Params& p) {
  require_slice_params("toda_sep", p);
  if (std::abs(p.alpha + M_PI / 2.0) > 1e-12)
    throw EvalError("catalog: toda_sep needs alpha = -pi/2");
  double gam = extra_or(p, "gamma", 0.35).real();
  if (gam <= 0.0) throw EvalError("catalog: toda_sep needs gamma > 0");
  SolutionEntry e;
  e.name = "toda_sep";
  e.chart = "toda3";
  e.params = p;
  e.fields["v"] = -log(num(1.0) + coord("w") * coord("wb")) +
                  0.5 * log(sq(coord("j")) / num(4.0) + num(gam));
  ExprP y = exp(coord("v")) * (num(1.0) + coord("w") * coord("wb"));
  ExprP r = pow(sq(y) - num(gam), 0.5);
  double sg = std::sqrt(gam);
  e.fields["F"] = 2.0 * r - 2.0 * sg * ((-I) * atanh(I * r / num(sg)));
  e.has_structure = true;
  e.structure = lebrun_ward_structure(e.fields["v"]);
  e.claims = {{"toda", "v", true, 1e-10, t3pts()},
              {"euclid", "F", true, 1e-9, r3pts()},
              {"ew_structure", "", true, 1e-8, t3pts()}};
  e.notes = "separable Toda solution with gamma > 0 and its slice potential "
            "(valid where e^{2v}(1 + w wb)^2 > gamma)";
  return e;
}

SolutionEntry build(const std::string& name, const Params& p) {
  if (p.b <= 0.0) throw EvalError("catalog: b must be positive");
  if (name == "flat4") return build_flat4(p);
  if (name == "flat_canonical") return build_flat_canonical(p);
  if (name == "rozw1") return build_rozw1(p);
  if (name == "rozw2") return build_rozw2(p);
  if (name == "berger") return build_berger(p);
  if (name == "liouville_general") return build_liouville_general(p);
  if (name == "rjv_separable") return build_rjv_separable(p);
  if (name == "toda_sep") return build_toda_sep(p);
  throw EvalError("catalog: unknown entry '" + name + "'");
}

void check_claims(const SolutionEntry& e) {
  for (const auto& c : e.claims) {
    if (!c.zero) continue;
    double r = claim_residual(e, c);
    if (!(r <= c.tol)) {
      std::ostringstream os;
      os << "catalog: " << e.name << " claim " << c.equation << " residual "
         << r << " exceeds " << c.tol;
      throw EvalError(os.str());
    }
  }
}

Params default_params(const std::string& name) {
  if (name == "toda_sep") return Params::euclidean(-M_PI / 2.0, 1.0);
  return Params::euclidean(-0.5, 1.0);
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"berger",   "flat4",          "flat_canonical", "liouville_general",
          "rjv_separable", "rozw1",     "rozw2",          "toda_sep"};
}

SolutionEntry get(const std::string& name) {
  return get(name, default_params(name));
}

SolutionEntry get(const std::string& name, const Params& params) {
  SolutionEntry e = build(name, params);
  check_claims(e);
  return e;
}

double claim_residual(const SolutionEntry& e, const Claim& c) {
  auto fld = [&](const std::string& n) -> ExprP {
    auto it = e.fields.find(n);
    if (it == e.fields.end())
      throw EvalError("catalog: " + e.name + " has no field '" + n + "'");
    return it->second;
  };
  double r = 0.0;
  for (const auto& pt : c.pts) {
    double v = 0.0;
    if (c.equation == "heavenly")
      v = std::abs(heavenly_residual({fld(c.field), e.params}, pt));
    else if (c.equation == "heavenly_slice")
      v = std::abs(eval(euclidean_slice_residual(fld(c.field)), e.params, pt));
    else if (c.equation == "riemann_flat")
      v = riemann_sup(plebanski_metric({fld(c.field), e.params}), e.params, pt);
    else if (c.equation == "ewred")
      v = std::abs(
          reduced_residual({fld(c.field), e.params, ReducedForm::EWred}, pt));
    else if (c.equation == "euclid")
      v = std::abs(
          reduced_residual({fld(c.field), e.params, ReducedForm::Euclid}, pt));
    else if (c.equation == "alterform")
      v = std::abs(reduced_residual(
          {fld(c.field), e.params, ReducedForm::Alterform}, pt));
    else if (c.equation == "liouville")
      v = std::abs(residual_2d(Kind2D::Liouville, fld(c.field), e.params, pt));
    else if (c.equation == "rjv")
      v = std::abs(residual_2d(Kind2D::Rjv, fld(c.field), e.params, pt));
    else if (c.equation == "toda")
      v = std::abs(residual_2d(Kind2D::Toda, fld(c.field), e.params, pt));
    else if (c.equation == "hypercr")
      v = std::abs(residual_2d(Kind2D::HyperCR, fld(c.field), e.params, pt));
    else if (c.equation == "ew_structure") {
      if (!e.has_structure)
        throw EvalError("catalog: " + e.name + " has no structure");
      v = ew_residual_sup(e.structure, e.params, pt);
    } else {
      throw EvalError("catalog: unknown claim equation '" + c.equation + "'");
    }
    r = std::max(r, v);
  }
  return r;
}

double verify_entry(const SolutionEntry& e) {
  double r = 0.0;
  for (const auto& c : e.claims)
    if (c.zero) r = std::max(r, claim_residual(e, c));
  return r;
}

ExprP liouville_psi_from_P(const ExprP& P) {
  const Chart& pl = chart("plane");
  ExprP Pb = bar(P, pl);
  ExprP den = pow(diff(P, pl, "w") * diff(Pb, pl, "wb"), 0.5);
  return log(2.0 * (num(1.0) + P * Pb) / den);
}

ExprP liouville_psi_displayed(const ExprP& P) {
  const Chart& pl = chart("plane");
  ExprP Pb = bar(P, pl);
  ExprP den = pow(diff(P, pl, "w") * diff(Pb, pl, "wb"), 0.5);
  return log(I * (P - Pb) / (4.0 * den));
}

SolutionEntry transform_solution(const SolutionEntry& e, cd B, cd C) {
  auto it = e.fields.find("G");
  if (it == e.fields.end())
    throw EvalError("transform_solution: entry has no G field");
  ExprP G0 = it->second;
  if (depends_on(G0, "v"))
    throw EvalError("transform_solution: input must be v-independent");
  if (std::abs(e.params.lookup("ca")) < 1e-12)
    throw EvalError("transform_solution: degenerate at cos alpha = 0");

  const Chart& r3 = chart("r3");
  ExprP Gwwb = diff(diff(G0, r3, "w"), r3, "wb");
  cd g1 = eval(Gwwb, e.params, rp(cd(0.37, 0.21), 0.0));
  cd g2 = eval(Gwwb, e.params, rp(cd(-0.52, 0.4), 0.0));
  if (std::abs(g1 - g2) > 1e-10 || std::abs(g1) < 1e-12)
    throw EvalError("transform_solution: needs constant nonzero G_wwb");
  cd bm = 1.0 / g1;  // the b of the input family

  ExprP sa = param("sa"), ca = param("ca"), v = coord("v");
  ExprP g = num(-4.0 * bm) +
            (num(4.0 * bm / (B * B)) / (1.0 + 3.0 * sq(sa))) *
                exp(-2.0 * sa * v) +
            num(C) * exp((I * ca) * v) + num(std::conj(C)) * exp((-I * ca) * v);
  SolutionEntry out;
  out.name = e.name + "-transformed";
  out.chart = "r3";
  out.params = e.params;
  out.fields["G"] = num(B) * exp(sa * v) * (G0 + g);
  out.claims = {{"alterform", "G", true, 1e-10, r3pts()}};
  out.notes = "symmetry-family transform of " + e.name;
  check_claims(out);
  return out;
}

}  // namespace ew
