#include "ew/lax.hpp"

#include <Eigen/Dense>

namespace ew {

namespace {

const cd I(0.0, 1.0);

}  // namespace

LaxPair build_lax(const ExprP& background, LaxKind kind) {
  if (kind == LaxKind::Heavenly) {
    const Chart& c4 = chart("c4");
    const Chart& cr = chart("corr5");
    auto D2 = [&](const char* a, const char* b) {
      return diff(diff(background, c4, a), c4, b);
    };
    ExprP lam = coord("lam");
    Vec L0 = vec(cr, {{"zt", D2("w", "wt")},
                      {"wt", -D2("w", "zt")},
                      {"w", -lam}});
    Vec L1 = vec(cr, {{"zt", D2("z", "wt")},
                      {"wt", -D2("z", "zt")},
                      {"z", -lam}});
    return {L0, L1, kind};
  }
  if (kind == LaxKind::Reduced) {
    const Chart& c3 = chart("c3");
    const Chart& cr = chart("corr4");
    auto D = [&](const ExprP& f, const char* a) { return diff(f, c3, a); };
    ExprP F = background;
    ExprP eta = param("eta"), rho = param("rho");
    ExprP lt = coord("lamt");
    // weight e^{mt u} on both fields and 2 mt lamt on both spectral terms:
    // this is the scale-free pair obtained by pushing the heavenly one
    // through Omega = e^{eta t} F; on the mt = 1/m slice it is the quoted
    // display with the L1 prefactor corrected from mt to m
    ExprP wgt = exp(param("mt") * coord("u"));
    ExprP sp = 2.0 * param("mt") * lt;
    ExprP a0 = wgt * D(D(F, "w"), "wt");                       // on d_u part
    ExprP b0 = wgt * (eta * D(F, "w") - D(D(F, "u"), "w"));    // on d_wt
    ExprP a1 = wgt * (eta * D(F, "wt") + D(D(F, "u"), "wt"));
    ExprP b1 = wgt * (sq(eta) * F - D(D(F, "u"), "u"));
    Vec L0 = vec(cr, {{"u", a0},
                      {"lamt", rho * lt * a0},
                      {"wt", b0},
                      {"w", sp}});
    Vec L1 = vec(cr, {{"u", a1 + sp},
                      {"lamt", rho * lt * a1 - rho * lt * sp},
                      {"wt", b1}});
    return {L0, L1, kind};
  }
  if (kind == LaxKind::HyperCR) {
    const Chart& r3 = chart("r3");
    const Chart& cr = chart("r3lam");
    auto D = [&](const ExprP& f, const char* a) { return diff(f, r3, a); };
    ExprP F = background;
    ExprP ph = exp(I * coord("v"));
    ExprP lam = coord("lam");
    Vec L0 = vec(cr, {{"v", ph * I * D(D(F, "w"), "wb")},
                      {"wb", -ph * (D(F, "w") + I * D(D(F, "v"), "w"))},
                      {"w", 2.0 * lam}});
    Vec L1 = vec(cr, {{"v", ph * (D(D(F, "v"), "wb") + I * D(F, "wb")) -
                               2.0 * I * lam},
                      {"wb", -ph * (F + D(D(F, "v"), "v"))}});
    return {L0, L1, kind};
  }
  throw EvalError("build_lax: unknown kind");
}

SpanFit fit_in_span(const std::vector<Vec>& basis, const Vec& target,
                    const Params& p, const Point& pt) {
  const int n = target.ch->dim();
  const int m = (int)basis.size();
  Eigen::MatrixXcd A(n, m);
  Eigen::VectorXcd b(n);
  for (int i = 0; i < n; ++i) {
    b(i) = eval(target.comp[i], p, pt);
    for (int j = 0; j < m; ++j) A(i, j) = eval(basis[j].comp[i], p, pt);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(0) < 1e-13 || sv(m - 1) < 1e-12 * sv(0))
    throw EvalError("fit_in_span: degenerate span at the sample point");
  Eigen::VectorXcd x = svd.solve(b);
  SpanFit out;
  out.residual = (A * x - b).norm();
  for (int j = 0; j < m; ++j) out.coeff.push_back(x(j));
  return out;
}

double span_residual(const LaxPair& lp, const Params& p, const Point& pt) {
  Vec C = bracket(lp.L0, lp.L1);
  return fit_in_span({lp.L0, lp.L1}, C, p, pt).residual;
}

Vec lifted_killing() {
  const Chart& cr = chart("corr5");
  ExprP eta = param("eta"), rho = param("rho");
  return vec(cr, {{"z", (eta + rho) * coord("z")},
                  {"zt", (eta - rho) * coord("zt")},
                  {"lam", rho * coord("lam")}});
}

ExprP invariant_parameter() {
  std::map<std::string, ExprP> tu = tu_from_zz();
  return coord("lam") * exp(-param("rho") * tu.at("t"));
}

}  // namespace ew
