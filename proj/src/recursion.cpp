#include "ew/recursion.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace ew {

namespace {

ExprP D(const ExprP& f, const char* a) { return diff(f, chart("c3"), a); }

// the second-derivative combinations the reduced equation is built from
struct Pieces {
  ExprP S2, St2, V4, Fwwt;
};

Pieces pieces(const ExprP& F) {
  ExprP eta = param("eta");
  ExprP Fu = D(F, "u");
  Pieces q;
  q.S2 = eta * D(F, "w") - D(Fu, "w");
  q.St2 = eta * D(F, "wt") + D(Fu, "wt");
  q.V4 = sq(eta) * F - D(Fu, "u");
  q.Fwwt = D(D(F, "w"), "wt");
  return q;
}

const std::vector<Point>& builtin_sample() {
  static const std::vector<Point> pts = {
      {{"w", cd(0.40, 0.20)}, {"wt", cd(-0.30, 0.25)}, {"u", cd(0.12, -0.08)}},
      {{"w", cd(-0.55, 0.15)}, {"wt", cd(0.35, -0.40)}, {"u", cd(-0.10, 0.14)}},
      {{"w", cd(0.25, -0.45)}, {"wt", cd(-0.50, -0.10)}, {"u", cd(0.18, 0.05)}},
      {{"w", cd(0.60, 0.05)}, {"wt", cd(0.20, 0.30)}, {"u", cd(-0.15, -0.12)}},
      {{"w", cd(-0.35, -0.30)}, {"wt", cd(0.45, 0.10)}, {"u", cd(0.08, 0.20)}},
  };
  return pts;
}

}  // namespace

ExprP linearized_residual(const ExprP& F, const ExprP& dF) {
  ExprP eta = param("eta");
  Pieces q = pieces(F);
  ExprP du = D(dF, "u");
  return (eta * D(dF, "wt") + D(du, "wt")) * q.S2 +
         q.St2 * (eta * D(dF, "w") - D(du, "w")) -
         (sq(eta) * dF - D(du, "u")) * q.Fwwt - q.V4 * D(D(dF, "w"), "wt");
}

PairResidual recursion_residual(const ExprP& F, const ExprP& dF,
                                const ExprP& RdF) {
  ExprP eta = param("eta"), m = param("m"), mt = param("mt");
  ExprP wgt = exp(mt * coord("u"));
  Pieces q = pieces(F);
  ExprP X = eta * RdF - D(RdF, "u");
  ExprP Y = D(RdF, "wt");
  PairResidual r;
  r.r1 = m * wgt * (q.Fwwt * X - q.S2 * Y) - 2.0 * D(dF, "w");
  r.r2 = mt * wgt * (q.St2 * X - q.V4 * Y) - 2.0 * (eta * dF + D(dF, "u"));
  return r;
}

double consistency_check(const ExprP& F, const ExprP& dF, const Params& p,
                         const std::vector<Point>& pts) {
  ExprP eta = param("eta"), m = param("m"), mt = param("mt");
  Pieces q = pieces(F);
  // strip the weights and solve the 2x2 system for the two first-order
  // combinations of the unknown image
  ExprP det = q.S2 * q.St2 - q.Fwwt * q.V4;
  ExprP wgt = exp(-mt * coord("u"));
  ExprP Pr = (2.0 / m) * wgt * D(dF, "w");
  ExprP Wr = (2.0 / mt) * wgt * (eta * dF + D(dF, "u"));
  ExprP X = (-q.V4 * Pr + q.S2 * Wr) / det;    // (eta - d_u) of the image
  ExprP Y = (-q.St2 * Pr + q.Fwwt * Wr) / det;  // d_wt of the image
  // cross-derivatives must agree for the image to exist
  ExprP obstruction = D(X, "wt") - (eta * Y - D(Y, "u"));
  const std::vector<Point>& sample = pts.empty() ? builtin_sample() : pts;
  double sup = 0;
  for (const Point& pt : sample)
    sup = std::max(sup, std::abs(eval(obstruction, p, pt)));
  return sup;
}

std::vector<HierarchyStep> hierarchy(const ExprP& F, const Params& p,
                                     int depth) {
  if (depth < 0 || depth > 3)
    throw EvalError("hierarchy: no closed form registered past depth 3");
  ExprP eta = param("eta"), rho = param("rho"), m = param("m"),
        mt = param("mt");
  ExprP u = coord("u");
  // chain of pure exponentials in u; the first relation is trivial along it
  // and the second fixes each coefficient from the previous rung
  ExprP c2 = 2.0 * sq(eta) / (m * sq(mt) * (m + eta));
  ExprP k3 = -c2 * rho * eta / (m * sq(mt) * (4.0 * eta + 2.0 * rho));
  std::vector<ExprP> uc = {exp(-eta * u), exp(eta * u), c2 * exp(-m * u),
                           k3 * exp(-(3.0 * eta + 2.0 * rho) * u)};
  // chain seeded so the image is F_w, which the next step annihilates
  std::vector<ExprP> wc = {(2.0 * mt / (m + eta)) * exp(m * u), D(F, "w"),
                           num(0.0), num(0.0)};
  const char* tag[2] = {"U", "T"};
  const std::vector<ExprP>* chains[2] = {&uc, &wc};
  std::vector<HierarchyStep> out;
  for (int c = 0; c < 2; ++c) {
    for (int n = 0; n <= depth; ++n) {
      HierarchyStep st;
      st.label = std::string(tag[c]) + std::to_string(n);
      st.dF = (*chains[c])[n];
      ExprP lin = linearized_residual(F, st.dF);
      for (const Point& pt : builtin_sample()) {
        st.linear_sup = std::max(st.linear_sup, std::abs(eval(lin, p, pt)));
        if (n > 0) {
          PairResidual r = recursion_residual(F, (*chains[c])[n - 1], st.dF);
          st.rec1_sup = std::max(st.rec1_sup, std::abs(eval(r.r1, p, pt)));
          st.rec2_sup = std::max(st.rec2_sup, std::abs(eval(r.r2, p, pt)));
        }
      }
      if (st.linear_sup > 1e-9 || st.rec1_sup > 1e-9 || st.rec2_sup > 1e-9)
        throw EvalError(
            "hierarchy: background does not reproduce the registered chains");
      out.push_back(std::move(st));
    }
  }
  return out;
}

NullTetrad null_tetrad(const ExprP& F) {
  const Chart& ct = chart("c4t");
  auto Dt = [&](const ExprP& f, const char* a) { return diff(f, ct, a); };
  ExprP eta = param("eta"), rho = param("rho"), m = param("m"),
        mt = param("mt");
  ExprP t = coord("t"), u = coord("u");
  ExprP Fu = Dt(F, "u");
  ExprP S2 = eta * Dt(F, "w") - Dt(Fu, "w");
  ExprP St2 = eta * Dt(F, "wt") + Dt(Fu, "wt");
  ExprP V4 = sq(eta) * F - Dt(Fu, "u");
  ExprP Fwwt = Dt(Dt(F, "w"), "wt");
  ExprP a = (m / 2.0) * exp(rho * t + mt * u);
  ExprP b = 0.25 * exp(-eta * t - 2.0 * rho * u);
  ExprP c = (0.5 / m) * exp(-m * (t + u));
  return NullTetrad{
      vec(ct, {{"t", a * Fwwt}, {"u", -(a * Fwwt)}, {"wt", -(a * S2)}}),
      vec(ct, {{"t", b * St2}, {"u", -(b * St2)}, {"wt", -(b * V4)}}),
      vec(ct, {{"w", num(1.0)}}),
      vec(ct, {{"t", c}, {"u", c}})};
}

cd tetrad_volume(const NullTetrad& nt, const Params& p, const Point& pt) {
  const Vec* rows[4] = {&nt.n00, &nt.n10, &nt.n01, &nt.n11};
  Eigen::Matrix4cd M;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) M(i, j) = eval(rows[i]->comp[j], p, pt);
  return M.determinant();
}

}  // namespace ew
