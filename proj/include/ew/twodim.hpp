#pragma once

#include "ew/reduction.hpp"

namespace ew {

/** Two-dimensional reductions and limits of the reduced equation. Each kind
 *  carries its own chart:
 *
 *  Toda       toda3 (w, wb, j):  v_wwb + 2 (e^{2v})_jj = 0
 *  HyperCR    r3    (w, wb, v):  F_wwb (F + F_vv)
 *                                  - (F_w + i F_vw)(F_wb - i F_vwb) = 4
 *                                (the sa = 0 limit of the slice equation)
 *  Liouville  plane (w, wb):     Psi_wwb = 4 e^{-2 Psi}
 *  MEquation  xi_v  (xi, v):     M_vv + 2 sa M_vxi + M_xixi
 *                                  + 4 e^M (M_xixi + M_xi^2 + 3 M_xi + 2) = 0
 *  Rjv        J_v   (J, v):      4 (e^R)_JJ + R_vv + 2 sa (J R_J)_v
 *                                  + J (J R_J)_J = 0
 *  FLinear    xi_v  (xi, v):     4 e^{-2 xi}(f_xixi - f_xi) + f_vv
 *                                  + 2 sa f_xiv + f_xixi = 0
 *  X3Full     R_v   (R, v):      (G + G_vv - 2 sa G_v) G_RR
 *                                  - (m G_R - i G_vR)(mt G_R + i G_vR) = 4 e^R
 *
 *  X3Full is the rotation-invariant branch G(v, R = ln(w wb)): substituting
 *  R = log(w wb) into the alterform residual gives e^{-R} times the X3Full
 *  residual. MEquation and Rjv are two coordinatizations of the same
 *  equation: with xi = ln J and M(v, xi) = R - 2 xi the residuals agree
 *  exactly. FLinear is the translation-invariant branch.
 */
enum class Kind2D { Toda, HyperCR, Liouville, MEquation, Rjv, FLinear, X3Full };

const Chart& chart_2d(Kind2D kind);

/** LHS - RHS of the kind's equation, as a field on chart_2d(kind). */
ExprP residual_2d_expr(Kind2D kind, const ExprP& f);
cd residual_2d(Kind2D kind, const ExprP& f, const Params& p, const Point& pt);

/** The separable candidate R = a1 v^2 + a2 v + a1 arctanh(sqrt(4 J^-2 + 1))
 *  + a3. Its Rjv residual is reported, not asserted: it vanishes iff a1 = 0;
 *  for a1 != 0 the measured residual is
 *    a1 [ (s^2-1)(e^R (a1 s - 1) + 1)/s^3 + 2 ],  s = sqrt(4 J^-2 + 1). */
ExprP rjv_separable(double a1, double a2, double a3);

struct TodaChain {
  ExprP j;     // F_v on r3
  ExprP pbar;  // F_wb on r3
  /** Boyer-Finley residual of the implicit v(w, wb, j) defined by j = F_v,
   *  written through the inverse function theorem as a field on r3. It
   *  vanishes wherever the slice equation holds; for any F with F_vv != 0,
   *  toda_residual = -(1/F_vv) d_v(E / F_vv) where E is the slice residual. */
  ExprP toda_residual;
};

/** The sa = -1 branch: trade v for j = F_v. Requires the pure-rotation
 *  parameters (throws otherwise) and F_vv != 0 at the sample points (throws,
 *  naming the point). Accepts any of the three reduced forms. */
TodaChain toda_reduction_chain(const ReducedData& d,
                               const std::vector<Point>& sample_pts = {});

/** h = e^{2v} dw dwb + (1/16) dj^2, nu = 4 v_j dj on toda3, for an explicit
 *  v(w, wb, j). Einstein-Weyl iff v solves the Toda equation. */
WeylStructure lebrun_ward_structure(const ExprP& v);

}  // namespace ew
