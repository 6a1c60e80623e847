#pragma once

#include <string>
#include <vector>

#include "ew/exterior.hpp"

namespace ew {

/** Linearization of the reduced equation about a background F (chart c3):
 *    L[dF] = (eta dF_wt + dF_uwt) 2S + 2St (eta dF_w - dF_uw)
 *            - (eta^2 dF - dF_uu) F_wwt - 4V dF_wwt,
 *  the first variation of the EWred residual. Zero means dF deforms F
 *  through solutions to first order. */
ExprP linearized_residual(const ExprP& F, const ExprP& dF);

/** Residuals of the pair of first-order relations that characterize RdF as
 *  the recursion image of dF:
 *    r1 = m  e^{mt u} (F_wwt (eta - d_u) - 2S  d_wt) RdF - 2 dF_w,
 *    r2 = mt e^{mt u} (2St   (eta - d_u) - 4V  d_wt) RdF - 2 (eta + d_u) dF.
 *  Both vanish iff (dF, RdF) is an admissible recursion pair. */
struct PairResidual {
  ExprP r1, r2;
};
PairResidual recursion_residual(const ExprP& F, const ExprP& dF,
                                const ExprP& RdF);

/** Integrability obstruction for the pair of relations viewed as a system
 *  for RdF with dF given: solve the two relations algebraically for the
 *  gradient of RdF and return sup |d_wt(RdF_u-part) - (eta - d_u)(RdF_wt
 *  -part)| over the sample points (a built-in sample when pts is empty).
 *  Small means an RdF exists locally; order one means the system is
 *  inconsistent for this dF. */
double consistency_check(const ExprP& F, const ExprP& dF, const Params& p,
                         const std::vector<Point>& pts = {});

/** One rung of the closed-form recursion chains. linear_sup is the sup of
 *  |linearized_residual| over the verification sample; rec1_sup/rec2_sup
 *  are the pair residuals against the previous rung (zero for seeds). */
struct HierarchyStep {
  std::string label;
  ExprP dF;
  double linear_sup = 0;
  double rec1_sup = 0;
  double rec2_sup = 0;
};

/** The two registered chains of closed-form recursion images, rungs 0..depth
 *  (labels U0.., T0..), verified against the supplied background at sample
 *  points before being returned. Throws EvalError when depth exceeds the
 *  registered closed forms (depth > 3) or when the background does not
 *  reproduce the chains. */
std::vector<HierarchyStep> hierarchy(const ExprP& F, const Params& p,
                                     int depth);

/** Null tetrad built from the reduced data on the (t, u, w, wt) chart:
 *    n00 = (m/2) e^{rho t + mt u} (F_wwt (d_t - d_u) - 2S d_wt),
 *    n10 = (1/4) e^{-eta t - 2 rho u} (2St (d_t - d_u) - 4V d_wt),
 *    n01 = d_w,
 *    n11 = (1/(2m)) e^{-m(t+u)} (d_t + d_u). */
struct NullTetrad {
  Vec n00, n10, n01, n11;
};
NullTetrad null_tetrad(const ExprP& F);

/** Determinant of the 4x4 matrix of tetrad components at a point; nonzero
 *  iff the four vectors span. */
cd tetrad_volume(const NullTetrad& nt, const Params& p, const Point& pt);

}  // namespace ew
