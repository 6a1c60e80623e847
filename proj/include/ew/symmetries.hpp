#pragma once

#include "ew/reduction.hpp"

namespace ew {

/** Point symmetries of the v-extended reduced equation, as vector fields on
 *  the fiber chart (w, wb, v, G):
 *    X1 = d_w + d_wb
 *    X2 = i (d_w - d_wb)
 *    X3 = i (w d_w - wb d_wb)
 *    X4 = d_v
 *    X5 = w d_w + wb d_wb + G d_G
 *    X6 = e^{v sa} sin(v ca) d_G
 *    X7 = e^{v sa} cos(v ca) d_G
 *  X6, X7 carry the slice angle through the parameters sa, ca; they bind at
 *  evaluation time. i out of 1..7 throws. */
Vec generator(int i);

/** Structure constants of the span: [X_{i+1}, X_{j+1}] = c[i][j][k] X_{k+1},
 *  extracted by least squares over the component values at `npts` random
 *  sample points. fit_residual is the max Euclidean misfit over all pairs;
 *  above 1e-10 the extraction throws (the bracket left the span). */
struct StructureConstants {
  double c[7][7][7];
  double fit_residual = 0.0;
};
StructureConstants commutator_table(const Params& p, unsigned seed = 7,
                                    int npts = 20);

/** Linearization of the v-extended residual
 *    (G + G_vv - 2 sa G_v) G_wwb - (m G_wb - i G_vwb)(mt G_w + i G_vw) - 4
 *  at background G, applied to dG. */
ExprP alterform_linearized(const ExprP& G, const ExprP& dG);

/** Perturbation of the field G induced by the point symmetry X_i
 *  (first-order prolongation to the graph): dG = X^G - X^w G_w - X^wb G_wb
 *  - X^v G_v with the fiber coordinate bound to the field. */
ExprP induced_perturbation(int i, const ExprP& G);

/** sup over pts of |alterform_linearized(G, induced_perturbation(i, G))|.
 *  Pre: G solves the equation at the pts (residual < 1e-9; throws
 *  otherwise). Small result = the symmetry maps the solution to solutions
 *  infinitesimally. */
double infinitesimal_invariance(int i, const ExprP& G, const Params& p,
                                const std::vector<Point>& pts);

/** The two three-forms generating the closed ideal on the chart
 *  (w, wb, v, Q, Qb, J), mu = 1 or 2:
 *    omega_1 = i dQ^dJ^dwb + e^{-ia}(Q dJ - J dQ)^dwb^dv + dQ^dQb^dv
 *              - 4 dw^dwb^dv
 *    omega_2 = dQ^dw^dv + e^{ia} J dw^dwb^dv - i dJ^dw^dwb
 *  with e^{±ia} entering through the parameters m, mt. */
Form ideal_form(int mu);

/** Pull omega_1, omega_2 back along the solution graph
 *    (w, wb, v) -> (Q, Qb, J) = (e^{ia}G - i G_v, e^{-ia}G + i G_v, G_wb)
 *  of a real field G and report the component sups at pt. w2 vanishes
 *  identically (it encodes the compatibility of the graph map); w1 vanishes
 *  iff G solves the equation at pt, and for constant G the -4 term
 *  survives. */
struct IdealResidual {
  double w1 = 0.0;
  double w2 = 0.0;
};
IdealResidual ideal_residual(const ExprP& G, const Params& p, const Point& pt);

/** Closure of the ideal: least-squares expansion of d omega_mu as
 *  a^omega_1 + b^omega_2 over one-forms a, b with pointwise coefficients,
 *  at `npts` random points of the 6-chart; returns the max fit residual.
 *  Small result = d omega_mu lies in the ideal. */
double ideal_closure_residual(int mu, const Params& p, unsigned seed = 11,
                              int npts = 6);

}  // namespace ew
