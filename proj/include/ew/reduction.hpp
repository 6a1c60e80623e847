#pragma once

#include <array>

#include "ew/weyl.hpp"

namespace ew {

/** The three equivalent forms of the reduced equation:
 *  - EWred: holomorphic F(w, wt, u),
 *    (eta F_wt + F_uwt)(eta F_w - F_uw) - (eta^2 F - F_uu) F_wwt
 *      = 4 m mt e^{2 rho u}   (the factor m mt = +-1 keeps both signature
 *    conventions; it is 1 in the euclidean normalization),
 *  - Euclid: F(w, wb, v) on the slice u = iv, wt = -wb,
 *  - Alterform: G = e^{v sa} F on the same slice. */
enum class ReducedForm { EWred, Euclid, Alterform };

struct ReducedData {
  ExprP F;  // F for EWred/Euclid, G for Alterform
  Params P;
  ReducedForm form = ReducedForm::EWred;
};

ExprP reduced_residual_expr(const ReducedData& d);
cd reduced_residual(const ReducedData& d, const Point& pt);

/* Conversion table between the forms (each entry unit-tested):
 *   G = e^{v sa} F,     F = e^{-v sa} G
 *   holomorphic -> slice: u = iv, wt = -wb (so d_u = -i d_v, d_wt = -d_wb)
 *   slice fields:   2S = ca F_w + i F_vw   = e^{-v sa}(mt G_w + i G_vw)
 *                   4V = ca^2 F + F_vv     = e^{-v sa}(G + G_vv - 2 sa G_v)
 *                   St = -conj(S), and e^{2 rho u} = e^{-2 v sa}
 *   residual weights: Euclid(F) = e^{-2 v sa} * Alterform(G)
 *   metric gauge:   h_alter = e^{2 v sa} h_slice, nu_alter = nu_slice + 2 sa dv
 *   v-independent G = e^Psi: h_liouville = 16 e^{-2Psi} h_alter (gauge 4e^{-Psi}) */
ExprP G_from_F(const ExprP& F);
ExprP F_from_G(const ExprP& G);
ExprP slice_from_holomorphic(const ExprP& F);  // c3 expression -> r3 expression

struct TodFields {
  ExprP V, S, St;
};

/** V, S, St from F per the selected form (derivatives of F; St = -conj(S)
 *  on the euclidean slice). */
TodFields todform_fields(const ReducedData& d);

/** Residuals of the first-order system
 *    V = eta (S St - m mt e^{2 rho u}) / (S_wt + St_w),
 *    S_u + eta S = 2 V_w,      -St_u + eta St = 2 V_wt,
 *  written for the chart of the selected form. The last two are identities
 *  when (V, S, St) derive from one F; they bite when the fields are supplied
 *  independently. */
std::array<ExprP, 3> todform_residuals(const ReducedData& d,
                                       const TodFields& f);

struct EwFromF {
  WeylStructure ew;  // chart c3 (EWred) or r3 (Euclid/Alterform)
  ExprP V;
  Form omega;
  Metric g4;  // e^{eta t}(V^{-1} h + V (dt+omega)^2) on c4t resp. r4
};

/** The main construction: (h, nu, V, omega) and the 4D metric from a
 *  reduced potential. sample_pts are screened for V = 0 (throws, naming the
 *  point). For Alterform the returned h and nu are the e^{2 v sa}-rescaled
 *  gauge; g4 is always built from the slice gauge. */
EwFromF build_ew_from_F(const ReducedData& d,
                        const std::vector<Point>& sample_pts = {});

/** The published alterform one-form. Its G_vw / G_vwb coefficients are i
 *  resp. -i times the ones the gauge transport of the slice structure gives;
 *  kept for reference and for the regression test that documents the
 *  discrepancy. */
Form altermetric_nu_displayed(const ExprP& G);

/** v-independent branch: G = e^Psi, h = 16 e^{-2Psi} dw dwb + (dv - i mt
 *  Psi_w dw + i m Psi_wb dwb)^2 with nu = -2 sa dv + (2 sa^2 + 2 i sa ca)
 *  Psi_w dw + conj. Solves the EW equations iff Psi_wwb = 4 e^{-2 Psi}. */
WeylStructure liouville_structure(const ExprP& Psi);

struct Frame3 {
  Form e1, e2, e3;
  ExprP V;
  Form omega;
};

struct FrameData {
  Frame3 frame;
  Form af1_residual;  // de3 - ca omega^e3 - (ca/V) e1^e2
  Form af2_residual;  // d(e1+ie2) - m omega^(e1+ie2) - (i m / V) e3^(e1+ie2)
  ExprP twist;        // *_h(e3 ^ de3); equals ca/V on solutions
  ExprP divergence;   // weyl-covariant divergence of the congruence:
                      // *_h d *_h e3 - 2 <nu, e3>_h; equals 6 sa/V on solutions
  ExprP divergence_riemannian;  // the literal *_h d *_h e3 (equals -2 sa/V)
};

/** Orthonormal frame on the euclidean slice and the congruence data of e3.
 *  The af2 residual vanishes identically; af1 vanishes iff the reduced
 *  equation holds. sample_pts are screened for V <= 0 (throws). */
FrameData frame_and_structure(const ReducedData& d,
                              const std::vector<Point>& sample_pts = {});

/** False when the point sits on the branch cut of the (z, zt) <-> (t, u)
 *  chart maps, i.e. z or zt on the closed negative real axis. */
bool chart_map_branch_safe(const Point& pt);

struct JonesTod {
  WeylStructure ew;  // on the quotient chart
  ExprP K2;          // |K|^2 on the input chart
};

/** Quotient of a metric with the Killing vector K = d/d(fiber):
 *  h = |K|^{-2} g - |K|^{-4} K (x) K,  nu = 2 |K|^{-2} *_g(K ^ dK),
 *  restricted to the quotient chart (the non-fiber coordinates of g's chart,
 *  matched by name, so L_K q = 0 exactly for each quotient coordinate).
 *  Verified at check_pts: |K| != 0, the fiber row of h and the fiber
 *  component of nu vanish, and the quotient components do not depend on the
 *  fiber coordinate (throws "not invariant" otherwise). For a conformal
 *  Killing vector pass the Killing representative e^{-eta t} g. */
JonesTod jones_tod(const Metric& g, const std::string& fiber, const Chart& q,
                   const Params& P, const std::vector<Point>& check_pts,
                   cd fiber_value = 0);

/** phi = (det a / det b)^{1/6}: the gauge candidate aligning two
 *  representatives of one conformal metric. */
ExprP gauge_fit_phi(const Metric& a, const Metric& b);

/** sup over components of (a.h - phi^2 b.h, a.nu - b.nu - 2 dphi/phi) with
 *  phi fitted from the determinant ratio. */
double gauge_equivalence_residual(const WeylStructure& a,
                                  const WeylStructure& b, const Params& P,
                                  const Point& pt);

}  // namespace ew
