#pragma once

#include "ew/heavenly.hpp"

namespace ew {

enum class LaxKind { Heavenly, Reduced, HyperCR };

/** Pair of spectral-parameter-dependent vector fields whose span is
 *  integrable exactly on solutions. Charts: corr5 (w, z, wt, zt, lam) for
 *  Heavenly, corr4 (w, wt, u, lamt) for Reduced, r3lam (w, wb, v, lam) for
 *  HyperCR. */
struct LaxPair {
  Vec L0, L1;
  LaxKind kind = LaxKind::Heavenly;
};

/** The displayed pairs, built literally from the background's derivatives:
 *    Heavenly (background Omega on c4):
 *      L0 = O_wwt d_zt - O_wzt d_wt - lam d_w
 *      L1 = O_zwt d_zt - O_zzt d_wt - lam d_z
 *    Reduced (background F on c3):
 *      L0 = e^{mt u}(F_wwt (d_u + rho lamt d_lamt)
 *           + (eta F_w - F_uw) d_wt) + 2 mt lamt d_w
 *      L1 = e^{mt u}((eta F_wt + F_uwt)(d_u + rho lamt d_lamt)
 *           + (eta^2 F - F_uu) d_wt) + 2 mt lamt (d_u - rho lamt d_lamt)
 *      (the scale-free form; the quoted slice display carries m on both
 *      prefactors once mt m = 1 is used — reading the second one as mt
 *      breaks integrability, see the tests)
 *    HyperCR (background F on r3, the divergence-free branch):
 *      L0 = e^{iv}(i F_wwb d_v - (F_w + i F_vw) d_wb) + 2 lam d_w
 *      L1 = e^{iv}((F_vwb + i F_wb) d_v - (F + F_vv) d_wb) - 2 i lam d_v
 *  Any background is accepted; span claims only hold on solutions. */
LaxPair build_lax(const ExprP& background, LaxKind kind);

struct SpanFit {
  double residual = 0.0;
  std::vector<cd> coeff;
};

/** Least-squares expansion of `target` in the given vector fields at pt
 *  (components in the chart basis, Euclidean norm). Throws on a degenerate
 *  basis (rank loss at the point). */
SpanFit fit_in_span(const std::vector<Vec>& basis, const Vec& target,
                    const Params& p, const Point& pt);

/** Fit residual of [L0, L1] in span{L0, L1} at pt (pt carries the spectral
 *  coordinate). Small on solution backgrounds; O(eps) on eps-perturbed
 *  ones. */
double span_residual(const LaxPair& lp, const Params& p, const Point& pt);

/** Lie lift of the canonical conformal Killing vector to the heavenly
 *  correspondence chart: K + rho lam d_lam. On the euclidean slice
 *  rho = i sin(alpha), so the lam component is purely rotational. */
Vec lifted_killing();

/** The invariant spectral parameter lamt = lam e^{-rho t(z, zt)}, constant
 *  along the lifted Killing vector. */
ExprP invariant_parameter();

}  // namespace ew
