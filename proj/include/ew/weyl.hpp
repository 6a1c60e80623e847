#pragma once

#include "ew/exterior.hpp"

namespace ew {

using Ten3 = std::vector<std::vector<std::vector<ExprP>>>;  // C^i_{jk}
using MatC = std::vector<std::vector<cd>>;

Ten3 christoffel(const Metric& g);
/** Ricci of an arbitrary torsion-free connection C^i_{jk}:
 *  R_jl = d_i C^i_{lj} - d_l C^i_{ij} + C^i_{im} C^m_{lj} - C^i_{lm} C^m_{ij}.
 *  Sign fixed so the unit round sphere has Ricci = +g. */
Metric ricci_conn(const Chart& ch, const Ten3& C);
Metric ricci(const Metric& g);
ExprP scalar_curvature(const Metric& g);

/** Conformal 3-geometry carrying a compatible torsion-free connection:
 *  D h = nu (x) h, with connection difference
 *  gamma^i_{jk} = -(delta^i_(j nu_k)) + (1/2) h_{jk} h^{im} nu_m. */
struct WeylStructure {
  Metric h;
  Form nu;
};

Ten3 weyl_gamma(const Metric& h, const Form& nu);
WeylStructure gauge_transform(const WeylStructure& s, ExprP phi);

/** Ricci of the compatible connection, from its closed-form relation to the
 *  Levi-Civita data (valid in any dimension n = chart dim). */
Metric weyl_ricci(const WeylStructure& s);
ExprP weyl_scalar(const WeylStructure& s);

/** chi_ij = W_(ij) - (W/n) h_ij: symmetric, h-trace-free by construction. */
Metric ew_chi(const WeylStructure& s);

double sup_comp(const Metric& t, const Params& p, const Point& pt);
double weyl_compatibility_residual(const WeylStructure& s, const Params& p,
                                   const Point& pt);
/** Same residual but with a caller-supplied connection difference tensor
 *  (for perturbation studies). */
double weyl_compatibility_residual(const WeylStructure& s, const Ten3& gamma,
                                   const Params& p, const Point& pt);
double ew_residual_sup(const WeylStructure& s, const Params& p,
                       const Point& pt);

ExprP laplacian(const Metric& g, ExprP phi);
ExprP divergence_1form(const Metric& g, const Form& nu);

/** Weighted wave operator residual: for a weight-m scalar phi,
 *  D*D phi = hat-k curvature coupling; returns LHS - RHS of
 *  lap(phi) - (m+1/2) nu.grad(phi)
 *    + (1/4)(m(m+1) |nu|^2 - 2m div nu) phi - k (R + 2 div nu - |nu|^2/2) phi. */
ExprP weighted_laplacian(const WeylStructure& s, ExprP phi, double m, double k);

/** *_h(dV + (1/2) nu V) — the gauge-invariant monopole 2-form of a
 *  weight -1 potential V. */
Form monopole_two_form(const WeylStructure& s, ExprP V);
double monopole_residual(const WeylStructure& s, ExprP V, const Form& omega,
                         const Params& p, const Point& pt);
double monopole_closedness(const WeylStructure& s, ExprP V, const Params& p,
                           const Point& pt);

/** Finite-difference Ricci oracle (second order central differences). */
MatC ricci_numeric(const Metric& g, const Params& p, const Point& pt,
                   double h = 1e-4);

/** sup |R^i_{jkl}| of the Levi-Civita connection at pt (symbolic curvature,
 *  exact up to roundoff; zero iff the metric is flat near the point). */
double riemann_sup(const Metric& g, const Params& p, const Point& pt);

}  // namespace ew
