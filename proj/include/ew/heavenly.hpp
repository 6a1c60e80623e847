#pragma once

#include "ew/weyl.hpp"

namespace ew {

/** Potential for a half-flat metric on the chart (w, z, wt, zt). */
struct PlebanskiData {
  ExprP Omega;
  Params P;
};

/** First heavenly residual O_{w zt} O_{z wt} - O_{w wt} O_{z zt} - 1. */
ExprP heavenly_residual_expr(const PlebanskiData& pd);
cd heavenly_residual(const PlebanskiData& pd, const Point& pt);

/** ds^2 = O_{w wt} dw dwt + O_{w zt} dw dzt + O_{z wt} dz dwt
 *       + O_{z zt} dz dzt (symmetric products). */
Metric plebanski_metric(const PlebanskiData& pd);

/** The conformal Killing vector eta(z d_z + zt d_zt) + rho(z d_z - zt d_zt)
 *  singled out by the canonical form of the potential. */
Vec can_killing(const Params& P);

/** sup |(L_K g - eta g)_{ij}| at pt for g = plebanski_metric. */
double conformal_killing_residual(const PlebanskiData& pd, const Vec& K,
                                  cd eta, const Point& pt);

/** Basis of the closed two-forms spanning one Hodge eigenspace:
 *  s00 = dwt^dzt, s11 = dw^dz, s01 = the Hessian-weighted mixed form. */
struct SdTwoForms {
  Form s00, s11, s01;
};
SdTwoForms sd_two_forms(const PlebanskiData& pd);

/** s01^s01 - 2 s00^s11; its single component equals twice the heavenly
 *  residual, so it vanishes exactly on solutions. */
Form sd_wedge_residual(const PlebanskiData& pd);

/** Checks that s00, s11, s01 are *-eigenforms with one common eigenvalue at
 *  pt and returns that eigenvalue (+1 or -1 depending on orientation).
 *  Throws if they fail to be eigenforms to within tol. */
cd sd_eigenvalue(const PlebanskiData& pd, const Point& pt, double tol = 1e-8);

/** (d *_g d f) / vol as a scalar. */
ExprP wave_operator_4d(const PlebanskiData& pd, const ExprP& f);

/** Chart maps for the symmetry-adapted coordinates:
 *  z = e^{m(t+u)}, zt = e^{mt(t-u)} and inversely
 *  t = (log(z)/m + log(zt)/mt)/2, u = (log(z)/m - log(zt)/mt)/2. */
std::map<std::string, ExprP> zz_from_tu();
std::map<std::string, ExprP> tu_from_zz();

/** e^{eta t} F(u, w, wt) pushed to the (w, z, wt, zt) chart. */
ExprP potential_from_reduced(const ExprP& F);

/** Substitute wt = -wb, zt = zb: the euclidean slice of a potential, as an
 *  expression on the chart (w, wb, z, zb). */
ExprP euclidean_slice_potential(const ExprP& Omega);

/** O_{w wb} O_{z zb} - O_{w zb} O_{z wb} - 1 on the slice chart; the sign
 *  flips from wt = -wb make this equal the heavenly residual. */
ExprP euclidean_slice_residual(const ExprP& Omega_real);

/** O = w zt + z wt: flat metric in null coordinates. */
ExprP flat_null_potential();

/** O = w zt^{eta/mt} + (mt/eta) wt z zt^{-rho/mt}: flat, and invariant with
 *  weight eta under the canonical conformal Killing vector. Requires a
 *  parameter set with eta != 0 at evaluation time. */
ExprP flat_canonical_potential();

}  // namespace ew
