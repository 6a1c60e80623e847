#pragma once

#include <string>
#include <vector>

#include "ew/scalar.hpp"

namespace ew {

/** Uniform grid on a box in (x, y, v) with w = x + i y. Extents must be odd
 *  and at least 9, so halving the spacing keeps the old nodes nested. */
struct Grid3 {
  int nx, ny, nv;
  double x0, x1, y0, y1, v0, v1;
  Grid3(int nx, int ny, int nv, double x0, double x1, double y0, double y1,
        double v0, double v1);
  double hx() const { return (x1 - x0) / (nx - 1); }
  double hy() const { return (y1 - y0) / (ny - 1); }
  double hv() const { return (v1 - v0) / (nv - 1); }
  double x(int i) const { return x0 + i * hx(); }
  double y(int j) const { return y0 + j * hy(); }
  double v(int k) const { return v0 + k * hv(); }
  int idx(int i, int j, int k) const { return (k * ny + j) * nx + i; }
  int size() const { return nx * ny * nv; }
  bool interior(int i, int j, int k) const {
    return i > 0 && i < nx - 1 && j > 0 && j < ny - 1 && k > 0 && k < nv - 1;
  }
  /** Same box, spacing halved. */
  Grid3 refined() const;
};

/** Real nodal values over a Grid3. */
struct DiscreteField {
  Grid3 grid;
  std::vector<double> val;
  explicit DiscreteField(const Grid3& g) : grid(g), val(g.size(), 0.0) {}
};

/** Evaluate a slice-chart expression G(w, wb, v) at the nodes, w = x + i y.
 *  Throws when the values are not real to roundoff. */
DiscreteField sample_field(const Grid3& g, const ExprP& G, const Params& p);

/** Second-order central discretization of the transformed reduced equation
 *  at the interior nodes (boundary entries stay zero). The two variants
 *  assemble identical arrays; the serial one is the reference the parallel
 *  kernel is tested against. */
DiscreteField discrete_residual(const DiscreteField& G, const Params& p);
DiscreteField discrete_residual_serial(const DiscreteField& G,
                                       const Params& p);

struct NewtonReport {
  DiscreteField G;
  std::vector<double> history;  // sup |residual| per iterate, entry first
  bool converged = false;
  int iterations = 0;
};

/** Damped Newton for the discrete equation. Dirichlet data is the boundary
 *  layer of the initial field and never moves. Analytic sparse Jacobian,
 *  single-threaded direct factorization, Armijo backtracking on the
 *  residual 2-norm; a singular factorization falls back to a damped
 *  residual step for that iteration. */
NewtonReport solve_newton(const DiscreteField& initial, const Params& p,
                          double tol = 1e-10, int max_iter = 20);

/** Tri-quadratic interpolant through the 27 nodes around (i, j, k), as a
 *  slice-chart expression in (w, wb, v): the bridge for pushing discrete
 *  fields back through the symbolic residual. */
ExprP local_interpolant(const DiscreteField& f, int i, int j, int k);

/** Uniform 2D grid on a box in (xi, v). */
struct Grid2 {
  int nxi, nv;
  double xi0, xi1, v0, v1;
  Grid2(int nxi, int nv, double xi0, double xi1, double v0, double v1);
  double hxi() const { return (xi1 - xi0) / (nxi - 1); }
  double hv() const { return (v1 - v0) / (nv - 1); }
  double xi(int i) const { return xi0 + i * hxi(); }
  double v(int k) const { return v0 + k * hv(); }
  int idx(int i, int k) const { return k * nxi + i; }
  int size() const { return nxi * nv; }
};

struct DiscreteField2 {
  Grid2 grid;
  std::vector<double> val;
  explicit DiscreteField2(const Grid2& g) : grid(g), val(g.size(), 0.0) {}
};

/** Direct sparse solve of the linear equation
 *    4 e^{-2 xi} (f_xixi - f_xi) + f_vv + 2 sa f_xiv + f_xixi = rhs,
 *  Dirichlet data from the boundary layer of bc; rhs, when given, is read
 *  at the interior nodes. */
DiscreteField2 solve_linear_f(const Grid2& g, const Params& p,
                              const DiscreteField2& bc,
                              const DiscreteField2* rhs = nullptr);

/** Nodal dump, header "x,y,v,G", x fastest. */
void write_csv(const DiscreteField& f, const std::string& path);

/** Convergence history as JSON. */
void write_history_json(const NewtonReport& r, const std::string& path);

}  // namespace ew
