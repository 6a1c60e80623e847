#include "ew/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "json.hpp"

namespace ew {

namespace {

const cd I(0.0, 1.0);

void check_extents(const char* who, int a, int b, int c) {
  for (int n : {a, b, c})
    if (n < 9 || n % 2 == 0)
      throw EvalError(std::string(who) + ": extents must be odd and >= 9");
}

struct FdCoef {
  double ca, sa, hx, hy, hv;
};

FdCoef coefs(const Grid3& g, const Params& p) {
  return {p.lookup("ca").real(), p.lookup("sa").real(), g.hx(), g.hy(),
          g.hv()};
}

// finite-difference combos feeding the residual at one interior node
struct Combo {
  double g, gx, gy, gv, lap2, gvv, gvx, gvy;
};

inline Combo combo(const std::vector<double>& a, const Grid3& g, int i, int j,
                   int k, const FdCoef& c) {
  auto at = [&](int ii, int jj, int kk) { return a[g.idx(ii, jj, kk)]; };
  Combo s;
  s.g = at(i, j, k);
  s.gx = (at(i + 1, j, k) - at(i - 1, j, k)) / (2 * c.hx);
  s.gy = (at(i, j + 1, k) - at(i, j - 1, k)) / (2 * c.hy);
  s.gv = (at(i, j, k + 1) - at(i, j, k - 1)) / (2 * c.hv);
  s.lap2 = (at(i + 1, j, k) - 2 * s.g + at(i - 1, j, k)) / (c.hx * c.hx) +
           (at(i, j + 1, k) - 2 * s.g + at(i, j - 1, k)) / (c.hy * c.hy);
  s.gvv = (at(i, j, k + 1) - 2 * s.g + at(i, j, k - 1)) / (c.hv * c.hv);
  s.gvx = (at(i + 1, j, k + 1) - at(i + 1, j, k - 1) - at(i - 1, j, k + 1) +
           at(i - 1, j, k - 1)) /
          (4 * c.hx * c.hv);
  s.gvy = (at(i, j + 1, k + 1) - at(i, j + 1, k - 1) - at(i, j - 1, k + 1) +
           at(i, j - 1, k - 1)) /
          (4 * c.hy * c.hv);
  return s;
}

// the transformed equation in real variables: for real G the product of the
// two first-order factors is |mt G_w + i G_vw|^2
inline double node_res(const Combo& s, const FdCoef& c) {
  double T1 = s.g + s.gvv - 2.0 * c.sa * s.gv;
  double T2 = 0.25 * s.lap2;
  double P = c.ca * s.gx - c.sa * s.gy + s.gvy;
  double Q = c.sa * s.gx + c.ca * s.gy - s.gvx;
  return T1 * T2 - 0.25 * (P * P + Q * Q) - 4.0;
}

double sup_interior(const DiscreteField& r) {
  double m = 0;
  for (double x : r.val) m = std::max(m, std::abs(x));
  return m;
}

double norm2(const DiscreteField& r) {
  double s = 0;
  for (double x : r.val) s += x * x;
  return std::sqrt(s);
}

}  // namespace

Grid3::Grid3(int nx_, int ny_, int nv_, double x0_, double x1_, double y0_,
             double y1_, double v0_, double v1_)
    : nx(nx_), ny(ny_), nv(nv_), x0(x0_), x1(x1_), y0(y0_), y1(y1_), v0(v0_),
      v1(v1_) {
  check_extents("Grid3", nx, ny, nv);
}

Grid3 Grid3::refined() const {
  return Grid3(2 * nx - 1, 2 * ny - 1, 2 * nv - 1, x0, x1, y0, y1, v0, v1);
}

DiscreteField sample_field(const Grid3& g, const ExprP& G, const Params& p) {
  DiscreteField f(g);
  for (int k = 0; k < g.nv; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        cd w(g.x(i), g.y(j));
        cd val = eval(G, p, {{"w", w}, {"wb", std::conj(w)}, {"v", g.v(k)}});
        if (std::abs(val.imag()) > 1e-9 * (1.0 + std::abs(val.real())))
          throw EvalError("sample_field: field is not real on the slice");
        f.val[g.idx(i, j, k)] = val.real();
      }
  return f;
}

DiscreteField discrete_residual(const DiscreteField& G, const Params& p) {
  const Grid3& g = G.grid;
  FdCoef c = coefs(g, p);
  DiscreteField r(g);
#pragma omp parallel for
  for (int k = 1; k < g.nv - 1; ++k)
    for (int j = 1; j < g.ny - 1; ++j)
      for (int i = 1; i < g.nx - 1; ++i)
        r.val[g.idx(i, j, k)] = node_res(combo(G.val, g, i, j, k, c), c);
  return r;
}

DiscreteField discrete_residual_serial(const DiscreteField& G,
                                       const Params& p) {
  const Grid3& g = G.grid;
  FdCoef c = coefs(g, p);
  DiscreteField r(g);
  for (int k = 1; k < g.nv - 1; ++k)
    for (int j = 1; j < g.ny - 1; ++j)
      for (int i = 1; i < g.nx - 1; ++i)
        r.val[g.idx(i, j, k)] = node_res(combo(G.val, g, i, j, k, c), c);
  return r;
}

namespace {

// analytic Jacobian of node_res with respect to the 15 stencil values;
// every interior node writes its own disjoint block of 15 triplets
void assemble_jacobian(const DiscreteField& G, const FdCoef& c,
                       std::vector<Eigen::Triplet<double>>& trip) {
  const Grid3& g = G.grid;
  int mx = g.nx - 2, my = g.ny - 2, mv = g.nv - 2;
  auto uidx = [&](int i, int j, int k) {
    return ((k - 1) * my + (j - 1)) * mx + (i - 1);
  };
  trip.assign(static_cast<size_t>(mx) * my * mv * 15,
              Eigen::Triplet<double>(0, 0, 0.0));
#pragma omp parallel for
  for (int k = 1; k < g.nv - 1; ++k)
    for (int j = 1; j < g.ny - 1; ++j)
      for (int i = 1; i < g.nx - 1; ++i) {
        Combo s = combo(G.val, g, i, j, k, c);
        double T1 = s.g + s.gvv - 2.0 * c.sa * s.gv;
        double T2 = 0.25 * s.lap2;
        double P = c.ca * s.gx - c.sa * s.gy + s.gvy;
        double Q = c.sa * s.gx + c.ca * s.gy - s.gvx;
        int row = uidx(i, j, k);
        size_t base = static_cast<size_t>(row) * 15;
        int slot = 0;
        auto put = [&](int ii, int jj, int kk, double w) {
          // boundary neighbors are Dirichlet data, not unknowns
          if (g.interior(ii, jj, kk))
            trip[base + slot] = Eigen::Triplet<double>(row, uidx(ii, jj, kk), w);
          else
            trip[base + slot] = Eigen::Triplet<double>(row, row, 0.0);
          ++slot;
        };
        double hx2 = c.hx * c.hx, hy2 = c.hy * c.hy, hv2 = c.hv * c.hv;
        put(i, j, k,
            T2 * (1.0 - 2.0 / hv2) + T1 * 0.25 * (-2.0 / hx2 - 2.0 / hy2));
        put(i + 1, j, k, T1 / (4 * hx2) - (P * c.ca + Q * c.sa) / (4 * c.hx));
        put(i - 1, j, k, T1 / (4 * hx2) + (P * c.ca + Q * c.sa) / (4 * c.hx));
        put(i, j + 1, k, T1 / (4 * hy2) + (P * c.sa - Q * c.ca) / (4 * c.hy));
        put(i, j - 1, k, T1 / (4 * hy2) - (P * c.sa - Q * c.ca) / (4 * c.hy));
        put(i, j, k + 1, T2 * (1.0 / hv2 - c.sa / c.hv));
        put(i, j, k - 1, T2 * (1.0 / hv2 + c.sa / c.hv));
        for (int sx : {1, -1})
          for (int sv : {1, -1})
            put(i + sx, j, k + sv, sx * sv * Q / (8 * c.hx * c.hv));
        for (int sy : {1, -1})
          for (int sv : {1, -1})
            put(i, j + sy, k + sv, -sy * sv * P / (8 * c.hy * c.hv));
      }
}

}  // namespace

NewtonReport solve_newton(const DiscreteField& initial, const Params& p,
                          double tol, int max_iter) {
  const Grid3& g = initial.grid;
  FdCoef c = coefs(g, p);
  int mx = g.nx - 2, my = g.ny - 2, mv = g.nv - 2;
  int n = mx * my * mv;
  NewtonReport rep{initial, {}, false, 0};
  DiscreteField r = discrete_residual(rep.G, p);
  rep.history.push_back(sup_interior(r));
  std::vector<Eigen::Triplet<double>> trip;
  for (int it = 0; it < max_iter && rep.history.back() >= tol; ++it) {
    assemble_jacobian(rep.G, c, trip);
    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd rhs(n);
    for (int k = 1; k < g.nv - 1; ++k)
      for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i)
          rhs[((k - 1) * my + (j - 1)) * mx + (i - 1)] =
              -r.val[g.idx(i, j, k)];
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    Eigen::VectorXd step;
    if (lu.info() == Eigen::Success) {
      step = lu.solve(rhs);
    } else {
      step = rhs;  // damped residual step when the factorization fails
    }
    double r2 = norm2(r);
    double lam = 1.0;
    DiscreteField trial = rep.G;
    DiscreteField rt = r;
    for (;;) {
      for (int k = 1; k < g.nv - 1; ++k)
        for (int j = 1; j < g.ny - 1; ++j)
          for (int i = 1; i < g.nx - 1; ++i)
            trial.val[g.idx(i, j, k)] =
                rep.G.val[g.idx(i, j, k)] +
                lam * step[((k - 1) * my + (j - 1)) * mx + (i - 1)];
      rt = discrete_residual(trial, p);
      if (norm2(rt) <= (1.0 - 1e-4 * lam) * r2 || lam < 1.0 / 1024) break;
      lam *= 0.5;
    }
    rep.G = trial;
    r = rt;
    rep.history.push_back(sup_interior(r));
    rep.iterations = it + 1;
  }
  rep.converged = rep.history.back() < tol;
  return rep;
}

ExprP local_interpolant(const DiscreteField& f, int i, int j, int k) {
  const Grid3& g = f.grid;
  if (!g.interior(i, j, k))
    throw EvalError("local_interpolant: needs an interior node");
  ExprP w = coord("w"), wb = coord("wb"), v = coord("v");
  ExprP sx = (0.5 * (w + wb) - num(g.x(i))) / num(g.hx());
  ExprP sy = (num(-0.5 * I) * (w - wb) - num(g.y(j))) / num(g.hy());
  ExprP sv = (v - num(g.v(k))) / num(g.hv());
  auto basis = [](const ExprP& s) {
    return std::array<ExprP, 3>{0.5 * s * (s - 1.0), 1.0 - sq(s),
                                0.5 * s * (s + 1.0)};
  };
  auto bx = basis(sx), by = basis(sy), bv = basis(sv);
  ExprP out = num(0.0);
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c)
        out = out + f.val[g.idx(i + a, j + b, k + c)] * bx[a + 1] * by[b + 1] *
                        bv[c + 1];
  return out;
}

Grid2::Grid2(int nxi_, int nv_, double xi0_, double xi1_, double v0_,
             double v1_)
    : nxi(nxi_), nv(nv_), xi0(xi0_), xi1(xi1_), v0(v0_), v1(v1_) {
  if (nxi < 5 || nv < 5) throw EvalError("Grid2: extents must be at least 5");
}

DiscreteField2 solve_linear_f(const Grid2& g, const Params& p,
                              const DiscreteField2& bc,
                              const DiscreteField2* rhs) {
  double sa = p.lookup("sa").real();
  int mx = g.nxi - 2, mv = g.nv - 2;
  int n = mx * mv;
  auto uidx = [&](int i, int k) { return (k - 1) * mx + (i - 1); };
  double hx = g.hxi(), hv = g.hv();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n) * 9);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  DiscreteField2 out(g);
  out.val = bc.val;  // boundary layer kept; interior overwritten below
  for (int k = 1; k < g.nv - 1; ++k)
    for (int i = 1; i < g.nxi - 1; ++i) {
      int row = uidx(i, k);
      double A = 4.0 * std::exp(-2.0 * g.xi(i)) + 1.0;  // f_xixi
      double B = -4.0 * std::exp(-2.0 * g.xi(i));       // f_xi
      if (rhs) b[row] += rhs->val[g.idx(i, k)];
      auto add = [&](int ii, int kk, double w) {
        if (ii > 0 && ii < g.nxi - 1 && kk > 0 && kk < g.nv - 1)
          trip.emplace_back(row, uidx(ii, kk), w);
        else
          b[row] -= w * bc.val[g.idx(ii, kk)];
      };
      add(i, k, -2.0 * A / (hx * hx) - 2.0 / (hv * hv));
      add(i + 1, k, A / (hx * hx) + B / (2 * hx));
      add(i - 1, k, A / (hx * hx) - B / (2 * hx));
      add(i, k + 1, 1.0 / (hv * hv));
      add(i, k - 1, 1.0 / (hv * hv));
      for (int sx : {1, -1})
        for (int sv : {1, -1})
          add(i + sx, k + sv, sx * sv * sa / (2 * hx * hv));
    }
  Eigen::SparseMatrix<double> M(n, n);
  M.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success)
    throw EvalError("solve_linear_f: singular system");
  Eigen::VectorXd sol = lu.solve(b);
  for (int k = 1; k < g.nv - 1; ++k)
    for (int i = 1; i < g.nxi - 1; ++i)
      out.val[g.idx(i, k)] = sol[uidx(i, k)];
  return out;
}

void write_csv(const DiscreteField& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw EvalError("write_csv: cannot open " + path);
  os << "x,y,v,G\n";
  os.precision(17);
  const Grid3& g = f.grid;
  for (int k = 0; k < g.nv; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        os << g.x(i) << ',' << g.y(j) << ',' << g.v(k) << ','
           << f.val[g.idx(i, j, k)] << '\n';
}

void write_history_json(const NewtonReport& r, const std::string& path) {
  nlohmann::json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["history"] = r.history;
  std::ofstream os(path);
  if (!os) throw EvalError("write_history_json: cannot open " + path);
  os << j.dump(2) << '\n';
}

}  // namespace ew
