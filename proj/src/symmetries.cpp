#include "ew/symmetries.hpp"

#include <Eigen/Dense>
#include <random>

namespace ew {

namespace {

const cd I(0.0, 1.0);

Point random_fiber_point(std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  cd w(U(rng), U(rng));
  return {{"w", w},
          {"wb", std::conj(w)},
          {"v", U(rng)},
          {"G", 1.5 + 0.5 * U(rng)}};
}

}  // namespace

Vec generator(int i) {
  const Chart& fb = chart("fiber");
  ExprP z = num(0.0);
  switch (i) {
    case 1: return vec(fb, {{"w", num(1.0)}, {"wb", num(1.0)}});
    case 2: return vec(fb, {{"w", num(I)}, {"wb", num(-I)}});
    case 3:
      return vec(fb, {{"w", I * coord("w")}, {"wb", (-I) * coord("wb")}});
    case 4: return vec(fb, {{"v", num(1.0)}});
    case 5:
      return vec(fb, {{"w", coord("w")},
                      {"wb", coord("wb")},
                      {"G", coord("G")}});
    case 6:
      return vec(fb, {{"G", exp(coord("v") * param("sa")) *
                                sin(coord("v") * param("ca"))}});
    case 7:
      return vec(fb, {{"G", exp(coord("v") * param("sa")) *
                                cos(coord("v") * param("ca"))}});
    default:
      throw EvalError("generator: index out of range 1..7");
  }
}

StructureConstants commutator_table(const Params& p, unsigned seed,
                                    int npts) {
  const Chart& fb = chart("fiber");
  std::vector<Vec> X;
  for (int i = 1; i <= 7; ++i) X.push_back(generator(i));

  std::mt19937 rng(seed);
  std::vector<Point> pts;
  for (int k = 0; k < npts; ++k) pts.push_back(random_fiber_point(rng));

  const int nc = (int)fb.coords.size();
  // component values of the basis at all points, rows = 2*npts*nc (re, im)
  Eigen::MatrixXd A(2 * npts * nc, 7);
  for (int k = 0; k < 7; ++k) {
    int r = 0;
    for (const auto& pt : pts)
      for (int a = 0; a < nc; ++a) {
        cd val = eval(X[k].comp[a], p, pt);
        A(r++, k) = val.real();
        A(r++, k) = val.imag();
      }
  }
  auto qr = A.colPivHouseholderQr();

  StructureConstants sc{};
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      if (i == j) continue;
      Vec B = bracket(X[i], X[j]);
      Eigen::VectorXd b(2 * npts * nc);
      int r = 0;
      for (const auto& pt : pts)
        for (int a = 0; a < nc; ++a) {
          cd val = eval(B.comp[a], p, pt);
          b(r++) = val.real();
          b(r++) = val.imag();
        }
      Eigen::VectorXd c = qr.solve(b);
      double res = (A * c - b).norm();
      sc.fit_residual = std::max(sc.fit_residual, res);
      if (res > 1e-10)
        throw EvalError("commutator_table: bracket left the span, fit "
                        "residual " + std::to_string(res));
      for (int k = 0; k < 7; ++k) sc.c[i][j][k] = c(k);
    }
  return sc;
}

ExprP alterform_linearized(const ExprP& G, const ExprP& dG) {
  const Chart& r3 = chart("r3");
  auto D = [&](const ExprP& f, const char* c) { return diff(f, r3, c); };
  ExprP sa = param("sa"), m = param("m"), mt = param("mt");
  ExprP A = G + D(D(G, "v"), "v") - 2.0 * sa * D(G, "v");
  ExprP dA = dG + D(D(dG, "v"), "v") - 2.0 * sa * D(dG, "v");
  ExprP L = m * D(G, "wb") - I * D(D(G, "v"), "wb");
  ExprP dL = m * D(dG, "wb") - I * D(D(dG, "v"), "wb");
  ExprP Rr = mt * D(G, "w") + I * D(D(G, "v"), "w");
  ExprP dR = mt * D(dG, "w") + I * D(D(dG, "v"), "w");
  return dA * D(D(G, "w"), "wb") + A * D(D(dG, "w"), "wb") - dL * Rr -
         L * dR;
}

ExprP induced_perturbation(int i, const ExprP& G) {
  const Chart& r3 = chart("r3");
  Vec X = generator(i);
  std::map<std::string, ExprP> bind = {{"G", G}};
  // fiber chart order is (w, wb, v, G)
  ExprP dG = substitute(X.comp[3], bind);
  const char* base[3] = {"w", "wb", "v"};
  for (int a = 0; a < 3; ++a)
    dG = dG - substitute(X.comp[a], bind) * diff(G, r3, base[a]);
  return dG;
}

double infinitesimal_invariance(int i, const ExprP& G, const Params& p,
                                const std::vector<Point>& pts) {
  for (const auto& pt : pts)
    if (std::abs(reduced_residual({G, p, ReducedForm::Alterform}, pt)) > 1e-9)
      throw EvalError(
          "infinitesimal_invariance: background must solve the equation");
  ExprP lin = alterform_linearized(G, induced_perturbation(i, G));
  double r = 0.0;
  for (const auto& pt : pts) r = std::max(r, std::abs(eval(lin, p, pt)));
  return r;
}

Form ideal_form(int mu) {
  const Chart& ch = chart("ideal6");
  ExprP Q = coord("Q"), Qb = coord("Qb"), J = coord("J");
  Form dw = dx(ch, "w"), dwb = dx(ch, "wb"), dv = dx(ch, "v");
  Form dQ = dx(ch, "Q"), dQb = dx(ch, "Qb"), dJ = dx(ch, "J");
  // e^{ia} = m, e^{-ia} = mt on the euclidean slice
  if (mu == 1)
    return num(I) * wedge(wedge(dQ, dJ), dwb) +
           param("mt") * wedge(wedge(Q * dJ - J * dQ, dwb), dv) +
           wedge(wedge(dQ, dQb), dv) -
           num(4.0) * wedge(wedge(dw, dwb), dv);
  if (mu == 2)
    return wedge(wedge(dQ, dw), dv) +
           param("m") * wedge(wedge(J * dw, dwb), dv) -
           num(I) * wedge(wedge(dJ, dw), dwb);
  throw EvalError("ideal_form: mu must be 1 or 2");
}

IdealResidual ideal_residual(const ExprP& G, const Params& p,
                             const Point& pt) {
  const Chart& r3 = chart("r3");
  ExprP Gv = diff(G, r3, "v");
  std::map<std::string, ExprP> graph = {
      {"Q", param("m") * G - I * Gv},
      {"Qb", param("mt") * G + I * Gv},
      {"J", diff(G, r3, "wb")}};
  IdealResidual out;
  for (int mu : {1, 2}) {
    Form w = pullback(ideal_form(mu), r3, graph);
    double s = 0.0;
    for (const auto& kv : w.comp)
      s = std::max(s, std::abs(eval(kv.second, p, pt)));
    (mu == 1 ? out.w1 : out.w2) = s;
  }
  return out;
}

double ideal_closure_residual(int mu, const Params& p, unsigned seed,
                              int npts) {
  const Chart& ch = chart("ideal6");
  Form w1 = ideal_form(1), w2 = ideal_form(2);
  Form dw = d(ideal_form(mu));

  const int n = (int)ch.coords.size();
  std::vector<Form> cols;
  for (int a = 0; a < n; ++a) {
    cols.push_back(wedge(dx(ch, ch.coords[a]), w1));
    cols.push_back(wedge(dx(ch, ch.coords[a]), w2));
  }

  // all strictly increasing 4-index sets of the 6 coordinates
  std::vector<std::vector<int>> idx4;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int e = c + 1; e < n; ++e) idx4.push_back({a, b, c, e});

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < npts; ++k) {
    cd w(U(rng), U(rng)), Q(U(rng), U(rng)), J(U(rng), U(rng));
    Point pt = {{"w", w},           {"wb", std::conj(w)}, {"v", U(rng)},
                {"Q", Q},           {"Qb", std::conj(Q)}, {"J", J}};
    Eigen::MatrixXcd A(idx4.size(), cols.size());
    Eigen::VectorXcd b(idx4.size());
    for (size_t r = 0; r < idx4.size(); ++r) {
      b(r) = eval(dw(idx4[r]), p, pt);
      for (size_t c = 0; c < cols.size(); ++c)
        A(r, c) = eval(cols[c](idx4[r]), p, pt);
    }
    Eigen::VectorXcd x = A.colPivHouseholderQr().solve(b);
    worst = std::max(worst, (A * x - b).norm());
  }
  return worst;
}

}  // namespace ew
