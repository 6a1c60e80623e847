#include "ew/twodim.hpp"

#include <cmath>
#include <sstream>

namespace ew {

namespace {

const cd I(0.0, 1.0);

std::string fmt_point(const Point& pt) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : pt) {
    if (!first) os << " ";
    first = false;
    os << k << "=" << v.real();
    if (v.imag() != 0.0) os << (v.imag() > 0 ? "+" : "") << v.imag() << "i";
  }
  return os.str();
}

ExprP D(const ExprP& f, const Chart& ch, const std::string& c) {
  return diff(f, ch, c);
}

}  // namespace

const Chart& chart_2d(Kind2D kind) {
  switch (kind) {
    case Kind2D::Toda:
      return chart("toda3");
    case Kind2D::HyperCR:
      return chart("r3");
    case Kind2D::Liouville:
      return chart("plane");
    case Kind2D::MEquation:
    case Kind2D::FLinear:
      return chart("xi_v");
    case Kind2D::Rjv:
      return chart("J_v");
    case Kind2D::X3Full:
      return chart("R_v");
  }
  throw EvalError("residual_2d: unknown kind");
}

ExprP residual_2d_expr(Kind2D kind, const ExprP& f) {
  const Chart& ch = chart_2d(kind);
  ExprP sa = param("sa");
  switch (kind) {
    case Kind2D::Toda:
      return diff(D(f, ch, "w"), ch, "wb") +
             num(2.0) * diff(exp(num(2.0) * f), ch, "j", 2);
    case Kind2D::HyperCR: {
      ExprP Fw = D(f, ch, "w"), Fwb = D(f, ch, "wb");
      return D(Fw, ch, "wb") * (f + diff(f, ch, "v", 2)) -
             (Fw + I * D(Fw, ch, "v")) * (Fwb - I * D(Fwb, ch, "v")) -
             num(4.0);
    }
    case Kind2D::Liouville:
      return diff(D(f, ch, "w"), ch, "wb") - num(4.0) * exp(num(-2.0) * f);
    case Kind2D::MEquation: {
      ExprP Mx = D(f, ch, "xi"), Mxx = D(Mx, ch, "xi");
      return diff(f, ch, "v", 2) + num(2.0) * sa * D(Mx, ch, "v") + Mxx +
             num(4.0) * exp(f) * (Mxx + sq(Mx) + num(3.0) * Mx + num(2.0));
    }
    case Kind2D::Rjv: {
      ExprP JRJ = coord("J") * D(f, ch, "J");
      return num(4.0) * diff(exp(f), ch, "J", 2) + diff(f, ch, "v", 2) +
             num(2.0) * sa * D(JRJ, ch, "v") + coord("J") * D(JRJ, ch, "J");
    }
    case Kind2D::FLinear: {
      ExprP fx = D(f, ch, "xi");
      return num(4.0) * exp(num(-2.0) * coord("xi")) * (D(fx, ch, "xi") - fx) +
             diff(f, ch, "v", 2) + num(2.0) * sa * D(fx, ch, "v") +
             D(fx, ch, "xi");
    }
    case Kind2D::X3Full: {
      ExprP GR = D(f, ch, "R"), Gv = D(f, ch, "v");
      return (f + D(Gv, ch, "v") - num(2.0) * sa * Gv) * D(GR, ch, "R") -
             (param("m") * GR - I * D(GR, ch, "v")) *
                 (param("mt") * GR + I * D(GR, ch, "v")) -
             num(4.0) * exp(coord("R"));
    }
  }
  throw EvalError("residual_2d: unknown kind");
}

cd residual_2d(Kind2D kind, const ExprP& f, const Params& p,
               const Point& pt) {
  return eval(residual_2d_expr(kind, f), p, pt);
}

ExprP rjv_separable(double a1, double a2, double a3) {
  ExprP J = coord("J"), v = coord("v");
  ExprP s = pow(num(4.0) / sq(J) + num(1.0), 0.5);
  return num(a1) * sq(v) + num(a2) * v + num(a1) * atanh(s) + num(a3);
}

TodaChain toda_reduction_chain(const ReducedData& d,
                               const std::vector<Point>& sample_pts) {
  if (std::abs(d.P.lookup("sa") - cd(-1.0)) > 1e-12)
    throw EvalError("toda_reduction_chain: needs the pure-rotation branch sa = -1");
  const Chart& r3 = chart("r3");
  ExprP F = d.F;
  if (d.form == ReducedForm::Alterform) F = F_from_G(F);
  if (d.form == ReducedForm::EWred) F = slice_from_holomorphic(F);

  ExprP Fv = D(F, r3, "v");
  ExprP Fvv = D(Fv, r3, "v");
  for (const auto& pt : sample_pts)
    if (std::abs(eval(Fvv, d.P, pt)) < 1e-10)
      throw EvalError("toda_reduction_chain: coordinate change not invertible at " +
                      fmt_point(pt));

  // implicit derivatives of v(w, wb, j) through j = F_v(w, wb, v)
  ExprP vw = -D(Fv, r3, "w") / Fvv;
  ExprP vwb = -D(Fv, r3, "wb") / Fvv;
  ExprP vwwb = D(vw, r3, "wb") + D(vw, r3, "v") * vwb;
  ExprP vj = num(1.0) / Fvv;
  ExprP vjj = -D(Fvv, r3, "v") / (Fvv * Fvv * Fvv);

  TodaChain out;
  out.j = Fv;
  out.pbar = D(F, r3, "wb");
  out.toda_residual = vwwb + exp(num(2.0) * coord("v")) *
                                 (num(4.0) * vjj + num(8.0) * sq(vj));
  return out;
}

WeylStructure lebrun_ward_structure(const ExprP& v) {
  const Chart& ch = chart("toda3");
  Metric h = metric_zero(ch);
  add_sym(h, exp(num(2.0) * v), dx(ch, "w"), dx(ch, "wb"));
  add_sym(h, num(1.0 / 16.0), dx(ch, "j"), dx(ch, "j"));
  Form nu = (num(4.0) * D(v, ch, "j")) * dx(ch, "j");
  return {h, nu};
}

}  // namespace ew
