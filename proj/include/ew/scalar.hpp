#pragma once

#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ew {

using cd = std::complex<double>;

struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class CoordKind { Real, PairFirst, PairSecond, Holo };

/** Coordinate chart with reality tags. Conjugate pairs are tracked so that
 *  Wirtinger derivatives of conj() nodes land on the partner coordinate;
 *  real coordinates are their own partner. */
struct Chart {
  std::string name;
  std::vector<std::string> coords;
  std::vector<CoordKind> kinds;
  std::vector<int> partner;  // conjugate partner index, -1 for holomorphic

  int dim() const { return (int)coords.size(); }
  int index(const std::string& c) const;
  bool has(const std::string& c) const;
};

/** Fixed chart registry (coordinate order matters for form components). */
const Chart& chart(const std::string& name);

enum class Op {
  Const, Coord, Param,
  Add, Sub, Mul, Div, Pow,
  Neg, Exp, Log, Sin, Cos, Tan, Sinh, Cosh, Atanh, Conj
};

struct Expr;
using ExprP = std::shared_ptr<const Expr>;

struct Expr {
  Op op = Op::Const;
  cd value{0.0, 0.0};  // Const payload
  std::string name;    // Coord / Param payload
  ExprP a, b;
};

ExprP num(double x);
ExprP num(cd x);
ExprP coord(const std::string& name);
ExprP param(const std::string& name);

ExprP operator+(ExprP a, ExprP b);
ExprP operator-(ExprP a, ExprP b);
ExprP operator*(ExprP a, ExprP b);
ExprP operator/(ExprP a, ExprP b);
ExprP operator-(ExprP a);
ExprP operator+(ExprP a, cd b);
ExprP operator+(cd a, ExprP b);
ExprP operator-(ExprP a, cd b);
ExprP operator-(cd a, ExprP b);
ExprP operator*(ExprP a, cd b);
ExprP operator*(cd a, ExprP b);
ExprP operator/(ExprP a, cd b);
ExprP operator/(cd a, ExprP b);

ExprP pow(ExprP a, ExprP b);
ExprP pow(ExprP a, cd b);
ExprP sq(ExprP a);
ExprP exp(ExprP a);
ExprP log(ExprP a);
ExprP sin(ExprP a);
ExprP cos(ExprP a);
ExprP tan(ExprP a);
ExprP sinh(ExprP a);
ExprP cosh(ExprP a);
ExprP atanh(ExprP a);
ExprP conj(ExprP a);

enum class SliceKind { Euclidean, Ultrahyperbolic, Generic };

/** Parameter pack for evaluation. Core constants satisfy
 *  eta = (m+mt)/2, rho = (m-mt)/2, eta^2 - rho^2 = m*mt. */
struct Params {
  SliceKind kind = SliceKind::Euclidean;
  double alpha = 0.0;
  double b = 1.0;
  cd m{1.0, 0.0}, mt{1.0, 0.0}, eta{1.0, 0.0}, rho{0.0, 0.0};
  std::map<std::string, cd> extra;

  static Params euclidean(double alpha, double b = 1.0);
  static Params ultrahyperbolic(double alpha, double b = 1.0);
  static Params generic(cd m, double b = 1.0);

  cd lookup(const std::string& name) const;
  Params with(const std::string& name, cd v) const;
};

using Point = std::map<std::string, cd>;

cd eval(const ExprP& e, const Params& p, const Point& pt);

/** eval + check that the result is real to within tol (absolute on imag). */
double eval_real(const ExprP& e, const Params& p, const Point& pt,
                 double imag_tol = 1e-9);

ExprP diff(const ExprP& e, const Chart& ch, const std::string& coordname);
ExprP diff(const ExprP& e, const Chart& ch, const std::string& coordname,
           int order);

/** Replace Coord/Param leaves by expressions. Conjugate-pair coordinates must
 *  be replaced consistently by the caller. */
ExprP substitute(const ExprP& e, const std::map<std::string, ExprP>& repl);

bool depends_on(const ExprP& e, const std::string& name);

/** Structural complex conjugate with conjugation pushed to the leaves:
 *  pair coordinates swap with their partner, real coordinates are fixed, and
 *  parameters follow the euclidean-slice involution (m <-> mt, rho -> -rho,
 *  C <-> Cb, everything else fixed). The result contains no Conj nodes, so
 *  it can be evaluated off the real slice (finite differences, curvature). */
ExprP bar(const ExprP& e, const Chart& ch);

std::string to_string(const ExprP& e);

/** |analytic - 4th order central difference| for d/d(coordname) at pt. */
double fd_check(const ExprP& e, const Chart& ch, const std::string& coordname,
                const Params& p, const Point& pt, double h = 1e-3);

/** Same but for conj-pair coordinates: checks the real directional
 *  derivatives d/dx = d_w + d_wb and d/dy = i(d_w - d_wb) while stepping
 *  both coordinates so the slice wb = conj(w) is preserved. */
double fd_check_slice(const ExprP& e, const Chart& ch, const std::string& wname,
                      const Params& p, const Point& pt, double h = 1e-3);

}  // namespace ew
