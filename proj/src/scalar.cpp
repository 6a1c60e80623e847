#include "ew/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace ew {

int Chart::index(const std::string& c) const {
  for (int i = 0; i < (int)coords.size(); i++)
    if (coords[i] == c) return i;
  throw EvalError("coordinate '" + c + "' not in chart " + name);
}

bool Chart::has(const std::string& c) const {
  for (const auto& x : coords)
    if (x == c) return true;
  return false;
}

namespace {

void add_real(Chart& ch, const std::string& c) {
  ch.coords.push_back(c);
  ch.kinds.push_back(CoordKind::Real);
  ch.partner.push_back((int)ch.coords.size() - 1);
}

void add_holo(Chart& ch, const std::string& c) {
  ch.coords.push_back(c);
  ch.kinds.push_back(CoordKind::Holo);
  ch.partner.push_back(-1);
}

void add_pair(Chart& ch, const std::string& c, const std::string& cb) {
  int i = (int)ch.coords.size();
  ch.coords.push_back(c);
  ch.kinds.push_back(CoordKind::PairFirst);
  ch.partner.push_back(i + 1);
  ch.coords.push_back(cb);
  ch.kinds.push_back(CoordKind::PairSecond);
  ch.partner.push_back(i);
}

std::map<std::string, Chart> build_charts() {
  std::map<std::string, Chart> reg;
  auto put = [&](Chart ch) { reg[ch.name] = std::move(ch); };

  {
    Chart ch;
    ch.name = "c4";
    for (auto c : {"w", "z", "wt", "zt"}) add_holo(ch, c);
    put(ch);
  }
  {
    Chart ch;
    ch.name = "c4t";
    for (auto c : {"t", "u", "w", "wt"}) add_holo(ch, c);
    put(ch);
  }
  {
    Chart ch;
    ch.name = "c3";
    for (auto c : {"w", "wt", "u"}) add_holo(ch, c);
    put(ch);
  }
  {
    // euclidean slice of c4: wt = -conj(w), zt = conj(z)
    Chart ch;
    ch.name = "e4";
    add_pair(ch, "w", "wb");
    add_pair(ch, "z", "zb");
    put(ch);
  }
  {
    Chart ch;
    ch.name = "corr5";
    for (auto c : {"w", "z", "wt", "zt", "lam"}) add_holo(ch, c);
    put(ch);
  }
  {
    Chart ch;
    ch.name = "corr4";
    for (auto c : {"w", "wt", "u", "lamt"}) add_holo(ch, c);
    put(ch);
  }
  {
    Chart ch;
    ch.name = "r3";
    add_pair(ch, "w", "wb");
    add_real(ch, "v");
    put(ch);
  }
  {
    // euclidean slice of the symmetry chart: t real fiber over r3
    Chart ch;
    ch.name = "r4";
    add_real(ch, "t");
    add_pair(ch, "w", "wb");
    add_real(ch, "v");
    put(ch);
  }
  {
    Chart ch;
    ch.name = "xyz";
    for (auto c : {"x", "y", "q"}) add_real(ch, c);
    put(ch);
  }
  {
    Chart ch;
    ch.name = "txyz";
    for (auto c : {"t", "x", "y", "q"}) add_real(ch, c);
    put(ch);
  }
  {
    Chart ch;
    ch.name = "r3lam";
    add_pair(ch, "w", "wb");
    add_real(ch, "v");
    add_holo(ch, "lam");
    put(ch);
  }
  {
    Chart ch;
    ch.name = "fiber";
    add_pair(ch, "w", "wb");
    add_real(ch, "v");
    add_real(ch, "G");
    put(ch);
  }
  {
    Chart ch;
    ch.name = "ideal6";
    add_pair(ch, "w", "wb");
    add_real(ch, "v");
    add_pair(ch, "Q", "Qb");
    add_holo(ch, "J");
    put(ch);
  }
  {
    Chart ch;
    ch.name = "berger";
    for (auto c : {"theta", "phi", "psi"}) add_real(ch, c);
    put(ch);
  }
  {
    Chart ch;
    ch.name = "toda3";
    add_pair(ch, "w", "wb");
    add_real(ch, "j");
    put(ch);
  }
  {
    Chart ch;
    ch.name = "xi_v";
    add_real(ch, "xi");
    add_real(ch, "v");
    put(ch);
  }
  {
    Chart ch;
    ch.name = "J_v";
    add_real(ch, "J");
    add_real(ch, "v");
    put(ch);
  }
  {
    Chart ch;
    ch.name = "R_v";
    add_real(ch, "R");
    add_real(ch, "v");
    put(ch);
  }
  {
    Chart ch;
    ch.name = "plane";
    add_pair(ch, "w", "wb");
    put(ch);
  }
  return reg;
}

}  // namespace

const Chart& chart(const std::string& name) {
  static const std::map<std::string, Chart> reg = build_charts();
  auto it = reg.find(name);
  if (it == reg.end()) throw EvalError("unknown chart '" + name + "'");
  return it->second;
}

namespace {

ExprP mk(Op op, ExprP a = nullptr, ExprP b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

bool is_const(const ExprP& e) { return e->op == Op::Const; }

bool is_val(const ExprP& e, double v) {
  return e->op == Op::Const && e->value == cd(v, 0.0);
}

std::string short_str(const ExprP& e) {
  std::string s = to_string(e);
  if (s.size() > 200) s = s.substr(0, 200) + "...";
  return s;
}

}  // namespace

ExprP num(double x) { return num(cd(x, 0.0)); }

ExprP num(cd x) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Const;
  e->value = x;
  return e;
}

ExprP coord(const std::string& name) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Coord;
  e->name = name;
  return e;
}

ExprP param(const std::string& name) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Param;
  e->name = name;
  return e;
}

ExprP operator+(ExprP a, ExprP b) {
  if (is_const(a) && is_const(b)) return num(a->value + b->value);
  if (is_val(a, 0.0)) return b;
  if (is_val(b, 0.0)) return a;
  return mk(Op::Add, std::move(a), std::move(b));
}

ExprP operator-(ExprP a, ExprP b) {
  if (is_const(a) && is_const(b)) return num(a->value - b->value);
  if (is_val(b, 0.0)) return a;
  if (a.get() == b.get()) return num(0.0);
  if (is_val(a, 0.0)) return -std::move(b);
  return mk(Op::Sub, std::move(a), std::move(b));
}

ExprP operator*(ExprP a, ExprP b) {
  if (is_const(a) && is_const(b)) return num(a->value * b->value);
  if (is_val(a, 0.0) || is_val(b, 0.0)) return num(0.0);
  if (is_val(a, 1.0)) return b;
  if (is_val(b, 1.0)) return a;
  if (is_val(a, -1.0)) return -std::move(b);
  if (is_val(b, -1.0)) return -std::move(a);
  return mk(Op::Mul, std::move(a), std::move(b));
}

ExprP operator/(ExprP a, ExprP b) {
  if (is_val(b, 0.0)) throw EvalError("division by constant zero");
  if (is_const(a) && is_const(b)) return num(a->value / b->value);
  if (is_val(a, 0.0)) return num(0.0);
  if (is_val(b, 1.0)) return a;
  if (a.get() == b.get()) return num(1.0);
  return mk(Op::Div, std::move(a), std::move(b));
}

ExprP operator-(ExprP a) {
  if (is_const(a)) return num(-a->value);
  if (a->op == Op::Neg) return a->a;
  return mk(Op::Neg, std::move(a));
}

ExprP operator+(ExprP a, cd b) { return std::move(a) + num(b); }
ExprP operator+(cd a, ExprP b) { return num(a) + std::move(b); }
ExprP operator-(ExprP a, cd b) { return std::move(a) - num(b); }
ExprP operator-(cd a, ExprP b) { return num(a) - std::move(b); }
ExprP operator*(ExprP a, cd b) { return std::move(a) * num(b); }
ExprP operator*(cd a, ExprP b) { return num(a) * std::move(b); }
ExprP operator/(ExprP a, cd b) { return std::move(a) / num(b); }
ExprP operator/(cd a, ExprP b) { return num(a) / std::move(b); }

ExprP pow(ExprP a, ExprP b) {
  if (is_val(b, 0.0)) return num(1.0);
  if (is_val(b, 1.0)) return a;
  if (is_const(a) && is_const(b)) return num(std::pow(a->value, b->value));
  return mk(Op::Pow, std::move(a), std::move(b));
}

ExprP pow(ExprP a, cd b) { return pow(std::move(a), num(b)); }

ExprP sq(ExprP a) { return a * a; }

namespace {

ExprP fn(Op op, ExprP a, cd (*fold)(cd)) {
  if (is_const(a)) return num(fold(a->value));
  return mk(op, std::move(a));
}

}  // namespace

ExprP exp(ExprP a) {
  return fn(Op::Exp, std::move(a),+[](cd x) { return std::exp(x); });
}
ExprP log(ExprP a) {
  return fn(Op::Log, std::move(a), +[](cd x) { return std::log(x); });
}
ExprP sin(ExprP a) {
  return fn(Op::Sin, std::move(a), +[](cd x) { return std::sin(x); });
}
ExprP cos(ExprP a) {
  return fn(Op::Cos, std::move(a), +[](cd x) { return std::cos(x); });
}
ExprP tan(ExprP a) {
  return fn(Op::Tan, std::move(a), +[](cd x) { return std::tan(x); });
}
ExprP sinh(ExprP a) {
  return fn(Op::Sinh, std::move(a), +[](cd x) { return std::sinh(x); });
}
ExprP cosh(ExprP a) {
  return fn(Op::Cosh, std::move(a), +[](cd x) { return std::cosh(x); });
}
ExprP atanh(ExprP a) {
  return fn(Op::Atanh, std::move(a), +[](cd x) { return std::atanh(x); });
}

ExprP conj(ExprP a) {
  if (is_const(a)) return num(std::conj(a->value));
  if (a->op == Op::Conj) return a->a;
  return mk(Op::Conj, std::move(a));
}

Params Params::euclidean(double alpha, double b) {
  if (b <= 0.0) throw EvalError("euclidean params need b > 0");
  Params p;
  p.kind = SliceKind::Euclidean;
  p.alpha = alpha;
  p.b = b;
  p.m = std::exp(cd(0.0, alpha));
  p.mt = std::exp(cd(0.0, -alpha));
  p.eta = cd(std::cos(alpha), 0.0);
  p.rho = cd(0.0, std::sin(alpha));
  return p;
}

Params Params::ultrahyperbolic(double alpha, double b) {
  Params p;
  p.kind = SliceKind::Ultrahyperbolic;
  p.alpha = alpha;
  p.b = b;
  p.m = cd(std::exp(alpha), 0.0);
  p.mt = cd(-std::exp(-alpha), 0.0);
  p.eta = cd(std::sinh(alpha), 0.0);
  p.rho = cd(std::cosh(alpha), 0.0);
  return p;
}

Params Params::generic(cd m, double b) {
  if (m == cd(0.0, 0.0)) throw EvalError("generic params need m != 0");
  Params p;
  p.kind = SliceKind::Generic;
  p.alpha = 0.0;
  p.b = b;
  p.m = m;
  p.mt = cd(1.0, 0.0) / m;
  p.eta = (p.m + p.mt) / 2.0;
  p.rho = (p.m - p.mt) / 2.0;
  return p;
}

cd Params::lookup(const std::string& name) const {
  if (name == "m") return m;
  if (name == "mt") return mt;
  if (name == "eta") return eta;
  if (name == "rho") return rho;
  if (name == "b") return cd(b, 0.0);
  if (name == "alpha") return cd(alpha, 0.0);
  if (name == "sa") {
    if (kind != SliceKind::Euclidean)
      throw EvalError("param 'sa' only defined for euclidean kind");
    return cd(std::sin(alpha), 0.0);
  }
  if (name == "ca") {
    if (kind != SliceKind::Euclidean)
      throw EvalError("param 'ca' only defined for euclidean kind");
    return cd(std::cos(alpha), 0.0);
  }
  auto it = extra.find(name);
  if (it != extra.end()) return it->second;
  throw EvalError("unknown parameter '" + name + "'");
}

Params Params::with(const std::string& name, cd v) const {
  Params p = *this;
  p.extra[name] = v;
  return p;
}

namespace {

struct Evaluator {
  const Params& p;
  const Point& pt;
  std::unordered_map<const Expr*, cd> memo;

  cd run(const ExprP& e) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    cd r;
    switch (e->op) {
      case Op::Const: r = e->value; break;
      case Op::Coord: {
        auto jt = pt.find(e->name);
        if (jt == pt.end())
          throw EvalError("unbound coordinate '" + e->name + "'");
        r = jt->second;
        break;
      }
      case Op::Param: r = p.lookup(e->name); break;
      case Op::Add: r = run(e->a) + run(e->b); break;
      case Op::Sub: r = run(e->a) - run(e->b); break;
      case Op::Mul: r = run(e->a) * run(e->b); break;
      case Op::Div: {
        cd den = run(e->b);
        if (den == cd(0.0, 0.0))
          throw EvalError("division by zero in " + short_str(e));
        r = run(e->a) / den;
        break;
      }
      case Op::Pow: r = std::pow(run(e->a), run(e->b)); break;
      case Op::Neg: r = -run(e->a); break;
      case Op::Exp: r = std::exp(run(e->a)); break;
      case Op::Log: r = std::log(run(e->a)); break;
      case Op::Sin: r = std::sin(run(e->a)); break;
      case Op::Cos: r = std::cos(run(e->a)); break;
      case Op::Tan: r = std::tan(run(e->a)); break;
      case Op::Sinh: r = std::sinh(run(e->a)); break;
      case Op::Cosh: r = std::cosh(run(e->a)); break;
      case Op::Atanh: r = std::atanh(run(e->a)); break;
      case Op::Conj: r = std::conj(run(e->a)); break;
    }
    memo.emplace(e.get(), r);
    return r;
  }
};

}  // namespace

cd eval(const ExprP& e, const Params& p, const Point& pt) {
  Evaluator ev{p, pt, {}};
  return ev.run(e);
}

double eval_real(const ExprP& e, const Params& p, const Point& pt,
                 double imag_tol) {
  cd v = eval(e, p, pt);
  if (std::abs(v.imag()) > imag_tol * std::max(1.0, std::abs(v.real())))
    throw EvalError("expected real value, got imag " +
                    std::to_string(v.imag()) + " in " + short_str(e));
  return v.real();
}

bool depends_on(const ExprP& e, const std::string& name) {
  if (e->op == Op::Coord || e->op == Op::Param) return e->name == name;
  if (e->a && depends_on(e->a, name)) return true;
  if (e->b && depends_on(e->b, name)) return true;
  return false;
}

namespace {

struct Differ {
  const Chart& ch;
  const std::string& c;
  std::unordered_map<const Expr*, ExprP> memo;

  ExprP run(const ExprP& e) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    ExprP r;
    switch (e->op) {
      case Op::Const:
      case Op::Param: r = num(0.0); break;
      case Op::Coord: r = num(e->name == c ? 1.0 : 0.0); break;
      case Op::Add: r = run(e->a) + run(e->b); break;
      case Op::Sub: r = run(e->a) - run(e->b); break;
      case Op::Mul: r = run(e->a) * e->b + e->a * run(e->b); break;
      case Op::Div:
        r = run(e->a) / e->b - e->a * run(e->b) / (e->b * e->b);
        break;
      case Op::Pow: {
        if (is_const(e->b)) {
          r = e->b * pow(e->a, e->b->value - cd(1.0, 0.0)) * run(e->a);
        } else {
          r = e * (run(e->b) * log(e->a) + e->b * run(e->a) / e->a);
        }
        break;
      }
      case Op::Neg: r = -run(e->a); break;
      case Op::Exp: r = e * run(e->a); break;
      case Op::Log: r = run(e->a) / e->a; break;
      case Op::Sin: r = cos(e->a) * run(e->a); break;
      case Op::Cos: r = -(sin(e->a) * run(e->a)); break;
      case Op::Tan: r = (num(1.0) + e * e) * run(e->a); break;
      case Op::Sinh: r = cosh(e->a) * run(e->a); break;
      case Op::Cosh: r = sinh(e->a) * run(e->a); break;
      case Op::Atanh: r = run(e->a) / (num(1.0) - e->a * e->a); break;
      case Op::Conj: {
        int i = ch.index(c);
        if (ch.kinds[i] == CoordKind::Holo) {
          if (depends_on(e->a, c))
            throw EvalError("conj across holomorphic coordinate '" + c + "'");
          r = num(0.0);
        } else {
          const std::string& pc = ch.coords[ch.partner[i]];
          Differ d2{ch, pc, {}};
          r = conj(d2.run(e->a));
        }
        break;
      }
    }
    memo.emplace(e.get(), r);
    return r;
  }
};

}  // namespace

ExprP diff(const ExprP& e, const Chart& ch, const std::string& coordname) {
  ch.index(coordname);  // validate
  Differ d{ch, coordname, {}};
  return d.run(e);
}

ExprP diff(const ExprP& e, const Chart& ch, const std::string& coordname,
           int order) {
  ExprP r = e;
  for (int k = 0; k < order; k++) r = diff(r, ch, coordname);
  return r;
}

namespace {

struct Subst {
  const std::map<std::string, ExprP>& repl;
  std::unordered_map<const Expr*, ExprP> memo;

  ExprP run(const ExprP& e) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    ExprP r;
    switch (e->op) {
      case Op::Const: r = e; break;
      case Op::Coord:
      case Op::Param: {
        auto jt = repl.find(e->name);
        r = (jt == repl.end()) ? e : jt->second;
        break;
      }
      case Op::Add: r = run(e->a) + run(e->b); break;
      case Op::Sub: r = run(e->a) - run(e->b); break;
      case Op::Mul: r = run(e->a) * run(e->b); break;
      case Op::Div: r = run(e->a) / run(e->b); break;
      case Op::Pow: r = pow(run(e->a), run(e->b)); break;
      case Op::Neg: r = -run(e->a); break;
      case Op::Exp: r = exp(run(e->a)); break;
      case Op::Log: r = log(run(e->a)); break;
      case Op::Sin: r = sin(run(e->a)); break;
      case Op::Cos: r = cos(run(e->a)); break;
      case Op::Tan: r = tan(run(e->a)); break;
      case Op::Sinh: r = sinh(run(e->a)); break;
      case Op::Cosh: r = cosh(run(e->a)); break;
      case Op::Atanh: r = atanh(run(e->a)); break;
      case Op::Conj: r = conj(run(e->a)); break;
    }
    memo.emplace(e.get(), r);
    return r;
  }
};

}  // namespace

ExprP substitute(const ExprP& e, const std::map<std::string, ExprP>& repl) {
  Subst s{repl, {}};
  return s.run(e);
}

namespace {

struct Bar {
  const Chart& ch;
  std::unordered_map<const Expr*, ExprP> memo;

  ExprP run(const ExprP& e) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    ExprP r;
    switch (e->op) {
      case Op::Const: r = num(std::conj(e->value)); break;
      case Op::Coord: {
        int i = ch.index(e->name);
        if (ch.kinds[i] == CoordKind::Holo)
          throw EvalError("bar across holomorphic coordinate '" + e->name +
                          "'");
        r = coord(ch.coords[ch.partner[i]]);
        break;
      }
      case Op::Param: {
        if (e->name == "m") r = param("mt");
        else if (e->name == "mt") r = param("m");
        else if (e->name == "rho") r = -param("rho");
        else if (e->name == "C") r = param("Cb");
        else if (e->name == "Cb") r = param("C");
        else r = e;  // eta, b, alpha, sa, ca, real extras
        break;
      }
      case Op::Add: r = run(e->a) + run(e->b); break;
      case Op::Sub: r = run(e->a) - run(e->b); break;
      case Op::Mul: r = run(e->a) * run(e->b); break;
      case Op::Div: r = run(e->a) / run(e->b); break;
      case Op::Pow: r = pow(run(e->a), run(e->b)); break;
      case Op::Neg: r = -run(e->a); break;
      case Op::Exp: r = exp(run(e->a)); break;
      case Op::Log: r = log(run(e->a)); break;
      case Op::Sin: r = sin(run(e->a)); break;
      case Op::Cos: r = cos(run(e->a)); break;
      case Op::Tan: r = tan(run(e->a)); break;
      case Op::Sinh: r = sinh(run(e->a)); break;
      case Op::Cosh: r = cosh(run(e->a)); break;
      case Op::Atanh: r = atanh(run(e->a)); break;
      case Op::Conj:
        throw EvalError("bar applied to an expression with conj nodes");
    }
    memo.emplace(e.get(), r);
    return r;
  }
};

}  // namespace

ExprP bar(const ExprP& e, const Chart& ch) {
  Bar b{ch, {}};
  return b.run(e);
}

namespace {

void ts(const ExprP& e, std::ostringstream& out) {
  switch (e->op) {
    case Op::Const: {
      if (e->value.imag() == 0.0) {
        out << e->value.real();
      } else {
        out << "(" << e->value.real() << (e->value.imag() < 0 ? "-" : "+")
            << std::abs(e->value.imag()) << "i)";
      }
      break;
    }
    case Op::Coord: out << e->name; break;
    case Op::Param: out << e->name; break;
    case Op::Add: out << "("; ts(e->a, out); out << "+"; ts(e->b, out); out << ")"; break;
    case Op::Sub: out << "("; ts(e->a, out); out << "-"; ts(e->b, out); out << ")"; break;
    case Op::Mul: out << "("; ts(e->a, out); out << "*"; ts(e->b, out); out << ")"; break;
    case Op::Div: out << "("; ts(e->a, out); out << "/"; ts(e->b, out); out << ")"; break;
    case Op::Pow: out << "("; ts(e->a, out); out << "^"; ts(e->b, out); out << ")"; break;
    case Op::Neg: out << "(-"; ts(e->a, out); out << ")"; break;
    case Op::Exp: out << "exp("; ts(e->a, out); out << ")"; break;
    case Op::Log: out << "log("; ts(e->a, out); out << ")"; break;
    case Op::Sin: out << "sin("; ts(e->a, out); out << ")"; break;
    case Op::Cos: out << "cos("; ts(e->a, out); out << ")"; break;
    case Op::Tan: out << "tan("; ts(e->a, out); out << ")"; break;
    case Op::Sinh: out << "sinh("; ts(e->a, out); out << ")"; break;
    case Op::Cosh: out << "cosh("; ts(e->a, out); out << ")"; break;
    case Op::Atanh: out << "atanh("; ts(e->a, out); out << ")"; break;
    case Op::Conj: out << "conj("; ts(e->a, out); out << ")"; break;
  }
}

}  // namespace

std::string to_string(const ExprP& e) {
  std::ostringstream out;
  ts(e, out);
  return out.str();
}

double fd_check(const ExprP& e, const Chart& ch, const std::string& coordname,
                const Params& p, const Point& pt, double h) {
  cd analytic = eval(diff(e, ch, coordname), p, pt);
  auto f = [&](double t) {
    Point q = pt;
    q[coordname] += t;
    return eval(e, p, q);
  };
  cd fd = (-f(2 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2 * h)) / (12.0 * h);
  return std::abs(analytic - fd);
}

double fd_check_slice(const ExprP& e, const Chart& ch, const std::string& wname,
                      const Params& p, const Point& pt, double h) {
  int i = ch.index(wname);
  if (ch.partner[i] < 0 || ch.partner[i] == i)
    throw EvalError("fd_check_slice needs a conjugate-pair coordinate");
  const std::string& wb = ch.coords[ch.partner[i]];
  ExprP dw = diff(e, ch, wname), dwb = diff(e, ch, wb);
  cd ax = eval(dw + dwb, p, pt);
  cd ay = eval(cd(0.0, 1.0) * (dw - dwb), p, pt);
  auto f = [&](cd sw, cd swb) {
    Point q = pt;
    q[wname] += sw;
    q[wb] += swb;
    return eval(e, p, q);
  };
  auto fd_dir = [&](cd sw, cd swb) {
    return (-f(2.0 * sw, 2.0 * swb) + 8.0 * f(sw, swb) - 8.0 * f(-sw, -swb) +
            f(-2.0 * sw, -2.0 * swb)) /
           (12.0 * h);
  };
  cd fx = fd_dir(cd(h, 0.0), cd(h, 0.0));
  cd fy = fd_dir(cd(0.0, h), cd(0.0, -h));
  return std::max(std::abs(ax - fx), std::abs(ay - fy));
}

}  // namespace ew
