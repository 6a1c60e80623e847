#include "ew/exterior.hpp"

#include <algorithm>

namespace ew {

namespace {

bool is_zero(const ExprP& e) {
  return e->op == Op::Const && e->value == cd(0.0, 0.0);
}

void acc(Form& f, const std::vector<int>& idx, ExprP val) {
  if (is_zero(val)) return;
  auto it = f.comp.find(idx);
  if (it == f.comp.end()) {
    f.comp.emplace(idx, std::move(val));
  } else {
    it->second = it->second + val;
    if (is_zero(it->second)) f.comp.erase(it);
  }
}

// sign of merging two increasing disjoint index lists; 0 if they intersect
int merge_sign(const std::vector<int>& a, const std::vector<int>& b,
               std::vector<int>& out) {
  out.clear();
  int inv = 0;
  for (int x : b) {
    int gt = 0;
    for (int y : a) {
      if (y == x) return 0;
      if (y > x) gt++;
    }
    inv += gt;
  }
  out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return (inv % 2 == 0) ? 1 : -1;
}

void check_chart(const Form& a, const Form& b) {
  if (a.ch != b.ch) throw EvalError("form chart mismatch");
}

}  // namespace

ExprP Form::operator()(const std::vector<int>& idx) const {
  auto it = comp.find(idx);
  return it == comp.end() ? num(0.0) : it->second;
}

Form form0(const Chart& ch, ExprP f) {
  Form r;
  r.ch = &ch;
  r.deg = 0;
  acc(r, {}, std::move(f));
  return r;
}

Form dx(const Chart& ch, const std::string& c) {
  Form r;
  r.ch = &ch;
  r.deg = 1;
  acc(r, {ch.index(c)}, num(1.0));
  return r;
}

Form one_form(const Chart& ch,
              std::initializer_list<std::pair<std::string, ExprP>> comps) {
  Form r;
  r.ch = &ch;
  r.deg = 1;
  for (const auto& [c, f] : comps) acc(r, {ch.index(c)}, f);
  return r;
}

Form operator+(const Form& a, const Form& b) {
  check_chart(a, b);
  if (a.deg != b.deg) throw EvalError("form degree mismatch in +");
  Form r = a;
  for (const auto& [idx, f] : b.comp) acc(r, idx, f);
  return r;
}

Form operator-(const Form& a, const Form& b) { return a + (-b); }

Form operator-(const Form& a) {
  Form r;
  r.ch = a.ch;
  r.deg = a.deg;
  for (const auto& [idx, f] : a.comp) acc(r, idx, -f);
  return r;
}

Form operator*(const ExprP& f, const Form& a) {
  Form r;
  r.ch = a.ch;
  r.deg = a.deg;
  for (const auto& [idx, g] : a.comp) acc(r, idx, f * g);
  return r;
}

Form operator*(const Form& a, const ExprP& f) { return f * a; }
Form operator*(cd s, const Form& a) { return num(s) * a; }

Form wedge(const Form& a, const Form& b) {
  check_chart(a, b);
  Form r;
  r.ch = a.ch;
  r.deg = a.deg + b.deg;
  if (r.deg > a.ch->dim()) return r;  // identically zero
  std::vector<int> merged;
  for (const auto& [ia, fa] : a.comp)
    for (const auto& [ib, fb] : b.comp) {
      int s = merge_sign(ia, ib, merged);
      if (s == 0) continue;
      acc(r, merged, (s == 1) ? fa * fb : -(fa * fb));
    }
  return r;
}

Form d(const Form& a) {
  const Chart& ch = *a.ch;
  Form r;
  r.ch = a.ch;
  r.deg = a.deg + 1;
  std::vector<int> merged;
  for (const auto& [idx, f] : a.comp) {
    for (int j = 0; j < ch.dim(); j++) {
      ExprP df = diff(f, ch, ch.coords[j]);
      if (is_zero(df)) continue;
      int s = merge_sign({j}, idx, merged);
      if (s == 0) continue;
      acc(r, merged, (s == 1) ? df : -df);
    }
  }
  return r;
}

Form d(const Chart& ch, ExprP f) { return d(form0(ch, std::move(f))); }

Form pullback(const Form& a, const Chart& to,
              const std::map<std::string, ExprP>& m) {
  const Chart& from = *a.ch;
  auto comp_map = [&](int i) -> ExprP {
    auto it = m.find(from.coords[i]);
    return it == m.end() ? coord(from.coords[i]) : it->second;
  };
  Form r;
  r.ch = &to;
  r.deg = a.deg;
  for (const auto& [idx, f] : a.comp) {
    Form term = form0(to, substitute(f, m));
    for (int i : idx) term = wedge(term, d(to, comp_map(i)));
    for (const auto& [k, g] : term.comp) acc(r, k, g);
  }
  return r;
}

Metric pullback(const Metric& a, const Chart& to,
                const std::map<std::string, ExprP>& m) {
  const Chart& from = *a.ch;
  int nf = from.dim(), nt = to.dim();
  // jacobian d(map^c)/d(y_b)
  std::vector<std::vector<ExprP>> J(nf, std::vector<ExprP>(nt));
  for (int c = 0; c < nf; c++) {
    auto it = m.find(from.coords[c]);
    ExprP fc = it == m.end() ? coord(from.coords[c]) : it->second;
    for (int b = 0; b < nt; b++) J[c][b] = diff(fc, to, to.coords[b]);
  }
  Metric r = metric_zero(to);
  for (int c = 0; c < nf; c++)
    for (int d = 0; d < nf; d++) {
      ExprP gcd = substitute(a.g[c][d], m);
      for (int i = 0; i < nt; i++)
        for (int j = 0; j < nt; j++)
          r.g[i][j] = r.g[i][j] + gcd * J[c][i] * J[d][j];
    }
  return r;
}

Vec vec(const Chart& ch,
        std::initializer_list<std::pair<std::string, ExprP>> comps) {
  Vec v;
  v.ch = &ch;
  v.comp.assign(ch.dim(), num(0.0));
  for (const auto& [c, f] : comps) v.comp[ch.index(c)] = f;
  return v;
}

Vec operator+(const Vec& a, const Vec& b) {
  if (a.ch != b.ch) throw EvalError("vector chart mismatch");
  Vec r = a;
  for (int i = 0; i < (int)r.comp.size(); i++) r.comp[i] = r.comp[i] + b.comp[i];
  return r;
}

Vec operator*(const ExprP& f, const Vec& a) {
  Vec r = a;
  for (auto& c : r.comp) c = f * c;
  return r;
}

Vec operator*(cd s, const Vec& a) { return num(s) * a; }

ExprP act(const Vec& v, const ExprP& f) {
  const Chart& ch = *v.ch;
  ExprP r = num(0.0);
  for (int i = 0; i < ch.dim(); i++)
    r = r + v.comp[i] * diff(f, ch, ch.coords[i]);
  return r;
}

Vec bracket(const Vec& a, const Vec& b) {
  if (a.ch != b.ch) throw EvalError("vector chart mismatch");
  const Chart& ch = *a.ch;
  Vec r;
  r.ch = a.ch;
  r.comp.assign(ch.dim(), num(0.0));
  for (int i = 0; i < ch.dim(); i++)
    r.comp[i] = act(a, b.comp[i]) - act(b, a.comp[i]);
  return r;
}

Form iota(const Vec& v, const Form& a) {
  if (v.ch != a.ch) throw EvalError("iota chart mismatch");
  Form r;
  r.ch = a.ch;
  r.deg = a.deg - 1;
  if (a.deg == 0) throw EvalError("iota of a 0-form");
  for (const auto& [idx, f] : a.comp) {
    for (int l = 0; l < (int)idx.size(); l++) {
      std::vector<int> rest;
      for (int t = 0; t < (int)idx.size(); t++)
        if (t != l) rest.push_back(idx[t]);
      ExprP term = v.comp[idx[l]] * f;
      acc(r, rest, (l % 2 == 0) ? term : -term);
    }
  }
  return r;
}

Form lie(const Vec& v, const Form& a) {
  if (a.deg == 0) return form0(*a.ch, act(v, a({})));
  return iota(v, d(a)) + d(iota(v, a));
}

Metric metric_zero(const Chart& ch) {
  Metric m;
  m.ch = &ch;
  m.g.assign(ch.dim(), std::vector<ExprP>(ch.dim(), num(0.0)));
  return m;
}

void add_sym(Metric& m, ExprP coeff, const Form& a, const Form& b) {
  if (a.deg != 1 || b.deg != 1) throw EvalError("add_sym needs 1-forms");
  if (a.ch != m.ch || b.ch != m.ch) throw EvalError("add_sym chart mismatch");
  int n = m.ch->dim();
  for (int i = 0; i < n; i++) {
    ExprP ai = a({i});
    if (is_zero(ai)) continue;
    for (int j = 0; j < n; j++) {
      ExprP bj = b({j});
      if (is_zero(bj)) continue;
      ExprP t = coeff * ai * bj / num(2.0);
      m.g[i][j] = m.g[i][j] + t;
      m.g[j][i] = m.g[j][i] + t;
    }
  }
}

ExprP det_mat(const std::vector<std::vector<ExprP>>& a) {
  int n = (int)a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  ExprP r = num(0.0);
  for (int j = 0; j < n; j++) {
    if (is_zero(a[0][j])) continue;
    std::vector<std::vector<ExprP>> sub;
    for (int i = 1; i < n; i++) {
      std::vector<ExprP> row;
      for (int k = 0; k < n; k++)
        if (k != j) row.push_back(a[i][k]);
      sub.push_back(std::move(row));
    }
    ExprP t = a[0][j] * det_mat(sub);
    r = (j % 2 == 0) ? r + t : r - t;
  }
  return r;
}

ExprP metric_det(const Metric& m) { return det_mat(m.g); }

Metric metric_inverse(const Metric& m) {
  int n = m.ch->dim();
  ExprP det = det_mat(m.g);
  Metric inv = metric_zero(*m.ch);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) {
      std::vector<std::vector<ExprP>> sub;
      for (int r = 0; r < n; r++) {
        if (r == i) continue;
        std::vector<ExprP> row;
        for (int c = 0; c < n; c++)
          if (c != j) row.push_back(m.g[r][c]);
        sub.push_back(std::move(row));
      }
      ExprP cof = (n == 1) ? num(1.0) : det_mat(sub);
      if ((i + j) % 2 == 1) cof = -cof;
      inv.g[j][i] = cof / det;  // adjugate transpose; symmetric anyway
    }
  return inv;
}

Metric lie(const Vec& v, const Metric& m) {
  if (v.ch != m.ch) throw EvalError("lie chart mismatch");
  const Chart& ch = *m.ch;
  int n = ch.dim();
  Metric r = metric_zero(ch);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) {
      ExprP t = act(v, m.g[i][j]);
      for (int k = 0; k < n; k++) {
        t = t + m.g[k][j] * diff(v.comp[k], ch, ch.coords[i]);
        t = t + m.g[i][k] * diff(v.comp[k], ch, ch.coords[j]);
      }
      r.g[i][j] = t;
    }
  return r;
}

Metric operator+(const Metric& a, const Metric& b) {
  if (a.ch != b.ch) throw EvalError("metric chart mismatch");
  Metric r = metric_zero(*a.ch);
  for (int i = 0; i < a.ch->dim(); i++)
    for (int j = 0; j < a.ch->dim(); j++) r.g[i][j] = a.g[i][j] + b.g[i][j];
  return r;
}

Metric operator-(const Metric& a, const Metric& b) {
  if (a.ch != b.ch) throw EvalError("metric chart mismatch");
  Metric r = metric_zero(*a.ch);
  for (int i = 0; i < a.ch->dim(); i++)
    for (int j = 0; j < a.ch->dim(); j++) r.g[i][j] = a.g[i][j] - b.g[i][j];
  return r;
}

Metric operator*(const ExprP& f, const Metric& m) {
  Metric r = metric_zero(*m.ch);
  for (int i = 0; i < m.ch->dim(); i++)
    for (int j = 0; j < m.ch->dim(); j++) r.g[i][j] = f * m.g[i][j];
  return r;
}

Geometry geometry(const Metric& m) {
  Geometry geo;
  geo.g = m;
  geo.ginv = metric_inverse(m);
  geo.det = metric_det(m);
  int pairs = 0;
  for (auto k : m.ch->kinds)
    if (k == CoordKind::PairFirst) pairs++;
  ExprP signed_det = (pairs % 2 == 1) ? -geo.det : geo.det;
  cd ip = std::pow(cd(0.0, 1.0), pairs);
  geo.volc = num(ip) * pow(signed_det, cd(0.5, 0.0));
  return geo;
}

Form vol(const Geometry& geo) {
  const Chart& ch = *geo.g.ch;
  Form r;
  r.ch = &ch;
  r.deg = ch.dim();
  std::vector<int> full(ch.dim());
  for (int i = 0; i < ch.dim(); i++) full[i] = i;
  acc(r, full, geo.volc);
  return r;
}

namespace {

// raise all indices of an increasing multi-index component block
ExprP raised(const Geometry& geo, const Form& a, const std::vector<int>& I) {
  ExprP r = num(0.0);
  for (const auto& [J, f] : a.comp) {
    std::vector<std::vector<ExprP>> sub(I.size(),
                                        std::vector<ExprP>(I.size()));
    for (size_t x = 0; x < I.size(); x++)
      for (size_t y = 0; y < J.size(); y++)
        sub[x][y] = geo.ginv.g[I[x]][J[y]];
    r = r + (I.empty() ? f : det_mat(sub) * f);
  }
  return r;
}

}  // namespace

Form star(const Geometry& geo, const Form& a) {
  const Chart& ch = *geo.g.ch;
  int n = ch.dim(), k = a.deg;
  Form r;
  r.ch = &ch;
  r.deg = n - k;
  if (r.deg < 0) throw EvalError("star of over-degree form");
  // enumerate increasing k-subsets I of {0..n-1}
  std::vector<int> I(k);
  std::vector<bool> in(n, false);
  auto emit = [&]() {
    ExprP up = raised(geo, a, I);
    if (is_zero(up)) return;
    std::vector<int> K;
    for (int i = 0; i < n; i++)
      if (!in[i]) K.push_back(i);
    std::vector<int> merged;
    int s = merge_sign(I, K, merged);
    ExprP t = geo.volc * up;
    acc(r, K, (s == 1) ? t : -t);
  };
  // iterate subsets
  std::vector<int> idx(k);
  for (int i = 0; i < k; i++) idx[i] = i;
  if (k == 0) {
    emit();
    return r;
  }
  while (true) {
    for (int i = 0; i < n; i++) in[i] = false;
    for (int i = 0; i < k; i++) {
      I[i] = idx[i];
      in[idx[i]] = true;
    }
    emit();
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) pos--;
    if (pos < 0) break;
    idx[pos]++;
    for (int i = pos + 1; i < k; i++) idx[i] = idx[i - 1] + 1;
  }
  return r;
}

ExprP pair1(const Geometry& geo, const Form& a, const Form& b) {
  if (a.deg != 1 || b.deg != 1) throw EvalError("pair1 needs 1-forms");
  int n = geo.g.ch->dim();
  ExprP r = num(0.0);
  for (int i = 0; i < n; i++) {
    ExprP ai = a({i});
    if (is_zero(ai)) continue;
    for (int j = 0; j < n; j++) r = r + geo.ginv.g[i][j] * ai * b({j});
  }
  return r;
}

Vec sharp(const Geometry& geo, const Form& a) {
  if (a.deg != 1) throw EvalError("sharp needs a 1-form");
  const Chart& ch = *geo.g.ch;
  Vec v;
  v.ch = &ch;
  v.comp.assign(ch.dim(), num(0.0));
  for (int i = 0; i < ch.dim(); i++)
    for (int j = 0; j < ch.dim(); j++)
      v.comp[i] = v.comp[i] + geo.ginv.g[i][j] * a({j});
  return v;
}

}  // namespace ew
