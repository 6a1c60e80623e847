#pragma once

#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

#include "ew/scalar.hpp"

namespace ew {

/** Differential form, components stored on strictly increasing multi-indices
 *  in chart coordinate order. Missing component = 0. */
struct Form {
  const Chart* ch = nullptr;
  int deg = 0;
  std::map<std::vector<int>, ExprP> comp;

  ExprP operator()(const std::vector<int>& idx) const;
};

Form form0(const Chart& ch, ExprP f);
Form dx(const Chart& ch, const std::string& c);
Form one_form(const Chart& ch,
              std::initializer_list<std::pair<std::string, ExprP>> comps);

Form operator+(const Form& a, const Form& b);
Form operator-(const Form& a, const Form& b);
Form operator-(const Form& a);
Form operator*(const ExprP& f, const Form& a);
Form operator*(const Form& a, const ExprP& f);
Form operator*(cd s, const Form& a);

Form wedge(const Form& a, const Form& b);
Form d(const Form& a);
Form d(const Chart& ch, ExprP f);

/** Pullback along the map whose components (source coord -> expression on the
 *  target chart) are given; source coordinates absent from the map pass
 *  through as the same-named target coordinate. */
Form pullback(const Form& a, const Chart& to,
              const std::map<std::string, ExprP>& m);
struct Metric;
Metric pullback(const Metric& a, const Chart& to,
                const std::map<std::string, ExprP>& m);

struct Vec {
  const Chart* ch = nullptr;
  std::vector<ExprP> comp;
};

Vec vec(const Chart& ch,
        std::initializer_list<std::pair<std::string, ExprP>> comps);
Vec operator+(const Vec& a, const Vec& b);
Vec operator*(const ExprP& f, const Vec& a);
Vec operator*(cd s, const Vec& a);

ExprP act(const Vec& v, const ExprP& f);
Vec bracket(const Vec& a, const Vec& b);
Form iota(const Vec& v, const Form& a);
Form lie(const Vec& v, const Form& a);  // Cartan formula

struct Metric {
  const Chart* ch = nullptr;
  std::vector<std::vector<ExprP>> g;
};

Metric metric_zero(const Chart& ch);
/** g += coeff * (a (x) b + b (x) a)/2 for 1-forms a, b (so the symmetric
 *  product "da db" contributes coeff/2 to each off-diagonal slot). */
void add_sym(Metric& m, ExprP coeff, const Form& a, const Form& b);

ExprP det_mat(const std::vector<std::vector<ExprP>>& a);
ExprP metric_det(const Metric& m);
Metric metric_inverse(const Metric& m);
Metric lie(const Vec& v, const Metric& m);
Metric operator+(const Metric& a, const Metric& b);
Metric operator-(const Metric& a, const Metric& b);
Metric operator*(const ExprP& f, const Metric& m);

/** Metric with cached inverse, determinant and volume coefficient. The
 *  volume form is volc * dx^0 ^ ... ^ dx^{n-1} in chart order; for charts
 *  with p conjugate pairs volc = i^p sqrt((-1)^p det) so that it matches the
 *  real-coordinate Riemannian volume on the slice. */
struct Geometry {
  Metric g, ginv;
  ExprP det;
  ExprP volc;
};

Geometry geometry(const Metric& m);
Form vol(const Geometry& geo);
Form star(const Geometry& geo, const Form& a);
ExprP pair1(const Geometry& geo, const Form& a, const Form& b);
Vec sharp(const Geometry& geo, const Form& a);

}  // namespace ew
