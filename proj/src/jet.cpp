#include "trigonal/jet.hpp"

#include <stdexcept>

namespace trigonal {

VarTablePtr jet_table(std::string_view param) {
  std::vector<Variable> v{{std::string(param), 1, VarRole::series}};
  for (auto& l : lambda_variables()) v.push_back(l);
  return make_table(std::move(v));
}

namespace {

Series t_power(const VarTablePtr& v, int e, const Rational& c = 1) {
  std::vector<int> ex(v->size(), 0);
  ex[0] = e;
  return Series::monomial(v, ex, c);
}

// (x, y) for the literal parameter x = t^-3, y = cube root of g(t^-3) on branch 0.
std::pair<Series, Series> literal_branch(const TrigonalCurve& c, const VarTablePtr& v, int cutoff) {
  Series x = t_power(v, -3);
  Series gx = Series::constant(v, 1);
  for (int j : kTrigonalLambdas) gx = gx * x + c.lambda_series(v, j);
  // g(x) t^12 is a polynomial unit; truncate before taking the root.
  Series unit = gx.shifted(std::vector<int>{12, 0, 0, 0, 0}).truncated(cutoff);
  Series y = unit.root(3).shifted(std::vector<int>{-4, 0, 0, 0, 0});
  return {x, y};
}

Series flip_t(const Series& s) {
  std::vector<Series::Term> terms;
  for (const auto& [m, c] : s.terms()) terms.emplace_back(m, m[0] % 2 == 0 ? c : Rational(-c));
  return Series::from_terms(s.vars(), std::move(terms), s.cutoff());
}

}  // namespace

std::pair<Series, Series> branch_expansion(const TrigonalCurve& c, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("branch expansion needs cutoff >= 1");
  if (!c.purely_trigonal()) throw std::invalid_argument("branch expansion supports purely trigonal curves");
  VarTablePtr v = jet_table();
  auto [x, y] = literal_branch(c, v, cutoff);
  return {flip_t(x), flip_t(y)};
}

CurveJet abel_jet(const TrigonalCurve& c, int cutoff) {
  if (cutoff < 6) throw std::invalid_argument("abel jet needs cutoff >= 6");
  if (!c.purely_trigonal()) throw std::invalid_argument("abel jet supports purely trigonal curves");
  VarTablePtr v = jet_table();
  auto [x, y] = literal_branch(c, v, cutoff);

  // omega_i = (1, x, y) dx / 3y^2
  Series dx = x.derivative("t");
  Series base = dx * (y * y).scaled(3).inverse();
  Series u1 = base.integral("t");
  Series u2 = (x * base).integral("t");
  Series u3 = (y * base).integral("t");

  std::vector<int> lin(v->size(), 0);
  lin[0] = 1;
  Rational lead = u3.coefficient(lin);
  if (lead != 1 && lead != -1) throw SeriesError("unexpected leading coefficient of u3");

  CurveJet jet;
  jet.vars = v;
  jet.cutoff = cutoff;
  if (lead == -1) {
    x = flip_t(x);
    y = flip_t(y);
    u1 = flip_t(u1);
    u2 = flip_t(u2);
    u3 = flip_t(u3);
  }
  jet.x = std::move(x);
  jet.y = std::move(y);
  jet.u1 = std::move(u1);
  jet.u2 = std::move(u2);
  jet.u3 = std::move(u3);
  return jet;
}

std::pair<Series, Series> xy_on_curve(const CurveJet& jet) {
  VarTablePtr target = jet_table("u3");
  Series t_of_u = jet.u3.reversion("t");
  std::vector<std::optional<Series>> rename(jet.vars->size());
  rename[0] = Series::variable(target, "u3");
  Series t_u = substitute(t_of_u, target, rename);
  std::vector<std::optional<Series>> img(jet.vars->size());
  img[0] = t_u;
  return {substitute(jet.x, target, img), substitute(jet.y, target, img)};
}

CurveJet origin_jet(const VarTablePtr& v) {
  CurveJet jet;
  jet.vars = v;
  jet.cutoff = static_cast<int>(kExact / 2);
  jet.x = t_power(v, -3, -1);
  jet.y = t_power(v, -4);
  jet.u1 = t_power(v, 5, Rational(1, 5));
  jet.u2 = t_power(v, 2, Rational(-1, 2));
  jet.u3 = t_power(v, 1);
  return jet;
}

}  // namespace trigonal
