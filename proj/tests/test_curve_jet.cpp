#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "trigonal/curve.hpp"
#include "trigonal/jet.hpp"

using namespace trigonal;

namespace {

TrigonalCurve fermat_like() { return TrigonalCurve::trigonal(0, 0, 0, -1); }

std::vector<int> tex(const VarTablePtr& v, int e, std::vector<int> lam = {0, 0, 0, 0}) {
  std::vector<int> ex(v->size(), 0);
  ex[0] = e;
  for (std::size_t i = 0; i < lam.size(); ++i) ex[i + 1] = lam[i];
  return ex;
}

}  // namespace

TEST_CASE("evaluate f and partials") {
  TrigonalCurve origin;
  CHECK(origin.evaluate_f(Rational(1), Rational(1)) == 0);
  CHECK(fermat_like().evaluate_f(Rational(1), Rational(0)) == 0);
  CHECK(fermat_like().evaluate_f(Rational(0), Rational(1)) == 2);
  auto [fx, fy] = origin.partials_f(Rational(1), Rational(1));
  CHECK(fy == 3);
  CHECK(fx == -4);
  auto [cx, cy] = fermat_like().partials_f(std::complex<double>(0.3, 0.2), std::complex<double>(1, -1));
  CHECK(std::abs(cy - 3.0 * std::complex<double>(1, -1) * std::complex<double>(1, -1)) < 1e-14);
  (void)cx;
}

TEST_CASE("discriminant") {
  // (x-1)^2 (x^2+1) = x^4 - 2x^3 + 2x^2 - 2x + 1
  CHECK(TrigonalCurve::trigonal(-2, 2, -2, 1).discriminant() == 0);
  CHECK(TrigonalCurve().discriminant() == 0);
  Rational d = fermat_like().discriminant();
  // root-product oracle over 1, -1, i, -i
  std::vector<std::complex<double>> r{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  std::complex<double> prod = 1;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) prod *= (r[i] - r[j]) * (r[i] - r[j]);
  CHECK(std::abs(d.get_d() - prod.real()) <= 1e-10 * std::abs(prod));
  CHECK(d == -256);

  Series D = generic_discriminant();
  CHECK(D.homogeneous_weight() == std::optional<long>(-36));
  std::vector<int> l12_cubed{0, 0, 0, 3};
  CHECK(D.coefficient(l12_cubed) == 256);  // disc(x^4 + c) = 256 c^3
}

TEST_CASE("sato weights of f") {
  auto v = make_table({{"x", kWeightX, VarRole::coefficient},
                       {"y", kWeightY, VarRole::coefficient},
                       {"l3", -3, VarRole::coefficient},
                       {"l6", -6, VarRole::coefficient},
                       {"l9", -9, VarRole::coefficient},
                       {"l12", -12, VarRole::coefficient}});
  Series f = f_polynomial(TrigonalCurve::symbolic(), v);
  CHECK(sato_weight(f).weight == std::optional<long>(-12));
  auto printed = make_table({{"x", -4, VarRole::coefficient},
                             {"y", -3, VarRole::coefficient},
                             {"l3", -3, VarRole::coefficient},
                             {"l6", -6, VarRole::coefficient},
                             {"l9", -9, VarRole::coefficient},
                             {"l12", -12, VarRole::coefficient}});
  CHECK_FALSE(sato_weight(f_polynomial(TrigonalCurve::symbolic(), printed)).weight.has_value());

  auto u = make_table({{"u1", 5, VarRole::series}, {"u2", 2, VarRole::series}, {"u3", 1, VarRole::series}});
  Series s = Series::variable(u, "u1") - Series::variable(u, "u3") * Series::variable(u, "u2").pow(2) +
             Series::variable(u, "u3").pow(5).scaled(Rational(1, 20));
  CHECK(sato_weight(s).weight == std::optional<long>(5));
}

TEST_CASE("zeta action") {
  std::array<Eisenstein, 3> u{1, 0, 0};
  auto z = zeta_act(1, u);
  CHECK(z[0] == Eisenstein::zeta());
  CHECK(zeta_act(0, u) == u);
  std::array<Eisenstein, 3> w{Eisenstein(2, 1), Eisenstein(Rational(1, 3)), Eisenstein(0, -5)};
  CHECK(zeta_act(1, zeta_act(2, w)) == w);
}

TEST_CASE("branch expansion") {
  auto [x0, y0] = branch_expansion(TrigonalCurve(), 12);
  CHECK(y0.size() == 1);
  CHECK(y0.order() == -4);

  auto [x, y] = branch_expansion(TrigonalCurve::symbolic(), 12);
  const auto& v = x.vars();
  // y = t^-4 (1 - l3/3 t^3 + ...) after the orientation flip x = -t^-3
  CHECK(x == Series::monomial(v, tex(v, -3), -1));
  CHECK(y.coefficient(tex(v, -1, {1, 0, 0, 0})) == Rational(-1, 3));
  // residual f(x(t), y(t)) through the unit precision
  Series g = Series::constant(v, 1);
  for (int j : kTrigonalLambdas) g = g * x + TrigonalCurve::symbolic().lambda_series(v, j);
  Series res = y.pow(3) - g;
  CHECK(res.is_zero());
  CHECK(res.cutoff() >= 0);
}

TEST_CASE("abel jet") {
  auto v = jet_table();
  CurveJet o = abel_jet(TrigonalCurve(), 20);
  CurveJet exact = origin_jet(v);
  CHECK(o.u1.truncated(20) == exact.u1.truncated(20));
  CHECK(o.u2.truncated(20) == exact.u2.truncated(20));
  CHECK(o.u3.truncated(20) == exact.u3.truncated(20));
  CHECK(o.x == exact.x);
  CHECK(o.y.truncated(10) == exact.y.truncated(10));

  CurveJet j = abel_jet(TrigonalCurve::symbolic(), 20);
  CHECK(j.u1.coefficient(tex(v, 5)) == Rational(1, 5));
  CHECK(j.u3.coefficient(tex(v, 1)) == 1);
  CHECK(j.u3.coefficient(tex(v, 2)) == 0);
  CHECK(j.u3.coefficient(tex(v, 3)) == 0);
  CHECK(j.u1.homogeneous_weight() == std::optional<long>(5));
  CHECK(j.u2.homogeneous_weight() == std::optional<long>(2));
  CHECK(j.u3.homogeneous_weight() == std::optional<long>(1));
  // du1 = dx/3y^2, du3 = dx/3y, so du1/du3 = 1/y and du2/du3 = x/y
  Series d3 = j.u3.derivative("t");
  CHECK((j.u1.derivative("t") - d3 * j.y.inverse()).is_zero());
  CHECK((j.u2.derivative("t") - d3 * j.x * j.y.inverse()).is_zero());
}

TEST_CASE("x and y in u3") {
  CurveJet j = abel_jet(TrigonalCurve::symbolic(), 16);
  auto [x, y] = xy_on_curve(j);
  const auto& v = x.vars();
  CHECK(x.order() == -3);
  CHECK(x.coefficient(tex(v, -3)) == -1);
  CHECK(y.coefficient(tex(v, -4)) == 1);
  Series g = Series::constant(v, 1);
  for (int k : kTrigonalLambdas) g = g * x + TrigonalCurve::symbolic().lambda_series(v, k);
  CHECK((y.pow(3) - g).is_zero());

  CurveJet o = abel_jet(TrigonalCurve(), 16);
  auto [x0, y0] = xy_on_curve(o);
  CHECK(x0.size() == 1);
  CHECK(y0.size() == 1);
}
