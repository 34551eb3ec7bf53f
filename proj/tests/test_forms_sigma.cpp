#include "doctest.h"

#include "trigonal/forms.hpp"
#include "trigonal/sigma.hpp"

using namespace trigonal;

namespace {

std::vector<int> ex(const VarTablePtr& v, std::initializer_list<std::pair<const char*, int>> e) {
  std::vector<int> out(v->size(), 0);
  for (auto& [n, k] : e) out[v->index_of(n)] = k;
  return out;
}

bool is_odd_and_equivariant(const Series& s) {
  for (const auto& [m, c] : s.terms()) {
    int a = m[0], b = m[1], cc = m[2];
    if ((a + b + cc) % 2 == 0) return false;
    if ((a + b + 2 * cc) % 3 != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("holomorphic forms along the branch") {
  CurveJet j = abel_jet(TrigonalCurve::symbolic(), 14);
  auto forms = omega_basis(TrigonalCurve::symbolic());
  CHECK(forms[2].numerator == Series::variable(pair_table(), "y"));
  Series dx = j.x.derivative("t");
  Series unit = dx * (j.y * j.y).scaled(3).inverse();
  const VarTablePtr& v = j.vars;
  for (int i = 0; i < 3; ++i) {
    Series p = restrict_pair(forms[i].numerator, v, j.x, j.y, j.x, j.y);
    Series form = p * unit;
    CHECK(form.order() >= 0);
    CHECK(form.coefficient(ex(v, {{"t", -1}})) == 0);
  }
  Series w1 = unit;
  CHECK(w1.order() == 4);
  CHECK(w1.coefficient(ex(v, {{"t", 4}})) == 1);
}

TEST_CASE("Omega kernel and its general form") {
  auto om = build_Omega(TrigonalCurve());
  const VarTablePtr& v = pair_table();
  Series y = Series::variable(v, "y");
  // numerator on the diagonal w = y
  std::vector<std::optional<Series>> img(v->size());
  img[v->index_of("w")] = y;
  CHECK(substitute(om.numerator, v, img) == y.pow(2).scaled(3));

  TrigonalCurve general = TrigonalCurve::trigonal(2, -1, 3, 5).with_lambda(1, 7).with_lambda(5, -2);
  auto og = build_Omega_general(general);
  CHECK_FALSE(og.numerator == om.numerator);
  TrigonalCurve special = TrigonalCurve::trigonal(2, -1, 3, 5);
  CHECK(build_Omega_general(special).numerator == build_Omega(special).numerator);
  CHECK(build_Omega_general(special).denominator == build_Omega(special).denominator);
  CHECK(build_Omega_general(TrigonalCurve::symbolic()).numerator == build_Omega(TrigonalCurve::symbolic()).numerator);
}

TEST_CASE("fundamental 2-form numerator") {
  TrigonalCurve sym = TrigonalCurve::symbolic();
  KleinKernel K = solve_eta(sym);
  const VarTablePtr& v = pair_table();
  CHECK(K.freedom == 3);
  CHECK(reduce_mod_curve(K.F - swap_points(K.F), sym).is_zero());
  // Weight -16 under x:-3, y:-4 (see README for the relation to the printed value).
  CHECK(K.F.homogeneous_weight() == std::optional<long>(-16));
  for (const auto& h : K.h) CHECK(h.homogeneous_weight().has_value());
  CHECK(K.h[0].homogeneous_weight() == std::optional<long>(-10));
  CHECK(K.h[1] == Series::monomial(v, ex(v, {{"z", 1}, {"w", 1}}), 2));
  CHECK(K.h[2] == Series::monomial(v, ex(v, {{"z", 2}}), 1));

  // Diagonal: F(P, P) = 9 y^4, so (x - z)^2 R -> 1.
  std::vector<std::optional<Series>> img(v->size());
  img[v->index_of("z")] = Series::variable(v, "x");
  img[v->index_of("w")] = Series::variable(v, "y");
  Series diag = reduce_mod_curve(substitute(K.F, v, img), sym);
  CHECK(diag == reduce_mod_curve(Series::monomial(v, ex(v, {{"y", 4}}), 9), sym));

  // Numeric curves specialise the symbolic kernel.
  KleinKernel Kn = solve_eta(TrigonalCurve::trigonal(0, 0, 0, -1));
  CHECK(Kn.h[0] == Series::monomial(v, ex(v, {{"z", 2}, {"w", 1}}), 5));
}

TEST_CASE("two-point log-derivative identity at lambda = 0") {
  VarTablePtr tp = param_table({"t", "s"});
  CurveJet o = origin_jet(jet_table());
  KleinKernel K = solve_eta(TrigonalCurve());
  Series x = rename_param(o.x, tp, "t"), y = rename_param(o.y, tp, "t");
  Series z = rename_param(o.x, tp, "s"), w = rename_param(o.y, tp, "s");
  Series S = restrict(schur_sigma(sigma_table()), tp, {{&o, "t", 0, 1}, {&o, "s", 0, -1}});
  // sigma(u(t) - u(s)) = s^2 t^2 (t - s)
  Series expect = Series::monomial(tp, ex(tp, {{"t", 3}, {"s", 2}}), 1) -
                  Series::monomial(tp, ex(tp, {{"t", 2}, {"s", 3}}), 1);
  CHECK(S == expect);
  Series St = S.derivative("t"), Ss = S.derivative("s");
  Series lhs = (S * St.derivative("s") - St * Ss) * (x - z).pow(2) * (y * w).pow(2).scaled(9);
  Series rhs = S * S * restrict_pair(K.F, tp, x, y, z, w) * x.derivative("t") * z.derivative("s");
  CHECK((lhs - rhs).is_zero());
  CHECK(lhs.exact());
}

TEST_CASE("sigma leading part and filters") {
  SigmaExpansion s5 = sigma_expand(TrigonalCurve::symbolic(), 5);
  CHECK(s5.series.truncated(kExact) == schur_sigma(sigma_table()).truncated(6));
  SigmaExpansion s0 = sigma_expand(TrigonalCurve(), 20);
  CHECK(s0.series == schur_sigma(sigma_table()).truncated(21));

  SigmaExpansion s = sigma_expand(TrigonalCurve::symbolic(), 20);
  CHECK(s.series.homogeneous_weight() == std::optional<long>(5));
  CHECK(is_odd_and_equivariant(s.series));
  for (const auto& g : s.grades) CHECK(g.rank_combined == g.unknowns);
  // independent sympy computation of the grade-3 and grade-6 parts
  const VarTablePtr& U = sigma_table();
  CHECK(s.series.coefficient(ex(U, {{"u2", 1}, {"u3", 6}, {"l3", 1}})) == Rational(1, 40));
  CHECK(s.series.coefficient(ex(U, {{"u2", 3}, {"u3", 2}, {"l3", 1}})) == Rational(-1, 2));
  CHECK(s.series.coefficient(ex(U, {{"u3", 11}, {"l6", 1}})) == Rational(1, 92400));
  CHECK(s.series.coefficient(ex(U, {{"u3", 11}, {"l3", 2}})) == Rational(-1, 246400));
  CHECK(s.series.coefficient(ex(U, {{"u1", 1}, {"u2", 2}, {"u3", 2}, {"l6", 1}})) == Rational(-1, 2));
  CHECK(s.series.coefficient(ex(U, {{"u2", 4}, {"u3", 3}, {"l3", 2}})) == Rational(-1, 8));

  // A lower cutoff gives the truncation of the higher one.
  SigmaExpansion s14 = sigma_expand(TrigonalCurve::symbolic(), 14);
  CHECK(s.series.truncated(15) == s14.series);
}

TEST_CASE("sigma partials and wp") {
  const VarTablePtr& U = sigma_table();
  Series schur = schur_sigma(U);
  Series u2 = Series::variable(U, "u2"), u3 = Series::variable(U, "u3");
  CHECK(sigma_partial(schur, {3}) == -u2.pow(2) + u3.pow(4).scaled(Rational(1, 4)));
  CHECK(sigma_partial(schur, {3, 3}) == u3.pow(3));
  SigmaExpansion s = sigma_expand(TrigonalCurve::symbolic(), 20);
  Series s1 = sigma_partial(s, {1});
  CHECK(s1.coefficient(std::vector<int>(U->size(), 0)) == 1);
  Quotient a = wp(s.series, 1, 3), b = wp(s.series, 3, 1);
  CHECK(a.numerator == b.numerator);
  // d_k wp_ij = wp_ijk as quotients: (N_k D - N D_k) / D^2 with D = sigma^2
  Quotient q = wp(s.series, 2, 3), q3 = wp3(s.series, 2, 3, 1);
  Series lhs = (q.numerator.derivative(std::size_t{0}) * q.denominator -
                q.numerator * q.denominator.derivative(std::size_t{0})) * q3.denominator;
  Series rhs = q3.numerator * q.denominator.pow(2);
  CHECK((lhs - rhs).is_zero());
}

TEST_CASE("sigma on Abel images") {
  SigmaExpansion s = sigma_expand(TrigonalCurve::symbolic(), 20);
  CurveJet j = abel_jet(TrigonalCurve::symbolic(), 22);
  VarTablePtr t1 = param_table({"t"});
  Series one = restrict(s.series, t1, {{&j, "t"}});
  CHECK(one.is_zero());
  CHECK(one.cutoff() >= 20);
  Series s3 = restrict(sigma_partial(s, {3}), t1, {{&j, "t"}});
  CHECK(s3.is_zero());
  Series s33 = restrict(sigma_partial(s, {3, 3}), t1, {{&j, "t"}});
  CHECK(s33.order() == 3);
  CHECK(s33.coefficient(ex(t1, {{"t", 3}})) == 1);

  VarTablePtr t2 = param_table({"t", "s"});
  Series two = restrict(s.series, t2, {{&j, "t"}, {&j, "s"}});
  CHECK(two.is_zero());
  CHECK(two.cutoff() >= 20);

  VarTablePtr t3 = param_table({"t", "s", "r"});
  Series three = restrict(s.series.truncated(12), t3, {{&j, "t"}, {&j, "s"}, {&j, "r"}});
  CHECK_FALSE(three.is_zero());

  // sigma([zeta] u) = zeta sigma(u) on a generic (three-point) argument
  ZSeries rot = restrict_z(s.series.truncated(12), t3, {{&j, "t", 1}, {&j, "s", 1}, {&j, "r", 1}});
  CHECK((rot - to_eisenstein(three).scaled(Eisenstein::zeta())).is_zero());
}

TEST_CASE("zero of sigma_3 at u + [zeta] v") {
  SigmaExpansion s = sigma_expand(TrigonalCurve::symbolic(), 14);
  CurveJet j = abel_jet(TrigonalCurve::symbolic(), 16);
  VarTablePtr tp = param_table({"t", "s"});
  ZSeries lhs = restrict_z(sigma_partial(s, {3}), tp, {{&j, "t"}, {&j, "s", 1}});
  ZSeries s33 = to_eisenstein(restrict(sigma_partial(s, {3, 3}), tp, {{&j, "t"}}));
  // split by the power of s
  std::vector<ZSeries::Term> s0, s1;
  for (const auto& [m, c] : lhs.terms()) {
    if (m[1] == 0) s0.emplace_back(m, c);
    if (m[1] == 1) s1.emplace_back(m.with(1, 0), c);
  }
  CHECK(s0.empty());
  ZSeries first = ZSeries::from_terms(tp, s1, lhs.cutoff() - 1);
  // v3 = zeta^2 s for v = [zeta] u(s)
  ZSeries expect = s33.scaled(Eisenstein::zeta_pow(2)).truncated(first.cutoff());
  CHECK((first - expect).is_zero());
}

TEST_CASE("series json round trip") {
  SigmaExpansion s = sigma_expand(TrigonalCurve::symbolic(), 11);
  CHECK(series_from_json(series_to_json(s.series)) == s.series);
}
