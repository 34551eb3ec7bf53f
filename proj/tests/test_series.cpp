#include "doctest.h"

#include "trigonal/series.hpp"

using namespace trigonal;

namespace {

VarTablePtr t_table() { return make_table({{"t", 1, VarRole::series}}); }
VarTablePtr tl_table() {
  return make_table({{"t", 1, VarRole::series}, {"l3", -3, VarRole::coefficient}});
}

Series t_poly(const VarTablePtr& v, std::vector<std::pair<int, Rational>> cs, Precision cut = kExact) {
  std::vector<Series::Term> terms;
  for (auto& [e, c] : cs) {
    int ex[1] = {e};
    terms.emplace_back(Monomial::from(ex), c);
  }
  return Series::from_terms(v, std::move(terms), cut);
}

// Coefficients of t^0..t^(n-1) for a single-variable series.
std::vector<Rational> coeffs(const Series& s, int lo, int n) {
  std::vector<Rational> out;
  for (int e = lo; e < lo + n; ++e) {
    int ex[1] = {e};
    out.push_back(s.coefficient(ex));
  }
  return out;
}

}  // namespace

TEST_CASE("products respect the weakest cutoff") {
  auto v = t_table();
  Series t = Series::variable(v, "t");
  CHECK((t * t).to_string() == "t^2");
  Series a = t_poly(v, {{0, 1}, {1, 1}}, 5);
  Series b = t_poly(v, {{0, 1}, {1, -1}}, 5);
  Series p = a * b;
  CHECK(p.cutoff() == 5);
  CHECK(p == t_poly(v, {{0, 1}, {2, -1}}, 5));
}

TEST_CASE("cube of a leading monomial times a unit") {
  auto v = tl_table();
  int m4[2] = {-4, 0};
  int l3t3[2] = {3, 1};
  Series a = Series::monomial(v, m4, 1) * (Series::constant(v, 1) + Series::monomial(v, l3t3, 1));
  Series c = a.pow(3);
  int want[2] = {-9, 1};
  CHECK(c.coefficient(want) == 3);
  CHECK(c.homogeneous_weight() == std::optional<long>(-12));
}

TEST_CASE("inverse") {
  auto v = t_table();
  Series geo = t_poly(v, {{0, 1}, {1, -1}}, 6).inverse();
  CHECK(coeffs(geo, 0, 6) == std::vector<Rational>(6, 1));
  CHECK(geo.cutoff() == 6);

  Series t2 = t_poly(v, {{2, 1}});
  CHECK(t2.inverse() == t_poly(v, {{-2, 1}}));

  auto w = tl_table();
  int m[2] = {-4, 0};
  int h[2] = {-1, 1};
  Series a = Series::from_terms(w, {{Monomial::from(m), 3}, {Monomial::from(h), 1}}, 4);
  Series inv = a.inverse();
  int four[2] = {4, 0};
  CHECK(inv.coefficient(four) == Rational(1, 3));
  CHECK((a * inv - Series::constant(w, 1)).is_zero());

  CHECK_THROWS_AS(Series(v).inverse(), SeriesError);
}

TEST_CASE("roots") {
  auto v = t_table();
  CHECK(t_poly(v, {{-12, 1}}).root(3) == t_poly(v, {{-4, 1}}));
  CHECK(t_poly(v, {{0, 1}, {1, 2}, {2, 1}}, 8).root(2) == t_poly(v, {{0, 1}, {1, 1}}, 8));

  auto w = tl_table();
  int one[2] = {0, 0};
  int l3t3[2] = {3, 1};
  Series s = Series::from_terms(w, {{Monomial::from(one), 1}, {Monomial::from(l3t3), 1}}, 6);
  Series r = s.root(3);
  CHECK(r.coefficient(l3t3) == Rational(1, 3));
  CHECK(r.size() == 2);
  CHECK(r.pow(3) == s);

  CHECK_THROWS_AS(t_poly(v, {{-4, 1}}).root(3), SeriesError);
}

TEST_CASE("reversion") {
  auto v = t_table();
  CHECK(t_poly(v, {{1, 1}}, 8).reversion("t") == t_poly(v, {{1, 1}}, 8));
  CHECK(t_poly(v, {{1, -1}}, 8).reversion("t") == t_poly(v, {{1, -1}}, 8));
  Series r = t_poly(v, {{1, 1}, {2, 1}}, 8).reversion("t");
  // Catalan numbers with alternating signs.
  CHECK(coeffs(r, 1, 7) == std::vector<Rational>{1, -1, 2, -5, 14, -42, 132});
  CHECK(r.reversion("t") == t_poly(v, {{1, 1}, {2, 1}}, 8));
  CHECK_THROWS_AS(t_poly(v, {{2, 1}}, 8).reversion("t"), SeriesError);
}

TEST_CASE("calculus") {
  auto v = t_table();
  CHECK(t_poly(v, {{4, 1}}).integral("t") == t_poly(v, {{5, Rational(1, 5)}}));
  CHECK(t_poly(v, {{2, Rational(1, 2)}}).derivative("t") == t_poly(v, {{1, 1}}));
  CHECK_THROWS_AS(t_poly(v, {{-1, 1}}).integral("t"), SeriesError);
  Series a = t_poly(v, {{-3, 2}, {0, 7}, {4, -1}}, 9);
  CHECK(a.integral("t").derivative("t") == a);
}

TEST_CASE("ring axioms on small series") {
  auto v = tl_table();
  auto mk = [&](int seed) {
    std::vector<Series::Term> terms;
    for (int e = 0; e < 5; ++e) {
      int ex[2] = {e, (e + seed) % 2};
      terms.emplace_back(Monomial::from(ex), Rational(seed * 7 + e * 3 - 5, e + 1));
    }
    return Series::from_terms(v, terms, 7);
  };
  Series a = mk(1), b = mk(2), c = mk(3);
  CHECK((a * b) * c == a * (b * c));
  CHECK(a * (b + c) == a * b + a * c);
}

TEST_CASE("substitution and Eisenstein coefficients") {
  auto v = t_table();
  Series f = t_poly(v, {{0, 1}, {1, 1}, {2, 1}}, 6);
  std::vector<std::optional<Series>> img(1);
  img[0] = t_poly(v, {{1, 1}, {2, 1}}, 6);
  Series g = substitute(f, v, img);
  // 1 + (t+t^2) + (t+t^2)^2
  CHECK(g == t_poly(v, {{0, 1}, {1, 1}, {2, 2}, {3, 2}, {4, 1}}, 6));

  ZSeries z = to_eisenstein(t_poly(v, {{1, 1}})).scaled(Eisenstein::zeta());
  ZSeries cube = z.pow(3);
  CHECK(to_rational(cube) == t_poly(v, {{3, 1}}));
  CHECK_THROWS_AS(to_rational(z), SeriesError);
}

TEST_CASE("determinant") {
  auto v = t_table();
  Series t = Series::variable(v, "t");
  Series one = Series::constant(v, 1);
  std::vector<std::vector<Series>> m{{one, t}, {t, one}};
  CHECK(determinant(m) == t_poly(v, {{0, 1}, {2, -1}}));
}
