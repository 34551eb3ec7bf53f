#include "trigonal/forms.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "trigonal/linalg.hpp"

namespace trigonal {

namespace {

constexpr std::size_t kX = 0, kY = 1, kZ = 2, kW = 3;

Series var(const VarTablePtr& v, const char* name) { return Series::variable(v, name); }

Series g_of(const TrigonalCurve& c, const VarTablePtr& v, const char* x) {
  Series X = var(v, x);
  Series g = Series::constant(v, 1);
  for (int j : kTrigonalLambdas) g = g * X + c.lambda_series(v, j);
  return g;
}

Series g_prime_of(const TrigonalCurve& c, const VarTablePtr& v, const char* x) {
  return g_of(c, v, x).derivative(x);
}

// p(x, y) of omega_j: 1, x, y
Series omega_numerator(const VarTablePtr& v, int j, const char* x, const char* y) {
  if (j == 0) return Series::constant(v, 1);
  return var(v, j == 1 ? x : y);
}

struct Ansatz {
  std::vector<int> form;  // which h_j
  std::vector<Series> monomial;
};

// Monomials z^a w^b lambda^alpha (b <= 2) of a given Sato weight.
std::vector<Series> weighted_monomials(const VarTablePtr& v, long weight) {
  std::vector<Series> out;
  for (int b = 0; b <= 2; ++b) {
    for (int a3 = 0; 3 * a3 <= -weight; ++a3)
      for (int a6 = 0; 3 * a3 + 6 * a6 <= -weight; ++a6)
        for (int a9 = 0; 3 * a3 + 6 * a6 + 9 * a9 <= -weight; ++a9)
          for (int a12 = 0; 3 * a3 + 6 * a6 + 9 * a9 + 12 * a12 <= -weight; ++a12) {
            long rest = -weight - 4L * b - (3L * a3 + 6L * a6 + 9L * a9 + 12L * a12);
            if (rest < 0 || rest % 3 != 0) continue;
            std::vector<int> e{0, 0, static_cast<int>(rest / 3), b, a3, a6, a9, a12};
            out.push_back(Series::monomial(v, e, 1));
          }
  }
  std::sort(out.begin(), out.end(), [](const Series& p, const Series& q) {
    auto ep = p.exponents(p.terms()[0].first), eq = q.exponents(q.terms()[0].first);
    return ep < eq;
  });
  return out;
}

KleinKernel solve_symbolic() {
  const TrigonalCurve sym = TrigonalCurve::symbolic();
  VarTablePtr v = pair_table();
  Series x = var(v, "x"), y = var(v, "y"), z = var(v, "z"), w = var(v, "w");
  Series dxz = x - z;

  Series F0 = (y + w.scaled(2)) * dxz * g_prime_of(sym, v, "z") +
              w.pow(2).scaled(3) * (y.pow(2) + y * w + w.pow(2));
  Series E0 = reduce_mod_curve(F0 - swap_points(F0), sym);

  // h1, h2, h3 have weights -10, -7, -6 so that F is homogeneous of weight -16.
  const long weights[3] = {-10, -7, -6};
  Ansatz ans;
  for (int j = 0; j < 3; ++j) {
    for (auto& m : weighted_monomials(v, weights[j])) {
      ans.form.push_back(j);
      ans.monomial.push_back(std::move(m));
    }
  }
  const std::size_t n = ans.monomial.size();
  std::vector<Series> E(n);
  for (std::size_t i = 0; i < n; ++i) {
    Series T = dxz.pow(2) * omega_numerator(v, ans.form[i], "x", "y") * ans.monomial[i];
    E[i] = reduce_mod_curve(T - swap_points(T), sym);
  }

  std::map<std::vector<int>, std::size_t> row_of;
  auto row = [&](const Monomial& m) {
    auto key = E0.exponents(m);
    return row_of.try_emplace(key, row_of.size()).first->second;
  };
  for (const auto& t : E0.terms()) row(t.first);
  for (const auto& e : E)
    for (const auto& t : e.terms()) row(t.first);
  QMatrix A(row_of.size(), QVector(n, Rational(0)));
  QVector b(row_of.size(), Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [m, c] : E[i].terms()) A[row(m)][i] = c;
  for (const auto& [m, c] : E0.terms()) b[row(m)] = -c;

  SolveResult s = solve(A, n, {b})[0];
  if (!s.consistent) throw std::runtime_error("eta ansatz is inconsistent; enlarge the ansatz");
  std::vector<QVector> kernel = nullspace(A, n);

  // Minimal support: zero out `k = dim kernel` coordinates at a time.
  auto support = [](const QVector& c) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (sgn(c[i]) != 0) s.push_back(i);
    return s;
  };
  QVector best = s.particular;
  auto best_support = support(best);
  const std::size_t k = kernel.size();
  if (k > 0) {
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      QMatrix M(k, QVector(k));
      QVector rhs(k);
      for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t q = 0; q < k; ++q) M[r][q] = kernel[q][pick[r]];
        rhs[r] = -s.particular[pick[r]];
      }
      SolveResult cs = solve(M, k, {rhs})[0];
      if (cs.consistent && cs.free_columns.empty()) {
        QVector cand = s.particular;
        for (std::size_t q = 0; q < k; ++q)
          for (std::size_t i = 0; i < n; ++i) cand[i] += cs.particular[q] * kernel[q][i];
        auto sup = support(cand);
        if (sup.size() < best_support.size() || (sup.size() == best_support.size() && sup < best_support)) {
          best = cand;
          best_support = sup;
        }
      }
      // next k-subset
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }

  KleinKernel K;
  K.unknowns = n;
  K.freedom = k;
  for (auto& h : K.h) h = Series(v);
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(best[i]) != 0) K.h[ans.form[i]] += ans.monomial[i].scaled(best[i]);
  }
  Series corr(v);
  for (int j = 0; j < 3; ++j) {
    K.h_xy[j] = swap_points(K.h[j]);
    corr += omega_numerator(v, j, "x", "y") * K.h[j];
  }
  K.F = F0 + dxz.pow(2) * corr;
  if (!reduce_mod_curve(K.F - swap_points(K.F), sym).is_zero()) throw std::logic_error("kernel is not symmetric");
  K.weight = K.F.homogeneous_weight().value_or(0);
  return K;
}

}  // namespace

VarTablePtr pair_table() {
  static const VarTablePtr table = [] {
    std::vector<Variable> v{{"x", kWeightX, VarRole::coefficient},
                            {"y", kWeightY, VarRole::coefficient},
                            {"z", kWeightX, VarRole::coefficient},
                            {"w", kWeightY, VarRole::coefficient}};
    for (auto& l : lambda_variables()) v.push_back(l);
    return make_table(std::move(v));
  }();
  return table;
}

std::array<DifferentialForm, 3> omega_basis(const TrigonalCurve& c) {
  if (!c.purely_trigonal()) throw std::invalid_argument("omega basis is built for purely trigonal curves");
  VarTablePtr v = pair_table();
  return {DifferentialForm{omega_numerator(v, 0, "x", "y"), "omega1"},
          DifferentialForm{omega_numerator(v, 1, "x", "y"), "omega2"},
          DifferentialForm{omega_numerator(v, 2, "x", "y"), "omega3"}};
}

RationalExpression build_Omega(const TrigonalCurve& c) {
  if (!c.purely_trigonal()) throw std::invalid_argument("use build_Omega_general for the general model");
  VarTablePtr v = pair_table();
  Series x = var(v, "x"), y = var(v, "y"), z = var(v, "z"), w = var(v, "w");
  return {y.pow(2) + y * w + w.pow(2), (x - z) * y.pow(2).scaled(3)};
}

RationalExpression build_Omega_general(const TrigonalCurve& c) {
  VarTablePtr v = pair_table();
  Series x = var(v, "x"), y = var(v, "y"), z = var(v, "z"), w = var(v, "w");
  auto lam = [&](int j) {
    if (j % 3 == 0) return c.lambda_series(v, j);
    return c.is_symbolic() ? Series(v) : Series::constant(v, c.lambda(j));
  };
  auto f_at = [&](const Series& X, const Series& Y) {
    Series g = Series::constant(v, 1);
    for (int j : kTrigonalLambdas) g = g * X + lam(j);
    return Y.pow(3) - (lam(1) * X + lam(4)) * Y.pow(2) - (lam(2) * X.pow(2) + lam(5) * X + lam(8)) * Y - g;
  };
  Series fzw = f_at(z, w);
  Series num(v);
  for (int k = 1; k <= 3; ++k) {
    std::vector<int> shift(v->size(), 0);
    shift[kW] = -(4 - k);
    Series q = fzw.shifted(shift);
    std::vector<Series::Term> kept;
    for (const auto& t : q.terms())
      if (t.first[kW] >= 0) kept.push_back(t);
    num += y.pow(3 - k) * Series::from_terms(v, std::move(kept));
  }
  Series fy = f_at(x, y).derivative("y");
  return {num, (x - z) * fy};
}

Series reduce_mod_curve(const Series& p, const TrigonalCurve& c) {
  const VarTablePtr& v = p.vars();
  const std::array<Series, 2> g{g_of(c, v, "x"), g_of(c, v, "z")};
  std::array<std::vector<Series>, 2> gpow;
  auto gp = [&](int which, int q) -> const Series& {
    auto& cache = gpow[which];
    if (cache.empty()) cache.push_back(Series::constant(v, 1));
    while (static_cast<int>(cache.size()) <= q) cache.push_back(cache.back() * g[which]);
    return cache[q];
  };
  std::vector<Series::Term> plain;
  Series acc(v);
  for (const auto& [m, coef] : p.terms()) {
    int ey = m[kY], ew = m[kW];
    if (ey < 3 && ew < 3) {
      plain.emplace_back(m, coef);
      continue;
    }
    if (ey < 0 || ew < 0) throw std::invalid_argument("reduce_mod_curve expects a polynomial in y and w");
    Monomial base = m.with(kY, ey % 3).with(kW, ew % 3);
    Series mono = Series::from_terms(v, {{base, coef}});
    acc += mono * gp(0, ey / 3) * gp(1, ew / 3);
  }
  acc += Series::from_terms(v, std::move(plain), p.cutoff());
  return acc;
}

Series swap_points(const Series& p) {
  std::vector<Series::Term> terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p.terms()) {
    int ex = m[kX], ey = m[kY];
    terms.emplace_back(m.with(kX, m[kZ]).with(kY, m[kW]).with(kZ, ex).with(kW, ey), c);
  }
  return Series::from_terms(p.vars(), std::move(terms), p.cutoff());
}

KleinKernel solve_eta(const TrigonalCurve& c) {
  if (!c.purely_trigonal()) throw std::invalid_argument("eta is solved for purely trigonal curves");
  static std::once_flag once;
  static KleinKernel symbolic;
  std::call_once(once, [] { symbolic = solve_symbolic(); });
  if (c.is_symbolic()) return symbolic;
  KleinKernel K = symbolic;
  auto specialize = [&](Series s) {
    for (int j : kTrigonalLambdas) s = s.specialized(lambda_name(j), c.lambda(j));
    return s;
  };
  K.F = specialize(K.F);
  for (int j = 0; j < 3; ++j) {
    K.h[j] = specialize(K.h[j]);
    K.h_xy[j] = specialize(K.h_xy[j]);
  }
  return K;
}

std::complex<double> evaluate_pair(const Series& p, const TrigonalCurve& c, std::complex<double> x,
                                   std::complex<double> y, std::complex<double> z, std::complex<double> w) {
  std::vector<std::complex<double>> vals{x, y, z, w};
  for (int j : kTrigonalLambdas) vals.emplace_back(c.lambda(j).get_d());
  return p.evaluate(vals);
}

Series restrict_pair(const Series& p, const VarTablePtr& target, const Series& x, const Series& y,
                     const Series& z, const Series& w) {
  std::vector<std::optional<Series>> img(p.vars()->size());
  img[kX] = x;
  img[kY] = y;
  img[kZ] = z;
  img[kW] = w;
  return substitute(p, target, img);
}

}  // namespace trigonal
