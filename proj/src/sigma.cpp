#include "trigonal/sigma.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "trigonal/linalg.hpp"

namespace trigonal {

namespace {

using Key = std::vector<int>;

// Exponents (a3, a6, a9, a12) with 3 a3 + 6 a6 + 9 a9 + 12 a12 = w.
std::vector<std::array<int, 4>> lambda_monomials(long w) {
  std::vector<std::array<int, 4>> out;
  for (int a12 = 0; 12 * a12 <= w; ++a12)
    for (int a9 = 0; 12 * a12 + 9 * a9 <= w; ++a9)
      for (int a6 = 0; 12 * a12 + 9 * a9 + 6 * a6 <= w; ++a6) {
        long rest = w - 12 * a12 - 9 * a9 - 6 * a6;
        if (rest % 3 == 0) out.push_back({static_cast<int>(rest / 3), a6, a9, a12});
      }
  return out;
}

// u1^a u2^b u3^c with 5a + 2b + c = weight, odd total degree and a + b + 2c = 1 mod 3.
std::vector<std::array<int, 3>> odd_equivariant_monomials(long weight) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; 5 * a <= weight; ++a)
    for (int b = 0; 5 * a + 2 * b <= weight; ++b) {
      int c = static_cast<int>(weight - 5 * a - 2 * b);
      if ((a + b + c) % 2 == 0) continue;
      if ((a + b + 2 * c) % 3 != 1) continue;
      out.push_back({a, b, c});
    }
  return out;
}

std::string monomial_name(const std::array<int, 3>& e) {
  std::string s;
  for (int i = 0; i < 3; ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += "u" + std::to_string(i + 1);
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

// d_t d_s log S = B / A, cross-multiplied.
Series log_derivative_residual(const Series& S, const Series& A, const Series& B) {
  Series St = S.derivative("t"), Ss = S.derivative("s");
  return (S * St.derivative("s") - St * Ss) * A - S * S * B;
}

struct TwoPointData {
  VarTablePtr vars;              // t, s, r and the lambdas
  std::array<Series, 3> uT, uS, uR;
  Series A, B;                   // depend on t and s only
  std::array<Series, 3> u0T, u0S, u0R;
  Series A0, B0;
};

TwoPointData two_point_data(const TrigonalCurve& sym, int jet_cutoff) {
  TwoPointData d;
  d.vars = param_table({"t", "s", "r"});
  CurveJet jet = abel_jet(sym, jet_cutoff);
  CurveJet o = origin_jet(jet.vars);
  KleinKernel K = solve_eta(sym);
  auto build = [&](const CurveJet& j, std::array<Series, 3>& uT, std::array<Series, 3>& uS,
                   std::array<Series, 3>& uR, Series& A, Series& B, const Series& F) {
    for (int i = 0; i < 3; ++i) {
      uT[i] = rename_param(j.u(i + 1), d.vars, "t");
      uS[i] = rename_param(j.u(i + 1), d.vars, "s");
      uR[i] = rename_param(j.u(i + 1), d.vars, "r");
    }
    Series x = rename_param(j.x, d.vars, "t"), y = rename_param(j.y, d.vars, "t");
    Series z = rename_param(j.x, d.vars, "s"), w = rename_param(j.y, d.vars, "s");
    A = (x - z).pow(2) * (y * w).pow(2).scaled(9);
    B = restrict_pair(F, d.vars, x, y, z, w) * x.derivative("t") * z.derivative("s");
  };
  build(jet, d.uT, d.uS, d.uR, d.A, d.B, K.F);
  Series F0 = K.F;
  for (int j : kTrigonalLambdas) F0 = F0.specialized(lambda_name(j), 0);
  build(o, d.u0T, d.u0S, d.u0R, d.A0, d.B0, F0);
  return d;
}

Series compose(const Series& f, const VarTablePtr& target, const std::array<Series, 3>& u) {
  std::vector<std::optional<Series>> img(f.vars()->size());
  for (int i = 0; i < 3; ++i) img[i] = u[i];
  return substitute(f, target, img);
}

// sum of sign_k * u(point_k)
std::array<Series, 3> combine(std::initializer_list<std::pair<const std::array<Series, 3>*, int>> pts) {
  std::array<Series, 3> out;
  for (int i = 0; i < 3; ++i) {
    Series acc(pts.begin()->first->at(i).vars());
    for (const auto& [u, sign] : pts) acc += sign > 0 ? u->at(i) : -u->at(i);
    out[i] = std::move(acc);
  }
  return out;
}

// One family of equations: either sigma(u) = 0 or the log-derivative identity at u.
struct Constraint {
  std::string name;
  bool log_derivative = false;
  std::array<Series, 3> u, u0;
  Series S0, S0t, S0s, S0ts;  // lambda-free sigma along u0 (log-derivative only)
};

// Rows contributed by one constraint at grade w: the linear images of the unknowns
// (lambda-free) and, per lambda monomial, the known part moved to the right-hand side.
struct Block {
  std::vector<Series> images;
  std::vector<std::map<Key, Rational>> known;
};

Key param_key(const Monomial& m) { return Key{m[0], m[1], m[2]}; }

std::map<Key, Rational> lambda_slice3(const Series& s, const std::array<int, 4>& alpha) {
  std::map<Key, Rational> out;
  for (const auto& [m, c] : s.terms()) {
    if (m[3] != alpha[0] || m[4] != alpha[1] || m[5] != alpha[2] || m[6] != alpha[3]) continue;
    out.emplace(param_key(m), c);
  }
  return out;
}

Block build_block(const Constraint& k, const TwoPointData& d, const Series& known, long w,
                  const std::vector<std::array<int, 3>>& mons, const std::vector<std::array<int, 4>>& alphas) {
  const VarTablePtr& TP = d.vars;
  const VarTablePtr U = sigma_table();
  Block b;
  Series S = compose(known, TP, k.u);
  Series residual = k.log_derivative ? log_derivative_residual(S, d.A, d.B) : S;
  const long need = k.log_derivative ? w - 14 : 5 + w;
  if (residual.cutoff() <= need) throw SeriesError("jet precision too low for the sigma solve");
  for (const auto& a : alphas) b.known.push_back(lambda_slice3(residual, a));
  for (const auto& mon : mons) {
    std::vector<int> e{mon[0], mon[1], mon[2], 0, 0, 0, 0};
    Series L = compose(Series::monomial(U, e, 1), TP, k.u0);
    if (!k.log_derivative) {
      b.images.push_back(std::move(L));
      continue;
    }
    Series Lt = L.derivative("t"), Ls = L.derivative("s");
    b.images.push_back((k.S0 * Lt.derivative("s") + L * k.S0ts - k.S0t * Ls - Lt * k.S0s) * d.A0 -
                       (k.S0 * L).scaled(2) * d.B0);
  }
  return b;
}

// Appends the rows of a block to (M, rhs).
void append_rows(const Block& b, std::size_t n, QMatrix& M, std::vector<QVector>& rhs) {
  std::map<Key, std::size_t> row;
  for (const auto& img : b.images)
    for (const auto& t : img.terms()) row.try_emplace(param_key(t.first), row.size());
  for (const auto& kn : b.known)
    for (const auto& [key, c] : kn) row.try_emplace(key, row.size());
  const std::size_t base = M.size();
  M.resize(base + row.size(), QVector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [m, c] : b.images[i].terms()) M[base + row.at(param_key(m))][i] = c;
  for (std::size_t a = 0; a < rhs.size(); ++a) {
    rhs[a].resize(base + row.size(), Rational(0));
    for (const auto& [key, c] : b.known[a]) rhs[a][base + row.at(key)] = -c;
  }
}

SigmaExpansion solve_symbolic(int weight_cutoff) {
  const TrigonalCurve sym = TrigonalCurve::symbolic();
  VarTablePtr U = sigma_table();
  SigmaExpansion out;
  out.weight_cutoff = weight_cutoff;
  out.curve = sym;
  Series sigma = schur_sigma(U);
  if (weight_cutoff < 8) {
    out.series = sigma.truncated(weight_cutoff + 1);
    return out;
  }

  TwoPointData d = two_point_data(sym, weight_cutoff + 2);
  std::vector<Constraint> stages(3);
  stages[0].name = "vanishing";
  stages[0].u = combine({{&d.uT, 1}, {&d.uS, 1}});
  stages[0].u0 = combine({{&d.u0T, 1}, {&d.u0S, 1}});
  stages[1].name = "two-point";
  stages[1].u = combine({{&d.uT, 1}, {&d.uS, -1}});
  stages[1].u0 = combine({{&d.u0T, 1}, {&d.u0S, -1}});
  stages[2].name = "three-point";
  stages[2].u = combine({{&d.uT, 1}, {&d.uS, -1}, {&d.uR, -1}});
  stages[2].u0 = combine({{&d.u0T, 1}, {&d.u0S, -1}, {&d.u0R, -1}});
  for (std::size_t k = 1; k < 3; ++k) {
    auto& c = stages[k];
    c.log_derivative = true;
    c.S0 = compose(sigma, d.vars, c.u0);
    c.S0t = c.S0.derivative("t");
    c.S0s = c.S0.derivative("s");
    c.S0ts = c.S0t.derivative("s");
  }

  for (long w = 3; w + 5 <= weight_cutoff; w += 3) {
    GradeReport rep;
    rep.grade = w;
    auto mons = odd_equivariant_monomials(5 + w);
    auto alphas = lambda_monomials(w);
    const std::size_t n = mons.size();
    rep.unknowns = n;
    rep.lambda_monomials = alphas.size();
    Series known = sigma.truncated(6 + w);

    QMatrix M;
    std::vector<QVector> rhs(alphas.size());
    std::size_t r = 0;
    for (std::size_t k = 0; k < stages.size() && (k == 0 || r < n); ++k) {
      append_rows(build_block(stages[k], d, known, w, mons, alphas), n, M, rhs);
      Echelon e = rref(M, n);
      r = e.pivots.size();
      rep.stage_ranks.push_back({stages[k].name, r});
      if (k == 0) {
        rep.rank_vanishing = r;
        std::vector<bool> piv(n, false);
        for (auto p : e.pivots) piv[p] = true;
        for (std::size_t i = 0; i < n; ++i)
          if (!piv[i]) rep.free_after_vanishing.push_back(monomial_name(mons[i]));
      }
    }
    rep.rank_combined = r;

    auto sols = solve(M, n, rhs);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      if (!sols[a].consistent) throw std::runtime_error("sigma system inconsistent at grade " + std::to_string(w));
      if (!sols[a].free_columns.empty())
        throw std::runtime_error("sigma system underdetermined at grade " + std::to_string(w));
      for (std::size_t i = 0; i < n; ++i) {
        if (sgn(sols[a].particular[i]) == 0) continue;
        std::vector<int> e{mons[i][0], mons[i][1], mons[i][2], alphas[a][0], alphas[a][1], alphas[a][2],
                           alphas[a][3]};
        sigma += Series::monomial(U, e, sols[a].particular[i]);
      }
    }
    out.grades.push_back(std::move(rep));
  }
  out.series = sigma.truncated(weight_cutoff + 1);
  return out;
}

}  // namespace

VarTablePtr sigma_table() {
  static const VarTablePtr table = [] {
    std::vector<Variable> v{{"u1", 5, VarRole::series}, {"u2", 2, VarRole::series}, {"u3", 1, VarRole::series}};
    for (auto& l : lambda_variables()) v.push_back(l);
    return make_table(std::move(v));
  }();
  return table;
}

VarTablePtr param_table(const std::vector<std::string>& params, bool with_lambdas) {
  std::vector<Variable> v;
  for (const auto& p : params) v.push_back({p, 1, VarRole::series});
  if (with_lambdas) {
    for (auto& l : lambda_variables()) v.push_back(l);
  }
  return make_table(std::move(v));
}

Series schur_sigma(const VarTablePtr& U) {
  Series u1 = Series::variable(U, "u1"), u2 = Series::variable(U, "u2"), u3 = Series::variable(U, "u3");
  return u1 - u3 * u2.pow(2) + u3.pow(5).scaled(Rational(1, 20));
}

SigmaExpansion sigma_expand(const TrigonalCurve& c, int weight_cutoff) {
  if (weight_cutoff < 5) throw std::invalid_argument("sigma weight cutoff must be at least 5");
  if (!c.purely_trigonal()) throw std::invalid_argument("sigma is built for purely trigonal curves");
  static std::mutex mu;
  static std::map<int, SigmaExpansion> cache;
  SigmaExpansion sym;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(weight_cutoff);
    if (it == cache.end()) it = cache.emplace(weight_cutoff, solve_symbolic(weight_cutoff)).first;
    sym = it->second;
  }
  if (c.is_symbolic()) return sym;
  SigmaExpansion out = sym;
  out.curve = c;
  for (int j : kTrigonalLambdas) out.series = out.series.specialized(lambda_name(j), c.lambda(j));
  return out;
}

Series sigma_partial(const Series& sigma, const std::vector<int>& index) {
  Series s = sigma;
  for (int i : index) {
    if (i < 1 || i > 3) throw std::invalid_argument("sigma partial index must be 1, 2 or 3");
    s = s.derivative(static_cast<std::size_t>(i - 1));
  }
  return s;
}

Series sigma_partial(const SigmaExpansion& s, const std::vector<int>& index) {
  return sigma_partial(s.series, index);
}

Quotient wp(const Series& sigma, int i, int j) {
  Series si = sigma_partial(sigma, {i}), sj = sigma_partial(sigma, {j});
  Series sij = sigma_partial(sigma, {i, j});
  return {si * sj - sigma * sij, sigma * sigma};
}

Quotient wp3(const Series& sigma, int i, int j, int k) {
  // -d_k of (s_i s_j - s s_ij) / s^2
  Quotient q = wp(sigma, i, j);
  Series sk = sigma_partial(sigma, {k});
  Series nk = q.numerator.derivative(static_cast<std::size_t>(k - 1));
  return {nk * sigma - q.numerator * sk.scaled(2), sigma.pow(3)};
}

Series rename_param(const Series& s, const VarTablePtr& target, const std::string& param) {
  std::vector<std::optional<Series>> img(s.vars()->size());
  img[0] = Series::variable(target, param);
  return substitute(s, target, img);
}

ZSeries restrict_z(const Series& f, const VarTablePtr& target, const std::vector<JetPoint>& points) {
  std::vector<std::optional<ZSeries>> img(f.vars()->size());
  for (int i = 0; i < 3; ++i) {
    ZSeries acc(target);
    for (const auto& p : points) {
      ZSeries ui = to_eisenstein(rename_param(p.jet->u(i + 1), target, p.param));
      Eisenstein mult = zeta_multipliers(p.zeta_power)[i];
      if (p.sign < 0) mult = -mult;
      acc += ui.scaled(mult);
    }
    img[i] = std::move(acc);
  }
  return substitute(to_eisenstein(f), target, img);
}

Series restrict(const Series& f, const VarTablePtr& target, const std::vector<JetPoint>& points) {
  std::vector<std::optional<Series>> img(f.vars()->size());
  for (int i = 0; i < 3; ++i) {
    Series acc(target);
    for (const auto& p : points) {
      if (p.zeta_power % 3 != 0) throw std::invalid_argument("zeta multipliers need restrict_z");
      Series ui = rename_param(p.jet->u(i + 1), target, p.param);
      acc += p.sign < 0 ? -ui : ui;
    }
    img[i] = std::move(acc);
  }
  return substitute(f, target, img);
}

nlohmann::json series_to_json(const Series& s) {
  nlohmann::json j;
  j["vars"] = nlohmann::json::array();
  for (const auto& v : s.vars()->variables()) {
    j["vars"].push_back({{"name", v.name}, {"weight", v.weight}, {"series", v.role == VarRole::series}});
  }
  j["terms"] = nlohmann::json::array();
  for (const auto& [m, c] : s.terms()) j["terms"].push_back({{"exp", s.exponents(m)}, {"coef", to_string(c)}});
  j["cutoff"] = s.exact() ? nlohmann::json(nullptr) : nlohmann::json(s.cutoff());
  return j;
}

Series series_from_json(const nlohmann::json& j) {
  std::vector<Variable> vars;
  for (const auto& v : j.at("vars")) {
    vars.push_back({v.at("name").get<std::string>(), v.at("weight").get<int>(),
                    v.at("series").get<bool>() ? VarRole::series : VarRole::coefficient});
  }
  VarTablePtr table = make_table(std::move(vars));
  std::vector<Series::Term> terms;
  for (const auto& t : j.at("terms")) {
    auto e = t.at("exp").get<std::vector<int>>();
    if (e.size() != table->size()) throw std::invalid_argument("series term has the wrong exponent count");
    terms.emplace_back(Monomial::from(e), parse_rational(t.at("coef").get<std::string>()));
  }
  Precision cut = j.at("cutoff").is_null() ? kExact : j.at("cutoff").get<Precision>();
  return Series::from_terms(table, std::move(terms), cut);
}

}  // namespace trigonal
