#include "trigonal/identities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trigonal/forms.hpp"
#include "trigonal/jet.hpp"
#include "trigonal/sigma.hpp"
#include "identities_numeric.hpp"

namespace trigonal {

std::string to_string(CheckMode m) {
  switch (m) {
    case CheckMode::exact:
      return "exact";
    case CheckMode::series:
      return "series";
    default:
      return "numeric";
  }
}

CheckMode parse_mode(const std::string& s) {
  if (s == "exact") return CheckMode::exact;
  if (s == "series") return CheckMode::series;
  if (s == "numeric") return CheckMode::numeric;
  throw std::invalid_argument("unknown mode: " + s);
}

nlohmann::json IdentityReport::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["mode"] = to_string(mode);
  j["parameters"] = parameters;
  nlohmann::json res;
  res["exact_zero"] = exact_zero;
  res["verified_order"] = verified_order ? nlohmann::json(*verified_order) : nlohmann::json(nullptr);
  res["max"] = residual ? nlohmann::json(*residual) : nlohmann::json(nullptr);
  j["residual"] = res;
  nlohmann::json k;
  k["value"] = kappa;
  k["dispersion"] = kappa_dispersion ? nlohmann::json(*kappa_dispersion) : nlohmann::json(nullptr);
  k["expected"] = kappa_expected ? nlohmann::json(*kappa_expected) : nlohmann::json(nullptr);
  k["matches_expected"] = kappa_matches;
  j["kappa"] = k;
  j["details"] = details;
  j["verdict"] = pass ? "pass" : "fail";
  return j;
}

std::vector<LadderEntry> monomial_ladder(int k) {
  if (k < 1) throw std::invalid_argument("ladder length must be positive");
  std::vector<LadderEntry> out;
  // Pole orders 3a + 4b with b < 3 are all distinct, so sorting is unambiguous.
  for (int a = 0; static_cast<int>(out.size()) < 3 * k + 3; ++a) {
    for (int b = 0; b < 3; ++b) out.push_back({a, b, 3 * a + 4 * b, ""});
  }
  std::sort(out.begin(), out.end(), [](const LadderEntry& p, const LadderEntry& q) { return p.pole_order < q.pole_order; });
  out.resize(static_cast<std::size_t>(k));
  for (auto& e : out) {
    std::string n;
    if (e.b > 0) n += e.b == 1 ? "y" : "y^" + std::to_string(e.b);
    if (e.a > 0) n += e.a == 1 ? "x" : "x^" + std::to_string(e.a);
    e.name = n.empty() ? "1" : n;
  }
  return out;
}

Rational kiepert_factor(int n) {
  Integer p = 1, f = 1;
  for (int k = 1; k < n; ++k) {
    f *= k;
    p *= f;
  }
  return Rational(1) / Rational(p);
}

namespace {

struct Setting {
  CheckMode mode = CheckMode::exact;
  Series sigma, s3, s33;
  CurveJet jet;
  bool lambdas = false;
  TrigonalCurve curve;

  VarTablePtr table(const std::vector<std::string>& p) const { return param_table(p, lambdas); }
  Series at(const Series& js, const VarTablePtr& T, const std::string& p) const { return rename_param(js, T, p); }
  Series x(const VarTablePtr& T, const std::string& p) const { return at(jet.x, T, p); }
  Series y(const VarTablePtr& T, const std::string& p) const { return at(jet.y, T, p); }
  JetPoint point(const std::string& p, int zeta = 0, int sign = 1) const { return {&jet, p, zeta, sign}; }
};

Setting make_setting(const TrigonalCurve& c, CheckMode mode, const HarnessOptions& o) {
  Setting s;
  s.mode = mode;
  s.curve = c;
  if (mode == CheckMode::exact) {
    if (!c.is_degenerate_origin()) throw std::invalid_argument("exact mode is defined on y^3 = x^4 only");
    s.sigma = schur_sigma(sigma_table());
    s.jet = origin_jet(jet_table("t"));
  } else if (mode == CheckMode::series) {
    if (!c.purely_trigonal()) throw std::invalid_argument("series mode needs a purely trigonal curve");
    s.sigma = sigma_expand(c, o.sigma_cutoff).series;
    s.jet = abel_jet(c, o.sigma_cutoff + 2);
    s.lambdas = true;
  } else {
    throw std::invalid_argument("numeric mode has no series setting");
  }
  s.s3 = sigma_partial(s.sigma, {3});
  s.s33 = sigma_partial(s.sigma, {3, 3});
  return s;
}

nlohmann::json base_parameters(const Setting& s, const HarnessOptions& o) {
  nlohmann::json p;
  p["curve"] = s.curve.to_json();
  if (s.mode == CheckMode::series) p["sigma_cutoff"] = o.sigma_cutoff;
  return p;
}

/// Re-maps series variables by name (e.g. s -> t) into `target`.
Series collapse(const Series& f, const VarTablePtr& target, const std::vector<std::pair<std::string, std::string>>& map) {
  std::vector<std::optional<Series>> img(f.vars()->size());
  for (const auto& [from, to] : map) {
    if (auto i = f.vars()->find(from)) img[*i] = Series::variable(target, to);
  }
  return substitute(f, target, img);
}

std::string leading_text(const Series& f) {
  if (f.is_zero()) return "0";
  std::string s = f.graded_part(f.order()).to_string();
  if (s.size() > 400) s = s.substr(0, 400) + " ...";
  return s;
}

double max_abs(const Series& f) {
  double m = 0;
  for (const auto& [mon, c] : f.terms()) m = std::max(m, std::abs(to_double(c)));
  return m;
}

struct Fit {
  Rational kappa;
  Series residual;
  bool reference_found = false;
};

/// kappa from the lowest lambda-free term of R, then L - kappa R.
Fit fit_constant(const Series& L, const Series& R) {
  const auto& vars = *R.vars();
  Fit f;
  long best = 0;
  const Series::Term* ref = nullptr;
  for (const auto& t : R.terms()) {
    bool plain = true;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].role == VarRole::coefficient && t.first[i] != 0) plain = false;
    }
    if (!plain) continue;
    long w = R.series_weight(t.first);
    if (!ref || w < best) {
      ref = &t;
      best = w;
    }
  }
  if (ref) {
    f.reference_found = true;
    auto e = R.exponents(ref->first);
    f.kappa = L.coefficient(e) / ref->second;
  }
  f.residual = L - R.scaled(f.kappa);
  return f;
}

void record(IdentityReport& r, const Series& L, const Series& R, const HarnessOptions& o,
            std::optional<Rational> expected, bool up_to_sign = false) {
  Fit f = fit_constant(L, R);
  r.kappa = to_string(f.kappa);
  r.exact_zero = f.reference_found && f.residual.is_zero();
  r.residual = max_abs(f.residual);
  r.details["lhs_leading"] = leading_text(L);
  r.details["rhs_leading"] = leading_text(R);
  if (!f.residual.exact()) r.verified_order = f.residual.cutoff() - L.order();
  if (!f.residual.is_zero()) {
    r.details["residual_order"] = f.residual.order();
    r.details["residual_leading"] = leading_text(f.residual);
  }
  if (expected) {
    r.kappa_expected = (up_to_sign ? "+-" : "") + to_string(*expected);
    r.kappa_matches = up_to_sign ? abs(f.kappa) == abs(*expected) : f.kappa == *expected;
  }
  bool order_ok = !r.verified_order || *r.verified_order >= o.min_verified_order;
  r.pass = r.exact_zero && order_ok && r.kappa_matches;
  if (r.mode == CheckMode::series) r.details["verified_order_required"] = o.min_verified_order;
}

Series conj_pair_product(const Setting& s, const Series& f, const VarTablePtr& T, const std::string& p,
                         const std::string& q) {
  ZSeries a = restrict_z(f, T, {s.point(p), s.point(q, 1)});
  ZSeries b = restrict_z(f, T, {s.point(p), s.point(q, 2)});
  return to_rational(a * b);
}

/// d/du3 along the jet, in parameter t of a one-parameter table.
Series d_du3(const Setting& s, const Series& f, const VarTablePtr& T) {
  Series du3 = s.at(s.jet.u3.derivative("t"), T, "t");
  if (s.mode == CheckMode::exact) return f.derivative("t");
  return f.derivative("t") * du3.inverse();
}

Series ladder_value(const LadderEntry& e, const Series& x, const Series& y) {
  return x.pow(e.a) * y.pow(e.b);
}

}  // namespace

IdentityReport check_prop41(const TrigonalCurve& c, CheckMode mode, const HarnessOptions& o) {
  if (mode == CheckMode::numeric) return detail::numeric_prop41(c, o);
  Setting s = make_setting(c, mode, o);
  IdentityReport r;
  r.id = "prop41";
  r.mode = mode;
  r.parameters = base_parameters(s, o);
  VarTablePtr T = s.table({"t", "s"});
  Series N = to_rational(restrict_z(s.s3, T, {s.point("t"), s.point("s")})) * conj_pair_product(s, s.s3, T, "t", "s");
  Series D = restrict(s.s33, T, {s.point("t")}).pow(3) * restrict(s.s33, T, {s.point("s")}).pow(3);
  Series dx = s.x(T, "t") - s.x(T, "s");
  record(r, N, D * dx * dx, o, Rational(1));
  return r;
}

IdentityReport check_lemma36(const TrigonalCurve& c, CheckMode mode, const HarnessOptions& o) {
  if (mode == CheckMode::numeric) return detail::numeric_lemma36(c, o);
  Setting s = make_setting(c, mode, o);
  IdentityReport r;
  r.id = "lemma36";
  r.mode = mode;
  r.parameters = base_parameters(s, o);
  VarTablePtr T = s.table({"t"});
  Series L = restrict(s.s3, T, {s.point("t"), s.point("t")});
  Series y = s.y(T, "t");
  Series R = (y * y).scaled(Rational(3)) * restrict(s.s33, T, {s.point("t")}).pow(4);
  record(r, L, R, o, Rational(1));
  Series ratio = L * restrict(s.s33, T, {s.point("t")}).pow(4).inverse();
  r.details["ratio_leading"] = leading_text(ratio);
  return r;
}

IdentityReport check_lemma51(const TrigonalCurve& c, CheckMode mode, const HarnessOptions& o) {
  if (mode == CheckMode::numeric) return detail::numeric_lemma51(c, o);
  Setting s = make_setting(c, mode, o);
  IdentityReport r;
  r.id = "lemma51";
  r.mode = mode;
  r.parameters = base_parameters(s, o);
  VarTablePtr T2 = s.table({"t", "s"});
  VarTablePtr T = s.table({"t"});
  // N has a double zero on the diagonal; the limit is (1/2) d_s^2 N / (sigma33^2 u3'^2) at s = t.
  Series N = conj_pair_product(s, s.s3, T2, "t", "s");
  Series N1 = N.derivative("s");
  Series N2 = N1.derivative("s").scaled(Rational(1, 2));
  const std::vector<std::pair<std::string, std::string>> diag = {{"t", "t"}, {"s", "t"}};
  Series n0 = collapse(N, T, diag), n1 = collapse(N1, T, diag), n2 = collapse(N2, T, diag);
  r.details["double_zero_on_diagonal"] = n0.is_zero() && n1.is_zero();
  Series du3 = s.at(s.jet.u3.derivative("t"), T, "t");
  Series s33 = restrict(s.s33, T, {s.point("t")});
  Series limit = n2 * (s33 * s33 * du3 * du3).inverse();
  Series x = s.x(T, "t");
  record(r, limit, (x * x).scaled(Rational(3)), o, Rational(1));
  if (!(n0.is_zero() && n1.is_zero())) r.pass = false;
  r.details["limit_leading"] = leading_text(limit);
  r.details["limit_weight"] = sato_weight(limit.truncated(limit.order() + 1)).weight
                                  ? nlohmann::json(*sato_weight(limit.truncated(limit.order() + 1)).weight)
                                  : nlohmann::json(nullptr);
  r.details["expected_weight"] = 2 * kWeightX;
  // The chain through the doubling identity and the diagonal of the addition formula:
  // 3 y^2 * limit = (dx/du3)^2.
  Series y = s.y(T, "t");
  Series dxdu3 = d_du3(s, x, T);
  Series chain = (y * y).scaled(Rational(3)) * limit - dxdu3 * dxdu3;
  r.details["chain_3y2_limit_eq_dxdu3_sq"] = chain.is_zero();
  Fit constant = fit_constant(limit, Series::constant(T, Rational(1)));
  r.details["limit_is_constant"] = constant.residual.is_zero();
  r.details["limit_constant_value"] = to_string(constant.kappa);
  return r;
}

IdentityReport check_fs(const TrigonalCurve& c, int n, CheckMode mode, const HarnessOptions& o) {
  if (n < 3 || n > 5) throw std::invalid_argument("n must be between 3 and 5");
  if (mode == CheckMode::numeric) return detail::numeric_fs(c, n, o);
  Setting s = make_setting(c, mode, o);
  IdentityReport r;
  r.id = "fs";
  r.mode = mode;
  r.parameters = base_parameters(s, o);
  r.parameters["n"] = n;
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("t" + std::to_string(i));
  VarTablePtr T = s.table(names);

  std::vector<JetPoint> all;
  for (const auto& p : names) all.push_back(s.point(p));
  Series num = restrict(s.sigma, T, all);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) num = num * conj_pair_product(s, s.s3, T, names[i], names[j]);
  }
  Series den = Series::constant(T, Rational(1));
  for (const auto& p : names) den = den * restrict(s.s33, T, {s.point(p)}).pow(2 * n - 1);

  auto ladder = monomial_ladder(n);
  std::vector<std::vector<Series>> M(n), V(n);
  for (int i = 0; i < n; ++i) {
    Series x = s.x(T, names[i]), y = s.y(T, names[i]);
    for (int k = 0; k < n; ++k) {
      M[i].push_back(ladder_value(ladder[k], x, y));
      V[i].push_back(x.pow(k));
    }
  }
  Series rhs = determinant(M) * determinant(V);
  record(r, num, rhs * den, o, Rational(1));
  // kappa other than 1 is reported, not failed.
  r.pass = r.exact_zero && (!r.verified_order || *r.verified_order >= o.min_verified_order);
  r.details["lhs_terms"] = num.size();
  // Both sides vanish when two jet parameters collide.
  const std::vector<std::pair<std::string, std::string>> hit = {{names[1], names[0]}};
  bool lz = collapse(num, T, hit).is_zero(), rz = collapse(rhs, T, hit).is_zero();
  r.details["vanish_on_collision"] = lz && rz;
  if (!(lz && rz)) r.pass = false;
  return r;
}

Series psi_series(const TrigonalCurve& c, int n, CheckMode mode, const HarnessOptions& o) {
  Setting s = make_setting(c, mode, o);
  VarTablePtr T = s.table({"t"});
  std::vector<JetPoint> pts(static_cast<std::size_t>(n), s.point("t"));
  Series num = restrict(s.sigma, T, pts);
  return num * restrict(s.s33, T, {s.point("t")}).pow(n * n).inverse();
}

IdentityReport check_kiepert(const TrigonalCurve& c, int n, CheckMode mode, const HarnessOptions& o) {
  if (n < 3 || n > 5) throw std::invalid_argument("n must be between 3 and 5");
  if (mode == CheckMode::numeric) return detail::numeric_kiepert(c, n, o);
  Setting s = make_setting(c, mode, o);
  IdentityReport r;
  r.id = "kiepert";
  r.mode = mode;
  r.parameters = base_parameters(s, o);
  r.parameters["n"] = n;
  VarTablePtr T = s.table({"t"});
  std::vector<JetPoint> pts(static_cast<std::size_t>(n), s.point("t"));
  Series num = restrict(s.sigma, T, pts);
  Series s33 = restrict(s.s33, T, {s.point("t")});
  Series x = s.x(T, "t"), y = s.y(T, "t");

  auto ladder = monomial_ladder(n);
  std::vector<std::vector<Series>> M(n - 1);
  for (int k = 1; k < n; ++k) {
    Series f = ladder_value(ladder[k], x, y);
    for (int i = 0; i < n - 1; ++i) {
      f = d_du3(s, f, T);
      M[i].push_back(f);
    }
  }
  Series rhs = y.pow(n * (n - 1) / 2) * determinant(M);
  record(r, num, rhs * s33.pow(n * n), o, kiepert_factor(n), true);
  Series psi = num * s33.pow(n * n).inverse();
  r.details["psi_leading"] = leading_text(psi);
  r.details["psi_order"] = psi.order();
  r.details["rhs_determinant_leading"] = leading_text(rhs);
  return r;
}

IdentityReport check_bilinear_2pt(const TrigonalCurve& c, CheckMode mode, const HarnessOptions& o) {
  if (mode == CheckMode::numeric) return detail::numeric_bilinear(c, o);
  Setting s = make_setting(c, mode, o);
  IdentityReport r;
  r.id = "bilinear";
  r.mode = mode;
  r.parameters = base_parameters(s, o);
  VarTablePtr T = s.table({"t", "s"});
  std::vector<JetPoint> pts = {s.point("t"), s.point("s", 0, -1)};
  // sum_ij wp_ij(u(t) - u(s)) u_i'(t) u_j'(s) = F x'(t) z'(s) / ((x - z)^2 9 y^2 w^2)
  Series pairing(T);
  for (int i = 1; i <= 3; ++i) {
    Series di = s.at(s.jet.u(i).derivative("t"), T, "t");
    for (int j = 1; j <= 3; ++j) {
      Series dj = s.at(s.jet.u(j).derivative("t"), T, "s");
      pairing += restrict(wp(s.sigma, i, j).numerator, T, pts) * di * dj;
    }
  }
  Series S = restrict(s.sigma, T, pts);
  Series x = s.x(T, "t"), y = s.y(T, "t"), z = s.x(T, "s"), w = s.y(T, "s");
  KleinKernel K = solve_eta(s.curve);
  Series F = restrict_pair(K.F, T, x, y, z, w);
  Series A = (x - z).pow(2) * (y * y * w * w).scaled(Rational(9));
  Series B = F * x.derivative("t") * z.derivative("s");
  record(r, pairing * A, S * S * B, o, Rational(1));

  // Sato weight of R = F / ((x - z)^2 9 y^2 w^2) from the pair polynomials.
  VarTablePtr P = pair_table();
  Series px = Series::variable(P, "x"), py = Series::variable(P, "y");
  Series pz = Series::variable(P, "z"), pw = Series::variable(P, "w");
  Series pa = (px - pz).pow(2) * (py * py * pw * pw).scaled(Rational(9));
  auto wf = sato_weight(K.F).weight, wa = sato_weight(pa).weight;
  r.details["F_homogeneous"] = wf.has_value();
  r.details["denominator_homogeneous"] = wa.has_value();
  if (wf && wa) r.details["R_weight"] = *wf - *wa;
  if (!(wf && wa)) r.pass = false;
  return r;
}

}  // namespace trigonal
