#include "trigonal/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>

#include "trigonal/identities.hpp"
#include "trigonal/jet.hpp"
#include "trigonal/numerics.hpp"
#include "trigonal/sigma.hpp"

namespace trigonal {

nlohmann::json to_json(const CriterionResult& r) {
  return {{"criterion", r.number},
          {"title", r.title},
          {"verdict", r.pass ? "pass" : "fail"},
          {"time_limit", r.time_limit},
          {"within_time_limit", r.seconds <= r.time_limit},
          {"details", r.details}};
}

namespace {

using Body = std::function<bool(nlohmann::json&)>;

CriterionResult timed(int number, std::string title, double limit, const Body& body) {
  CriterionResult r;
  r.number = number;
  r.title = std::move(title);
  r.time_limit = limit;
  auto t0 = std::chrono::steady_clock::now();
  try {
    r.pass = body(r.details);
  } catch (const std::exception& e) {
    r.details["error"] = e.what();
    r.pass = false;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > limit) {
    r.details["time_exceeded"] = true;
    r.pass = false;
  }
  return r;
}

bool odd_and_equivariant(const Series& s, long& violations) {
  const auto& vars = *s.vars();
  auto i1 = *vars.find("u1"), i2 = *vars.find("u2"), i3 = *vars.find("u3");
  violations = 0;
  for (const auto& [m, c] : s.terms()) {
    int a = m[i1], b = m[i2], d = m[i3];
    bool odd = (a + b + d) % 2 != 0;
    bool equivariant = ((a + b + 2 * d) % 3 + 3) % 3 == 1;
    if (!odd || !equivariant) ++violations;
  }
  return violations == 0;
}

bool sigma_leading(nlohmann::json& d) {
  SigmaExpansion s = sigma_expand(TrigonalCurve::symbolic(), 5);
  Series schur = schur_sigma(s.series.vars());
  d["series"] = series_to_json(s.series);
  d["text"] = s.series.to_string();
  return (s.series - schur).is_zero() && s.series.size() == 3;
}

bool sigma_filters(nlohmann::json& d, int cutoff) {
  SigmaExpansion s = sigma_expand(TrigonalCurve::symbolic(), cutoff);
  long v = 0;
  bool ok = odd_and_equivariant(s.series, v);
  d["terms"] = s.series.size();
  d["violating_monomials"] = v;
  d["weight_cutoff"] = cutoff;
  return ok;
}

bool vanishing(nlohmann::json& d, int cutoff) {
  TrigonalCurve c = TrigonalCurve::symbolic();
  SigmaExpansion s = sigma_expand(c, cutoff);
  CurveJet jet = abel_jet(c, cutoff + 2);
  VarTablePtr T1 = param_table({"t"});
  VarTablePtr T3 = param_table({"t", "s", "r"});
  Series s3 = restrict(sigma_partial(s.series, {3}), T1, {{&jet, "t"}});
  Series s33 = restrict(sigma_partial(s.series, {3, 3}), T1, {{&jet, "t"}});
  Series three = restrict(s.series, T3, {{&jet, "t"}, {&jet, "s"}, {&jet, "r"}});
  Series cube = Series::variable(T1, "t").pow(3);
  bool s33_ok = !s33.is_zero() && s33.order() == 3 && (s33.graded_part(3) - cube).is_zero();
  d["sigma3_on_curve_zero"] = s3.is_zero();
  d["sigma3_cutoff"] = s3.cutoff();
  d["sigma33_leading"] = s33.is_zero() ? "0" : s33.graded_part(s33.order()).to_string();
  d["three_point_nonzero"] = !three.is_zero();
  if (!three.is_zero()) d["three_point_leading"] = three.graded_part(three.order()).to_string();
  return s3.is_zero() && s33_ok && !three.is_zero();
}

nlohmann::json brief(const IdentityReport& r) {
  nlohmann::json j = r.to_json();
  j["details"].erase("lhs_leading");
  j["details"].erase("rhs_leading");
  return j;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o) {
  auto wanted = [&](int k) { return o.only.empty() || std::find(o.only.begin(), o.only.end(), k) != o.only.end(); };
  const TrigonalCurve origin = TrigonalCurve::trigonal(0, 0, 0, 0);
  HarnessOptions ho;
  ho.sigma_cutoff = o.sigma_cutoff;
  ho.seed = o.seed;
  ho.samples = o.samples;
  ho.tol = o.numeric_tol;
  std::vector<CriterionResult> out;

  if (wanted(1)) out.push_back(timed(1, "sigma leading part is the Schur polynomial", 1, sigma_leading));
  if (wanted(2)) {
    out.push_back(timed(2, "sigma expansion is odd and zeta-equivariant termwise", 60,
                        [&](nlohmann::json& d) { return sigma_filters(d, o.sigma_cutoff); }));
  }
  if (wanted(3)) {
    out.push_back(timed(3, "sigma3 vanishes on the curve, sigma33 = u3^3 + ..., three-point sigma nonzero", 60,
                        [&](nlohmann::json& d) { return vanishing(d, o.sigma_cutoff); }));
  }
  if (wanted(4)) {
    out.push_back(timed(4, "addition formula, exact", 10, [&](nlohmann::json& d) {
      auto r = check_prop41(origin, CheckMode::exact);
      d["report"] = brief(r);
      return r.pass && r.exact_zero && r.kappa == "1";
    }));
  }
  if (wanted(5)) {
    out.push_back(timed(5, "sigma3(2u) / sigma33^4 = 3y^2 and the diagonal limit = 3x^2, exact", 20,
                        [&](nlohmann::json& d) {
                          auto a = check_lemma36(origin, CheckMode::exact);
                          auto b = check_lemma51(origin, CheckMode::exact);
                          d["lemma36"] = brief(a);
                          d["lemma51"] = brief(b);
                          return a.pass && b.pass;
                        }));
  }
  if (wanted(6)) {
    out.push_back(timed(6, "Frobenius-Stickelberger type formula n = 3, 4, 5, exact", 300, [&](nlohmann::json& d) {
      bool ok = true;
      for (int n : {3, 4, 5}) {
        auto r = check_fs(origin, n, CheckMode::exact);
        d["n" + std::to_string(n)] = brief(r);
        d["kappa"][std::to_string(n)] = r.kappa;
        ok = ok && r.pass && r.exact_zero;
      }
      return ok;
    }));
  }
  if (wanted(7)) {
    out.push_back(timed(7, "Kiepert type formula n = 3, 4 and psi_5, exact", 300, [&](nlohmann::json& d) {
      bool ok = true;
      for (int n : {3, 4}) {
        auto r = check_kiepert(origin, n, CheckMode::exact);
        d["n" + std::to_string(n)] = brief(r);
        ok = ok && r.pass;
      }
      Series psi5 = psi_series(origin, 5, CheckMode::exact);
      d["psi5"] = psi5.to_string();
      std::vector<int> e{-70};
      ok = ok && psi5.size() == 1 && psi5.coefficient(e) == 126;
      auto r5 = check_kiepert(origin, 5, CheckMode::exact);
      d["n5"] = brief(r5);
      return ok;
    }));
  }
  if (wanted(8)) {
    out.push_back(timed(8, "series mode with symbolic lambdas", 1800, [&](nlohmann::json& d) {
      auto a = check_prop41(TrigonalCurve::symbolic(), CheckMode::series, ho);
      auto b = check_lemma36(TrigonalCurve::symbolic(), CheckMode::series, ho);
      d["prop41"] = brief(a);
      d["lemma36"] = brief(b);
      d["verified_order"] = {{"prop41", a.verified_order.value_or(-1)}, {"lemma36", b.verified_order.value_or(-1)}};
      return a.pass && b.pass;
    }));
  }

  std::shared_ptr<NumericContext> ctx;
  auto context = [&]() -> const NumericContext& {
    if (!ctx) {
      Series sig = sigma_expand(o.numeric_curve, o.sigma_cutoff).series;
      ctx = std::make_shared<NumericContext>(build_numeric_context(o.numeric_curve, sig, o.seed));
    }
    return *ctx;
  };
  if (wanted(9)) {
    out.push_back(timed(9, "numeric periods, theta sigma and identities", 600, [&](nlohmann::json& d) {
      const NumericContext& c = context();
      const PeriodValidation& v = c.periods.validation;
      d["curve"] = o.numeric_curve.to_json();
      d["validation"] = v.to_json();
      d["characteristic"] = c.search.to_json();
      d["calibration"] = c.calibration.to_json();
      bool ok = v.legendre_residual <= o.period_tol && v.min_imag_eigenvalue > 0 &&
                v.zeta_lattice_residual <= o.period_tol && c.search.candidates.size() == 1 &&
                c.calibration.dispersion <= o.calibration_tol && c.calibration.series_agreement <= o.calibration_tol;
      HarnessOptions n = ho;
      n.numeric = &c;
      for (const auto& r : {check_prop41(o.numeric_curve, CheckMode::numeric, n),
                            check_lemma36(o.numeric_curve, CheckMode::numeric, n),
                            check_fs(o.numeric_curve, 3, CheckMode::numeric, n)}) {
        d[r.id] = r.to_json();
        ok = ok && r.pass;
      }
      return ok;
    }));
  }
  if (wanted(10)) {
    out.push_back(timed(10, "|c|^2 against pi^3 / (|omega1| D)", 600, [&](nlohmann::json& d) {
      const NumericContext& c = context();
      const Calibration& cal = c.calibration;
      cplx ratio = cal.c * cal.c / cal.formula_c_squared;
      d["c"] = {cal.c.real(), cal.c.imag()};
      d["formula_c_squared"] = {cal.formula_c_squared.real(), cal.formula_c_squared.imag()};
      d["modulus_ratio"] = cal.formula_modulus_ratio;
      d["phase_over_2pi"] = std::arg(ratio) / (2 * std::numbers::pi);
      d["discriminant"] = to_string(o.numeric_curve.discriminant());
      d["sqrt_d_constant"] = cal.sqrt_d_constant;
      d["note"] = "sqrt_d_constant = |c|^2 |omega1| |D|^(1/2) / pi^3";
      return std::abs(cal.formula_modulus_ratio - 1) <= o.c_formula_tol;
    }));
  }
  return out;
}

}  // namespace trigonal
