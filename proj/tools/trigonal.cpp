// trigonal: command-line front end for the series, period and identity machinery.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "trigonal/acceptance.hpp"
#include "trigonal/forms.hpp"
#include "trigonal/identities.hpp"
#include "trigonal/jet.hpp"
#include "trigonal/numerics.hpp"
#include "trigonal/sigma.hpp"
#include "trigonal/version.hpp"

using namespace trigonal;
using nlohmann::json;

namespace {

// Bad input files and arguments that only fail after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

TrigonalCurve load_curve(const std::string& path, const TrigonalCurve& fallback) {
  if (path.empty()) return fallback;
  try {
    return TrigonalCurve::from_json(read_json(path));
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void emit(const json& j, const std::string& path) {
  std::string text = j.dump(2);
  std::cout << text << "\n";
  if (!path.empty()) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text << "\n";
  }
}

json stamp(const TrigonalCurve& c, const json& config, std::uint64_t seed) {
  return {{"curve", c.to_json()}, {"config", config}, {"seed", seed}, {"version", version()}};
}

cplx parse_complex(const std::string& s) {
  std::stringstream ss(s);
  double re = 0, im = 0;
  char comma = 0;
  ss >> re;
  if (ss.fail()) throw UsageError("not a complex number: " + s);
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im)) throw UsageError("not a complex number: " + s);
  }
  return {re, im};
}

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

/// A numeric context from a saved period file (calibrated c and characteristic included).
std::unique_ptr<NumericContext> context_from_file(const std::string& path) {
  PeriodData p = load_periods(path);
  if (!p.delta || !p.c) throw UsageError(path + ": period file lacks the characteristic or the constant c");
  CharacteristicSearch s;
  s.delta = *p.delta;
  s.candidates = {p.delta->index()};
  Calibration cal;
  cal.c = *p.c;
  AbelMap abel(p.curve);
  return std::make_unique<NumericContext>(NumericContext{p, abel, s, cal});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sigma functions and determinant identities of trigonal curves y^3 = x^4 + ..."};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string curve_path, out_path;
  int cutoff = 20;
  std::uint64_t seed = 1;

  auto* info = app.add_subcommand("curve-info", "discriminant, weights and homogeneity of a curve");
  info->add_option("--curve", curve_path, "curve JSON (default: symbolic lambdas)");

  auto* jet = app.add_subcommand("jet", "Abel map jet at infinity as series JSON");
  jet->add_option("--curve", curve_path, "curve JSON (default: symbolic lambdas)");
  jet->add_option("--cutoff", cutoff, "series precision")->check(CLI::Range(2, 80));
  jet->add_option("--out", out_path);

  auto* sigma = app.add_subcommand("sigma", "sigma expansion up to a u-weight cutoff");
  sigma->add_option("--curve", curve_path, "curve JSON (default: symbolic lambdas)");
  sigma->add_option("--cutoff", cutoff, "u-weight cutoff")->check(CLI::Range(5, 30));
  sigma->add_option("--out", out_path);

  auto* kernel = app.add_subcommand("dump-kernel", "numerators F and eta_j of the second-kind forms");
  kernel->add_option("--curve", curve_path, "curve JSON (default: symbolic lambdas)");
  kernel->add_option("--out", out_path);

  int sigma_cutoff = 20;
  auto* periods = app.add_subcommand("periods", "period matrices, characteristic and calibrated c");
  periods->add_option("--curve", curve_path, "curve JSON")->required();
  periods->add_option("--out", out_path, "period file to write")->required();
  periods->add_option("--seed", seed);
  periods->add_option("--sigma-cutoff", sigma_cutoff, "series used for calibration")->check(CLI::Range(10, 30));

  std::string periods_path;
  std::vector<std::string> u_text;
  int derivatives = 0;
  auto* eval = app.add_subcommand("sigma-eval", "theta-based sigma at a point of C^3");
  eval->add_option("--periods", periods_path, "period file")->required();
  eval->add_option("--u", u_text, "three coordinates re,im")->required()->expected(3);
  eval->add_option("--derivatives", derivatives)->check(CLI::Range(0, 2));

  std::string identity, mode = "exact";
  int n = 3, samples = 10;
  double tol = 1e-5;
  long min_order = 12;
  auto* verify = app.add_subcommand("verify", "check one identity");
  verify->add_option("--identity", identity)
      ->required()
      ->check(CLI::IsMember({"prop41", "lemma36", "lemma51", "fs", "kiepert", "bilinear"}));
  verify->add_option("--n", n)->check(CLI::Range(3, 5));
  verify->add_option("--mode", mode)->check(CLI::IsMember({"exact", "series", "numeric"}));
  verify->add_option("--curve", curve_path, "curve JSON (default: y^3 = x^4 exact, symbolic series)");
  verify->add_option("--periods", periods_path, "saved period file for numeric mode");
  verify->add_option("--tol", tol)->check(CLI::PositiveNumber);
  verify->add_option("--sigma-cutoff", sigma_cutoff)->check(CLI::Range(8, 30));
  verify->add_option("--min-order", min_order)->check(CLI::NonNegativeNumber);
  verify->add_option("--samples", samples)->check(CLI::Range(1, 1000));
  verify->add_option("--seed", seed);
  verify->add_option("--report", out_path);

  std::vector<int> only;
  auto* all = app.add_subcommand("verify-all", "run the acceptance suite");
  all->add_option("--curve", curve_path, "curve for the numeric criteria (default y^3 = x^4 - 1)");
  all->add_option("--seed", seed);
  all->add_option("--only", only, "criterion numbers")->check(CLI::Range(1, 10));
  all->add_option("--report", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*info) {
      TrigonalCurve c = load_curve(curve_path, TrigonalCurve::symbolic());
      json j = stamp(c, json::object(), 0);
      j["equation"] = c.describe();
      j["weights"] = {{"x", -3}, {"y", -4}, {"u1", 5}, {"u2", 2}, {"u3", 1}, {"lambda_j", "-j"}};
      WeightReport fw = sato_weight(f_polynomial(TrigonalCurve::symbolic(), pair_table()));
      j["homogeneity"]["curve_equation_weight"] = fw.weight ? json(*fw.weight) : json(nullptr);
      WeightReport dw = sato_weight(generic_discriminant());
      j["homogeneity"]["discriminant_weight"] = dw.weight ? json(*dw.weight) : json(nullptr);
      if (c.is_symbolic()) {
        j["discriminant"] = generic_discriminant().to_string();
      } else {
        Rational d = c.discriminant();
        j["discriminant"] = to_string(d);
        j["nonsingular"] = sgn(d) != 0;
      }
      emit(j, "");
    } else if (*jet) {
      TrigonalCurve c = load_curve(curve_path, TrigonalCurve::symbolic());
      CurveJet J = abel_jet(c, cutoff);
      json j = stamp(c, {{"cutoff", cutoff}}, 0);
      j["x"] = series_to_json(J.x);
      j["y"] = series_to_json(J.y);
      j["u1"] = series_to_json(J.u1);
      j["u2"] = series_to_json(J.u2);
      j["u3"] = series_to_json(J.u3);
      emit(j, out_path);
    } else if (*sigma) {
      TrigonalCurve c = load_curve(curve_path, TrigonalCurve::symbolic());
      SigmaExpansion s = sigma_expand(c, cutoff);
      json j = stamp(c, {{"cutoff", cutoff}}, 0);
      j["series"] = series_to_json(s.series);
      json grades = json::array();
      for (const auto& g : s.grades) {
        grades.push_back({{"grade", g.grade},
                          {"unknowns", g.unknowns},
                          {"lambda_monomials", g.lambda_monomials},
                          {"rank_vanishing", g.rank_vanishing},
                          {"rank_combined", g.rank_combined}});
      }
      j["grades"] = grades;
      emit(j, out_path);
    } else if (*kernel) {
      TrigonalCurve c = load_curve(curve_path, TrigonalCurve::symbolic());
      KleinKernel K = solve_eta(c);
      json j = stamp(c, json::object(), 0);
      j["F"] = K.F.to_string();
      j["F_weight"] = K.weight;
      for (int i = 0; i < 3; ++i) j["eta" + std::to_string(i + 1)] = K.h_xy[i].to_string();
      j["ansatz_unknowns"] = K.unknowns;
      j["symmetric_freedom"] = K.freedom;
      emit(j, out_path);
    } else if (*periods) {
      TrigonalCurve c = load_curve(curve_path, TrigonalCurve::symbolic());
      if (c.is_symbolic()) throw UsageError("periods need numeric lambdas");
      Series sig = sigma_expand(c, sigma_cutoff).series;
      NumericContext ctx = build_numeric_context(c, sig, seed);
      ctx.periods.metadata["seed"] = seed;
      ctx.periods.metadata["sigma_cutoff"] = sigma_cutoff;
      ctx.periods.metadata["version"] = version();
      ctx.periods.metadata["calibration"] = ctx.calibration.to_json();
      save_periods(ctx.periods, out_path);
      json j = stamp(c, {{"sigma_cutoff", sigma_cutoff}, {"out", out_path}}, seed);
      j["validation"] = ctx.periods.validation.to_json();
      j["characteristic"] = ctx.search.to_json();
      j["calibration"] = ctx.calibration.to_json();
      bool ok = ctx.periods.validation.ok() && ctx.calibration.dispersion <= 1e-6;
      j["verdict"] = ok ? "pass" : "fail";
      emit(j, "");
      return ok ? 0 : 1;
    } else if (*eval) {
      PeriodData p = load_periods(periods_path);
      if (!p.delta || !p.c) throw UsageError(periods_path + ": period file is not calibrated");
      CVector3 u;
      for (int i = 0; i < 3; ++i) u(i) = parse_complex(u_text[static_cast<std::size_t>(i)]);
      SigmaValue s = sigma_numeric(p, u, derivatives);
      json j = stamp(p.curve, {{"periods", periods_path}, {"derivatives", derivatives}}, 0);
      j["u"] = {cj(u(0)), cj(u(1)), cj(u(2))};
      j["sigma"] = cj(s.value);
      if (derivatives >= 1) j["gradient"] = {cj(s.gradient(0)), cj(s.gradient(1)), cj(s.gradient(2))};
      if (derivatives >= 2) {
        json h = json::array();
        for (int a = 0; a < 3; ++a) h.push_back({cj(s.hessian(a, 0)), cj(s.hessian(a, 1)), cj(s.hessian(a, 2))});
        j["hessian"] = h;
      }
      emit(j, "");
    } else if (*verify) {
      CheckMode m = parse_mode(mode);
      TrigonalCurve fallback = m == CheckMode::exact    ? TrigonalCurve::trigonal(0, 0, 0, 0)
                               : m == CheckMode::series ? TrigonalCurve::symbolic()
                                                        : TrigonalCurve::trigonal(0, 0, 0, -1);
      std::unique_ptr<NumericContext> ctx;
      if (!periods_path.empty()) {
        if (m != CheckMode::numeric) throw UsageError("--periods only applies to numeric mode");
        ctx = context_from_file(periods_path);
        if (!curve_path.empty() && !(load_curve(curve_path, fallback).to_json() == ctx->periods.curve.to_json())) {
          throw UsageError("--curve and --periods describe different curves");
        }
      }
      TrigonalCurve c = ctx ? ctx->periods.curve : load_curve(curve_path, fallback);
      HarnessOptions o;
      o.sigma_cutoff = sigma_cutoff;
      o.min_verified_order = min_order;
      o.seed = seed;
      o.samples = samples;
      o.tol = tol;
      o.numeric = ctx.get();
      IdentityReport r;
      if (identity == "prop41") r = check_prop41(c, m, o);
      else if (identity == "lemma36") r = check_lemma36(c, m, o);
      else if (identity == "lemma51") r = check_lemma51(c, m, o);
      else if (identity == "fs") r = check_fs(c, n, m, o);
      else if (identity == "kiepert") r = check_kiepert(c, n, m, o);
      else r = check_bilinear_2pt(c, m, o);
      json j = r.to_json();
      json config = {{"identity", identity}, {"mode", mode}, {"n", n}, {"tol", tol}, {"sigma_cutoff", sigma_cutoff},
                     {"min_order", min_order}, {"samples", samples}, {"periods", periods_path}};
      j.update(stamp(c, config, seed));
      emit(j, out_path);
      return r.pass ? 0 : 1;
    } else if (*all) {
      AcceptanceOptions o;
      o.numeric_curve = load_curve(curve_path, o.numeric_curve);
      if (o.numeric_curve.is_symbolic()) throw UsageError("verify-all needs a numeric curve");
      o.seed = seed;
      o.only = only;
      auto results = run_acceptance(o);
      json list = json::array();
      bool ok = true;
      for (const auto& r : results) {
        list.push_back(to_json(r));
        ok = ok && r.pass;
        std::cerr << (r.pass ? "PASS" : "FAIL") << " criterion " << r.number << ": " << r.title << " (" << r.seconds << " s)\n";
      }
      json j = stamp(o.numeric_curve, {{"only", only}, {"sigma_cutoff", o.sigma_cutoff}}, seed);
      j["criteria"] = list;
      j["verdict"] = ok ? "pass" : "fail";
      emit(j, out_path);
      return ok ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json j = {{"error", e.what()}, {"verdict", "fail"}, {"version", version()}};
    std::cout << j.dump(2) << "\n";
    return 1;
  }
  return 0;
}
