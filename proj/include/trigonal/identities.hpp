#pragma once

// Both sides of the addition, Frobenius-Stickelberger and Kiepert type
// identities, compared on jets of the Abel map. Every comparison fits a single
// constant kappa with LHS = kappa * RHS and reports the residual.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "trigonal/curve.hpp"
#include "trigonal/series.hpp"

namespace trigonal {

enum class CheckMode { exact, series, numeric };

std::string to_string(CheckMode m);
CheckMode parse_mode(const std::string& s);

struct IdentityReport {
  std::string id;
  CheckMode mode = CheckMode::exact;
  nlohmann::json parameters = nlohmann::json::object();

  bool exact_zero = false;                  // residual identically zero (exact) or below the cutoff (series)
  std::optional<long> verified_order;       // series mode: weight verified beyond the leading term
  std::optional<double> residual;           // numeric: max relative error; exact/series: max |coef| of residual
  std::string kappa;                        // fitted constant, exact text or a complex number
  std::optional<double> kappa_dispersion;   // numeric spread of kappa over samples
  std::optional<std::string> kappa_expected;
  bool kappa_matches = true;
  nlohmann::json details = nlohmann::json::object();
  bool pass = false;

  nlohmann::json to_json() const;
};

/// A monomial x^a y^b of the ladder.
struct LadderEntry {
  int a = 0;
  int b = 0;
  int pole_order = 0;  // 3a + 4b
  std::string name;
};

/// First k monomials in x, y (y-degree below 3) ordered by pole order at infinity.
std::vector<LadderEntry> monomial_ladder(int k);

struct NumericContext;

struct HarnessOptions {
  int sigma_cutoff = 20;  // series mode sigma weight cutoff; also the series used to calibrate c
  long min_verified_order = 12;
  // numeric mode
  const NumericContext* numeric = nullptr;  // built from the curve when absent
  std::uint64_t seed = 1;
  int samples = 10;   // random points (or point tuples)
  double tol = 1e-5;  // max relative residual and kappa dispersion
};

/// Exact mode requires the curve y^3 = x^4; series mode accepts symbolic or rational lambdas;
/// numeric mode evaluates the theta-based sigma at Abel images of random curve points.
IdentityReport check_prop41(const TrigonalCurve& c, CheckMode mode, const HarnessOptions& o = {});
IdentityReport check_lemma36(const TrigonalCurve& c, CheckMode mode, const HarnessOptions& o = {});
IdentityReport check_lemma51(const TrigonalCurve& c, CheckMode mode, const HarnessOptions& o = {});
IdentityReport check_fs(const TrigonalCurve& c, int n, CheckMode mode, const HarnessOptions& o = {});
IdentityReport check_kiepert(const TrigonalCurve& c, int n, CheckMode mode, const HarnessOptions& o = {});
IdentityReport check_bilinear_2pt(const TrigonalCurve& c, CheckMode mode, const HarnessOptions& o = {});

/// psi_n(u(t)) = sigma(n u) / sigma33(u)^(n^2) along the jet, as a Laurent series in t.
Series psi_series(const TrigonalCurve& c, int n, CheckMode mode, const HarnessOptions& o = {});

/// 1 / (1! 2! ... (n-1)!)
Rational kiepert_factor(int n);

}  // namespace trigonal
