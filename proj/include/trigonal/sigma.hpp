#pragma once

// The sigma function of the curve as a Sato-graded series in (u1, u2, u3)
// with polynomial lambda coefficients.

#include <string>
#include <vector>

#include "trigonal/curve.hpp"
#include "trigonal/forms.hpp"
#include "trigonal/jet.hpp"
#include "trigonal/series.hpp"

namespace trigonal {

/// u1 (5), u2 (2), u3 (1) followed by l3..l12.
VarTablePtr sigma_table();

/// Series variables named by `params` (weight 1 each) followed by l3..l12.
/// Without lambdas the table only holds lambda-free series.
VarTablePtr param_table(const std::vector<std::string>& params, bool with_lambdas = true);

/// Solver bookkeeping for one lambda-grade.
struct GradeReport {
  long grade = 0;                  // lambda weight
  std::size_t unknowns = 0;        // u-monomials per lambda monomial
  std::size_t lambda_monomials = 0;
  std::size_t rank_vanishing = 0;  // rank from sigma(u(t1) + u(t2)) = 0 alone
  std::size_t rank_combined = 0;   // after every constraint family that was needed
  std::vector<std::pair<std::string, std::size_t>> stage_ranks;  // cumulative rank per family
  std::vector<std::string> free_after_vanishing;
};

struct SigmaExpansion {
  Series series;          // over sigma_table(), cutoff weight_cutoff + 1 in u-weight
  int weight_cutoff = 0;
  TrigonalCurve curve;
  std::vector<GradeReport> grades;
};

/// u1 - u3 u2^2 + u3^5 / 20
Series schur_sigma(const VarTablePtr& sigma_vars);

/// Solves the sigma expansion grade by grade. At each lambda-grade the unknown
/// coefficients must make sigma(u(t1) + u(t2)) vanish. Where that leaves freedom the
/// log-derivative identity
///   d_t d_s log sigma(u(t) - u(s) [- u(r)]) = F x'(t) z'(s) / ((x - z)^2 9 y^2 w^2)
/// is added, linearised around the lambda-free solution, first with two points and
/// then with a third. Numeric curves specialise the symbolic result.
SigmaExpansion sigma_expand(const TrigonalCurve& c, int weight_cutoff);

/// Partial derivative along u_{i1} u_{i2} ... (indices 1..3).
Series sigma_partial(const SigmaExpansion& s, const std::vector<int>& index);
Series sigma_partial(const Series& sigma, const std::vector<int>& index);

/// -d_i d_j log sigma as numerator / sigma^2.
struct Quotient {
  Series numerator;
  Series denominator;
};
Quotient wp(const Series& sigma, int i, int j);
/// -d_i d_j d_k log sigma as numerator / sigma^3.
Quotient wp3(const Series& sigma, int i, int j, int k);

/// A point u = sign * [zeta^k] u(param) on a jet.
struct JetPoint {
  const CurveJet* jet = nullptr;
  std::string param;
  int zeta_power = 0;
  int sign = 1;
};

/// Composes a u-series with u = sum of the given jet points. The target table must
/// contain every parameter name and the lambdas.
ZSeries restrict_z(const Series& f, const VarTablePtr& target, const std::vector<JetPoint>& points);
/// Same, for points without zeta multipliers.
Series restrict(const Series& f, const VarTablePtr& target, const std::vector<JetPoint>& points);

/// A jet series in t re-expressed in the parameter `param` of `target`.
Series rename_param(const Series& jet_series, const VarTablePtr& target, const std::string& param);

/// Series JSON: {"vars": [...], "terms": [{"exp": [...], "coef": "p/q"}], "cutoff": N}.
nlohmann::json series_to_json(const Series& s);
Series series_from_json(const nlohmann::json& j);

}  // namespace trigonal
