#pragma once

// The curve y^3 = x^4 + l3 x^3 + l6 x^2 + l9 x + l12 and the general
// nine-parameter trigonal model it sits in.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "trigonal/eisenstein.hpp"
#include "trigonal/series.hpp"

namespace trigonal {

inline constexpr int kWeightX = -3;
inline constexpr int kWeightY = -4;
inline constexpr std::array<int, 4> kTrigonalLambdas = {3, 6, 9, 12};
inline constexpr std::array<int, 9> kGeneralLambdas = {1, 2, 3, 4, 5, 6, 8, 9, 12};

/// Coefficients lambda_j, j in kGeneralLambdas. Symbolic curves carry the four
/// trigonal lambdas as indeterminates instead of numbers.
class TrigonalCurve {
 public:
  TrigonalCurve() = default;
  static TrigonalCurve trigonal(Rational l3, Rational l6, Rational l9, Rational l12);
  static TrigonalCurve symbolic();
  /// Sets any lambda of the general model (j in kGeneralLambdas).
  TrigonalCurve with_lambda(int j, Rational value) const;

  bool is_symbolic() const { return symbolic_; }
  const Rational& lambda(int j) const;
  /// True when only lambda3..lambda12 may be nonzero.
  bool purely_trigonal() const;
  /// All lambdas zero: y^3 = x^4.
  bool is_degenerate_origin() const;

  /// g(x) coefficients, ascending in x (length 5, leading 1).
  std::vector<Rational> g_coefficients() const;

  Rational evaluate_f(const Rational& x, const Rational& y) const;
  std::complex<double> evaluate_f(std::complex<double> x, std::complex<double> y) const;
  std::pair<Rational, Rational> partials_f(const Rational& x, const Rational& y) const;
  std::pair<std::complex<double>, std::complex<double>> partials_f(std::complex<double> x,
                                                                  std::complex<double> y) const;

  /// disc_x(g) = Res(g, g') / lc(g); requires a numeric purely trigonal curve.
  Rational discriminant() const;

  /// Lambda j as a series over `vars`: the variable "l<j>" for symbolic curves, a constant otherwise.
  Series lambda_series(const VarTablePtr& vars, int j) const;

  nlohmann::json to_json() const;
  static TrigonalCurve from_json(const nlohmann::json& j);
  std::string describe() const;

 private:
  std::array<Rational, 13> lambda_{};
  bool symbolic_ = false;
};

/// Name of the lambda_j indeterminate in every variable table ("l3", ...).
std::string lambda_name(int j);
/// Coefficient-role variables l3, l6, l9, l12 with weights -3, -6, -9, -12.
std::vector<Variable> lambda_variables();

/// Sylvester resultant of two polynomials given by ascending coefficients.
Rational sylvester_resultant(const std::vector<Rational>& p, const std::vector<Rational>& q);
Series sylvester_resultant(const std::vector<Series>& p, const std::vector<Series>& q);
/// disc_x(g) for a generic monic quartic, as a polynomial in l3..l12.
Series generic_discriminant();

/// f(x, y) as a polynomial over a table with x, y (and lambdas when symbolic).
Series f_polynomial(const TrigonalCurve& c, const VarTablePtr& vars, std::string_view x = "x",
                    std::string_view y = "y");

/// [zeta^j] u = (zeta^j u1, zeta^j u2, zeta^2j u3).
std::array<std::complex<double>, 3> zeta_act(int j, const std::array<std::complex<double>, 3>& u);
std::array<Eisenstein, 3> zeta_act(int j, const std::array<Eisenstein, 3>& u);
/// Multipliers (zeta^j, zeta^j, zeta^2j) as exact elements.
std::array<Eisenstein, 3> zeta_multipliers(int j);

struct WeightReport {
  std::optional<long> weight;  // nullopt: inhomogeneous
  std::vector<long> term_weights;
};
WeightReport sato_weight(const Series& expression);

}  // namespace trigonal
