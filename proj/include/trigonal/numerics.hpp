#pragma once

// Periods, theta functions and the numerically calibrated sigma function of a
// nonsingular curve y^3 = x^4 + l3 x^3 + l6 x^2 + l9 x + l12.
//
// Matrix convention: omega1(i, j) is the integral of omega_i over the j-th
// alpha cycle (forms by rows, cycles by columns), so lattice vectors are the
// columns of omega1 and omega2, and tau = omega1^-1 omega2.

#include <array>
#include <complex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "trigonal/curve.hpp"
#include "trigonal/jet.hpp"
#include "trigonal/series.hpp"

namespace trigonal {

using cplx = std::complex<double>;
using CMatrix3 = Eigen::Matrix<cplx, 3, 3>;
using CVector3 = Eigen::Matrix<cplx, 3, 1>;

/// The four roots of g, Newton-polished; throws when D = 0 or the roots are not separated.
std::vector<cplx> branch_points(const TrigonalCurve& c, double tol = 1e-13);

struct Characteristic {
  std::array<double, 3> delta1{};  // entries 0 or 1/2
  std::array<double, 3> delta2{};

  bool odd() const;
  int index() const;  // 0..63, bits of 2*delta1 then 2*delta2
  static Characteristic from_index(int i);
  std::string to_string() const;
  friend bool operator==(const Characteristic&, const Characteristic&) = default;
};

struct PeriodValidation {
  double legendre_residual = 0;   // max |M J M^T - 2 pi i J|
  double tau_asymmetry = 0;
  double min_imag_eigenvalue = 0;  // of Im tau
  double zeta_lattice_residual = 0;
  bool ok(double tol = 1e-8) const {
    return legendre_residual <= tol && tau_asymmetry <= tol && min_imag_eigenvalue > 0 &&
           zeta_lattice_residual <= tol;
  }
  nlohmann::json to_json() const;
};

struct PeriodData {
  TrigonalCurve curve;
  CMatrix3 omega1, omega2, eta1, eta2;
  CMatrix3 tau;
  std::optional<Characteristic> delta;
  std::optional<cplx> c;
  std::string provenance = "computed";
  PeriodValidation validation;
  nlohmann::json metadata = nlohmann::json::object();

  CMatrix3 omega1_inv() const { return omega1.inverse(); }
};

struct PeriodOptions {
  int nodes = 80;      // Gauss-Legendre nodes per half segment
  double tol = 1e-8;   // acceptance tolerance of the validation checks
};

/// Homology from dumbbell cycles on a star of segments between branch points,
/// symplectically reduced; omega and eta integrated along them.
PeriodData compute_periods(const TrigonalCurve& c, const PeriodOptions& o = {});

/// Legendre relation, symmetry and positivity of Im tau, [zeta]-stability of the lattice.
PeriodValidation validate_periods(const PeriodData& p);

/// The integer intersection matrix of the star cycles, exposed for inspection.
Eigen::MatrixXi star_intersection_matrix(const TrigonalCurve& c);

/// theta[delta](z; tau) and its first and second z-derivatives.
struct ThetaValue {
  cplx value;
  CVector3 gradient;
  CMatrix3 hessian;
};

struct ThetaOptions {
  double tol = 1e-14;
  int derivatives = 0;  // 0, 1 or 2
  double radius_scale = 1.0;  // multiplies the truncation radius (self-consistency checks)
};

ThetaValue theta(const CVector3& z, const CMatrix3& tau, const Characteristic& d, const ThetaOptions& o = {});

/// c * exp(-u^T eta1 omega1^-1 u / 2) * theta[delta](omega1^-1 u) and derivatives in u.
struct SigmaValue {
  cplx value;
  CVector3 gradient;   // sigma_1, sigma_2, sigma_3
  CMatrix3 hessian;    // sigma_ij
};
SigmaValue sigma_numeric(const PeriodData& p, const CVector3& u, int derivatives = 0);
/// Same without the constant c (usable before calibration); needs delta.
SigmaValue sigma_numeric_uncalibrated(const PeriodData& p, const Characteristic& d, const CVector3& u,
                                      int derivatives = 0);

/// A point of the curve with its Abel image from infinity.
struct CurvePoint {
  cplx x, y;
  CVector3 u;
};

/// Abel map of (x, y) from infinity: jet series near infinity, then straight-line quadrature.
class AbelMap {
 public:
  explicit AbelMap(const TrigonalCurve& c, int jet_cutoff = 48);
  CVector3 operator()(cplx x, cplx y) const;
  /// Random point with |x| <= radius, kept away from the branch points.
  CurvePoint random_point(std::mt19937_64& rng, double radius = 1.5) const;
  CurvePoint point(cplx x, cplx y) const { return {x, y, (*this)(x, y)}; }
  const std::vector<cplx>& branch() const { return branch_; }

 private:
  TrigonalCurve curve_;
  CurveJet jet_;
  std::vector<cplx> branch_;
  std::vector<cplx> lambda_values_;
};

/// Searches the 64 characteristics for the one whose theta function vanishes at 0 with
/// gradient along u1 and vanishes on Abel images of curve points. Throws unless exactly one fits.
struct CharacteristicSearch {
  Characteristic delta;
  std::vector<int> candidates;  // indices passing every test
  nlohmann::json to_json() const;
};
CharacteristicSearch find_characteristic(const PeriodData& p, const AbelMap& abel, std::uint64_t seed = 1,
                                         int samples = 6, double tol = 1e-8);

/// Median of series_sigma(u) / (exp(...) theta(...)) over small random u.
struct Calibration {
  cplx c;
  double dispersion = 0;    // max relative deviation from the median
  double series_agreement = 0;  // max relative |sigma_numeric - series| after calibration
  cplx formula_c_squared;   // pi^3 / (det omega1 * D)
  double formula_modulus_ratio = 0;  // |c|^2 / |formula|
  // |c|^2 |omega1| |D|^(1/2) / pi^3; observed to equal 8 * 3^(-9/4) on every curve tried
  double sqrt_d_constant = 0;
  int samples = 0;
  nlohmann::json to_json() const;
};
Calibration calibrate_c(PeriodData& p, const Series& sigma_series, std::uint64_t seed = 2, int samples = 20);

/// Evaluates a sigma_table() series at a complex point (lambdas taken from the curve).
cplx evaluate_sigma_series(const Series& s, const TrigonalCurve& c, const CVector3& u);

nlohmann::json periods_to_json(const PeriodData& p);
/// Re-validates; throws on a violated Legendre relation or a non-positive Im tau.
PeriodData periods_from_json(const nlohmann::json& j, double tol = 1e-8);
void save_periods(const PeriodData& p, const std::string& path);
PeriodData load_periods(const std::string& path, double tol = 1e-8);

/// Full numeric pipeline: periods, characteristic, calibration against the series.
struct NumericContext {
  PeriodData periods;
  AbelMap abel;
  CharacteristicSearch search;
  Calibration calibration;
};
NumericContext build_numeric_context(const TrigonalCurve& c, const Series& sigma_series, std::uint64_t seed = 1);

}  // namespace trigonal
