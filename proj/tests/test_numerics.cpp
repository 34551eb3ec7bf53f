#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "trigonal/identities.hpp"
#include "trigonal/numerics.hpp"
#include "trigonal/sigma.hpp"

using namespace trigonal;

namespace {

const double kPi = std::acos(-1.0);
const cplx kI(0, 1);
const cplx kZeta(-0.5, std::sqrt(3.0) / 2);

TrigonalCurve fermat() { return TrigonalCurve::trigonal(0, 0, 0, -1); }

// One calibrated pipeline shared by the tests below (sigma expansion dominates the cost).
const NumericContext& context() {
  static const NumericContext ctx = build_numeric_context(fermat(), sigma_expand(fermat(), 20).series, 1);
  return ctx;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

CVector3 sample_u() { return {cplx(0.31, 0.12), cplx(-0.22, 0.41), cplx(0.53, -0.28)}; }

}  // namespace

TEST_CASE("branch points") {
  auto r = branch_points(TrigonalCurve::trigonal(0, 0, 0, -2));
  REQUIRE(r.size() == 4);
  double q = std::pow(2.0, 0.25);
  for (cplx expect : {cplx(q, 0), cplx(-q, 0), cplx(0, q), cplx(0, -q)}) {
    double best = 1e9;
    for (auto e : r) best = std::min(best, std::abs(e - expect));
    CHECK(best < 1e-13);
  }
  CHECK_THROWS(branch_points(TrigonalCurve::trigonal(0, 0, 0, 0)));
  CHECK_THROWS(branch_points(TrigonalCurve::trigonal(0, -2, 0, 1)));  // (x^2 - 1)^2
}

TEST_CASE("period matrix of y^3 = x^4 - 1") {
  const PeriodData& p = context().periods;
  CHECK(p.validation.ok(1e-8));
  CHECK(p.validation.legendre_residual < 1e-12);
  CHECK(p.validation.min_imag_eigenvalue > 0);
  CHECK(p.validation.zeta_lattice_residual < 1e-12);
  CHECK((p.tau - p.tau.transpose()).norm() < 1e-12);
  Eigen::MatrixXi K = star_intersection_matrix(fermat());
  CHECK((K + K.transpose()).cwiseAbs().maxCoeff() == 0);
  CHECK(std::abs(std::lround(K.cast<double>().determinant())) == 1);
}

TEST_CASE("theta function") {
  const PeriodData& p = context().periods;
  Characteristic odd = *p.delta;
  CHECK(odd.odd());
  CHECK(std::abs(theta(CVector3::Zero(), p.tau, odd).value) < 1e-14);
  CVector3 z(cplx(0.1, 0.05), cplx(-0.3, 0.2), cplx(0.25, -0.1));
  CHECK(rel(theta(-z, p.tau, odd).value, -theta(z, p.tau, odd).value) < 1e-13);

  Characteristic even = Characteristic::from_index(0);
  ThetaOptions wide;
  wide.radius_scale = 2;
  CHECK(rel(theta(z, p.tau, even).value, theta(z, p.tau, even, wide).value) < 1e-14);

  // theta[d](z + e_k) = exp(2 pi i d'_k) theta, theta[d](z + tau e_k) = exp(-2 pi i d''_k - pi i tau_kk - 2 pi i z_k) theta
  for (int k = 0; k < 3; ++k) {
    CVector3 e = CVector3::Zero();
    e(k) = 1;
    cplx t0 = theta(z, p.tau, odd).value;
    CHECK(rel(theta(z + e, p.tau, odd).value, std::exp(2.0 * kPi * kI * odd.delta1[k]) * t0) < 1e-12);
    cplx f = std::exp(-2.0 * kPi * kI * odd.delta2[k] - kPi * kI * p.tau(k, k) - 2.0 * kPi * kI * z(k));
    CHECK(rel(theta(z + p.tau * e, p.tau, odd).value, f * t0) < 1e-12);
  }
  CHECK_THROWS(theta(z, CMatrix3::Identity(), even));
}

TEST_CASE("characteristic and calibration") {
  const NumericContext& ctx = context();
  CHECK(ctx.search.candidates.size() == 1);
  const Calibration& cal = ctx.calibration;
  CHECK(cal.dispersion < 1e-10);
  CHECK(cal.series_agreement < 1e-10);
  // |c|^2 |omega1| |D|^(1/2) / pi^3 comes out as 8 * 3^(-9/4), not the |D| law.
  CHECK(cal.sqrt_d_constant == doctest::Approx(8 * std::pow(3.0, -2.25)).epsilon(1e-9));
  CHECK(cal.formula_modulus_ratio == doctest::Approx(8 * std::pow(3.0, -2.25) * 16).epsilon(1e-9));
}

TEST_CASE("numeric sigma symmetries") {
  const PeriodData& p = context().periods;
  CVector3 u = sample_u();
  cplx s = sigma_numeric(p, u).value;
  CHECK(rel(sigma_numeric(p, -u).value, -s) < 1e-13);
  CVector3 zu(kZeta * u(0), kZeta * u(1), kZeta * kZeta * u(2));
  CHECK(rel(sigma_numeric(p, zu).value, kZeta * s) < 1e-13);

  // sigma(u + l) = chi(l) exp(-(u + l/2)^T eta(l)) sigma(u)
  const Characteristic& d = *p.delta;
  Eigen::Vector3d d1(d.delta1[0], d.delta1[1], d.delta1[2]), d2(d.delta2[0], d.delta2[1], d.delta2[2]);
  std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> shifts = {
      {{1, 0, 0}, {0, 0, 0}}, {{0, 0, 0}, {0, 1, 0}}, {{1, -1, 2}, {0, 1, 1}}};
  for (const auto& [a, b] : shifts) {
    CVector3 l = p.omega1 * a.cast<cplx>() + p.omega2 * b.cast<cplx>();
    CVector3 eta = p.eta1 * a.cast<cplx>() + p.eta2 * b.cast<cplx>();
    cplx L = ((u + 0.5 * l).transpose() * eta)(0, 0);
    cplx chi = std::exp(2.0 * kPi * kI * (a.dot(d2) - b.dot(d1) + 0.5 * a.dot(b)));
    CHECK(rel(sigma_numeric(p, u + l).value, chi * std::exp(-L) * s) < 1e-11);
  }

  // Derivatives against central differences.
  SigmaValue sv = sigma_numeric(p, u, 2);
  const double h = 1e-5;
  for (int k = 0; k < 3; ++k) {
    CVector3 e = CVector3::Zero();
    e(k) = h;
    cplx fd = (sigma_numeric(p, u + e).value - sigma_numeric(p, u - e).value) / (2 * h);
    CHECK(rel(fd, sv.gradient(k)) < 1e-7);
    CVector3 gd = (sigma_numeric(p, u + e, 1).gradient - sigma_numeric(p, u - e, 1).gradient) / (2 * h);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(gd(j) - sv.hessian(j, k)) < 1e-7 * sv.hessian.norm());
  }
}

TEST_CASE("numeric sigma against the series near the origin") {
  const NumericContext& ctx = context();
  Series sig = sigma_expand(fermat(), 20).series;
  for (double eps : {0.1, 0.2}) {
    CVector3 u(std::pow(eps, 5) * cplx(0.7, -0.4), eps * eps * cplx(-0.3, 0.9), eps * cplx(0.8, 0.5));
    CHECK(rel(sigma_numeric(ctx.periods, u).value, evaluate_sigma_series(sig, fermat(), u)) < 1e-9);
  }
}

TEST_CASE("sigma3 vanishes on Abel images of curve points") {
  const NumericContext& ctx = context();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 5; ++i) {
    CurvePoint q = ctx.abel.random_point(rng);
    REQUIRE(std::abs(std::pow(q.y, 3) - (std::pow(q.x, 4) - 1.0)) < 1e-12);
    SigmaValue s = sigma_numeric(ctx.periods, q.u, 2);
    double scale = std::abs(s.hessian(2, 2));
    CHECK(scale > 1e-3);
    CHECK(std::abs(s.value) < 1e-12 * scale);
    CHECK(std::abs(s.gradient(2)) < 1e-10 * scale);
  }
}

TEST_CASE("Abel map derivative along the curve") {
  const NumericContext& ctx = context();
  cplx x(0.4, 0.7);
  cplx y = std::pow(std::pow(x, 4) - 1.0, 1.0 / 3.0);
  const double h = 1e-5;
  auto y_at = [&](cplx x2) { return y * std::pow((std::pow(x2, 4) - 1.0) / (std::pow(x, 4) - 1.0), 1.0 / 3.0); };
  CVector3 d = (ctx.abel(x + h, y_at(x + h)) - ctx.abel(x - h, y_at(x - h))) / (2 * h);
  CVector3 expect = CVector3(1, x, y) / (3.0 * y * y);
  CHECK((d - expect).norm() < 1e-8);
}

TEST_CASE("period file round trip") {
  const PeriodData& p = context().periods;
  std::string path = "test_periods_roundtrip.json";
  save_periods(p, path);
  PeriodData q = load_periods(path);
  CHECK((q.omega1 - p.omega1).norm() == 0);
  CHECK((q.eta2 - p.eta2).norm() == 0);
  REQUIRE(q.delta);
  CHECK(*q.delta == *p.delta);
  REQUIRE(q.c);
  CHECK(*q.c == *p.c);
  CHECK(rel(sigma_numeric(q, sample_u()).value, sigma_numeric(p, sample_u()).value) == 0);

  nlohmann::json j = periods_to_json(p);
  j["eta1"][0][0][0] = j["eta1"][0][0][0].get<double>() + 1e-3;
  CHECK_THROWS(periods_from_json(j));
  nlohmann::json k = periods_to_json(p);
  k["omega2"] = k["omega1"];  // tau = identity: not positive imaginary part
  CHECK_THROWS(periods_from_json(k));
  std::remove(path.c_str());
}

TEST_CASE("numeric identity checks on y^3 = x^4 - 1") {
  HarnessOptions o;
  o.numeric = &context();
  auto c = fermat();
  for (const auto& r : {check_prop41(c, CheckMode::numeric, o), check_lemma36(c, CheckMode::numeric, o),
                        check_fs(c, 3, CheckMode::numeric, o), check_bilinear_2pt(c, CheckMode::numeric, o)}) {
    CAPTURE(r.id);
    CHECK(r.pass);
    CHECK(*r.residual < 1e-10);
    CHECK(*r.kappa_dispersion < 1e-10);
  }
  auto k3 = check_kiepert(c, 3, CheckMode::numeric, o);
  CHECK(k3.pass);
  auto k4 = check_kiepert(c, 4, CheckMode::numeric, o);
  CHECK(k4.pass);
  auto f4 = check_fs(c, 4, CheckMode::numeric, o);
  CHECK(f4.pass);

  // The diagonal limit is the constant 3, not 3x^2.
  auto l = check_lemma51(c, CheckMode::numeric, o);
  CHECK_FALSE(l.pass);
  CHECK(l.details["limit_is_constant_3"] == true);
  CHECK(l.details["limit_vs_constant_3"].get<double>() < 1e-6);

  // Same seed, same report.
  CHECK(check_prop41(c, CheckMode::numeric, o).to_json() == check_prop41(c, CheckMode::numeric, o).to_json());
  CHECK_THROWS(check_prop41(TrigonalCurve::symbolic(), CheckMode::numeric));
}
