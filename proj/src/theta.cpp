#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "trigonal/numerics.hpp"
#include "trigonal/sigma.hpp"

namespace trigonal {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0, 1);

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }
cplx from_cjson(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

nlohmann::json mjson(const CMatrix3& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 3; ++j) row.push_back(cjson(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

CMatrix3 from_mjson(const nlohmann::json& j) {
  CMatrix3 m;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) m(i, k) = from_cjson(j.at(i).at(k));
  }
  return m;
}

}  // namespace

ThetaValue theta(const CVector3& z, const CMatrix3& tau, const Characteristic& d, const ThetaOptions& o) {
  Eigen::Matrix3d Y = (0.5 * (tau + tau.transpose())).imag();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(Y);
  double lmin = es.eigenvalues().minCoeff();
  if (!(lmin > 0)) throw std::invalid_argument("Im tau is not positive definite");
  Eigen::Vector3d a(d.delta1[0], d.delta1[1], d.delta1[2]);
  CVector3 b(d.delta2[0], d.delta2[1], d.delta2[2]);
  Eigen::Vector3d center = -a - Y.ldlt().solve(z.imag());
  // Terms outside pi (n - center)^T Y (n - center) <= R^2 are below exp(-R^2) of the largest.
  double R2 = (-std::log(o.tol) + 8.0 + 4.0 * o.derivatives) * o.radius_scale * o.radius_scale;
  double box = std::sqrt(R2 / (kPi * lmin));
  Eigen::Vector3i lo, hi;
  for (int k = 0; k < 3; ++k) {
    lo(k) = static_cast<int>(std::floor(center(k) - box));
    hi(k) = static_cast<int>(std::ceil(center(k) + box));
  }
  ThetaValue out{0, CVector3::Zero(), CMatrix3::Zero()};
  CVector3 zb = z + b;
  for (int n0 = lo(0); n0 <= hi(0); ++n0) {
    for (int n1 = lo(1); n1 <= hi(1); ++n1) {
      for (int n2 = lo(2); n2 <= hi(2); ++n2) {
        Eigen::Vector3d n(n0, n1, n2);
        Eigen::Vector3d dn = n - center;
        if (kPi * dn.dot(Y * dn) > R2) continue;
        Eigen::Vector3d m = n + a;
        CVector3 mc = m.cast<cplx>();
        cplx e = 2.0 * kPi * kI * (0.5 * mc.dot(tau * mc) + mc.dot(zb));
        cplx term = std::exp(e);
        out.value += term;
        if (o.derivatives >= 1) out.gradient += (2.0 * kPi * kI) * mc * term;
        if (o.derivatives >= 2) out.hessian += (2.0 * kPi * kI) * (2.0 * kPi * kI) * (mc * mc.transpose()) * term;
      }
    }
  }
  return out;
}

SigmaValue sigma_numeric_uncalibrated(const PeriodData& p, const Characteristic& d, const CVector3& u, int derivatives) {
  CMatrix3 W = p.omega1.inverse();
  CMatrix3 kappa = p.eta1 * W;
  kappa = 0.5 * (kappa + kappa.transpose());
  cplx Q = -0.5 * (u.transpose() * kappa * u)(0, 0);
  ThetaOptions to;
  to.derivatives = derivatives;
  ThetaValue th = theta(W * u, p.tau, d, to);
  cplx eQ = std::exp(Q);
  SigmaValue s;
  s.value = eQ * th.value;
  s.gradient.setZero();
  s.hessian.setZero();
  if (derivatives >= 1) {
    CVector3 gQ = -(kappa * u);
    CVector3 gT = W.transpose() * th.gradient;
    s.gradient = eQ * (th.value * gQ + gT);
    if (derivatives >= 2) {
      CMatrix3 hT = W.transpose() * th.hessian * W;
      s.hessian = eQ * (th.value * (gQ * gQ.transpose() - kappa) + gQ * gT.transpose() + gT * gQ.transpose() + hT);
    }
  }
  return s;
}

SigmaValue sigma_numeric(const PeriodData& p, const CVector3& u, int derivatives) {
  if (!p.c || !p.delta) throw std::logic_error("sigma_numeric needs calibrated period data");
  SigmaValue s = sigma_numeric_uncalibrated(p, *p.delta, u, derivatives);
  s.value *= *p.c;
  s.gradient *= *p.c;
  s.hessian *= *p.c;
  return s;
}

cplx evaluate_sigma_series(const Series& s, const TrigonalCurve& c, const CVector3& u) {
  if (c.is_symbolic()) throw std::invalid_argument("numeric evaluation needs a numeric curve");
  const auto& vars = *s.vars();
  std::vector<cplx> v(vars.size(), 0);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& name = vars[i].name;
    if (name == "u1") v[i] = u(0);
    else if (name == "u2") v[i] = u(1);
    else if (name == "u3") v[i] = u(2);
    else if (name.size() > 1 && name[0] == 'l') v[i] = to_double(c.lambda(std::stoi(name.substr(1))));
  }
  return s.evaluate(v);
}

nlohmann::json CharacteristicSearch::to_json() const {
  return {{"delta", delta.to_string()}, {"index", delta.index()}, {"candidates", candidates}};
}

CharacteristicSearch find_characteristic(const PeriodData& p, const AbelMap& abel, std::uint64_t seed, int samples,
                                         double tol) {
  std::mt19937_64 rng(seed);
  std::vector<CurvePoint> pts;
  for (int i = 0; i < samples; ++i) pts.push_back(abel.random_point(rng));
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  std::vector<CVector3> probes;
  for (int i = 0; i < 3; ++i) {
    CVector3 v;
    for (int k = 0; k < 3; ++k) v(k) = cplx(unif(rng), 0.3 * unif(rng));
    probes.push_back(v);
  }
  CMatrix3 W = p.omega1.inverse();
  CharacteristicSearch out;
  for (int idx = 0; idx < 64; ++idx) {
    Characteristic d = Characteristic::from_index(idx);
    double scale = 0;
    for (const auto& z : probes) scale = std::max(scale, std::abs(theta(z, p.tau, d).value));
    if (scale == 0) continue;
    ThetaOptions o1;
    o1.derivatives = 1;
    ThetaValue t0 = theta(CVector3::Zero(), p.tau, d, o1);
    if (std::abs(t0.value) > tol * scale) continue;
    CVector3 grad = W.transpose() * t0.gradient;
    double g1 = std::abs(grad(0));
    if (g1 == 0 || std::abs(grad(1)) > tol * g1 || std::abs(grad(2)) > tol * g1) continue;
    bool vanish = true;
    for (const auto& q : pts) {
      SigmaValue s = sigma_numeric_uncalibrated(p, d, q.u);
      CVector3 off = q.u;
      off(2) += 0.2;
      double ref = std::abs(sigma_numeric_uncalibrated(p, d, off).value);
      if (std::abs(s.value) > 1e-6 * ref) {
        vanish = false;
        break;
      }
    }
    if (vanish) out.candidates.push_back(idx);
  }
  if (out.candidates.size() != 1) {
    throw std::runtime_error("characteristic search found " + std::to_string(out.candidates.size()) +
                             " candidates");
  }
  out.delta = Characteristic::from_index(out.candidates.front());
  return out;
}

nlohmann::json Calibration::to_json() const {
  return {{"c", cjson(c)},
          {"dispersion", dispersion},
          {"series_agreement", series_agreement},
          {"formula_c_squared", cjson(formula_c_squared)},
          {"c_squared", cjson(c * c)},
          {"formula_modulus_ratio", formula_modulus_ratio},
          {"sqrt_d_constant", sqrt_d_constant},
          {"samples", samples}};
}

Calibration calibrate_c(PeriodData& p, const Series& sigma_series, std::uint64_t seed, int samples) {
  if (!p.delta) throw std::logic_error("calibration needs a characteristic");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto small_u = [&] {
    const double eps = 0.25;
    CVector3 u;
    u(0) = std::pow(eps, 5) * cplx(unif(rng), unif(rng));
    u(1) = eps * eps * cplx(unif(rng), unif(rng));
    u(2) = eps * cplx(unif(rng), unif(rng));
    return u;
  };
  std::vector<cplx> ratios;
  for (int i = 0; i < samples; ++i) {
    CVector3 u = small_u();
    cplx ser = evaluate_sigma_series(sigma_series, p.curve, u);
    cplx num = sigma_numeric_uncalibrated(p, *p.delta, u).value;
    ratios.push_back(ser / num);
  }
  std::vector<double> re, im;
  for (auto r : ratios) {
    re.push_back(r.real());
    im.push_back(r.imag());
  }
  Calibration cal;
  cal.samples = samples;
  cal.c = cplx(median(re), median(im));
  for (auto r : ratios) cal.dispersion = std::max(cal.dispersion, std::abs(r - cal.c) / std::abs(cal.c));
  p.c = cal.c;
  for (int i = 0; i < samples; ++i) {
    CVector3 u = small_u();
    cplx ser = evaluate_sigma_series(sigma_series, p.curve, u);
    cplx num = sigma_numeric(p, u).value;
    cal.series_agreement = std::max(cal.series_agreement, std::abs(num - ser) / std::abs(ser));
  }
  double D = to_double(p.curve.discriminant());
  cal.formula_c_squared = std::pow(kPi, 3) / (p.omega1.determinant() * D);
  cal.formula_modulus_ratio = std::norm(cal.c) / std::abs(cal.formula_c_squared);
  cal.sqrt_d_constant = std::norm(cal.c) * std::abs(p.omega1.determinant()) * std::sqrt(std::abs(D)) / std::pow(kPi, 3);
  return cal;
}

nlohmann::json periods_to_json(const PeriodData& p) {
  nlohmann::json j;
  j["curve"] = p.curve.to_json();
  j["omega1"] = mjson(p.omega1);
  j["omega2"] = mjson(p.omega2);
  j["eta1"] = mjson(p.eta1);
  j["eta2"] = mjson(p.eta2);
  if (p.delta) {
    j["delta"] = {{"delta1", p.delta->delta1}, {"delta2", p.delta->delta2}};
  } else {
    j["delta"] = nullptr;
  }
  j["c"] = p.c ? cjson(*p.c) : nlohmann::json(nullptr);
  nlohmann::json meta = p.metadata;
  meta["validation"] = p.validation.to_json();
  j["metadata"] = meta;
  return j;
}

PeriodData periods_from_json(const nlohmann::json& j, double tol) {
  PeriodData p;
  p.curve = TrigonalCurve::from_json(j.at("curve"));
  p.omega1 = from_mjson(j.at("omega1"));
  p.omega2 = from_mjson(j.at("omega2"));
  p.eta1 = from_mjson(j.at("eta1"));
  p.eta2 = from_mjson(j.at("eta2"));
  p.tau = p.omega1.inverse() * p.omega2;
  if (j.contains("delta") && !j["delta"].is_null()) {
    Characteristic d;
    for (int i = 0; i < 3; ++i) {
      d.delta1[i] = j["delta"].at("delta1").at(i).get<double>();
      d.delta2[i] = j["delta"].at("delta2").at(i).get<double>();
      for (double v : {d.delta1[i], d.delta2[i]}) {
        if (v != 0 && v != 0.5) throw std::invalid_argument("characteristic entries must be 0 or 1/2");
      }
    }
    p.delta = d;
  }
  if (j.contains("c") && !j["c"].is_null()) p.c = from_cjson(j["c"]);
  if (j.contains("metadata")) p.metadata = j["metadata"];
  p.provenance = "loaded";
  p.validation = validate_periods(p);
  if (!p.validation.ok(tol)) throw std::runtime_error("loaded periods fail validation: " + p.validation.to_json().dump());
  return p;
}

void save_periods(const PeriodData& p, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << periods_to_json(p).dump(2) << "\n";
}

PeriodData load_periods(const std::string& path, double tol) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return periods_from_json(nlohmann::json::parse(f), tol);
}

NumericContext build_numeric_context(const TrigonalCurve& c, const Series& sigma_series, std::uint64_t seed) {
  PeriodData p = compute_periods(c);
  AbelMap abel(c);
  CharacteristicSearch s = find_characteristic(p, abel, seed);
  p.delta = s.delta;
  Calibration cal = calibrate_c(p, sigma_series, seed + 1);
  return {p, abel, s, cal};
}

}  // namespace trigonal
