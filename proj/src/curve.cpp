#include "trigonal/curve.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>


namespace trigonal {

namespace {

bool is_general_index(int j) {
  return std::find(kGeneralLambdas.begin(), kGeneralLambdas.end(), j) != kGeneralLambdas.end();
}

template <class T>
T horner(const std::vector<T>& asc, const T& x) {
  T acc = asc.back();
  for (std::size_t i = asc.size() - 1; i-- > 0;) acc = acc * x + asc[i];
  return acc;
}

}  // namespace

std::string lambda_name(int j) { return "l" + std::to_string(j); }

std::vector<Variable> lambda_variables() {
  std::vector<Variable> v;
  for (int j : kTrigonalLambdas) v.push_back({lambda_name(j), -j, VarRole::coefficient});
  return v;
}

TrigonalCurve TrigonalCurve::trigonal(Rational l3, Rational l6, Rational l9, Rational l12) {
  TrigonalCurve c;
  c.lambda_[3] = std::move(l3);
  c.lambda_[6] = std::move(l6);
  c.lambda_[9] = std::move(l9);
  c.lambda_[12] = std::move(l12);
  return c;
}

TrigonalCurve TrigonalCurve::symbolic() {
  TrigonalCurve c;
  c.symbolic_ = true;
  return c;
}

TrigonalCurve TrigonalCurve::with_lambda(int j, Rational value) const {
  if (!is_general_index(j)) throw std::invalid_argument("no lambda_" + std::to_string(j) + " in the curve model");
  if (symbolic_) throw std::invalid_argument("cannot set a lambda on a symbolic curve");
  TrigonalCurve c = *this;
  c.lambda_[j] = std::move(value);
  return c;
}

const Rational& TrigonalCurve::lambda(int j) const {
  if (j < 0 || j > 12) throw std::out_of_range("lambda index");
  if (symbolic_) throw std::logic_error("numeric lambda requested from a symbolic curve");
  return lambda_[j];
}

bool TrigonalCurve::purely_trigonal() const {
  if (symbolic_) return true;
  for (int j : {1, 2, 4, 5, 8}) {
    if (sgn(lambda_[j]) != 0) return false;
  }
  return true;
}

bool TrigonalCurve::is_degenerate_origin() const {
  if (symbolic_) return false;
  return std::all_of(lambda_.begin(), lambda_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

std::vector<Rational> TrigonalCurve::g_coefficients() const {
  if (symbolic_) throw std::logic_error("g coefficients of a symbolic curve");
  return {lambda_[12], lambda_[9], lambda_[6], lambda_[3], Rational(1)};
}

// f = y^3 - (l1 x + l4) y^2 - (l2 x^2 + l5 x + l8) y - g(x)
Rational TrigonalCurve::evaluate_f(const Rational& x, const Rational& y) const {
  const auto& l = lambda_;
  return y * y * y - (l[1] * x + l[4]) * y * y - (l[2] * x * x + l[5] * x + l[8]) * y -
         horner(g_coefficients(), x);
}

std::complex<double> TrigonalCurve::evaluate_f(std::complex<double> x, std::complex<double> y) const {
  auto d = [&](int j) { return lambda_[j].get_d(); };
  std::vector<std::complex<double>> g;
  for (const auto& q : g_coefficients()) g.emplace_back(q.get_d());
  return y * y * y - (d(1) * x + d(4)) * y * y - (d(2) * x * x + d(5) * x + d(8)) * y - horner(g, x);
}

std::pair<Rational, Rational> TrigonalCurve::partials_f(const Rational& x, const Rational& y) const {
  const auto& l = lambda_;
  Rational gp = 4 * x * x * x + 3 * l[3] * x * x + 2 * l[6] * x + l[9];
  Rational fx = -l[1] * y * y - (2 * l[2] * x + l[5]) * y - gp;
  Rational fy = 3 * y * y - 2 * (l[1] * x + l[4]) * y - (l[2] * x * x + l[5] * x + l[8]);
  return {fx, fy};
}

std::pair<std::complex<double>, std::complex<double>> TrigonalCurve::partials_f(std::complex<double> x,
                                                                                 std::complex<double> y) const {
  auto d = [&](int j) { return lambda_[j].get_d(); };
  auto gp = 4.0 * x * x * x + 3.0 * d(3) * x * x + 2.0 * d(6) * x + d(9);
  auto fx = -d(1) * y * y - (2.0 * d(2) * x + d(5)) * y - gp;
  auto fy = 3.0 * y * y - 2.0 * (d(1) * x + d(4)) * y - (d(2) * x * x + d(5) * x + d(8));
  return {fx, fy};
}

Rational TrigonalCurve::discriminant() const {
  if (symbolic_) throw std::logic_error("use generic_discriminant() for a symbolic curve");
  if (!purely_trigonal()) throw std::invalid_argument("discriminant is defined for purely trigonal curves");
  auto g = g_coefficients();
  std::vector<Rational> gp;
  for (std::size_t i = 1; i < g.size(); ++i) gp.push_back(g[i] * static_cast<long>(i));
  return sylvester_resultant(g, gp) / g.back();
}

Series TrigonalCurve::lambda_series(const VarTablePtr& vars, int j) const {
  if (symbolic_) {
    if (j % 3 != 0) return Series(vars);
    return Series::variable(vars, lambda_name(j));
  }
  return Series::constant(vars, lambda_[j]);
}

nlohmann::json TrigonalCurve::to_json() const {
  nlohmann::json j;
  if (symbolic_) {
    j["symbolic"] = true;
    return j;
  }
  for (int k : kGeneralLambdas) {
    if (k % 3 == 0 || sgn(lambda_[k]) != 0) j["lambda" + std::to_string(k)] = trigonal::to_string(lambda_[k]);
  }
  return j;
}

TrigonalCurve TrigonalCurve::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("curve file must hold a JSON object");
  if (j.value("symbolic", false)) return symbolic();
  TrigonalCurve c;
  for (const auto& [key, value] : j.items()) {
    if (key == "symbolic") continue;
    if (key.rfind("lambda", 0) != 0) throw std::invalid_argument("unknown curve field " + key);
    int k = std::stoi(key.substr(6));
    if (!is_general_index(k)) throw std::invalid_argument("unknown curve field " + key);
    c.lambda_[k] = value.is_string() ? parse_rational(value.get<std::string>())
                                     : parse_rational(value.dump());
  }
  return c;
}

std::string TrigonalCurve::describe() const {
  if (symbolic_) return "y^3 = x^4 + l3*x^3 + l6*x^2 + l9*x + l12";
  std::ostringstream os;
  os << "y^3";
  if (!purely_trigonal()) os << " + ...";
  os << " = x^4";
  const char* mono[] = {"", "*x", "*x^2", "*x^3"};
  int powers[] = {3, 2, 1, 0};
  int idx = 0;
  for (int k : kTrigonalLambdas) {
    const Rational& q = lambda_[k];
    int p = powers[idx++];
    if (sgn(q) == 0) continue;
    os << (sgn(q) > 0 ? " + " : " - ");
    Rational a = abs(q);
    if (a != 1 || p == 0) os << trigonal::to_string(a);
    os << (a == 1 && p != 0 ? std::string(mono[p]).substr(1) : mono[p]);
  }
  return os.str();
}

Rational sylvester_resultant(const std::vector<Rational>& p, const std::vector<Rational>& q) {
  const std::size_t m = p.size() - 1, n = q.size() - 1;
  const std::size_t N = m + n;
  if (N == 0) return 1;
  std::vector<std::vector<Rational>> s(N, std::vector<Rational>(N, Rational(0)));
  // Rows hold coefficients in descending order, shifted.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= m; ++k) s[i][i + k] = p[m - k];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k <= n; ++k) s[n + i][i + k] = q[n - k];
  // Fraction-free would be nicer; plain elimination is fine at this size.
  Rational det = 1;
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t r = c;
    while (r < N && sgn(s[r][c]) == 0) ++r;
    if (r == N) return 0;
    if (r != c) {
      std::swap(s[r], s[c]);
      det = -det;
    }
    det *= s[c][c];
    for (std::size_t i = c + 1; i < N; ++i) {
      if (sgn(s[i][c]) == 0) continue;
      Rational f = s[i][c] / s[c][c];
      for (std::size_t k = c; k < N; ++k) s[i][k] -= f * s[c][k];
    }
  }
  return det;
}

Series sylvester_resultant(const std::vector<Series>& p, const std::vector<Series>& q) {
  const std::size_t m = p.size() - 1, n = q.size() - 1;
  const std::size_t N = m + n;
  const VarTablePtr& vars = p.front().vars();
  std::vector<std::vector<Series>> s(N, std::vector<Series>(N, Series(vars)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= m; ++k) s[i][i + k] = p[m - k];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k <= n; ++k) s[n + i][i + k] = q[n - k];
  return determinant(s);
}

Series generic_discriminant() {
  VarTablePtr vars = make_table(lambda_variables());
  TrigonalCurve c = TrigonalCurve::symbolic();
  std::vector<Series> g;
  for (int j : {12, 9, 6, 3}) g.push_back(c.lambda_series(vars, j));
  g.push_back(Series::constant(vars, 1));
  std::vector<Series> gp;
  for (std::size_t i = 1; i < g.size(); ++i) gp.push_back(g[i].scaled(Rational(static_cast<long>(i))));
  return sylvester_resultant(g, gp);  // lc(g) = 1
}

Series f_polynomial(const TrigonalCurve& c, const VarTablePtr& vars, std::string_view x, std::string_view y) {
  if (!c.purely_trigonal()) throw std::invalid_argument("f_polynomial supports purely trigonal curves");
  Series X = Series::variable(vars, x);
  Series Y = Series::variable(vars, y);
  Series g = Series::constant(vars, 1);
  for (int j : kTrigonalLambdas) g = g * X + c.lambda_series(vars, j);
  return Y.pow(3) - g;
}

std::array<Eisenstein, 3> zeta_multipliers(int j) {
  return {Eisenstein::zeta_pow(j), Eisenstein::zeta_pow(j), Eisenstein::zeta_pow(2 * j)};
}

std::array<std::complex<double>, 3> zeta_act(int j, const std::array<std::complex<double>, 3>& u) {
  auto m = zeta_multipliers(j);
  return {m[0].to_complex() * u[0], m[1].to_complex() * u[1], m[2].to_complex() * u[2]};
}

std::array<Eisenstein, 3> zeta_act(int j, const std::array<Eisenstein, 3>& u) {
  auto m = zeta_multipliers(j);
  return {m[0] * u[0], m[1] * u[1], m[2] * u[2]};
}

WeightReport sato_weight(const Series& expression) {
  WeightReport r;
  r.weight = expression.homogeneous_weight();
  std::set<long> ws;
  for (const auto& t : expression.terms()) ws.insert(expression.sato_weight(t.first));
  r.term_weights.assign(ws.begin(), ws.end());
  return r;
}

}  // namespace trigonal
