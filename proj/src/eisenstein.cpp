#include "trigonal/eisenstein.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace trigonal {

Eisenstein Eisenstein::zeta_pow(int k) {
  switch (((k % 3) + 3) % 3) {
    case 0:
      return {Rational(1), Rational(0)};
    case 1:
      return {Rational(0), Rational(1)};
    default:
      return {Rational(-1), Rational(-1)};
  }
}

Eisenstein& Eisenstein::operator*=(const Eisenstein& o) {
  // (a + b z)(c + d z) = (ac - bd) + (ad + bc - bd) z
  Rational bd = zeta_ * o.zeta_;
  Rational a = re_ * o.re_ - bd;
  Rational b = re_ * o.zeta_ + zeta_ * o.re_ - bd;
  re_ = std::move(a);
  zeta_ = std::move(b);
  return *this;
}

Eisenstein Eisenstein::inverse() const {
  Rational n = norm();
  if (sgn(n) == 0) throw std::domain_error("inverse of zero in Q(zeta)");
  Eisenstein c = conj();
  return {c.a() / n, c.b() / n};
}

std::complex<double> Eisenstein::to_complex() const {
  const std::complex<double> z(-0.5, std::sqrt(3.0) / 2.0);
  return re_.get_d() + zeta_.get_d() * z;
}

std::string Eisenstein::to_string() const {
  if (sgn(zeta_) == 0) return trigonal::to_string(re_);
  std::string out;
  if (sgn(re_) != 0) out = trigonal::to_string(re_) + (sgn(zeta_) > 0 ? "+" : "");
  return out + trigonal::to_string(zeta_) + "*zeta";
}

}  // namespace trigonal
