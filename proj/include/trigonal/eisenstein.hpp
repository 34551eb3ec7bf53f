#pragma once

#include <complex>
#include <string>

#include "trigonal/rational.hpp"

namespace trigonal {

/// Element a + b*zeta of Q(zeta), zeta a primitive cube root of unity (zeta^2 = -1 - zeta).
class Eisenstein {
 public:
  Eisenstein() = default;
  Eisenstein(Rational a) : re_(std::move(a)) {}  // NOLINT: implicit embedding of Q
  Eisenstein(Rational a, Rational b) : re_(std::move(a)), zeta_(std::move(b)) {}
  Eisenstein(int a) : re_(a) {}  // NOLINT

  static Eisenstein zeta() { return {Rational(0), Rational(1)}; }
  /// zeta^k for any integer k.
  static Eisenstein zeta_pow(int k);

  const Rational& a() const { return re_; }
  const Rational& b() const { return zeta_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(zeta_) == 0; }
  bool is_rational() const { return sgn(zeta_) == 0; }

  Eisenstein conj() const { return {re_ - zeta_, -zeta_}; }
  Rational norm() const { return re_ * re_ - re_ * zeta_ + zeta_ * zeta_; }
  Eisenstein inverse() const;

  Eisenstein& operator+=(const Eisenstein& o) {
    re_ += o.re_;
    zeta_ += o.zeta_;
    return *this;
  }
  Eisenstein& operator-=(const Eisenstein& o) {
    re_ -= o.re_;
    zeta_ -= o.zeta_;
    return *this;
  }
  Eisenstein& operator*=(const Eisenstein& o);
  Eisenstein& operator/=(const Eisenstein& o) { return *this *= o.inverse(); }

  friend Eisenstein operator+(Eisenstein x, const Eisenstein& y) { return x += y; }
  friend Eisenstein operator-(Eisenstein x, const Eisenstein& y) { return x -= y; }
  friend Eisenstein operator*(Eisenstein x, const Eisenstein& y) { return x *= y; }
  friend Eisenstein operator/(Eisenstein x, const Eisenstein& y) { return x /= y; }
  Eisenstein operator-() const { return {-re_, -zeta_}; }
  friend bool operator==(const Eisenstein& x, const Eisenstein& y) {
    return x.re_ == y.re_ && x.zeta_ == y.zeta_;
  }

  std::complex<double> to_complex() const;
  std::string to_string() const;

 private:
  Rational re_{0};
  Rational zeta_{0};
};

inline bool is_zero(const Eisenstein& e) { return e.is_zero(); }
inline std::string to_string(const Eisenstein& e) { return e.to_string(); }

}  // namespace trigonal
