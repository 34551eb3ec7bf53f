#include "trigonal/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace trigonal {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw std::invalid_argument("bad rational literal: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("bad rational literal: " + s);
    if (digits[0] == '+') digits.erase(0, 1);
    Integer num;
    if (num.set_str(digits, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (s[0] == '+') s.erase(0, 1);
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

bool exact_root(const Rational& q, unsigned n, Rational& root) {
  if (n == 0) return false;
  if (sgn(q) < 0 && n % 2 == 0) return false;
  Integer num = abs(q.get_num());
  Integer den = q.get_den();
  Integer rn, rd;
  if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n)) return false;
  if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n)) return false;
  if (sgn(q) < 0) rn = -rn;
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace trigonal
