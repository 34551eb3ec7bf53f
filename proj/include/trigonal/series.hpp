#pragma once

// Exact truncated multivariate Laurent series graded by Sato weight.
//
// Variables come in two roles. Series variables (t, u1, ...) carry positive
// weights and are subject to truncation: a series with cutoff N is exact for
// every term whose series weight sum(w_i * e_i) is < N, and says nothing about
// terms of weight >= N. Coefficient variables (the lambda_j) are never
// truncated; they play the role of the polynomial coefficient ring.

#include <climits>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trigonal/eisenstein.hpp"
#include "trigonal/rational.hpp"

namespace trigonal {

enum class VarRole { series, coefficient };

struct Variable {
  std::string name;
  int weight = 1;
  VarRole role = VarRole::series;

  friend bool operator==(const Variable&, const Variable&) = default;
};

class VariableTable {
 public:
  static constexpr std::size_t kMaxVars = 8;

  explicit VariableTable(std::vector<Variable> vars);

  std::size_t size() const { return vars_.size(); }
  const Variable& operator[](std::size_t i) const { return vars_[i]; }
  const std::vector<Variable>& variables() const { return vars_; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;  // throws when absent

  friend bool operator==(const VariableTable& a, const VariableTable& b) { return a.vars_ == b.vars_; }

 private:
  std::vector<Variable> vars_;
};

using VarTablePtr = std::shared_ptr<const VariableTable>;

VarTablePtr make_table(std::vector<Variable> vars);

/// Packed exponent vector: 8 signed 16-bit lanes.
class Monomial {
 public:
  static constexpr int kMinExp = -32768 + 1;
  static constexpr int kMaxExp = 32767 - 1;

  Monomial() : bits_(bias()) {}
  static Monomial from(std::span<const int> exps);

  int operator[](std::size_t i) const {
    return static_cast<int>(static_cast<std::uint16_t>(bits_ >> (16 * i))) - 0x8000;
  }
  Monomial with(std::size_t i, int e) const;

  /// Lane-wise sum; caller guarantees the result stays in range.
  friend Monomial operator+(const Monomial& a, const Monomial& b) {
    Monomial m;
    m.bits_ = a.bits_ + b.bits_ - bias();
    return m;
  }
  friend Monomial operator-(const Monomial& a, const Monomial& b) {
    Monomial m;
    m.bits_ = a.bits_ - b.bits_ + bias();
    return m;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.bits_ == b.bits_; }

  std::size_t hash() const {
    auto lo = static_cast<std::uint64_t>(bits_);
    auto hi = static_cast<std::uint64_t>(bits_ >> 64);
    return static_cast<std::size_t>(lo * 0x9E3779B97F4A7C15ull ^ (hi + 0x632BE59BD9B4E019ull + (lo << 6) + (lo >> 2)));
  }

 private:
  static unsigned __int128 bias();
  unsigned __int128 bits_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

using Precision = long;
inline constexpr Precision kExact = LONG_MAX / 4;

inline Precision add_precision(Precision a, long b) {
  if (a >= kExact) return kExact;
  return a + b;
}

struct SeriesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class C>
class BasicSeries {
 public:
  using Coef = C;
  using Term = std::pair<Monomial, C>;

  BasicSeries() = default;
  explicit BasicSeries(VarTablePtr vars, Precision cutoff = kExact);

  static BasicSeries constant(VarTablePtr vars, const C& c, Precision cutoff = kExact);
  static BasicSeries monomial(VarTablePtr vars, std::span<const int> exps, const C& c,
                              Precision cutoff = kExact);
  static BasicSeries variable(VarTablePtr vars, std::string_view name, Precision cutoff = kExact);
  /// Builds from unsorted terms; zero coefficients and out-of-range terms are dropped.
  static BasicSeries from_terms(VarTablePtr vars, std::vector<Term> terms, Precision cutoff = kExact);

  const VarTablePtr& vars() const { return vars_; }
  Precision cutoff() const { return cutoff_; }
  bool exact() const { return cutoff_ >= kExact; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  std::vector<int> exponents(const Monomial& m) const;
  long series_weight(const Monomial& m) const;
  long sato_weight(const Monomial& m) const;
  C coefficient(std::span<const int> exps) const;

  /// Lowest series weight present, or the cutoff for a zero series.
  long order() const;
  /// Common Sato weight of every term, or nullopt when inhomogeneous. Zero series gives nullopt.
  std::optional<long> homogeneous_weight() const;

  BasicSeries truncated(Precision cutoff) const;
  /// Terms of exactly the given series weight (an exact polynomial).
  BasicSeries graded_part(long series_weight) const;

  BasicSeries& operator+=(const BasicSeries& o);
  BasicSeries& operator-=(const BasicSeries& o);
  BasicSeries& operator*=(const BasicSeries& o) { return *this = *this * o; }
  BasicSeries operator-() const;
  BasicSeries scaled(const C& c) const;
  /// Multiplies by a single monomial.
  BasicSeries shifted(std::span<const int> exps) const;

  friend BasicSeries operator+(BasicSeries a, const BasicSeries& b) { return a += b; }
  friend BasicSeries operator-(BasicSeries a, const BasicSeries& b) { return a -= b; }
  friend BasicSeries operator*(const BasicSeries& a, const BasicSeries& b) { return multiply(a, b); }

  BasicSeries pow(int n) const;
  BasicSeries derivative(std::string_view var) const;
  BasicSeries derivative(std::size_t var) const;
  /// Term-wise antiderivative; throws on an exponent of -1 in `var` (a residue).
  BasicSeries integral(std::string_view var) const;

  /// Multiplicative inverse of c*m*(1 + h): unique lowest-weight monomial with constant coefficient.
  BasicSeries inverse() const;
  /// n-th root of m^n*c*(1 + h); the leading coefficient must be an exact n-th power.
  /// branch k multiplies by zeta^k (only defined when the coefficient ring contains it).
  BasicSeries root(unsigned n, int branch = 0) const;
  /// Compositional inverse in the single series variable `var`: a = c*var + O(var^2).
  BasicSeries reversion(std::string_view var) const;

  /// Substitutes the given coefficient variable by a value (exact specialization).
  BasicSeries specialized(std::string_view var, const C& value) const;

  std::complex<double> evaluate(std::span<const std::complex<double>> values) const;

  /// True when every stored term is zero below the cutoff, i.e. the series is O(cutoff).
  bool vanishes() const { return terms_.empty(); }

  friend bool operator==(const BasicSeries& a, const BasicSeries& b) {
    return *a.vars_ == *b.vars_ && a.cutoff_ == b.cutoff_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

  static BasicSeries multiply(const BasicSeries& a, const BasicSeries& b);

 private:
  void normalize();
  void require_compatible(const BasicSeries& o, const char* op) const;

  VarTablePtr vars_;
  std::vector<Term> terms_;
  Precision cutoff_ = kExact;
};

using Series = BasicSeries<Rational>;
using ZSeries = BasicSeries<Eisenstein>;

/// Substitutes every variable of `f` that has an image; other variables are carried over
/// by name into `target` (which must contain them).
template <class C>
BasicSeries<C> substitute(const BasicSeries<C>& f, const VarTablePtr& target,
                          const std::vector<std::optional<BasicSeries<C>>>& images);

/// Re-expresses `f` over a table containing all of its variables.
template <class C>
BasicSeries<C> rebase(const BasicSeries<C>& f, const VarTablePtr& target);

ZSeries to_eisenstein(const Series& s);
/// Throws when any coefficient has a nonzero zeta part.
Series to_rational(const ZSeries& s);

/// Determinant by Laplace expansion with memoised minors; fine for n <= 10.
template <class C>
BasicSeries<C> determinant(const std::vector<std::vector<BasicSeries<C>>>& m);

extern template class BasicSeries<Rational>;
extern template class BasicSeries<Eisenstein>;

}  // namespace trigonal
