#include "trigonal/series.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <tuple>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace trigonal {

// ---------------------------------------------------------------------------
// VariableTable / Monomial

VariableTable::VariableTable(std::vector<Variable> vars) : vars_(std::move(vars)) {
  if (vars_.size() > kMaxVars) throw std::invalid_argument("too many variables for a series table");
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    for (std::size_t j = i + 1; j < vars_.size(); ++j) {
      if (vars_[i].name == vars_[j].name) throw std::invalid_argument("duplicate variable " + vars_[i].name);
    }
    if (vars_[i].role == VarRole::series && vars_[i].weight <= 0) {
      throw std::invalid_argument("series variable " + vars_[i].name + " needs a positive weight");
    }
  }
}

std::optional<std::size_t> VariableTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t VariableTable::index_of(std::string_view name) const {
  auto i = find(name);
  if (!i) throw std::invalid_argument("unknown variable " + std::string(name));
  return *i;
}

VarTablePtr make_table(std::vector<Variable> vars) {
  return std::make_shared<const VariableTable>(std::move(vars));
}

unsigned __int128 Monomial::bias() {
  unsigned __int128 b = 0;
  for (int i = 0; i < 8; ++i) b |= static_cast<unsigned __int128>(0x8000) << (16 * i);
  return b;
}

Monomial Monomial::from(std::span<const int> exps) {
  if (exps.size() > VariableTable::kMaxVars) throw std::invalid_argument("exponent vector too long");
  Monomial m;
  for (std::size_t i = 0; i < exps.size(); ++i) m = m.with(i, exps[i]);
  return m;
}

Monomial Monomial::with(std::size_t i, int e) const {
  if (e < kMinExp || e > kMaxExp) throw SeriesError("exponent out of range");
  Monomial m = *this;
  const unsigned __int128 mask = static_cast<unsigned __int128>(0xFFFF) << (16 * i);
  m.bits_ = (m.bits_ & ~mask) |
            (static_cast<unsigned __int128>(static_cast<std::uint16_t>(e + 0x8000)) << (16 * i));
  return m;
}

// ---------------------------------------------------------------------------
// coefficient helpers

namespace {

Rational inverse_of(const Rational& q) {
  if (sgn(q) == 0) throw SeriesError("zero leading coefficient");
  return 1 / q;
}
Eisenstein inverse_of(const Eisenstein& e) {
  if (e.is_zero()) throw SeriesError("zero leading coefficient");
  return e.inverse();
}

Rational rational_as(const Rational& q, const Rational*) { return q; }
Eisenstein rational_as(const Rational& q, const Eisenstein*) { return Eisenstein(q); }

template <class C>
C from_rational(const Rational& q) {
  return rational_as(q, static_cast<const C*>(nullptr));
}

std::complex<double> as_complex(const Rational& q) { return q.get_d(); }
std::complex<double> as_complex(const Eisenstein& e) { return e.to_complex(); }

bool coef_root(const Rational& c, unsigned n, int branch, Rational& out) {
  if (!exact_root(c, n, out)) return false;
  int b = ((branch % 2) + 2) % 2;
  if (branch != 0) {
    if (n % 2 != 0 || b == 0) {
      if (branch % static_cast<int>(n) != 0) return false;
    } else {
      out = -out;
    }
  }
  return true;
}

bool coef_root(const Eisenstein& c, unsigned n, int branch, Eisenstein& out) {
  if (!c.is_rational()) return false;
  Rational r;
  if (!exact_root(c.a(), n, r)) return false;
  out = Eisenstein(r);
  if (branch != 0) {
    if (n % 3 == 0) {
      out *= Eisenstein::zeta_pow(branch);
    } else if (n % 2 == 0 && branch % 2 != 0) {
      out = -out;
    } else if (branch % static_cast<int>(n) != 0) {
      return false;
    }
  }
  return true;
}

Precision min_prec(Precision a, Precision b) { return std::min(a, b); }

Precision sum_prec(Precision a, long b) {
  if (a >= kExact || b >= kExact) return kExact;
  return std::min<Precision>(kExact, a + b);
}

}  // namespace

// ---------------------------------------------------------------------------
// BasicSeries

template <class C>
BasicSeries<C>::BasicSeries(VarTablePtr vars, Precision cutoff) : vars_(std::move(vars)), cutoff_(cutoff) {
  if (!vars_) throw std::invalid_argument("series needs a variable table");
}

template <class C>
BasicSeries<C> BasicSeries<C>::constant(VarTablePtr vars, const C& c, Precision cutoff) {
  BasicSeries s(std::move(vars), cutoff);
  s.terms_.emplace_back(Monomial(), c);
  s.normalize();
  return s;
}

template <class C>
BasicSeries<C> BasicSeries<C>::monomial(VarTablePtr vars, std::span<const int> exps, const C& c,
                                        Precision cutoff) {
  if (exps.size() != vars->size()) throw std::invalid_argument("exponent vector size mismatch");
  BasicSeries s(std::move(vars), cutoff);
  s.terms_.emplace_back(Monomial::from(exps), c);
  s.normalize();
  return s;
}

template <class C>
BasicSeries<C> BasicSeries<C>::variable(VarTablePtr vars, std::string_view name, Precision cutoff) {
  std::vector<int> e(vars->size(), 0);
  e[vars->index_of(name)] = 1;
  return monomial(std::move(vars), e, C(1), cutoff);
}

template <class C>
BasicSeries<C> BasicSeries<C>::from_terms(VarTablePtr vars, std::vector<Term> terms, Precision cutoff) {
  BasicSeries s(std::move(vars), cutoff);
  std::unordered_map<Monomial, C, MonomialHash> acc;
  acc.reserve(terms.size());
  for (auto& [m, c] : terms) acc[m] += c;
  s.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) s.terms_.emplace_back(m, std::move(c));
  s.normalize();
  return s;
}

template <class C>
std::vector<int> BasicSeries<C>::exponents(const Monomial& m) const {
  std::vector<int> e(vars_->size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = m[i];
  return e;
}

template <class C>
long BasicSeries<C>::series_weight(const Monomial& m) const {
  long w = 0;
  for (std::size_t i = 0; i < vars_->size(); ++i) {
    const auto& v = (*vars_)[i];
    if (v.role == VarRole::series) w += static_cast<long>(v.weight) * m[i];
  }
  return w;
}

template <class C>
long BasicSeries<C>::sato_weight(const Monomial& m) const {
  long w = 0;
  for (std::size_t i = 0; i < vars_->size(); ++i) w += static_cast<long>((*vars_)[i].weight) * m[i];
  return w;
}

template <class C>
C BasicSeries<C>::coefficient(std::span<const int> exps) const {
  Monomial m = Monomial::from(exps);
  for (const auto& [k, c] : terms_) {
    if (k == m) return c;
  }
  return C(0);
}

template <class C>
long BasicSeries<C>::order() const {
  if (terms_.empty()) return cutoff_;
  long o = LONG_MAX;
  for (const auto& t : terms_) o = std::min(o, series_weight(t.first));
  return o;
}

template <class C>
std::optional<long> BasicSeries<C>::homogeneous_weight() const {
  if (terms_.empty()) return std::nullopt;
  long w = sato_weight(terms_.front().first);
  for (const auto& t : terms_) {
    if (sato_weight(t.first) != w) return std::nullopt;
  }
  return w;
}

template <class C>
void BasicSeries<C>::normalize() {
  const std::size_t n = vars_->size();
  std::vector<std::pair<std::array<long, VariableTable::kMaxVars + 1>, std::size_t>> keys;
  keys.reserve(terms_.size());
  std::vector<Term> kept;
  kept.reserve(terms_.size());
  for (auto& t : terms_) {
    if (trigonal::is_zero(t.second)) continue;
    if (cutoff_ < kExact && series_weight(t.first) >= cutoff_) continue;
    std::array<long, VariableTable::kMaxVars + 1> k{};
    k[0] = sato_weight(t.first);
    for (std::size_t i = 0; i < n; ++i) k[i + 1] = t.first[i];
    keys.emplace_back(k, kept.size());
    kept.push_back(std::move(t));
  }
  std::sort(keys.begin(), keys.end());
  terms_.clear();
  terms_.reserve(kept.size());
  for (auto& [k, idx] : keys) terms_.push_back(std::move(kept[idx]));
}

template <class C>
void BasicSeries<C>::require_compatible(const BasicSeries& o, const char* op) const {
  if (!vars_ || !o.vars_ || !(*vars_ == *o.vars_)) {
    throw std::invalid_argument(std::string("incompatible variable tables in ") + op);
  }
}

template <class C>
BasicSeries<C> BasicSeries<C>::truncated(Precision cutoff) const {
  BasicSeries s = *this;
  if (cutoff < s.cutoff_) {
    s.cutoff_ = cutoff;
    std::erase_if(s.terms_, [&](const Term& t) { return s.series_weight(t.first) >= cutoff; });
  }
  return s;
}

template <class C>
BasicSeries<C> BasicSeries<C>::graded_part(long w) const {
  if (w >= cutoff_) throw SeriesError("graded part beyond cutoff");
  BasicSeries s(vars_, kExact);
  for (const auto& t : terms_) {
    if (series_weight(t.first) == w) s.terms_.push_back(t);
  }
  return s;
}

template <class C>
BasicSeries<C>& BasicSeries<C>::operator+=(const BasicSeries& o) {
  require_compatible(o, "add");
  std::unordered_map<Monomial, C, MonomialHash> acc;
  acc.reserve(terms_.size() + o.terms_.size());
  for (auto& t : terms_) acc.emplace(t.first, std::move(t.second));
  for (const auto& t : o.terms_) acc[t.first] += t.second;
  terms_.clear();
  for (auto& [m, c] : acc) terms_.emplace_back(m, std::move(c));
  cutoff_ = min_prec(cutoff_, o.cutoff_);
  normalize();
  return *this;
}

template <class C>
BasicSeries<C>& BasicSeries<C>::operator-=(const BasicSeries& o) {
  return *this += -o;
}

template <class C>
BasicSeries<C> BasicSeries<C>::operator-() const {
  BasicSeries s = *this;
  for (auto& t : s.terms_) t.second = -t.second;
  return s;
}

template <class C>
BasicSeries<C> BasicSeries<C>::scaled(const C& c) const {
  BasicSeries s = *this;
  for (auto& t : s.terms_) t.second *= c;
  s.normalize();
  return s;
}

template <class C>
BasicSeries<C> BasicSeries<C>::shifted(std::span<const int> exps) const {
  Monomial m = Monomial::from(exps);
  long dw = 0;
  for (std::size_t i = 0; i < vars_->size(); ++i) {
    if ((*vars_)[i].role == VarRole::series) dw += static_cast<long>((*vars_)[i].weight) * exps[i];
  }
  BasicSeries s(vars_, sum_prec(cutoff_, dw));
  s.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < vars_->size(); ++i) {
      long e = static_cast<long>(t.first[i]) + exps[i];
      if (e < Monomial::kMinExp || e > Monomial::kMaxExp) throw SeriesError("exponent overflow");
    }
    s.terms_.emplace_back(t.first + m, t.second);
  }
  s.normalize();
  return s;
}

template <class C>
BasicSeries<C> BasicSeries<C>::multiply(const BasicSeries& a, const BasicSeries& b) {
  a.require_compatible(b, "multiply");
  const Precision cut = min_prec(sum_prec(a.cutoff_, b.order()), sum_prec(b.cutoff_, a.order()));
  BasicSeries out(a.vars_, cut);
  if (a.terms_.empty() || b.terms_.empty()) return out;

  const std::size_t n = a.vars_->size();
  for (std::size_t i = 0; i < n; ++i) {
    int amin = INT_MAX, amax = INT_MIN, bmin = INT_MAX, bmax = INT_MIN;
    for (const auto& t : a.terms_) {
      amin = std::min(amin, t.first[i]);
      amax = std::max(amax, t.first[i]);
    }
    for (const auto& t : b.terms_) {
      bmin = std::min(bmin, t.first[i]);
      bmax = std::max(bmax, t.first[i]);
    }
    if (amin + bmin < Monomial::kMinExp || amax + bmax > Monomial::kMaxExp) {
      throw SeriesError("exponent overflow in multiplication");
    }
  }

  std::vector<std::pair<long, std::size_t>> bw(b.terms_.size());
  for (std::size_t j = 0; j < b.terms_.size(); ++j) bw[j] = {b.series_weight(b.terms_[j].first), j};
  std::sort(bw.begin(), bw.end());

  std::unordered_map<Monomial, C, MonomialHash> acc;
  acc.reserve(std::min<std::size_t>(a.terms_.size() * b.terms_.size(), 1u << 22));
  C tmp;
  for (const auto& [ma, ca] : a.terms_) {
    const long wa = a.series_weight(ma);
    for (const auto& [wb, j] : bw) {
      if (cut < kExact && wa + wb >= cut) break;
      const auto& [mb, cb] = b.terms_[j];
      tmp = ca;
      tmp *= cb;
      auto [it, inserted] = acc.try_emplace(ma + mb, tmp);
      if (!inserted) it->second += tmp;
    }
  }
  out.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) out.terms_.emplace_back(m, std::move(c));
  out.normalize();
  return out;
}

template <class C>
BasicSeries<C> BasicSeries<C>::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  BasicSeries result = constant(vars_, C(1));
  BasicSeries base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

template <class C>
BasicSeries<C> BasicSeries<C>::derivative(std::string_view var) const {
  return derivative(vars_->index_of(var));
}

template <class C>
BasicSeries<C> BasicSeries<C>::derivative(std::size_t i) const {
  const auto& v = (*vars_)[i];
  Precision cut = cutoff_;
  if (v.role == VarRole::series && cut < kExact) cut -= v.weight;
  BasicSeries s(vars_, cut);
  for (const auto& [m, c] : terms_) {
    int e = m[i];
    if (e == 0) continue;
    s.terms_.emplace_back(m.with(i, e - 1), c * C(e));
  }
  s.normalize();
  return s;
}

template <class C>
BasicSeries<C> BasicSeries<C>::integral(std::string_view var) const {
  const std::size_t i = vars_->index_of(var);
  const auto& v = (*vars_)[i];
  Precision cut = cutoff_;
  if (v.role == VarRole::series && cut < kExact) cut += v.weight;
  BasicSeries s(vars_, cut);
  for (const auto& [m, c] : terms_) {
    int e = m[i];
    if (e == -1) throw SeriesError("residue term in integration over " + v.name);
    C q = c;
    q *= from_rational<C>(Rational(1) / (e + 1));
    s.terms_.emplace_back(m.with(i, e + 1), std::move(q));
  }
  s.normalize();
  return s;
}

namespace {

// Splits a = c*m*(1 + h). Returns (c, m exponents, h).
template <class C>
std::tuple<C, std::vector<int>, BasicSeries<C>> split_leading(const BasicSeries<C>& a) {
  if (a.is_zero()) throw SeriesError("zero leading coefficient");
  const long ord = a.order();
  const typename BasicSeries<C>::Term* lead = nullptr;
  for (const auto& t : a.terms()) {
    if (a.series_weight(t.first) == ord) {
      if (lead) throw SeriesError("leading part is not a single monomial");
      lead = &t;
    }
  }
  const auto& vars = *a.vars();
  std::vector<int> m = a.exponents(lead->first);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].role == VarRole::coefficient && m[i] != 0) {
      throw SeriesError("leading coefficient is not a constant");
    }
  }
  const C c = lead->second;
  std::vector<int> neg(m.size());
  std::transform(m.begin(), m.end(), neg.begin(), [](int e) { return -e; });
  BasicSeries<C> h = a.shifted(neg).scaled(inverse_of(c));
  h -= BasicSeries<C>::constant(a.vars(), C(1));
  return {c, m, h};
}

// sum_k coef_k h^k, stopping once powers of h vanish under truncation.
template <class C>
BasicSeries<C> power_series_in(const BasicSeries<C>& h, const std::function<Rational(int)>& coef) {
  if (h.exact() && !h.is_zero()) throw SeriesError("infinite expansion of an exact series; truncate first");
  BasicSeries<C> result = BasicSeries<C>::constant(h.vars(), C(1), h.cutoff());
  if (h.is_zero()) return result;
  if (h.order() <= 0) throw SeriesError("non-positive order in power series argument");
  BasicSeries<C> p = BasicSeries<C>::constant(h.vars(), C(1));
  for (int k = 1;; ++k) {
    p = (p * h).truncated(h.cutoff());
    if (p.is_zero()) break;
    Rational ck = coef(k);
    if (sgn(ck) != 0) result += p.scaled(from_rational<C>(ck));
  }
  return result;
}

}  // namespace

template <class C>
BasicSeries<C> BasicSeries<C>::inverse() const {
  auto [c, m, h] = split_leading(*this);
  if (h.is_zero()) {
    // Pure monomial: the inverse is exact relative to the input precision.
    std::vector<int> neg(m.size());
    std::transform(m.begin(), m.end(), neg.begin(), [](int e) { return -e; });
    BasicSeries r = BasicSeries::monomial(vars_, neg, inverse_of(c), kExact);
    const long ord = order();
    r.cutoff_ = exact() ? kExact : cutoff_ - 2 * ord;
    r.normalize();
    return r;
  }
  BasicSeries r = power_series_in<C>(h, [](int k) { return Rational(k % 2 == 0 ? 1 : -1); });
  std::vector<int> neg(m.size());
  std::transform(m.begin(), m.end(), neg.begin(), [](int e) { return -e; });
  return r.shifted(neg).scaled(inverse_of(c));
}

template <class C>
BasicSeries<C> BasicSeries<C>::root(unsigned n, int branch) const {
  if (n == 0) throw std::invalid_argument("root of order 0");
  auto [c, m, h] = split_leading(*this);
  std::vector<int> mr(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] % static_cast<int>(n) != 0) throw SeriesError("leading monomial is not an n-th power");
    mr[i] = m[i] / static_cast<int>(n);
  }
  C cr;
  if (!coef_root(c, n, branch, cr)) throw SeriesError("leading coefficient has no exact n-th root on this branch");
  const Rational e(1, n);
  BasicSeries r = h.is_zero() ? BasicSeries::constant(vars_, C(1), h.cutoff())
                              : power_series_in<C>(h, [&e](int k) {
                                  Rational b(1);
                                  for (int j = 0; j < k; ++j) b *= (e - j) / (j + 1);
                                  return b;
                                });
  return r.shifted(mr).scaled(cr);
}

template <class C>
BasicSeries<C> BasicSeries<C>::reversion(std::string_view var) const {
  const std::size_t iv = vars_->index_of(var);
  const auto& vt = *vars_;
  if (vt[iv].role != VarRole::series) throw std::invalid_argument("reversion needs a series variable");
  for (const auto& [m, c] : terms_) {
    for (std::size_t i = 0; i < vt.size(); ++i) {
      if (i != iv && vt[i].role == VarRole::series && m[i] != 0) {
        throw std::invalid_argument("reversion is univariate");
      }
    }
    if (m[iv] <= 0) throw SeriesError("reversion needs a series without constant or polar terms");
  }
  std::vector<int> lin(vt.size(), 0);
  lin[iv] = 1;
  C c1 = coefficient(lin);
  if (trigonal::is_zero(c1)) throw SeriesError("vanishing linear coefficient");
  const C inv_c1 = inverse_of(c1);
  BasicSeries v = variable(vars_, vt[iv].name);
  BasicSeries higher = *this - v.scaled(c1);  // a - c1*v, order >= 2 in v
  BasicSeries b = v.scaled(inv_c1).truncated(cutoff_);
  const long steps = exact() ? throw SeriesError("reversion of an exact non-linear series needs a cutoff")
                             : cutoff_ / vt[iv].weight + 1;
  if (higher.is_zero()) return b;
  for (long k = 0; k < steps; ++k) {
    std::vector<std::optional<BasicSeries>> images(vt.size());
    images[iv] = b;
    BasicSeries comp = substitute(higher, vars_, images);
    BasicSeries next = (v.truncated(cutoff_) - comp).scaled(inv_c1);
    if (next == b) break;
    b = std::move(next);
  }
  return b;
}

template <class C>
BasicSeries<C> BasicSeries<C>::specialized(std::string_view var, const C& value) const {
  const std::size_t iv = vars_->index_of(var);
  if ((*vars_)[iv].role != VarRole::coefficient) throw std::invalid_argument("only coefficient variables can be specialized");
  std::map<int, C> powers;
  auto power = [&](int e) -> const C& {
    auto it = powers.find(e);
    if (it != powers.end()) return it->second;
    C p(1);
    C base = e < 0 ? inverse_of(value) : value;
    for (int k = 0; k < std::abs(e); ++k) p *= base;
    return powers.emplace(e, p).first->second;
  };
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    const int e = m[iv];
    if (e == 0) {
      out.emplace_back(m, c);
    } else {
      out.emplace_back(m.with(iv, 0), c * power(e));
    }
  }
  return from_terms(vars_, std::move(out), cutoff_);
}

template <class C>
std::complex<double> BasicSeries<C>::evaluate(std::span<const std::complex<double>> values) const {
  if (values.size() != vars_->size()) throw std::invalid_argument("evaluate: value count mismatch");
  std::complex<double> sum = 0;
  for (const auto& [m, c] : terms_) {
    std::complex<double> term = as_complex(c);
    for (std::size_t i = 0; i < values.size(); ++i) {
      int e = m[i];
      if (e != 0) term *= std::pow(values[i], e);
    }
    sum += term;
  }
  return sum;
}

template <class C>
std::string BasicSeries<C>::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string cs = trigonal::to_string(c);
    bool neg = !cs.empty() && cs[0] == '-' && cs.find_first_of("+-", 1) == std::string::npos;
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    if (neg) cs.erase(0, 1);
    std::string mono;
    for (std::size_t i = 0; i < vars_->size(); ++i) {
      int e = m[i];
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += (*vars_)[i].name;
      if (e != 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) {
      os << cs;
    } else if (cs == "1") {
      os << mono;
    } else {
      bool compound = cs.find_first_of("+-", 1) != std::string::npos;
      os << (compound ? "(" + cs + ")" : cs) << "*" << mono;
    }
    first = false;
  }
  if (first) os << "0";
  if (!exact()) os << " + O(" << cutoff_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// free functions

template <class C>
BasicSeries<C> substitute(const BasicSeries<C>& f, const VarTablePtr& target,
                          const std::vector<std::optional<BasicSeries<C>>>& images) {
  const auto& src = *f.vars();
  if (images.size() != src.size()) throw std::invalid_argument("substitute: image count mismatch");

  // Pass-through lanes and truncation bound of the omitted tail of f.
  std::vector<std::optional<std::size_t>> lane(src.size());
  Rational scale = -1;  // min over series variables of ord(image)/weight
  bool all_nonneg = true;
  for (std::size_t i = 0; i < src.size(); ++i) {
    long ord;
    int w = src[i].weight;
    if (images[i]) {
      if (!(*images[i]->vars() == *target)) throw std::invalid_argument("substitute: image over wrong table");
      ord = images[i]->order();
      if (ord < 0) all_nonneg = false;
    } else {
      auto found = target->find(src[i].name);
      if (!found) {
        // A variable absent from the target may be dropped if it never occurs.
        for (const auto& [m, c] : f.terms()) {
          if (m[i] != 0) throw std::invalid_argument("substitute: target lacks variable " + src[i].name);
        }
        continue;
      }
      lane[i] = *found;
      const auto& tv = (*target)[*lane[i]];
      if (tv.role != src[i].role) throw std::invalid_argument("substitute: role mismatch for " + src[i].name);
      ord = tv.role == VarRole::series ? tv.weight : 0;
      w = tv.role == VarRole::series ? src[i].weight : 0;
    }
    if (src[i].role == VarRole::series) {
      Rational r = Rational(ord) / w;
      if (scale < 0 || r < scale) scale = r;
    }
  }
  Precision bound = kExact;
  if (!f.exact()) {
    if (scale <= 0) throw SeriesError("substitution loses all precision");
    Rational b = scale * f.cutoff();
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    bound = q.get_si();
  }

  std::vector<std::map<int, BasicSeries<C>>> cache(src.size());
  std::function<const BasicSeries<C>&(std::size_t, int)> power = [&](std::size_t i, int e) -> const BasicSeries<C>& {
    auto& cm = cache[i];
    auto it = cm.find(e);
    if (it != cm.end()) return it->second;
    const BasicSeries<C>& img = *images[i];
    BasicSeries<C> p;
    if (e == 1) {
      p = img;
    } else if (e > 1) {
      p = power(i, e - 1) * img;
    } else if (e == -1) {
      p = img.inverse();
    } else {
      p = power(i, e + 1) * power(i, -1);
    }
    if (all_nonneg && bound < kExact) p = p.truncated(bound);
    return cm.emplace(e, std::move(p)).first->second;
  };

  std::vector<typename BasicSeries<C>::Term> acc_terms;
  BasicSeries<C> result(target, bound);
  std::unordered_map<Monomial, C, MonomialHash> acc;
  Precision cut = bound;
  // Group terms by their substituted-variable exponents to share products.
  std::map<std::vector<int>, std::vector<std::pair<Monomial, C>>> groups;
  for (const auto& [m, c] : f.terms()) {
    std::vector<int> key(src.size(), 0);
    std::vector<int> shift(target->size(), 0);
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (images[i]) key[i] = m[i];
      else if (lane[i]) shift[*lane[i]] += m[i];
    }
    groups[key].emplace_back(Monomial::from(shift), c);
  }
  for (const auto& [key, members] : groups) {
    BasicSeries<C> prod = BasicSeries<C>::constant(target, C(1));
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (key[i] != 0) prod = prod * power(i, key[i]);
    }
    if (all_nonneg && bound < kExact) prod = prod.truncated(bound);
    cut = std::min(cut, prod.cutoff() + 0);
    for (const auto& [shift, c] : members) {
      long dw = 0;
      for (std::size_t j = 0; j < target->size(); ++j) {
        if ((*target)[j].role == VarRole::series) dw += static_cast<long>((*target)[j].weight) * shift[j];
      }
      if (dw != 0) cut = std::min(cut, sum_prec(prod.cutoff(), dw));
      for (const auto& [pm, pc] : prod.terms()) {
        C v = pc;
        v *= c;
        auto [it, inserted] = acc.try_emplace(pm + shift, v);
        if (!inserted) it->second += v;
      }
    }
  }
  std::vector<typename BasicSeries<C>::Term> terms;
  terms.reserve(acc.size());
  for (auto& [m, c] : acc) terms.emplace_back(m, std::move(c));
  return BasicSeries<C>::from_terms(target, std::move(terms), cut);
}

template <class C>
BasicSeries<C> rebase(const BasicSeries<C>& f, const VarTablePtr& target) {
  std::vector<std::optional<BasicSeries<C>>> none(f.vars()->size());
  return substitute(f, target, none);
}

ZSeries to_eisenstein(const Series& s) {
  std::vector<ZSeries::Term> terms;
  terms.reserve(s.size());
  for (const auto& [m, c] : s.terms()) terms.emplace_back(m, Eisenstein(c));
  return ZSeries::from_terms(s.vars(), std::move(terms), s.cutoff());
}

Series to_rational(const ZSeries& s) {
  std::vector<Series::Term> terms;
  terms.reserve(s.size());
  for (const auto& [m, c] : s.terms()) {
    if (!c.is_rational()) throw SeriesError("coefficient outside Q: " + c.to_string());
    terms.emplace_back(m, c.a());
  }
  return Series::from_terms(s.vars(), std::move(terms), s.cutoff());
}

template <class C>
BasicSeries<C> determinant(const std::vector<std::vector<BasicSeries<C>>>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("empty determinant");
  if (n > 20) throw std::invalid_argument("determinant too large for minor expansion");
  for (const auto& row : m) {
    if (row.size() != n) throw std::invalid_argument("determinant of a non-square matrix");
  }
  const VarTablePtr& vars = m[0][0].vars();
  std::unordered_map<std::uint32_t, BasicSeries<C>> memo;
  std::function<BasicSeries<C>(std::uint32_t)> minor = [&](std::uint32_t cols) -> BasicSeries<C> {
    const int k = static_cast<int>(n) - std::popcount(cols);
    if (cols == 0) return BasicSeries<C>::constant(vars, C(1));
    auto it = memo.find(cols);
    if (it != memo.end()) return it->second;
    BasicSeries<C> acc(vars);
    int sign_pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(cols & (1u << j))) continue;
      if (!m[k][j].is_zero() || !m[k][j].exact()) {
        BasicSeries<C> term = m[k][j] * minor(cols & ~(1u << j));
        if (sign_pos % 2 == 0) acc += term;
        else acc -= term;
      }
      ++sign_pos;
    }
    memo.emplace(cols, acc);
    return acc;
  };
  return minor((n == 32 ? 0xFFFFFFFFu : ((1u << n) - 1)));
}

template class BasicSeries<Rational>;
template class BasicSeries<Eisenstein>;
template Series substitute(const Series&, const VarTablePtr&, const std::vector<std::optional<Series>>&);
template ZSeries substitute(const ZSeries&, const VarTablePtr&, const std::vector<std::optional<ZSeries>>&);
template Series rebase(const Series&, const VarTablePtr&);
template ZSeries rebase(const ZSeries&, const VarTablePtr&);
template Series determinant(const std::vector<std::vector<Series>>&);
template ZSeries determinant(const std::vector<std::vector<ZSeries>>&);

}  // namespace trigonal
