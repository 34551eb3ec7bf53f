#include "trigonal/linalg.hpp"

#include <stdexcept>

namespace trigonal {

Echelon rref(QMatrix m, std::size_t cols) {
  Echelon e;
  e.cols = cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && sgn(m[p][c]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    const Rational inv = 1 / m[r][c];
    for (std::size_t k = c; k < m[r].size(); ++k) m[r][k] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t k = c; k < m[i].size(); ++k) {
        if (sgn(m[r][k]) != 0) m[i][k] -= f * m[r][k];
      }
    }
    e.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  e.rows = std::move(m);
  return e;
}

std::size_t rank(const QMatrix& m, std::size_t cols) { return rref(m, cols).pivots.size(); }

std::vector<QVector> nullspace(const QMatrix& m, std::size_t cols) {
  Echelon e = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    QVector v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.rows[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<SolveResult> solve(const QMatrix& m, std::size_t cols, const std::vector<QVector>& rhs) {
  QMatrix aug = m;
  for (std::size_t i = 0; i < aug.size(); ++i) {
    if (aug[i].size() != cols) throw std::invalid_argument("solve: ragged matrix");
    for (const auto& b : rhs) {
      if (b.size() != m.size()) throw std::invalid_argument("solve: right-hand side size mismatch");
      aug[i].push_back(b[i]);
    }
  }
  // Eliminate on the coefficient columns only; augmented columns follow along.
  Echelon e = rref(std::move(aug), cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < cols; ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }

  // Rows past the rank are zero on the left; they were dropped by rref only if entirely zero.
  std::vector<SolveResult> out(rhs.size());
  for (std::size_t k = 0; k < rhs.size(); ++k) {
    SolveResult& s = out[k];
    s.rank = e.pivots.size();
    s.free_columns = free_cols;
    s.consistent = true;
    s.particular.assign(cols, Rational(0));
    for (std::size_t i = 0; i < e.pivots.size(); ++i) s.particular[e.pivots[i]] = e.rows[i][cols + k];
  }
  // Inconsistency shows up as rows with zero left part and nonzero right part.
  // rref only pivots on the first `cols` columns, so recheck the full system.
  for (std::size_t k = 0; k < rhs.size(); ++k) {
    for (std::size_t i = 0; i < m.size() && out[k].consistent; ++i) {
      Rational acc = 0;
      for (std::size_t c = 0; c < cols; ++c) {
        if (sgn(m[i][c]) != 0 && sgn(out[k].particular[c]) != 0) acc += m[i][c] * out[k].particular[c];
      }
      if (acc != rhs[k][i]) out[k].consistent = false;
    }
  }
  return out;
}

}  // namespace trigonal
