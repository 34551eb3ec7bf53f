#pragma once

// Dense exact linear algebra over Q, sized for ansatz solves (hundreds of unknowns).

#include <optional>
#include <vector>

#include "trigonal/rational.hpp"

namespace trigonal {

using QMatrix = std::vector<std::vector<Rational>>;
using QVector = std::vector<Rational>;

struct Echelon {
  QMatrix rows;                  // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;  // pivot column of each row
  std::size_t cols = 0;
};

Echelon rref(QMatrix m, std::size_t cols);

std::size_t rank(const QMatrix& m, std::size_t cols);

/// Basis of {v : m v = 0}.
std::vector<QVector> nullspace(const QMatrix& m, std::size_t cols);

struct SolveResult {
  bool consistent = false;
  QVector particular;                 // free variables set to zero
  std::vector<std::size_t> free_columns;
  std::size_t rank = 0;
};

/// Solves m x = b for every right-hand side at once (columns of `rhs`).
/// Each result shares the rank and free-column list.
std::vector<SolveResult> solve(const QMatrix& m, std::size_t cols, const std::vector<QVector>& rhs);

}  // namespace trigonal
