#pragma once

#include <cstddef>
#include <vector>

#include "riesz/rational.hpp"

namespace riesz {

// Dense row-major matrix over Z. Degenerate shapes (0 rows or 0 columns) are
// allowed; they show up naturally as presentations of the zero subgroup.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {}

  static IntegerMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  IntegerMatrix transposed() const;

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
  friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> a_;
};

// Decomposition a = u * s * v with u, v unimodular and s diagonal, the
// diagonal nonnegative with each entry dividing the next. The inverses are
// tracked through the elementary operations, so membership and solving reduce
// to divisibility tests against the diagonal.
struct SmithResult {
  IntegerMatrix u, s, v, u_inv, v_inv;
  std::size_t rank = 0;

  std::vector<Int> invariant_factors() const;  // the nonzero diagonal
};

// Elimination uses minimal-absolute-value pivoting to limit entry growth; no
// modular shortcuts, every step is an exact unimodular operation.
SmithResult smith_normal_form(const IntegerMatrix& a);

// Bareiss fraction-free elimination; square matrices only.
Int determinant(const IntegerMatrix& a);

}  // namespace riesz
