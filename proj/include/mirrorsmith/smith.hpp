#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mirrorsmith/field.hpp"

namespace mirrorsmith {

// Dense integer matrix with arbitrary-precision entries (transform products
// can outgrow machine words even when the input is small).
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const BigInt& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  IntMatrix operator*(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const = default;
  std::string str() const;

 private:
  std::size_t rows_, cols_;
  std::vector<BigInt> a_;
};

struct SmithResult {
  IntMatrix d;            // diagonal, nonnegative, d_i | d_{i+1}
  IntMatrix left, right;  // unimodular transforms, left * input * right == d
  std::vector<BigInt> invariant_factors() const;
};

SmithResult smith_normal_form(const IntMatrix& m);

BigInt int_determinant(const IntMatrix& m);

// One integer solution x of x^T m = t^T (t in the row lattice of m), if any.
bool in_row_lattice(const IntMatrix& m, const std::vector<BigInt>& t);

}  // namespace mirrorsmith
