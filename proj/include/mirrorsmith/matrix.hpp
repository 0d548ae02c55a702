#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mirrorsmith/field.hpp"

namespace mirrorsmith {

using Vec = std::vector<Scalar>;

Vec vec_zero(Field f, std::size_t n);
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Scalar& c, const Vec& a);
bool vec_is_zero(const Vec& a);
Scalar dot(const Vec& a, const Vec& b);

// Dense matrix, row-major, single field for every entry.
class Matrix {
 public:
  Matrix() : field_(Field::rationals()), rows_(0), cols_(0) {}
  Matrix(Field f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), a_(rows * cols, Scalar::zero(f)) {}

  static Matrix identity(Field f, std::size_t n);
  static Matrix from_rows(Field f, const std::vector<Vec>& rows, std::size_t cols);
  static Matrix from_cols(Field f, const std::vector<Vec>& cols, std::size_t rows);

  Field field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  Matrix scaled(const Scalar& c) const;
  Vec apply(const Vec& v) const;  // column-vector convention
  Matrix transpose() const;
  bool operator==(const Matrix& o) const;
  bool is_zero() const;

  Vec row(std::size_t i) const;
  Vec col(std::size_t j) const;
  void set_row(std::size_t i, const Vec& v);
  void set_col(std::size_t j, const Vec& v);

  // Block assembly: copies o into this with top-left corner at (i0, j0).
  void paste(std::size_t i0, std::size_t j0, const Matrix& o);
  Matrix block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const;

  std::string str() const;

 private:
  Field field_;
  std::size_t rows_, cols_;
  std::vector<Scalar> a_;
};

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);

struct RrefResult {
  Matrix r;                        // reduced row echelon form
  std::vector<std::size_t> pivots; // pivot column per pivot row
  std::size_t rank;
};

// Gauss-Jordan with first-nonzero pivoting; deterministic for fixed input.
RrefResult rref(const Matrix& m);

std::size_t rank(const Matrix& m);

// Canonical kernel basis: one vector per free column f (ascending), with
// coordinate 1 at f and -r[i][f] at the i-th pivot column.
std::vector<Vec> kernel_basis(const Matrix& m);

// One solution of m x = b with free coordinates set to zero, if consistent.
std::optional<Vec> solve_linear(const Matrix& m, const Vec& b);

bool is_invertible(const Matrix& m);
std::optional<Matrix> inverse(const Matrix& m);
Scalar determinant(const Matrix& m);

// Row space in reduced echelon form; supports membership/reduction queries.
class Subspace {
 public:
  Subspace(Field f, std::size_t ambient) : field_(f), ambient_(ambient) {}

  Field field() const { return field_; }
  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<Vec>& basis() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  // Returns true if v enlarged the span.
  bool insert(const Vec& v);
  // v minus its projection onto the span: zero iff v in span.
  Vec reduce(const Vec& v) const;
  bool contains(const Vec& v) const { return vec_is_zero(reduce(v)); }
  bool is_pivot(std::size_t coord) const;

  static Subspace from_vectors(Field f, std::size_t ambient, const std::vector<Vec>& gens);

 private:
  Field field_;
  std::size_t ambient_;
  std::vector<Vec> rows_;             // reduced echelon, ascending pivots
  std::vector<std::size_t> pivots_;
};

// Coordinates for the quotient ambient/sub: quotient basis = classes of the
// non-pivot unit vectors. proj is (qdim x ambient), sect is (ambient x qdim),
// proj*sect = id.
struct QuotientSpace {
  Matrix proj;
  Matrix sect;
  std::vector<std::size_t> coords;  // ambient coordinates kept
};
QuotientSpace quotient_space(const Subspace& sub);

}  // namespace mirrorsmith
