#include "mirrorsmith/matrix.hpp"

#include <sstream>

namespace mirrorsmith {

Vec vec_zero(Field f, std::size_t n) { return Vec(n, Scalar::zero(f)); }

Vec vec_add(const Vec& a, const Vec& b) {
  Vec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  Vec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vec vec_scale(const Scalar& c, const Vec& a) {
  Vec r = a;
  for (auto& x : r) x *= c;
  return r;
}

bool vec_is_zero(const Vec& a) {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

Scalar dot(const Vec& a, const Vec& b) {
  Scalar s = Scalar::zero(a.empty() ? Field::rationals() : a[0].field());
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Matrix Matrix::identity(Field f, std::size_t n) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
  return m;
}

Matrix Matrix::from_rows(Field f, const std::vector<Vec>& rows, std::size_t cols) {
  Matrix m(f, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

Matrix Matrix::from_cols(Field f, const std::vector<Vec>& cols, std::size_t rows) {
  Matrix m(f, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw Error("ShapeMismatch", "matrix product shapes");
  Matrix r(field_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& x = at(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const Scalar& y = o.at(k, j);
        if (!y.is_zero()) r.at(i, j) += x * y;
      }
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  Matrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  Matrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& x : r.a_) x = -x;
  return r;
}

Matrix Matrix::scaled(const Scalar& c) const {
  Matrix r = *this;
  for (auto& x : r.a_) x *= c;
  return r;
}

Vec Matrix::apply(const Vec& v) const {
  if (v.size() != cols_) throw Error("ShapeMismatch", "matrix apply");
  Vec r = vec_zero(field_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && a_ == o.a_;
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

Vec Matrix::row(std::size_t i) const {
  return Vec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

Vec Matrix::col(std::size_t j) const {
  Vec v;
  v.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v.push_back(at(i, j));
  return v;
}

void Matrix::set_row(std::size_t i, const Vec& v) {
  for (std::size_t j = 0; j < cols_; ++j) at(i, j) = v[j];
}

void Matrix::set_col(std::size_t j, const Vec& v) {
  for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
}

void Matrix::paste(std::size_t i0, std::size_t j0, const Matrix& o) {
  for (std::size_t i = 0; i < o.rows_; ++i)
    for (std::size_t j = 0; j < o.cols_; ++j) at(i0 + i, j0 + j) = o.at(i, j);
}

Matrix Matrix::block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const {
  Matrix m(field_, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = at(i0 + i, j0 + j);
  return m;
}

std::string Matrix::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ";" : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j).str();
  }
  return os.str();
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  Matrix r(a.field(), a.rows(), a.cols() + b.cols());
  r.paste(0, 0, a);
  r.paste(0, a.cols(), b);
  return r;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  Matrix r(a.field(), a.rows() + b.rows(), a.cols());
  r.paste(0, 0, a);
  r.paste(a.rows(), 0, b);
  return r;
}

RrefResult rref(const Matrix& m) {
  RrefResult res{m, {}, 0};
  Matrix& r = res.r;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < m.cols() && lead < m.rows(); ++col) {
    std::size_t sel = lead;
    while (sel < m.rows() && r.at(sel, col).is_zero()) ++sel;
    if (sel == m.rows()) continue;
    if (sel != lead)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(r.at(sel, j), r.at(lead, j));
    Scalar inv = r.at(lead, col).inverse();
    for (std::size_t j = col; j < m.cols(); ++j) r.at(lead, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == lead) continue;
      Scalar c = r.at(i, col);
      if (c.is_zero()) continue;
      for (std::size_t j = col; j < m.cols(); ++j) r.at(i, j) -= c * r.at(lead, j);
    }
    res.pivots.push_back(col);
    ++lead;
  }
  res.rank = res.pivots.size();
  return res;
}

std::size_t rank(const Matrix& m) { return rref(m).rank; }

std::vector<Vec> kernel_basis(const Matrix& m) {
  RrefResult rr = rref(m);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto p : rr.pivots) is_piv[p] = true;
  std::vector<Vec> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    Vec v = vec_zero(m.field(), m.cols());
    v[f] = Scalar::one(m.field());
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) v[rr.pivots[i]] = -rr.r.at(i, f);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<Vec> solve_linear(const Matrix& m, const Vec& b) {
  Matrix aug = hstack(m, Matrix::from_cols(m.field(), {b}, m.rows()));
  RrefResult rr = rref(aug);
  for (std::size_t i = 0; i < rr.pivots.size(); ++i)
    if (rr.pivots[i] == m.cols()) return std::nullopt;  // pivot in RHS column
  Vec x = vec_zero(m.field(), m.cols());
  for (std::size_t i = 0; i < rr.pivots.size(); ++i) x[rr.pivots[i]] = rr.r.at(i, m.cols());
  return x;
}

bool is_invertible(const Matrix& m) {
  return m.rows() == m.cols() && rank(m) == m.rows();
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  std::size_t n = m.rows();
  RrefResult rr = rref(hstack(m, Matrix::identity(m.field(), n)));
  if (rr.rank < n || rr.pivots[n - 1] != n - 1) return std::nullopt;
  return rr.r.block(0, n, n, n);
}

Scalar determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error("ShapeMismatch", "determinant of non-square");
  Matrix a = m;
  std::size_t n = m.rows();
  Scalar det = Scalar::one(m.field());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && a.at(sel, col).is_zero()) ++sel;
    if (sel == n) return Scalar::zero(m.field());
    if (sel != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(sel, j), a.at(col, j));
      det = -det;
    }
    det *= a.at(col, col);
    Scalar inv = a.at(col, col).inverse();
    for (std::size_t i = col + 1; i < n; ++i) {
      Scalar c = a.at(i, col) * inv;
      if (c.is_zero()) continue;
      for (std::size_t j = col; j < n; ++j) a.at(i, j) -= c * a.at(col, j);
    }
  }
  return det;
}

bool Subspace::insert(const Vec& v) {
  Vec w = reduce(v);
  std::size_t piv = ambient_;
  for (std::size_t i = 0; i < ambient_; ++i)
    if (!w[i].is_zero()) { piv = i; break; }
  if (piv == ambient_) return false;
  Scalar inv = w[piv].inverse();
  for (auto& x : w) x *= inv;
  // keep existing rows reduced against the new one
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Scalar c = rows_[r][piv];
    if (!c.is_zero()) rows_[r] = vec_sub(rows_[r], vec_scale(c, w));
  }
  std::size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
  rows_.insert(rows_.begin() + pos, std::move(w));
  pivots_.insert(pivots_.begin() + pos, piv);
  return true;
}

Vec Subspace::reduce(const Vec& v) const {
  Vec w = v;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Scalar c = w[pivots_[r]];
    if (!c.is_zero()) w = vec_sub(w, vec_scale(c, rows_[r]));
  }
  return w;
}

bool Subspace::is_pivot(std::size_t coord) const {
  for (auto p : pivots_)
    if (p == coord) return true;
  return false;
}

Subspace Subspace::from_vectors(Field f, std::size_t ambient, const std::vector<Vec>& gens) {
  Subspace s(f, ambient);
  for (const auto& g : gens) s.insert(g);
  return s;
}

QuotientSpace quotient_space(const Subspace& sub) {
  Field f = sub.field();
  std::size_t n = sub.ambient();
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (!sub.is_pivot(i)) keep.push_back(i);
  QuotientSpace q{Matrix(f, keep.size(), n), Matrix(f, n, keep.size()), keep};
  // proj: reduce the unit vector, then read off kept coordinates
  for (std::size_t i = 0; i < n; ++i) {
    Vec e = vec_zero(f, n);
    e[i] = Scalar::one(f);
    Vec r = sub.reduce(e);
    for (std::size_t k = 0; k < keep.size(); ++k) q.proj.at(k, i) = r[keep[k]];
  }
  for (std::size_t k = 0; k < keep.size(); ++k) q.sect.at(keep[k], k) = Scalar::one(f);
  return q;
}

}  // namespace mirrorsmith
