#include "mirrorsmith/smith.hpp"

#include <sstream>

namespace mirrorsmith {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  IntMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if (at(i, k) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
    }
  return r;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ";" : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j).str();
  }
  return os.str();
}

std::vector<BigInt> SmithResult::invariant_factors() const {
  std::vector<BigInt> f;
  std::size_t n = std::min(d.rows(), d.cols());
  for (std::size_t i = 0; i < n; ++i)
    if (d.at(i, i) != 0) f.push_back(d.at(i, i));
  return f;
}

namespace {

void row_swap(IntMatrix& m, IntMatrix& l, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
  for (std::size_t j = 0; j < l.cols(); ++j) std::swap(l.at(a, j), l.at(b, j));
}

void col_swap(IntMatrix& m, IntMatrix& r, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
  for (std::size_t i = 0; i < r.rows(); ++i) std::swap(r.at(i, a), r.at(i, b));
}

// row a -= q * row b
void row_axpy(IntMatrix& m, IntMatrix& l, std::size_t a, std::size_t b, const BigInt& q) {
  for (std::size_t j = 0; j < m.cols(); ++j) m.at(a, j) -= q * m.at(b, j);
  for (std::size_t j = 0; j < l.cols(); ++j) l.at(a, j) -= q * l.at(b, j);
}

void col_axpy(IntMatrix& m, IntMatrix& r, std::size_t a, std::size_t b, const BigInt& q) {
  for (std::size_t i = 0; i < m.rows(); ++i) m.at(i, a) -= q * m.at(i, b);
  for (std::size_t i = 0; i < r.rows(); ++i) r.at(i, a) -= q * r.at(i, b);
}

void row_negate(IntMatrix& m, IntMatrix& l, std::size_t a) {
  for (std::size_t j = 0; j < m.cols(); ++j) m.at(a, j) = -m.at(a, j);
  for (std::size_t j = 0; j < l.cols(); ++j) l.at(a, j) = -l.at(a, j);
}

}  // namespace

SmithResult smith_normal_form(const IntMatrix& input) {
  IntMatrix m = input;
  IntMatrix l = IntMatrix::identity(m.rows());
  IntMatrix r = IntMatrix::identity(m.cols());
  std::size_t n = std::min(m.rows(), m.cols());

  for (std::size_t t = 0; t < n; ++t) {
    // find a nonzero entry of minimal absolute value in the trailing block
    std::size_t pi = t, pj = t;
    bool found = false;
    BigInt best;
    for (std::size_t i = t; i < m.rows(); ++i)
      for (std::size_t j = t; j < m.cols(); ++j) {
        if (m.at(i, j) == 0) continue;
        BigInt v = abs(m.at(i, j));
        if (!found || v < best) { found = true; best = v; pi = i; pj = j; }
      }
    if (!found) break;
    if (pi != t) row_swap(m, l, t, pi);
    if (pj != t) col_swap(m, r, t, pj);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m.rows(); ++i) {
        if (m.at(i, t) == 0) continue;
        BigInt q = m.at(i, t) / m.at(t, t);
        row_axpy(m, l, i, t, q);
        if (m.at(i, t) != 0) { row_swap(m, l, t, i); clean = false; }
      }
      for (std::size_t j = t + 1; j < m.cols(); ++j) {
        if (m.at(t, j) == 0) continue;
        BigInt q = m.at(t, j) / m.at(t, t);
        col_axpy(m, r, j, t, q);
        if (m.at(t, j) != 0) { col_swap(m, r, t, j); clean = false; }
      }
      if (!clean) continue;
      // pivot must divide every entry of the trailing block
      bool divides = true;
      for (std::size_t i = t + 1; i < m.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < m.cols() && divides; ++j)
          if (m.at(i, j) % m.at(t, t) != 0) {
            row_axpy(m, l, t, i, BigInt(-1));  // fold offending row into pivot row
            divides = false;
          }
      if (divides) break;
    }
    if (m.at(t, t) < 0) row_negate(m, l, t);
  }

  SmithResult res{m, l, r};
  return res;
}

BigInt int_determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw Error("ShapeMismatch", "determinant of non-square");
  SmithResult s = smith_normal_form(m);
  BigInt det = 1;
  for (std::size_t i = 0; i < m.rows(); ++i) det *= s.d.at(i, i);
  // determinant up to sign of the unimodular transforms; recover the sign by
  // computing det(left) and det(right) as +-1 via fraction-free elimination
  auto sign_det = [](const IntMatrix& u) {
    IntMatrix a = u;
    int sign = 1;
    std::size_t n = a.rows();
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t sel = c;
      // use gcd-style elimination to stay exact
      for (;;) {
        sel = c;
        while (sel < n && a.at(sel, c) == 0) ++sel;
        if (sel >= n) return 0;
        if (sel != c) {
          for (std::size_t j = 0; j < n; ++j) std::swap(a.at(sel, j), a.at(c, j));
          sign = -sign;
        }
        bool done = true;
        for (std::size_t i = c + 1; i < n; ++i) {
          if (a.at(i, c) == 0) continue;
          BigInt q = a.at(i, c) / a.at(c, c);
          for (std::size_t j = 0; j < n; ++j) a.at(i, j) -= q * a.at(c, j);
          if (a.at(i, c) != 0) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(i, j), a.at(c, j));
            sign = -sign;
            done = false;
          }
        }
        if (done) break;
      }
    }
    BigInt p = 1;
    for (std::size_t i = 0; i < n; ++i) p *= a.at(i, i);
    return p > 0 ? sign : -sign;
  };
  int s1 = sign_det(s.left), s2 = sign_det(s.right);
  return det * s1 * s2;
}

bool in_row_lattice(const IntMatrix& m, const std::vector<BigInt>& t) {
  // x^T m = t^T  <=>  m^T x = t; with m^T = L^-1 D R^-1 ... use SNF of m^T.
  IntMatrix mt(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mt.at(j, i) = m.at(i, j);
  SmithResult s = smith_normal_form(mt);
  // m^T x = t  <=>  D (R^-1... ) solve via: left * m^T * right = D.
  // m^T = left^-1 D right^-1, so m^T x = t <=> D (right^-1 x) = left t.
  std::vector<BigInt> lt(mt.rows());
  for (std::size_t i = 0; i < mt.rows(); ++i)
    for (std::size_t j = 0; j < mt.rows(); ++j) lt[i] += s.left.at(i, j) * t[j];
  std::size_t n = std::min(mt.rows(), mt.cols());
  for (std::size_t i = 0; i < mt.rows(); ++i) {
    BigInt di = i < n ? s.d.at(i, i) : BigInt(0);
    if (di == 0) {
      if (lt[i] != 0) return false;
    } else if (lt[i] % di != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace mirrorsmith
