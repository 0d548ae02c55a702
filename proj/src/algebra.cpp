#include "mirrorsmith/algebra.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace mirrorsmith {

Algebra::Algebra(Field f, std::size_t d)
    : field(f), dim(d), labels(d), sc(d * d * d, Scalar::zero(f)), unit(vec_zero(f, d)) {
  for (std::size_t i = 0; i < d; ++i) labels[i] = "b" + std::to_string(i);
}

Vec Algebra::basis_product(std::size_t i, std::size_t j) const {
  return Vec(sc.begin() + (i * dim + j) * dim, sc.begin() + (i * dim + j + 1) * dim);
}

Vec Algebra::multiply(const Vec& x, const Vec& y) const {
  Vec r = vec_zero(field, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      if (y[j].is_zero()) continue;
      Scalar cxy = x[i] * y[j];
      const Scalar* row = &sc[(i * dim + j) * dim];
      for (std::size_t k = 0; k < dim; ++k)
        if (!row[k].is_zero()) r[k] += cxy * row[k];
    }
  }
  return r;
}

Vec Algebra::basis_vec(std::size_t i) const {
  Vec v = vec_zero(field, dim);
  v[i] = Scalar::one(field);
  return v;
}

Matrix Algebra::left_mult(const Vec& x) const {
  Matrix m(field, dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      if (x[i].is_zero()) continue;
      const Scalar* row = &sc[(i * dim + j) * dim];
      for (std::size_t k = 0; k < dim; ++k)
        if (!row[k].is_zero()) m.at(k, j) += x[i] * row[k];
    }
  }
  return m;
}

Matrix Algebra::right_mult(const Vec& x) const {
  Matrix m(field, dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      if (x[i].is_zero()) continue;
      const Scalar* row = &sc[(j * dim + i) * dim];
      for (std::size_t k = 0; k < dim; ++k)
        if (!row[k].is_zero()) m.at(k, j) += x[i] * row[k];
    }
  }
  return m;
}

bool Algebra::is_idempotent(const Vec& e) const { return multiply(e, e) == e; }

bool Algebra::is_unit_element(const Vec& x) const { return is_invertible(left_mult(x)); }

std::string Algebra::describe(const Vec& x) const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < dim; ++i) {
    if (x[i].is_zero()) continue;
    if (!first) os << " + ";
    os << x[i].str() << "*" << labels[i];
    first = false;
  }
  return first ? "0" : os.str();
}

AlgebraCheck check_algebra(const Algebra& a) {
  AlgebraCheck out;
  if (a.dim == 0) {
    out.ok = false;
    out.failures.push_back("zero-dimensional algebra");
    return out;
  }
  std::vector<Matrix> lmat, rmat;
  lmat.reserve(a.dim);
  rmat.reserve(a.dim);
  for (std::size_t i = 0; i < a.dim; ++i) {
    lmat.push_back(a.left_mult(a.basis_vec(i)));
    rmat.push_back(a.right_mult(a.basis_vec(i)));
  }
  // associativity  <=>  every left multiplication commutes with every right one
  for (std::size_t i = 0; i < a.dim && out.failures.size() < 8; ++i)
    for (std::size_t k = 0; k < a.dim; ++k)
      if (!(rmat[k] * lmat[i] == lmat[i] * rmat[k])) {
        out.failures.push_back("associativity fails around basis pair (" + a.labels[i] + "," +
                               a.labels[k] + ")");
        break;
      }
  for (std::size_t j = 0; j < a.dim; ++j) {
    Vec bj = a.basis_vec(j);
    if (a.multiply(a.unit, bj) != bj || a.multiply(bj, a.unit) != bj) {
      out.failures.push_back("unit law fails at basis " + a.labels[j]);
      break;
    }
  }
  out.ok = out.failures.empty();
  return out;
}

namespace {

// Intersection of kernels, one constraint block at a time against a shrinking
// candidate basis.
class KernelAccumulator {
 public:
  KernelAccumulator(Field f, std::size_t n) : k_(Matrix::identity(f, n)) {}

  void constrain(const Matrix& c) {
    if (k_.cols() == 0) return;
    Matrix ck = c * k_;
    std::vector<Vec> kb = kernel_basis(ck);
    Matrix nk(k_.field(), k_.rows(), kb.size());
    for (std::size_t j = 0; j < kb.size(); ++j) {
      Vec col = k_.apply(kb[j]);
      nk.set_col(j, col);
    }
    k_ = std::move(nk);
  }

  const Matrix& basis() const { return k_; }

 private:
  Matrix k_;
};

}  // namespace

std::vector<Vec> center_basis(const Algebra& a) {
  KernelAccumulator acc(a.field, a.dim);
  for (std::size_t i = 0; i < a.dim; ++i) {
    Vec b = a.basis_vec(i);
    acc.constrain(a.left_mult(b) - a.right_mult(b));
    if (acc.basis().cols() == 0) break;
  }
  std::vector<Vec> out;
  for (std::size_t j = 0; j < acc.basis().cols(); ++j) out.push_back(acc.basis().col(j));
  return out;
}

Matrix stack_cols(Field f, const std::vector<Vec>& cols) {
  std::size_t rows = cols.empty() ? 0 : cols[0].size();
  return Matrix::from_cols(f, cols, rows);
}

Vec Corner::to_corner(const Vec& in_a) const {
  Vec c = vec_zero(alg->field, alg->dim);
  const auto& piv = span.pivots();
  for (std::size_t r = 0; r < piv.size(); ++r) c[r] = in_a[piv[r]];
  return c;
}

Vec Corner::to_ambient(const Vec& in_corner) const { return incl.apply(in_corner); }

Corner corner(const AlgebraPtr& a, const Vec& e) {
  if (!a->is_idempotent(e)) throw Error("NotIdempotent", "corner at a non-idempotent element");
  Matrix le = a->left_mult(e), re = a->right_mult(e);
  Subspace span(a->field, a->dim);
  for (std::size_t j = 0; j < a->dim; ++j) span.insert(le.apply(re.col(j)));
  std::size_t d = span.dim();
  auto c = std::make_shared<Algebra>(a->field, d);
  Corner out{c, Matrix(a->field, a->dim, d), e, span};
  for (std::size_t j = 0; j < d; ++j) out.incl.set_col(j, span.basis()[j]);
  Algebra& alg = *c;
  for (std::size_t i = 0; i < d; ++i) alg.labels[i] = "c" + std::to_string(i);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Vec prod = a->multiply(span.basis()[i], span.basis()[j]);
      if (!span.contains(prod))
        throw Error("Internal", "corner span not multiplicatively closed");
      Vec cc = out.to_corner(prod);
      for (std::size_t k = 0; k < d; ++k) alg.c(i, j, k) = cc[k];
    }
  if (!span.contains(e)) throw Error("Internal", "idempotent outside its corner span");
  alg.unit = out.to_corner(e);
  return out;
}

AlgebraPtr opposite(const AlgebraPtr& a) {
  auto o = std::make_shared<Algebra>(a->field, a->dim);
  o->labels = a->labels;
  o->unit = a->unit;
  for (std::size_t i = 0; i < a->dim; ++i)
    for (std::size_t j = 0; j < a->dim; ++j)
      for (std::size_t k = 0; k < a->dim; ++k) o->c(i, j, k) = a->c(j, i, k);
  return o;
}

AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (!(a->field == b->field)) throw Error("MixedField", "tensor product over different fields");
  std::size_t da = a->dim, db = b->dim, d = da * db;
  auto t = std::make_shared<Algebra>(a->field, d);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j) t->labels[i * db + j] = a->labels[i] + "@" + b->labels[j];
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j)
      for (std::size_t k = 0; k < da; ++k)
        for (std::size_t l = 0; l < db; ++l) {
          // (b_i @ b_j)(b_k @ b_l) = (b_i b_k) @ (b_j b_l)
          Vec pa = a->basis_product(i, k);
          Vec pb = b->basis_product(j, l);
          std::size_t pair = (i * db + j) * d + (k * db + l);
          for (std::size_t m = 0; m < da; ++m) {
            if (pa[m].is_zero()) continue;
            for (std::size_t n = 0; n < db; ++n)
              if (!pb[n].is_zero()) t->sc[pair * d + m * db + n] = pa[m] * pb[n];
          }
        }
  for (std::size_t m = 0; m < da; ++m)
    for (std::size_t n = 0; n < db; ++n) t->unit[m * db + n] = a->unit[m] * b->unit[n];
  return t;
}

std::vector<Vec> radical_basis(const Algebra& a) {
  if (a.field.p != 0 && a.field.p <= a.dim)
    throw Error("UnsupportedCharacteristic",
                "radical computation needs characteristic 0 or p > dim (p=" +
                    std::to_string(a.field.p) + ", dim=" + std::to_string(a.dim) + ")");
  std::vector<Matrix> lmat;
  for (std::size_t i = 0; i < a.dim; ++i) lmat.push_back(a.left_mult(a.basis_vec(i)));
  // Gram matrix of (x, y) -> trace(L_x L_y); its kernel is the radical.
  Matrix gram(a.field, a.dim, a.dim);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = i; j < a.dim; ++j) {
      Scalar tr = Scalar::zero(a.field);
      for (std::size_t m = 0; m < a.dim; ++m)
        for (std::size_t l = 0; l < a.dim; ++l) tr += lmat[i].at(m, l) * lmat[j].at(l, m);
      gram.at(i, j) = tr;
      gram.at(j, i) = tr;
    }
  std::vector<Vec> rad = kernel_basis(gram);
  // sanity: the computed radical must be a nilpotent ideal
  Subspace cur = Subspace::from_vectors(a.field, a.dim, rad);
  for (std::size_t step = 0; step <= a.dim && cur.dim() > 0; ++step) {
    Subspace next(a.field, a.dim);
    for (const auto& x : rad)
      for (const auto& y : cur.basis()) next.insert(a.multiply(x, y));
    if (step == a.dim && next.dim() > 0)
      throw Error("Internal", "trace-form kernel is not nilpotent");
    cur = std::move(next);
  }
  return rad;
}

namespace {

// --- dense univariate polynomials over a field, for idempotent splitting ----

using Poly = std::vector<Scalar>;  // coefficient list, low degree first

std::size_t pdeg(const Poly& p) {
  std::size_t d = p.size();
  while (d > 0 && p[d - 1].is_zero()) --d;
  return d == 0 ? 0 : d - 1;
}
bool pzero(const Poly& p) {
  for (const auto& c : p)
    if (!c.is_zero()) return false;
  return true;
}
Poly ptrim(Poly p) {
  while (p.size() > 1 && p.back().is_zero()) p.pop_back();
  return p;
}
Poly pmul(Field f, const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, Scalar::zero(f));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return ptrim(r);
}
Poly padd(Field f, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), Scalar::zero(f));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return ptrim(r);
}
Poly pscale(const Poly& a, const Scalar& c) {
  Poly r = a;
  for (auto& x : r) x *= c;
  return ptrim(r);
}
// division with remainder by a nonzero divisor
std::pair<Poly, Poly> pdivmod(Field f, Poly a, const Poly& b) {
  a = ptrim(a);
  Poly bb = ptrim(b);
  std::size_t db = pdeg(bb);
  Scalar lead = bb[db];
  Poly q(a.size(), Scalar::zero(f));
  while (!pzero(a) && pdeg(a) >= db) {
    std::size_t da = pdeg(a);
    Scalar c = a[da] / lead;
    q[da - db] = c;
    for (std::size_t i = 0; i <= db; ++i) a[da - db + i] -= c * bb[i];
    a = ptrim(a);
    if (pdeg(a) == 0 && a[0].is_zero()) break;
  }
  return {ptrim(q), ptrim(a)};
}
Poly pmonic(Field f, Poly a) {
  a = ptrim(a);
  if (pzero(a)) return a;
  return pscale(a, a[pdeg(a)].inverse());
}
Poly pgcd(Field f, Poly a, Poly b) {
  a = ptrim(a);
  b = ptrim(b);
  while (!pzero(b)) {
    Poly r = pdivmod(f, a, b).second;
    a = b;
    b = r;
  }
  return pmonic(f, a);
}
// u*a + v*b = gcd(a,b) for coprime monic a,b normalized to gcd 1
struct Bezout { Poly u, v; };
Bezout pbezout(Field f, const Poly& a, const Poly& b) {
  Poly r0 = a, r1 = b;
  Poly u0{Scalar::one(f)}, u1{Scalar::zero(f)};
  Poly v0{Scalar::zero(f)}, v1{Scalar::one(f)};
  while (!pzero(r1)) {
    auto [q, r] = pdivmod(f, r0, r1);
    Poly nu = padd(f, u0, pscale(pmul(f, q, u1), -Scalar::one(f)));
    Poly nv = padd(f, v0, pscale(pmul(f, q, v1), -Scalar::one(f)));
    r0 = r1; r1 = r;
    u0 = u1; u1 = nu;
    v0 = v1; v1 = nv;
  }
  Scalar lead = r0[pdeg(r0)];
  return {pscale(u0, lead.inverse()), pscale(v0, lead.inverse())};
}
Scalar peval(Field f, const Poly& p, const Scalar& x) {
  Scalar r = Scalar::zero(f);
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

Vec poly_of_element(const Algebra& a, const Poly& p, const Vec& s) {
  Vec r = vec_zero(a.field, a.dim);
  Vec pw = a.unit;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p[i].is_zero()) r = vec_add(r, vec_scale(p[i], pw));
    if (i + 1 < p.size()) pw = a.multiply(pw, s);
  }
  return r;
}

Poly min_poly(const Algebra& a, const Vec& s) {
  Subspace span(a.field, a.dim);
  std::vector<Vec> powers;
  Vec pw = a.unit;
  for (;;) {
    if (span.contains(pw)) {
      Matrix cols = stack_cols(a.field, powers);
      auto sol = solve_linear(cols, pw);
      Poly m(powers.size() + 1, Scalar::zero(a.field));
      m[powers.size()] = Scalar::one(a.field);
      for (std::size_t i = 0; i < powers.size(); ++i) m[i] = -(*sol)[i];
      return m;
    }
    span.insert(pw);
    powers.push_back(pw);
    pw = a.multiply(pw, s);
  }
}

// try to write m = f*g with gcd(f,g)=1, both nonconstant
std::optional<std::pair<Poly, Poly>> coprime_split(Field f, const Poly& m) {
  std::size_t d = pdeg(m);
  if (d < 2) return std::nullopt;
  // split off the x^a part
  std::size_t a = 0;
  while (a < m.size() && m[a].is_zero()) ++a;
  if (a > 0 && a < d) {
    Poly xa(a + 1, Scalar::zero(f));
    xa[a] = Scalar::one(f);
    Poly g = pdivmod(f, m, xa).first;
    return std::make_pair(xa, g);
  }
  // root split
  std::vector<Scalar> candidates;
  if (f.p != 0) {
    std::uint32_t limit = std::min<std::uint32_t>(f.p, 4096);
    for (std::uint32_t r = 0; r < limit; ++r) candidates.push_back(Scalar::from_int(f, r));
  } else {
    for (std::int64_t r = 0; r <= static_cast<std::int64_t>(d) + 2; ++r) {
      candidates.push_back(Scalar::from_int(f, r));
      if (r > 0) candidates.push_back(Scalar::from_int(f, -r));
    }
    // integer roots divide constant/leading after clearing denominators
    BigInt c0_num = numerator(m[0].rat());
    BigInt lead_den = denominator(m[pdeg(m)].rat());
    BigInt bound = abs(c0_num * lead_den);
    for (BigInt dv = 1; dv * dv <= bound && dv < 100000; ++dv) {
      if (bound % dv != 0) continue;
      for (const BigInt& r : {dv, BigInt(bound / dv)}) {
        candidates.push_back(Scalar::rational(BigRat(r)));
        candidates.push_back(Scalar::rational(BigRat(-r)));
      }
    }
  }
  for (const auto& r : candidates) {
    if (!peval(f, m, r).is_zero()) continue;
    Poly lin{-r, Scalar::one(f)};
    Poly fac{Scalar::one(f)};
    Poly rest = m;
    for (;;) {
      auto [q, rem] = pdivmod(f, rest, lin);
      if (!pzero(rem)) break;
      fac = pmul(f, fac, lin);
      rest = q;
      if (pdeg(rest) == 0) break;
    }
    if (pdeg(rest) >= 1) return std::make_pair(fac, pmonic(f, rest));
  }
  return std::nullopt;
}

struct IdempotentSplitter {
  const Algebra& a;
  Field f;

  // candidate elements inside a corner algebra c
  std::vector<Vec> candidates(const Algebra& c) const {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < c.dim; ++i) out.push_back(c.basis_vec(i));
    for (std::size_t i = 0; i < c.dim; ++i)
      for (std::size_t j = i + 1; j < c.dim; ++j)
        out.push_back(vec_add(c.basis_vec(i), c.basis_vec(j)));
    std::mt19937_64 rng(0xA1B2u);
    for (int t = 0; t < 64; ++t) {
      Vec v = vec_zero(c.field, c.dim);
      for (std::size_t i = 0; i < c.dim; ++i) {
        std::int64_t r = static_cast<std::int64_t>(rng() % (c.field.p ? c.field.p : 7));
        v[i] = Scalar::from_int(c.field, c.field.p ? r : r - 3);
      }
      out.push_back(v);
    }
    return out;
  }

  // find a nontrivial idempotent in the unital algebra c, or conclude primitive
  std::optional<Vec> find_idempotent(const AlgebraPtr& c) const {
    if (c->dim <= 1) return std::nullopt;
    for (const Vec& s : candidates(*c)) {
      Poly m = min_poly(*c, s);
      auto split = coprime_split(c->field, m);
      if (!split) continue;
      auto [fp, gp] = *split;
      Bezout bz = pbezout(c->field, fp, gp);
      Vec e = poly_of_element(*c, pmul(c->field, bz.v, gp), s);  // 1 on the f-part
      if (!c->is_idempotent(e)) continue;
      if (vec_is_zero(e) || e == c->unit) continue;
      return e;
    }
    // exhaustive fallback over tiny prime-field corners
    if (c->field.p != 0) {
      double total = 1;
      for (std::size_t i = 0; i < c->dim; ++i) total *= c->field.p;
      if (total <= 65536) {
        std::vector<std::size_t> digits(c->dim, 0);
        for (;;) {
          Vec v = vec_zero(c->field, c->dim);
          for (std::size_t i = 0; i < c->dim; ++i)
            v[i] = Scalar::from_int(c->field, static_cast<std::int64_t>(digits[i]));
          if (c->is_idempotent(v) && !vec_is_zero(v) && !(v == c->unit)) return v;
          std::size_t i = 0;
          while (i < c->dim && ++digits[i] == c->field.p) digits[i++] = 0;
          if (i == c->dim) break;
        }
      }
    }
    return std::nullopt;
  }

  // complete list of primitive orthogonal idempotents of the (semisimple) algebra
  void split_from(const AlgebraPtr& s, const Vec& u, std::vector<Vec>& out) const {
    Corner cu = corner(s, u);
    auto inner = find_idempotent(cu.alg);
    if (!inner) {
      out.push_back(u);
      return;
    }
    Vec e1 = cu.to_ambient(*inner);
    Vec e2 = vec_sub(u, e1);
    split_from(s, e1, out);
    split_from(s, e2, out);
  }
};

}  // namespace

std::vector<Vec> primitive_idempotents(const Algebra& a) {
  auto ap = std::make_shared<Algebra>(a);
  std::vector<Vec> rad = radical_basis(a);
  Subspace radspan = Subspace::from_vectors(a.field, a.dim, rad);
  QuotientSpace q = quotient_space(radspan);
  std::size_t sd = q.coords.size();

  auto s = std::make_shared<Algebra>(a.field, sd);
  for (std::size_t i = 0; i < sd; ++i) {
    Vec bi = q.sect.col(i);
    for (std::size_t j = 0; j < sd; ++j) {
      Vec prod = a.multiply(bi, q.sect.col(j));
      Vec pc = q.proj.apply(prod);
      for (std::size_t k = 0; k < sd; ++k) s->c(i, j, k) = pc[k];
    }
  }
  s->unit = q.proj.apply(a.unit);

  std::vector<Vec> semis;
  IdempotentSplitter splitter{a, a.field};
  splitter.split_from(s, s->unit, semis);

  // lift to a one at a time, staying orthogonal to what is already lifted
  std::vector<Vec> lifted;
  Vec esum = vec_zero(a.field, a.dim);
  Scalar two = Scalar::from_int(a.field, 2), three = Scalar::from_int(a.field, 3);
  for (const Vec& ebar : semis) {
    Vec x = q.sect.apply(ebar);
    Vec comp = vec_sub(a.unit, esum);
    Matrix lc = a.left_mult(comp), rc = a.right_mult(comp);
    x = lc.apply(rc.apply(x));
    for (std::size_t it = 0; it <= a.dim + 2; ++it) {
      Vec x2 = a.multiply(x, x);
      if (x2 == x) break;
      Vec x3 = a.multiply(x2, x);
      x = vec_sub(vec_scale(three, x2), vec_scale(two, x3));
      if (it == a.dim + 2) throw Error("Internal", "idempotent lifting did not converge");
    }
    if (!a.is_idempotent(x)) throw Error("Internal", "lifted element is not idempotent");
    lifted.push_back(x);
    esum = vec_add(esum, x);
  }
  if (!(esum == a.unit)) throw Error("Internal", "lifted idempotents do not sum to the unit");
  std::sort(lifted.begin(), lifted.end(), [](const Vec& x, const Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == y[i]) continue;
      return x[i].str() < y[i].str();
    }
    return false;
  });
  return lifted;
}

ComboSearchResult invertible_combo(const std::vector<Matrix>& mats, std::uint64_t seed,
                                   std::size_t budget) {
  ComboSearchResult res;
  if (mats.empty()) {
    res.decided = true;
    return res;
  }
  Field f = mats[0].field();
  std::size_t m = mats.size(), n = mats[0].rows();
  auto combo = [&](const Vec& coeffs) {
    Matrix s(f, n, n);
    for (std::size_t t = 0; t < m; ++t)
      if (!coeffs[t].is_zero()) s = s + mats[t].scaled(coeffs[t]);
    return s;
  };
  auto try_coeffs = [&](const Vec& coeffs) -> bool {
    if (is_invertible(combo(coeffs))) {
      res.coeffs = coeffs;
      return true;
    }
    return false;
  };
  // single matrices first
  for (std::size_t t = 0; t < m; ++t) {
    Vec c = vec_zero(f, m);
    c[t] = Scalar::one(f);
    if (try_coeffs(c)) { res.decided = true; return res; }
  }
  // full enumeration when the space is small enough
  double total = 1;
  std::size_t base = f.p != 0 ? f.p : n + 1;  // grid 0..n suffices over Q (degree bound)
  for (std::size_t t = 0; t < m; ++t) {
    total *= base;
    if (total > static_cast<double>(budget) * 4) break;
  }
  if (total <= static_cast<double>(budget)) {
    std::vector<std::size_t> digits(m, 0);
    for (;;) {
      Vec c = vec_zero(f, m);
      bool nonzero = false;
      for (std::size_t t = 0; t < m; ++t) {
        c[t] = Scalar::from_int(f, static_cast<std::int64_t>(digits[t]));
        nonzero = nonzero || digits[t] != 0;
      }
      if (nonzero && try_coeffs(c)) { res.decided = true; return res; }
      std::size_t i = 0;
      while (i < m && ++digits[i] == base) digits[i++] = 0;
      if (i == m) break;
    }
    res.decided = true;  // exhaustive over F_p; full degree-bound grid over Q
    return res;
  }
  // seeded sampling, sound only for positive answers
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < 512; ++t) {
    Vec c = vec_zero(f, m);
    for (std::size_t i = 0; i < m; ++i) {
      std::int64_t r = static_cast<std::int64_t>(rng() % (f.p ? f.p : (2 * n + 1)));
      c[i] = Scalar::from_int(f, f.p ? r : r - static_cast<std::int64_t>(n));
    }
    if (try_coeffs(c)) { res.decided = true; return res; }
  }
  res.decided = false;
  return res;
}

SymmetricCheck is_symmetric_algebra(const Algebra& a) {
  Field f = a.field;
  std::size_t n = a.dim;
  // unknowns g[i*n+j] = B(b_i, b_j)
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Vec r = vec_zero(f, n * n);
      r[i * n + j] = Scalar::one(f);
      r[j * n + i] = -Scalar::one(f);
      rows.push_back(std::move(r));
    }
  // associativity: B(b_i b_j, b_k) = B(b_i, b_j b_k)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Vec pij = a.basis_product(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        Vec pjk = a.basis_product(j, k);
        Vec r = vec_zero(f, n * n);
        for (std::size_t l = 0; l < n; ++l) {
          if (!pij[l].is_zero()) r[l * n + k] += pij[l];
          if (!pjk[l].is_zero()) r[i * n + l] -= pjk[l];
        }
        if (!vec_is_zero(r)) rows.push_back(std::move(r));
      }
    }
  Matrix sys = Matrix::from_rows(f, rows, n * n);
  std::vector<Vec> sols = kernel_basis(sys);
  SymmetricCheck out;
  out.form_space_dim = sols.size();
  std::vector<Matrix> grams;
  for (const auto& s : sols) {
    Matrix g(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g.at(i, j) = s[i * n + j];
    grams.push_back(std::move(g));
  }
  ComboSearchResult combo = invertible_combo(grams, 0xA1B2u);
  out.exhausted = combo.decided;
  if (combo.coeffs) {
    Matrix g(f, n, n);
    for (std::size_t t = 0; t < grams.size(); ++t)
      if (!(*combo.coeffs)[t].is_zero()) g = g + grams[t].scaled((*combo.coeffs)[t]);
    out.symmetric = true;
    out.gram = g;
  }
  return out;
}

}  // namespace mirrorsmith
