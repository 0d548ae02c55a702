#include "mirrorsmith/homotopy.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace mirrorsmith {

namespace {

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (!(a->field == b->field) || a->dim != b->dim) return false;
  if (!(a->unit == b->unit)) return false;
  for (std::size_t i = 0; i < a->sc.size(); ++i)
    if (a->sc[i] != b->sc[i]) return false;
  return true;
}

Module zero_module(const AlgebraPtr& a) {
  Module m;
  m.alg = a;
  m.dim = 0;
  m.action.assign(a->dim, Matrix(a->field, 0, 0));
  return m;
}

// Coordinates of v (in the span) over the reduced echelon basis of the span.
Vec coords_in(const Subspace& span, const Vec& v) {
  Vec c;
  c.reserve(span.dim());
  for (std::size_t p : span.pivots()) c.push_back(v[p]);
  return c;
}

// Row-major flattening of a matrix into a vector.
Vec flatten(const Matrix& m) {
  Vec out;
  out.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.at(i, j));
  return out;
}

std::vector<std::size_t> seq_offsets(const AddBasis& ab, const std::vector<std::size_t>& seq) {
  std::vector<std::size_t> off(seq.size() + 1, 0);
  for (std::size_t c = 0; c < seq.size(); ++c) off[c + 1] = off[c] + ab.projs[seq[c]].dim;
  return off;
}

// Drops zero terms at both ends; an all-zero complex becomes empty.
Complex normalize_range(Complex x) {
  std::size_t lead = 0;
  while (lead < x.terms.size() && x.terms[lead].dim == 0) ++lead;
  if (lead == x.terms.size()) {
    x.lo = 0;
    x.terms.clear();
    x.diffs.clear();
    x.seqs.clear();
    return x;
  }
  std::size_t tail = x.terms.size();
  while (tail > lead && x.terms[tail - 1].dim == 0) --tail;
  if (lead > 0 || tail < x.terms.size()) {
    x.lo += static_cast<int>(lead);
    x.terms = std::vector<Module>(x.terms.begin() + lead, x.terms.begin() + tail);
    if (!x.diffs.empty())
      x.diffs = std::vector<Matrix>(x.diffs.begin() + lead,
                                    x.diffs.begin() + (tail - 1));
    if (!x.seqs.empty())
      x.seqs = std::vector<std::vector<std::size_t>>(x.seqs.begin() + lead,
                                                     x.seqs.begin() + tail);
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// AddBasis
// ---------------------------------------------------------------------------

AddBasisPtr make_add_basis(const AlgebraPtr& a, const std::vector<Vec>& idems) {
  if (idems.empty()) throw Error("BadIdempotent", "empty idempotent family");
  Vec sum = vec_zero(a->field, a->dim);
  for (std::size_t i = 0; i < idems.size(); ++i) {
    if (!a->is_idempotent(idems[i]))
      throw Error("BadIdempotent", "family member is not idempotent");
    for (std::size_t j = 0; j < idems.size(); ++j) {
      if (i == j) continue;
      if (!vec_is_zero(a->multiply(idems[i], idems[j])))
        throw Error("BadIdempotent", "family is not orthogonal");
    }
    sum = vec_add(sum, idems[i]);
  }
  if (!(sum == a->unit))
    throw Error("BadIdempotent", "family does not sum to the unit");

  auto ab = std::make_shared<AddBasis>();
  ab->alg = a;
  ab->idems = idems;
  std::size_t r = idems.size();
  for (std::size_t j = 0; j < r; ++j) {
    Matrix rm = a->right_mult(idems[j]);
    std::vector<Vec> cols;
    for (std::size_t c = 0; c < a->dim; ++c) cols.push_back(rm.col(c));
    Subspace span = Subspace::from_vectors(a->field, a->dim, cols);
    ab->proj_spans.push_back(span);
    ab->projs.push_back(submodule(regular_module(a), span));
  }
  ab->corner.assign(r, std::vector<std::vector<Vec>>(r));
  ab->block.assign(r, std::vector<std::vector<Matrix>>(r));
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<Vec> gens;
      for (std::size_t k = 0; k < a->dim; ++k)
        gens.push_back(a->multiply(a->multiply(idems[j], a->basis_vec(k)), idems[i]));
      Subspace sp = Subspace::from_vectors(a->field, a->dim, gens);
      ab->corner[j][i] = sp.basis();
      for (const Vec& x : ab->corner[j][i]) {
        // right multiplication by x as a module map Ae_j -> Ae_i
        Matrix mat(a->field, ab->projs[i].dim, ab->projs[j].dim);
        for (std::size_t c = 0; c < ab->projs[j].dim; ++c) {
          Vec w = a->multiply(ab->proj_spans[j].basis()[c], x);
          mat.set_col(c, coords_in(ab->proj_spans[i], w));
        }
        ab->block[j][i].push_back(std::move(mat));
      }
    }
  return ab;
}

// ---------------------------------------------------------------------------
// Complex basics
// ---------------------------------------------------------------------------

std::size_t Complex::dim_at(int n) const { return in_range(n) ? terms[n - lo].dim : 0; }

Module Complex::term(int n) const {
  if (in_range(n)) return terms[n - lo];
  return zero_module(alg);
}

Matrix Complex::diff(int n) const {
  if (!empty() && n >= lo && n < hi()) return diffs[n - lo];
  return Matrix(alg->field, dim_at(n + 1), dim_at(n));
}

bool Complex::annotated() const { return add != nullptr && seqs.size() == terms.size(); }

std::vector<std::size_t> Complex::seq_at(int n) const {
  if (annotated() && in_range(n)) return seqs[n - lo];
  return {};
}

std::size_t Complex::total_dim() const {
  std::size_t d = 0;
  for (const Module& t : terms) d += t.dim;
  return d;
}

ComplexCheck check_complex(const Complex& x) {
  if (!x.alg) return {false, "missing algebra"};
  if (!x.diffs.empty() && x.diffs.size() + 1 != x.terms.size())
    return {false, "differential count does not match term count"};
  if (x.terms.size() > 1 && x.diffs.size() + 1 != x.terms.size())
    return {false, "missing differentials"};
  for (std::size_t k = 0; k < x.terms.size(); ++k) {
    if (!same_algebra(x.terms[k].alg, x.alg)) return {false, "term over a different algebra"};
    if (x.terms[k].action.size() != x.alg->dim) return {false, "term action size mismatch"};
  }
  for (std::size_t k = 0; k + 1 < x.terms.size(); ++k) {
    const Matrix& d = x.diffs[k];
    if (d.rows() != x.terms[k + 1].dim || d.cols() != x.terms[k].dim)
      return {false, "differential shape mismatch"};
    for (std::size_t b = 0; b < x.alg->dim; ++b)
      if (!(d * x.terms[k].action[b] == x.terms[k + 1].action[b] * d))
        return {false, "differential is not module-linear"};
  }
  for (std::size_t k = 0; k + 2 < x.terms.size(); ++k)
    if (!(x.diffs[k + 1] * x.diffs[k]).is_zero())
      return {false, "differential does not square to zero"};
  if (x.add) {
    if (x.seqs.size() != x.terms.size()) return {false, "annotation length mismatch"};
    for (std::size_t k = 0; k < x.terms.size(); ++k) {
      std::size_t d = 0;
      for (std::size_t v : x.seqs[k]) {
        if (v >= x.add->projs.size()) return {false, "annotation vertex out of range"};
        d += x.add->projs[v].dim;
      }
      if (d != x.terms[k].dim) return {false, "annotation does not match term dimension"};
      // verify the term is literally the direct sum of the listed projectives
      std::vector<std::size_t> off = seq_offsets(*x.add, x.seqs[k]);
      for (std::size_t b = 0; b < x.alg->dim; ++b) {
        Matrix expect(x.alg->field, d, d);
        for (std::size_t c = 0; c < x.seqs[k].size(); ++c)
          expect.paste(off[c], off[c], x.add->projs[x.seqs[k][c]].action[b]);
        if (!(expect == x.terms[k].action[b]))
          return {false, "annotation does not match term action"};
      }
    }
  }
  return {true, ""};
}

Complex zero_complex(const AlgebraPtr& a) {
  Complex x;
  x.alg = a;
  return x;
}

Complex stalk_complex(const Module& m, int degree) {
  Complex x;
  x.alg = m.alg;
  x.lo = degree;
  x.terms.push_back(m);
  return normalize_range(std::move(x));
}

Complex projective_stalk(const AddBasisPtr& add, const std::vector<std::size_t>& seq,
                         int degree) {
  Complex x;
  x.alg = add->alg;
  x.lo = degree;
  Module m = zero_module(add->alg);
  for (std::size_t v : seq) {
    if (v >= add->projs.size()) throw Error("Internal", "vertex index out of range");
    m = direct_sum(m, add->projs[v]);
  }
  x.terms.push_back(std::move(m));
  x.add = add;
  x.seqs.push_back(seq);
  return normalize_range(std::move(x));
}

Complex direct_sum(const Complex& x, const Complex& y) {
  if (x.empty()) return y;
  if (y.empty()) return x;
  if (!same_algebra(x.alg, y.alg)) throw Error("Internal", "direct sum over different algebras");
  Complex out;
  out.alg = x.alg;
  out.lo = std::min(x.lo, y.lo);
  int hi = std::max(x.hi(), y.hi());
  bool keep_ann = x.annotated() && y.annotated() && x.add == y.add;
  if (keep_ann) out.add = x.add;
  for (int n = out.lo; n <= hi; ++n) {
    out.terms.push_back(direct_sum(x.term(n), y.term(n)));
    if (keep_ann) {
      std::vector<std::size_t> s = x.seq_at(n);
      std::vector<std::size_t> t = y.seq_at(n);
      s.insert(s.end(), t.begin(), t.end());
      out.seqs.push_back(std::move(s));
    }
  }
  for (int n = out.lo; n < hi; ++n) {
    Matrix d(out.alg->field, out.terms[n - out.lo + 1].dim, out.terms[n - out.lo].dim);
    d.paste(0, 0, x.diff(n));
    d.paste(x.dim_at(n + 1), x.dim_at(n), y.diff(n));
    out.diffs.push_back(std::move(d));
  }
  return normalize_range(std::move(out));
}

Complex shift(const Complex& x, int n) {
  Complex out = x;
  out.lo = x.lo - n;
  if (n % 2 != 0)
    for (Matrix& d : out.diffs) d = -d;
  return out;
}

// ---------------------------------------------------------------------------
// Chain maps and cones
// ---------------------------------------------------------------------------

Matrix ChainMap::at(int n) const {
  int idx = n - lo;
  if (idx >= 0 && idx < static_cast<int>(mats.size())) return mats[idx];
  return Matrix(src.alg->field, tgt.dim_at(n), src.dim_at(n));
}

ChainMap make_chain_map(Complex src, Complex tgt, std::vector<Matrix> mats, int lo) {
  if (!same_algebra(src.alg, tgt.alg))
    throw Error("DifferentialMismatch", "chain map between different algebras");
  ChainMap f;
  f.src = std::move(src);
  f.tgt = std::move(tgt);
  f.mats = std::move(mats);
  f.lo = lo;
  for (std::size_t k = 0; k < f.mats.size(); ++k) {
    int n = lo + static_cast<int>(k);
    if (f.mats[k].rows() != f.tgt.dim_at(n) || f.mats[k].cols() != f.src.dim_at(n))
      throw Error("DifferentialMismatch",
                  "component shape mismatch in degree " + std::to_string(n));
    Module ms = f.src.term(n), mt = f.tgt.term(n);
    for (std::size_t b = 0; b < f.src.alg->dim; ++b)
      if (!(f.mats[k] * ms.action[b] == mt.action[b] * f.mats[k]))
        throw Error("DifferentialMismatch",
                    "component is not module-linear in degree " + std::to_string(n));
  }
  int a = std::min(f.src.empty() ? 0 : f.src.lo, f.tgt.empty() ? 0 : f.tgt.lo) - 1;
  int b = std::max(f.src.empty() ? 0 : f.src.hi(), f.tgt.empty() ? 0 : f.tgt.hi()) + 1;
  for (int n = a; n <= b; ++n) {
    Matrix lhs = f.tgt.diff(n) * f.at(n);
    Matrix rhs = f.at(n + 1) * f.src.diff(n);
    if (!(lhs == rhs))
      throw Error("DifferentialMismatch",
                  "chain condition fails in degree " + std::to_string(n));
  }
  return f;
}

ChainMap identity_chain_map(const Complex& x) {
  std::vector<Matrix> mats;
  for (std::size_t k = 0; k < x.terms.size(); ++k)
    mats.push_back(Matrix::identity(x.alg->field, x.terms[k].dim));
  ChainMap f;
  f.src = x;
  f.tgt = x;
  f.mats = std::move(mats);
  f.lo = x.lo;
  return f;
}

ChainMap zero_chain_map(const Complex& src, const Complex& tgt) {
  ChainMap f;
  f.src = src;
  f.tgt = tgt;
  f.lo = 0;
  return f;
}

ChainMap compose_chain_maps(const ChainMap& inner, const ChainMap& outer) {
  int a = std::min(inner.src.empty() ? 0 : inner.src.lo,
                   outer.tgt.empty() ? 0 : outer.tgt.lo);
  int b = std::max(inner.src.empty() ? 0 : inner.src.hi(),
                   outer.tgt.empty() ? 0 : outer.tgt.hi());
  for (int n = a; n <= b; ++n)
    if (inner.tgt.dim_at(n) != outer.src.dim_at(n))
      throw Error("Internal", "chain map composition shape mismatch");
  ChainMap f;
  f.src = inner.src;
  f.tgt = outer.tgt;
  f.lo = a;
  for (int n = a; n <= b; ++n) f.mats.push_back(outer.at(n) * inner.at(n));
  return f;
}

ChainMap add_chain_maps(const ChainMap& f, const ChainMap& g) {
  int a = std::min(f.lo, g.lo);
  int b = std::max(f.lo + static_cast<int>(f.mats.size()),
                   g.lo + static_cast<int>(g.mats.size()));
  ChainMap h;
  h.src = f.src;
  h.tgt = f.tgt;
  h.lo = a;
  for (int n = a; n < b; ++n) h.mats.push_back(f.at(n) + g.at(n));
  return h;
}

ChainMap scale_chain_map(const Scalar& c, const ChainMap& f) {
  ChainMap h = f;
  for (Matrix& m : h.mats) m = m.scaled(c);
  return h;
}

Complex cone(const ChainMap& f) {
  const Complex& x = f.src;
  const Complex& y = f.tgt;
  AlgebraPtr alg = x.alg ? x.alg : y.alg;
  if (x.empty() && y.empty()) return zero_complex(alg);
  Complex out;
  out.alg = alg;
  int lo = x.empty() ? y.lo : (y.empty() ? x.lo - 1 : std::min(y.lo, x.lo - 1));
  int hi = x.empty() ? y.hi() : (y.empty() ? x.hi() - 1 : std::max(y.hi(), x.hi() - 1));
  out.lo = lo;
  bool keep_ann;
  if (x.empty()) {
    keep_ann = y.annotated();
    if (keep_ann) out.add = y.add;
  } else if (y.empty()) {
    keep_ann = x.annotated();
    if (keep_ann) out.add = x.add;
  } else {
    keep_ann = x.annotated() && y.annotated() && x.add == y.add;
    if (keep_ann) out.add = x.add;
  }
  for (int n = lo; n <= hi; ++n) {
    out.terms.push_back(direct_sum(y.term(n), x.term(n + 1)));
    if (keep_ann) {
      std::vector<std::size_t> s = y.seq_at(n);
      std::vector<std::size_t> t = x.seq_at(n + 1);
      s.insert(s.end(), t.begin(), t.end());
      out.seqs.push_back(std::move(s));
    }
  }
  for (int n = lo; n < hi; ++n) {
    Matrix d(out.alg->field, out.terms[n - lo + 1].dim, out.terms[n - lo].dim);
    d.paste(0, 0, y.diff(n));
    d.paste(0, y.dim_at(n), f.at(n + 1));
    d.paste(y.dim_at(n + 1), y.dim_at(n), -x.diff(n + 1));
    out.diffs.push_back(std::move(d));
  }
  return normalize_range(std::move(out));
}

// ---------------------------------------------------------------------------
// Truncation and cohomology
// ---------------------------------------------------------------------------

namespace {

Subspace kernel_span(const Matrix& m) {
  return Subspace::from_vectors(m.field(), m.cols(), kernel_basis(m));
}

// Matrix whose columns are the coordinates (over the echelon basis of span)
// of the columns of m; every column of m must lie in span.
Matrix coords_matrix(const Subspace& span, const Matrix& m) {
  Matrix out(m.field(), span.dim(), m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Vec v = m.col(c);
    if (!span.contains(v)) throw Error("Internal", "column outside expected span");
    out.set_col(c, coords_in(span, v));
  }
  return out;
}

}  // namespace

Complex truncate_le(const Complex& x, int n) {
  if (x.empty() || n >= x.hi()) return x;
  if (n < x.lo) return zero_complex(x.alg);
  Complex out;
  out.alg = x.alg;
  out.lo = x.lo;
  for (int i = x.lo; i < n; ++i) out.terms.push_back(x.term(i));
  Subspace K = kernel_span(x.diff(n));
  out.terms.push_back(submodule(x.term(n), K));
  for (int i = x.lo; i + 1 < n; ++i) out.diffs.push_back(x.diff(i));
  if (n > x.lo) out.diffs.push_back(coords_matrix(K, x.diff(n - 1)));
  return normalize_range(std::move(out));
}

Complex truncate_ge(const Complex& x, int n) {
  if (x.empty() || n <= x.lo) return x;
  if (n > x.hi()) return zero_complex(x.alg);
  Complex out;
  out.alg = x.alg;
  out.lo = n;
  Matrix prev = x.diff(n - 1);
  std::vector<Vec> img;
  for (std::size_t c = 0; c < prev.cols(); ++c) img.push_back(prev.col(c));
  Subspace sub = Subspace::from_vectors(x.alg->field, x.dim_at(n), img);
  QuotientSpace qs = quotient_space(sub);
  out.terms.push_back(quotient_module(x.term(n), sub));
  for (int i = n + 1; i <= x.hi(); ++i) out.terms.push_back(x.term(i));
  if (n < x.hi()) {
    out.diffs.push_back(x.diff(n) * qs.sect);
    for (int i = n + 1; i < x.hi(); ++i) out.diffs.push_back(x.diff(i));
  }
  return normalize_range(std::move(out));
}

Module cohomology(const Complex& x, int n) {
  if (!x.in_range(n)) return zero_module(x.alg);
  Subspace K = kernel_span(x.diff(n));
  Module ker = submodule(x.term(n), K);
  Matrix img_in_ker = coords_matrix(K, x.diff(n - 1));
  std::vector<Vec> img;
  for (std::size_t c = 0; c < img_in_ker.cols(); ++c) img.push_back(img_in_ker.col(c));
  Subspace sub = Subspace::from_vectors(x.alg->field, K.dim(), img);
  return quotient_module(ker, sub);
}

namespace {

struct CohomCoords {
  Subspace ker;        // kernel span in the term's coordinates
  QuotientSpace qs;    // quotient of the kernel coordinates by the image
  std::size_t dim;
};

CohomCoords cohom_coords(const Complex& x, int n) {
  Subspace K = kernel_span(x.diff(n));
  Matrix img_in_ker = coords_matrix(K, x.diff(n - 1));
  std::vector<Vec> img;
  for (std::size_t c = 0; c < img_in_ker.cols(); ++c) img.push_back(img_in_ker.col(c));
  Subspace sub = Subspace::from_vectors(x.alg->field, K.dim(), img);
  QuotientSpace qs = quotient_space(sub);
  return {K, qs, qs.coords.size()};
}

}  // namespace

Matrix cohomology_map(const ChainMap& f, int n) {
  CohomCoords s = cohom_coords(f.src, n);
  CohomCoords t = cohom_coords(f.tgt, n);
  Matrix Bs = Matrix::from_cols(f.src.alg->field, s.ker.basis(), f.src.dim_at(n));
  Matrix lifted = f.at(n) * Bs * s.qs.sect;  // target-term coordinates
  Matrix in_ker = coords_matrix(t.ker, lifted);
  return t.qs.proj * in_ker;
}

XiMap xi_map(const Complex& x) {
  for (int i = 1; i <= (x.empty() ? 0 : x.hi()); ++i)
    if (cohomology(x, i).dim != 0)
      throw Error("PositiveCohomology",
                  "nonzero cohomology in degree " + std::to_string(i));
  XiMap out;
  out.truncated = truncate_le(x, 0);
  // inclusion
  std::vector<Matrix> incl;
  for (int i = out.truncated.lo; i <= out.truncated.hi(); ++i) {
    if (i < 0 || x.hi() <= 0) {
      incl.push_back(Matrix::identity(x.alg->field, out.truncated.dim_at(i)));
    } else {
      Subspace K = kernel_span(x.diff(0));
      incl.push_back(Matrix::from_cols(x.alg->field, K.basis(), x.dim_at(0)));
    }
  }
  out.incl = out.truncated.empty()
                 ? zero_chain_map(out.truncated, x)
                 : make_chain_map(out.truncated, x, std::move(incl), out.truncated.lo);
  Module h0 = cohomology(x, 0);
  Complex stalk = stalk_complex(h0, 0);
  if (out.truncated.empty() || h0.dim == 0) {
    out.proj = zero_chain_map(out.truncated, stalk);
    out.h0_action = Matrix::identity(x.alg->field, h0.dim);
    return out;
  }
  CohomCoords c0 = cohom_coords(x, 0);
  std::vector<Matrix> proj;
  for (int i = out.truncated.lo; i <= out.truncated.hi(); ++i) {
    if (i < 0)
      proj.push_back(Matrix(x.alg->field, 0, out.truncated.dim_at(i)));
    else
      proj.push_back(c0.qs.proj);
  }
  out.proj = make_chain_map(out.truncated, stalk, std::move(proj), out.truncated.lo);
  Matrix hi = cohomology_map(out.incl, 0);
  Matrix hp = cohomology_map(out.proj, 0);
  auto invi = inverse(hi);
  if (!invi) throw Error("Internal", "truncation inclusion is not a quasi-isomorphism");
  out.h0_action = hp * (*invi);
  if (!is_invertible(out.h0_action))
    throw Error("Internal", "induced cohomology comparison is not an automorphism");
  return out;
}

// ---------------------------------------------------------------------------
// Projectivity without radicals
// ---------------------------------------------------------------------------

bool is_projective_module(const Module& m) {
  if (m.dim == 0) return true;
  const AlgebraPtr& a = m.alg;
  Field f = m.field();
  // greedy generating set
  std::vector<Vec> gens;
  Subspace span(f, m.dim);
  for (std::size_t v = 0; v < m.dim && span.dim() < m.dim; ++v) {
    Vec unit = vec_zero(f, m.dim);
    unit[v] = Scalar::one(f);
    if (span.contains(unit)) continue;
    gens.push_back(unit);
    for (std::size_t k = 0; k < a->dim; ++k) span.insert(m.action[k].apply(unit));
  }
  // free cover A^g -> M, basis element b_k of copy t maps to b_k * gen_t
  std::size_t g = gens.size();
  Matrix cover(f, m.dim, g * a->dim);
  for (std::size_t t = 0; t < g; ++t)
    for (std::size_t k = 0; k < a->dim; ++k)
      cover.set_col(t * a->dim + k, m.action[k].apply(gens[t]));
  // hom components M -> A, expanded to M -> A^g
  Module reg = regular_module(a);
  std::vector<ModuleHom> h1 = hom_basis(m, reg);
  if (h1.empty()) return false;
  // solve cover * s = id with s a combination of per-copy homs
  std::size_t nvar = g * h1.size();
  Matrix sys(f, m.dim * m.dim, nvar);
  for (std::size_t t = 0; t < g; ++t)
    for (std::size_t u = 0; u < h1.size(); ++u) {
      // s candidate: copy t receives h1[u]; composite = cover restricted to
      // copy t applied after h1[u]
      Matrix blockcol = cover.block(0, t * a->dim, m.dim, a->dim);
      Matrix comp = blockcol * h1[u].mat;  // m.dim x m.dim
      Vec fl = flatten(comp);
      sys.set_col(t * h1.size() + u, fl);
    }
  Vec rhs = flatten(Matrix::identity(f, m.dim));
  return solve_linear(sys, rhs).has_value();
}

bool projective_terms(const Complex& x) {
  if (x.annotated()) return true;
  for (const Module& t : x.terms)
    if (!is_projective_module(t)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Homotopy-category hom spaces
// ---------------------------------------------------------------------------

namespace {

// Basis of Hom_A(x.term(i), y.term(j)); assembled blockwise when both
// complexes are annotated over the same dictionary.
std::vector<Matrix> hom_space_mats(const Complex& x, int i, const Complex& y, int j) {
  std::size_t dx = x.dim_at(i), dy = y.dim_at(j);
  if (dx == 0 || dy == 0) return {};
  if (x.annotated() && y.annotated() && x.add == y.add) {
    const AddBasis& ab = *x.add;
    std::vector<std::size_t> sx = x.seq_at(i), sy = y.seq_at(j);
    std::vector<std::size_t> ox = seq_offsets(ab, sx), oy = seq_offsets(ab, sy);
    std::vector<Matrix> out;
    for (std::size_t cx = 0; cx < sx.size(); ++cx)
      for (std::size_t cy = 0; cy < sy.size(); ++cy) {
        std::size_t u = sx[cx], v = sy[cy];
        for (const Matrix& blk : ab.block[u][v]) {
          Matrix m(x.alg->field, dy, dx);
          m.paste(oy[cy], ox[cx], blk);
          out.push_back(std::move(m));
        }
      }
    return out;
  }
  std::vector<Matrix> out;
  for (const ModuleHom& h : hom_basis(x.term(i), y.term(j))) out.push_back(h.mat);
  return out;
}

struct HomProblem {
  int deg_lo = 0;                          // first unknown degree
  std::vector<std::vector<Matrix>> bases;  // per unknown degree
  std::vector<Matrix> flat;                // flattened basis, per degree
  std::vector<std::size_t> offset;
  std::size_t total = 0;

  int ndeg() const { return static_cast<int>(bases.size()); }
  bool has(int i) const { return i >= deg_lo && i < deg_lo + ndeg(); }
};

HomProblem hom_problem(const Complex& x, const Complex& y, int n) {
  HomProblem hp;
  if (x.empty() || y.empty()) return hp;
  int a = std::max(x.lo, y.lo - n);
  int b = std::min(x.hi(), y.hi() - n);
  if (a > b) return hp;
  hp.deg_lo = a;
  for (int i = a; i <= b; ++i) {
    hp.bases.push_back(hom_space_mats(x, i, y, i + n));
    std::size_t fd = x.dim_at(i) * y.dim_at(i + n);
    std::vector<Vec> cols;
    for (const Matrix& m : hp.bases.back()) cols.push_back(flatten(m));
    hp.flat.push_back(Matrix::from_cols(x.alg->field, cols, fd));
    hp.offset.push_back(hp.total);
    hp.total += hp.bases.back().size();
  }
  return hp;
}

// Coordinates of a degreewise family (maps x^i -> y^{i+n}) in the problem's
// unknown space; components outside the unknown degrees must be zero.
Vec family_coords(const HomProblem& hp, const Complex& x, const Complex& y, int n,
                  const std::vector<std::pair<int, Matrix>>& comps) {
  Vec out = vec_zero(x.alg->field, hp.total);
  for (const auto& [deg, mat] : comps) {
    if (mat.rows() == 0 || mat.cols() == 0) continue;
    if (mat.is_zero()) continue;
    if (!hp.has(deg)) throw Error("Internal", "hom component outside unknown window");
    std::size_t k = deg - hp.deg_lo;
    auto sol = solve_linear(hp.flat[k], flatten(mat));
    if (!sol) throw Error("Internal", "component is not module-linear");
    for (std::size_t t = 0; t < sol->size(); ++t) out[hp.offset[k] + t] = (*sol)[t];
  }
  return out;
}

struct HomClassSpace {
  HomProblem hp;
  Complex x, y, shifted_y;
  int n = 0;
  std::vector<Vec> reps;   // class representative coordinate vectors
  Subspace boundaries{Field::rationals(), 0};  // in the unknown coordinate space
  Matrix class_solver;     // columns: boundary basis then reps

  ChainMap rep_map(const Vec& coords) const;
  Vec class_coords(const std::vector<std::pair<int, Matrix>>& comps) const;
};

ChainMap HomClassSpace::rep_map(const Vec& coords) const {
  std::vector<Matrix> mats;
  for (int k = 0; k < hp.ndeg(); ++k) {
    int deg = hp.deg_lo + k;
    Matrix m(x.alg->field, y.dim_at(deg + n), x.dim_at(deg));
    for (std::size_t t = 0; t < hp.bases[k].size(); ++t) {
      const Scalar& c = coords[hp.offset[k] + t];
      if (!c.is_zero()) m = m + hp.bases[k][t].scaled(c);
    }
    mats.push_back(std::move(m));
  }
  if (hp.ndeg() == 0) return zero_chain_map(x, shifted_y);
  return make_chain_map(x, shifted_y, std::move(mats), hp.deg_lo);
}

Vec HomClassSpace::class_coords(const std::vector<std::pair<int, Matrix>>& comps) const {
  Vec u = family_coords(hp, x, y, n, comps);
  if (reps.empty()) return vec_zero(x.alg->field, 0);
  auto sol = solve_linear(class_solver, u);
  if (!sol) throw Error("Internal", "cycle outside the class space");
  Vec out;
  for (std::size_t t = 0; t < reps.size(); ++t)
    out.push_back((*sol)[boundaries.dim() + t]);
  return out;
}

HomClassSpace hom_class_space(const Complex& x, const Complex& y, int n, bool gate) {
  if (gate) {
    if (!projective_terms(x) || !projective_terms(y))
      throw Error("NonProjectiveTerm", "homotopy hom requires projective terms");
  }
  HomClassSpace cs;
  cs.x = x;
  cs.y = y;
  cs.n = n;
  cs.shifted_y = shift(y, n);
  cs.hp = hom_problem(x, y, n);
  Field f = x.alg->field;
  const HomProblem& hp = cs.hp;
  Scalar sgn = (n % 2 == 0) ? Scalar::one(f) : -Scalar::one(f);

  // chain conditions: sgn * d_y^{i+n} f^i - f^{i+1} d_x^i = 0
  std::vector<Vec> rows_cols;  // columns of the constraint matrix
  std::size_t total_rows = 0;
  std::vector<std::tuple<int, std::size_t>> row_blocks;  // degree, flat dim
  int clo = (x.empty() ? 0 : x.lo) - 1;
  int chi = x.empty() ? -1 : x.hi();
  for (int i = clo; i <= chi; ++i) {
    std::size_t fd = x.dim_at(i) * y.dim_at(i + n + 1);
    if (fd == 0) continue;
    row_blocks.emplace_back(i, fd);
    total_rows += fd;
  }
  Matrix cons(f, total_rows, hp.total);
  std::size_t row0 = 0;
  for (const auto& [i, fd] : row_blocks) {
    if (hp.has(i)) {
      std::size_t k = i - hp.deg_lo;
      for (std::size_t t = 0; t < hp.bases[k].size(); ++t) {
        Matrix m = (y.diff(i + n) * hp.bases[k][t]).scaled(sgn);
        Vec fl = flatten(m);
        for (std::size_t r = 0; r < fd; ++r) cons.at(row0 + r, hp.offset[k] + t) = fl[r];
      }
    }
    if (hp.has(i + 1)) {
      std::size_t k = i + 1 - hp.deg_lo;
      for (std::size_t t = 0; t < hp.bases[k].size(); ++t) {
        Matrix m = -(hp.bases[k][t] * x.diff(i));
        Vec fl = flatten(m);
        for (std::size_t r = 0; r < fd; ++r)
          cons.at(row0 + r, hp.offset[k] + t) =
              cons.at(row0 + r, hp.offset[k] + t) + fl[r];
      }
    }
    row0 += fd;
  }
  std::vector<Vec> cycles = kernel_basis(cons);

  // boundaries: for homotopy bases g^i : x^i -> y^{i+n-1},
  // induced components  sgn * d_y^{i+n-1} g^i  (degree i)  and  g^i d_x^{i-1}
  // (degree i-1)
  cs.boundaries = Subspace(f, hp.total);
  if (!x.empty() && !y.empty()) {
    int ha = std::max(x.lo, y.lo - n + 1);
    int hb = std::min(x.hi(), y.hi() - n + 1);
    for (int i = ha; i <= hb; ++i) {
      std::vector<Matrix> gb = hom_space_mats(x, i, y, i + n - 1);
      for (const Matrix& g : gb) {
        std::vector<std::pair<int, Matrix>> comps;
        comps.emplace_back(i, (y.diff(i + n - 1) * g).scaled(sgn));
        comps.emplace_back(i - 1, g * x.diff(i - 1));
        cs.boundaries.insert(family_coords(hp, x, y, n, comps));
      }
    }
  }
  Subspace acc = cs.boundaries;
  for (const Vec& z : cycles)
    if (acc.insert(z)) cs.reps.push_back(z);
  std::vector<Vec> cols = cs.boundaries.basis();
  for (const Vec& r : cs.reps) cols.push_back(r);
  cs.class_solver = Matrix::from_cols(f, cols, hp.total);
  return cs;
}

}  // namespace

HomotopyHoms hom_homotopy(const Complex& x, const Complex& y, int n) {
  HomClassSpace cs = hom_class_space(x, y, n, true);
  HomotopyHoms out;
  out.dim = cs.reps.size();
  for (const Vec& r : cs.reps) out.reps.push_back(cs.rep_map(r));
  return out;
}

bool is_contractible(const Complex& x) {
  if (x.empty()) return true;
  Field f = x.alg->field;
  // solve d h + h d = id over homotopy components h^i : x^i -> x^{i-1}
  HomProblem hp = hom_problem(x, x, -1);
  std::size_t total_rows = 0;
  std::vector<std::pair<int, std::size_t>> row_blocks;
  for (int i = x.lo; i <= x.hi(); ++i) {
    std::size_t fd = x.dim_at(i) * x.dim_at(i);
    row_blocks.emplace_back(i, fd);
    total_rows += fd;
  }
  Matrix sys(f, total_rows, hp.total);
  Vec rhs = vec_zero(f, total_rows);
  std::size_t row0 = 0;
  for (const auto& [i, fd] : row_blocks) {
    Vec idf = flatten(Matrix::identity(f, x.dim_at(i)));
    for (std::size_t r = 0; r < fd; ++r) rhs[row0 + r] = idf[r];
    if (hp.has(i)) {  // d^{i-1} h^i
      std::size_t k = i - hp.deg_lo;
      for (std::size_t t = 0; t < hp.bases[k].size(); ++t) {
        Vec fl = flatten(x.diff(i - 1) * hp.bases[k][t]);
        for (std::size_t r = 0; r < fd; ++r) sys.at(row0 + r, hp.offset[k] + t) = fl[r];
      }
    }
    if (hp.has(i + 1)) {  // h^{i+1} d^i
      std::size_t k = i + 1 - hp.deg_lo;
      for (std::size_t t = 0; t < hp.bases[k].size(); ++t) {
        Vec fl = flatten(hp.bases[k][t] * x.diff(i));
        for (std::size_t r = 0; r < fd; ++r)
          sys.at(row0 + r, hp.offset[k] + t) = sys.at(row0 + r, hp.offset[k] + t) + fl[r];
      }
    }
    row0 += fd;
  }
  return solve_linear(sys, rhs).has_value();
}

namespace {

// Raw prime-field linear algebra: profiles, fingerprints and the search
// screen only need ranks, where exact Scalar elimination is overkill.
struct RawMat {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint64_t> a;
  RawMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  std::uint64_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const std::uint64_t& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

std::size_t raw_rank(RawMat m, std::uint64_t p) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
    std::size_t piv = rank;
    while (piv < m.rows && m.at(piv, col) % p == 0) ++piv;
    if (piv == m.rows) continue;
    std::swap_ranges(m.a.begin() + rank * m.cols, m.a.begin() + (rank + 1) * m.cols,
                     m.a.begin() + piv * m.cols);
    std::uint64_t inv = pow_mod(m.at(rank, col) % p, p - 2, p);
    for (std::size_t j = col; j < m.cols; ++j) m.at(rank, j) = m.at(rank, j) % p * inv % p;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == rank) continue;
      std::uint64_t c = m.at(i, col) % p;
      if (c == 0) continue;
      for (std::size_t j = col; j < m.cols; ++j)
        m.at(i, j) = (m.at(i, j) + (p - c) * m.at(rank, j)) % p;
    }
    ++rank;
  }
  return rank;
}

std::size_t fast_rank(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Field f = m.at(0, 0).field();
  if (f.is_rational()) return rank(m);
  RawMat r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r.at(i, j) = m.at(i, j).residue();
  return raw_rank(std::move(r), f.p);
}

std::map<int, std::size_t> cohomology_profile(const Complex& x) {
  // dim H^i = dim^i - rank d^i - rank d^{i-1}, because im d^{i-1} sits inside
  // ker d^i; only the ranks are needed, not the cohomology modules.
  std::map<int, std::size_t> out;
  if (x.empty()) return out;
  std::vector<std::size_t> dr(x.diffs.size(), 0);
  for (std::size_t k = 0; k < x.diffs.size(); ++k) dr[k] = fast_rank(x.diffs[k]);
  for (int i = x.lo; i <= x.hi(); ++i) {
    std::size_t k = static_cast<std::size_t>(i - x.lo);
    std::size_t h = x.dim_at(i);
    if (k < dr.size()) h -= dr[k];
    if (k > 0) h -= dr[k - 1];
    if (h > 0) out[i] = h;
  }
  return out;
}

bool complexes_identical(const Complex& x, const Complex& y) {
  if (x.empty() && y.empty()) return true;
  if (x.empty() != y.empty()) return false;
  if (x.lo != y.lo || x.terms.size() != y.terms.size()) return false;
  for (std::size_t k = 0; k < x.terms.size(); ++k) {
    if (x.terms[k].dim != y.terms[k].dim) return false;
    for (std::size_t b = 0; b < x.alg->dim; ++b)
      if (!(x.terms[k].action[b] == y.terms[k].action[b])) return false;
  }
  for (std::size_t k = 0; k < x.diffs.size(); ++k)
    if (!(x.diffs[k] == y.diffs[k])) return false;
  return true;
}

bool homotopy_equivalent_impl(const Complex& x, const Complex& y, std::size_t budget,
                              bool gate) {
  if (complexes_identical(x, y)) return true;
  bool cx = is_contractible(x), cy = is_contractible(y);
  if (cx || cy) return cx && cy;
  if (cohomology_profile(x) != cohomology_profile(y)) return false;
  HomClassSpace cs = hom_class_space(x, y, 0, gate);
  std::size_t z = cs.reps.size();
  if (z == 0) return false;
  // class-space dimensions are homotopy invariants: an equivalence identifies
  // Hom(x,y), Hom(y,x), End(x) and End(y), so any dimension mismatch is a
  // conclusive no long before the coefficient grid runs
  std::size_t end_y = hom_class_space(y, y, 0, gate).reps.size();
  if (z != end_y) return false;
  if (hom_class_space(y, x, 0, gate).reps.size() != end_y) return false;
  if (hom_class_space(x, x, 0, gate).reps.size() != end_y) return false;
  Field f = x.alg->field;
  std::size_t used = 0;
  // coeffs are class coefficients; expand them over the representative
  // vectors of the unknown coordinate space before building the map
  auto try_map = [&](const Vec& coeffs) -> bool {
    Vec combo = vec_zero(f, cs.hp.total);
    for (std::size_t t = 0; t < z; ++t)
      if (!coeffs[t].is_zero())
        combo = vec_add(combo, vec_scale(coeffs[t], cs.reps[t]));
    ChainMap g = cs.rep_map(combo);
    return is_contractible(cone(g));
  };
  // single representatives first
  for (std::size_t t = 0; t < z && used < budget; ++t) {
    ++used;
    Vec c = vec_zero(f, z);
    c[t] = Scalar::one(f);
    if (try_map(c)) return true;
  }
  // coefficient grids
  std::vector<Scalar> pool;
  if (f.is_rational()) {
    pool = {Scalar::zero(f), Scalar::one(f), -Scalar::one(f),
            Scalar::from_int(f, 2), Scalar::from_int(f, -2)};
  } else {
    for (std::uint32_t v = 0; v < f.p; ++v) pool.push_back(Scalar::from_int(f, v));
  }
  std::vector<std::size_t> digits(z, 0);
  while (used < budget) {
    // odometer, last digit fastest
    std::size_t pos = z;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < pool.size()) break;
      digits[pos] = 0;
      if (pos == 0) return false;  // wrapped around: grid exhausted
    }
    bool all_zero = true;
    for (std::size_t d : digits)
      if (d != 0) all_zero = false;
    if (all_zero) continue;
    Vec c = vec_zero(f, z);
    for (std::size_t t = 0; t < z; ++t) c[t] = pool[digits[t]];
    ++used;
    if (try_map(c)) return true;
  }
  return false;
}

}  // namespace

bool homotopy_equivalent(const Complex& x, const Complex& y, std::size_t budget) {
  return homotopy_equivalent_impl(x, y, budget, true);
}

SelfOrthReport is_selforthogonal(const Complex& x) {
  SelfOrthReport out;
  if (x.empty()) return out;
  int span = x.hi() - x.lo;
  for (int a = 1; a <= span; ++a) {
    for (int n : {a, -a}) {
      HomClassSpace cs = hom_class_space(x, x, n, true);
      if (!cs.reps.empty()) {
        out.selforthogonal = false;
        out.first_failing_degree = n;
        out.failing_dim = cs.reps.size();
        return out;
      }
    }
  }
  return out;
}

EndAlgebra end_algebra_complex(const Complex& x) {
  HomClassSpace cs = hom_class_space(x, x, 0, true);
  std::size_t d = cs.reps.size();
  Field f = x.alg->field;
  std::vector<ChainMap> reps;
  for (const Vec& r : cs.reps) reps.push_back(cs.rep_map(r));

  Algebra alg(f, d);
  for (std::size_t i = 0; i < d; ++i) alg.labels[i] = "h" + std::to_string(i);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      // product = apply reps[i], then reps[j]
      std::vector<std::pair<int, Matrix>> comps;
      for (int k = 0; k < cs.hp.ndeg(); ++k) {
        int deg = cs.hp.deg_lo + k;
        comps.emplace_back(deg, reps[j].at(deg) * reps[i].at(deg));
      }
      Vec coords = cs.class_coords(comps);
      for (std::size_t k = 0; k < d; ++k) alg.c(i, j, k) = coords[k];
    }
  {
    std::vector<std::pair<int, Matrix>> comps;
    for (int k = 0; k < cs.hp.ndeg(); ++k) {
      int deg = cs.hp.deg_lo + k;
      comps.emplace_back(deg, Matrix::identity(f, x.dim_at(deg)));
    }
    alg.unit = cs.class_coords(comps);
  }
  AlgebraCheck chk = check_algebra(alg);
  if (!chk.ok) throw Error("Internal", "endomorphism algebra failed validation");

  EndAlgebra out;
  out.alg = std::make_shared<Algebra>(std::move(alg));
  std::size_t total = 0;
  for (int k = 0; k < cs.hp.ndeg(); ++k) total += x.dim_at(cs.hp.deg_lo + k);
  for (std::size_t i = 0; i < d; ++i) {
    Matrix m(f, total, total);
    std::size_t off = 0;
    for (int k = 0; k < cs.hp.ndeg(); ++k) {
      int deg = cs.hp.deg_lo + k;
      m.paste(off, off, reps[i].at(deg));
      off += x.dim_at(deg);
    }
    out.basis.push_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dualization
// ---------------------------------------------------------------------------

Complex dualize(const Complex& x) { return dualize(x, opposite(x.alg)); }

Complex dualize(const Complex& x, const AlgebraPtr& op) {
  if (x.empty()) return zero_complex(op);
  if (!projective_terms(x)) throw Error("NonProjectiveTerm", "dual requires projective terms");
  Field f = x.alg->field;
  const AlgebraPtr& a = x.alg;
  Module reg = regular_module(a);

  AddBasisPtr op_add;
  if (x.annotated()) op_add = make_add_basis(op, x.add->idems);

  // hom bases Hom_A(x^i, A) per degree, with block structure when annotated
  std::map<int, std::vector<Matrix>> hb;
  for (int i = x.lo; i <= x.hi(); ++i) {
    std::vector<Matrix> basis;
    if (x.annotated()) {
      const AddBasis& ab = *x.add;
      std::vector<std::size_t> sq = x.seq_at(i);
      std::vector<std::size_t> off = seq_offsets(ab, sq);
      for (std::size_t c = 0; c < sq.size(); ++c) {
        std::size_t u = sq[c];
        for (const Vec& xi : op_add->proj_spans[u].basis()) {
          // right multiplication by xi on the copy block
          Matrix m(f, a->dim, x.dim_at(i));
          for (std::size_t t = 0; t < ab.projs[u].dim; ++t)
            m.set_col(off[c] + t, a->multiply(ab.proj_spans[u].basis()[t], xi));
          basis.push_back(std::move(m));
        }
      }
    } else {
      for (const ModuleHom& h : hom_basis(x.term(i), reg)) basis.push_back(h.mat);
    }
    hb[i] = std::move(basis);
  }

  Complex out;
  out.alg = op;
  out.lo = -x.hi();
  if (op_add) out.add = op_add;
  for (int j = -x.hi(); j <= -x.lo; ++j) {
    const std::vector<Matrix>& basis = hb[-j];
    Module m;
    m.alg = op;
    m.dim = basis.size();
    std::vector<Vec> flats;
    for (const Matrix& bmat : basis) flats.push_back(flatten(bmat));
    Matrix fb = Matrix::from_cols(f, flats, a->dim * x.dim_at(-j));
    for (std::size_t k = 0; k < op->dim; ++k) {
      Matrix act(f, m.dim, m.dim);
      for (std::size_t t = 0; t < basis.size(); ++t) {
        Matrix moved = a->right_mult(a->basis_vec(k)) * basis[t];
        auto sol = solve_linear(fb, flatten(moved));
        if (!sol) throw Error("Internal", "dual action left the hom space");
        act.set_col(t, *sol);
      }
      m.action.push_back(std::move(act));
    }
    out.terms.push_back(std::move(m));
    if (op_add) {
      std::vector<std::size_t> sq = x.seq_at(-j);
      out.seqs.push_back(sq);
    }
  }
  for (int j = -x.hi(); j < -x.lo; ++j) {
    const std::vector<Matrix>& src = hb[-j];
    const std::vector<Matrix>& dst = hb[-j - 1];
    std::vector<Vec> flats;
    for (const Matrix& bmat : dst) flats.push_back(flatten(bmat));
    Matrix fb = Matrix::from_cols(f, flats, a->dim * x.dim_at(-j - 1));
    Matrix d(f, dst.size(), src.size());
    Scalar sgn = (((j + 1) % 2) == 0) ? Scalar::one(f) : -Scalar::one(f);
    for (std::size_t t = 0; t < src.size(); ++t) {
      Matrix comp = src[t] * x.diff(-j - 1);
      auto sol = solve_linear(fb, flatten(comp));
      if (!sol) throw Error("Internal", "dual differential left the hom space");
      d.set_col(t, vec_scale(sgn, *sol));
    }
    out.diffs.push_back(std::move(d));
  }
  return normalize_range(std::move(out));
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

namespace {

// Image of an idempotent chain endomorphism as a complex; preserves the
// annotation when the idempotent selects whole projective copies.
Complex image_of_idempotent(const ChainMap& e) {
  const Complex& x = e.src;
  Complex out;
  out.alg = x.alg;
  out.lo = x.lo;
  Field f = x.alg->field;

  bool copy_select = x.annotated();
  std::vector<std::vector<bool>> selected(x.terms.size());
  if (copy_select) {
    for (int n = x.lo; n <= x.hi() && copy_select; ++n) {
      std::vector<std::size_t> sq = x.seq_at(n);
      std::vector<std::size_t> off = seq_offsets(*x.add, sq);
      Matrix en = e.at(n);
      std::vector<bool> sel(sq.size(), false);
      Matrix expect(f, x.dim_at(n), x.dim_at(n));
      for (std::size_t c = 0; c < sq.size(); ++c) {
        std::size_t d = x.add->projs[sq[c]].dim;
        Matrix blk = en.block(off[c], off[c], d, d);
        if (blk == Matrix::identity(f, d)) {
          sel[c] = true;
          expect.paste(off[c], off[c], blk);
        } else if (!blk.is_zero()) {
          copy_select = false;
          break;
        }
      }
      if (copy_select && !(expect == en)) copy_select = false;
      if (copy_select) selected[n - x.lo] = sel;
    }
  }

  std::vector<Subspace> spans;
  for (int n = x.lo; n <= x.hi(); ++n) {
    Matrix en = e.at(n);
    std::vector<Vec> cols;
    for (std::size_t c = 0; c < en.cols(); ++c) cols.push_back(en.col(c));
    spans.push_back(Subspace::from_vectors(f, x.dim_at(n), cols));
    out.terms.push_back(submodule(x.term(n), spans.back()));
  }
  for (int n = x.lo; n < x.hi(); ++n) {
    Matrix incl = Matrix::from_cols(f, spans[n - x.lo].basis(), x.dim_at(n));
    out.diffs.push_back(coords_matrix(spans[n - x.lo + 1], x.diff(n) * incl));
  }
  if (copy_select) {
    out.add = x.add;
    for (int n = x.lo; n <= x.hi(); ++n) {
      std::vector<std::size_t> sq = x.seq_at(n);
      std::vector<std::size_t> keep;
      for (std::size_t c = 0; c < sq.size(); ++c)
        if (selected[n - x.lo][c]) keep.push_back(sq[c]);
      out.seqs.push_back(std::move(keep));
    }
  }
  return normalize_range(std::move(out));
}

bool chain_idempotent(const ChainMap& e) {
  for (int n = e.src.empty() ? 0 : e.src.lo; n <= (e.src.empty() ? -1 : e.src.hi()); ++n) {
    Matrix m = e.at(n);
    if (!(m * m == m)) return false;
  }
  return true;
}

}  // namespace

GenerationReport generation_check(const std::vector<Complex>& generators,
                                  const std::vector<Complex>& targets,
                                  const GenerationWitness& witness) {
  GenerationReport out;
  std::vector<Complex> objects = generators;
  for (std::size_t s = 0; s < witness.size(); ++s) {
    const GenStep& st = witness[s];
    std::string where = "step " + std::to_string(s);
    try {
      switch (st.kind) {
        case GenStep::Kind::Start: {
          if (st.a >= generators.size()) {
            out.failure = where + ": generator index out of range";
            return out;
          }
          objects.push_back(generators[st.a]);
          break;
        }
        case GenStep::Kind::Shift: {
          if (st.a >= objects.size()) {
            out.failure = where + ": object index out of range";
            return out;
          }
          objects.push_back(shift(objects[st.a], st.n));
          break;
        }
        case GenStep::Kind::Cone: {
          if (st.a >= objects.size() || st.b >= objects.size()) {
            out.failure = where + ": object index out of range";
            return out;
          }
          ChainMap f = make_chain_map(objects[st.a], objects[st.b], st.mats, st.mats_lo);
          objects.push_back(cone(f));
          break;
        }
        case GenStep::Kind::Summand: {
          if (st.a >= objects.size()) {
            out.failure = where + ": object index out of range";
            return out;
          }
          ChainMap e = make_chain_map(objects[st.a], objects[st.a], st.mats, st.mats_lo);
          if (!chain_idempotent(e)) {
            out.failure = where + ": summand endomorphism is not idempotent";
            return out;
          }
          objects.push_back(image_of_idempotent(e));
          break;
        }
      }
    } catch (const Error& err) {
      out.failure = where + ": " + err.what();
      return out;
    }
  }
  out.matched_by.assign(targets.size(), 0);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    bool found = false;
    for (std::size_t o = 0; o < objects.size() && !found; ++o) {
      if (homotopy_equivalent_impl(objects[o], targets[t], 2048, false)) {
        out.matched_by[t] = o;
        found = true;
      }
    }
    if (!found) {
      out.failure = "target " + std::to_string(t) + " not reached";
      return out;
    }
  }
  out.verified = true;
  return out;
}

// ---------------------------------------------------------------------------
// Class lattice condition
// ---------------------------------------------------------------------------

namespace {

// Vertex index of every projective summand copy of a term, recovered through
// the endomorphism algebra when no annotation is available.
std::vector<std::size_t> split_term_seq(const Module& term, const std::vector<Module>& projs,
                                        const std::vector<Vec>& idems) {
  std::vector<std::size_t> out;
  if (term.dim == 0) return out;
  std::vector<std::vector<std::size_t>> profiles;
  for (const Module& p : projs) {
    std::vector<std::size_t> prof;
    for (const Vec& e : idems) prof.push_back(rank(p.act(e)));
    profiles.push_back(std::move(prof));
  }
  EndAlgebra ea = end_algebra(term);
  std::vector<Vec> prims = primitive_idempotents(*ea.alg);
  for (const Vec& pv : prims) {
    Matrix m(term.field(), term.dim, term.dim);
    for (std::size_t k = 0; k < pv.size(); ++k)
      if (!pv[k].is_zero()) m = m + ea.basis[k].scaled(pv[k]);
    std::vector<Vec> cols;
    for (std::size_t c = 0; c < m.cols(); ++c) cols.push_back(m.col(c));
    Subspace span = Subspace::from_vectors(term.field(), term.dim, cols);
    Module s = submodule(term, span);
    std::vector<std::size_t> prof;
    for (const Vec& e : idems) prof.push_back(rank(s.act(e)));
    std::size_t match = projs.size();
    for (std::size_t u = 0; u < projs.size(); ++u)
      if (profiles[u] == prof) {
        if (match != projs.size())
          throw Error("Internal", "ambiguous projective summand profile");
        match = u;
      }
    if (match == projs.size())
      throw Error("Internal", "term summand is not a vertex projective");
    out.push_back(match);
  }
  return out;
}

struct ClassData {
  std::size_t r = 0;
  std::vector<Module> projs;
  std::vector<Vec> idems;
  bool annotated_mode = false;
  AddBasisPtr add;
};

std::vector<std::size_t> complex_term_seq(const Complex& x, int n, const ClassData& cd) {
  if (cd.annotated_mode && x.annotated() && x.add == cd.add) return x.seq_at(n);
  return split_term_seq(x.term(n), cd.projs, cd.idems);
}

std::vector<BigInt> total_class(const Complex& x, const ClassData& cd) {
  std::vector<BigInt> cls(cd.r, 0);
  for (int n = x.empty() ? 1 : x.lo; n <= (x.empty() ? 0 : x.hi()); ++n) {
    std::vector<std::size_t> sq = complex_term_seq(x, n, cd);
    for (std::size_t v : sq) {
      if (n % 2 == 0)
        cls[v] += 1;
      else
        cls[v] -= 1;
    }
  }
  return cls;
}

}  // namespace

K0Check k0_generation_check(const Complex& x, const std::vector<Complex>& targets) {
  ClassData cd;
  bool ann = x.annotated();
  for (const Complex& t : targets)
    if (!(t.annotated() && x.annotated() && t.add == x.add)) ann = false;
  if (ann) {
    cd.annotated_mode = true;
    cd.add = x.add;
    cd.r = x.add->vertices();
    cd.projs = x.add->projs;
    cd.idems = x.add->idems;
  } else {
    cd.idems = primitive_idempotents(*x.alg);
    cd.r = cd.idems.size();
    Module reg = regular_module(x.alg);
    for (const Vec& e : cd.idems) {
      Matrix rm = x.alg->right_mult(e);
      std::vector<Vec> cols;
      for (std::size_t c = 0; c < rm.cols(); ++c) cols.push_back(rm.col(c));
      cd.projs.push_back(submodule(reg, Subspace::from_vectors(x.alg->field, x.alg->dim, cols)));
    }
  }

  std::vector<std::vector<BigInt>> rows;
  for (int n = x.empty() ? 1 : x.lo; n <= (x.empty() ? 0 : x.hi()); ++n) {
    std::vector<std::size_t> sq = complex_term_seq(x, n, cd);
    std::set<std::size_t> seen;
    for (std::size_t v : sq) {
      if (seen.count(v)) continue;
      seen.insert(v);
      std::vector<BigInt> row(cd.r, 0);
      row[v] = (n % 2 == 0) ? 1 : -1;
      rows.push_back(std::move(row));
    }
  }
  K0Check out;
  out.classes = IntMatrix(rows.size(), cd.r);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cd.r; ++j) out.classes.at(i, j) = rows[i][j];
  out.pass = true;
  for (const Complex& t : targets) {
    std::vector<BigInt> cls = total_class(t, cd);
    out.target_classes.push_back(cls);
    if (!in_row_lattice(out.classes, cls)) out.pass = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tilting verdicts
// ---------------------------------------------------------------------------

std::vector<Complex> projective_stalk_targets(const AddBasisPtr& add) {
  std::vector<Complex> out;
  for (std::size_t v = 0; v < add->vertices(); ++v)
    out.push_back(projective_stalk(add, {v}, 0));
  return out;
}

namespace {

struct WitnessSearch {
  bool found = false;
  GenerationWitness steps;
  std::vector<std::size_t> matched_by;
};

std::string complex_fingerprint(const Complex& c) {
  std::ostringstream os;
  os << c.lo << ":";
  for (const Module& t : c.terms) os << t.dim << ",";
  os << "|";
  for (const Matrix& d : c.diffs) os << rank(d) << ",";
  return os.str();
}

WitnessSearch witness_search(const std::vector<Complex>& gens,
                             const std::vector<Complex>& targets, std::size_t budget) {
  WitnessSearch out;
  out.matched_by.assign(targets.size(), 0);
  std::vector<bool> matched(targets.size(), false);
  std::vector<Complex> objects;
  std::vector<std::size_t> obj_dims;
  std::vector<GenStep> steps;
  std::set<std::string> seen;
  std::vector<std::map<int, std::size_t>> profiles;
  std::vector<std::map<int, std::size_t>> target_profiles;
  for (const Complex& t : targets) target_profiles.push_back(cohomology_profile(t));

  auto total_dim = [](const Complex& c) {
    std::size_t d = 0;
    for (const Module& t : c.terms) d += t.dim;
    return d;
  };
  // Keep the frontier inside a bounded dimension range: iterated cones would
  // otherwise double in size at every level and drown the search in linear
  // algebra on huge complexes that can never match a target anyway.
  std::size_t base_dim = 0;
  for (const Complex& g : gens) base_dim += total_dim(g);
  for (const Complex& t : targets) base_dim += total_dim(t);
  const std::size_t dim_cap = std::max<std::size_t>(64, 4 * base_dim);

  // An object consisting of exactly one projective copy; reports its degree
  // and vertex.
  auto single_stalk = [](const Complex& c, int& deg, std::size_t& vert) {
    if (!c.annotated() || c.empty()) return false;
    std::size_t copies = 0;
    for (int n = c.lo; n <= c.hi(); ++n) {
      const std::vector<std::size_t>& sq = c.seq_at(n);
      if (sq.empty()) continue;
      copies += sq.size();
      deg = n;
      vert = sq[0];
    }
    return copies == 1;
  };

  auto all_matched = [&] {
    for (bool m : matched)
      if (!m) return false;
    return true;
  };
  // Generators are pre-seeded as objects 0..g-1; each recorded step appends
  // one more object, matching the replay in generation_check.
  const bool trace = std::getenv("MIRRORSMITH_TRACE") != nullptr;
  auto register_object = [&](const Complex& c) {
    objects.push_back(c);
    obj_dims.push_back(total_dim(c));
    profiles.push_back(cohomology_profile(c));
    std::size_t idx = objects.size() - 1;
    if (trace) {
      std::fprintf(stderr, "[ws] obj %zu dim %zu fp %s prof", idx, obj_dims[idx],
                   complex_fingerprint(c).c_str());
      for (auto [dg, dm] : profiles[idx]) std::fprintf(stderr, " %d:%zu", dg, dm);
      std::fprintf(stderr, "\n");
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (matched[t]) continue;
      if (profiles[idx] != target_profiles[t]) continue;
      bool eq = homotopy_equivalent_impl(objects[idx], targets[t], 512, false);
      if (trace)
        std::fprintf(stderr, "[ws] obj %zu vs target %zu: %s\n", idx, t,
                     eq ? "MATCH" : "profile only");
      if (eq) {
        matched[t] = true;
        out.matched_by[t] = idx;
      }
    }
  };
  auto note_object = [&](const Complex& c, GenStep step) {
    std::string fp = complex_fingerprint(c);
    // drop duplicates of an existing object (same fingerprint and data)
    if (seen.count(fp)) {
      for (const Complex& o : objects)
        if (complexes_identical(o, c)) return;
    }
    seen.insert(fp);
    steps.push_back(std::move(step));
    register_object(c);
  };

  std::size_t used = 0;

  // Cones along canonical copy maps: a one-copy stalk includes into a copy of
  // its vertex at the top degree of another object, or receives the projection
  // from such a copy at the bottom degree.  The cone peels that copy away, so
  // these moves dismantle a complex of projectives layer by layer.
  auto targeted_cones = [&](std::size_t sidx, std::size_t xidx) {
    int deg = 0;
    std::size_t w = 0;
    // copies: note_object below grows `objects`, invalidating references
    Complex s = objects[sidx];
    Complex x = objects[xidx];
    if (!single_stalk(s, deg, w)) return;
    if (!x.annotated() || x.empty() || x.add != s.add) return;
    if (obj_dims[sidx] + obj_dims[xidx] > dim_cap) return;
    std::size_t d = x.add->projs[w].dim;
    if (deg == x.hi()) {
      std::vector<std::size_t> sq = x.seq_at(deg);
      std::vector<std::size_t> off = seq_offsets(*x.add, sq);
      for (std::size_t c = 0; c < sq.size() && used < budget; ++c) {
        if (sq[c] != w) continue;
        ++used;
        Matrix m(x.alg->field, x.dim_at(deg), d);
        m.paste(off[c], 0, Matrix::identity(x.alg->field, d));
        GenStep st;
        st.kind = GenStep::Kind::Cone;
        st.a = sidx;
        st.b = xidx;
        st.mats = {m};
        st.mats_lo = deg;
        note_object(cone(make_chain_map(s, x, {m}, deg)), st);
      }
    }
    if (deg == x.lo) {
      std::vector<std::size_t> sq = x.seq_at(deg);
      std::vector<std::size_t> off = seq_offsets(*x.add, sq);
      for (std::size_t c = 0; c < sq.size() && used < budget; ++c) {
        if (sq[c] != w) continue;
        ++used;
        Matrix m(x.alg->field, d, x.dim_at(deg));
        m.paste(0, off[c], Matrix::identity(x.alg->field, d));
        GenStep st;
        st.kind = GenStep::Kind::Cone;
        st.a = xidx;
        st.b = sidx;
        st.mats = {m};
        st.mats_lo = deg;
        note_object(cone(make_chain_map(x, s, {m}, deg)), st);
      }
    }
  };

  for (const Complex& g : gens) {
    seen.insert(complex_fingerprint(g));
    register_object(g);
  }

  // Best-first expansion: small objects (stalks and peeled complexes) carry
  // the useful moves, so expand them before the large cone by-products.
  std::set<std::pair<std::size_t, std::size_t>> frontier;
  std::size_t enqueued = 0;
  while (!all_matched() && used < budget) {
    for (; enqueued < objects.size(); ++enqueued)
      frontier.insert({obj_dims[enqueued], enqueued});
    if (frontier.empty()) break;
    std::size_t k = frontier.begin()->second;
    frontier.erase(frontier.begin());
    Complex cur = objects[k];
    // split off single projective copies that the differential ignores
    if (cur.annotated()) {
      for (int n = cur.lo; n <= cur.hi() && used < budget; ++n) {
        std::vector<std::size_t> sq = cur.seq_at(n);
        if (sq.empty()) continue;
        std::vector<std::size_t> off = seq_offsets(*cur.add, sq);
        std::size_t copies_total = 0;
        for (int m = cur.lo; m <= cur.hi(); ++m) copies_total += cur.seq_at(m).size();
        if (copies_total < 2) continue;
        for (std::size_t c = 0; c < sq.size() && used < budget; ++c) {
          std::size_t d = cur.add->projs[sq[c]].dim;
          bool out_zero = cur.diff(n).block(0, off[c], cur.dim_at(n + 1), d).is_zero();
          bool in_zero =
              cur.diff(n - 1).block(off[c], 0, d, cur.dim_at(n - 1)).is_zero();
          if (!out_zero || !in_zero) continue;
          for (bool complement : {false, true}) {
            if (used >= budget) break;
            ++used;
            std::vector<Matrix> mats;
            for (int m = cur.lo; m <= cur.hi(); ++m) {
              Matrix em(cur.alg->field, cur.dim_at(m), cur.dim_at(m));
              if (m == n) {
                if (!complement) {
                  em.paste(off[c], off[c], Matrix::identity(cur.alg->field, d));
                } else {
                  em = Matrix::identity(cur.alg->field, cur.dim_at(m));
                  for (std::size_t t = 0; t < d; ++t)
                    em.at(off[c] + t, off[c] + t) = Scalar::zero(cur.alg->field);
                }
              } else if (complement) {
                em = Matrix::identity(cur.alg->field, cur.dim_at(m));
              }
              mats.push_back(std::move(em));
            }
            GenStep st;
            st.kind = GenStep::Kind::Summand;
            st.a = k;
            st.mats = mats;
            st.mats_lo = cur.lo;
            ChainMap e = make_chain_map(cur, cur, mats, cur.lo);
            note_object(image_of_idempotent(e), st);
          }
        }
      }
    }
    // canonical copy-peeling cones against earlier objects
    for (std::size_t l = 0; l <= k && used < budget; ++l) {
      targeted_cones(k, l);
      if (l != k) targeted_cones(l, k);
    }
    // shifts
    for (int n : {1, -1}) {
      if (used >= budget) break;
      Complex sh = shift(cur, n);
      if (!sh.empty() && (sh.lo < -8 || sh.hi() > 8)) continue;
      ++used;
      GenStep st;
      st.kind = GenStep::Kind::Shift;
      st.a = k;
      st.n = n;
      note_object(sh, st);
    }
    // cones against earlier objects (both directions)
    for (std::size_t l = 0; l < objects.size() && l <= k && used < budget; ++l) {
      for (auto [s, t] : {std::pair<std::size_t, std::size_t>{k, l}, {l, k}}) {
        if (used >= budget) break;
        if (obj_dims[s] + obj_dims[t] > dim_cap) continue;
        HomotopyHoms h;
        try {
          h = hom_homotopy(objects[s], objects[t], 0);
        } catch (const Error&) {
          continue;
        }
        std::size_t take = std::min<std::size_t>(h.reps.size(), 3);
        for (std::size_t r = 0; r < take && used < budget; ++r) {
          ++used;
          GenStep st;
          st.kind = GenStep::Kind::Cone;
          st.a = s;
          st.b = t;
          st.mats = h.reps[r].mats;
          st.mats_lo = h.reps[r].lo;
          note_object(cone(h.reps[r]), st);
        }
      }
    }
  }
  out.found = all_matched();
  if (out.found) out.steps = steps;
  return out;
}

}  // namespace

TiltingVerdict is_tilting(const Complex& x, const std::vector<Complex>& k0_targets,
                          std::size_t auto_witness_budget) {
  TiltingVerdict out;
  out.selforth = is_selforthogonal(x);
  if (!out.selforth.selforthogonal) {
    out.kind = TiltingVerdict::Kind::Fail;
    out.reason = "nonzero self-extension in degree " +
                 std::to_string(out.selforth.first_failing_degree);
    return out;
  }
  if (!k0_targets.empty() && is_contractible(x)) {
    out.kind = TiltingVerdict::Kind::Fail;
    out.reason = "contractible complex is the zero object";
    return out;
  }
  out.k0 = k0_generation_check(x, k0_targets);
  if (!out.k0.pass) {
    out.kind = TiltingVerdict::Kind::Fail;
    out.reason = "projective classes outside the candidate's class lattice";
    return out;
  }
  WitnessSearch ws = witness_search({x}, k0_targets, auto_witness_budget);
  if (ws.found) {
    out.kind = TiltingVerdict::Kind::Verified;
    out.witness = ws.steps;
  } else {
    out.kind = TiltingVerdict::Kind::K0PassUnverified;
    out.reason = "generation witness not found within budget";
  }
  return out;
}

TiltingVerdict is_tilting(const Complex& x, std::size_t auto_witness_budget) {
  if (x.annotated()) return is_tilting(x, projective_stalk_targets(x.add), auto_witness_budget);
  std::vector<Vec> idems = primitive_idempotents(*x.alg);
  AddBasisPtr add = make_add_basis(x.alg, idems);
  return is_tilting(x, projective_stalk_targets(add), auto_witness_budget);
}

// ---------------------------------------------------------------------------
// Invariant battery
// ---------------------------------------------------------------------------

IntMatrix cartan_matrix(const AlgebraPtr& a, const std::vector<Vec>& idems) {
  std::size_t r = idems.size();
  IntMatrix c(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      Subspace sp(a->field, a->dim);
      for (std::size_t k = 0; k < a->dim; ++k)
        sp.insert(a->multiply(a->multiply(idems[i], a->basis_vec(k)), idems[j]));
      c.at(i, j) = static_cast<long>(sp.dim());
    }
  return c;
}

IntMatrix cartan_matrix(const AlgebraPtr& a) {
  return cartan_matrix(a, primitive_idempotents(*a));
}

AlgebraInvariants algebra_invariants(const AlgebraPtr& a, const std::vector<Vec>& idems) {
  AlgebraInvariants out;
  out.dim = a->dim;
  out.simples = idems.size();
  out.center_dim = center_basis(*a).size();
  IntMatrix c = cartan_matrix(a, idems);
  out.cartan_snf = smith_normal_form(c).invariant_factors();
  out.cartan_det = int_determinant(c);
  return out;
}

AlgebraInvariants algebra_invariants(const AlgebraPtr& a) {
  return algebra_invariants(a, primitive_idempotents(*a));
}

// ---------------------------------------------------------------------------
// Pair comparison
// ---------------------------------------------------------------------------

PairEquivReport pair_equiv_check(const AlgebraPtr& a, const Vec& e,
                                 const AlgebraPtr& b, const Vec& f,
                                 const Complex& p, const ChainMap& split_idem,
                                 const std::optional<GenerationWitness>& corner_witness,
                                 const std::optional<Matrix>& end_to_b_iso) {
  PairEquivReport out;
  TiltingVerdict tv = is_tilting(p);
  out.tilting = tv.kind;
  if (tv.kind == TiltingVerdict::Kind::Fail) {
    out.verdict = "fail:tilting";
    out.detail = tv.reason;
    return out;
  }

  HomClassSpace cs = hom_class_space(p, p, 0, true);
  EndAlgebra endp = end_algebra_complex(p);
  try {
    AlgebraInvariants ia = algebra_invariants(endp.alg);
    AlgebraInvariants ib = algebra_invariants(b);
    out.end_invariants_match = ia.dim == ib.dim && ia.simples == ib.simples &&
                               ia.center_dim == ib.center_dim &&
                               ia.cartan_snf == ib.cartan_snf;
  } catch (const Error& err) {
    out.end_invariants_match =
        endp.alg->dim == b->dim &&
        center_basis(*endp.alg).size() == center_basis(*b).size();
    out.detail = std::string("splitting invariants unavailable: ") + err.what();
  }
  if (!out.end_invariants_match) {
    out.verdict = "fail:end-invariants";
    return out;
  }

  // strictify the distinguished summand
  ChainMap se = make_chain_map(p, p, split_idem.mats, split_idem.lo);
  if (!chain_idempotent(se)) {
    out.verdict = "fail:split-idempotent";
    return out;
  }
  Complex p1 = image_of_idempotent(se);

  // membership of every term of p1 in add(Ae)
  Module reg = regular_module(a);
  Matrix rm = a->right_mult(e);
  std::vector<Vec> cols;
  for (std::size_t c = 0; c < rm.cols(); ++c) cols.push_back(rm.col(c));
  Module ae = submodule(reg, Subspace::from_vectors(a->field, a->dim, cols));
  out.summand_in_add_corner = true;
  for (const Module& t : p1.terms) {
    if (t.dim == 0) continue;
    std::vector<ModuleHom> hb = hom_basis(ae, t);
    Subspace image(a->field, t.dim);
    for (const ModuleHom& h : hb)
      for (std::size_t c = 0; c < h.mat.cols(); ++c) image.insert(h.mat.col(c));
    if (image.dim() != t.dim) {
      out.summand_in_add_corner = false;
      break;
    }
  }
  if (!out.summand_in_add_corner) {
    out.verdict = "fail:corner-membership";
    return out;
  }

  Complex ae_stalk = stalk_complex(ae, 0);
  if (corner_witness) {
    out.summand_generates = generation_check({p1}, {ae_stalk}, *corner_witness).verified;
  } else {
    out.summand_generates = witness_search({p1}, {ae_stalk}, 512).found;
  }
  if (!out.summand_generates) {
    out.verdict = "fail:corner-generation";
    return out;
  }

  if (end_to_b_iso) {
    const Matrix& iso = *end_to_b_iso;
    out.explicit_iso_ok = iso.rows() == b->dim && iso.cols() == endp.alg->dim &&
                          is_invertible(iso);
    if (out.explicit_iso_ok) {
      // multiplicative on basis pairs, unit to unit
      for (std::size_t i = 0; i < endp.alg->dim && out.explicit_iso_ok; ++i)
        for (std::size_t j = 0; j < endp.alg->dim && out.explicit_iso_ok; ++j) {
          Vec lhs = iso.apply(endp.alg->basis_product(i, j));
          Vec rhs = b->multiply(iso.apply(endp.alg->basis_vec(i)),
                                iso.apply(endp.alg->basis_vec(j)));
          if (!(lhs == rhs)) out.explicit_iso_ok = false;
        }
      if (out.explicit_iso_ok && !(iso.apply(endp.alg->unit) == b->unit))
        out.explicit_iso_ok = false;
    }
    if (!out.explicit_iso_ok) {
      out.verdict = "fail:iso";
      return out;
    }
    std::vector<std::pair<int, Matrix>> comps;
    for (int k = 0; k < cs.hp.ndeg(); ++k) {
      int deg = cs.hp.deg_lo + k;
      comps.emplace_back(deg, se.at(deg));
    }
    Vec cls = cs.class_coords(comps);
    out.idempotent_matches = iso.apply(cls) == f;
    if (!out.idempotent_matches) {
      out.verdict = "fail:idempotent-image";
      return out;
    }
    out.verdict = "pass";
    return out;
  }
  out.verdict = "inconclusive";
  return out;
}

// ---------------------------------------------------------------------------
// Tilting search
// ---------------------------------------------------------------------------

namespace {

// Corner composition tables: coords of corner[u][v][s] * corner[v][w][t]
// over corner[u][w], as residues.
struct CornerTables {
  std::size_t r = 0;
  std::vector<std::vector<std::size_t>> dim;  // dim[u][v] = |corner[u][v]|
  // comp[u][v][w][(s * dim[v][w] + t) * dim[u][w] + q]
  std::vector<std::vector<std::vector<std::vector<std::uint64_t>>>> comp;
};

CornerTables build_corner_tables(const AddBasis& ab) {
  const AlgebraPtr& a = ab.alg;
  CornerTables ct;
  ct.r = ab.vertices();
  ct.dim.assign(ct.r, std::vector<std::size_t>(ct.r, 0));
  for (std::size_t u = 0; u < ct.r; ++u)
    for (std::size_t v = 0; v < ct.r; ++v) ct.dim[u][v] = ab.corner[u][v].size();
  ct.comp.assign(ct.r, {});
  for (std::size_t u = 0; u < ct.r; ++u) {
    ct.comp[u].assign(ct.r, {});
    for (std::size_t v = 0; v < ct.r; ++v) {
      ct.comp[u][v].assign(ct.r, {});
      for (std::size_t w = 0; w < ct.r; ++w) {
        Subspace sp = Subspace::from_vectors(a->field, a->dim, ab.corner[u][w]);
        std::vector<std::uint64_t>& tab = ct.comp[u][v][w];
        tab.assign(ct.dim[u][v] * ct.dim[v][w] * ct.dim[u][w], 0);
        for (std::size_t s = 0; s < ct.dim[u][v]; ++s)
          for (std::size_t t = 0; t < ct.dim[v][w]; ++t) {
            Vec prod = a->multiply(ab.corner[u][v][s], ab.corner[v][w][t]);
            Vec coords = coords_in(sp, prod);
            for (std::size_t q = 0; q < ct.dim[u][w]; ++q)
              tab[(s * ct.dim[v][w] + t) * ct.dim[u][w] + q] =
                  static_cast<std::uint64_t>(coords[q].residue());
          }
      }
    }
  }
  return ct;
}

// Coordinate layout of Hom(T_src, T_dst) for seq-annotated terms:
// (src copy asc, dst copy asc, corner basis asc).
struct MapSpace {
  std::vector<std::size_t> off;  // per (src_copy * ndst + dst_copy)
  std::size_t dim = 0;
};

MapSpace map_space(const CornerTables& ct, const std::vector<std::size_t>& src,
                   const std::vector<std::size_t>& dst) {
  MapSpace ms;
  ms.off.assign(src.size() * dst.size() + 1, 0);
  std::size_t acc = 0;
  for (std::size_t i = 0; i < src.size(); ++i)
    for (std::size_t j = 0; j < dst.size(); ++j) {
      ms.off[i * dst.size() + j] = acc;
      acc += ct.dim[src[i]][dst[j]];
    }
  ms.off[src.size() * dst.size()] = acc;
  ms.dim = acc;
  return ms;
}

// Self-orthogonality screen for a two-term candidate d : Tm -> Tp given by
// coordinates y over Hom(Tm, Tp).  Exact for two-term complexes.
bool two_term_screen(const CornerTables& ct, const std::vector<std::size_t>& sm,
                     const std::vector<std::size_t>& sp,
                     const std::vector<std::uint64_t>& y, std::uint64_t p) {
  MapSpace mp = map_space(ct, sm, sp);  // D and the n=+1 target space
  MapSpace pm = map_space(ct, sp, sm);  // F space for n=-1
  MapSpace mm = map_space(ct, sm, sm);
  MapSpace pp = map_space(ct, sp, sp);

  // n = -1: no F != 0 with F.D = 0 and D.F = 0
  {
    RawMat cons(mm.dim + pp.dim, pm.dim);
    // F.D = 0 in Hom(Tm, Tm): block (i_src -> i_dst) sums over j in Tp of
    // comp(D[i_src -> j], F[j -> i_dst])
    for (std::size_t is = 0; is < sm.size(); ++is)
      for (std::size_t id = 0; id < sm.size(); ++id) {
        std::size_t u = sm[is], w = sm[id];
        std::size_t row0 = mm.off[is * sm.size() + id];
        for (std::size_t j = 0; j < sp.size(); ++j) {
          std::size_t v = sp[j];
          const std::vector<std::uint64_t>& tab = ct.comp[u][v][w];
          std::size_t dvw = ct.dim[v][w], duw = ct.dim[u][w], duv = ct.dim[u][v];
          std::size_t ycol0 = mp.off[is * sp.size() + j];
          std::size_t fcol0 = pm.off[j * sm.size() + id];
          for (std::size_t s = 0; s < duv; ++s) {
            std::uint64_t ys = y[ycol0 + s] % p;
            if (ys == 0) continue;
            for (std::size_t t = 0; t < dvw; ++t)
              for (std::size_t q = 0; q < duw; ++q) {
                std::uint64_t c = tab[(s * dvw + t) * duw + q];
                if (c == 0) continue;
                std::uint64_t& cell = cons.at(row0 + q, fcol0 + t);
                cell = (cell + ys * c) % p;
              }
          }
        }
      }
    // D.F = 0 in Hom(Tp, Tp): block (j_src -> j_dst) sums over i in Tm of
    // comp(F[j_src -> i], D[i -> j_dst])
    for (std::size_t js = 0; js < sp.size(); ++js)
      for (std::size_t jd = 0; jd < sp.size(); ++jd) {
        std::size_t u = sp[js], w = sp[jd];
        std::size_t row0 = mm.dim + pp.off[js * sp.size() + jd];
        for (std::size_t i = 0; i < sm.size(); ++i) {
          std::size_t v = sm[i];
          const std::vector<std::uint64_t>& tab = ct.comp[u][v][w];
          std::size_t dvw = ct.dim[v][w], duw = ct.dim[u][w], duv = ct.dim[u][v];
          std::size_t fcol0 = pm.off[js * sm.size() + i];
          std::size_t ycol0 = mp.off[i * sp.size() + jd];
          for (std::size_t t = 0; t < dvw; ++t) {
            std::uint64_t yt = y[ycol0 + t] % p;
            if (yt == 0) continue;
            for (std::size_t s = 0; s < duv; ++s)
              for (std::size_t q = 0; q < duw; ++q) {
                std::uint64_t c = tab[(s * dvw + t) * duw + q];
                if (c == 0) continue;
                std::uint64_t& cell = cons.at(row0 + q, fcol0 + s);
                cell = (cell + yt * c) % p;
              }
          }
        }
      }
    if (raw_rank(std::move(cons), p) != pm.dim) return false;
  }

  // n = +1: (U, V) -> D.U-composite + V.D-composite must cover Hom(Tm, Tp)
  {
    RawMat sur(mp.dim, mm.dim + pp.dim);
    // apply U (Tm -> Tm) then D: block (i_src -> j): sum over i_dst
    for (std::size_t is = 0; is < sm.size(); ++is)
      for (std::size_t j = 0; j < sp.size(); ++j) {
        std::size_t u = sm[is], w = sp[j];
        std::size_t row0 = mp.off[is * sp.size() + j];
        for (std::size_t id = 0; id < sm.size(); ++id) {
          std::size_t v = sm[id];
          const std::vector<std::uint64_t>& tab = ct.comp[u][v][w];
          std::size_t dvw = ct.dim[v][w], duw = ct.dim[u][w], duv = ct.dim[u][v];
          std::size_t ucol0 = mm.off[is * sm.size() + id];
          std::size_t ycol0 = mp.off[id * sp.size() + j];
          for (std::size_t t = 0; t < dvw; ++t) {
            std::uint64_t yt = y[ycol0 + t] % p;
            if (yt == 0) continue;
            for (std::size_t s = 0; s < duv; ++s)
              for (std::size_t q = 0; q < duw; ++q) {
                std::uint64_t c = tab[(s * dvw + t) * duw + q];
                if (c == 0) continue;
                std::uint64_t& cell = sur.at(row0 + q, ucol0 + s);
                cell = (cell + yt * c) % p;
              }
          }
        }
      }
    // apply D then V (Tp -> Tp): block (i -> j_dst): sum over j_src
    for (std::size_t i = 0; i < sm.size(); ++i)
      for (std::size_t jd = 0; jd < sp.size(); ++jd) {
        std::size_t u = sm[i], w = sp[jd];
        std::size_t row0 = mp.off[i * sp.size() + jd];
        for (std::size_t js = 0; js < sp.size(); ++js) {
          std::size_t v = sp[js];
          const std::vector<std::uint64_t>& tab = ct.comp[u][v][w];
          std::size_t dvw = ct.dim[v][w], duw = ct.dim[u][w], duv = ct.dim[u][v];
          std::size_t ycol0 = mp.off[i * sp.size() + js];
          std::size_t vcol0 = mm.dim + pp.off[js * sp.size() + jd];
          for (std::size_t s = 0; s < duv; ++s) {
            std::uint64_t ys = y[ycol0 + s] % p;
            if (ys == 0) continue;
            for (std::size_t t = 0; t < dvw; ++t)
              for (std::size_t q = 0; q < duw; ++q) {
                std::uint64_t c = tab[(s * dvw + t) * duw + q];
                if (c == 0) continue;
                std::uint64_t& cell = sur.at(row0 + q, vcol0 + t);
                cell = (cell + ys * c) % p;
              }
          }
        }
      }
    if (raw_rank(std::move(sur), p) != mp.dim) return false;
  }
  return true;
}

std::vector<std::size_t> mults_to_seq(const std::vector<std::size_t>& mults) {
  std::vector<std::size_t> seq;
  for (std::size_t v = 0; v < mults.size(); ++v)
    for (std::size_t c = 0; c < mults[v]; ++c) seq.push_back(v);
  return seq;
}

bool algebras_equal(const Algebra& a, const Algebra& b) {
  if (!(a.field == b.field) || a.dim != b.dim) return false;
  if (!(a.unit == b.unit)) return false;
  for (std::size_t i = 0; i < a.sc.size(); ++i)
    if (a.sc[i] != b.sc[i]) return false;
  return true;
}

}  // namespace

Complex rebuild_candidate(const AddBasisPtr& add, const SearchShape& shape,
                          const std::vector<std::vector<std::size_t>>& mults,
                          const std::vector<std::uint32_t>& diff_coords) {
  Field f = add->alg->field;
  int span = shape.hi - shape.lo + 1;
  if (static_cast<int>(mults.size()) != span)
    throw Error("Internal", "shape multiplicity count mismatch");
  std::vector<std::vector<std::size_t>> seqs;
  for (const auto& m : mults) seqs.push_back(mults_to_seq(m));

  Complex out;
  out.alg = add->alg;
  out.lo = shape.lo;
  out.add = add;
  for (const auto& sq : seqs) {
    Module m = zero_module(add->alg);
    for (std::size_t v : sq) m = direct_sum(m, add->projs[v]);
    out.terms.push_back(std::move(m));
    out.seqs.push_back(sq);
  }
  std::size_t pos = 0;
  for (int k = 0; k + 1 < span; ++k) {
    const auto& src = seqs[k];
    const auto& dst = seqs[k + 1];
    std::vector<std::size_t> osrc = seq_offsets(*add, src);
    std::vector<std::size_t> odst = seq_offsets(*add, dst);
    Matrix d(f, out.terms[k + 1].dim, out.terms[k].dim);
    for (std::size_t i = 0; i < src.size(); ++i)
      for (std::size_t j = 0; j < dst.size(); ++j) {
        std::size_t u = src[i], v = dst[j];
        for (std::size_t t = 0; t < add->block[u][v].size(); ++t) {
          if (pos >= diff_coords.size())
            throw Error("Internal", "not enough differential coordinates");
          std::uint32_t c = diff_coords[pos++];
          if (c == 0) continue;
          const Matrix& blk = add->block[u][v][t];
          Scalar sc = Scalar::from_int(f, c);
          for (std::size_t rr = 0; rr < blk.rows(); ++rr)
            for (std::size_t cc = 0; cc < blk.cols(); ++cc)
              d.at(odst[j] + rr, osrc[i] + cc) =
                  d.at(odst[j] + rr, osrc[i] + cc) + blk.at(rr, cc) * sc;
        }
      }
    out.diffs.push_back(std::move(d));
  }
  if (pos != diff_coords.size())
    throw Error("Internal", "too many differential coordinates");
  return normalize_range(std::move(out));
}

TiltingSearchOutput tilting_search(const AlgebraPtr& a, const std::vector<Vec>& idems,
                                   const SearchShape& shape, std::uint64_t seed,
                                   std::size_t budget) {
  if (a->field.is_rational())
    throw Error("UnsupportedField", "tilting search requires a prime field");
  if (shape.hi < shape.lo) throw Error("Internal", "empty search shape");
  std::uint64_t p = a->field.p;

  TiltingSearchOutput out;
  out.seed = seed;
  AddBasisPtr add = make_add_basis(a, idems);
  CornerTables ct = build_corner_tables(*add);
  std::vector<Complex> targets = projective_stalk_targets(add);
  std::size_t r = idems.size();
  int span = shape.hi - shape.lo + 1;

  // fingerprint -> retained candidate indices (End compared exactly on collision)
  std::map<std::string, std::vector<std::size_t>> dedup;

  auto handle_candidate = [&](const std::vector<std::vector<std::size_t>>& mults,
                              const std::vector<std::uint32_t>& coords) {
    Complex cand = rebuild_candidate(add, shape, mults, coords);
    if (cand.empty()) return;
    if (span > 2) {
      ComplexCheck cc = check_complex(cand);
      if (!cc.ok) return;  // differential does not square to zero
    }
    TiltingVerdict tv = is_tilting(cand, targets, 512);
    if (tv.kind == TiltingVerdict::Kind::Fail) return;
    EndAlgebra ea = end_algebra_complex(cand);
    SearchCandidate sc;
    sc.mults = mults;
    sc.diff_coords = coords;
    sc.complex = cand;
    sc.verdict = tv;
    sc.end_dim = ea.alg->dim;
    sc.end_center_dim = center_basis(*ea.alg).size();
    std::ostringstream fp;
    fp << static_cast<int>(tv.kind) << "|" << sc.end_dim << "|" << sc.end_center_dim << "|";
    for (const auto& m : mults)
      for (std::size_t v : m) fp << v << ",";
    auto& bucket = dedup[fp.str()];
    for (std::size_t idx : bucket) {
      EndAlgebra prev = end_algebra_complex(out.results[idx].complex);
      if (algebras_equal(*prev.alg, *ea.alg)) return;  // duplicate
    }
    bucket.push_back(out.results.size());
    out.results.push_back(std::move(sc));
  };

  // odometer over multiplicities: (degree, vertex) digits, last fastest
  std::vector<std::size_t> digits(static_cast<std::size_t>(span) * r, 0);
  bool shapes_done = false;
  auto next_shape = [&]() {
    std::size_t pos = digits.size();
    while (pos > 0) {
      --pos;
      if (++digits[pos] <= shape.max_mult) return;
      digits[pos] = 0;
      if (pos == 0) shapes_done = true;
    }
  };

  while (!shapes_done) {
    next_shape();
    if (shapes_done) break;
    std::vector<std::vector<std::size_t>> mults;
    for (int k = 0; k < span; ++k)
      mults.emplace_back(digits.begin() + k * r, digits.begin() + (k + 1) * r);

    // class-lattice pre-filter on the shape alone (not charged to the budget)
    {
      std::vector<std::vector<BigInt>> rows;
      for (int k = 0; k < span; ++k)
        for (std::size_t v = 0; v < r; ++v)
          if (mults[k][v] > 0) {
            std::vector<BigInt> row(r, 0);
            row[v] = ((shape.lo + k) % 2 == 0) ? 1 : -1;
            rows.push_back(std::move(row));
          }
      IntMatrix classes(rows.size(), r);
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < r; ++j) classes.at(i, j) = rows[i][j];
      bool covered = true;
      for (std::size_t v = 0; v < r && covered; ++v) {
        std::vector<BigInt> t(r, 0);
        t[v] = 1;
        if (!in_row_lattice(classes, t)) covered = false;
      }
      if (!covered) continue;
    }

    std::vector<std::vector<std::size_t>> seqs;
    for (const auto& m : mults) seqs.push_back(mults_to_seq(m));
    std::size_t hdim = 0;
    std::vector<std::size_t> pair_dims;
    for (int k = 0; k + 1 < span; ++k) {
      MapSpace ms = map_space(ct, seqs[k], seqs[k + 1]);
      pair_dims.push_back(ms.dim);
      hdim += ms.dim;
    }

    std::vector<std::uint32_t> coords(hdim, 0);
    bool coords_done = false;
    while (!coords_done) {
      if (out.examined >= budget) {
        out.budget_exceeded = true;
        return out;
      }
      ++out.examined;
      bool pass = true;
      if (span == 2) {
        std::vector<std::uint64_t> y(coords.begin(), coords.end());
        pass = two_term_screen(ct, seqs[0], seqs[1], y, p);
        if (pass) handle_candidate(mults, coords);
      } else if (span == 1) {
        handle_candidate(mults, coords);
      } else {
        handle_candidate(mults, coords);
      }
      // advance differential coordinates, last fastest
      std::size_t pos = coords.size();
      coords_done = true;
      while (pos > 0) {
        --pos;
        if (++coords[pos] < p) {
          coords_done = false;
          break;
        }
        coords[pos] = 0;
      }
      if (hdim == 0) coords_done = true;
    }
  }
  return out;
}

}  // namespace mirrorsmith
