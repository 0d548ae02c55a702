#include "mirrorsmith/mirror.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace mirrorsmith {

namespace {

Vec coords_in(const Subspace& span, const Vec& v) {
  Vec r = span.reduce(v);
  if (!vec_is_zero(r)) throw Error("Internal", "vector escapes its span");
  Vec out;
  out.reserve(span.dim());
  for (std::size_t p : span.pivots()) out.push_back(v[p]);
  return out;
}

Subspace span_of(Field f, std::size_t ambient, const std::vector<Vec>& vecs) {
  Subspace s(f, ambient);
  for (const Vec& v : vecs) s.insert(v);
  return s;
}

// Canonical right inverse of a surjective matrix (free coordinates zero).
Matrix section_of(const Matrix& m) {
  Matrix s(m.field(), m.cols(), m.rows());
  for (std::size_t j = 0; j < m.rows(); ++j) {
    Vec rhs = vec_zero(m.field(), m.rows());
    rhs[j] = Scalar::one(m.field());
    std::optional<Vec> x = solve_linear(m, rhs);
    if (!x) throw Error("Internal", "quotient projection is not surjective");
    s.set_col(j, *x);
  }
  return s;
}

Matrix act_of(Field f, std::size_t d, const std::vector<Matrix>& per_basis, const Vec& elem) {
  Matrix out(f, d, d);
  for (std::size_t k = 0; k < elem.size(); ++k)
    if (!elem[k].is_zero()) out = out + per_basis[k].scaled(elem[k]);
  return out;
}

void require_central(const Corner& lam, const Vec& corner_coords,
                     std::size_t* certified = nullptr) {
  const Algebra& l = *lam.alg;
  if (corner_coords.size() != l.dim)
    throw Error("LevelNotCentral", "twist has " + std::to_string(corner_coords.size()) +
                                       " coordinates but the corner has dim " +
                                       std::to_string(l.dim));
  for (std::size_t t = 0; t < l.dim; ++t) {
    Vec bt = l.basis_vec(t);
    if (l.multiply(corner_coords, bt) != l.multiply(bt, corner_coords))
      throw Error("LevelNotCentral",
                  "twist does not commute with corner basis vector " + l.labels[t]);
  }
  if (certified) *certified = l.dim;
}

Vec flatten(const Matrix& h) {
  Vec v;
  v.reserve(h.rows() * h.cols());
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = 0; c < h.cols(); ++c) v.push_back(h.at(r, c));
  return v;
}

Matrix unflatten(Field f, const Vec& v, std::size_t rows, std::size_t cols) {
  Matrix h(f, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) h.at(r, c) = v[r * cols + c];
  return h;
}

bool algebras_struct_eq(const Algebra& a, const Algebra& b) {
  return a.field == b.field && a.dim == b.dim && a.sc == b.sc && a.unit == b.unit;
}

// Basis of {h : h commutes with every outer action on both sides} — the
// endomorphisms of X over the enveloping algebra, computed through the
// one-sided action matrices (equivalent to, and far smaller than, running
// over a basis of the tensor-product algebra).
std::vector<Matrix> bimodule_end_basis(const Bimodule& x) {
  Field f = x.left_alg->field;
  std::size_t d = x.mod.dim;
  Matrix cand = Matrix::identity(f, d * d);
  auto constrain = [&](const Matrix& act) {
    if (cand.cols() == 0) return;
    Matrix c(f, d * d, cand.cols());
    for (std::size_t j = 0; j < cand.cols(); ++j) {
      Matrix h = unflatten(f, cand.col(j), d, d);
      c.set_col(j, flatten(act * h - h * act));
    }
    std::vector<Vec> kb = kernel_basis(c);
    Matrix next(f, d * d, kb.size());
    for (std::size_t i = 0; i < kb.size(); ++i) next.set_col(i, cand.apply(kb[i]));
    cand = std::move(next);
  };
  for (const Matrix& m : x.lact) constrain(m);
  for (const Matrix& m : x.ract) constrain(m);
  std::vector<Matrix> out;
  out.reserve(cand.cols());
  for (std::size_t j = 0; j < cand.cols(); ++j) out.push_back(unflatten(f, cand.col(j), d, d));
  return out;
}

}  // namespace

Level make_level(const Corner& lam, const Vec& corner_coords) {
  Level out;
  require_central(lam, corner_coords, &out.certified_against);
  out.corner = corner_coords;
  out.ambient = lam.to_ambient(corner_coords);
  return out;
}

Level level_from_ambient(const Corner& lam, const Vec& ambient) {
  if (!lam.span.contains(ambient))
    throw Error("LevelNotCentral", "element does not lie in the corner algebra");
  return make_level(lam, lam.to_corner(ambient));
}

Level unit_level(const Corner& lam) { return make_level(lam, lam.alg->unit); }

Level zero_level(const Corner& lam) {
  return make_level(lam, vec_zero(lam.alg->field, lam.alg->dim));
}

Vec OmegaMap::apply(const Vec& x, const Vec& y) const {
  Vec out = vec_zero(table.field(), dim);
  for (std::size_t s = 0; s < dim; ++s) {
    if (x[s].is_zero()) continue;
    for (std::size_t t = 0; t < dim; ++t) {
      if (y[t].is_zero()) continue;
      Scalar c = x[s] * y[t];
      Vec col = table.col(s * dim + t);
      for (std::size_t k = 0; k < dim; ++k)
        if (!col[k].is_zero()) out[k] += c * col[k];
    }
  }
  return out;
}

Matrix rho_endo(const CornerTensor& ct, const Level& level) {
  const Algebra& a = *ct.delta.left_alg;
  Field f = a.field;
  require_central(ct.lam, level.corner);
  Vec amb = ct.lam.to_ambient(level.corner);
  std::size_t p = ct.ae_basis.size(), q = ct.ea_basis.size(), d = ct.delta.mod.dim;
  Subspace ae = span_of(f, a.dim, ct.ae_basis);
  // on pairing classes: (ae_s)(x)(ea_t) -> class of (ae_s * l)(x)(ea_t)
  Matrix fmat(f, d, p * q);
  for (std::size_t s = 0; s < p; ++s) {
    Vec lc = coords_in(ae, a.multiply(ct.ae_basis[s], amb));
    for (std::size_t t = 0; t < q; ++t) {
      Vec col = vec_zero(f, d);
      for (std::size_t w = 0; w < p; ++w) {
        if (lc[w].is_zero()) continue;
        Vec pc = ct.pair_map.col(w * q + t);
        for (std::size_t k = 0; k < d; ++k)
          if (!pc[k].is_zero()) col[k] += lc[w] * pc[k];
      }
      fmat.set_col(s * q + t, col);
    }
  }
  Matrix rho = fmat * section_of(ct.pair_map);
  if (!(rho * ct.pair_map == fmat))
    throw Error("Internal", "twist endomorphism did not descend to the quotient");
  return rho;
}

Matrix rho_endo(const AlgebraPtr& a, const Vec& e, const Level& level) {
  return rho_endo(tensor_over_corner(a, e), level);
}

OmegaMap omega_map(const CornerTensor& ct, const Level& level) {
  const Algebra& a = *ct.delta.left_alg;
  Field f = a.field;
  std::size_t p = ct.ae_basis.size(), q = ct.ea_basis.size(), d = ct.delta.mod.dim;
  Matrix rho = rho_endo(ct, level);  // certifies centrality as well
  Matrix sect = section_of(ct.pair_map);
  // With y the class of ae_u (x) ea_v, the pairing value at (x, y) is the
  // twist endomorphism applied to x * (ae_u * ea_v), the outer right action
  // of an ambient element; expand the second argument through a lift.
  std::vector<Matrix> ract_uv;
  ract_uv.reserve(p * q);
  for (std::size_t u = 0; u < p; ++u)
    for (std::size_t v = 0; v < q; ++v)
      ract_uv.push_back(act_of(f, d, ct.delta.ract, a.multiply(ct.ae_basis[u], ct.ea_basis[v])));
  OmegaMap out{d, Matrix(f, d, d * d)};
  for (std::size_t j = 0; j < d; ++j) {
    Matrix qj(f, d, d);
    for (std::size_t uv = 0; uv < p * q; ++uv)
      if (!sect.at(uv, j).is_zero()) qj = qj + ract_uv[uv].scaled(sect.at(uv, j));
    Matrix mj = rho * qj;
    for (std::size_t i = 0; i < d; ++i) out.table.set_col(i * d + j, mj.col(i));
  }
  return out;
}

OmegaMap omega_map(const AlgebraPtr& a, const Vec& e, const Level& level) {
  return omega_map(tensor_over_corner(a, e), level);
}

Matrix omega_table_via_product_formula(const CornerTensor& ct, const Level& level) {
  const Algebra& a = *ct.delta.left_alg;
  Field f = a.field;
  require_central(ct.lam, level.corner);
  Vec amb = ct.lam.to_ambient(level.corner);
  std::size_t p = ct.ae_basis.size(), q = ct.ea_basis.size(), d = ct.delta.mod.dim;
  Subspace ea = span_of(f, a.dim, ct.ea_basis);
  Matrix sect = section_of(ct.pair_map);
  // the twist folded into the right factor: class(u (x) v) -> class(u (x) l*v)
  Matrix fmat(f, d, p * q);
  for (std::size_t v = 0; v < q; ++v) {
    Vec zc = coords_in(ea, a.multiply(amb, ct.ea_basis[v]));
    for (std::size_t u = 0; u < p; ++u) {
      Vec col = vec_zero(f, d);
      for (std::size_t r = 0; r < q; ++r) {
        if (zc[r].is_zero()) continue;
        Vec pc = ct.pair_map.col(u * q + r);
        for (std::size_t k = 0; k < d; ++k)
          if (!pc[k].is_zero()) col[k] += zc[r] * pc[k];
      }
      fmat.set_col(u * q + v, col);
    }
  }
  Matrix sigma = fmat * sect;
  if (!(sigma * ct.pair_map == fmat))
    throw Error("Internal", "right-side twist did not descend to the quotient");
  // first argument contracted against the outer left action of ae_s * ea_t
  std::vector<Matrix> lact_st;
  lact_st.reserve(p * q);
  for (std::size_t s = 0; s < p; ++s)
    for (std::size_t t = 0; t < q; ++t)
      lact_st.push_back(act_of(f, d, ct.delta.lact, a.multiply(ct.ae_basis[s], ct.ea_basis[t])));
  Matrix table(f, d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    Matrix qi(f, d, d);
    for (std::size_t st = 0; st < p * q; ++st)
      if (!sect.at(st, i).is_zero()) qi = qi + lact_st[st].scaled(sect.at(st, i));
    Matrix mi = qi * sigma;
    for (std::size_t j = 0; j < d; ++j) table.set_col(i * d + j, mi.col(j));
  }
  return table;
}

OmegaDescent omega_descend(const CornerTensor& ct, const OmegaMap& om) {
  Field f = ct.pair_map.field();
  std::size_t d = om.dim, n = ct.delta.left_alg->dim;
  Subspace rel(f, d * d);
  for (std::size_t k = 0; k < n; ++k) {
    const Matrix& rk = ct.delta.ract[k];
    const Matrix& lk = ct.delta.lact[k];
    for (std::size_t i = 0; i < d; ++i) {
      Vec ri = rk.col(i);
      for (std::size_t j = 0; j < d; ++j) {
        Vec lj = lk.col(j);
        Vec r = vec_zero(f, d * d);
        for (std::size_t s = 0; s < d; ++s) r[s * d + j] += ri[s];
        for (std::size_t t = 0; t < d; ++t) r[i * d + t] -= lj[t];
        rel.insert(r);
      }
    }
  }
  OmegaDescent out;
  for (const Vec& r : rel.basis()) {
    Vec img = vec_zero(f, d);
    for (std::size_t st = 0; st < d * d; ++st) {
      if (r[st].is_zero()) continue;
      Vec col = om.table.col(st);
      for (std::size_t k = 0; k < d; ++k)
        if (!col[k].is_zero()) img[k] += r[st] * col[k];
    }
    if (!vec_is_zero(img)) out.balanced = false;
  }
  QuotientSpace qs = quotient_space(rel);
  out.balanced_dim = qs.coords.size();
  out.induced = om.table * qs.sect;
  return out;
}

RhoIsoReport rho_iso_check(const CornerTensor& ct) {
  Field f = ct.delta.left_alg->field;
  std::size_t d = ct.delta.mod.dim;
  RhoIsoReport rep;
  std::vector<Vec> zb = center_basis(*ct.lam.alg);
  rep.center_dim = zb.size();
  std::vector<Matrix> endb = bimodule_end_basis(ct.delta);
  rep.end_dim = endb.size();
  std::vector<Matrix> rhos;
  rhos.reserve(zb.size());
  std::vector<Level> levels;
  levels.reserve(zb.size());
  for (const Vec& z : zb) {
    levels.push_back(make_level(ct.lam, z));
    rhos.push_back(rho_endo(ct, levels.back()));
  }
  rep.unit_preserving = rho_endo(ct, unit_level(ct.lam)) == Matrix::identity(f, d);
  // linearity, exercised on the weighted sum of the whole center basis
  if (zb.empty()) {
    rep.linear = true;
  } else {
    Vec combo = vec_zero(f, ct.lam.alg->dim);
    Matrix sum(f, d, d);
    for (std::size_t k = 0; k < zb.size(); ++k) {
      Scalar w = Scalar::from_int(f, static_cast<std::int64_t>(k + 1));
      combo = vec_add(combo, vec_scale(w, zb[k]));
      sum = sum + rhos[k].scaled(w);
    }
    rep.linear = rho_endo(ct, make_level(ct.lam, combo)) == sum;
  }
  rep.multiplicative = true;
  for (std::size_t i = 0; i < zb.size() && rep.multiplicative; ++i)
    for (std::size_t j = i; j < zb.size(); ++j) {
      Matrix prod = rho_endo(ct, make_level(ct.lam, ct.lam.alg->multiply(zb[i], zb[j])));
      if (!(prod == rhos[i] * rhos[j]) || !(prod == rhos[j] * rhos[i])) {
        rep.multiplicative = false;
        break;
      }
    }
  Matrix stacked(f, d * d, zb.size());
  for (std::size_t k = 0; k < zb.size(); ++k) stacked.set_col(k, flatten(rhos[k]));
  rep.injective = rank(stacked) == zb.size();
  rep.bimodule_endos = true;
  for (const Matrix& r : rhos) {
    for (const Matrix& m : ct.delta.lact)
      if (!(r * m == m * r)) rep.bimodule_endos = false;
    for (const Matrix& m : ct.delta.ract)
      if (!(r * m == m * r)) rep.bimodule_endos = false;
    if (!rep.bimodule_endos) break;
  }
  Subspace span(f, d * d);
  for (const Matrix& r : rhos) span.insert(flatten(r));
  rep.surjective = true;
  for (const Matrix& h : endb)
    if (!span.contains(flatten(h))) {
      rep.surjective = false;
      break;
    }
  OmegaMap om_unit = omega_map(ct, unit_level(ct.lam));
  rep.omega_factors = true;
  for (std::size_t k = 0; k < zb.size(); ++k)
    if (!(omega_map(ct, levels[k]).table == rhos[k] * om_unit.table)) {
      rep.omega_factors = false;
      break;
    }
  return rep;
}

RhoIsoReport rho_iso_check(const AlgebraPtr& a, const Vec& e) {
  return rho_iso_check(tensor_over_corner(a, e));
}

MirrorAlgebra build_mirror(const CornerTensor& ct, const Level& level) {
  const AlgebraPtr& base = ct.delta.left_alg;
  const Algebra& a = *base;
  Field f = a.field;
  std::size_t n = a.dim, d = ct.delta.mod.dim, nn = n + d;
  OmegaMap om = omega_map(ct, level);
  Matrix alt = omega_table_via_product_formula(ct, level);
  if (!(om.table == alt)) throw Error("Internal", "the two pairing constructions disagree");
  Algebra r(f, nn);
  for (std::size_t i = 0; i < n; ++i) r.labels[i] = a.labels[i];
  for (std::size_t t = 0; t < d; ++t) r.labels[n + t] = "x" + std::to_string(t);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) r.c(i, j, k) = a.c(i, j, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < d; ++t) {
      Vec col = ct.delta.lact[i].col(t);
      for (std::size_t k = 0; k < d; ++k) r.c(i, n + t, n + k) = col[k];
    }
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t j = 0; j < n; ++j) {
      Vec col = ct.delta.ract[j].col(s);
      for (std::size_t k = 0; k < d; ++k) r.c(n + s, j, n + k) = col[k];
    }
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t t = 0; t < d; ++t) {
      Vec col = om.table.col(s * d + t);
      for (std::size_t k = 0; k < d; ++k) r.c(n + s, n + t, n + k) = col[k];
    }
  for (std::size_t i = 0; i < n; ++i) r.unit[i] = a.unit[i];
  MirrorAlgebra out;
  out.alg = std::make_shared<Algebra>(std::move(r));
  out.base = base;
  out.idem = ct.lam.idem;
  out.level = level;
  out.base_dim = n;
  out.ideal_dim = d;
  out.incl = Matrix(f, nn, n);
  out.incl.paste(0, 0, Matrix::identity(f, n));
  out.ideal = Matrix(f, nn, d);
  out.ideal.paste(n, 0, Matrix::identity(f, d));
  out.proj = Matrix(f, n, nn);
  out.proj.paste(0, 0, Matrix::identity(f, n));
  return out;
}

MirrorAlgebra build_mirror(const AlgebraPtr& a, const Vec& e, const Level& level) {
  return build_mirror(tensor_over_corner(a, e), level);
}

IdealizedCheck check_idealized_extension(const Algebra& r, const Matrix& a_cols,
                                         const Matrix& x_cols) {
  IdealizedCheck out;
  Field f = r.field;
  std::size_t nn = r.dim;
  Subspace asp(f, nn), xsp(f, nn);
  for (std::size_t j = 0; j < a_cols.cols(); ++j) asp.insert(a_cols.col(j));
  for (std::size_t j = 0; j < x_cols.cols(); ++j) xsp.insert(x_cols.col(j));
  out.subalgebra = true;
  for (std::size_t i = 0; i < a_cols.cols() && out.subalgebra; ++i)
    for (std::size_t j = 0; j < a_cols.cols(); ++j)
      if (!asp.contains(r.multiply(a_cols.col(i), a_cols.col(j)))) {
        out.subalgebra = false;
        break;
      }
  out.identity = asp.contains(r.unit);
  out.ideal = true;
  for (std::size_t k = 0; k < nn && out.ideal; ++k) {
    Vec bk = r.basis_vec(k);
    for (std::size_t j = 0; j < x_cols.cols(); ++j) {
      Vec xj = x_cols.col(j);
      if (!xsp.contains(r.multiply(bk, xj)) || !xsp.contains(r.multiply(xj, bk))) {
        out.ideal = false;
        break;
      }
    }
  }
  out.direct_sum = asp.dim() == a_cols.cols() && xsp.dim() == x_cols.cols() &&
                   a_cols.cols() + x_cols.cols() == nn && rank(hstack(a_cols, x_cols)) == nn;
  if (out.direct_sum) {
    std::optional<Matrix> minv = inverse(hstack(a_cols, x_cols));
    if (minv) {
      // the canonical retraction: coordinates of the subalgebra component
      Matrix pi = minv->block(0, 0, a_cols.cols(), nn);
      Matrix pihat = a_cols * pi;
      out.splitting = true;
      for (std::size_t i = 0; i < nn && out.splitting; ++i)
        for (std::size_t j = 0; j < nn; ++j)
          if (pi.apply(r.basis_product(i, j)) !=
              pi.apply(r.multiply(pihat.col(i), pihat.col(j)))) {
            out.splitting = false;
            break;
          }
    }
  }
  out.ideal_square_zero = true;
  for (std::size_t i = 0; i < x_cols.cols() && out.ideal_square_zero; ++i)
    for (std::size_t j = 0; j < x_cols.cols(); ++j)
      if (!vec_is_zero(r.multiply(x_cols.col(i), x_cols.col(j)))) {
        out.ideal_square_zero = false;
        break;
      }
  if (!out.subalgebra)
    out.failure = "subalgebra";
  else if (!out.identity)
    out.failure = "identity";
  else if (!out.ideal)
    out.failure = "ideal";
  else if (!out.direct_sum)
    out.failure = "direct_sum";
  else if (!out.splitting)
    out.failure = "splitting";
  return out;
}

IdealizedCheck check_idealized_extension(const MirrorAlgebra& mr) {
  IdealizedCheck out = check_idealized_extension(*mr.alg, mr.incl, mr.ideal);
  const Algebra& r = *mr.alg;
  const Algebra& b = *mr.base;
  bool pi_ok = mr.proj.rows() == b.dim && mr.proj.cols() == r.dim &&
               mr.proj * mr.incl == Matrix::identity(r.field, b.dim) &&
               (mr.proj * mr.ideal).is_zero() && mr.proj.apply(r.unit) == b.unit;
  for (std::size_t i = 0; i < r.dim && pi_ok; ++i)
    for (std::size_t j = 0; j < r.dim; ++j)
      if (mr.proj.apply(r.basis_product(i, j)) != b.multiply(mr.proj.col(i), mr.proj.col(j))) {
        pi_ok = false;
        break;
      }
  if (!pi_ok) {
    out.splitting = false;
    if (out.failure.empty()) out.failure = "splitting";
  }
  return out;
}

LevelEquivResult levels_isomorphic(const AlgebraPtr& a, const Vec& e, const Level& l1,
                                   const Level& l2, std::size_t budget) {
  Corner lam = corner(a, e);
  require_central(lam, l1.corner);
  require_central(lam, l2.corner);
  const Algebra& l = *lam.alg;
  Field f = l.field;
  std::size_t q = l.dim;
  std::vector<Vec> zb = center_basis(l);
  std::size_t z = zb.size();
  Matrix m(f, q, z);
  for (std::size_t k = 0; k < z; ++k) m.set_col(k, l.multiply(l2.corner, zb[k]));
  std::optional<Vec> t0 = solve_linear(m, l1.corner);
  if (!t0) return {};
  std::vector<Vec> kb = kernel_basis(m);
  // Candidate scalars: every residue over F_p; the integers 0..dim over Q,
  // enough points per parameter to decide a determinant of per-variable
  // degree at most dim.  Either way the sweep is conclusive.
  std::vector<Scalar> grid;
  if (f.is_rational())
    for (std::size_t s = 0; s <= q; ++s) grid.push_back(Scalar::from_int(f, (std::int64_t)s));
  else
    for (std::uint32_t s = 0; s < f.p; ++s) grid.push_back(Scalar::from_int(f, s));
  std::vector<std::size_t> digits(kb.size(), 0);
  std::size_t count = 0;
  for (;;) {
    if (++count > budget)
      throw Error("SearchBudgetExceeded",
                  "level unit search exceeded " + std::to_string(budget) + " candidates");
    Vec t = *t0;
    for (std::size_t i = 0; i < kb.size(); ++i)
      if (!grid[digits[i]].is_zero()) t = vec_add(t, vec_scale(grid[digits[i]], kb[i]));
    Vec mu = vec_zero(f, q);
    for (std::size_t k = 0; k < z; ++k)
      if (!t[k].is_zero()) mu = vec_add(mu, vec_scale(t[k], zb[k]));
    if (l.is_unit_element(mu)) return {true, mu};
    std::size_t i = kb.size();
    for (;;) {
      if (i == 0) return {};  // conclusive: no unit on the whole solution space
      --i;
      if (++digits[i] < grid.size()) break;
      digits[i] = 0;
    }
  }
}

bool mirrors_matched_by_unit(const MirrorAlgebra& r1, const MirrorAlgebra& r2,
                             const Vec& mu_corner) {
  if (!algebras_struct_eq(*r1.base, *r2.base) || r1.idem != r2.idem ||
      r1.base_dim != r2.base_dim || r1.ideal_dim != r2.ideal_dim)
    return false;
  CornerTensor ct = tensor_over_corner(r1.base, r1.idem);
  Matrix rho = rho_endo(ct, make_level(ct.lam, mu_corner));
  if (!is_invertible(rho)) return false;
  const Algebra& x = *r1.alg;
  const Algebra& y = *r2.alg;
  Field f = x.field;
  std::size_t n = r1.base_dim, nn = x.dim;
  Matrix phi(f, nn, nn);
  phi.paste(0, 0, Matrix::identity(f, n));
  phi.paste(n, n, rho);
  if (phi.apply(x.unit) != y.unit) return false;
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = 0; j < nn; ++j)
      if (phi.apply(x.basis_product(i, j)) != y.multiply(phi.col(i), phi.col(j))) return false;
  return true;
}

}  // namespace mirrorsmith
