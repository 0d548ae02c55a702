#include "mirrorsmith/modrep.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace mirrorsmith {

namespace {

bool struct_eq(const Algebra& a, const Algebra& b) {
  if (!(a.field == b.field) || a.dim != b.dim) return false;
  for (std::size_t t = 0; t < a.sc.size(); ++t)
    if (a.sc[t] != b.sc[t]) return false;
  return true;
}

// b must be structurally the opposite of a
bool opposite_of(const Algebra& a, const Algebra& b) {
  if (!(a.field == b.field) || a.dim != b.dim) return false;
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j)
      for (std::size_t k = 0; k < a.dim; ++k)
        if (a.c(i, j, k) != b.c(j, i, k)) return false;
  return true;
}

Vec coords_in(const Subspace& span, const Vec& v) {
  Vec r = span.reduce(v);
  if (!vec_is_zero(r)) throw Error("Internal", "vector escapes its span");
  Vec out;
  out.reserve(span.dim());
  for (std::size_t p : span.pivots()) out.push_back(v[p]);
  return out;
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

Matrix kron_with_id(const Matrix& a, std::size_t q) {  // a ⊗ I_q
  Matrix out(a.field(), a.rows() * q, a.cols() * q);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      for (std::size_t t = 0; t < q; ++t) out.at(r * q + t, c * q + t) = a.at(r, c);
  return out;
}

Matrix id_kron_with(std::size_t p, const Matrix& b) {  // I_p ⊗ b
  Matrix out(b.field(), p * b.rows(), p * b.cols());
  for (std::size_t s = 0; s < p; ++s)
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < b.cols(); ++c)
        out.at(s * b.rows() + r, s * b.cols() + c) = b.at(r, c);
  return out;
}

Subspace span_of_cols(const Matrix& m) {
  Subspace s(m.field(), m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j) s.insert(m.col(j));
  return s;
}

}  // namespace

Matrix Module::act(const Vec& x) const {
  Matrix out(field(), dim, dim);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) out = out + action[i].scaled(x[i]);
  return out;
}

ModuleCheck check_module(const Module& m) {
  ModuleCheck out;
  const Algebra& a = *m.alg;
  auto fail = [&](const std::string& s) {
    out.ok = false;
    if (out.failures.size() < 8) out.failures.push_back(s);
  };
  if (m.action.size() != a.dim) {
    fail("action table has " + std::to_string(m.action.size()) + " matrices, algebra dim " +
         std::to_string(a.dim));
    return out;
  }
  for (std::size_t i = 0; i < a.dim; ++i)
    if (m.action[i].rows() != m.dim || m.action[i].cols() != m.dim)
      fail("action matrix " + std::to_string(i) + " has wrong shape");
  if (!out.ok) return out;
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) {
      Matrix lhs = m.action[i] * m.action[j];
      Matrix rhs(m.field(), m.dim, m.dim);
      for (std::size_t k = 0; k < a.dim; ++k)
        if (!a.c(i, j, k).is_zero()) rhs = rhs + m.action[k].scaled(a.c(i, j, k));
      if (!(lhs == rhs)) fail("structure constants violated at pair (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
    }
  if (!(m.act(a.unit) == Matrix::identity(m.field(), m.dim))) fail("unit does not act as identity");
  return out;
}

Module regular_module(const AlgebraPtr& a) {
  Module m;
  m.alg = a;
  m.dim = a->dim;
  m.action.reserve(a->dim);
  for (std::size_t i = 0; i < a->dim; ++i) m.action.push_back(a->left_mult(a->basis_vec(i)));
  return m;
}

Module direct_sum(const Module& m, const Module& n) {
  if (!struct_eq(*m.alg, *n.alg)) throw Error("Internal", "direct_sum over different algebras");
  Module out;
  out.alg = m.alg;
  out.dim = m.dim + n.dim;
  for (std::size_t i = 0; i < m.alg->dim; ++i) {
    Matrix b(m.field(), out.dim, out.dim);
    b.paste(0, 0, m.action[i]);
    b.paste(m.dim, m.dim, n.action[i]);
    out.action.push_back(std::move(b));
  }
  return out;
}

Subspace submodule_span(const Module& m, const std::vector<Vec>& gens) {
  Subspace sp(m.field(), m.dim);
  for (const Vec& g : gens)
    for (std::size_t k = 0; k < m.alg->dim; ++k) sp.insert(m.action[k].apply(g));
  return sp;
}

Module submodule(const Module& m, const Subspace& span) {
  Module out;
  out.alg = m.alg;
  out.dim = span.dim();
  for (std::size_t k = 0; k < m.alg->dim; ++k) {
    Matrix mat(m.field(), out.dim, out.dim);
    for (std::size_t s = 0; s < out.dim; ++s) {
      Vec w = m.action[k].apply(span.basis()[s]);
      if (!span.contains(w)) throw Error("Internal", "span is not a submodule");
      mat.set_col(s, coords_in(span, w));
    }
    out.action.push_back(std::move(mat));
  }
  return out;
}

Module quotient_module(const Module& m, const Subspace& sub) {
  for (const Vec& b : sub.basis())
    for (std::size_t k = 0; k < m.alg->dim; ++k)
      if (!sub.contains(m.action[k].apply(b)))
        throw Error("Internal", "quotient by a non-submodule");
  QuotientSpace qs = quotient_space(sub);
  Module out;
  out.alg = m.alg;
  out.dim = qs.coords.size();
  for (std::size_t k = 0; k < m.alg->dim; ++k)
    out.action.push_back(qs.proj * m.action[k] * qs.sect);
  return out;
}

Subspace radical_span(const Module& m) {
  std::vector<Vec> rad = radical_basis(*m.alg);
  Subspace sp(m.field(), m.dim);
  for (const Vec& r : rad) {
    Matrix ar = m.act(r);
    for (std::size_t j = 0; j < m.dim; ++j) sp.insert(ar.col(j));
  }
  return sp;
}

std::vector<Module> simple_modules(const AlgebraPtr& a) {
  std::vector<Module> out;
  for (const ProjectiveSummand& p : projectives(a))
    out.push_back(quotient_module(p.mod, radical_span(p.mod)));
  return out;
}

std::vector<ModuleHom> hom_basis(const Module& m, const Module& n) {
  if (!struct_eq(*m.alg, *n.alg)) throw Error("Internal", "hom_basis over different algebras");
  Field f = m.field();
  std::size_t nm = n.dim * m.dim;
  Matrix k = Matrix::identity(f, nm);
  for (std::size_t i = 0; i < m.alg->dim && k.cols() > 0; ++i) {
    Matrix b(f, nm, k.cols());
    for (std::size_t j = 0; j < k.cols(); ++j) {
      Matrix h = unflatten(f, k.col(j), n.dim, m.dim);
      Matrix d = n.action[i] * h - h * m.action[i];
      b.set_col(j, flatten(d));
    }
    std::vector<Vec> ker = kernel_basis(b);
    k = k * Matrix::from_cols(f, ker, k.cols());
  }
  std::vector<ModuleHom> out;
  for (std::size_t j = 0; j < k.cols(); ++j)
    out.push_back(ModuleHom{unflatten(f, k.col(j), n.dim, m.dim)});
  return out;
}

bool is_module_hom(const Module& m, const Module& n, const Matrix& h) {
  if (h.rows() != n.dim || h.cols() != m.dim) return false;
  for (std::size_t i = 0; i < m.alg->dim; ++i)
    if (!(n.action[i] * h == h * m.action[i])) return false;
  return true;
}

EndAlgebra end_algebra(const Module& m) {
  std::vector<ModuleHom> homs = hom_basis(m, m);
  if (homs.empty()) throw Error("Internal", "endomorphism algebra of a zero module");
  Field f = m.field();
  std::size_t d = homs.size();
  std::vector<Vec> cols;
  cols.reserve(d);
  for (const ModuleHom& h : homs) cols.push_back(flatten(h.mat));
  Matrix s = Matrix::from_cols(f, cols, m.dim * m.dim);
  auto coords = [&](const Matrix& x) {
    auto sol = solve_linear(s, flatten(x));
    if (!sol) throw Error("Internal", "endomorphism outside the hom span");
    return *sol;
  };
  auto e = std::make_shared<Algebra>(f, d);
  for (std::size_t i = 0; i < d; ++i) e->labels[i] = "h" + std::to_string(i);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      // f*g means "apply f, then g": column convention composes as mat(g)*mat(f)
      Vec pc = coords(homs[j].mat * homs[i].mat);
      for (std::size_t k = 0; k < d; ++k) e->c(i, j, k) = pc[k];
    }
  e->unit = coords(Matrix::identity(f, m.dim));
  EndAlgebra out;
  out.alg = e;
  for (const ModuleHom& h : homs) out.basis.push_back(h.mat);
  return out;
}

Module dual_module(const Module& m) { return dual_module(m, opposite(m.alg)); }

Module dual_module(const Module& m, const AlgebraPtr& op) {
  if (!opposite_of(*m.alg, *op)) throw Error("Internal", "dual_module: not the opposite algebra");
  Module out;
  out.alg = op;
  out.dim = m.dim;
  for (const Matrix& a : m.action) out.action.push_back(a.transpose());
  return out;
}

std::vector<ProjectiveSummand> projectives(const AlgebraPtr& a) {
  std::vector<Vec> prims = primitive_idempotents(*a);
  Module reg = regular_module(a);
  std::vector<ProjectiveSummand> out;
  for (const Vec& e : prims) {
    Subspace sp = span_of_cols(a->right_mult(e));
    ProjectiveSummand ps{submodule(reg, sp), e,
                         Matrix::from_cols(a->field, sp.basis(), a->dim)};
    out.push_back(std::move(ps));
  }
  return out;
}

CoverData projective_cover(const Module& m) {
  const AlgebraPtr& a = m.alg;
  std::vector<Vec> rad = radical_basis(*a);
  Subspace radm(m.field(), m.dim);
  for (const Vec& r : rad) {
    Matrix ar = m.act(r);
    for (std::size_t j = 0; j < m.dim; ++j) radm.insert(ar.col(j));
  }
  std::vector<Vec> prims = primitive_idempotents(*a);
  std::vector<ProjectiveSummand> projs = projectives(a);
  Subspace cur(m.field(), m.dim);
  std::vector<std::pair<std::size_t, Vec>> gens;
  while (cur.dim() < m.dim) {
    Subspace big = radm;
    for (const Vec& b : cur.basis()) big.insert(b);
    std::size_t pick = m.dim;
    for (std::size_t j = 0; j < m.dim; ++j) {
      Vec u = vec_zero(m.field(), m.dim);
      u[j] = Scalar::one(m.field());
      if (!big.contains(u)) {
        pick = j;
        break;
      }
    }
    if (pick == m.dim) throw Error("Internal", "top exhausted before the module");
    Vec u = vec_zero(m.field(), m.dim);
    u[pick] = Scalar::one(m.field());
    std::size_t which = prims.size();
    Vec g;
    for (std::size_t i = 0; i < prims.size(); ++i) {
      Vec w = m.act(prims[i]).apply(u);
      if (!big.contains(w)) {
        which = i;
        g = std::move(w);
        break;
      }
    }
    if (which == prims.size()) throw Error("Internal", "no idempotent separates the top");
    gens.emplace_back(which, g);
    for (std::size_t k = 0; k < a->dim; ++k) cur.insert(m.action[k].apply(g));
  }
  CoverData out;
  out.proj = Module{a, 0, {}};
  bool first = true;
  std::vector<Vec> cols;  // cover map columns
  for (auto& [idx, g] : gens) {
    out.idem_indices.push_back(idx);
    out.proj = first ? projs[idx].mod : direct_sum(out.proj, projs[idx].mod);
    first = false;
    const Matrix& incl = projs[idx].incl;
    for (std::size_t c = 0; c < incl.cols(); ++c) cols.push_back(m.act(incl.col(c)).apply(g));
  }
  if (first) {
    out.proj.action.assign(a->dim, Matrix(m.field(), 0, 0));
  }
  out.map = Matrix::from_cols(m.field(), cols, m.dim);
  if (rank(out.map) != m.dim) throw Error("Internal", "cover map not surjective");
  return out;
}

CoverData free_cover(const Module& m) {
  const AlgebraPtr& a = m.alg;
  CoverData out;
  out.proj = Module{a, 0, {}};
  Module reg = regular_module(a);
  std::vector<Vec> cols;
  bool first = true;
  for (std::size_t t = 0; t < m.dim; ++t) {
    out.proj = first ? reg : direct_sum(out.proj, reg);
    first = false;
    for (std::size_t k = 0; k < a->dim; ++k) cols.push_back(m.action[k].col(t));
  }
  if (first) out.proj.action.assign(a->dim, Matrix(m.field(), 0, 0));
  out.map = Matrix::from_cols(m.field(), cols, m.dim);
  if (m.dim > 0 && rank(out.map) != m.dim)
    throw Error("Internal", "free cover not surjective");
  return out;
}

bool is_projective(const Module& m) {
  if (m.dim == 0) return true;
  CoverData cd = projective_cover(m);
  return kernel_basis(cd.map).empty();
}

bool is_injective(const Module& m) { return is_projective(dual_module(m)); }

bool is_faithful(const Module& m) {
  std::vector<Vec> cols;
  for (const Matrix& a : m.action) cols.push_back(flatten(a));
  Matrix s = Matrix::from_cols(m.field(), cols, m.dim * m.dim);
  return rank(s) == m.alg->dim;
}

namespace {

ResolutionData resolve(const Module& m, std::size_t length, bool minimal) {
  ResolutionData out;
  out.minimal = minimal;
  Module cur = m;
  Matrix incl_prev;  // kernel basis of the previous step, as columns in P_{i-1}
  for (std::size_t step = 0; step <= length; ++step) {
    CoverData cd = minimal ? projective_cover(cur) : free_cover(cur);
    if (step == 0)
      out.aug = cd.map;
    else {
      Matrix d = incl_prev * cd.map;
      if (minimal) {
        // minimality: the differential image lies inside rad * P_{i-1}
        Subspace radp = radical_span(out.projs.back());
        for (std::size_t c = 0; c < d.cols(); ++c)
          if (!radp.contains(d.col(c))) throw Error("Internal", "resolution not minimal");
      }
      out.diffs.push_back(std::move(d));
    }
    out.projs.push_back(cd.proj);
    std::vector<Vec> ker = kernel_basis(cd.map);
    if (ker.empty()) break;
    Subspace ksp = Subspace::from_vectors(m.field(), cd.proj.dim, ker);
    incl_prev = Matrix::from_cols(m.field(), ksp.basis(), cd.proj.dim);
    cur = submodule(cd.proj, ksp);
  }
  return out;
}

}  // namespace

ResolutionData minimal_projective_resolution(const Module& m, std::size_t length) {
  return resolve(m, length, true);
}

ResolutionData free_resolution(const Module& m, std::size_t length) {
  return resolve(m, length, false);
}

std::vector<std::size_t> tor_dims_from(const ResolutionData& res, const Module& n_left,
                                       std::size_t nmax) {
  Field f = n_left.field();
  AlgebraPtr lam = n_left.alg;
  if (!res.projs.empty() && !opposite_of(*lam, *res.projs[0].alg))
    throw Error("Internal", "tor: resolution is not over the opposite algebra");
  std::size_t avail = res.projs.size();
  std::size_t need = std::min(avail, nmax + 2);
  std::vector<Subspace> rels;
  std::vector<QuotientSpace> qs;
  for (std::size_t i = 0; i < need; ++i) {
    const Module& p = res.projs[i];
    std::size_t nd = n_left.dim;
    Subspace r(f, p.dim * nd);
    for (std::size_t t = 0; t < lam->dim; ++t)
      for (std::size_t u = 0; u < p.dim; ++u)
        for (std::size_t v = 0; v < nd; ++v) {
          Vec rel = vec_zero(f, p.dim * nd);
          Vec w1 = p.action[t].col(u);   // u-th basis vector times l_t (right action)
          Vec w2 = n_left.action[t].col(v);
          for (std::size_t s = 0; s < p.dim; ++s) rel[s * nd + v] += w1[s];
          for (std::size_t w = 0; w < nd; ++w) rel[u * nd + w] -= w2[w];
          r.insert(rel);
        }
    qs.push_back(quotient_space(r));
    rels.push_back(std::move(r));
  }
  // induced differentials on the tensor quotients
  std::vector<Matrix> dbar;  // dbar[i]: T_{i+1} -> T_i
  for (std::size_t i = 0; i + 1 < need; ++i) {
    Matrix big = kron_with_id(res.diffs[i], n_left.dim);
    for (const Vec& r : rels[i + 1].basis())
      if (!rels[i].contains(big.apply(r)))
        throw Error("Internal", "tor: differential does not respect relations");
    dbar.push_back(qs[i].proj * big * qs[i + 1].sect);
  }
  for (std::size_t i = 0; i + 1 < dbar.size(); ++i)
    if (!(dbar[i] * dbar[i + 1]).is_zero()) throw Error("Internal", "tor: d*d != 0");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k <= nmax; ++k) {
    if (k >= need) {
      out.push_back(0);
      continue;
    }
    std::size_t tdim = qs[k].coords.size();
    std::size_t rk_in = k < dbar.size() ? rank(dbar[k]) : 0;    // T_{k+1} -> T_k
    std::size_t rk_out = k == 0 ? 0 : rank(dbar[k - 1]);        // T_k -> T_{k-1}
    out.push_back(tdim - rk_out - rk_in);
  }
  return out;
}

std::vector<std::size_t> tor_dims(const Module& m_right, const Module& n_left,
                                  std::size_t nmax) {
  ResolutionData res = minimal_projective_resolution(m_right, nmax + 1);
  return tor_dims_from(res, n_left, nmax);
}

Bimodule make_bimodule(const AlgebraPtr& left, const AlgebraPtr& right, std::size_t dim,
                       const std::vector<Matrix>& lact, const std::vector<Matrix>& ract) {
  Field f = left->field;
  if (!(f == right->field)) throw Error("NotBimodule", "sides over different fields");
  if (lact.size() != left->dim || ract.size() != right->dim)
    throw Error("NotBimodule", "action table sizes do not match the algebras");
  auto law = [&](const Algebra& alg, const std::vector<Matrix>& act, bool anti,
                 const char* side) {
    for (std::size_t i = 0; i < alg.dim; ++i)
      for (std::size_t j = 0; j < alg.dim; ++j) {
        Matrix lhs = anti ? act[j] * act[i] : act[i] * act[j];
        Matrix rhs(f, dim, dim);
        for (std::size_t k = 0; k < alg.dim; ++k)
          if (!alg.c(i, j, k).is_zero()) rhs = rhs + act[k].scaled(alg.c(i, j, k));
        if (!(lhs == rhs))
          throw Error("NotBimodule", std::string(side) + " action violates the product law");
      }
    Matrix u(f, dim, dim);
    for (std::size_t k = 0; k < alg.dim; ++k)
      if (!alg.unit[k].is_zero()) u = u + act[k].scaled(alg.unit[k]);
    if (!(u == Matrix::identity(f, dim)))
      throw Error("NotBimodule", std::string(side) + " unit does not act as identity");
  };
  law(*left, lact, false, "left");
  law(*right, ract, true, "right");
  for (std::size_t i = 0; i < left->dim; ++i)
    for (std::size_t j = 0; j < right->dim; ++j)
      if (!(lact[i] * ract[j] == ract[j] * lact[i]))
        throw Error("NotBimodule", "left and right actions do not commute");
  Bimodule out;
  out.left_alg = left;
  out.right_alg = right;
  out.env = tensor_product(left, opposite(right));
  out.lact = lact;
  out.ract = ract;
  out.mod.alg = out.env;
  out.mod.dim = dim;
  out.mod.action.reserve(left->dim * right->dim);
  for (std::size_t i = 0; i < left->dim; ++i)
    for (std::size_t j = 0; j < right->dim; ++j) out.mod.action.push_back(lact[i] * ract[j]);
  return out;
}

Bimodule dual_bimodule(const Bimodule& x) {
  std::vector<Matrix> l2, r2;
  for (const Matrix& r : x.ract) l2.push_back(r.transpose());
  for (const Matrix& l : x.lact) r2.push_back(l.transpose());
  return make_bimodule(x.right_alg, x.left_alg, x.mod.dim, l2, r2);
}

CornerTensor tensor_over_corner(const AlgebraPtr& a, const Vec& e) {
  if (!a->is_idempotent(e)) throw Error("NotIdempotent", "corner tensor needs an idempotent");
  Field f = a->field;
  CornerTensor out{{}, corner(a, e), {}, {}, {}};
  Subspace ae = span_of_cols(a->right_mult(e));
  Subspace ea = span_of_cols(a->left_mult(e));
  out.ae_basis = ae.basis();
  out.ea_basis = ea.basis();
  std::size_t p = ae.dim(), q = ea.dim(), ld = out.lam.alg->dim;
  Subspace rel(f, p * q);
  for (std::size_t t = 0; t < ld; ++t) {
    Vec lv = out.lam.incl.col(t);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < q; ++j) {
        Vec alpha = coords_in(ae, a->multiply(out.ae_basis[i], lv));
        Vec beta = coords_in(ea, a->multiply(lv, out.ea_basis[j]));
        Vec r = vec_zero(f, p * q);
        for (std::size_t s = 0; s < p; ++s) r[s * q + j] += alpha[s];
        for (std::size_t w = 0; w < q; ++w) r[i * q + w] -= beta[w];
        rel.insert(r);
      }
  }
  QuotientSpace qs = quotient_space(rel);
  out.pair_map = qs.proj;
  std::size_t ddim = qs.coords.size();
  std::vector<Matrix> dl, dr;
  for (std::size_t k = 0; k < a->dim; ++k) {
    Matrix lk(f, p, p), rk(f, q, q);
    for (std::size_t i = 0; i < p; ++i)
      lk.set_col(i, coords_in(ae, a->multiply(a->basis_vec(k), out.ae_basis[i])));
    for (std::size_t j = 0; j < q; ++j)
      rk.set_col(j, coords_in(ea, a->multiply(out.ea_basis[j], a->basis_vec(k))));
    Matrix bigl = kron_with_id(lk, q);
    Matrix bigr = id_kron_with(p, rk);
    for (const Vec& r : rel.basis())
      if (!rel.contains(bigl.apply(r)) || !rel.contains(bigr.apply(r)))
        throw Error("Internal", "corner tensor action does not respect relations");
    dl.push_back(qs.proj * bigl * qs.sect);
    dr.push_back(qs.proj * bigr * qs.sect);
  }
  out.delta = make_bimodule(a, a, ddim, dl, dr);
  return out;
}

CornerSideModules corner_side_modules(const AlgebraPtr& a, const Vec& e) {
  Field f = a->field;
  CornerSideModules out{corner(a, e), Subspace(f, a->dim), Subspace(f, a->dim),
                        {},           {},                  {},
                        {},           {},                  {}};
  out.ae_span = span_of_cols(a->right_mult(e));
  out.ea_span = span_of_cols(a->left_mult(e));
  std::size_t p = out.ae_span.dim(), q = out.ea_span.dim(), ld = out.lam.alg->dim;
  Module reg = regular_module(a);
  out.ae_left_A = submodule(reg, out.ae_span);
  std::vector<Matrix> ae_l(a->dim), ae_r(ld, Matrix(f, p, p));
  for (std::size_t k = 0; k < a->dim; ++k) ae_l[k] = out.ae_left_A.action[k];
  std::vector<Matrix> ea_l(ld, Matrix(f, q, q)), ea_r(a->dim, Matrix(f, q, q));
  for (std::size_t t = 0; t < ld; ++t) {
    Vec lv = out.lam.incl.col(t);
    for (std::size_t s = 0; s < p; ++s)
      ae_r[t].set_col(s, coords_in(out.ae_span, a->multiply(out.ae_span.basis()[s], lv)));
    for (std::size_t s = 0; s < q; ++s)
      ea_l[t].set_col(s, coords_in(out.ea_span, a->multiply(lv, out.ea_span.basis()[s])));
  }
  for (std::size_t k = 0; k < a->dim; ++k)
    for (std::size_t s = 0; s < q; ++s)
      ea_r[k].set_col(s, coords_in(out.ea_span, a->multiply(out.ea_span.basis()[s],
                                                            a->basis_vec(k))));
  out.ae_right_lam = Module{opposite(out.lam.alg), p, ae_r};
  out.ea_left_lam = Module{out.lam.alg, q, ea_l};
  out.ea_right_A = Module{opposite(a), q, ea_r};
  out.ae_bimod = make_bimodule(a, out.lam.alg, p, ae_l, ae_r);
  out.ea_bimod = make_bimodule(out.lam.alg, a, q, ea_l, ea_r);
  return out;
}

DomDim dominant_dimension(const AlgebraPtr& a, std::size_t bound) {
  AlgebraPtr op = opposite(a);
  Module cur = regular_module(a);
  for (std::size_t j = 0; j < bound; ++j) {
    if (cur.dim == 0) return DomDim{bound, true};  // coresolution already ended
    Module dm = dual_module(cur, op);
    CoverData cd = projective_cover(dm);
    Module inj = dual_module(cd.proj, cur.alg);  // injective hull of cur
    Matrix emb = cd.map.transpose();
    if (rank(emb) != cur.dim) throw Error("Internal", "hull embedding not injective");
    if (!is_projective(inj)) return DomDim{j, false};
    Subspace image(a->field, inj.dim);
    for (std::size_t c = 0; c < emb.cols(); ++c) image.insert(emb.col(c));
    cur = quotient_module(inj, image);
  }
  return DomDim{bound, true};
}

IsoResult module_isomorphic(const Module& m, const Module& n, std::uint64_t seed) {
  IsoResult out;
  if (!struct_eq(*m.alg, *n.alg))
    throw Error("Internal", "module_isomorphic over different algebras");
  if (m.dim != n.dim) {
    out.kind = IsoResult::Kind::NotIsomorphic;
    return out;
  }
  if (m.dim == 0) {
    out.kind = IsoResult::Kind::Isomorphic;
    out.witness = Matrix(m.field(), 0, 0);
    return out;
  }
  std::vector<ModuleHom> homs = hom_basis(m, n);
  if (homs.empty()) {
    out.kind = IsoResult::Kind::NotIsomorphic;
    return out;
  }
  std::vector<Matrix> mats;
  for (const ModuleHom& h : homs) mats.push_back(h.mat);
  ComboSearchResult res = invertible_combo(mats, seed);
  if (res.coeffs) {
    Matrix w(m.field(), m.dim, m.dim);
    for (std::size_t t = 0; t < mats.size(); ++t)
      if (!(*res.coeffs)[t].is_zero()) w = w + mats[t].scaled((*res.coeffs)[t]);
    out.kind = IsoResult::Kind::Isomorphic;
    out.witness = std::move(w);
  } else {
    out.kind = res.decided ? IsoResult::Kind::NotIsomorphic : IsoResult::Kind::Inconclusive;
  }
  return out;
}

GendoCertificate is_gendo_symmetric(const AlgebraPtr& a, const Vec& e) {
  CornerSideModules csm = corner_side_modules(a, e);
  GendoCertificate out;
  out.faithful = is_faithful(csm.ae_left_A);
  out.projective = is_projective(csm.ae_left_A);
  out.injective = is_injective(csm.ae_left_A);
  out.domdim_ok = dominant_dimension(a, 2).value >= 2;
  out.dual_iso = module_isomorphic(dual_bimodule(csm.ae_bimod).mod, csm.ea_bimod.mod);
  return out;
}

Vec proj_inj_idempotent(const AlgebraPtr& a) {
  std::vector<ProjectiveSummand> projs = projectives(a);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < projs.size(); ++i) {
    bool fresh = true;
    for (std::size_t r : reps)
      if (module_isomorphic(projs[i].mod, projs[r].mod).kind ==
          IsoResult::Kind::Isomorphic) {
        fresh = false;
        break;
      }
    if (fresh) reps.push_back(i);
  }
  Vec e = vec_zero(a->field, a->dim);
  bool any = false;
  for (std::size_t r : reps)
    if (is_injective(projs[r].mod)) {
      e = vec_add(e, projs[r].idem);
      any = true;
    }
  if (!any) throw Error("NoFaithfulProjInj", "no projective summand is injective");
  Module ae = submodule(regular_module(a), span_of_cols(a->right_mult(e)));
  if (!is_faithful(ae))
    throw Error("NoFaithfulProjInj", "projective-injective part is not faithful");
  return e;
}

}  // namespace mirrorsmith
