#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <string>
#include <vector>

#include "mirrorsmith/mirror.hpp"
#include "mirrorsmith/modrep.hpp"
#include "mirrorsmith/presentations.hpp"
#include "mirrorsmith/quiver.hpp"
#include "support/corpus.hpp"

using namespace mirrorsmith;
namespace pres = mirrorsmith::presentations;

namespace {

std::string err_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code;
  }
  return "";
}

CompiledPresentation compile(const std::string& text) {
  return build_path_algebra(parse_presentation(text));
}

Vec unit_vec(Field f, std::size_t n, std::size_t i) {
  Vec v = vec_zero(f, n);
  v[i] = Scalar::one(f);
  return v;
}

// Linear map X -> A induced by multiplication on pure pairs; well defined
// because the pairing quotient only divides out multiplication-compatible
// relations.
Matrix multiplication_descent(const CornerTensor& ct) {
  Field f = ct.delta.mod.alg->field;
  std::size_t n = ct.ae_basis.empty() ? ct.lam.incl.rows() : ct.ae_basis.front().size();
  std::size_t d = ct.delta.mod.dim;
  std::size_t q = ct.ea_basis.size();
  std::vector<Vec> cols;
  for (std::size_t k = 0; k < d; ++k) {
    auto lift = solve_linear(ct.pair_map, unit_vec(f, d, k));
    REQUIRE(lift.has_value());
    Vec acc = vec_zero(f, n);
    for (std::size_t i = 0; i < ct.ae_basis.size(); ++i)
      for (std::size_t j = 0; j < q; ++j) {
        Scalar c = (*lift)[i * q + j];
        if (c.is_zero()) continue;
        acc = vec_add(acc, vec_scale(c, ct.delta.left_alg->multiply(ct.ae_basis[i], ct.ea_basis[j])));
      }
    cols.push_back(std::move(acc));
  }
  return Matrix::from_cols(f, cols, n);
}

}  // namespace

TEST_CASE("level factories certify centrality and reject outsiders") {
  CompiledPresentation cpA = compile(pres::a_text("Q"));
  AlgebraPtr a = cpA.alg;
  Vec e1 = cpA.basis.vertex_idems[0];
  Corner cor = corner(a, e1);
  REQUIRE(cor.alg->dim == 3);

  Level ue = unit_level(cor);
  CHECK(ue.corner == cor.alg->unit);
  CHECK(ue.ambient == cor.idem);
  CHECK(ue.certified_against == 3);
  Level z = zero_level(cor);
  CHECK(vec_is_zero(z.corner));
  CHECK(vec_is_zero(z.ambient));

  // the corner here is commutative, so every element is a legal twist
  for (std::size_t i = 0; i < 3; ++i) {
    Level li = make_level(cor, unit_vec(a->field, 3, i));
    CHECK(li.corner == unit_vec(a->field, 3, i));
    Level back = level_from_ambient(cor, li.ambient);
    CHECK(back.corner == li.corner);
  }
  // corner basis vector 1 is the loop at the first vertex
  CHECK(cor.to_ambient(unit_vec(a->field, 3, 1)) == cpA.basis.arrow_elems[0]);

  // ambient element outside the corner subspace
  CHECK(err_code([&] { level_from_ambient(cor, cpA.basis.vertex_idems[1]); }) ==
        "LevelNotCentral");

  // the full algebra is a corner too, and there the arrow between distinct
  // vertices is not central
  Corner full = corner(a, a->unit);
  REQUIRE(full.alg->dim == 6);
  Vec beta = full.to_corner(cpA.basis.arrow_elems[1]);
  CHECK(err_code([&] { make_level(full, beta); }) == "LevelNotCentral");
  // wrong coordinate length
  CHECK(err_code([&] { make_level(cor, vec_zero(a->field, 2)); }) == "LevelNotCentral");
}

TEST_CASE("pairing vanishes at twist zero and is multiplication at the unit twist") {
  CompiledPresentation lam = compile(pres::lambda_text("Q"));
  AlgebraPtr l = lam.alg;
  CornerTensor ct = tensor_over_corner(l, l->unit);
  REQUIRE(ct.delta.mod.dim == 3);

  OmegaMap om0 = omega_map(ct, zero_level(ct.lam));
  CHECK(om0.table.is_zero());

  OmegaMap ome = omega_map(ct, unit_level(ct.lam));
  Matrix m = multiplication_descent(ct);
  REQUIRE(is_invertible(m));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Vec lhs = m.apply(ome.apply(unit_vec(l->field, 3, i), unit_vec(l->field, 3, j)));
      Vec rhs = l->multiply(m.col(i), m.col(j));
      CHECK(lhs == rhs);
    }

  // same story on a noncommutative example with the full corner
  CompiledPresentation cpA = compile(pres::a_text("Q"));
  CornerTensor cta = tensor_over_corner(cpA.alg, cpA.alg->unit);
  REQUIRE(cta.delta.mod.dim == 6);
  OmegaMap omea = omega_map(cta, unit_level(cta.lam));
  Matrix ma = multiplication_descent(cta);
  REQUIRE(is_invertible(ma));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      CHECK(ma.apply(omea.apply(unit_vec(cpA.alg->field, 6, i), unit_vec(cpA.alg->field, 6, j))) ==
            cpA.alg->multiply(ma.col(i), ma.col(j)));
}

TEST_CASE("twist endomorphism powers, factorization, and descent invertibility") {
  CompiledPresentation cpA = compile(pres::a_text("Q"));
  AlgebraPtr a = cpA.alg;
  Field f = a->field;
  Vec e1 = cpA.basis.vertex_idems[0];
  CornerTensor ct = tensor_over_corner(a, e1);
  REQUIRE(ct.delta.mod.dim == 6);
  REQUIRE(ct.lam.alg->dim == 3);

  Matrix re = rho_endo(ct, unit_level(ct.lam));
  CHECK(re == Matrix::identity(f, 6));
  Matrix r0 = rho_endo(ct, zero_level(ct.lam));
  CHECK(r0.is_zero());

  // nilpotent twist: the loop generates the corner radical
  Level lx = make_level(ct.lam, unit_vec(f, 3, 1));
  Matrix rx = rho_endo(ct, lx);
  CHECK_FALSE(rx.is_zero());
  Matrix rx2 = rx * rx;
  CHECK_FALSE(rx2.is_zero());
  CHECK((rx2 * rx).is_zero());
  // the square twist matches the squared endomorphism
  Level lx2 = make_level(ct.lam, unit_vec(f, 3, 2));
  CHECK(rho_endo(ct, lx2) == rx2);

  // a stale ambient slot is ignored: only corner coordinates matter
  Level stale{unit_vec(f, 3, 1), vec_zero(f, 6), 3};
  CHECK(rho_endo(ct, stale) == rx);

  // twisted tables factor through the endomorphism
  OmegaMap ome = omega_map(ct, unit_level(ct.lam));
  OmegaMap omx = omega_map(ct, lx);
  CHECK(omx.table == rx * ome.table);

  // descent to the balanced square: always balanced, invertible only for unit twists
  OmegaDescent de = omega_descend(ct, ome);
  CHECK(de.balanced);
  CHECK(de.balanced_dim == 6);
  CHECK(rank(de.induced) == 6);
  OmegaDescent dx = omega_descend(ct, omx);
  CHECK(dx.balanced);
  CHECK(dx.balanced_dim == 6);
  CHECK(rank(dx.induced) < 6);
}

TEST_CASE("pairing table agrees with elementwise recomputation on pure pairs") {
  CompiledPresentation cpA = compile(pres::a_text("Q"));
  AlgebraPtr a = cpA.alg;
  Field f = a->field;
  Vec e1 = cpA.basis.vertex_idems[0];
  CornerTensor ct = tensor_over_corner(a, e1);
  std::size_t p = ct.ae_basis.size(), q = ct.ea_basis.size(), d = ct.delta.mod.dim;
  REQUIRE(p == 4);
  REQUIRE(q == 4);
  Matrix ae_cols = Matrix::from_cols(f, ct.ae_basis, a->dim);

  for (const Level& lv : {unit_level(ct.lam), make_level(ct.lam, unit_vec(f, 3, 1))}) {
    OmegaMap om = omega_map(ct, lv);
    CHECK(om.table == omega_table_via_product_formula(ct, lv));
    for (std::size_t s = 0; s < p; ++s)
      for (std::size_t t = 0; t < q; ++t)
        for (std::size_t u = 0; u < p; ++u)
          for (std::size_t v = 0; v < q; ++v) {
            Vec w = a->multiply(a->multiply(ct.ae_basis[s], a->multiply(ct.ea_basis[t], ct.ae_basis[u])),
                                lv.ambient);
            auto lc = solve_linear(ae_cols, w);
            REQUIRE(lc.has_value());
            Vec fresh = vec_zero(f, d);
            for (std::size_t i = 0; i < p; ++i)
              if (!(*lc)[i].is_zero())
                fresh = vec_add(fresh, vec_scale((*lc)[i], ct.pair_map.col(i * q + v)));
            CHECK(fresh == om.apply(ct.pair_map.col(s * q + t), ct.pair_map.col(u * q + v)));
          }
  }
}

TEST_CASE("pairing is balanced and bilinear over the outer actions") {
  CompiledPresentation cpA = compile(pres::a_text("Q"));
  AlgebraPtr a = cpA.alg;
  Field f = a->field;
  CornerTensor ct = tensor_over_corner(a, cpA.basis.vertex_idems[0]);
  std::size_t d = ct.delta.mod.dim;
  OmegaMap om = omega_map(ct, make_level(ct.lam, unit_vec(f, 3, 1)));
  for (std::size_t k = 0; k < a->dim; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Vec di = unit_vec(f, d, i), dj = unit_vec(f, d, j);
        CHECK(om.apply(ct.delta.lact[k].col(i), dj) == ct.delta.lact[k].apply(om.apply(di, dj)));
        CHECK(om.apply(di, ct.delta.ract[k].col(j)) == ct.delta.ract[k].apply(om.apply(di, dj)));
        CHECK(om.apply(ct.delta.ract[k].col(i), dj) == om.apply(di, ct.delta.lact[k].col(j)));
      }
}

TEST_CASE("center-to-endomorphisms comparison is an isomorphism on the worked examples") {
  CompiledPresentation cpA = compile(pres::a_text("Q"));
  RhoIsoReport ra = rho_iso_check(cpA.alg, cpA.basis.vertex_idems[0]);
  CHECK(ra.ok());
  CHECK(ra.center_dim == 3);
  CHECK(ra.end_dim == 3);

  // cross-check the endomorphism count against the module-hom computation
  CornerTensor ct = tensor_over_corner(cpA.alg, cpA.basis.vertex_idems[0]);
  CHECK(hom_basis(ct.delta.mod, ct.delta.mod).size() == 3);

  CompiledPresentation cpB = compile(pres::b_text("Q"));
  REQUIRE(cpB.alg->dim == 9);
  RhoIsoReport rb = rho_iso_check(cpB.alg, cpB.basis.vertex_idems[0]);
  CHECK(rb.ok());
  CHECK(rb.center_dim == 3);
  CHECK(rb.end_dim == 3);

  // full corner: the comparison recovers the classical center-of-A picture
  RhoIsoReport rfull = rho_iso_check(cpA.alg, cpA.alg->unit);
  CHECK(rfull.ok());
  CHECK(rfull.center_dim == center_basis(*cpA.alg).size());
  CHECK(rfull.end_dim == rfull.center_dim);
}

TEST_CASE("doubled algebras of the worked examples have the expected shape") {
  CompiledPresentation cpA = compile(pres::a_text("Q"));
  AlgebraPtr a = cpA.alg;
  Vec e1 = cpA.basis.vertex_idems[0];
  CornerTensor cta = tensor_over_corner(a, e1);

  MirrorAlgebra ra = build_mirror(cta, unit_level(cta.lam));
  CHECK(ra.alg->dim == 12);
  CHECK(ra.base_dim == 6);
  CHECK(ra.ideal_dim == 6);
  CHECK(check_algebra(*ra.alg).ok);
  CHECK(ra.proj * ra.incl == Matrix::identity(a->field, 6));
  IdealizedCheck ica = check_idealized_extension(ra);
  CHECK(ica.ok());
  CHECK_FALSE(ica.ideal_square_zero);  // unit twist: the doubled part squares onto itself
  GabrielSkeleton ska = gabriel_skeleton(*ra.alg);
  CHECK(ska.idempotents.size() == 3);
  std::size_t arrows = 0;
  for (const auto& row : ska.arrow_counts)
    for (std::size_t c : row) arrows += c;
  CHECK(arrows == 6);

  MirrorAlgebra ra0 = build_mirror(cta, zero_level(cta.lam));
  CHECK(ra0.alg->dim == 12);
  CHECK(check_algebra(*ra0.alg).ok);
  IdealizedCheck ica0 = check_idealized_extension(ra0);
  CHECK(ica0.ok());
  CHECK(ica0.ideal_square_zero);  // zero twist: square-zero extension

  CompiledPresentation cpB = compile(pres::b_text("Q"));
  CornerTensor ctb = tensor_over_corner(cpB.alg, cpB.basis.vertex_idems[0]);
  CHECK(ctb.delta.mod.dim == 9);
  MirrorAlgebra rb = build_mirror(ctb, unit_level(ctb.lam));
  CHECK(rb.alg->dim == 18);
  CHECK(check_algebra(*rb.alg).ok);
  GabrielSkeleton skb = gabriel_skeleton(*rb.alg);
  CHECK(skb.idempotents.size() == 3);
  arrows = 0;
  for (const auto& row : skb.arrow_counts)
    for (std::size_t c : row) arrows += c;
  CHECK(arrows == 4);
}

TEST_CASE("degenerate idempotents: zero gives the base algebra back, one doubles it") {
  CompiledPresentation cpA = compile(pres::a_text("Q"));
  AlgebraPtr a = cpA.alg;
  Field f = a->field;

  Vec zero = vec_zero(f, 6);
  CornerTensor ct0 = tensor_over_corner(a, zero);
  CHECK(ct0.lam.alg->dim == 0);
  CHECK(ct0.delta.mod.dim == 0);
  MirrorAlgebra r0 = build_mirror(ct0, zero_level(ct0.lam));
  CHECK(r0.alg->dim == 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      CHECK(r0.alg->basis_product(i, j) == a->basis_product(i, j));
  CHECK(r0.alg->unit == a->unit);
  RhoIsoReport rep0 = rho_iso_check(ct0);
  CHECK(rep0.ok());
  CHECK(rep0.center_dim == 0);
  LevelEquivResult tr = levels_isomorphic(a, zero, zero_level(ct0.lam), zero_level(ct0.lam));
  CHECK(tr.equivalent);

  CornerTensor ct1 = tensor_over_corner(a, a->unit);
  MirrorAlgebra r1 = build_mirror(ct1, unit_level(ct1.lam));
  CHECK(r1.alg->dim == 12);
  CHECK(check_algebra(*r1.alg).ok);

  // doubling can be iterated
  CompiledPresentation lam = compile(pres::lambda_text("Q"));
  CornerTensor ctl = tensor_over_corner(lam.alg, lam.alg->unit);
  MirrorAlgebra rl = build_mirror(ctl, unit_level(ctl.lam));
  CHECK(rl.alg->dim == 6);
  CHECK(check_algebra(*rl.alg).ok);
  CornerTensor ctl2 = tensor_over_corner(rl.alg, rl.alg->unit);
  MirrorAlgebra rl2 = build_mirror(ctl2, unit_level(ctl2.lam));
  CHECK(rl2.alg->dim == 12);
  CHECK(check_algebra(*rl2.alg).ok);
}

TEST_CASE("idealized-extension checker pinpoints a broken ideal axiom") {
  CompiledPresentation cp = compile("field Q\nvertex u\nvertex v\narrow s u v\nrelations\nend\n");
  AlgebraPtr a = cp.alg;
  REQUIRE(a->dim == 3);
  Field f = a->field;
  Matrix a_cols = Matrix::from_cols(f, {a->unit}, 3);
  Vec diff = vec_sub(cp.basis.vertex_idems[0], cp.basis.vertex_idems[1]);
  Matrix x_cols = Matrix::from_cols(f, {diff, unit_vec(f, 3, 2)}, 3);
  IdealizedCheck ic = check_idealized_extension(*a, a_cols, x_cols);
  CHECK(ic.subalgebra);
  CHECK(ic.identity);
  CHECK_FALSE(ic.ideal);
  CHECK(ic.direct_sum);
  CHECK_FALSE(ic.ok());
  CHECK(ic.failure == "ideal");
}

TEST_CASE("twist orbit decision on the truncated polynomial corner") {
  CompiledPresentation lam = compile(pres::lambda_text("Q"));
  AlgebraPtr l = lam.alg;
  Field f = l->field;
  Corner cor = corner(l, l->unit);
  Level lx = make_level(cor, unit_vec(f, 3, 1));
  Level lx_plus = make_level(cor, vec_add(unit_vec(f, 3, 1), unit_vec(f, 3, 2)));
  Level le = unit_level(cor);
  Level l0 = zero_level(cor);

  LevelEquivResult r1 = levels_isomorphic(l, l->unit, lx_plus, lx);
  REQUIRE(r1.equivalent);
  REQUIRE(r1.unit.has_value());
  CHECK(*r1.unit == vec_add(unit_vec(f, 3, 0), unit_vec(f, 3, 1)));  // 1 + x
  // transported twist really is the other one
  CHECK(cor.alg->multiply(lx.corner, *r1.unit) == lx_plus.corner);

  LevelEquivResult r2 = levels_isomorphic(l, l->unit, lx, lx_plus);
  REQUIRE(r2.equivalent);
  CHECK(cor.alg->multiply(lx_plus.corner, *r2.unit) == lx.corner);

  LevelEquivResult same = levels_isomorphic(l, l->unit, lx, lx);
  REQUIRE(same.equivalent);
  CHECK(*same.unit == cor.alg->unit);

  // zero and unit twists are never in the same orbit over a nonzero corner
  CHECK_FALSE(levels_isomorphic(l, l->unit, l0, le).equivalent);
  CHECK_FALSE(levels_isomorphic(l, l->unit, le, l0).equivalent);

  // budget accounting is exact: the first unit in the zero-orbit scan is
  // candidate number 17 on the rational grid
  CHECK(err_code([&] { levels_isomorphic(l, l->unit, l0, l0, 16); }) == "SearchBudgetExceeded");
  LevelEquivResult rb = levels_isomorphic(l, l->unit, l0, l0, 17);
  REQUIRE(rb.equivalent);
  CHECK(*rb.unit == cor.alg->unit);
}

TEST_CASE("twist orbits transport to matched doubled algebras") {
  CompiledPresentation cpA = compile(pres::a_text("Q"));
  AlgebraPtr a = cpA.alg;
  Field f = a->field;
  Vec e1 = cpA.basis.vertex_idems[0];
  CornerTensor ct = tensor_over_corner(a, e1);
  Level lg = make_level(ct.lam, unit_vec(f, 3, 1));
  Level lg_plus = make_level(ct.lam, vec_add(unit_vec(f, 3, 1), unit_vec(f, 3, 2)));

  LevelEquivResult res = levels_isomorphic(a, e1, lg_plus, lg);
  REQUIRE(res.equivalent);
  CHECK(*res.unit == vec_add(unit_vec(f, 3, 0), unit_vec(f, 3, 1)));

  MirrorAlgebra r_plus = build_mirror(ct, lg_plus);
  MirrorAlgebra r_g = build_mirror(ct, lg);
  CHECK(mirrors_matched_by_unit(r_plus, r_g, *res.unit));

  // the identity-on-the-base map does not match the zero and unit twists
  MirrorAlgebra r_0 = build_mirror(ct, zero_level(ct.lam));
  MirrorAlgebra r_e = build_mirror(ct, unit_level(ct.lam));
  CHECK_FALSE(mirrors_matched_by_unit(r_0, r_e, ct.lam.alg->unit));
  CHECK_FALSE(levels_isomorphic(a, e1, zero_level(ct.lam), unit_level(ct.lam)).equivalent);
}

TEST_CASE("doubling invariants hold across a random corpus") {
  std::vector<corpus::Instance> all = corpus::instances(20, 0xA1B2, 24);
  REQUIRE(all.size() == 20);
  std::size_t idx = 0;
  for (const corpus::Instance& inst : all) {
    CAPTURE(inst.seed);
    CAPTURE(inst.text);
    Field f = inst.alg->field;
    std::size_t d = inst.ct.delta.mod.dim;

    // the center comparison map is an isomorphism onto the bimodule endomorphisms
    RhoIsoReport rep = rho_iso_check(inst.ct);
    CHECK(rep.ok());

    // twisted tables factor through the twist endomorphism
    OmegaMap ome = omega_map(inst.ct, unit_level(inst.ct.lam));
    OmegaMap oml = omega_map(inst.ct, inst.lambda);
    CHECK(oml.table == rho_endo(inst.ct, inst.lambda) * ome.table);

    // invertibility of the twist, of its endomorphism, and of the descended
    // pairing all agree
    bool lam_unit = inst.ct.lam.alg->is_unit_element(inst.lambda.corner);
    Matrix rl = rho_endo(inst.ct, inst.lambda);
    CHECK(lam_unit == (rank(rl) == d));
    OmegaDescent dl = omega_descend(inst.ct, oml);
    CHECK(dl.balanced);
    CHECK(dl.balanced_dim == d);
    CHECK(lam_unit == (rank(dl.induced) == d));

    // the doubled algebra is a genuine algebra of the right size
    MirrorAlgebra r = build_mirror(inst.ct, inst.lambda);
    CHECK(r.alg->dim == inst.alg->dim + d);
    CHECK(check_algebra(*r.alg).ok);
    CHECK(r.proj * r.incl == Matrix::identity(f, inst.alg->dim));

    // zero twist gives a square-zero doubled part
    MirrorAlgebra r0 = build_mirror(inst.ct, zero_level(inst.ct.lam));
    bool sq_zero = true;
    for (std::size_t i = 0; i < d && sq_zero; ++i)
      for (std::size_t j = 0; j < d && sq_zero; ++j)
        if (!vec_is_zero(r0.alg->multiply(r0.ideal.col(i), r0.ideal.col(j)))) sq_zero = false;
    CHECK(sq_zero);

    // scaling a twist by a central unit stays in the same orbit, and the
    // doubled algebras are matched by the resulting unit
    Vec lmu = inst.ct.lam.alg->multiply(inst.lambda.corner, inst.unit_mu);
    Level lev_lmu = make_level(inst.ct.lam, lmu);
    LevelEquivResult eq = levels_isomorphic(inst.alg, inst.idem, lev_lmu, inst.lambda);
    CHECK(eq.equivalent);
    if (eq.equivalent && idx % 4 == 0) {
      MirrorAlgebra r2 = build_mirror(inst.ct, lev_lmu);
      CHECK(mirrors_matched_by_unit(r2, r, *eq.unit));
    }

    // zero twist and unit twist are never in the same orbit (the doubled part
    // is nonzero for every corpus instance)
    CHECK(d > 0);
    CHECK_FALSE(
        levels_isomorphic(inst.alg, inst.idem, zero_level(inst.ct.lam), unit_level(inst.ct.lam))
            .equivalent);

    if (idx % 6 == 0) CHECK(check_idealized_extension(r).ok());
    ++idx;
  }
}
