#include "mirrorsmith/examples.hpp"

#include "mirrorsmith/presentations.hpp"

namespace mirrorsmith::examples {

namespace {

std::size_t index_of(const std::vector<Vec>& vecs, const Vec& target) {
  for (std::size_t i = 0; i < vecs.size(); ++i)
    if (vecs[i] == target) return i;
  throw Error("Internal", "expected vector is missing from an echelon basis");
}

}  // namespace

std::string field_token(Field f) {
  return f.is_rational() ? std::string("Q") : "F" + std::to_string(f.p);
}

Doubling doubling_a(Field f) {
  std::string tok = field_token(f);
  CompiledPresentation cp = build_path_algebra(parse_presentation(presentations::a_text(tok)));
  AlgebraPtr a = cp.alg;
  Vec e1 = cp.basis.vertex_idems[0];
  Vec e2 = cp.basis.vertex_idems[1];
  Vec g = cp.basis.arrow_elems[0];   // loop at the first vertex
  Vec be = cp.basis.arrow_elems[1];  // first vertex -> second
  Vec al = cp.basis.arrow_elems[2];  // second vertex -> first
  CornerTensor ct = tensor_over_corner(a, e1);
  MirrorAlgebra r = build_mirror(ct, unit_level(ct.lam));

  std::size_t q = ct.ea_basis.size();
  auto cls = [&](const Vec& left, const Vec& right) {
    return ct.pair_map.col(index_of(ct.ae_basis, left) * q + index_of(ct.ea_basis, right));
  };
  Vec t0 = cls(e1, e1), t1 = cls(e1, g), t3 = cls(e1, be), t4 = cls(al, e1);
  auto base_part = [&](const Vec& v) { return r.incl.apply(v); };
  auto ideal_part = [&](const Vec& v) { return r.ideal.apply(v); };

  PresentationAssignment wit;
  wit.vertex_images = {vec_sub(base_part(e1), ideal_part(t0)), base_part(e2), ideal_part(t0)};
  wit.arrow_images = {vec_sub(base_part(g), ideal_part(t1)),  vec_sub(base_part(be), ideal_part(t3)),
                      vec_sub(base_part(al), ideal_part(t4)), ideal_part(t4),
                      ideal_part(t3),                         ideal_part(t1)};

  PresentationAssignment cw;
  cw.vertex_images = {ct.lam.alg->unit};
  cw.arrow_images = {ct.lam.to_corner(g)};

  return Doubling{std::move(cp),
                  std::move(e1),
                  std::move(ct),
                  std::move(r),
                  parse_presentation(presentations::lambda_text(tok)),
                  std::move(cw),
                  parse_presentation(presentations::ra_text(tok)),
                  std::move(wit)};
}

Doubling doubling_b(Field f) {
  std::string tok = field_token(f);
  CompiledPresentation cp = build_path_algebra(parse_presentation(presentations::b_text(tok)));
  AlgebraPtr b = cp.alg;
  Vec e1 = cp.basis.vertex_idems[0];
  Vec e2 = cp.basis.vertex_idems[1];
  Vec be = cp.basis.arrow_elems[0];  // first vertex -> second
  Vec al = cp.basis.arrow_elems[1];  // second vertex -> first
  Vec m = b->multiply(be, al);       // generator of the corner radical
  CornerTensor ct = tensor_over_corner(b, e1);
  MirrorAlgebra r = build_mirror(ct, unit_level(ct.lam));

  std::size_t q = ct.ea_basis.size();
  auto cls = [&](const Vec& left, const Vec& right) {
    return ct.pair_map.col(index_of(ct.ae_basis, left) * q + index_of(ct.ea_basis, right));
  };
  Vec s0 = cls(e1, e1), s3 = cls(e1, be), s5 = cls(al, e1);
  auto base_part = [&](const Vec& v) { return r.incl.apply(v); };
  auto ideal_part = [&](const Vec& v) { return r.ideal.apply(v); };

  PresentationAssignment wit;
  wit.vertex_images = {vec_sub(base_part(e1), ideal_part(s0)), base_part(e2), ideal_part(s0)};
  wit.arrow_images = {vec_sub(base_part(be), ideal_part(s3)), vec_sub(base_part(al), ideal_part(s5)),
                      ideal_part(s5), ideal_part(s3)};

  PresentationAssignment cw;
  cw.vertex_images = {ct.lam.alg->unit};
  cw.arrow_images = {ct.lam.to_corner(m)};

  return Doubling{std::move(cp),
                  std::move(e1),
                  std::move(ct),
                  std::move(r),
                  parse_presentation(presentations::lambda_text(tok)),
                  std::move(cw),
                  parse_presentation(presentations::rb_text(tok)),
                  std::move(wit)};
}

EndAlgebra endo_model_a(Field f) {
  AlgebraPtr lam =
      build_path_algebra(parse_presentation(presentations::lambda_text(field_token(f)))).alg;
  Module reg = regular_module(lam);
  // quotient by the submodule generated by x: the simple module, without
  // needing a radical computation (so this works over every field)
  Module simple = quotient_module(reg, submodule_span(reg, {lam->basis_vec(1)}));
  return end_algebra(direct_sum(reg, simple));
}

EndAlgebra endo_model_b(Field f) {
  AlgebraPtr lam =
      build_path_algebra(parse_presentation(presentations::lambda_text(field_token(f)))).alg;
  Module reg = regular_module(lam);
  Vec xsq = lam->multiply(lam->basis_vec(1), lam->basis_vec(1));
  Module len2 = quotient_module(reg, submodule_span(reg, {xsq}));
  return end_algebra(direct_sum(reg, len2));
}

}  // namespace mirrorsmith::examples
