#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mirrorsmith/algebra.hpp"

namespace mirrorsmith {

// Left module over a structure-constant algebra, column-vector convention:
// coords(b_i * m) = action[i] * coords(m). Right modules are left modules
// over the opposite algebra; bimodules are modules over left ⊗ right^op.
struct Module {
  AlgebraPtr alg;
  std::size_t dim = 0;
  std::vector<Matrix> action;  // one dim x dim matrix per algebra basis vector

  Field field() const { return alg->field; }
  Matrix act(const Vec& x) const;  // action of an algebra element
};

struct ModuleCheck {
  bool ok = true;
  std::vector<std::string> failures;
};

// Structure constants respected on all basis pairs; unit acts as identity.
ModuleCheck check_module(const Module& m);

Module regular_module(const AlgebraPtr& a);
Module direct_sum(const Module& m, const Module& n);

// Smallest submodule containing gens: span of act(b_k) * g over all k, g.
Subspace submodule_span(const Module& m, const std::vector<Vec>& gens);
// Module structure on an action-stable echelon span; coords at its pivots.
Module submodule(const Module& m, const Subspace& span);
Module quotient_module(const Module& m, const Subspace& sub);
Subspace radical_span(const Module& m);  // rad(A)*M
std::vector<Module> simple_modules(const AlgebraPtr& a);  // tops of the Ae_i

struct ModuleHom {
  Matrix mat;  // dim(target) x dim(source)
};

// Basis of the intertwiner space: h with h*act_M(b) = act_N(b)*h for all b.
std::vector<ModuleHom> hom_basis(const Module& m, const Module& n);
bool is_module_hom(const Module& m, const Module& n, const Matrix& h);

struct EndAlgebra {
  AlgebraPtr alg;             // product f*g = "apply f, then g"
  std::vector<Matrix> basis;  // hom matrices for the algebra basis
};
EndAlgebra end_algebra(const Module& m);

// k-dual as a left module over the opposite algebra (actions transposed).
// The second form uses a caller-supplied structurally-equal opposite.
Module dual_module(const Module& m);
Module dual_module(const Module& m, const AlgebraPtr& op);

struct ProjectiveSummand {
  Module mod;   // A*e as a left module
  Vec idem;     // the primitive idempotent e in A
  Matrix incl;  // dim(A) x dim(Ae), columns = module basis inside A
};
std::vector<ProjectiveSummand> projectives(const AlgebraPtr& a);

struct CoverData {
  Module proj;                           // projective mapping onto M
  Matrix map;                            // dim(M) x dim(proj), surjective
  std::vector<std::size_t> idem_indices; // summand tags into projectives(A)
};
CoverData projective_cover(const Module& m);  // minimal (kernel inside rad*P)
CoverData free_cover(const Module& m);        // one regular summand per basis vector

bool is_projective(const Module& m);  // zero cover kernel
bool is_injective(const Module& m);   // dual projective over the opposite
bool is_faithful(const Module& m);    // representation map injective

struct ResolutionData {
  std::vector<Module> projs;  // P_0, P_1, ...
  std::vector<Matrix> diffs;  // diffs[i]: P_{i+1} -> P_i
  Matrix aug;                 // P_0 -> M
  bool minimal = false;
};
// Stops early when a kernel vanishes; exactness asserted at every step.
ResolutionData minimal_projective_resolution(const Module& m, std::size_t length);
ResolutionData free_resolution(const Module& m, std::size_t length);

// Homology of (resolution of the right argument) tensored over its algebra
// with n_left. m_right must be a left module over opposite(n_left.alg).
std::vector<std::size_t> tor_dims(const Module& m_right, const Module& n_left,
                                  std::size_t nmax);
std::vector<std::size_t> tor_dims_from(const ResolutionData& res, const Module& n_left,
                                       std::size_t nmax);

struct Bimodule {
  AlgebraPtr left_alg, right_alg;
  AlgebraPtr env;  // tensor_product(left_alg, opposite(right_alg))
  Module mod;      // over env: (l @ r) acts as lact(l) * ract(r)
  std::vector<Matrix> lact, ract;
};
// Verifies the one-sided laws and that the two actions commute.
Bimodule make_bimodule(const AlgebraPtr& left, const AlgebraPtr& right, std::size_t dim,
                       const std::vector<Matrix>& lact, const std::vector<Matrix>& ract);
Bimodule dual_bimodule(const Bimodule& x);  // sides swap, actions transpose

// Δ = Ae ⊗_Λ eA over Λ = eAe, with the outer A-A-bimodule structure.
// Pairing: class of (ae-basis i) ⊗ (ea-basis j) = column i*q+j of pair_map.
struct CornerTensor {
  Bimodule delta;
  Corner lam;
  std::vector<Vec> ae_basis, ea_basis;  // echelon bases inside A
  Matrix pair_map;                      // dim(Δ) x (p*q)
};
CornerTensor tensor_over_corner(const AlgebraPtr& a, const Vec& e);

// One-sided and bimodule views of Ae and eA over A and over Λ = eAe.
struct CornerSideModules {
  Corner lam;
  Subspace ae_span, ea_span;
  Module ae_left_A;     // Ae as a left A-module
  Module ae_right_lam;  // Ae as a left module over opposite(Λ)
  Module ea_left_lam;   // eA as a left Λ-module
  Module ea_right_A;    // eA as a left module over opposite(A)
  Bimodule ae_bimod;    // A-Λ-bimodule
  Bimodule ea_bimod;    // Λ-A-bimodule
};
CornerSideModules corner_side_modules(const AlgebraPtr& a, const Vec& e);

struct DomDim {
  std::size_t value = 0;
  bool at_least = false;  // every inspected coresolution term was projective
};
// Leading projective terms of the minimal injective coresolution of A.
DomDim dominant_dimension(const AlgebraPtr& a, std::size_t bound);

struct IsoResult {
  enum class Kind { Isomorphic, NotIsomorphic, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::optional<Matrix> witness;
};
IsoResult module_isomorphic(const Module& m, const Module& n,
                            std::uint64_t seed = 0xA1B2);

struct GendoCertificate {
  bool faithful = false;
  bool projective = false;
  bool injective = false;
  bool domdim_ok = false;  // dominant dimension at least 2
  IsoResult dual_iso;      // D(Ae) vs eA over Λ ⊗ A^op
  bool ok() const {
    return faithful && projective && injective && domdim_ok &&
           dual_iso.kind == IsoResult::Kind::Isomorphic;
  }
};
GendoCertificate is_gendo_symmetric(const AlgebraPtr& a, const Vec& e);

// Sum of one idempotent per iso class of projective-injective summands;
// throws NoFaithfulProjInj when none exist or the result is not faithful.
Vec proj_inj_idempotent(const AlgebraPtr& a);

}  // namespace mirrorsmith
