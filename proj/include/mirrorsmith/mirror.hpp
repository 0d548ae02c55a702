#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mirrorsmith/algebra.hpp"
#include "mirrorsmith/modrep.hpp"

namespace mirrorsmith {

// Twist parameter of the doubled-algebra construction: a central element of
// the corner algebra L = eAe.  Factories certify centrality; LevelNotCentral
// is thrown for elements that fail to commute with some L basis vector.
struct Level {
  Vec corner;   // coordinates in the corner-algebra basis
  Vec ambient;  // the same element as an element of the ambient algebra
  std::size_t certified_against = 0;  // corner basis vectors the commutator check covered
};

Level make_level(const Corner& lam, const Vec& corner_coords);
Level level_from_ambient(const Corner& lam, const Vec& ambient);
Level unit_level(const Corner& lam);  // the corner unit e
Level zero_level(const Corner& lam);

// Twisted pairing on the doubled part X = Ae (x) eA over L: bilinear map
// X x X -> X sending (be(x)ec, b'e(x)ec') to the class of (b(ecb')e*l)(x)ec'.
// Stored as a table over the quotient basis of X.
struct OmegaMap {
  std::size_t dim = 0;  // dim X
  Matrix table;         // dim x dim^2; column s*dim+t = omega(x_s, x_t)
  Vec apply(const Vec& x, const Vec& y) const;
};

OmegaMap omega_map(const CornerTensor& ct, const Level& level);
OmegaMap omega_map(const AlgebraPtr& a, const Vec& e, const Level& level);

// Independent recomputation of the same pairing straight from the product
// formula with the twist folded into the right tensor factor,
// (be(x)ec, b'e(x)ec') -> (becb'e)(x)(l*ec'), evaluated through the other
// side's action.  build_mirror cross-checks omega_map against this table so
// a transcription slip in either route cannot slide through.
Matrix omega_table_via_product_formula(const CornerTensor& ct, const Level& level);

// Endomorphism of X induced by the twist: ae(x)eb -> (ae*l)(x)eb.
Matrix rho_endo(const CornerTensor& ct, const Level& level);
Matrix rho_endo(const AlgebraPtr& a, const Vec& e, const Level& level);

// The pairing descends to the quotient of X (x) X by the balancing
// relations (x*a)(x)y - x(x)(a*y).  balanced records that the table kills
// every such relation; invertibility of the induced matrix is the precise
// sense in which the pairing is bijective, and holds exactly when the
// twist is a unit of the corner algebra.
struct OmegaDescent {
  std::size_t balanced_dim = 0;  // dim of the balanced tensor square
  Matrix induced;                // dim X x balanced_dim
  bool balanced = true;
};
OmegaDescent omega_descend(const CornerTensor& ct, const OmegaMap& om);

// Certificate that l -> rho_l is an algebra isomorphism from Z(L) onto the
// endomorphism algebra of X over the enveloping algebra, and that every
// omega_l factors as rho_l following omega at the corner unit.
struct RhoIsoReport {
  std::size_t center_dim = 0;  // dim Z(L)
  std::size_t end_dim = 0;     // dim End of X over the enveloping algebra
  bool linear = false;
  bool multiplicative = false;
  bool unit_preserving = false;
  bool injective = false;
  bool surjective = false;
  bool bimodule_endos = false;  // every rho_l commutes with both outer actions
  bool omega_factors = false;   // omega_l = rho_l after omega_unit, over a center basis
  bool ok() const {
    return linear && multiplicative && unit_preserving && injective && surjective &&
           bimodule_endos && omega_factors;
  }
};
RhoIsoReport rho_iso_check(const AlgebraPtr& a, const Vec& e);
RhoIsoReport rho_iso_check(const CornerTensor& ct);

// The doubled algebra R = A (+) X with multiplication
//   (a + x) * (a' + x') = aa' + (a x' + x a' + omega(x, x')),
// basis ordered A-block first, then the X quotient basis.
struct MirrorAlgebra {
  AlgebraPtr alg;   // R itself
  AlgebraPtr base;  // A
  Vec idem;         // e
  Level level;
  std::size_t base_dim = 0;
  std::size_t ideal_dim = 0;  // dim X
  Matrix incl;   // (base_dim+ideal_dim) x base_dim, the A-embedding
  Matrix ideal;  // (base_dim+ideal_dim) x ideal_dim, the X block
  Matrix proj;   // base_dim x (base_dim+ideal_dim), algebra map with proj*incl = id
};

MirrorAlgebra build_mirror(const CornerTensor& ct, const Level& level);
MirrorAlgebra build_mirror(const AlgebraPtr& a, const Vec& e, const Level& level);

// Axioms of an algebra R = S (+) X with S a unital subalgebra and X an ideal,
// checked independently of how R was produced.  failure names the first
// axiom that does not hold ("subalgebra", "identity", "ideal", "direct_sum",
// "splitting"); ideal_square_zero records whether X * X = 0.
struct IdealizedCheck {
  bool subalgebra = false;
  bool identity = false;
  bool ideal = false;
  bool direct_sum = false;
  bool splitting = false;
  bool ideal_square_zero = false;
  std::string failure;
  bool ok() const { return subalgebra && identity && ideal && direct_sum && splitting; }
};
IdealizedCheck check_idealized_extension(const Algebra& r, const Matrix& a_cols,
                                         const Matrix& x_cols);
IdealizedCheck check_idealized_extension(const MirrorAlgebra& r);

// Decides whether l1 = l2 * mu for a unit mu of Z(L): solves the linear
// system over the center and tests solution representatives for
// invertibility (exhaustively over F_p, on an interpolation grid over Q --
// both conclusive within budget).  Throws SearchBudgetExceeded when the
// solution space is too large for the budget.
struct LevelEquivResult {
  bool equivalent = false;
  std::optional<Vec> unit;  // mu in corner coordinates when equivalent
};
LevelEquivResult levels_isomorphic(const AlgebraPtr& a, const Vec& e, const Level& l1,
                                   const Level& l2, std::size_t budget = 1u << 20);

// Checks that id (+) rho_mu is an algebra isomorphism from r1 onto r2; with
// mu the unit produced by levels_isomorphic this matches the two doubled
// algebras explicitly.
bool mirrors_matched_by_unit(const MirrorAlgebra& r1, const MirrorAlgebra& r2,
                             const Vec& mu_corner);

}  // namespace mirrorsmith
