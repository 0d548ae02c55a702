#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mirrorsmith/algebra.hpp"
#include "mirrorsmith/matrix.hpp"
#include "mirrorsmith/modrep.hpp"
#include "mirrorsmith/smith.hpp"

namespace mirrorsmith {

// ---------------------------------------------------------------------------
// Bounded cochain complexes of modules, homotopy-category hom spaces,
// tilting verdicts, and a deterministic search for two-term tilting
// complexes over prime fields.
// ---------------------------------------------------------------------------

// Shared dictionary for complexes whose terms are direct sums of the vertex
// projectives A*e_j.  Hom(Ae_j, Ae_i) is identified with e_j*A*e_i acting by
// right multiplication, so chain maps between annotated complexes reduce to
// block matrices of corner elements.
struct AddBasis {
  AlgebraPtr alg;
  std::vector<Vec> idems;              // the chosen orthogonal idempotents
  std::vector<Module> projs;           // Ae_j in canonical (pivot) coordinates
  std::vector<Subspace> proj_spans;    // ambient spans of the Ae_j
  // corner[j][i]: basis of e_j*A*e_i (ambient algebra coordinates)
  std::vector<std::vector<std::vector<Vec>>> corner;
  // block[j][i][t]: matrix of right multiplication by corner[j][i][t],
  // as a module map Ae_j -> Ae_i in canonical coordinates
  std::vector<std::vector<std::vector<Matrix>>> block;

  std::size_t vertices() const { return idems.size(); }
};
using AddBasisPtr = std::shared_ptr<const AddBasis>;

AddBasisPtr make_add_basis(const AlgebraPtr& a, const std::vector<Vec>& idems);

// Bounded complex; terms occupy consecutive degrees lo .. lo+terms.size()-1.
// Differentials raise degree by one: diffs[k] maps terms[k] -> terms[k+1].
// When `add` is set, seqs[k] lists the vertex index of each projective
// summand copy of terms[k] in coordinate order, and terms[k] is literally
// the direct sum of those copies.
struct Complex {
  AlgebraPtr alg;
  int lo = 0;
  std::vector<Module> terms;
  std::vector<Matrix> diffs;
  AddBasisPtr add;
  std::vector<std::vector<std::size_t>> seqs;

  bool empty() const { return terms.empty(); }
  int hi() const { return lo + static_cast<int>(terms.size()) - 1; }
  bool in_range(int n) const { return !empty() && n >= lo && n <= hi(); }
  std::size_t dim_at(int n) const;
  Module term(int n) const;                  // zero module outside the range
  Matrix diff(int n) const;                  // correctly-shaped zero outside
  bool annotated() const;                    // add set and every term tagged
  std::vector<std::size_t> seq_at(int n) const;
  std::size_t total_dim() const;
};

struct ComplexCheck {
  bool ok = true;
  std::string failure;
};
ComplexCheck check_complex(const Complex& x);

Complex zero_complex(const AlgebraPtr& a);
Complex stalk_complex(const Module& m, int degree = 0);
// Direct sum of vertex projectives listed by seq, placed in one degree.
Complex projective_stalk(const AddBasisPtr& add, const std::vector<std::size_t>& seq,
                         int degree = 0);
Complex direct_sum(const Complex& x, const Complex& y);
// (X[n])^i = X^{i+n}; differentials are negated when n is odd.
Complex shift(const Complex& x, int n);

// Degreewise map of complexes commuting with the differentials.
struct ChainMap {
  Complex src, tgt;
  int lo = 0;                  // degree of mats.front()
  std::vector<Matrix> mats;    // component in degree lo + k

  Matrix at(int n) const;      // correctly-shaped zero outside
};
// Validates shapes and the commutation d_tgt f = f d_src; throws
// Error("DifferentialMismatch") otherwise.
ChainMap make_chain_map(Complex src, Complex tgt, std::vector<Matrix> mats, int lo);
ChainMap identity_chain_map(const Complex& x);
ChainMap zero_chain_map(const Complex& src, const Complex& tgt);
ChainMap compose_chain_maps(const ChainMap& inner, const ChainMap& outer);
ChainMap add_chain_maps(const ChainMap& f, const ChainMap& g);
ChainMap scale_chain_map(const Scalar& c, const ChainMap& f);

// Mapping cone: C^i = tgt^i (+) src^{i+1}, differential
//   [ d_tgt   f^{i+1} ]
//   [ 0      -d_src   ]
Complex cone(const ChainMap& f);

// Stupid-free truncations: tau_le keeps degrees < n and replaces degree n
// by ker d^n; tau_ge keeps degrees > n and replaces degree n by coker d^{n-1}.
Complex truncate_le(const Complex& x, int n);
Complex truncate_ge(const Complex& x, int n);

Module cohomology(const Complex& x, int n);
// Induced map H^n(src) -> H^n(tgt) in the canonical cohomology coordinates.
Matrix cohomology_map(const ChainMap& f, int n);

// Comparison roof for a complex with cohomology concentrated in degrees <= 0:
// incl : tau_le(x,0) -> x is the inclusion, proj : tau_le(x,0) -> H^0 stalk.
// h0_action = H^0(proj) composed with the inverse of H^0(incl); it is an
// automorphism of H^0(x) (asserted).
struct XiMap {
  Complex truncated;
  ChainMap incl;
  ChainMap proj;
  Matrix h0_action;
};
// Throws Error("PositiveCohomology") when some H^i, i > 0, is nonzero.
XiMap xi_map(const Complex& x);

// True when every term is a projective module (split through a free cover;
// no radical computation, so valid over every supported field).
bool is_projective_module(const Module& m);
bool projective_terms(const Complex& x);

// Hom in the homotopy category: chain maps x -> y[n] modulo null-homotopic
// ones.  Both complexes must have projective terms; otherwise throws
// Error("NonProjectiveTerm").
struct HomotopyHoms {
  std::size_t dim = 0;
  std::vector<ChainMap> reps;  // representatives, as maps x -> shift(y, n)
};
HomotopyHoms hom_homotopy(const Complex& x, const Complex& y, int n);

bool is_contractible(const Complex& x);  // identity null-homotopic
// Searches for an isomorphism in the homotopy category by testing whether
// some combination of hom classes has contractible cone.  A `true` answer is
// certified; `false` is conclusive over prime fields when the budget covers
// the coefficient grid, and conservative over the rationals.
bool homotopy_equivalent(const Complex& x, const Complex& y,
                         std::size_t budget = 4096);

struct SelfOrthReport {
  bool selforthogonal = true;
  int first_failing_degree = 0;  // meaningful only when !selforthogonal
  std::size_t failing_dim = 0;
};
SelfOrthReport is_selforthogonal(const Complex& x);

// Endomorphism algebra of x in the homotopy category; product is
// left-to-right composition ("apply f, then g").
EndAlgebra end_algebra_complex(const Complex& x);

// A-linear dual Hom_A(-, A), a complex of modules over the opposite algebra:
// (x*)^j = Hom_A(x^{-j}, A) with differential (-1)^{j+1} (- compose d).
Complex dualize(const Complex& x);
Complex dualize(const Complex& x, const AlgebraPtr& op);

// ---------------------------------------------------------------------------
// Generation witnesses
// ---------------------------------------------------------------------------

struct GenStep {
  enum class Kind { Start, Shift, Cone, Summand };
  Kind kind = Kind::Start;
  std::size_t a = 0;          // operand object index (Start: generator index)
  std::size_t b = 0;          // Cone: target object index
  int n = 0;                  // Shift amount
  int mats_lo = 0;            // degree of mats.front()
  std::vector<Matrix> mats;   // Cone: chain map; Summand: idempotent endo
};
using GenerationWitness = std::vector<GenStep>;

struct GenerationReport {
  bool verified = false;
  std::string failure;
  std::vector<std::size_t> matched_by;  // producing object index per target
};
// Replays the witness starting from the generators (pre-seeded as objects
// 0..g-1; each step appends one object) and checks that every target is
// homotopy-equivalent to one of the produced objects.
GenerationReport generation_check(const std::vector<Complex>& generators,
                                  const std::vector<Complex>& targets,
                                  const GenerationWitness& witness);

struct K0Check {
  bool pass = false;
  IntMatrix classes;  // rows: alternating-sign classes of the term summands
  std::vector<std::vector<BigInt>> target_classes;
};
// Necessary condition: the class of each target must lie in the integer row
// lattice spanned by the per-term summand classes of x.  Unannotated terms
// are split through their endomorphism algebras, which requires a field of
// characteristic zero or larger than the term dimensions.
K0Check k0_generation_check(const Complex& x, const std::vector<Complex>& targets);

// ---------------------------------------------------------------------------
// Tilting verdicts and search
// ---------------------------------------------------------------------------

struct TiltingVerdict {
  enum class Kind { Verified, K0PassUnverified, Fail };
  Kind kind = Kind::Fail;
  std::string reason;                        // set for Fail
  std::optional<GenerationWitness> witness;  // set for Verified
  SelfOrthReport selforth;
  K0Check k0;
};
// Self-orthogonality, then the lattice condition against the given targets
// (the vertex projective stalks), then a breadth-first witness search with
// Shift / Summand / Cone moves, capped by auto_witness_budget moves.
TiltingVerdict is_tilting(const Complex& x, const std::vector<Complex>& k0_targets,
                          std::size_t auto_witness_budget = 512);
// Targets derived from primitive_idempotents of the algebra.
TiltingVerdict is_tilting(const Complex& x, std::size_t auto_witness_budget = 512);

std::vector<Complex> projective_stalk_targets(const AddBasisPtr& add);

// Comparison of End(p) against a reference algebra b together with the image
// of a distinguished summand of p under the corner construction.
struct PairEquivReport {
  TiltingVerdict::Kind tilting = TiltingVerdict::Kind::Fail;
  bool end_invariants_match = false;
  bool explicit_iso_ok = false;       // only meaningful when an iso is given
  bool summand_in_add_corner = false;
  bool summand_generates = false;
  bool idempotent_matches = false;    // only meaningful when an iso is given
  std::string verdict;                // "pass" | "inconclusive" | "fail:<stage>"
  std::string detail;
};
PairEquivReport pair_equiv_check(const AlgebraPtr& a, const Vec& e,
                                 const AlgebraPtr& b, const Vec& f,
                                 const Complex& p, const ChainMap& split_idem,
                                 const std::optional<GenerationWitness>& corner_witness,
                                 const std::optional<Matrix>& end_to_b_iso);

struct SearchShape {
  int lo = -1;
  int hi = 0;
  std::size_t max_mult = 2;  // per vertex per degree
};

struct SearchCandidate {
  std::vector<std::vector<std::size_t>> mults;  // per degree lo..hi, per vertex
  std::vector<std::uint32_t> diff_coords;       // differential hom coordinates
  Complex complex;
  TiltingVerdict verdict;
  std::size_t end_dim = 0;
  std::size_t end_center_dim = 0;
};

struct TiltingSearchOutput {
  std::vector<SearchCandidate> results;  // deduplicated survivors
  bool budget_exceeded = false;
  std::size_t examined = 0;
  std::uint64_t seed = 0;
};

// Deterministic enumeration of differential-graded shapes over a prime
// field: multiplicity tuples in odometer order (last digit fastest), then
// differential coordinates over F_p in the same order.  Candidates failing
// self-orthogonality are dropped; survivors carry full tilting verdicts and
// endomorphism invariants.  `budget` caps individually examined candidates;
// shapes rejected by the class-lattice pre-filter are not charged.
TiltingSearchOutput tilting_search(const AlgebraPtr& a, const std::vector<Vec>& idems,
                                   const SearchShape& shape, std::uint64_t seed,
                                   std::size_t budget);

// Rebuilds a search candidate over the algebra's field from its stored shape
// and differential coordinates (hom bases of compiled presentations are
// indexed identically across fields).
Complex rebuild_candidate(const AddBasisPtr& add, const SearchShape& shape,
                          const std::vector<std::vector<std::size_t>>& mults,
                          const std::vector<std::uint32_t>& diff_coords);

// ---------------------------------------------------------------------------
// Algebra invariant battery (used by verdicts and the comparison tools)
// ---------------------------------------------------------------------------

// Cartan matrix over the primitive idempotents e_i: entry (i, j) is
// dim e_i * A * e_j.  Requires a splitting-safe field (characteristic zero
// or p > dim A); the explicit-idempotent form has no such restriction.
IntMatrix cartan_matrix(const AlgebraPtr& a);
IntMatrix cartan_matrix(const AlgebraPtr& a, const std::vector<Vec>& idems);

struct AlgebraInvariants {
  std::size_t dim = 0;
  std::size_t simples = 0;
  std::size_t center_dim = 0;
  std::vector<BigInt> cartan_snf;  // invariant factors, ascending
  BigInt cartan_det;
};
AlgebraInvariants algebra_invariants(const AlgebraPtr& a);
AlgebraInvariants algebra_invariants(const AlgebraPtr& a, const std::vector<Vec>& idems);

}  // namespace mirrorsmith
