#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mirrorsmith/matrix.hpp"
#include "mirrorsmith/smith.hpp"

namespace mirrorsmith {

// Finite-dimensional associative unital algebra, fixed basis, structure
// constants sc[(i*dim+j)*dim+k] = coefficient of b_k in b_i * b_j.
// Products compose left-to-right throughout: in End-style algebras x*y
// means "apply x, then y".
class Algebra {
 public:
  Field field;
  std::size_t dim = 0;
  std::vector<std::string> labels;
  std::vector<Scalar> sc;
  Vec unit;

  Algebra() = default;
  Algebra(Field f, std::size_t d);

  const Scalar& c(std::size_t i, std::size_t j, std::size_t k) const {
    return sc[(i * dim + j) * dim + k];
  }
  Scalar& c(std::size_t i, std::size_t j, std::size_t k) {
    return sc[(i * dim + j) * dim + k];
  }

  Vec basis_product(std::size_t i, std::size_t j) const;
  Vec multiply(const Vec& x, const Vec& y) const;
  Vec basis_vec(std::size_t i) const;
  Matrix left_mult(const Vec& x) const;   // L_x: coords(y) -> coords(x*y)
  Matrix right_mult(const Vec& x) const;  // R_x: coords(y) -> coords(y*x)
  bool is_idempotent(const Vec& e) const;
  bool is_unit_element(const Vec& x) const;  // invertible in the algebra
  std::string describe(const Vec& x) const;  // linear combination of labels
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

struct AlgebraCheck {
  bool ok = true;
  std::vector<std::string> failures;  // offending triples / unit defects
};

// Associativity on all basis triples plus two-sided unit law.
AlgebraCheck check_algebra(const Algebra& a);

std::vector<Vec> center_basis(const Algebra& a);

// Corner algebra e*A*e for an idempotent e, with the inclusion into A.
struct Corner {
  AlgebraPtr alg;     // e*A*e with unit e
  Matrix incl;        // (dim A) x (dim corner), columns = corner basis in A
  Vec idem;           // e as an element of A
  Subspace span;      // row space of the corner inside A
  Vec to_corner(const Vec& in_a) const;    // coordinates in corner basis
  Vec to_ambient(const Vec& in_corner) const;
};

Corner corner(const AlgebraPtr& a, const Vec& e);

AlgebraPtr opposite(const AlgebraPtr& a);

// Basis (i,j) ordered i*dimB+j; (x@y)(x'@y') = xx' @ yy'.
AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b);

// Jacobson radical via the trace form of the regular representation;
// valid in characteristic 0 or p > dim, rejected otherwise.
std::vector<Vec> radical_basis(const Algebra& a);

// Complete set of primitive orthogonal idempotents, lifted from A/rad.
std::vector<Vec> primitive_idempotents(const Algebra& a);

struct SymmetricCheck {
  bool symmetric = false;
  std::optional<Matrix> gram;  // witness form when symmetric
  std::size_t form_space_dim = 0;
  bool exhausted = true;  // false only if the search space was too large to decide
};

// Existence of a nondegenerate symmetric associating bilinear form.
SymmetricCheck is_symmetric_algebra(const Algebra& a);

// Shared helpers ------------------------------------------------------------

// dim of e*A*e style sandwiches and related slices
Matrix stack_cols(Field f, const std::vector<Vec>& cols);

// Invertible-combination search over a span of square matrices: returns a
// coefficient vector making the combination invertible, or nullopt if none
// exists (exact over Q via grid evaluation, exhaustive over small F_p).
struct ComboSearchResult {
  bool decided = false;       // exhaustive / symbolically decided
  std::optional<Vec> coeffs;  // witness if found
};
ComboSearchResult invertible_combo(const std::vector<Matrix>& mats, std::uint64_t seed,
                                   std::size_t budget = 1u << 20);

}  // namespace mirrorsmith
