#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mirrorsmith/algebra.hpp"

namespace mirrorsmith {

struct Arrow {
  std::string name;
  std::size_t source = 0, target = 0;
};

struct Quiver {
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;

  std::optional<std::size_t> vertex_index(const std::string& n) const;
  std::optional<std::size_t> arrow_index(const std::string& n) const;
};

// Relation in canonical form: each term is a composable arrow word, all terms
// share source and target. Words compose left-to-right.
struct NcTerm {
  Scalar coeff;
  std::vector<std::size_t> word;  // arrow indices
};
struct NcPoly {
  std::vector<NcTerm> terms;
  std::size_t source = 0, target = 0;
  std::string text;  // original input line
};

struct QuiverPresentation {
  Field field;
  Quiver quiver;
  std::vector<NcPoly> relations;
};

// Line-oriented format: `field Q|F<p>`, then `vertex <name>` and
// `arrow <name> <source> <target>` lines, `relations`, one polynomial per
// line, `end`. Errors carry line (and column for expression syntax).
QuiverPresentation parse_presentation(const std::string& text);

// General element expression over a quiver: vertex names are allowed as
// factors (they multiply as the trivial-path idempotents), so expressions
// like "e1 - u" or "x^2" denote algebra elements, not just relations.
struct RawFactor {
  bool is_vertex = false;
  std::size_t index = 0;
};
struct RawTerm {
  Scalar coeff;
  std::vector<RawFactor> factors;  // powers already expanded
};
struct RawPoly {
  std::vector<RawTerm> terms;
  std::string text;
};
RawPoly parse_element(const std::string& text, const Quiver& q, Field f);

// Basis of a compiled path algebra: each basis element is (the class of) a
// path, trivial paths first, then by length and discovery order.
struct PathBasis {
  Quiver quiver;
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> paths;  // (source vertex, arrow word)
  std::vector<Vec> vertex_idems;  // per quiver vertex
  std::vector<Vec> arrow_elems;   // per quiver arrow

  std::size_t path_source(std::size_t i) const { return paths[i].first; }
  std::size_t path_target(std::size_t i) const;
  std::string path_name(std::size_t i) const;
};

struct CompiledPresentation {
  AlgebraPtr alg;
  PathBasis basis;
};

// Degree-by-degree compilation of kQ modulo the ideal generated by the
// relations, stopping at the first degree that dies. NotAdmissible if some
// relation term has length < 2, NotFiniteDimensional if the bound or the
// path-space cap is exhausted.
CompiledPresentation build_path_algebra(const QuiverPresentation& p, std::size_t length_bound = 30);

// Evaluate an element expression in the compiled algebra.
Vec eval_element(const Algebra& a, const PathBasis& pb, const RawPoly& e);

// Evaluate a canonical relation against arbitrary vertex/arrow images.
Vec eval_in_target(const Algebra& target, const std::vector<Vec>& vertex_images,
                   const std::vector<Vec>& arrow_images, const NcPoly& rel);

struct PresentationAssignment {
  std::vector<Vec> vertex_images;
  std::vector<Vec> arrow_images;
};

struct VerifyResult {
  bool verified = false;
  std::optional<PresentationAssignment> witness;
  std::vector<std::string> notes;
};

// With an assignment: certifies that the assignment induces an isomorphism
// from the compiled presentation onto `a` (complete orthogonal idempotent
// images, sandwich condition, relations vanish, generation, equal dims).
// Works in any characteristic. Without an assignment: searches for one
// (vertex matching over primitive idempotents, arrow candidates from
// radical-slice bases, lexicographically-first witness); the search needs a
// computable radical and a coefficient grid ({-2..2} over Q, all residues
// over F_p). Throws SearchBudgetExceeded when the budget runs out.
VerifyResult verify_presentation(const Algebra& a, const QuiverPresentation& p,
                                 const std::optional<PresentationAssignment>& assignment,
                                 std::size_t budget = 1u << 22);

struct GabrielSkeleton {
  std::vector<Vec> idempotents;                        // complete primitive orthogonal set
  std::vector<std::vector<std::size_t>> arrow_counts;  // [i][j] = dim e_i (rad/rad^2) e_j
};

// Quiver shape of a basic algebra; NotBasic when two primitive idempotents
// give isomorphic projectives.
GabrielSkeleton gabriel_skeleton(const Algebra& a);

}  // namespace mirrorsmith
