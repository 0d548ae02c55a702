#pragma once

// Bundled worked examples over the truncated polynomial ring k[x]/(x^3):
// two endomorphism-style algebras, their corners at the first vertex, the
// unit-twist doubles, and canonical witnesses identifying each double with
// its printed presentation.  Everything is parameterized by the field, so
// the same witnesses certify the match over Q and over small prime fields.

#include <string>

#include "mirrorsmith/mirror.hpp"
#include "mirrorsmith/modrep.hpp"
#include "mirrorsmith/quiver.hpp"

namespace mirrorsmith::examples {

std::string field_token(Field f);  // "Q" or "F<p>", as used in presentation headers

struct Doubling {
  CompiledPresentation base;       // the source algebra, compiled from its presentation
  Vec idem;                        // corner idempotent (the first vertex)
  CornerTensor ct;
  MirrorAlgebra mirror;            // unit-twist double
  QuiverPresentation corner_pres;  // truncated polynomial presentation of the corner
  PresentationAssignment corner_witness;
  QuiverPresentation doubled;      // printed presentation of the double
  PresentationAssignment witness;  // canonical images certifying the match
};

Doubling doubling_a(Field f);
Doubling doubling_b(Field f);

// Independent models: the same algebras built as endomorphism algebras of
// Λ ⊕ Λ/(x) and Λ ⊕ Λ/(x^2) over Λ = k[x]/(x^3).
EndAlgebra endo_model_a(Field f);
EndAlgebra endo_model_b(Field f);

}  // namespace mirrorsmith::examples
