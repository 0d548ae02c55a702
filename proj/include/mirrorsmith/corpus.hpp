#pragma once

// Deterministic random-instance generator shared by the property suites:
// truncated path algebras over F5 (at most 4 vertices and 6 arrows, all
// paths of a chosen length killed, total dim <= 12), a random nonzero
// idempotent built from vertex idempotents, a random central twist in the
// corner, and a random central unit.  mt19937_64 output is pinned by the
// standard, so a fixed root seed reproduces the same instances everywhere.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mirrorsmith/algebra.hpp"
#include "mirrorsmith/mirror.hpp"
#include "mirrorsmith/modrep.hpp"
#include "mirrorsmith/quiver.hpp"

namespace mirrorsmith::corpus {

struct Instance {
  AlgebraPtr alg;
  Vec idem;
  CornerTensor ct;
  Level lambda;      // random central twist in the corner
  Vec unit_mu;       // random central unit, corner coordinates
  std::string text;  // presentation the algebra was compiled from
  std::uint64_t seed;
};

inline std::vector<Instance> instances(std::size_t count, std::uint64_t root_seed,
                                       std::size_t max_total_dim = 24) {
  std::vector<Instance> out;
  out.reserve(count);
  std::uint64_t attempt = 0;
  while (out.size() < count) {
    if (attempt > 1000 * count + 10000)
      throw Error("Internal", "corpus generation rejected too many candidates");
    std::uint64_t seed = root_seed + 0x9E3779B97F4A7C15ull * ++attempt;
    std::mt19937_64 rng(seed);
    std::size_t nv = 1 + rng() % 4;
    std::size_t na = rng() % 7;
    std::size_t maxlen = 2 + rng() % 2;  // kill all paths of this length
    std::string text = "field F5\n";
    for (std::size_t v = 0; v < nv; ++v) text += "vertex v" + std::to_string(v) + "\n";
    std::vector<std::size_t> src(na), tgt(na);
    for (std::size_t k = 0; k < na; ++k) {
      src[k] = rng() % nv;
      tgt[k] = rng() % nv;
      text += "arrow a" + std::to_string(k) + " v" + std::to_string(src[k]) + " v" +
              std::to_string(tgt[k]) + "\n";
    }
    text += "relations\n";
    // every composable arrow word of length maxlen
    std::vector<std::vector<std::size_t>> words = {{}};
    for (std::size_t step = 0; step < maxlen; ++step) {
      std::vector<std::vector<std::size_t>> next;
      for (const std::vector<std::size_t>& w : words)
        for (std::size_t k = 0; k < na; ++k) {
          if (!w.empty() && tgt[w.back()] != src[k]) continue;
          std::vector<std::size_t> w2 = w;
          w2.push_back(k);
          next.push_back(std::move(w2));
        }
      words = std::move(next);
    }
    for (const std::vector<std::size_t>& w : words) {
      std::string line;
      for (std::size_t k : w) line += (line.empty() ? "" : "*") + ("a" + std::to_string(k));
      text += line + "\n";
    }
    text += "end\n";
    CompiledPresentation cp = build_path_algebra(parse_presentation(text));
    if (cp.alg->dim > 12) continue;
    Field f = cp.alg->field;
    std::size_t mask = 1 + rng() % ((std::size_t{1} << nv) - 1);
    Vec e = vec_zero(f, cp.alg->dim);
    for (std::size_t v = 0; v < nv; ++v)
      if (mask & (std::size_t{1} << v)) e = vec_add(e, cp.basis.vertex_idems[v]);
    CornerTensor ct = tensor_over_corner(cp.alg, e);
    if (cp.alg->dim + ct.delta.mod.dim > max_total_dim) continue;
    std::vector<Vec> zb = center_basis(*ct.lam.alg);
    std::size_t q = ct.lam.alg->dim;
    auto central = [&]() {
      Vec c = vec_zero(f, q);
      for (const Vec& z : zb) {
        Scalar w = Scalar::from_int(f, static_cast<std::int64_t>(rng() % 5));
        if (!w.is_zero()) c = vec_add(c, vec_scale(w, z));
      }
      return c;
    };
    Vec mu = ct.lam.alg->unit;
    for (int tries = 0; tries < 30; ++tries) {
      Vec cand = central();
      if (ct.lam.alg->is_unit_element(cand)) {
        mu = cand;
        break;
      }
    }
    Level lambda = make_level(ct.lam, central());
    out.push_back(Instance{cp.alg, std::move(e), std::move(ct), std::move(lambda), std::move(mu),
                           std::move(text), seed});
  }
  return out;
}

}  // namespace mirrorsmith::corpus
