#include "mirrorsmith/quiver.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

namespace mirrorsmith {

std::optional<std::size_t> Quiver::vertex_index(const std::string& n) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == n) return i;
  return std::nullopt;
}

std::optional<std::size_t> Quiver::arrow_index(const std::string& n) const {
  for (std::size_t i = 0; i < arrows.size(); ++i)
    if (arrows[i].name == n) return i;
  return std::nullopt;
}

std::size_t PathBasis::path_target(std::size_t i) const {
  const auto& [src, word] = paths[i];
  return word.empty() ? src : quiver.arrows[word.back()].target;
}

std::string PathBasis::path_name(std::size_t i) const {
  const auto& [src, word] = paths[i];
  if (word.empty()) return quiver.vertices[src];
  std::string out;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (k) out += "*";
    out += quiver.arrows[word[k]].name;
  }
  return out;
}

namespace {

[[noreturn]] void perr(std::size_t line, const std::string& msg) {
  throw Error("Parse", "line " + std::to_string(line) + ": " + msg);
}
[[noreturn]] void perrc(std::size_t line, std::size_t col, const std::string& msg) {
  throw Error("Parse",
              "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg);
}

bool valid_name(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

struct Token {
  enum K { Name, Int, Plus, Minus, Star, Caret, EndT } k;
  std::string s;
  std::size_t col;
};

std::vector<Token> lex(const std::string& line, std::size_t lineno) {
  std::vector<Token> out;
  std::size_t i = 0, n = line.size();
  while (i < n) {
    unsigned char ch = static_cast<unsigned char>(line[i]);
    if (std::isspace(ch)) {
      ++i;
      continue;
    }
    std::size_t col = i + 1;
    if (std::isalpha(ch)) {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      out.push_back({Token::Name, line.substr(i, j - i), col});
      i = j;
    } else if (std::isdigit(ch)) {
      std::size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      if (j - i > 18) perrc(lineno, col, "integer literal too long");
      out.push_back({Token::Int, line.substr(i, j - i), col});
      i = j;
    } else {
      switch (ch) {
        case '+': out.push_back({Token::Plus, "+", col}); break;
        case '-': out.push_back({Token::Minus, "-", col}); break;
        case '*': out.push_back({Token::Star, "*", col}); break;
        case '^': out.push_back({Token::Caret, "^", col}); break;
        default: perrc(lineno, col, std::string("unexpected character '") + line[i] + "'");
      }
      ++i;
    }
  }
  out.push_back({Token::EndT, "", n + 1});
  return out;
}

struct FactorAst {
  std::string name;
  std::int64_t power;
  std::size_t col;
};
struct TermAst {
  std::int64_t coeff;
  std::vector<FactorAst> factors;
};

std::vector<TermAst> parse_poly(const std::string& line, std::size_t lineno) {
  std::vector<Token> toks = lex(line, lineno);
  std::size_t i = 0;
  std::vector<TermAst> terms;
  std::int64_t sign = 1;
  if (toks[i].k == Token::Plus) {
    ++i;
  } else if (toks[i].k == Token::Minus) {
    sign = -1;
    ++i;
  }
  for (;;) {
    std::int64_t coeff = 1;
    if (toks[i].k == Token::Int) {
      coeff = std::stoll(toks[i].s);
      ++i;
      if (toks[i].k == Token::Star && toks[i + 1].k == Token::Name) ++i;
    }
    if (toks[i].k != Token::Name) perrc(lineno, toks[i].col, "expected a path factor");
    std::vector<FactorAst> factors;
    for (;;) {
      FactorAst fac{toks[i].s, 1, toks[i].col};
      ++i;
      if (toks[i].k == Token::Caret) {
        ++i;
        if (toks[i].k != Token::Int) perrc(lineno, toks[i].col, "expected an exponent");
        fac.power = std::stoll(toks[i].s);
        if (fac.power < 1) perrc(lineno, toks[i].col, "exponent must be positive");
        ++i;
      }
      factors.push_back(std::move(fac));
      if (toks[i].k == Token::Star) {
        ++i;
        if (toks[i].k != Token::Name) perrc(lineno, toks[i].col, "expected a path factor after '*'");
        continue;
      }
      break;
    }
    terms.push_back({sign * coeff, std::move(factors)});
    if (toks[i].k == Token::EndT) break;
    if (toks[i].k == Token::Plus) {
      sign = 1;
      ++i;
    } else if (toks[i].k == Token::Minus) {
      sign = -1;
      ++i;
    } else {
      perrc(lineno, toks[i].col, "expected '+' or '-'");
    }
  }
  return terms;
}

NcPoly canonicalize_relation(const std::vector<TermAst>& terms, const Quiver& q, Field f,
                             std::size_t lineno, const std::string& text) {
  NcPoly poly;
  poly.text = text;
  bool have_ep = false;
  for (const TermAst& t : terms) {
    Scalar coeff = Scalar::from_int(f, t.coeff);
    if (coeff.is_zero()) continue;
    bool started = false;
    std::size_t src = 0, cur = 0;
    std::vector<std::size_t> word;
    for (const FactorAst& fac : t.factors) {
      auto vi = q.vertex_index(fac.name);
      auto ai = q.arrow_index(fac.name);
      if (!vi && !ai) perrc(lineno, fac.col, "unknown symbol '" + fac.name + "'");
      for (std::int64_t rep = 0; rep < fac.power; ++rep) {
        if (vi) {
          if (!started) {
            src = cur = *vi;
            started = true;
          } else if (cur != *vi) {
            perrc(lineno, fac.col, "non-composable word: expected a factor starting at '" +
                                       q.vertices[cur] + "'");
          }
        } else {
          const Arrow& ar = q.arrows[*ai];
          if (started && cur != ar.source)
            perrc(lineno, fac.col, "non-composable word: '" + ar.name + "' starts at '" +
                                       q.vertices[ar.source] + "', expected '" +
                                       q.vertices[cur] + "'");
          if (!started) {
            src = ar.source;
            started = true;
          }
          cur = ar.target;
          word.push_back(*ai);
        }
      }
    }
    if (!have_ep) {
      poly.source = src;
      poly.target = cur;
      have_ep = true;
    } else if (poly.source != src || poly.target != cur) {
      perr(lineno, "inhomogeneous relation: terms have different endpoints");
    }
    poly.terms.push_back({coeff, std::move(word)});
  }
  return poly;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

QuiverPresentation parse_presentation(const std::string& text) {
  QuiverPresentation out;
  enum State { WantField, Decls, Rels, Done } st = WantField;
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    lines.push_back(cur);
  }
  auto taken = [&](const std::string& n) {
    return out.quiver.vertex_index(n).has_value() || out.quiver.arrow_index(n).has_value();
  };
  for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
    std::string t = trim(lines[ln - 1]);
    if (t.empty()) continue;
    if (st == Done) perr(ln, "content after 'end'");
    if (st == Rels) {
      if (t == "end") {
        st = Done;
        continue;
      }
      NcPoly poly = canonicalize_relation(parse_poly(t, ln), out.quiver, out.field, ln, t);
      if (!poly.terms.empty()) out.relations.push_back(std::move(poly));
      continue;
    }
    std::vector<std::string> w = split_ws(t);
    if (st == WantField) {
      if (w.size() != 2 || w[0] != "field") perr(ln, "expected 'field Q' or 'field F<p>'");
      if (w[1] == "Q") {
        out.field = Field::rationals();
      } else if (w[1].size() > 1 && w[1][0] == 'F') {
        std::uint64_t p = 0;
        for (std::size_t i = 1; i < w[1].size(); ++i) {
          if (!std::isdigit(static_cast<unsigned char>(w[1][i]))) perr(ln, "bad field '" + w[1] + "'");
          p = p * 10 + (w[1][i] - '0');
          if (p > 0x7fffffff) perr(ln, "field characteristic too large");
        }
        try {
          out.field = Field::prime(static_cast<std::uint32_t>(p));
        } catch (const Error& e) {
          perr(ln, e.what());
        }
      } else {
        perr(ln, "bad field '" + w[1] + "'");
      }
      st = Decls;
      continue;
    }
    // Decls
    if (w[0] == "vertex") {
      if (w.size() != 2) perr(ln, "expected 'vertex <name>'");
      if (!valid_name(w[1])) perr(ln, "invalid name '" + w[1] + "'");
      if (taken(w[1])) perr(ln, "duplicate name '" + w[1] + "'");
      out.quiver.vertices.push_back(w[1]);
    } else if (w[0] == "arrow") {
      if (w.size() != 4) perr(ln, "expected 'arrow <name> <source> <target>'");
      if (!valid_name(w[1])) perr(ln, "invalid name '" + w[1] + "'");
      if (taken(w[1])) perr(ln, "duplicate name '" + w[1] + "'");
      auto s = out.quiver.vertex_index(w[2]);
      if (!s) perr(ln, "unknown vertex '" + w[2] + "'");
      auto tg = out.quiver.vertex_index(w[3]);
      if (!tg) perr(ln, "unknown vertex '" + w[3] + "'");
      out.quiver.arrows.push_back({w[1], *s, *tg});
    } else if (w[0] == "relations") {
      if (w.size() != 1) perr(ln, "expected bare 'relations'");
      st = Rels;
    } else {
      perr(ln, "expected 'vertex', 'arrow' or 'relations'");
    }
  }
  if (st != Done) perr(lines.size(), "missing 'end'");
  if (out.quiver.vertices.empty()) perr(lines.size(), "presentation declares no vertices");
  return out;
}

RawPoly parse_element(const std::string& text, const Quiver& q, Field f) {
  RawPoly out;
  out.text = trim(text);
  for (const TermAst& t : parse_poly(out.text, 1)) {
    Scalar coeff = Scalar::from_int(f, t.coeff);
    if (coeff.is_zero()) continue;
    RawTerm term{coeff, {}};
    for (const FactorAst& fac : t.factors) {
      auto vi = q.vertex_index(fac.name);
      auto ai = q.arrow_index(fac.name);
      if (!vi && !ai) perrc(1, fac.col, "unknown symbol '" + fac.name + "'");
      for (std::int64_t rep = 0; rep < fac.power; ++rep)
        term.factors.push_back({vi.has_value(), vi ? *vi : *ai});
    }
    out.terms.push_back(std::move(term));
  }
  return out;
}

CompiledPresentation build_path_algebra(const QuiverPresentation& p, std::size_t length_bound) {
  const Quiver& q = p.quiver;
  Field f = p.field;
  std::size_t nv = q.vertices.size(), na = q.arrows.size();
  if (nv == 0) throw Error("Parse", "presentation declares no vertices");
  for (const auto& r : p.relations)
    for (const auto& t : r.terms)
      if (t.word.size() < 2)
        throw Error("NotAdmissible", "relation '" + r.text + "' has a term of path length < 2");

  struct Path {
    std::size_t src, tgt;
    std::vector<std::size_t> word;
  };
  std::vector<std::vector<Path>> by_len(1);
  std::vector<Path> flat;
  std::map<std::vector<std::size_t>, std::size_t> index;  // [src, word...] -> flat idx
  auto key_of = [](std::size_t src, const std::vector<std::size_t>& w) {
    std::vector<std::size_t> k;
    k.reserve(w.size() + 1);
    k.push_back(src);
    k.insert(k.end(), w.begin(), w.end());
    return k;
  };
  auto add_path = [&](const Path& pa) {
    index[key_of(pa.src, pa.word)] = flat.size();
    flat.push_back(pa);
  };
  std::vector<std::size_t> offset{0};
  for (std::size_t v = 0; v < nv; ++v) {
    by_len[0].push_back({v, v, {}});
    add_path(by_len[0].back());
  }
  offset.push_back(flat.size());
  by_len.emplace_back();
  for (std::size_t a = 0; a < na; ++a) {
    by_len[1].push_back({q.arrows[a].source, q.arrows[a].target, {a}});
    add_path(by_len[1].back());
  }
  offset.push_back(flat.size());

  std::vector<std::size_t> minlen;
  for (const auto& r : p.relations) {
    std::size_t m = r.terms[0].word.size();
    for (const auto& t : r.terms) m = std::min(m, t.word.size());
    minlen.push_back(m);
  }

  // Ideal image in kQ/J^(D+1): spans of p*r*q truncated to length <= D.
  // Coordinates are reversed (coordinate 0 = longest/latest path) so that
  // echelon reduction eliminates long paths and keeps short ones as basis.
  auto ideal_span = [&](std::size_t d, std::size_t total) {
    Subspace s(f, total);
    for (std::size_t ri = 0; ri < p.relations.size(); ++ri) {
      const NcPoly& r = p.relations[ri];
      std::size_t m = minlen[ri];
      if (m > d) continue;
      for (std::size_t a = 0; a + m <= d && a < by_len.size(); ++a)
        for (std::size_t b = 0; a + b + m <= d && b < by_len.size(); ++b)
          for (const Path& pa : by_len[a]) {
            if (pa.tgt != r.source) continue;
            for (const Path& qa : by_len[b]) {
              if (qa.src != r.target) continue;
              Vec v = vec_zero(f, total);
              bool any = false;
              for (const NcTerm& t : r.terms) {
                std::size_t len = a + t.word.size() + b;
                if (len > d) continue;
                std::vector<std::size_t> w = pa.word;
                w.insert(w.end(), t.word.begin(), t.word.end());
                w.insert(w.end(), qa.word.begin(), qa.word.end());
                std::size_t fi = index.at(key_of(pa.src, w));
                v[total - 1 - fi] += t.coeff;
                any = true;
              }
              if (any) s.insert(std::move(v));
            }
          }
    }
    return s;
  };

  const std::size_t MAX_PATHS = 200000;
  std::size_t vanish = 0;
  for (std::size_t d = 2;; ++d) {
    if (d > length_bound)
      throw Error("NotFiniteDimensional",
                  "paths survive at length bound " + std::to_string(length_bound));
    by_len.emplace_back();
    for (const Path& pa : by_len[d - 1])
      for (std::size_t a = 0; a < na; ++a)
        if (q.arrows[a].source == pa.tgt) {
          Path np{pa.src, q.arrows[a].target, pa.word};
          np.word.push_back(a);
          by_len[d].push_back(np);
          add_path(by_len[d].back());
        }
    offset.push_back(flat.size());
    if (flat.size() > MAX_PATHS)
      throw Error("NotFiniteDimensional", "path space exceeded " + std::to_string(MAX_PATHS) +
                                              " paths before stabilizing");
    bool alldead = true;
    if (!by_len[d].empty()) {
      std::size_t total = flat.size();
      Subspace s = ideal_span(d, total);
      for (std::size_t i = offset[d]; i < offset[d + 1] && alldead; ++i) {
        Vec u = vec_zero(f, total);
        u[total - 1 - i] = Scalar::one(f);
        if (!s.contains(u)) alldead = false;
      }
    }
    if (alldead) {
      vanish = d;
      break;
    }
  }

  std::size_t total = offset[vanish];  // paths of length < vanish
  Subspace s = ideal_span(vanish - 1, total);

  std::vector<char> pivot_coord(total, 0);
  for (std::size_t c : s.pivots()) pivot_coord[c] = 1;
  std::vector<std::size_t> kept;
  std::vector<std::ptrdiff_t> pos(total, -1);
  for (std::size_t i = 0; i < total; ++i)
    if (!pivot_coord[total - 1 - i]) {
      pos[i] = static_cast<std::ptrdiff_t>(kept.size());
      kept.push_back(i);
    }
  std::size_t dim = kept.size();

  auto class_of = [&](std::size_t fi) {
    Vec out = vec_zero(f, dim);
    if (pos[fi] >= 0) {
      out[pos[fi]] = Scalar::one(f);
      return out;
    }
    Vec u = vec_zero(f, total);
    u[total - 1 - fi] = Scalar::one(f);
    Vec r = s.reduce(u);
    for (std::size_t j = 0; j < dim; ++j) out[j] = r[total - 1 - kept[j]];
    return out;
  };

  auto alg = std::make_shared<Algebra>(f, dim);
  CompiledPresentation out;
  out.basis.quiver = q;
  for (std::size_t j = 0; j < dim; ++j) {
    const Path& pa = flat[kept[j]];
    out.basis.paths.emplace_back(pa.src, pa.word);
    alg->labels[j] = out.basis.path_name(j);
  }
  for (std::size_t i = 0; i < dim; ++i) {
    const Path& x = flat[kept[i]];
    for (std::size_t j = 0; j < dim; ++j) {
      const Path& y = flat[kept[j]];
      if (x.tgt != y.src) continue;
      std::size_t len = x.word.size() + y.word.size();
      if (len >= vanish) continue;
      std::vector<std::size_t> w = x.word;
      w.insert(w.end(), y.word.begin(), y.word.end());
      Vec cls = class_of(index.at(key_of(x.src, w)));
      for (std::size_t k = 0; k < dim; ++k) alg->c(i, j, k) = cls[k];
    }
  }
  alg->unit = vec_zero(f, dim);
  for (std::size_t v = 0; v < nv; ++v) {
    out.basis.vertex_idems.push_back(alg->basis_vec(static_cast<std::size_t>(pos[v])));
    alg->unit[static_cast<std::size_t>(pos[v])] = Scalar::one(f);
  }
  for (std::size_t a = 0; a < na; ++a)
    out.basis.arrow_elems.push_back(alg->basis_vec(static_cast<std::size_t>(pos[nv + a])));
  out.alg = alg;

  // construction invariants
  for (const auto& r : p.relations)
    if (!vec_is_zero(eval_in_target(*alg, out.basis.vertex_idems, out.basis.arrow_elems, r)))
      throw Error("Internal", "relation '" + r.text + "' survives in the compiled algebra");
  return out;
}

Vec eval_element(const Algebra& a, const PathBasis& pb, const RawPoly& e) {
  Vec out = vec_zero(a.field, a.dim);
  for (const RawTerm& t : e.terms) {
    Vec cur = a.unit;
    for (const RawFactor& fac : t.factors)
      cur = a.multiply(cur, fac.is_vertex ? pb.vertex_idems[fac.index] : pb.arrow_elems[fac.index]);
    out = vec_add(out, vec_scale(t.coeff, cur));
  }
  return out;
}

Vec eval_in_target(const Algebra& target, const std::vector<Vec>& vertex_images,
                   const std::vector<Vec>& arrow_images, const NcPoly& rel) {
  Vec out = vec_zero(target.field, target.dim);
  for (const NcTerm& t : rel.terms) {
    Vec cur = vertex_images[rel.source];
    for (std::size_t a : t.word) cur = target.multiply(cur, arrow_images[a]);
    out = vec_add(out, vec_scale(t.coeff, cur));
  }
  return out;
}

namespace {

bool generates(const Algebra& a, const std::vector<Vec>& gens) {
  Subspace s(a.field, a.dim);
  std::vector<Vec> frontier;
  for (const Vec& g : gens)
    if (s.insert(g)) frontier.push_back(g);
  while (!frontier.empty() && s.dim() < a.dim) {
    std::vector<Vec> next;
    for (const Vec& x : frontier)
      for (const Vec& g : gens) {
        Vec pr = a.multiply(x, g);
        if (s.insert(pr)) next.push_back(pr);
      }
    frontier = std::move(next);
  }
  return s.dim() == a.dim;
}

VerifyResult check_assignment(const Algebra& a, const QuiverPresentation& p,
                              const PresentationAssignment& asg) {
  VerifyResult out;
  const Quiver& q = p.quiver;
  std::size_t nv = q.vertices.size(), na = q.arrows.size();
  auto fail = [&](const std::string& m) { out.notes.push_back(m); };
  if (asg.vertex_images.size() != nv || asg.arrow_images.size() != na) {
    fail("assignment size does not match the quiver");
    return out;
  }
  Vec sum = vec_zero(a.field, a.dim);
  for (std::size_t v = 0; v < nv; ++v) {
    if (!a.is_idempotent(asg.vertex_images[v]))
      fail("vertex image of '" + q.vertices[v] + "' is not idempotent");
    sum = vec_add(sum, asg.vertex_images[v]);
  }
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t w = 0; w < nv; ++w) {
      if (v == w) continue;
      if (!vec_is_zero(a.multiply(asg.vertex_images[v], asg.vertex_images[w]))) {
        fail("vertex images of '" + q.vertices[v] + "' and '" + q.vertices[w] +
             "' are not orthogonal");
        break;
      }
    }
  if (!(sum == a.unit)) fail("vertex images do not sum to the unit");
  for (std::size_t k = 0; k < na; ++k) {
    const Arrow& ar = q.arrows[k];
    Vec x = asg.arrow_images[k];
    Vec sx = a.multiply(asg.vertex_images[ar.source], x);
    if (!(a.multiply(sx, asg.vertex_images[ar.target]) == x))
      fail("arrow image of '" + ar.name + "' is not supported between its endpoint idempotents");
  }
  if (!out.notes.empty()) return out;
  for (const NcPoly& rel : p.relations) {
    Vec val = eval_in_target(a, asg.vertex_images, asg.arrow_images, rel);
    if (!vec_is_zero(val)) fail("relation '" + rel.text + "' does not vanish");
  }
  std::vector<Vec> gens = asg.vertex_images;
  gens.insert(gens.end(), asg.arrow_images.begin(), asg.arrow_images.end());
  if (!generates(a, gens)) fail("assigned elements do not generate the algebra");
  // extra diagnostics in characteristics where the radical is computable
  if (out.notes.empty() && (a.field.p == 0 || a.field.p > a.dim)) {
    std::vector<Vec> rad = radical_basis(a);
    Subspace radspan = Subspace::from_vectors(a.field, a.dim, rad);
    Subspace rad2(a.field, a.dim);
    for (const Vec& x : rad)
      for (const Vec& y : rad) rad2.insert(a.multiply(x, y));
    for (std::size_t k = 0; k < na; ++k) {
      if (!radspan.contains(asg.arrow_images[k]))
        fail("arrow image of '" + q.arrows[k].name + "' is not in the radical");
      else if (rad2.contains(asg.arrow_images[k]))
        fail("arrow image of '" + q.arrows[k].name + "' lies in radical^2");
    }
  }
  out.verified = out.notes.empty();
  if (out.verified) out.witness = asg;
  return out;
}

}  // namespace

VerifyResult verify_presentation(const Algebra& a, const QuiverPresentation& p,
                                 const std::optional<PresentationAssignment>& assignment,
                                 std::size_t budget) {
  CompiledPresentation comp = build_path_algebra(p);
  VerifyResult out;
  if (comp.alg->dim != a.dim) {
    out.notes.push_back("dimension mismatch: presentation compiles to dim " +
                        std::to_string(comp.alg->dim) + ", algebra has dim " +
                        std::to_string(a.dim));
    return out;
  }
  if (assignment) return check_assignment(a, p, *assignment);

  const Quiver& q = p.quiver;
  std::size_t nv = q.vertices.size(), na = q.arrows.size();
  std::vector<Vec> prim = primitive_idempotents(a);
  if (prim.size() != nv) {
    out.notes.push_back("algebra has " + std::to_string(prim.size()) +
                        " primitive idempotents, quiver has " + std::to_string(nv) + " vertices");
    return out;
  }
  std::vector<Vec> rad = radical_basis(a);
  Subspace rad2(a.field, a.dim);
  for (const Vec& x : rad)
    for (const Vec& y : rad) rad2.insert(a.multiply(x, y));

  // independent-mod-rad^2 representatives of each sandwich e_i rad e_j
  std::vector<std::vector<std::vector<Vec>>> reps(nv,
                                                  std::vector<std::vector<Vec>>(nv));
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = 0; j < nv; ++j) {
      Subspace acc = rad2;
      for (const Vec& r : rad) {
        Vec v = a.multiply(a.multiply(prim[i], r), prim[j]);
        if (acc.insert(v)) reps[i][j].push_back(v);
      }
    }
  std::vector<std::vector<std::size_t>> qcount(nv, std::vector<std::size_t>(nv, 0));
  for (const Arrow& ar : q.arrows) ++qcount[ar.source][ar.target];

  std::vector<Scalar> grid;
  if (a.field.p != 0) {
    for (std::uint32_t r = 0; r < a.field.p; ++r) grid.push_back(Scalar::from_int(a.field, r));
  } else {
    for (int r = -2; r <= 2; ++r) grid.push_back(Scalar::from_int(a.field, r));
  }
  auto is_zero_digit = [&](std::size_t g) { return grid[g].is_zero(); };

  std::vector<std::size_t> perm(nv);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t tried = 0;
  do {
    bool match = true;
    for (std::size_t v = 0; v < nv && match; ++v)
      for (std::size_t w = 0; w < nv && match; ++w)
        if (reps[perm[v]][perm[w]].size() != qcount[v][w]) match = false;
    if (!match) continue;

    std::vector<std::size_t> seg_begin(na + 1, 0);
    for (std::size_t k = 0; k < na; ++k)
      seg_begin[k + 1] = seg_begin[k] + reps[perm[q.arrows[k].source]][perm[q.arrows[k].target]].size();
    std::size_t m = seg_begin[na];
    std::vector<std::size_t> digits(m, 0);
    // grid index of the zero scalar; both grids contain zero before their last entry
    std::size_t zidx = 0;
    while (!grid[zidx].is_zero()) ++zidx;
    // raise every all-zero arrow block to its smallest nonzero tuple, left to right,
    // so the odometer only ever rests on candidates with every arrow image nonzero
    auto repair = [&]() {
      for (std::size_t k = 0; k < na; ++k) {
        bool allz = true;
        for (std::size_t t = seg_begin[k]; t < seg_begin[k + 1] && allz; ++t)
          if (digits[t] != zidx) allz = false;
        if (!allz) continue;
        digits[seg_begin[k + 1] - 1] = zidx + 1;
        for (std::size_t t = seg_begin[k + 1]; t < m; ++t) digits[t] = 0;
      }
    };
    repair();
    for (bool done = false; !done;) {
      if (++tried > budget)
        throw Error("SearchBudgetExceeded",
                    "presentation search exceeded " + std::to_string(budget) + " candidates");
      std::vector<Vec> arrow_images(na);
      for (std::size_t k = 0; k < na; ++k) {
        const auto& rk = reps[perm[q.arrows[k].source]][perm[q.arrows[k].target]];
        Vec x = vec_zero(a.field, a.dim);
        for (std::size_t t = seg_begin[k]; t < seg_begin[k + 1]; ++t)
          if (!is_zero_digit(digits[t]))
            x = vec_add(x, vec_scale(grid[digits[t]], rk[t - seg_begin[k]]));
        arrow_images[k] = std::move(x);
      }
      bool ok = true;
      std::vector<Vec> vertex_images(nv);
      for (std::size_t v = 0; v < nv; ++v) vertex_images[v] = prim[perm[v]];
      for (const NcPoly& rel : p.relations) {
        if (!vec_is_zero(eval_in_target(a, vertex_images, arrow_images, rel))) {
          ok = false;
          break;
        }
      }
      if (ok) {
        std::vector<Vec> gens = vertex_images;
        gens.insert(gens.end(), arrow_images.begin(), arrow_images.end());
        ok = generates(a, gens);
      }
      if (ok) {
        PresentationAssignment asg{std::move(vertex_images), std::move(arrow_images)};
        VerifyResult res = check_assignment(a, p, asg);
        res.notes.insert(res.notes.begin(), "witness found by search");
        return res;
      }
      // lexicographic odometer, last digit fastest
      std::size_t i = m;
      for (;;) {
        if (i == 0) {
          done = true;
          break;
        }
        --i;
        if (++digits[i] < grid.size()) break;
        digits[i] = 0;
      }
      if (!done) repair();
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.notes.push_back(a.field.p != 0
                          ? "search exhausted (exhaustive over " + a.field.name() + ")"
                          : "search exhausted (bounded coefficient grid over Q)");
  return out;
}

GabrielSkeleton gabriel_skeleton(const Algebra& a) {
  GabrielSkeleton out;
  out.idempotents = primitive_idempotents(a);
  std::vector<Vec> rad = radical_basis(a);
  std::size_t n = out.idempotents.size();
  Subspace radspan = Subspace::from_vectors(a.field, a.dim, rad);
  QuotientSpace qs = quotient_space(radspan);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::size_t b = 0; b < a.dim; ++b) {
        Vec v = a.multiply(a.multiply(out.idempotents[i], a.basis_vec(b)), out.idempotents[j]);
        if (!vec_is_zero(qs.proj.apply(v)))
          throw Error("NotBasic", "two primitive idempotents give isomorphic projectives");
      }
    }
  Subspace rad2(a.field, a.dim);
  for (const Vec& x : rad)
    for (const Vec& y : rad) rad2.insert(a.multiply(x, y));
  out.arrow_counts.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Subspace acc = rad2;
      for (const Vec& r : rad) {
        Vec v = a.multiply(a.multiply(out.idempotents[i], r), out.idempotents[j]);
        if (acc.insert(v)) ++out.arrow_counts[i][j];
      }
    }
  return out;
}

}  // namespace mirrorsmith
