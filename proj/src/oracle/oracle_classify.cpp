#include "catlogic/oracles.hpp"

#include <optional>

namespace catlogic {

namespace {

bool is_terminal_obj(const FinCategory& c, int t) {
  for (int x = 0; x < c.object_count(); ++x)
    if (c.hom(x, t).size() != 1) return false;
  return true;
}

bool has_terminal(const FinCategory& c) {
  for (int t = 0; t < c.object_count(); ++t)
    if (is_terminal_obj(c, t)) return true;
  return false;
}

bool product_universal(const FinCategory& c, int x, int y, int p, int p1, int p2) {
  for (int z = 0; z < c.object_count(); ++z)
    for (int f : c.hom(z, x))
      for (int g : c.hom(z, y)) {
        int fillers = 0;
        for (int u : c.hom(z, p))
          if (c.compose(p1, u) == f && c.compose(p2, u) == g) ++fillers;
        if (fillers != 1) return false;
      }
  return true;
}

bool has_product(const FinCategory& c, int x, int y) {
  for (int p = 0; p < c.object_count(); ++p)
    for (int p1 : c.hom(p, x))
      for (int p2 : c.hom(p, y))
        if (product_universal(c, x, y, p, p1, p2)) return true;
  return false;
}

bool has_equalizer(const FinCategory& c, int u, int v) {
  int x = c.dom(u);
  for (int e = 0; e < c.morphism_count(); ++e) {
    if (c.cod(e) != x || c.compose(u, e) != c.compose(v, e)) continue;
    bool universal = true;
    for (int z = 0; z < c.object_count() && universal; ++z)
      for (int m : c.hom(z, x)) {
        if (c.compose(u, m) != c.compose(v, m)) continue;
        int fillers = 0;
        for (int w : c.hom(z, c.dom(e)))
          if (c.compose(e, w) == m) ++fillers;
        if (fillers != 1) {
          universal = false;
          break;
        }
      }
    if (universal) return true;
  }
  return false;
}

bool lex_literal(const FinCategory& c) {
  if (!has_terminal(c)) return false;
  for (int x = 0; x < c.object_count(); ++x)
    for (int y = 0; y < c.object_count(); ++y)
      if (!has_product(c, x, y)) return false;
  for (int u = 0; u < c.morphism_count(); ++u)
    for (int v = 0; v < c.morphism_count(); ++v)
      if (c.dom(u) == c.dom(v) && c.cod(u) == c.cod(v) && !has_equalizer(c, u, v))
        return false;
  return true;
}

struct PbCone {
  int p = -1, px = -1, py = -1;
};

std::optional<PbCone> find_pullback(const FinCategory& c, int f, int g) {
  for (int p = 0; p < c.object_count(); ++p)
    for (int px : c.hom(p, c.dom(f)))
      for (int py : c.hom(p, c.dom(g))) {
        if (c.compose(f, px) != c.compose(g, py)) continue;
        bool universal = true;
        for (int z = 0; z < c.object_count() && universal; ++z)
          for (int a : c.hom(z, c.dom(f))) {
            for (int b : c.hom(z, c.dom(g))) {
              if (c.compose(f, a) != c.compose(g, b)) continue;
              int fillers = 0;
              for (int u : c.hom(z, p))
                if (c.compose(px, u) == a && c.compose(py, u) == b) ++fillers;
              if (fillers != 1) {
                universal = false;
                break;
              }
            }
            if (!universal) break;
          }
        if (universal) return PbCone{p, px, py};
      }
  return std::nullopt;
}

// q coequalizes (u, v) and is universal among morphisms doing so.
bool coequalizer_of(const FinCategory& c, int q, int u, int v) {
  if (c.dom(q) != c.cod(u) || c.compose(q, u) != c.compose(q, v)) return false;
  for (int z = 0; z < c.object_count(); ++z)
    for (int w : c.hom(c.dom(q), z)) {
      if (c.compose(w, u) != c.compose(w, v)) continue;
      int fillers = 0;
      for (int t : c.hom(c.cod(q), z))
        if (c.compose(t, q) == w) ++fillers;
      if (fillers != 1) return false;
    }
  return true;
}

bool regular_epi_literal(const FinCategory& c, int e) {
  int x = c.dom(e);
  for (int u : c.morphisms_into(x))
    for (int v : c.hom(c.dom(u), x))
      if (coequalizer_of(c, e, u, v)) return true;
  return false;
}

bool regular_literal(const FinCategory& c) {
  for (int f = 0; f < c.morphism_count(); ++f) {
    auto kp = find_pullback(c, f, f);
    if (!kp) return false;
    bool coeq = false;
    for (int q : c.morphisms_from(c.dom(f)))
      if (coequalizer_of(c, q, kp->px, kp->py)) {
        coeq = true;
        break;
      }
    if (!coeq) return false;
  }
  for (int e = 0; e < c.morphism_count(); ++e) {
    if (!regular_epi_literal(c, e)) continue;
    for (int g = 0; g < c.morphism_count(); ++g) {
      if (c.cod(g) != c.cod(e)) continue;
      auto pb = find_pullback(c, e, g);
      if (!pb || !regular_epi_literal(c, pb->py)) return false;
    }
  }
  return true;
}

bool jointly_monic(const FinCategory& c, int r1, int r2) {
  int r = c.dom(r1);
  for (int z = 0; z < c.object_count(); ++z) {
    auto in = c.hom(z, r);
    for (int g : in)
      for (int h : in)
        if (g != h && c.compose(r1, g) == c.compose(r1, h) &&
            c.compose(r2, g) == c.compose(r2, h))
          return false;
  }
  return true;
}

bool kernel_pair_cone(const FinCategory& c, int f, int r, int r1, int r2) {
  if (c.compose(f, r1) != c.compose(f, r2)) return false;
  int x = c.dom(f);
  for (int z = 0; z < c.object_count(); ++z)
    for (int a : c.hom(z, x))
      for (int b : c.hom(z, x)) {
        if (c.compose(f, a) != c.compose(f, b)) continue;
        int fillers = 0;
        for (int u : c.hom(z, r))
          if (c.compose(r1, u) == a && c.compose(r2, u) == b) ++fillers;
        if (fillers != 1) return false;
      }
  return true;
}

bool exact_literal(const FinCategory& c) {
  for (int r = 0; r < c.object_count(); ++r)
    for (int x = 0; x < c.object_count(); ++x)
      for (int r1 : c.hom(r, x))
        for (int r2 : c.hom(r, x)) {
          if (!jointly_monic(c, r1, r2)) continue;
          bool refl = false;
          for (int d : c.hom(x, r))
            refl = refl || (c.compose(r1, d) == c.identity(x) &&
                            c.compose(r2, d) == c.identity(x));
          if (!refl) continue;
          bool sym = false;
          for (int s : c.hom(r, r))
            sym = sym || (c.compose(r1, s) == r2 && c.compose(r2, s) == r1);
          if (!sym) continue;
          auto pb = find_pullback(c, r2, r1);
          if (!pb) continue;
          bool trans = false;
          for (int t : c.hom(pb->p, r))
            trans = trans || (c.compose(r1, t) == c.compose(r1, pb->px) &&
                              c.compose(r2, t) == c.compose(r2, pb->py));
          if (!trans) continue;
          bool effective = false;
          for (int f : c.morphisms_from(x))
            if (kernel_pair_cone(c, f, r, r1, r2)) {
              effective = true;
              break;
            }
          if (!effective) return false;
        }
  return true;
}

} // namespace

ClassifyResult classify_oracle(const FinCategory& c) {
  ClassifyResult out;
  out.is_lex = lex_literal(c);
  out.is_regular = out.is_lex && regular_literal(c);
  out.is_exact = out.is_regular && exact_literal(c);
  return out;
}

} // namespace catlogic
