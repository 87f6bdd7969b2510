#include "catlogic/oracles.hpp"

namespace catlogic {

// Checks the one-step sheaf axiom directly, with no reference to the
// bijectivity shortcut: for each cover h: K -> B, a matching family for the
// sieve generated by h is exactly a compatible x in F(B), and the axiom
// demands a unique y in F(K) restricting to it.
bool sheaf_amalgamation_oracle(const Site& s, const CovFunctor& f) {
  const FinCategory& c = s.base;
  for (const auto& cov : s.covers)
    for (int h : cov) {
      int k = c.dom(h), b = c.cod(h);
      for (int x = 0; x < f.size(b); ++x) {
        bool compatible = true;
        for (int u = 0; u < c.morphism_count() && compatible; ++u) {
          if (c.dom(u) != b) continue;
          for (int v = 0; v < c.morphism_count() && compatible; ++v) {
            if (c.dom(v) != b || c.cod(v) != c.cod(u)) continue;
            if (c.compose(u, h) == c.compose(v, h) && f.apply(u, x) != f.apply(v, x))
              compatible = false;
          }
        }
        if (!compatible) continue;
        int amalgamations = 0;
        for (int y = 0; y < f.size(k); ++y)
          if (f.apply(h, y) == x) ++amalgamations;
        if (amalgamations != 1) return false;
      }
    }
  return true;
}

} // namespace catlogic
