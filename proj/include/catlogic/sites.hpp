#ifndef CATLOGIC_SITES_HPP
#define CATLOGIC_SITES_HPP

#include "catlogic/fincat.hpp"
#include "catlogic/limits.hpp"
#include "catlogic/presheaf.hpp"

#include <cstdint>
#include <vector>

namespace catlogic {

/// A covariant finite-set-valued functor on a category: carriers 0..size-1
/// per object, action(f) the table of F(f): F(dom f) -> F(cod f).  Laws are
/// validated at construction.
class CovFunctor {
public:
  CovFunctor(const FinCategory* base, std::vector<int> sizes,
             std::vector<std::vector<int>> action);

  const FinCategory& base() const { return *base_; }
  int size(int x) const { return sizes_[x]; }
  int apply(int f, int elem) const { return action_[f][elem]; }
  const std::vector<int>& sizes() const { return sizes_; }

private:
  const FinCategory* base_;
  std::vector<int> sizes_;
  std::vector<std::vector<int>> action_;
};

/// hom(x, -) as a covariant functor, carriers indexed by position in
/// base.hom(x, y).
CovFunctor corepresentable(const FinCategory* base, int x);

/// A site stored by its generating class: covers[K] lists the generating
/// morphisms h with dom h = K.  Sheaves live on base^op; a "presheaf on
/// base^op" is handled throughout as a covariant functor on base.
struct Site {
  FinCategory base;
  std::vector<std::vector<int>> covers;
};

/// Least superset of `m` closed under identities, composition, left
/// cancellation (g o f and f present force g) and pushouts along arbitrary
/// morphisms — the pushout rule fires only where the pushout exists.
std::vector<int> saturate(const FinCategory& c, std::vector<int> m);

/// covers[K] = members of `m` with domain K.  Throws unless `m` is saturated.
Site coverage_from_injectives(const FinCategory& c, const std::vector<int>& m);

/// Site on opposite(b) generated by the reversed regular epimorphisms.
/// Throws unless classify(b).is_regular.
Site canonical_regular_coverage(const FinCategory& b);

/// The paper-facing criterion: F(h) bijective for every generator.
bool is_sheaf(const Site& s, const CovFunctor& f);

/// Every corepresentable on the base is a sheaf.
bool check_subcanonical(const Site& s);

/// Continuous subterminal-valued lex points of the site: lex_points(base)
/// filtered by surjectivity of F(h) on generators, i.e. cod h in S forces
/// dom h in S.  The poset category and surviving masks are returned;
/// positions index into lex_points(base).masks.
struct SitePoints {
  FinCategory category;
  std::vector<std::uint32_t> masks;
};
SitePoints enumerate_points(const Site& s);

} // namespace catlogic

#endif
