#ifndef CATLOGIC_PRESHEAF_HPP
#define CATLOGIC_PRESHEAF_HPP

#include "catlogic/fincat.hpp"
#include "catlogic/limits.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace catlogic {

/// A finite-set-valued presheaf on `base`: carriers are 0..size-1 per object,
/// and action(f) for f: X -> Y is the table of F(f): F(Y) -> F(X).
/// Functor laws are validated at construction.
class Presheaf {
public:
  Presheaf(const FinCategory* base, std::vector<int> sizes, std::vector<std::vector<int>> action);

  const FinCategory& base() const { return *base_; }
  int size(int x) const { return sizes_[x]; }
  int apply(int f, int elem) const { return action_[f][elem]; }
  const std::vector<int>& sizes() const { return sizes_; }

  bool same_tables(const Presheaf& other) const {
    return sizes_ == other.sizes_ && action_ == other.action_;
  }

private:
  const FinCategory* base_;
  std::vector<int> sizes_;
  std::vector<std::vector<int>> action_;
};

/// Componentwise map F(X) -> G(X) with naturality validated.
class PresheafMorphism {
public:
  PresheafMorphism(const Presheaf* src, const Presheaf* tgt,
                   std::vector<std::vector<int>> components);

  const Presheaf& src() const { return *src_; }
  const Presheaf& tgt() const { return *tgt_; }
  int apply(int x, int elem) const { return components_[x][elem]; }
  const std::vector<std::vector<int>>& components() const { return components_; }

private:
  const Presheaf* src_;
  const Presheaf* tgt_;
  std::vector<std::vector<int>> components_;
};

/// hom(-, x) with carriers indexed by position in base.hom(y, x).
Presheaf yoneda(const FinCategory* base, int x);

/// All natural transformations F -> G in a fixed deterministic order.
std::vector<PresheafMorphism> presheaf_morphisms(const Presheaf& f, const Presheaf& g);

/// Componentwise surjective (regular epi in a presheaf category).
bool is_epi(const PresheafMorphism& m);

bool presheaves_isomorphic(const Presheaf& f, const Presheaf& g);

/// Some representable covers F: exists C and a in F(C) whose Yoneda transform
/// y(C) -> F is componentwise surjective.
bool is_supercompact(const Presheaf& f);

/// The two-step condition: a representable cover whose kernel-pair presheaf
/// is itself covered by a representable.
bool is_regular_object(const Presheaf& f);

/// The ex/lex completion realized inside presheaves: all quotients of
/// representables by action-closed congruences whose relation presheaf is
/// supercompact, deduplicated up to isomorphism.  `unit_obj`/`unit_mor`
/// describe the comparison functor from the base into `category`.
struct Completion {
  FinCategory category;
  std::vector<Presheaf> objects;
  std::vector<int> unit_obj;
  std::vector<int> unit_mor;
};

/// Requires classify(c).is_lex.
Completion ex_lex_completion(const FinCategory& c);

/// Subterminal-valued lex functors c -> FinSet, as a poset under pointwise
/// inclusion.  masks[i] records which objects the i-th point sends to a
/// singleton.  Requires classify(c).is_lex.
struct LexPoints {
  FinCategory poset;
  std::vector<std::uint32_t> masks;
};
LexPoints lex_points(const FinCategory& c);

/// Exhaustively confirms that every lex functor with value sizes <= max_value
/// is subterminal-valued: size assignments violating limit-cardinality
/// constraints are discarded as impossible, and any surviving assignment with
/// a value >= 2 is refuted by full functor enumeration.  `ok` is false only
/// if an actual large-valued lex functor was found.
struct SubterminalReport {
  bool ok = true;
  std::string detail;
};
SubterminalReport check_subterminal_lemma(const FinCategory& c, int max_value);

} // namespace catlogic

#endif
