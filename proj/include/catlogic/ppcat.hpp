#ifndef CATLOGIC_PPCAT_HPP
#define CATLOGIC_PPCAT_HPP

#include "catlogic/modpp.hpp"

#include <map>
#include <vector>

namespace catlogic {

/// Object of the pp-pair category: a validated PpPair phi |- psi, read as
/// the quotient "psi modulo phi" (the weaker formula is the numerator; that
/// quotient is the one that is defined over every module).  Evaluation at M
/// gives the finite abelian group psi(M)/phi(M).
struct PpObject {
  PpPair pair;
  PpObject(const FiniteRing& r, LinearPp phi, LinearPp psi)
      : pair(r, std::move(phi), std::move(psi)) {}
  explicit PpObject(PpPair p) : pair(std::move(p)) {}
  const LinearPp& den() const { return pair.phi; }
  const LinearPp& num() const { return pair.psi; }
  int arity() const { return pair.phi.n; }
  bool operator==(const PpObject& o) const { return pair.phi == o.pair.phi && pair.psi == o.pair.psi; }
};

/// Morphism presented by a pp relation rho(x, x') in source-arity +
/// target-arity free variables.  The constructor machine-checks the four
/// side conditions with pp_implies and throws on any failure:
///   totality       num_src |- exists x' (rho and num_tgt)
///   image          rho and num_src |- num_tgt
///   denominators   rho and den_src |- den_tgt
///   functionality  rho(0, x') |- den_tgt   (single-valued modulo den_tgt)
struct PpMorphism {
  PpObject src, tgt;
  LinearPp rho;
  PpMorphism(const FiniteRing& r, PpObject src, PpObject tgt, LinearPp rho);

 private:
  struct unchecked_t {};
  // Composites of valid morphisms satisfy the side conditions, so compose
  // skips revalidation (the test suite re-checks sampled composites through
  // the validating constructor).
  PpMorphism(unchecked_t, PpObject s, PpObject t, LinearPp g)
      : src(std::move(s)), tgt(std::move(t)), rho(std::move(g)) {}
  friend PpMorphism compose(const FiniteRing&, const PpMorphism&, const PpMorphism&);
};

// Formula toolkit.  All helpers return simplified formulas (duplicate and
// zero rows dropped, unused bound columns pruned).
LinearPp pp_truth(int n);                      // no equations
LinearPp pp_zero(const FiniteRing& r, int n);  // x = 0
LinearPp pp_identity_graph(const FiniteRing& r, int n); // x' = x in 2n frees
LinearPp pp_scalar_graph(const FiniteRing& r, int n, int s); // x' = s x
LinearPp pp_and(const FiniteRing& r, const LinearPp& a, const LinearPp& b);
LinearPp pp_embed(const FiniteRing& r, const LinearPp& f, int total_n, int offset);
LinearPp pp_block(const FiniteRing& r, const LinearPp& a, const LinearPp& b);
/// Turn the last k free variables into (leading) bound variables.
LinearPp pp_exists_suffix(const LinearPp& f, int k);
/// Substitute 0 for the first k free variables.
LinearPp pp_subst_zero_prefix(const LinearPp& f, int k);
/// The subgroup sum: x free, x = u + v with a(u) and b(v).
LinearPp pp_sum(const FiniteRing& r, const LinearPp& a, const LinearPp& b);
LinearPp pp_simplify(const FiniteRing& r, LinearPp f);
/// Entailment both ways.
bool pp_equivalent(const FiniteRing& r, const LinearPp& a, const LinearPp& b);

PpObject zero_pp_object(const FiniteRing& r, int arity = 1);
bool is_zero_object(const FiniteRing& r, const PpObject& x);
PpObject direct_sum(const FiniteRing& r, const PpObject& a, const PpObject& b);

PpMorphism identity_morphism(const FiniteRing& r, const PpObject& x);
PpMorphism zero_morphism(const FiniteRing& r, const PpObject& a, const PpObject& b);
PpMorphism compose(const FiniteRing& r, const PpMorphism& g, const PpMorphism& f);
PpMorphism scalar_morphism(const FiniteRing& r, const PpObject& x, int s);
/// Graph equality modulo the target denominator on the source numerator.
bool mor_equal(const FiniteRing& r, const PpMorphism& f, const PpMorphism& g);
bool is_zero_morphism(const FiniteRing& r, const PpMorphism& f);

struct KernelData {
  PpObject obj;
  PpMorphism incl;
};
KernelData kernel(const FiniteRing& r, const PpMorphism& f);

struct CokernelData {
  PpObject obj;
  PpMorphism proj;
};
CokernelData cokernel(const FiniteRing& r, const PpMorphism& f);

/// Epimorphism onto x from a representable pair (quantifier-free numerator
/// over the zero denominator), obtained by freeing the witness variables.
/// Representable objects get their identity.
PpMorphism representable_cover(const FiniteRing& r, const PpObject& x);

/// Evaluation ev_M(x) = num(M)/den(M): classes keyed by their minimal coset
/// representative, class 0 is the zero class, class_of covers every
/// numerator tuple.
struct EvGroup {
  long long order = 1;
  std::vector<std::vector<int>> reps;
  std::map<std::vector<int>, int> class_of;
  int zero_class = 0;
};
EvGroup ev_object(const FiniteModule& m, const PpObject& x);
int ev_add(const FiniteModule& m, const EvGroup& g, int a, int b);

struct EvHom {
  int src_classes = 0, tgt_classes = 0;
  std::vector<int> table;
};
EvHom ev_morphism(const FiniteModule& m, const PpMorphism& f);

/// The Serre-subcategory membership test for the abelian quotient induced
/// by a definable subcategory given by generator modules: x dies iff it
/// evaluates to 0 on every generator.
bool serre_membership(const FiniteRing& r, const std::vector<FiniteModule>& gens,
                      const PpObject& x);

} // namespace catlogic

#endif
