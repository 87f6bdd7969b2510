#ifndef CATLOGIC_LIMITS_HPP
#define CATLOGIC_LIMITS_HPP

#include "catlogic/fincat.hpp"

#include <optional>
#include <string>
#include <vector>

namespace catlogic {

/// A finite diagram: a shape category together with a functor into the
/// ambient category (object/morphism maps, functoriality validated by
/// make_diagram).
struct Diagram {
  FinCategory shape;
  std::vector<int> obj;
  std::vector<int> mor;
};

Diagram make_diagram(const FinCategory& ambient, FinCategory shape, std::vector<int> obj,
                     std::vector<int> mor);

/// legs[i]: apex -> d(i) for limits, d(i) -> apex for colimits.
struct Cone {
  int apex = -1;
  std::vector<int> legs;
};
using Cocone = Cone;

/// Terminal cone over the diagram, or nullopt.  Deterministic: the cone with
/// the smallest apex id, then lexicographically smallest legs, among all
/// terminal cones.  The winner is re-audited for terminality before return.
std::optional<Cone> limit(const FinCategory& c, const Diagram& d);

/// Initial cocone under the diagram; dual conventions to limit().
std::optional<Cocone> colimit(const FinCategory& c, const Diagram& d);

// Shapes used by the named (co)limits below; exposed for tests.
FinCategory shape_empty();
FinCategory shape_discrete_pair();
FinCategory shape_parallel_pair(); // two arrows 0 -> 1, morphism ids 2 and 3
FinCategory shape_cospan();        // 0 -> 2 <- 1, arrow ids 3 and 4
FinCategory shape_span();          // 0 <- 2 -> 1, arrow ids 3 and 4

std::optional<int> terminal_object(const FinCategory& c);
std::optional<int> initial_object(const FinCategory& c);

/// legs = {p1: P -> x, p2: P -> y}.
std::optional<Cone> product(const FinCategory& c, int x, int y);
/// u, v parallel; legs = {e: E -> dom u, u o e}.
std::optional<Cone> equalizer(const FinCategory& c, int u, int v);
/// f: X -> Z, g: Y -> Z; legs = {P -> X, P -> Y, P -> Z}.
std::optional<Cone> pullback(const FinCategory& c, int f, int g);
std::optional<Cocone> coequalizer(const FinCategory& c, int u, int v);
/// f: A -> X, g: A -> Y; legs = {X -> P, Y -> P, A -> P}.
std::optional<Cocone> pushout(const FinCategory& c, int f, int g);

struct KernelPair {
  int obj = -1;
  int p1 = -1;
  int p2 = -1;
};

/// Pullback of f along itself; nullopt when the pullback is missing.
std::optional<KernelPair> kernel_pair(const FinCategory& c, int f);

/// f is the coequalizer of some parallel pair (exhaustive search).
bool is_regular_epi(const FinCategory& c, int f);

/// An internal equivalence relation on some object: a subobject of X*X with
/// reflexivity/symmetry/transitivity witnesses.  The subobject representative
/// is the smallest qualifying mono id.
struct EquivRelation {
  int rel_obj = -1;
  int mono = -1; // representative mono rel_obj >-> X*X
  int p1 = -1, p2 = -1;
  int refl = -1, sym = -1;
  int pb_obj = -1, q1 = -1, q2 = -1; // pullback R x_X R
  int trans = -1;
};

/// All equivalence relations on X, one per subobject class of X*X.
/// Throws when X*X is missing, or when a candidate needs a pullback R x_X R
/// that the category lacks.
std::vector<EquivRelation> equivalence_relations(const FinCategory& c, int x);

struct ClassifyResult {
  bool is_lex = false;
  bool is_regular = false;
  bool is_exact = false;
  std::string detail; // first reason for each failed level, for reports
};

/// Lex = terminal + binary products + equalizers; regular adds coequalizers
/// of kernel pairs and pullback-stability of regular epis; exact adds
/// "every equivalence relation is a kernel pair".
ClassifyResult classify(const FinCategory& c);

/// Both endpoints must classify as regular (throws otherwise).  Checks
/// preservation of the chosen terminal/product/equalizer witnesses and of
/// regular epis.
bool is_regular_functor(const FinFunctor& f);

} // namespace catlogic

#endif
