#ifndef CATLOGIC_CORPUS_HPP
#define CATLOGIC_CORPUS_HPP

#include "catlogic/fincat.hpp"
#include "catlogic/reglogic.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace catlogic {

/// Raw functor tables, usable either as a covariant functor on c
/// (CovFunctor) or as a presheaf on c^op (Presheaf) — the validation laws
/// coincide because opposite() keeps morphism ids.
struct FunctorTables {
  std::vector<int> sizes;
  std::vector<std::vector<int>> action;
};

/// Every covariant finite-set-valued functor on c with all carriers of size
/// <= max_size, in deterministic (sizes, actions) lexicographic order.
std::vector<FunctorTables> all_cov_functor_tables(const FinCategory& c, int max_size);

/// All lattices with <= max_n elements up to isomorphism, as thin categories
/// via make_preorder_category, ordered by size then by leq encoding.
/// Element 0 need not be the bottom; labels are only required to extend the
/// order linearly.
std::vector<FinCategory> all_lattices(int max_n);

/// The leq matrices backing all_lattices, same order.
std::vector<std::vector<std::vector<bool>>> all_lattice_orders(int max_n);

/// Deduplicated corpus of small categories for the classifier cross-check:
/// preorders, monoids, free categories on small graphs and function-closure
/// categories, each with <= max_objects objects and <= max_morphisms
/// morphisms.  Deterministic given the seed.
std::vector<FinCategory> classifier_corpus(int max_objects, int max_morphisms,
                                           std::uint64_t seed, int want);

/// One sort "v", one binary relation "E".
Signature digraph_signature();

/// Every structure with each carrier of size <= max_per_sort, sizes in
/// mixed-radix order, relation tables by ascending bitmask over lex-ordered
/// tuples.  Throws when the count would exceed the budget; meant for tiny
/// signatures only.
std::vector<FinStructure> all_structures(const Signature& sig, int max_per_sort,
                                         long long budget = 1 << 20);

/// all_structures for the digraph signature (531 digraphs for max_n = 3,
/// counting the empty one).
std::vector<FinStructure> all_digraphs(int max_n);

struct RandomFormula {
  RegularFormula formula;
  std::map<std::string, int> var_sorts;
};

/// Seeded random regular formula; free variables x<i>, bound v<i>; every
/// variable's sort is recorded.
RandomFormula random_regular_formula(const Signature& sig, std::mt19937_64& rng,
                                     int max_depth);

/// Seeded random theory; context and var_sorts follow the parser's
/// conventions, so single-sort theories survive a print/parse round trip.
RegularTheory random_theory(const Signature& sig, std::mt19937_64& rng, int n_sequents,
                            int max_depth);

} // namespace catlogic

#endif
