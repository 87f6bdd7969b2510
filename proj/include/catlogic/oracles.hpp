#ifndef CATLOGIC_ORACLES_HPP
#define CATLOGIC_ORACLES_HPP

#include "catlogic/fincat.hpp"
#include "catlogic/limits.hpp"
#include "catlogic/modpp.hpp"
#include "catlogic/sites.hpp"

#include <cstdint>
#include <vector>

namespace catlogic {

/// Independent re-derivations used to cross-check the main implementations.
/// Each oracle is written against the defining property, not the production
/// algorithm, and shares as little code with it as possible.

/// Literal classifier: existence searches straight from the definitions —
/// terminal/products/equalizers for lex, coequalizers of kernel pairs plus
/// pullback-stability of "is a coequalizer of some pair" for regular, and
/// effectivity of every jointly-monic pair with reflexivity, symmetry and
/// transitivity witnesses for exact.  Shares no search code with classify().
ClassifyResult classify_oracle(const FinCategory& c);

/// Literal one-step sheaf axiom for singleton covers: every compatible
/// element over the cover's codomain has exactly one amalgamation.
/// x in F(B) is compatible for h: K -> B when every parallel pair u, v with
/// u o h = v o h satisfies F(u)(x) = F(v)(x).
bool sheaf_amalgamation_oracle(const Site& s, const CovFunctor& f);

/// Filters of a finite poset given by its reflexive leq matrix: non-empty
/// up-closed subsets closed under existing binary meets.  Returned as
/// ascending bitmasks.
std::vector<std::uint32_t> filter_oracle(const std::vector<std::vector<bool>>& leq);

/// Literal sweep over all |M|^(n+m) assignments: keep the free parts of the
/// witnessed solutions.  Sorted tuples, same contract as pp_solution_set.
std::vector<std::vector<int>> pp_sweep_oracle(const FiniteModule& m,
                                              const LinearPp& phi);

/// phi entails psi over every module of the corpus up to max_size, decided
/// pointwise by the sweep.  (Sound and complete for entailment over all
/// R-modules once max_size covers the free realization of phi.)
bool pp_implies_sweep_oracle(const FiniteRing& r, const LinearPp& phi,
                             const LinearPp& psi, int max_size);

} // namespace catlogic

#endif
