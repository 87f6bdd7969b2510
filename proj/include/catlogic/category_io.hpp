#ifndef CATLOGIC_CATEGORY_IO_HPP
#define CATLOGIC_CATEGORY_IO_HPP

#include "catlogic/fincat.hpp"
#include "catlogic/modpp.hpp"
#include "catlogic/reglogic.hpp"
#include "catlogic/sites.hpp"

#include <string>
#include <vector>

namespace catlogic {

/// File loaders and writers for the CLI.  All loaders throw catlogic::error
/// with "<filename>: ..." messages carrying whatever position information
/// the underlying parser produces.

/// {"objects":[...], "morphisms":[{"id","dom","cod"},...],
///  "identity":{obj:mor}, "comp":[[g,f,gf],...]} — ids are strings, comp
/// lists composable triples only.
FinCategory load_category_json(const std::string& text, const std::string& filename);
std::string category_to_json(const FinCategory& c);

/// Category JSON plus {"covers":[morphism ids]}.
Site load_site_json(const std::string& text, const std::string& filename);
std::string site_to_json(const Site& s);

/// {"sizes":{obj:n}, "action":{mor:[images...]}} against `base`; identity
/// actions may be omitted.
CovFunctor load_functor_json(const FinCategory* base, const std::string& text,
                             const std::string& filename);

/// {"sorts":{sort:n}, "relations":{rel:[[tuple],...]}}; missing relations
/// default to empty.
FinStructure load_structure_json(const Signature& sig, const std::string& text,
                                 const std::string& filename);

/// z2, z4, z6, ... (cyclic) and f2x2.
FiniteRing ring_by_name(const std::string& name);

/// "R" for the ring as a module, "R/(a,b,...)" for a quotient by the left
/// ideal generated by the listed elements.
FiniteModule module_by_expr(const FiniteRing& r, const std::string& expr);

/// {"add":[[...]], "act":[[...]]} over the given ring.
FiniteModule load_module_json(const FiniteRing& r, const std::string& text,
                              const std::string& filename);
std::string module_to_json(const FiniteModule& m);

/// Either the matrix form `pp n=1 m=1 rows=[[1,-2]]` (entries are ring
/// element ids, -k meaning the additive inverse of element k) or the linear
/// syntax `E y: x = 2*y` (integer coefficients, meaning multiples of 1).
/// Linear free variables map to columns in name order (numeric suffixes
/// compared as numbers), so x1 is column 0 however the equations are
/// written; bound variables keep their quantifier order.
LinearPp parse_pp_text(const FiniteRing& r, const std::string& text);
std::string pp_to_text(const LinearPp& f);

} // namespace catlogic

#endif
