#ifndef CATLOGIC_REGLOGIC_HPP
#define CATLOGIC_REGLOGIC_HPP

#include "catlogic/fincat.hpp" // for catlogic::error

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace catlogic {

/// Finitary many-sorted relational signature.  Declared functions are
/// compiled to graph relations (rels[graph_rel]) plus totality and
/// single-valuedness sequents; everything downstream is purely relational.
struct Signature {
  std::vector<std::string> sorts;
  struct RelDecl {
    std::string name;
    std::vector<int> arg_sorts;
    bool operator==(const RelDecl&) const = default;
  };
  std::vector<RelDecl> rels;
  struct FunDecl {
    std::string name;
    std::vector<int> arg_sorts;
    int res_sort;
    int graph_rel;
    bool operator==(const FunDecl&) const = default;
  };
  std::vector<FunDecl> funs;

  int sort_index(const std::string& name) const;
  int rel_index(const std::string& name) const;
  bool operator==(const Signature&) const = default;
};

/// Regular formula AST: truth, relational atoms, equalities, conjunction and
/// existential quantification.  Atom arguments are plain variables; function
/// terms are flattened away by the parser.
struct RegularFormula {
  enum Kind { Truth, Atom, Eq, And, Exists };
  Kind kind = Truth;
  int rel = -1;                        // Atom
  std::vector<std::string> args;       // Atom
  std::string lhs, rhs;                // Eq
  std::vector<std::string> bound;      // Exists
  std::vector<RegularFormula> children; // And: >= 2, Exists: exactly 1

  bool operator==(const RegularFormula&) const = default;

  static RegularFormula truth();
  static RegularFormula atom(int rel, std::vector<std::string> args);
  static RegularFormula eq(std::string a, std::string b);
  static RegularFormula conj(std::vector<RegularFormula> parts); // simplifies 0/1 parts
  static RegularFormula exists(std::vector<std::string> bound, RegularFormula body);
};

/// Prenex existential block over a conjunction of atoms/equalities.
struct PpFormula {
  std::vector<std::string> bound;
  std::vector<RegularFormula> atoms; // Atom or Eq nodes only
  bool operator==(const PpFormula&) const = default;

  RegularFormula as_formula() const;
};

/// One sequent forall context: lhs => rhs, with resolved variable sorts.
/// auto_fun marks the totality/single-valuedness sequents appended for
/// function declarations; the printer skips them (a reparse regenerates
/// identical copies).
struct Sequent {
  std::vector<std::string> context;
  RegularFormula lhs, rhs;
  std::map<std::string, int> var_sorts; // every variable of the sequent
  bool auto_fun = false;
  bool operator==(const Sequent&) const = default;
};

struct RegularTheory {
  Signature sig;
  std::vector<Sequent> sequents;
  bool operator==(const RegularTheory&) const = default;
};

/// Finite structure: per-sort carriers 0..size-1 and relation tables as
/// sorted tuple lists.
struct FinStructure {
  std::vector<int> sort_sizes;
  std::vector<std::vector<std::vector<int>>> rels;
};

/// Throws listing every violation (arity, range, sortedness).
void validate_structure(const Signature& sig, const FinStructure& m);

/// Componentwise product; element (a,b) of sort s is a * b_size + b, and a
/// tuple is related iff both projections are.
FinStructure product_structure(const Signature& sig, const FinStructure& a,
                               const FinStructure& b);

// ---- parsing and printing -------------------------------------------------

/// Parses a .rth theory text: `sort`, `rel`, `fun` declarations and one
/// sequent per line (`[forall x y:] phi => psi`).  `#` starts a comment.
/// Errors carry line/column positions.
RegularTheory parse_theory(const std::string& text);

std::string print_formula(const RegularFormula& f, const Signature& sig);
std::string print_theory(const RegularTheory& t);

/// Linear mode: `E y1 y2: x = 2*y1 & x + 3*y2 = 0` over integer
/// coefficients; modpp reduces them mod its ring.
struct LinearPpText {
  std::vector<std::string> free_vars;  // first occurrence order
  std::vector<std::string> bound_vars; // as written
  std::vector<std::map<std::string, long long>> rows; // sum coeff*var = 0
};
LinearPpText parse_linear_pp(const std::string& text);

// ---- semantics ------------------------------------------------------------

/// Free variables in first-occurrence order.
std::vector<std::string> free_vars(const RegularFormula& f);

/// Infers variable sorts for a formula pair from relational use; equalities
/// merge; unconstrained variables fall back to the unique sort.  Throws on
/// clashes or irrecoverable ambiguity.
std::map<std::string, int> infer_sorts(const Signature& sig,
                                       const std::vector<const RegularFormula*>& fs);

bool eval(const Signature& sig, const FinStructure& m, const RegularFormula& f,
          const std::map<std::string, int>& var_sorts,
          const std::map<std::string, int>& assignment);

/// Assignment sweep over the free variables (first-occurrence order, first
/// variable most significant); returns satisfying tuples in that order.
struct EvalSet {
  std::vector<std::string> vars;
  std::vector<std::vector<int>> tuples;
};
EvalSet eval_set(const Signature& sig, const FinStructure& m, const RegularFormula& f,
                 const std::map<std::string, int>& var_sorts);

/// Prenex normal form with capture-avoiding freshening (primes appended).
/// Extends var_sorts with the sorts of freshened bound variables.
PpFormula pp_normalize(const RegularFormula& f, std::map<std::string, int>& var_sorts);

bool models(const RegularTheory& t, const FinStructure& m);

// ---- injectivity ----------------------------------------------------------

/// A homomorphism A -> B: per-sort element maps, relation-preserving
/// (validated by is_structure_hom).
struct StructureMorphism {
  FinStructure src, tgt;
  std::vector<std::vector<int>> maps;
};

bool is_structure_hom(const Signature& sig, const FinStructure& a, const FinStructure& b,
                      const std::vector<std::vector<int>>& maps);

/// All homomorphisms A -> B in lexicographic order of the flattened maps.
std::vector<std::vector<std::vector<int>>> all_homs(const Signature& sig,
                                                    const FinStructure& a,
                                                    const FinStructure& b);

/// Every homomorphism A -> K factors through h: A -> B.
bool is_injective(const Signature& sig, const FinStructure& k, const StructureMorphism& h);

/// For each h: A -> B the sequent  forall x̄ (diag_A => exists ȳ diag_B),
/// where elements identified by h become equalities on the right.  models()
/// of the result is injectivity with respect to every h.
RegularTheory theory_from_injectivity(const Signature& sig,
                                      const std::vector<StructureMorphism>& ms);

} // namespace catlogic

#endif
