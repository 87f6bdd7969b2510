#ifndef CATLOGIC_MODPP_HPP
#define CATLOGIC_MODPP_HPP

#include "catlogic/zlinalg.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace catlogic {

/// Unital associative ring on carrier 0..n-1 given by tables.  The
/// constructor checks every axiom exhaustively (commutativity of * is not
/// required).
class FiniteRing {
 public:
  FiniteRing(std::vector<std::vector<int>> add, std::vector<std::vector<int>> mul,
             int zero, int one);

  static FiniteRing cyclic(int n); // Z/n
  static FiniteRing f2x2();        // F2[x]/(x^2); element a + b*x encoded a + 2b

  int size() const { return (int)add_.size(); }
  int add(int a, int b) const { return add_[a][b]; }
  int mul(int a, int b) const { return mul_[a][b]; }
  int neg(int a) const { return neg_[a]; }
  int zero() const { return zero_; }
  int one() const { return one_; }
  bool operator==(const FiniteRing& o) const {
    return add_ == o.add_ && mul_ == o.mul_ && zero_ == o.zero_ && one_ == o.one_;
  }

 private:
  std::vector<std::vector<int>> add_, mul_;
  std::vector<int> neg_;
  int zero_, one_;
};

/// Left module over a FiniteRing, again by tables.  Additive and module
/// axioms are checked exhaustively up to 64 elements; beyond that the cubic
/// associativity sweep is sampled (everything else stays exhaustive).
class FiniteModule {
 public:
  FiniteModule(FiniteRing ring, std::vector<std::vector<int>> add,
               std::vector<std::vector<int>> act, int zero = 0);

  const FiniteRing& ring() const { return ring_; }
  int size() const { return (int)add_.size(); }
  int add(int a, int b) const { return add_[a][b]; }
  int act(int r, int a) const { return act_[r][a]; }
  int neg(int a) const { return neg_[a]; }
  int zero() const { return zero_; }
  bool operator==(const FiniteModule& o) const {
    return ring_ == o.ring_ && add_ == o.add_ && act_ == o.act_ && zero_ == o.zero_;
  }

 private:
  FiniteRing ring_;
  std::vector<std::vector<int>> add_, act_;
  std::vector<int> neg_;
  int zero_;
};

FiniteModule zero_module(const FiniteRing& r);
FiniteModule ring_as_module(const FiniteRing& r);
/// R / (left ideal generated by gens); carrier = cosets keyed by minimal
/// representative, in ascending representative order.
FiniteModule quotient_by_ideal(const FiniteRing& r, const std::vector<int>& gens);
/// Componentwise product; the first factor is the most significant digit of
/// the element encoding.
FiniteModule product_module(const FiniteRing& r, const std::vector<FiniteModule>& ms);

bool is_module_hom(const FiniteModule& a, const FiniteModule& b,
                   const std::vector<int>& f);
std::vector<std::vector<int>> all_module_homs(const FiniteModule& a,
                                              const FiniteModule& b);
bool modules_isomorphic(const FiniteModule& a, const FiniteModule& b);

/// Internal direct-sum decomposition: elements gens[i] of additive order
/// orders[i] with every element a unique sum of multiples.
struct ModuleBasis {
  std::vector<int> gens;
  std::vector<long long> orders;
};
ModuleBasis module_basis(const FiniteModule& m);

/// All modules over r with <= max_size elements, one per isomorphism class:
/// multiset products of the cyclic modules R/I, deduplicated by isomorphism
/// search.  (For the rings exercised here — chain rings and their products —
/// the cyclics generate everything.)  Ordered by size, then construction.
std::vector<FiniteModule> module_corpus(const FiniteRing& r, int max_size);

/// phi(x_1..x_n) = exists y_1..y_m, rows * (x y)^T = 0, entries ring
/// elements.
struct LinearPp {
  int n = 0, m = 0;
  std::vector<std::vector<int>> rows;
  bool operator==(const LinearPp&) const = default;
};

/// phi -> psi as in the definable-subcategory definition; the implication is
/// validated at construction.
struct PpPair {
  PpPair(const FiniteRing& r, LinearPp phi, LinearPp psi);
  LinearPp phi, psi;
};

/// Exact solution set phi(M), sorted tuples in M^n.
std::vector<std::vector<int>> pp_solution_set(const FiniteModule& m, const LinearPp& phi);

/// F = R^(n+m) / (left row span), with the images of the free coordinates.
struct FreeRealization {
  FiniteModule module;
  std::vector<int> gens; // c-bar, length n
};
FreeRealization free_realization(const FiniteRing& r, const LinearPp& phi);

/// phi entails psi over all R-modules (decided by integer linear algebra on
/// the free realization of phi; the module sweep is a test oracle).
bool pp_implies(const FiniteRing& r, const LinearPp& phi, const LinearPp& psi);

/// f embeds a purely iff a retraction exists (finite modules are
/// pure-injective).  Throws if f is not an injective homomorphism.
bool is_pure_embedding(const FiniteModule& a, const FiniteModule& b,
                       const std::vector<int>& f);

/// phi(M) = psi(M) for every pair.
bool defclass_membership(const FiniteRing& r, const std::vector<PpPair>& pairs,
                         const FiniteModule& m);

struct ClosureReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Audits the member sublist of `modules` for closure under binary products,
/// direct summands and eventually-constant chain colimits.
ClosureReport closure_audit(const std::function<bool(const FiniteModule&)>& member,
                            const std::vector<FiniteModule>& modules);
ClosureReport closure_audit(const FiniteRing& r, const std::vector<PpPair>& pairs,
                            const std::vector<FiniteModule>& modules);

/// Reduced product over a finite directed poset (which always has a maximum
/// top): P_i = prod_{j >= i} D_j, h_i(x) = (d_ij(x))_j, H_ik the coordinate
/// restrictions, and h: D = D_top -> P_top the colimit comparison.
struct ReducedProduct {
  int top = -1;
  FiniteModule colimit;              // D_top
  std::vector<FiniteModule> prods;   // P_i
  std::vector<std::vector<int>> h_i; // D_i -> P_i
  std::map<std::pair<int, int>, std::vector<int>> h_ik; // P_i -> P_k for i <= k
  std::vector<std::vector<int>> big_h; // H_i = H_{i,top}
  std::vector<int> h;                // D -> P_top
  bool splits_verified = false;      // every h_i has an exhibited retraction
  bool purity_verified = false;      // h passes is_pure_embedding
};
ReducedProduct reduced_product(
    const FiniteRing& r, const std::vector<std::vector<bool>>& leq,
    const std::vector<FiniteModule>& d,
    const std::map<std::pair<int, int>, std::vector<int>>& maps);

/// Canonical comparison between colim of products and product of colimits
/// for eventually-constant chains; constructed explicitly and checked to be
/// an isomorphism (which it always is at finite scale).
bool distributivity_probe(const FiniteRing& r,
                          const std::vector<std::vector<FiniteModule>>& chains,
                          const std::vector<std::vector<std::vector<int>>>& maps);

} // namespace catlogic

#endif
