#ifndef CATLOGIC_FINCAT_HPP
#define CATLOGIC_FINCAT_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace catlogic {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MorRec {
  int dom = -1;
  int cod = -1;
};

/// Raw composition tables, before any validation.
struct CategoryData {
  int num_objects = 0;
  std::vector<MorRec> morphisms;
  std::vector<int> identity;            // object id -> morphism id
  std::vector<std::array<int, 3>> comp; // {g, f, g o f}
  std::vector<std::string> object_names;   // optional, for I/O
  std::vector<std::string> morphism_names; // optional, for I/O
};

/// A finite category with dense integer ids and a total composition table
/// over composable pairs.  Instances are always valid: `from_data` rejects
/// tables that break unit or associativity laws, so the query API never has
/// to re-check anything.
class FinCategory {
public:
  FinCategory() = default;

  /// Validates and builds; throws catlogic::error listing every violation.
  static FinCategory from_data(const CategoryData& d);

  /// All law violations in `d`, empty when `d` describes a category.
  static std::vector<std::string> validate(const CategoryData& d);

  int object_count() const { return num_objects_; }
  int morphism_count() const { return static_cast<int>(mor_.size()); }
  int dom(int f) const { return mor_[f].dom; }
  int cod(int f) const { return mor_[f].cod; }
  int identity(int x) const { return identity_[x]; }
  bool is_identity(int f) const { return identity_[mor_[f].dom] == f && mor_[f].dom == mor_[f].cod; }
  bool composable(int g, int f) const { return mor_[f].cod == mor_[g].dom; }

  /// g o f; requires cod(f) == dom(g).
  int compose(int g, int f) const {
    int r = comp_[static_cast<size_t>(g) * mor_.size() + f];
    if (r < 0) throw error("compose: morphisms not composable");
    return r;
  }

  std::vector<int> hom(int x, int y) const;
  std::vector<int> morphisms_from(int x) const;
  std::vector<int> morphisms_into(int y) const;

  FinCategory opposite() const;

  const std::string& object_name(int x) const { return object_names_[x]; }
  const std::string& morphism_name(int f) const { return morphism_names_[f]; }

  CategoryData to_data() const;

private:
  int num_objects_ = 0;
  std::vector<MorRec> mor_;
  std::vector<int> identity_;
  std::vector<int> comp_; // comp_[g*n + f] = g o f, -1 when not composable
  std::vector<std::string> object_names_;
  std::vector<std::string> morphism_names_;
};

struct MorphismFlags {
  bool mono = false;
  bool epi = false;
  bool split_mono = false;
  bool split_epi = false;
  bool iso = false;
};

/// Flags computed by exhaustive quantification over the category's tables.
MorphismFlags classify_morphism(const FinCategory& c, int f);

/// A functor between finite categories, validated at construction.
class FinFunctor {
public:
  FinFunctor() = default;
  FinFunctor(const FinCategory* src, const FinCategory* tgt,
             std::vector<int> obj_map, std::vector<int> mor_map);

  const FinCategory& src() const { return *src_; }
  const FinCategory& tgt() const { return *tgt_; }
  int on_object(int x) const { return obj_map_[x]; }
  int on_morphism(int f) const { return mor_map_[f]; }

  static FinFunctor identity_functor(const FinCategory* c);
  FinFunctor compose_with(const FinFunctor& then) const; // then . this

private:
  const FinCategory* src_ = nullptr;
  const FinCategory* tgt_ = nullptr;
  std::vector<int> obj_map_;
  std::vector<int> mor_map_;
};

/// A natural transformation between parallel functors, validated at
/// construction (componentwise naturality squares).
class NatTransform {
public:
  NatTransform(const FinFunctor* f, const FinFunctor* g, std::vector<int> components);

  int component(int x) const { return components_[x]; }
  const FinFunctor& from() const { return *f_; }
  const FinFunctor& to() const { return *g_; }

private:
  const FinFunctor* f_ = nullptr;
  const FinFunctor* g_ = nullptr;
  std::vector<int> components_; // object of src -> morphism of tgt
};

/// Fully faithful + essentially surjective, each checked exhaustively.
bool is_equivalence(const FinFunctor& f);

// -- Builders used throughout the test corpora. --

/// Total order 0 < 1 < ... < n-1 as a thin category.
FinCategory make_chain_category(int n);

FinCategory make_discrete_category(int n);

/// Thin category of a preorder given by its reflexive `leq` matrix.
/// Morphism ids enumerate pairs (x, y) with leq[x][y], ordered by (x, y).
FinCategory make_preorder_category(const std::vector<std::vector<bool>>& leq);

/// One-object category of a monoid given by its multiplication table;
/// table[a][b] = a*b and `unit` is the identity element.
FinCategory make_monoid_category(const std::vector<std::vector<int>>& table, int unit);

/// Isomorphism-of-categories test (invertible functor search).  Used for
/// corpus dedup; exhaustive over object/morphism bijections with pruning.
bool are_isomorphic(const FinCategory& a, const FinCategory& b);

} // namespace catlogic

#endif
