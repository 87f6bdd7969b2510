#include "catlogic/fincat.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace catlogic {

namespace {

std::string mor_label(const CategoryData& d, int f) {
  if (f >= 0 && f < static_cast<int>(d.morphism_names.size()) && !d.morphism_names[f].empty())
    return d.morphism_names[f];
  return "m" + std::to_string(f);
}

} // namespace

std::vector<std::string> FinCategory::validate(const CategoryData& d) {
  std::vector<std::string> out;
  const int n = static_cast<int>(d.morphisms.size());
  for (int f = 0; f < n; ++f) {
    const auto& m = d.morphisms[f];
    if (m.dom < 0 || m.dom >= d.num_objects || m.cod < 0 || m.cod >= d.num_objects)
      out.push_back("morphism " + mor_label(d, f) + " has out-of-range dom/cod");
  }
  if (static_cast<int>(d.identity.size()) != d.num_objects) {
    out.push_back("identity table does not list every object");
    return out; // everything below needs identities
  }
  for (int x = 0; x < d.num_objects; ++x) {
    int e = d.identity[x];
    if (e < 0 || e >= n) {
      out.push_back("identity of object " + std::to_string(x) + " is not a morphism id");
    } else if (d.morphisms[e].dom != x || d.morphisms[e].cod != x) {
      out.push_back("identity of object " + std::to_string(x) + " is not an endomorphism of it");
    }
  }
  if (!out.empty()) return out;

  // Dense composition table from the triple list; detect conflicts.
  std::vector<int> comp(static_cast<size_t>(n) * n, -1);
  for (const auto& t : d.comp) {
    int g = t[0], f = t[1], gf = t[2];
    if (g < 0 || g >= n || f < 0 || f >= n || gf < 0 || gf >= n) {
      out.push_back("composition triple with out-of-range ids");
      continue;
    }
    if (d.morphisms[f].cod != d.morphisms[g].dom) {
      out.push_back("comp lists non-composable pair (" + mor_label(d, g) + ", " + mor_label(d, f) + ")");
      continue;
    }
    int& slot = comp[static_cast<size_t>(g) * n + f];
    if (slot >= 0 && slot != gf)
      out.push_back("conflicting composites for (" + mor_label(d, g) + ", " + mor_label(d, f) + ")");
    slot = gf;
  }
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f) {
      bool want = d.morphisms[f].cod == d.morphisms[g].dom;
      int gf = comp[static_cast<size_t>(g) * n + f];
      if (want && gf < 0)
        out.push_back("missing composite for composable pair (" + mor_label(d, g) + ", " + mor_label(d, f) + ")");
      if (gf >= 0) {
        if (d.morphisms[gf].dom != d.morphisms[f].dom || d.morphisms[gf].cod != d.morphisms[g].cod)
          out.push_back("composite of (" + mor_label(d, g) + ", " + mor_label(d, f) + ") has wrong endpoints");
      }
    }
  if (!out.empty()) return out;

  auto cmp = [&](int g, int f) { return comp[static_cast<size_t>(g) * n + f]; };
  for (int f = 0; f < n; ++f) {
    if (cmp(d.identity[d.morphisms[f].cod], f) != f)
      out.push_back("left unit law fails at " + mor_label(d, f));
    if (cmp(f, d.identity[d.morphisms[f].dom]) != f)
      out.push_back("right unit law fails at " + mor_label(d, f));
  }
  for (int h = 0; h < n; ++h)
    for (int g = 0; g < n; ++g) {
      if (d.morphisms[g].cod != d.morphisms[h].dom) continue;
      for (int f = 0; f < n; ++f) {
        if (d.morphisms[f].cod != d.morphisms[g].dom) continue;
        if (cmp(cmp(h, g), f) != cmp(h, cmp(g, f))) {
          out.push_back("associativity fails at (" + mor_label(d, h) + ", " + mor_label(d, g) + ", " +
                        mor_label(d, f) + ")");
        }
      }
    }
  return out;
}

FinCategory FinCategory::from_data(const CategoryData& d) {
  auto bad = validate(d);
  if (!bad.empty()) {
    std::ostringstream os;
    os << "invalid category:";
    for (const auto& s : bad) os << "\n  " << s;
    throw error(os.str());
  }
  FinCategory c;
  c.num_objects_ = d.num_objects;
  c.mor_ = d.morphisms;
  c.identity_ = d.identity;
  const int n = static_cast<int>(d.morphisms.size());
  c.comp_.assign(static_cast<size_t>(n) * n, -1);
  for (const auto& t : d.comp) c.comp_[static_cast<size_t>(t[0]) * n + t[1]] = t[2];
  c.object_names_ = d.object_names;
  c.object_names_.resize(d.num_objects);
  for (int x = 0; x < d.num_objects; ++x)
    if (c.object_names_[x].empty()) c.object_names_[x] = "X" + std::to_string(x);
  c.morphism_names_ = d.morphism_names;
  c.morphism_names_.resize(n);
  for (int f = 0; f < n; ++f)
    if (c.morphism_names_[f].empty()) c.morphism_names_[f] = "m" + std::to_string(f);
  return c;
}

std::vector<int> FinCategory::hom(int x, int y) const {
  std::vector<int> out;
  for (int f = 0; f < morphism_count(); ++f)
    if (mor_[f].dom == x && mor_[f].cod == y) out.push_back(f);
  return out;
}

std::vector<int> FinCategory::morphisms_from(int x) const {
  std::vector<int> out;
  for (int f = 0; f < morphism_count(); ++f)
    if (mor_[f].dom == x) out.push_back(f);
  return out;
}

std::vector<int> FinCategory::morphisms_into(int y) const {
  std::vector<int> out;
  for (int f = 0; f < morphism_count(); ++f)
    if (mor_[f].cod == y) out.push_back(f);
  return out;
}

FinCategory FinCategory::opposite() const {
  FinCategory c;
  c.num_objects_ = num_objects_;
  c.identity_ = identity_;
  c.mor_.resize(mor_.size());
  const int n = morphism_count();
  for (int f = 0; f < n; ++f) c.mor_[f] = {mor_[f].cod, mor_[f].dom};
  c.comp_.assign(comp_.size(), -1);
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f) {
      int gf = comp_[static_cast<size_t>(g) * n + f];
      if (gf >= 0) c.comp_[static_cast<size_t>(f) * n + g] = gf;
    }
  c.object_names_ = object_names_;
  c.morphism_names_ = morphism_names_;
  return c;
}

CategoryData FinCategory::to_data() const {
  CategoryData d;
  d.num_objects = num_objects_;
  d.morphisms = mor_;
  d.identity = identity_;
  const int n = morphism_count();
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f) {
      int gf = comp_[static_cast<size_t>(g) * n + f];
      if (gf >= 0) d.comp.push_back({g, f, gf});
    }
  d.object_names = object_names_;
  d.morphism_names = morphism_names_;
  return d;
}

MorphismFlags classify_morphism(const FinCategory& c, int f) {
  MorphismFlags r;
  const int n = c.morphism_count();
  int X = c.dom(f), Y = c.cod(f);

  r.mono = true;
  for (int u = 0; u < n && r.mono; ++u) {
    if (c.cod(u) != X) continue;
    for (int v = 0; v < n && r.mono; ++v) {
      if (c.cod(v) != X || c.dom(v) != c.dom(u)) continue;
      if (c.compose(f, u) == c.compose(f, v) && u != v) r.mono = false;
    }
  }
  r.epi = true;
  for (int u = 0; u < n && r.epi; ++u) {
    if (c.dom(u) != Y) continue;
    for (int v = 0; v < n && r.epi; ++v) {
      if (c.dom(v) != Y || c.cod(v) != c.cod(u)) continue;
      if (c.compose(u, f) == c.compose(v, f) && u != v) r.epi = false;
    }
  }
  for (int g = 0; g < n; ++g) {
    if (c.dom(g) == Y && c.cod(g) == X && c.compose(g, f) == c.identity(X)) r.split_mono = true;
    if (c.dom(g) == Y && c.cod(g) == X && c.compose(f, g) == c.identity(Y)) r.split_epi = true;
    if (c.dom(g) == Y && c.cod(g) == X && c.compose(g, f) == c.identity(X) &&
        c.compose(f, g) == c.identity(Y))
      r.iso = true;
  }
  return r;
}

FinFunctor::FinFunctor(const FinCategory* src, const FinCategory* tgt, std::vector<int> obj_map,
                       std::vector<int> mor_map)
    : src_(src), tgt_(tgt), obj_map_(std::move(obj_map)), mor_map_(std::move(mor_map)) {
  if (static_cast<int>(obj_map_.size()) != src_->object_count() ||
      static_cast<int>(mor_map_.size()) != src_->morphism_count())
    throw error("functor: map sizes do not match the source category");
  for (int x = 0; x < src_->object_count(); ++x)
    if (obj_map_[x] < 0 || obj_map_[x] >= tgt_->object_count())
      throw error("functor: object image out of range");
  for (int f = 0; f < src_->morphism_count(); ++f) {
    int ff = mor_map_[f];
    if (ff < 0 || ff >= tgt_->morphism_count()) throw error("functor: morphism image out of range");
    if (tgt_->dom(ff) != obj_map_[src_->dom(f)] || tgt_->cod(ff) != obj_map_[src_->cod(f)])
      throw error("functor: image of " + src_->morphism_name(f) + " has wrong endpoints");
  }
  for (int x = 0; x < src_->object_count(); ++x)
    if (mor_map_[src_->identity(x)] != tgt_->identity(obj_map_[x]))
      throw error("functor: does not preserve the identity of object " + std::to_string(x));
  for (int g = 0; g < src_->morphism_count(); ++g)
    for (int f = 0; f < src_->morphism_count(); ++f) {
      if (!src_->composable(g, f)) continue;
      if (mor_map_[src_->compose(g, f)] != tgt_->compose(mor_map_[g], mor_map_[f]))
        throw error("functor: does not preserve composition at (" + src_->morphism_name(g) + ", " +
                    src_->morphism_name(f) + ")");
    }
}

FinFunctor FinFunctor::identity_functor(const FinCategory* c) {
  std::vector<int> om(c->object_count()), mm(c->morphism_count());
  std::iota(om.begin(), om.end(), 0);
  std::iota(mm.begin(), mm.end(), 0);
  return FinFunctor(c, c, std::move(om), std::move(mm));
}

FinFunctor FinFunctor::compose_with(const FinFunctor& then) const {
  if (&then.src() != tgt_) throw error("functor composition endpoint mismatch");
  std::vector<int> om(src_->object_count()), mm(src_->morphism_count());
  for (int x = 0; x < src_->object_count(); ++x) om[x] = then.on_object(obj_map_[x]);
  for (int f = 0; f < src_->morphism_count(); ++f) mm[f] = then.on_morphism(mor_map_[f]);
  return FinFunctor(src_, &then.tgt(), std::move(om), std::move(mm));
}

NatTransform::NatTransform(const FinFunctor* f, const FinFunctor* g, std::vector<int> components)
    : f_(f), g_(g), components_(std::move(components)) {
  if (&f_->src() != &g_->src() || &f_->tgt() != &g_->tgt())
    throw error("natural transformation: functors are not parallel");
  const FinCategory& c = f_->src();
  const FinCategory& d = f_->tgt();
  if (static_cast<int>(components_.size()) != c.object_count())
    throw error("natural transformation: wrong number of components");
  for (int x = 0; x < c.object_count(); ++x) {
    int a = components_[x];
    if (d.dom(a) != f_->on_object(x) || d.cod(a) != g_->on_object(x))
      throw error("natural transformation: component at object " + std::to_string(x) +
                  " has wrong endpoints");
  }
  for (int m = 0; m < c.morphism_count(); ++m) {
    int x = c.dom(m), y = c.cod(m);
    if (d.compose(g_->on_morphism(m), components_[x]) !=
        d.compose(components_[y], f_->on_morphism(m)))
      throw error("naturality square fails at " + c.morphism_name(m));
  }
}

bool is_equivalence(const FinFunctor& F) {
  const FinCategory& c = F.src();
  const FinCategory& d = F.tgt();
  // Fully faithful: hom(x,y) -> hom(Fx,Fy) bijective for all pairs.
  for (int x = 0; x < c.object_count(); ++x)
    for (int y = 0; y < c.object_count(); ++y) {
      auto h = c.hom(x, y);
      auto k = d.hom(F.on_object(x), F.on_object(y));
      if (h.size() != k.size()) return false;
      std::vector<int> image;
      for (int f : h) image.push_back(F.on_morphism(f));
      std::sort(image.begin(), image.end());
      if (std::adjacent_find(image.begin(), image.end()) != image.end()) return false;
      std::sort(k.begin(), k.end());
      if (image != k) return false;
    }
  // Essentially surjective: every object of d isomorphic to some image.
  for (int y = 0; y < d.object_count(); ++y) {
    bool hit = false;
    for (int x = 0; x < c.object_count() && !hit; ++x) {
      int fx = F.on_object(x);
      for (int f : d.hom(fx, y))
        if (classify_morphism(d, f).iso) {
          hit = true;
          break;
        }
    }
    if (!hit) return false;
  }
  return true;
}

FinCategory make_chain_category(int n) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) leq[i][j] = true;
  return make_preorder_category(leq);
}

FinCategory make_discrete_category(int n) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) leq[i][i] = true;
  return make_preorder_category(leq);
}

FinCategory make_preorder_category(const std::vector<std::vector<bool>>& leq) {
  const int n = static_cast<int>(leq.size());
  CategoryData d;
  d.num_objects = n;
  std::vector<std::vector<int>> id_of(n, std::vector<int>(n, -1));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (leq[x][y]) {
        id_of[x][y] = static_cast<int>(d.morphisms.size());
        d.morphisms.push_back({x, y});
        d.morphism_names.push_back("le_" + std::to_string(x) + "_" + std::to_string(y));
      }
  d.identity.resize(n);
  for (int x = 0; x < n; ++x) {
    if (id_of[x][x] < 0) throw error("preorder relation is not reflexive");
    d.identity[x] = id_of[x][x];
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (leq[x][y] && leq[y][z]) {
          if (id_of[x][z] < 0) throw error("preorder relation is not transitive");
          d.comp.push_back({id_of[y][z], id_of[x][y], id_of[x][z]});
        }
  return FinCategory::from_data(d);
}

FinCategory make_monoid_category(const std::vector<std::vector<int>>& table, int unit) {
  const int n = static_cast<int>(table.size());
  CategoryData d;
  d.num_objects = 1;
  d.identity = {unit};
  for (int i = 0; i < n; ++i) d.morphisms.push_back({0, 0});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) d.comp.push_back({a, b, table[a][b]});
  return FinCategory::from_data(d);
}

namespace {

// Backtracking search for an invertible functor a -> b.
bool iso_search(const FinCategory& a, const FinCategory& b, std::vector<int>& obj_map,
                std::vector<int>& mor_map, int next_obj) {
  const int nm = a.morphism_count();
  if (next_obj < a.object_count()) {
    std::vector<bool> used(b.object_count(), false);
    for (int x = 0; x < next_obj; ++x) used[obj_map[x]] = true;
    for (int y = 0; y < b.object_count(); ++y) {
      if (used[y]) continue;
      // cheap degree pruning
      if (a.hom(next_obj, next_obj).size() != b.hom(y, y).size()) continue;
      obj_map[next_obj] = y;
      if (iso_search(a, b, obj_map, mor_map, next_obj + 1)) return true;
    }
    obj_map[next_obj] = -1;
    return false;
  }
  // Objects fixed; match morphisms hom-set by hom-set.
  for (int x = 0; x < a.object_count(); ++x)
    for (int y = 0; y < a.object_count(); ++y)
      if (a.hom(x, y).size() != b.hom(obj_map[x], obj_map[y]).size()) return false;

  std::vector<int> order; // morphisms of a in a fixed order
  for (int f = 0; f < nm; ++f) order.push_back(f);
  std::vector<bool> used(b.morphism_count(), false);
  std::fill(mor_map.begin(), mor_map.end(), -1);

  std::function<bool(size_t)> place = [&](size_t k) -> bool {
    if (k == order.size()) {
      // full composition check
      for (int g = 0; g < nm; ++g)
        for (int f = 0; f < nm; ++f) {
          if (!a.composable(g, f)) continue;
          if (b.compose(mor_map[g], mor_map[f]) != mor_map[a.compose(g, f)]) return false;
        }
      return true;
    }
    int f = order[k];
    for (int ff : b.hom(obj_map[a.dom(f)], obj_map[a.cod(f)])) {
      if (used[ff]) continue;
      if (a.is_identity(f) != b.is_identity(ff)) continue;
      mor_map[f] = ff;
      used[ff] = true;
      // incremental composition pruning against already-placed morphisms
      bool ok = true;
      for (size_t j = 0; j <= k && ok; ++j) {
        int g = order[j];
        if (a.composable(g, f) && mor_map[a.compose(g, f)] >= 0)
          ok = b.compose(mor_map[g], mor_map[f]) == mor_map[a.compose(g, f)];
        if (ok && a.composable(f, g) && mor_map[a.compose(f, g)] >= 0)
          ok = b.compose(mor_map[f], mor_map[g]) == mor_map[a.compose(f, g)];
      }
      if (ok && place(k + 1)) return true;
      used[ff] = false;
      mor_map[f] = -1;
    }
    return false;
  };
  return place(0);
}

} // namespace

bool are_isomorphic(const FinCategory& a, const FinCategory& b) {
  if (a.object_count() != b.object_count() || a.morphism_count() != b.morphism_count())
    return false;
  std::vector<int> obj_map(a.object_count(), -1), mor_map(a.morphism_count(), -1);
  if (a.object_count() == 0) return true;
  return iso_search(a, b, obj_map, mor_map, 0);
}

} // namespace catlogic
