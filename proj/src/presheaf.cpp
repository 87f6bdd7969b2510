#include "catlogic/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace catlogic {

Presheaf::Presheaf(const FinCategory* base, std::vector<int> sizes,
                   std::vector<std::vector<int>> action)
    : base_(base), sizes_(std::move(sizes)), action_(std::move(action)) {
  const FinCategory& c = *base_;
  if (static_cast<int>(sizes_.size()) != c.object_count() ||
      static_cast<int>(action_.size()) != c.morphism_count())
    throw error("presheaf: table sizes do not match the base category");
  for (int f = 0; f < c.morphism_count(); ++f) {
    if (static_cast<int>(action_[f].size()) != sizes_[c.cod(f)])
      throw error("presheaf: action of " + c.morphism_name(f) + " has wrong arity");
    for (int v : action_[f])
      if (v < 0 || v >= sizes_[c.dom(f)])
        throw error("presheaf: action of " + c.morphism_name(f) + " maps out of range");
  }
  for (int x = 0; x < c.object_count(); ++x)
    for (int e = 0; e < sizes_[x]; ++e)
      if (action_[c.identity(x)][e] != e)
        throw error("presheaf: identity action at object " + std::to_string(x) + " is not id");
  for (int g = 0; g < c.morphism_count(); ++g)
    for (int f = 0; f < c.morphism_count(); ++f) {
      if (!c.composable(g, f)) continue;
      int gf = c.compose(g, f);
      for (int e = 0; e < sizes_[c.cod(g)]; ++e)
        if (action_[gf][e] != action_[f][action_[g][e]])
          throw error("presheaf: action not functorial at (" + c.morphism_name(g) + ", " +
                      c.morphism_name(f) + ")");
    }
}

PresheafMorphism::PresheafMorphism(const Presheaf* src, const Presheaf* tgt,
                                   std::vector<std::vector<int>> components)
    : src_(src), tgt_(tgt), components_(std::move(components)) {
  const FinCategory& c = src_->base();
  if (&c != &tgt_->base()) throw error("presheaf morphism: different base categories");
  if (static_cast<int>(components_.size()) != c.object_count())
    throw error("presheaf morphism: wrong number of components");
  for (int x = 0; x < c.object_count(); ++x) {
    if (static_cast<int>(components_[x].size()) != src_->size(x))
      throw error("presheaf morphism: component arity mismatch at object " + std::to_string(x));
    for (int v : components_[x])
      if (v < 0 || v >= tgt_->size(x)) throw error("presheaf morphism: component out of range");
  }
  for (int f = 0; f < c.morphism_count(); ++f) {
    int x = c.dom(f), y = c.cod(f);
    for (int e = 0; e < src_->size(y); ++e)
      if (components_[x][src_->apply(f, e)] != tgt_->apply(f, components_[y][e]))
        throw error("presheaf morphism: naturality fails at " + c.morphism_name(f));
  }
}

Presheaf yoneda(const FinCategory* base, int x) {
  const FinCategory& c = *base;
  std::vector<std::vector<int>> homs(c.object_count());
  std::vector<int> index_of(c.morphism_count(), -1);
  std::vector<int> sizes(c.object_count());
  for (int y = 0; y < c.object_count(); ++y) {
    homs[y] = c.hom(y, x);
    sizes[y] = static_cast<int>(homs[y].size());
    for (size_t i = 0; i < homs[y].size(); ++i) index_of[homs[y][i]] = static_cast<int>(i);
  }
  std::vector<std::vector<int>> action(c.morphism_count());
  for (int f = 0; f < c.morphism_count(); ++f) {
    action[f].resize(sizes[c.cod(f)]);
    for (int i = 0; i < sizes[c.cod(f)]; ++i)
      action[f][i] = index_of[c.compose(homs[c.cod(f)][i], f)];
  }
  return Presheaf(base, std::move(sizes), std::move(action));
}

std::vector<PresheafMorphism> presheaf_morphisms(const Presheaf& f, const Presheaf& g) {
  const FinCategory& c = f.base();
  if (&c != &g.base()) throw error("presheaf_morphisms: different base categories");
  const int n = c.object_count();
  std::vector<PresheafMorphism> out;
  std::vector<std::vector<int>> comp(n);
  std::function<void(int)> rec = [&](int x) {
    if (x == n) {
      out.emplace_back(&f, &g, comp);
      return;
    }
    std::vector<int> cur(f.size(x), 0);
    if (f.size(x) == 0) {
      comp[x] = cur;
      bool ok = true;
      for (int m = 0; m < c.morphism_count() && ok; ++m) {
        int a = c.dom(m), b = c.cod(m);
        if (std::max(a, b) != x || a > x || b > x) continue;
        for (int e = 0; e < f.size(b) && ok; ++e)
          ok = comp[a][f.apply(m, e)] == g.apply(m, comp[b][e]);
      }
      if (ok) rec(x + 1);
      return;
    }
    while (true) {
      comp[x] = cur;
      bool ok = true;
      for (int m = 0; m < c.morphism_count() && ok; ++m) {
        int a = c.dom(m), b = c.cod(m);
        if (std::max(a, b) != x || a > x || b > x) continue;
        for (int e = 0; e < f.size(b) && ok; ++e)
          ok = comp[a][f.apply(m, e)] == g.apply(m, comp[b][e]);
      }
      if (ok) rec(x + 1);
      int i = f.size(x) - 1;
      while (i >= 0 && cur[i] == g.size(x) - 1) cur[i--] = 0;
      if (i < 0) break;
      ++cur[i];
    }
  };
  // Degenerate: some g-component empty while f-component isn't -> no maps.
  for (int x = 0; x < n; ++x)
    if (f.size(x) > 0 && g.size(x) == 0) return out;
  rec(0);
  return out;
}

bool is_epi(const PresheafMorphism& m) {
  const FinCategory& c = m.src().base();
  for (int x = 0; x < c.object_count(); ++x) {
    std::vector<bool> hit(m.tgt().size(x), false);
    for (int e = 0; e < m.src().size(x); ++e) hit[m.apply(x, e)] = true;
    for (bool h : hit)
      if (!h) return false;
  }
  return true;
}

bool presheaves_isomorphic(const Presheaf& f, const Presheaf& g) {
  if (f.sizes() != g.sizes()) return false;
  for (const auto& m : presheaf_morphisms(f, g)) {
    bool bij = true;
    const FinCategory& c = f.base();
    for (int x = 0; x < c.object_count() && bij; ++x) {
      std::vector<bool> hit(g.size(x), false);
      for (int e = 0; e < f.size(x); ++e) {
        if (hit[m.apply(x, e)]) bij = false;
        hit[m.apply(x, e)] = true;
      }
    }
    if (bij) return true;
  }
  return false;
}

namespace {

// Is the Yoneda transform of a in F(C) componentwise surjective?
bool yoneda_transform_epi(const Presheaf& f, int cover_obj, int a) {
  const FinCategory& c = f.base();
  for (int y = 0; y < c.object_count(); ++y) {
    std::vector<bool> hit(f.size(y), false);
    for (int g : c.hom(y, cover_obj)) hit[f.apply(g, a)] = true;
    for (bool h : hit)
      if (!h) return false;
  }
  return true;
}

// Kernel-pair presheaf of the Yoneda transform of a: pairs (u, v) of
// morphisms into cover_obj with equal action on a, as a presheaf.
Presheaf yoneda_kernel_presheaf(const Presheaf& f, int cover_obj, int a) {
  const FinCategory& c = f.base();
  std::vector<std::vector<int>> homs(c.object_count());
  std::vector<int> index_of(c.morphism_count(), -1);
  for (int y = 0; y < c.object_count(); ++y) {
    homs[y] = c.hom(y, cover_obj);
    for (size_t i = 0; i < homs[y].size(); ++i) index_of[homs[y][i]] = static_cast<int>(i);
  }
  std::vector<std::vector<std::pair<int, int>>> pairs(c.object_count());
  std::vector<std::map<std::pair<int, int>, int>> pos(c.object_count());
  std::vector<int> sizes(c.object_count());
  for (int y = 0; y < c.object_count(); ++y) {
    for (size_t i = 0; i < homs[y].size(); ++i)
      for (size_t j = 0; j < homs[y].size(); ++j)
        if (f.apply(homs[y][i], a) == f.apply(homs[y][j], a)) {
          pos[y][{static_cast<int>(i), static_cast<int>(j)}] = static_cast<int>(pairs[y].size());
          pairs[y].push_back({static_cast<int>(i), static_cast<int>(j)});
        }
    sizes[y] = static_cast<int>(pairs[y].size());
  }
  std::vector<std::vector<int>> action(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    int x = c.dom(m), y = c.cod(m);
    action[m].resize(sizes[y]);
    for (int e = 0; e < sizes[y]; ++e) {
      auto [i, j] = pairs[y][e];
      int iu = index_of[c.compose(homs[y][i], m)];
      int jv = index_of[c.compose(homs[y][j], m)];
      action[m][e] = pos[x].at({iu, jv});
    }
  }
  return Presheaf(&c, std::move(sizes), std::move(action));
}

} // namespace

bool is_supercompact(const Presheaf& f) {
  const FinCategory& c = f.base();
  for (int cover = 0; cover < c.object_count(); ++cover)
    for (int a = 0; a < f.size(cover); ++a)
      if (yoneda_transform_epi(f, cover, a)) return true;
  return false;
}

bool is_regular_object(const Presheaf& f) {
  const FinCategory& c = f.base();
  for (int cover = 0; cover < c.object_count(); ++cover)
    for (int a = 0; a < f.size(cover); ++a) {
      if (!yoneda_transform_epi(f, cover, a)) continue;
      if (is_supercompact(yoneda_kernel_presheaf(f, cover, a))) return true;
    }
  return false;
}

namespace {

// A congruence on yoneda(C): per object, a partition of hom(Y, C) closed
// under precomposition.  Stored as min-element labels.
struct Congruence {
  std::vector<std::vector<int>> label;
  bool operator<(const Congruence& o) const { return label < o.label; }
  bool operator==(const Congruence& o) const { return label == o.label; }
};

struct YonedaCtx {
  const FinCategory* c;
  int cover;
  std::vector<std::vector<int>> homs;  // per object: morphism ids into cover
  std::vector<int> index_of;           // morphism id -> index in its hom list
  std::vector<std::vector<int>> act;   // per base morphism m: index map precompose
};

YonedaCtx make_ctx(const FinCategory& c, int cover) {
  YonedaCtx ctx;
  ctx.c = &c;
  ctx.cover = cover;
  ctx.homs.resize(c.object_count());
  ctx.index_of.assign(c.morphism_count(), -1);
  for (int y = 0; y < c.object_count(); ++y) {
    ctx.homs[y] = c.hom(y, cover);
    for (size_t i = 0; i < ctx.homs[y].size(); ++i)
      ctx.index_of[ctx.homs[y][i]] = static_cast<int>(i);
  }
  ctx.act.resize(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    int y = c.cod(m);
    ctx.act[m].resize(ctx.homs[y].size());
    for (size_t i = 0; i < ctx.homs[y].size(); ++i)
      ctx.act[m][i] = ctx.index_of[c.compose(ctx.homs[y][i], m)];
  }
  return ctx;
}

Congruence closure(const YonedaCtx& ctx, Congruence start,
                   const std::vector<std::tuple<int, int, int>>& extra) {
  const FinCategory& c = *ctx.c;
  std::vector<std::vector<int>> uf = start.label; // union-find parent = label
  std::function<int(int, int)> find = [&](int y, int i) {
    while (uf[y][i] != i) i = uf[y][i] = uf[y][uf[y][i]];
    return i;
  };
  std::vector<std::tuple<int, int, int>> work = extra;
  while (!work.empty()) {
    auto [y, i, j] = work.back();
    work.pop_back();
    int ri = find(y, i), rj = find(y, j);
    if (ri == rj) continue;
    if (ri > rj) std::swap(ri, rj);
    uf[y][rj] = ri;
    // propagate along every precomposition out of y
    for (int m = 0; m < c.morphism_count(); ++m) {
      if (c.cod(m) != y) continue;
      // all pairs currently identified at y must stay identified downstream;
      // pushing just the merged pair suffices because closure is iterated.
      work.push_back({c.dom(m), ctx.act[m][rj], ctx.act[m][ri]});
    }
  }
  // One stabilization sweep: merging (i,j) at y only pushed that pair, so
  // iterate pushing all class pairs until nothing changes.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int m = 0; m < c.morphism_count(); ++m) {
      int y = c.cod(m), x = c.dom(m);
      for (size_t i = 0; i < ctx.homs[y].size(); ++i)
        for (size_t j = i + 1; j < ctx.homs[y].size(); ++j) {
          if (find(y, static_cast<int>(i)) != find(y, static_cast<int>(j))) continue;
          int a = find(x, ctx.act[m][i]), b = find(x, ctx.act[m][j]);
          if (a != b) {
            if (a > b) std::swap(a, b);
            uf[x][b] = a;
            changed = true;
          }
        }
    }
  }
  Congruence out;
  out.label.resize(uf.size());
  for (size_t y = 0; y < uf.size(); ++y) {
    out.label[y].resize(uf[y].size());
    for (size_t i = 0; i < uf[y].size(); ++i)
      out.label[y][i] = find(static_cast<int>(y), static_cast<int>(i));
  }
  // normalize labels to min element of each class (find already yields the
  // smallest root by the ri<rj merge rule)
  return out;
}

std::vector<Congruence> all_congruences(const YonedaCtx& ctx) {
  Congruence diag;
  diag.label.resize(ctx.homs.size());
  for (size_t y = 0; y < ctx.homs.size(); ++y) {
    diag.label[y].resize(ctx.homs[y].size());
    std::iota(diag.label[y].begin(), diag.label[y].end(), 0);
  }
  std::vector<Congruence> found = {diag};
  std::map<Congruence, bool> seen;
  seen[diag] = true;
  for (size_t k = 0; k < found.size(); ++k) {
    Congruence cur = found[k];
    for (size_t y = 0; y < ctx.homs.size(); ++y)
      for (size_t i = 0; i < ctx.homs[y].size(); ++i)
        for (size_t j = i + 1; j < ctx.homs[y].size(); ++j) {
          if (cur.label[y][i] == cur.label[y][j]) continue;
          Congruence next = closure(ctx, cur, {{static_cast<int>(y), static_cast<int>(i),
                                                static_cast<int>(j)}});
          if (!seen.count(next)) {
            seen[next] = true;
            found.push_back(next);
          }
        }
  }
  // Deterministic order: lexicographic on the relation bitmask (pairs related
  // earlier = smaller mask); the diagonal congruence sorts first.
  std::sort(found.begin(), found.end(), [&](const Congruence& a, const Congruence& b) {
    std::vector<bool> ma, mb;
    for (size_t y = 0; y < ctx.homs.size(); ++y)
      for (size_t i = 0; i < ctx.homs[y].size(); ++i)
        for (size_t j = i + 1; j < ctx.homs[y].size(); ++j) {
          ma.push_back(a.label[y][i] == a.label[y][j]);
          mb.push_back(b.label[y][i] == b.label[y][j]);
        }
    return ma < mb;
  });
  return found;
}

// Relation presheaf: all related ordered pairs, with componentwise action.
Presheaf relation_presheaf(const YonedaCtx& ctx, const Congruence& r) {
  const FinCategory& c = *ctx.c;
  std::vector<std::vector<std::pair<int, int>>> pairs(c.object_count());
  std::vector<std::map<std::pair<int, int>, int>> pos(c.object_count());
  std::vector<int> sizes(c.object_count());
  for (int y = 0; y < c.object_count(); ++y) {
    for (size_t i = 0; i < ctx.homs[y].size(); ++i)
      for (size_t j = 0; j < ctx.homs[y].size(); ++j)
        if (r.label[y][i] == r.label[y][j]) {
          pos[y][{static_cast<int>(i), static_cast<int>(j)}] = static_cast<int>(pairs[y].size());
          pairs[y].push_back({static_cast<int>(i), static_cast<int>(j)});
        }
    sizes[y] = static_cast<int>(pairs[y].size());
  }
  std::vector<std::vector<int>> action(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    int x = c.dom(m), y = c.cod(m);
    action[m].resize(sizes[y]);
    for (int e = 0; e < sizes[y]; ++e) {
      auto [i, j] = pairs[y][e];
      action[m][e] = pos[x].at({ctx.act[m][i], ctx.act[m][j]});
    }
  }
  return Presheaf(&c, std::move(sizes), std::move(action));
}

Presheaf quotient_presheaf(const YonedaCtx& ctx, const Congruence& r) {
  const FinCategory& c = *ctx.c;
  std::vector<std::vector<int>> classes(c.object_count()); // class idx -> label
  std::vector<std::vector<int>> class_of(c.object_count());
  std::vector<int> sizes(c.object_count());
  for (int y = 0; y < c.object_count(); ++y) {
    class_of[y].resize(ctx.homs[y].size());
    for (size_t i = 0; i < ctx.homs[y].size(); ++i) {
      int lab = r.label[y][i];
      if (lab == static_cast<int>(i)) {
        class_of[y][i] = static_cast<int>(classes[y].size());
        classes[y].push_back(lab);
      }
    }
    for (size_t i = 0; i < ctx.homs[y].size(); ++i) class_of[y][i] = class_of[y][r.label[y][i]];
    sizes[y] = static_cast<int>(classes[y].size());
  }
  std::vector<std::vector<int>> action(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    int x = c.dom(m), y = c.cod(m);
    action[m].resize(sizes[y]);
    for (int cl = 0; cl < sizes[y]; ++cl) action[m][cl] = class_of[x][ctx.act[m][classes[y][cl]]];
  }
  return Presheaf(&c, std::move(sizes), std::move(action));
}

} // namespace

Completion ex_lex_completion(const FinCategory& c) {
  if (!classify(c).is_lex) throw error("ex_lex_completion: base category is not lex");
  Completion result;
  std::vector<Presheaf>& objs = result.objects;
  // per kept object: nothing extra; per base object: (kept index, iso)
  result.unit_obj.assign(c.object_count(), -1);
  std::vector<PresheafMorphism> unit_iso; // sigma_X: quotient-by-diagonal -> representative
  std::vector<int> diag_index(c.object_count(), -1);

  for (int cover = 0; cover < c.object_count(); ++cover) {
    YonedaCtx ctx = make_ctx(c, cover);
    for (const Congruence& r : all_congruences(ctx)) {
      if (!is_supercompact(relation_presheaf(ctx, r))) continue;
      Presheaf q = quotient_presheaf(ctx, r);
      int found = -1;
      for (size_t i = 0; i < objs.size() && found < 0; ++i)
        if (presheaves_isomorphic(objs[i], q)) found = static_cast<int>(i);
      if (found < 0) {
        found = static_cast<int>(objs.size());
        objs.push_back(q);
      }
      bool is_diag = true;
      for (const auto& l : r.label)
        for (size_t i = 0; i < l.size(); ++i)
          if (l[i] != static_cast<int>(i)) is_diag = false;
      if (is_diag) diag_index[cover] = found;
    }
  }

  // sigma_X: the first iso from y(X) (= its diagonal quotient) to the kept
  // representative, in enumeration order.
  std::vector<Presheaf> yon;
  for (int x = 0; x < c.object_count(); ++x) yon.push_back(yoneda(&c, x));
  std::vector<std::vector<std::vector<int>>> sigma(c.object_count());
  for (int x = 0; x < c.object_count(); ++x) {
    const Presheaf& rep = objs[diag_index[x]];
    bool got = false;
    for (const auto& m : presheaf_morphisms(yon[x], rep)) {
      bool bij = true;
      for (int y = 0; y < c.object_count() && bij; ++y) {
        std::vector<bool> hit(rep.size(y), false);
        for (int e = 0; e < yon[x].size(y); ++e) {
          if (hit[m.apply(y, e)]) bij = false;
          hit[m.apply(y, e)] = true;
        }
        for (bool h : hit)
          if (!h) bij = false;
      }
      if (bij) {
        sigma[x] = m.components();
        got = true;
        break;
      }
    }
    if (!got) throw error("ex_lex_completion: internal: representative lost its iso");
    result.unit_obj[x] = diag_index[x];
  }

  // Morphisms of the completion: all natural transformations between kept
  // objects, ordered by (source, target, enumeration position).
  CategoryData cd;
  cd.num_objects = static_cast<int>(objs.size());
  std::map<std::pair<int, int>, std::map<std::vector<std::vector<int>>, int>> ids;
  std::vector<std::vector<std::vector<int>>> mor_comps;
  std::vector<std::pair<int, int>> mor_ends;
  for (int i = 0; i < cd.num_objects; ++i)
    for (int j = 0; j < cd.num_objects; ++j)
      for (const auto& m : presheaf_morphisms(objs[i], objs[j])) {
        int id = static_cast<int>(mor_comps.size());
        ids[{i, j}][m.components()] = id;
        mor_comps.push_back(m.components());
        mor_ends.push_back({i, j});
        cd.morphisms.push_back({i, j});
      }
  cd.identity.assign(cd.num_objects, -1);
  for (int i = 0; i < cd.num_objects; ++i) {
    std::vector<std::vector<int>> idc(c.object_count());
    for (int y = 0; y < c.object_count(); ++y) {
      idc[y].resize(objs[i].size(y));
      std::iota(idc[y].begin(), idc[y].end(), 0);
    }
    cd.identity[i] = ids.at({i, i}).at(idc);
  }
  for (size_t g = 0; g < mor_comps.size(); ++g)
    for (size_t f = 0; f < mor_comps.size(); ++f) {
      if (mor_ends[f].second != mor_ends[g].first) continue;
      std::vector<std::vector<int>> comp(c.object_count());
      for (int y = 0; y < c.object_count(); ++y) {
        comp[y].resize(objs[mor_ends[f].first].size(y));
        for (int e = 0; e < objs[mor_ends[f].first].size(y); ++e)
          comp[y][e] = mor_comps[g][y][mor_comps[f][y][e]];
      }
      cd.comp.push_back({static_cast<int>(g), static_cast<int>(f),
                         ids.at({mor_ends[f].first, mor_ends[g].second}).at(comp)});
    }
  result.category = FinCategory::from_data(cd);

  // Unit on morphisms: sigma_Y o y(f) o sigma_X^{-1}.
  result.unit_mor.assign(c.morphism_count(), -1);
  for (int f = 0; f < c.morphism_count(); ++f) {
    int x = c.dom(f), yv = c.cod(f);
    // y(f): component at Z sends u: Z -> X to f o u.
    std::vector<std::vector<int>> comps(c.object_count());
    // invert sigma_X
    std::vector<std::vector<int>> inv(c.object_count());
    for (int z = 0; z < c.object_count(); ++z) {
      inv[z].assign(objs[diag_index[x]].size(z), -1);
      for (int e = 0; e < yon[x].size(z); ++e) inv[z][sigma[x][z][e]] = e;
    }
    for (int z = 0; z < c.object_count(); ++z) {
      auto homs_zx = c.hom(z, x);
      auto homs_zy = c.hom(z, yv);
      comps[z].resize(objs[diag_index[x]].size(z));
      for (int e = 0; e < static_cast<int>(comps[z].size()); ++e) {
        int u = homs_zx[inv[z][e]];
        int fu = c.compose(f, u);
        int idx = -1;
        for (size_t k = 0; k < homs_zy.size(); ++k)
          if (homs_zy[k] == fu) idx = static_cast<int>(k);
        comps[z][e] = sigma[yv][z][idx];
      }
    }
    result.unit_mor[f] = ids.at({diag_index[x], diag_index[yv]}).at(comps);
  }
  return result;
}

LexPoints lex_points(const FinCategory& c) {
  if (!classify(c).is_lex) throw error("lex_points: category is not lex");
  const int n = c.object_count();
  if (n > 31) throw error("lex_points: too many objects");
  int term = *terminal_object(c);
  std::vector<std::vector<int>> papex(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) papex[x][y] = product(c, x, y)->apex;
  std::vector<std::pair<int, int>> eqs; // (dom of pair, equalizer apex)
  for (int u = 0; u < c.morphism_count(); ++u)
    for (int v = 0; v < c.morphism_count(); ++v) {
      if (c.dom(v) != c.dom(u) || c.cod(v) != c.cod(u)) continue;
      eqs.push_back({c.dom(u), equalizer(c, u, v)->apex});
    }

  LexPoints out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = (mask >> term) & 1;
    for (int f = 0; f < c.morphism_count() && ok; ++f)
      if (((mask >> c.dom(f)) & 1) && !((mask >> c.cod(f)) & 1)) ok = false;
    for (int x = 0; x < n && ok; ++x)
      for (int y = 0; y < n && ok; ++y)
        if (((mask >> x) & 1) && ((mask >> y) & 1) && !((mask >> papex[x][y]) & 1)) ok = false;
    for (const auto& [dm, e] : eqs)
      if (ok && ((mask >> dm) & 1) && !((mask >> e) & 1)) ok = false;
    if (ok) out.masks.push_back(mask);
  }
  const int k = static_cast<int>(out.masks.size());
  std::vector<std::vector<bool>> leq(k, std::vector<bool>(k, false));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      leq[i][j] = (out.masks[i] & out.masks[j]) == out.masks[i];
  out.poset = make_preorder_category(leq);
  return out;
}

SubterminalReport check_subterminal_lemma(const FinCategory& c, int max_value) {
  SubterminalReport rep;
  if (!classify(c).is_lex) throw error("check_subterminal_lemma: category is not lex");
  const int n = c.object_count();
  int term = *terminal_object(c);
  std::vector<std::vector<int>> papex(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) papex[x][y] = product(c, x, y)->apex;
  // iso classes of objects
  std::vector<int> iso_rep(n);
  std::iota(iso_rep.begin(), iso_rep.end(), 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < x; ++y)
      for (int f : c.hom(x, y))
        if (classify_morphism(c, f).iso && iso_rep[x] == x) iso_rep[x] = iso_rep[y];

  std::vector<int> sizes(n, 0);
  long long nodes = 0;
  std::function<bool(int)> assign = [&](int x) -> bool {
    if (++nodes > 2000000) throw error("check_subterminal_lemma: budget exceeded");
    if (x == n) {
      bool big = false;
      for (int s : sizes)
        if (s >= 2) big = true;
      if (!big) return true; // subterminal assignment, consistent with the lemma
      // Survivor with a large value: refute by exhaustive functor search.
      // (Unreachable for genuinely lex categories; guarded for honesty.)
      std::vector<std::vector<int>> act(c.morphism_count());
      std::function<bool(int)> pick = [&](int m) -> bool {
        if (++nodes > 2000000) throw error("check_subterminal_lemma: budget exceeded");
        if (m == c.morphism_count()) {
          // lex test on the complete covariant functor
          for (int u = 0; u < c.morphism_count(); ++u)
            for (int v = 0; v < c.morphism_count(); ++v) {
              if (c.dom(v) != c.dom(u) || c.cod(v) != c.cod(u)) continue;
              auto eq = equalizer(c, u, v);
              std::vector<int> sub;
              for (int e = 0; e < sizes[c.dom(u)]; ++e)
                if (act[u][e] == act[v][e]) sub.push_back(e);
              if (static_cast<int>(sub.size()) != sizes[eq->apex]) return false;
              std::vector<bool> hit(sub.size(), false);
              for (int e = 0; e < sizes[eq->apex]; ++e) {
                int img = act[eq->legs[0]][e];
                auto it = std::find(sub.begin(), sub.end(), img);
                if (it == sub.end()) return false;
                size_t k = static_cast<size_t>(it - sub.begin());
                if (hit[k]) return false;
                hit[k] = true;
              }
            }
          for (int x2 = 0; x2 < n; ++x2)
            for (int y2 = 0; y2 < n; ++y2) {
              auto pr = product(c, x2, y2);
              std::vector<bool> hit(static_cast<size_t>(sizes[x2]) * sizes[y2], false);
              for (int e = 0; e < sizes[pr->apex]; ++e) {
                size_t k = static_cast<size_t>(act[pr->legs[0]][e]) * sizes[y2] +
                           act[pr->legs[1]][e];
                if (hit[k]) return false;
                hit[k] = true;
              }
              for (bool h : hit)
                if (!h) return false;
            }
          return true; // found an actual large-valued lex functor
        }
        if (c.is_identity(m)) {
          act[m].resize(sizes[c.dom(m)]);
          std::iota(act[m].begin(), act[m].end(), 0);
          return pick(m + 1);
        }
        int dm = sizes[c.dom(m)], cm = sizes[c.cod(m)];
        if (dm > 0 && cm == 0) return false;
        std::vector<int> t(dm, 0);
        while (true) {
          act[m] = t;
          bool ok = true;
          for (int g = 0; g < c.morphism_count() && ok; ++g)
            for (int f = 0; f < c.morphism_count() && ok; ++f) {
              if (!c.composable(g, f)) continue;
              int gf = c.compose(g, f);
              if (f > m || g > m || gf > m) continue;
              for (int e = 0; e < sizes[c.dom(f)] && ok; ++e)
                ok = act[gf][e] == act[g][act[f][e]];
            }
          if (ok && pick(m + 1)) return true;
          if (dm == 0) break;
          int i = dm - 1;
          while (i >= 0 && t[i] == cm - 1) t[i--] = 0;
          if (i < 0) break;
          ++t[i];
        }
        return false;
      };
      if (pick(0)) {
        rep.ok = false;
        rep.detail = "lex functor with a value of size >= 2 exists";
        return true; // stop search
      }
      return true;
    }
    for (int s = 0; s <= max_value; ++s) {
      sizes[x] = s;
      bool ok = true;
      if (x == term && s != 1) ok = false;
      if (ok && iso_rep[x] != x && sizes[iso_rep[x]] != s) ok = false;
      if (ok) {
        for (int a = 0; a <= x && ok; ++a)
          for (int b = 0; b <= x && ok; ++b) {
            int p = papex[a][b];
            if (p > x) continue;
            long long want = static_cast<long long>(sizes[a]) * sizes[b];
            if (sizes[p] != want) ok = false;
          }
      }
      if (ok && !assign(x + 1)) return false;
      if (!rep.ok) return false;
    }
    sizes[x] = 0;
    return true;
  };
  assign(0);
  return rep;
}

} // namespace catlogic
