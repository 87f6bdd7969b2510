#include "catlogic/sites.hpp"

#include <algorithm>

namespace catlogic {

CovFunctor::CovFunctor(const FinCategory* base, std::vector<int> sizes,
                       std::vector<std::vector<int>> action)
    : base_(base), sizes_(std::move(sizes)), action_(std::move(action)) {
  const FinCategory& c = *base_;
  if (static_cast<int>(sizes_.size()) != c.object_count() ||
      static_cast<int>(action_.size()) != c.morphism_count())
    throw error("functor: table sizes do not match the base category");
  for (int f = 0; f < c.morphism_count(); ++f) {
    if (static_cast<int>(action_[f].size()) != sizes_[c.dom(f)])
      throw error("functor: action of " + c.morphism_name(f) + " has wrong arity");
    for (int v : action_[f])
      if (v < 0 || v >= sizes_[c.cod(f)])
        throw error("functor: action of " + c.morphism_name(f) + " maps out of range");
  }
  for (int x = 0; x < c.object_count(); ++x)
    for (int e = 0; e < sizes_[x]; ++e)
      if (action_[c.identity(x)][e] != e)
        throw error("functor: identity action at object " + std::to_string(x) + " is not id");
  for (int g = 0; g < c.morphism_count(); ++g)
    for (int f = 0; f < c.morphism_count(); ++f) {
      if (!c.composable(g, f)) continue;
      int gf = c.compose(g, f);
      for (int e = 0; e < sizes_[c.dom(f)]; ++e)
        if (action_[gf][e] != action_[g][action_[f][e]])
          throw error("functor: action not functorial at (" + c.morphism_name(g) + ", " +
                      c.morphism_name(f) + ")");
    }
}

CovFunctor corepresentable(const FinCategory* base, int x) {
  const FinCategory& c = *base;
  std::vector<std::vector<int>> homs(c.object_count());
  std::vector<int> index_of(c.morphism_count(), -1);
  std::vector<int> sizes(c.object_count());
  for (int y = 0; y < c.object_count(); ++y) {
    homs[y] = c.hom(x, y);
    sizes[y] = static_cast<int>(homs[y].size());
    for (size_t i = 0; i < homs[y].size(); ++i) index_of[homs[y][i]] = static_cast<int>(i);
  }
  std::vector<std::vector<int>> action(c.morphism_count());
  for (int f = 0; f < c.morphism_count(); ++f) {
    action[f].resize(sizes[c.dom(f)]);
    for (int i = 0; i < sizes[c.dom(f)]; ++i)
      action[f][i] = index_of[c.compose(f, homs[c.dom(f)][i])];
  }
  return CovFunctor(base, std::move(sizes), std::move(action));
}

std::vector<int> saturate(const FinCategory& c, std::vector<int> m) {
  std::vector<bool> in(c.morphism_count(), false);
  for (int f : m) {
    if (f < 0 || f >= c.morphism_count()) throw error("saturate: morphism id out of range");
    in[f] = true;
  }
  for (int x = 0; x < c.object_count(); ++x) in[c.identity(x)] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int g = 0; g < c.morphism_count(); ++g)
      for (int f = 0; f < c.morphism_count(); ++f) {
        if (!c.composable(g, f)) continue;
        int gf = c.compose(g, f);
        if (in[g] && in[f] && !in[gf]) {
          in[gf] = true;
          changed = true;
        }
        // left cancellation: g o f and f force g
        if (in[gf] && in[f] && !in[g]) {
          in[g] = true;
          changed = true;
        }
      }
    for (int h = 0; h < c.morphism_count(); ++h) {
      if (!in[h]) continue;
      for (int f = 0; f < c.morphism_count(); ++f) {
        if (c.dom(f) != c.dom(h)) continue;
        auto po = pushout(c, h, f);
        if (po && !in[po->legs[1]]) {
          in[po->legs[1]] = true; // the pushout of h along f
          changed = true;
        }
      }
    }
  }
  std::vector<int> out;
  for (int f = 0; f < c.morphism_count(); ++f)
    if (in[f]) out.push_back(f);
  return out;
}

Site coverage_from_injectives(const FinCategory& c, const std::vector<int>& m) {
  std::vector<int> sorted = m;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (saturate(c, sorted) != sorted)
    throw error("coverage_from_injectives: generating class is not saturated");
  Site s;
  s.base = c;
  s.covers.assign(c.object_count(), {});
  for (int h : sorted) s.covers[c.dom(h)].push_back(h);
  return s;
}

Site canonical_regular_coverage(const FinCategory& b) {
  if (!classify(b).is_regular) throw error("canonical_regular_coverage: category is not regular");
  Site s;
  s.base = b.opposite(); // morphism ids are shared with b
  s.covers.assign(b.object_count(), {});
  for (int e = 0; e < b.morphism_count(); ++e)
    if (is_regular_epi(b, e)) s.covers[b.cod(e)].push_back(e);
  return s;
}

bool is_sheaf(const Site& s, const CovFunctor& f) {
  for (const auto& cov : s.covers)
    for (int h : cov) {
      if (f.size(s.base.dom(h)) != f.size(s.base.cod(h))) return false;
      std::vector<bool> hit(f.size(s.base.cod(h)), false);
      for (int e = 0; e < f.size(s.base.dom(h)); ++e) {
        int v = f.apply(h, e);
        if (hit[v]) return false;
        hit[v] = true;
      }
    }
  return true;
}

bool check_subcanonical(const Site& s) {
  for (int x = 0; x < s.base.object_count(); ++x)
    if (!is_sheaf(s, corepresentable(&s.base, x))) return false;
  return true;
}

SitePoints enumerate_points(const Site& s) {
  SitePoints out;
  if (s.base.object_count() == 0) {
    out.category = FinCategory::from_data(CategoryData{});
    return out;
  }
  LexPoints all = lex_points(s.base);
  std::vector<int> keep;
  for (size_t i = 0; i < all.masks.size(); ++i) {
    bool ok = true;
    for (const auto& cov : s.covers)
      for (int h : cov)
        if (((all.masks[i] >> s.base.cod(h)) & 1) && !((all.masks[i] >> s.base.dom(h)) & 1))
          ok = false;
    if (ok) keep.push_back(static_cast<int>(i));
  }
  const int k = static_cast<int>(keep.size());
  std::vector<std::vector<bool>> leq(k, std::vector<bool>(k, false));
  for (int i = 0; i < k; ++i) {
    out.masks.push_back(all.masks[keep[i]]);
    for (int j = 0; j < k; ++j)
      leq[i][j] = (all.masks[keep[i]] & all.masks[keep[j]]) == all.masks[keep[i]];
  }
  out.category = make_preorder_category(leq);
  return out;
}

} // namespace catlogic
