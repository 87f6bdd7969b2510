#include "catlogic/corpus.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace catlogic {

std::vector<FunctorTables> all_cov_functor_tables(const FinCategory& c, int max_size) {
  std::vector<FunctorTables> out;
  const int n = c.object_count();
  std::vector<int> sizes(n, 0);
  std::vector<std::vector<int>> act(c.morphism_count());

  // Composition laws whose three morphism ids are all <= m; identities need
  // the same check (an identity can be a composite of non-identities when
  // the category has isomorphisms).
  auto laws_hold = [&](int m) {
    for (int g = 0; g < c.morphism_count(); ++g)
      for (int f = 0; f < c.morphism_count(); ++f) {
        if (!c.composable(g, f)) continue;
        int gf = c.compose(g, f);
        if (f > m || g > m || gf > m) continue;
        for (int e = 0; e < sizes[c.dom(f)]; ++e)
          if (act[gf][e] != act[g][act[f][e]]) return false;
      }
    return true;
  };

  std::function<void(int)> pick_action = [&](int m) {
    if (m == c.morphism_count()) {
      out.push_back({sizes, act});
      return;
    }
    if (c.is_identity(m)) {
      act[m].resize(sizes[c.dom(m)]);
      std::iota(act[m].begin(), act[m].end(), 0);
      if (laws_hold(m)) pick_action(m + 1);
      return;
    }
    int dm = sizes[c.dom(m)], cm = sizes[c.cod(m)];
    if (dm > 0 && cm == 0) return;
    std::vector<int> t(dm, 0);
    while (true) {
      act[m] = t;
      if (laws_hold(m)) pick_action(m + 1);
      if (dm == 0) break;
      int i = dm - 1;
      while (i >= 0 && t[i] == cm - 1) t[i--] = 0;
      if (i < 0) break;
      ++t[i];
    }
  };

  std::function<void(int)> pick_size = [&](int x) {
    if (x == n) {
      pick_action(0);
      return;
    }
    for (int s = 0; s <= max_size; ++s) {
      sizes[x] = s;
      pick_size(x + 1);
    }
  };
  pick_size(0);
  return out;
}

namespace {

// Lattice orders on {0..n-1} with labels extending the order; encoded by the
// strict pairs (i, j), i < j.
std::vector<std::vector<std::vector<bool>>> lattice_orders_of_size(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  std::vector<std::vector<std::vector<bool>>> found;
  std::set<std::vector<bool>> seen; // canonical full-matrix keys
  for (std::uint32_t bits = 0; bits < (1u << pairs.size()); ++bits) {
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) leq[i][i] = true;
    for (size_t p = 0; p < pairs.size(); ++p)
      if ((bits >> p) & 1) leq[pairs[p].first][pairs[p].second] = true;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j)
        for (int k = 0; k < n && ok; ++k)
          if (leq[i][j] && leq[j][k] && !leq[i][k]) ok = false;
    if (!ok) continue;
    // every pair needs a meet and a join
    auto bound_ok = [&](bool lower) {
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          int best = -1;
          for (int z = 0; z < n; ++z) {
            bool below = lower ? (leq[z][x] && leq[z][y]) : (leq[x][z] && leq[y][z]);
            if (!below) continue;
            if (best == -1)
              best = z;
            else if (lower ? leq[best][z] : leq[z][best])
              best = z;
          }
          if (best == -1) return false;
          for (int z = 0; z < n; ++z) {
            bool below = lower ? (leq[z][x] && leq[z][y]) : (leq[x][z] && leq[y][z]);
            if (below && !(lower ? leq[z][best] : leq[best][z])) return false;
          }
        }
      return true;
    };
    if (!bound_ok(true) || !bound_ok(false)) continue;
    // canonical key: minimum flattened matrix over all relabelings
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<bool> best;
    do {
      std::vector<bool> key;
      key.reserve(static_cast<size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) key.push_back(leq[perm[i]][perm[j]]);
      if (best.empty() || key < best) best = key;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (seen.insert(best).second) found.push_back(leq);
  }
  return found;
}

} // namespace

std::vector<std::vector<std::vector<bool>>> all_lattice_orders(int max_n) {
  std::vector<std::vector<std::vector<bool>>> out;
  for (int n = 1; n <= max_n; ++n)
    for (auto& leq : lattice_orders_of_size(n)) out.push_back(std::move(leq));
  return out;
}

std::vector<FinCategory> all_lattices(int max_n) {
  std::vector<FinCategory> out;
  for (const auto& leq : all_lattice_orders(max_n)) out.push_back(make_preorder_category(leq));
  return out;
}

namespace {

using Fingerprint = std::vector<int>;

Fingerprint fingerprint(const FinCategory& c) {
  Fingerprint fp = {c.object_count(), c.morphism_count()};
  std::vector<int> homsizes;
  for (int x = 0; x < c.object_count(); ++x)
    for (int y = 0; y < c.object_count(); ++y)
      homsizes.push_back(static_cast<int>(c.hom(x, y).size()));
  std::sort(homsizes.begin(), homsizes.end());
  fp.insert(fp.end(), homsizes.begin(), homsizes.end());
  std::vector<int> endo;
  for (int x = 0; x < c.object_count(); ++x)
    endo.push_back(static_cast<int>(c.hom(x, x).size()));
  std::sort(endo.begin(), endo.end());
  fp.insert(fp.end(), endo.begin(), endo.end());
  return fp;
}

struct Dedup {
  std::map<Fingerprint, std::vector<int>> buckets;
  std::vector<FinCategory> kept;
  bool add(FinCategory c) {
    Fingerprint fp = fingerprint(c);
    for (int idx : buckets[fp])
      if (are_isomorphic(kept[idx], c)) return false;
    buckets[fp].push_back(static_cast<int>(kept.size()));
    kept.push_back(std::move(c));
    return true;
  }
};

// All monoid tables of order k with unit 0, deduped up to monoid isomorphism.
std::vector<std::vector<std::vector<int>>> monoids_of_order(int k) {
  std::vector<std::vector<std::vector<int>>> out;
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> t(k, std::vector<int>(k));
  for (int i = 0; i < k; ++i) {
    t[0][i] = i;
    t[i][0] = i;
  }
  const int cells = (k - 1) * (k - 1);
  std::vector<int> v(cells, 0);
  while (true) {
    for (int a = 1; a < k; ++a)
      for (int b = 1; b < k; ++b) t[a][b] = v[(a - 1) * (k - 1) + (b - 1)];
    bool ok = true;
    for (int a = 0; a < k && ok; ++a)
      for (int b = 0; b < k && ok; ++b)
        for (int cc = 0; cc < k && ok; ++cc)
          ok = t[t[a][b]][cc] == t[a][t[b][cc]];
    if (ok) {
      // canonical form over permutations fixing the unit
      std::vector<int> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<int> best;
      do {
        std::vector<int> inv(k);
        for (int i = 0; i < k; ++i) inv[perm[i]] = i;
        std::vector<int> key;
        key.reserve(static_cast<size_t>(k) * k);
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) key.push_back(inv[t[perm[a]][perm[b]]]);
        if (best.empty() || key < best) best = key;
      } while (std::next_permutation(perm.begin() + 1, perm.end()));
      if (seen.insert(best).second) out.push_back(t);
    }
    if (cells == 0) break;
    int i = cells - 1;
    while (i >= 0 && v[i] == k - 1) v[i--] = 0;
    if (i < 0) break;
    ++v[i];
  }
  return out;
}

// Free category on a DAG over `verts` vertices with the given directed edge
// multiset (edges only go up, so paths are finite).
FinCategory free_category(int verts, const std::vector<std::pair<int, int>>& edges) {
  // paths = sequences of edge indices; enumerate by BFS on length
  std::vector<std::vector<int>> paths; // sequences
  std::vector<std::pair<int, int>> ends;
  for (size_t e = 0; e < edges.size(); ++e) {
    paths.push_back({static_cast<int>(e)});
    ends.push_back(edges[e]);
  }
  for (size_t i = 0; i < paths.size(); ++i)
    for (size_t e = 0; e < edges.size(); ++e)
      if (edges[e].first == ends[i].second) {
        auto p = paths[i];
        p.push_back(static_cast<int>(e));
        paths.push_back(p);
        ends.push_back({ends[i].first, edges[e].second});
      }
  CategoryData d;
  d.num_objects = verts;
  d.identity.resize(verts);
  std::map<std::vector<int>, int> id_of;
  for (int x = 0; x < verts; ++x) {
    d.identity[x] = static_cast<int>(d.morphisms.size());
    d.morphisms.push_back({x, x});
  }
  for (size_t i = 0; i < paths.size(); ++i) {
    id_of[paths[i]] = static_cast<int>(d.morphisms.size());
    d.morphisms.push_back({ends[i].first, ends[i].second});
  }
  auto mor_id = [&](const std::vector<int>& p, int at) {
    return p.empty() ? d.identity[at] : id_of.at(p);
  };
  // composition: concatenate sequences (identity = empty)
  std::vector<std::vector<int>> seq_of(d.morphisms.size());
  for (size_t i = 0; i < paths.size(); ++i) seq_of[verts + i] = paths[i];
  for (int g = 0; g < static_cast<int>(d.morphisms.size()); ++g)
    for (int f = 0; f < static_cast<int>(d.morphisms.size()); ++f) {
      if (d.morphisms[f].cod != d.morphisms[g].dom) continue;
      std::vector<int> cat = seq_of[f];
      cat.insert(cat.end(), seq_of[g].begin(), seq_of[g].end());
      d.comp.push_back({g, f, mor_id(cat, d.morphisms[f].dom)});
    }
  return FinCategory::from_data(d);
}

// Category of chosen finite sets and a composition-closed set of functions.
// Returns nothing if closure exceeds the morphism budget.
std::optional<FinCategory> function_closure(const std::vector<int>& sizes,
                                            std::vector<std::tuple<int, int, std::vector<int>>> gens,
                                            int max_morphisms) {
  const int n = static_cast<int>(sizes.size());
  std::vector<std::tuple<int, int, std::vector<int>>> mor;
  std::map<std::tuple<int, int, std::vector<int>>, int> idx;
  auto add = [&](std::tuple<int, int, std::vector<int>> m) {
    if (idx.count(m)) return;
    idx[m] = static_cast<int>(mor.size());
    mor.push_back(std::move(m));
  };
  for (int x = 0; x < n; ++x) {
    std::vector<int> ident(sizes[x]);
    std::iota(ident.begin(), ident.end(), 0);
    add({x, x, ident});
  }
  for (auto& g : gens) add(std::move(g));
  for (size_t i = 0; i < mor.size(); ++i) {
    if (static_cast<int>(mor.size()) > max_morphisms) return std::nullopt;
    for (size_t j = 0; j < mor.size(); ++j) {
      auto [fd, fc, ft] = mor[j]; // copies: add() below may reallocate mor
      auto [gd, gc, gt] = mor[i];
      if (fc != gd) continue;
      std::vector<int> comp(ft.size());
      for (size_t e = 0; e < ft.size(); ++e) comp[e] = gt[ft[e]];
      add({fd, gc, comp});
      if (static_cast<int>(mor.size()) > max_morphisms) return std::nullopt;
    }
  }
  CategoryData d;
  d.num_objects = n;
  d.identity.assign(n, -1);
  for (size_t i = 0; i < mor.size(); ++i) {
    auto& [dm, cm, tab] = mor[i];
    d.morphisms.push_back({dm, cm});
    bool ident = dm == cm;
    if (ident)
      for (size_t e = 0; e < tab.size(); ++e)
        if (tab[e] != static_cast<int>(e)) ident = false;
    if (ident) d.identity[dm] = static_cast<int>(i);
  }
  for (size_t i = 0; i < mor.size(); ++i)
    for (size_t j = 0; j < mor.size(); ++j) {
      auto& [fd, fc, ft] = mor[j];
      auto& [gd, gc, gt] = mor[i];
      if (fc != gd) continue;
      std::vector<int> comp(ft.size());
      for (size_t e = 0; e < ft.size(); ++e) comp[e] = gt[ft[e]];
      d.comp.push_back({static_cast<int>(i), static_cast<int>(j),
                        idx.at({fd, gc, comp})});
    }
  return FinCategory::from_data(d);
}

} // namespace

std::vector<FinCategory> classifier_corpus(int max_objects, int max_morphisms,
                                           std::uint64_t seed, int want) {
  Dedup dedup;
  auto admit = [&](const FinCategory& c) {
    if (c.object_count() > max_objects || c.morphism_count() > max_morphisms) return;
    dedup.add(c);
  };

  // 1. preorders on <= 3 points (reflexive transitive relations)
  for (int n = 1; n <= std::min(3, max_objects); ++n) {
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) cells.push_back({i, j});
    for (std::uint32_t bits = 0; bits < (1u << cells.size()); ++bits) {
      std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
      for (int i = 0; i < n; ++i) leq[i][i] = true;
      for (size_t p = 0; p < cells.size(); ++p)
        if ((bits >> p) & 1) leq[cells[p].first][cells[p].second] = true;
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        for (int j = 0; j < n && ok; ++j)
          for (int k = 0; k < n && ok; ++k)
            if (leq[i][j] && leq[j][k] && !leq[i][k]) ok = false;
      if (ok) admit(make_preorder_category(leq));
    }
  }

  // 2. all monoids of order <= 4 as one-object categories
  for (int k = 1; k <= 4; ++k)
    for (const auto& t : monoids_of_order(k)) admit(make_monoid_category(t, 0));

  // 3. free categories on small acyclic multigraphs
  for (int e01 = 0; e01 <= 3; ++e01)
    for (int e02 = 0; e02 <= 2; ++e02)
      for (int e12 = 0; e12 <= 2; ++e12) {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < e01; ++i) edges.push_back({0, 1});
        for (int i = 0; i < e02; ++i) edges.push_back({0, 2});
        for (int i = 0; i < e12; ++i) edges.push_back({1, 2});
        int verts = edges.empty() ? 1 : 3;
        admit(free_category(verts, edges));
        if (e02 == 0 && e12 == 0 && e01 > 0) admit(free_category(2, edges));
      }

  // 4. seeded random families until the target is met
  std::mt19937_64 rng(seed);
  auto rnd = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  int attempts = 0;
  while (static_cast<int>(dedup.kept.size()) < want && attempts < 20000) {
    ++attempts;
    if (attempts % 2 == 0) {
      // submonoid closure inside T_3 (all self-maps of a 3-element set)
      std::vector<std::vector<int>> maps;
      int count = rnd(1, 3);
      for (int i = 0; i < count; ++i) maps.push_back({rnd(0, 2), rnd(0, 2), rnd(0, 2)});
      std::vector<std::tuple<int, int, std::vector<int>>> gens;
      for (auto& m : maps) gens.push_back({0, 0, m});
      auto c = function_closure({3}, gens, max_morphisms);
      if (c) admit(*c);
    } else {
      // function-closure category on 2-3 small sets
      int n = rnd(2, std::min(3, max_objects));
      std::vector<int> sizes(n);
      for (int& s : sizes) s = rnd(1, 3);
      std::vector<std::tuple<int, int, std::vector<int>>> gens;
      int count = rnd(1, 3);
      for (int i = 0; i < count; ++i) {
        int a = rnd(0, n - 1), b = rnd(0, n - 1);
        std::vector<int> tab(sizes[a]);
        for (int& v : tab) v = rnd(0, sizes[b] - 1);
        gens.push_back({a, b, tab});
      }
      auto c = function_closure(sizes, gens, max_morphisms);
      if (c) admit(*c);
    }
  }
  return dedup.kept;
}

// ---- logic corpus ---------------------------------------------------------

Signature digraph_signature() {
  Signature sig;
  sig.sorts = {"v"};
  sig.rels.push_back({"E", {0, 0}});
  return sig;
}

std::vector<FinStructure> all_structures(const Signature& sig, int max_per_sort,
                                         long long budget) {
  std::vector<FinStructure> out;
  std::vector<int> sizes(sig.sorts.size(), 0);
  for (;;) {
    // All relation tables for these carrier sizes.
    std::vector<std::vector<std::vector<int>>> tuples(sig.rels.size());
    long long combos = 1;
    for (size_t r = 0; r < sig.rels.size(); ++r) {
      std::vector<int> tup(sig.rels[r].arg_sorts.size(), 0);
      long long count = 1;
      for (int s : sig.rels[r].arg_sorts) count *= sizes[s];
      for (long long k = 0; k < count; ++k) {
        tuples[r].push_back(tup);
        int i = (int)tup.size() - 1;
        while (i >= 0 && ++tup[i] == sizes[sig.rels[r].arg_sorts[i]]) tup[i--] = 0;
      }
      if (count > 20 || (combos <<= count) > budget)
        throw error("all_structures: budget exceeded");
    }
    std::vector<std::uint64_t> mask(sig.rels.size(), 0);
    for (;;) {
      FinStructure m;
      m.sort_sizes = sizes;
      m.rels.resize(sig.rels.size());
      for (size_t r = 0; r < sig.rels.size(); ++r)
        for (size_t k = 0; k < tuples[r].size(); ++k)
          if (mask[r] >> k & 1) m.rels[r].push_back(tuples[r][k]);
      out.push_back(std::move(m));
      if ((long long)out.size() > budget) throw error("all_structures: budget exceeded");
      int r = (int)sig.rels.size() - 1;
      while (r >= 0 && ++mask[r] == std::uint64_t{1} << tuples[r].size()) mask[r--] = 0;
      if (r < 0) break;
    }
    int s = (int)sizes.size() - 1;
    while (s >= 0 && ++sizes[s] > max_per_sort) sizes[s--] = 0;
    if (s < 0) break;
  }
  return out;
}

std::vector<FinStructure> all_digraphs(int max_n) {
  return all_structures(digraph_signature(), max_n);
}

namespace {

struct FormulaGen {
  const Signature& sig;
  std::mt19937_64& rng;
  std::vector<std::pair<std::string, int>> pool; // visible variables
  std::map<std::string, int> sorts;
  int free_counter = 0, bound_counter = 0;

  int rnd(int lo, int hi) { return (int)(rng() % (std::uint64_t)(hi - lo + 1)) + lo; }

  std::string var_of_sort(int s) {
    std::vector<const std::string*> avail;
    for (const auto& [name, vs] : pool)
      if (vs == s) avail.push_back(&name);
    if (!avail.empty() && rnd(0, 2) > 0) return *avail[rnd(0, (int)avail.size() - 1)];
    std::string v = "x" + std::to_string(free_counter++);
    pool.emplace_back(v, s);
    sorts[v] = s;
    return v;
  }

  RegularFormula gen(int depth) {
    int roll = depth > 0 ? rnd(0, 14) : rnd(0, 7);
    if (roll == 0) return RegularFormula::truth();
    if (roll <= 5) { // atom
      if (sig.rels.empty()) return RegularFormula::truth();
      int r = rnd(0, (int)sig.rels.size() - 1);
      std::vector<std::string> args;
      for (int s : sig.rels[r].arg_sorts) args.push_back(var_of_sort(s));
      return RegularFormula::atom(r, std::move(args));
    }
    if (roll <= 7) { // equality
      int s = rnd(0, (int)sig.sorts.size() - 1);
      std::string a = var_of_sort(s), b = var_of_sort(s);
      return RegularFormula::eq(a, b);
    }
    if (roll <= 11) { // conjunction
      int n = rnd(2, 3);
      std::vector<RegularFormula> parts;
      for (int i = 0; i < n; ++i) parts.push_back(gen(depth - 1));
      return RegularFormula::conj(std::move(parts));
    }
    // existential
    int n = rnd(1, 2);
    std::vector<std::string> bound;
    size_t mark = pool.size();
    for (int i = 0; i < n; ++i) {
      std::string v = "v" + std::to_string(bound_counter++);
      int s = rnd(0, (int)sig.sorts.size() - 1);
      bound.push_back(v);
      pool.emplace_back(v, s);
      sorts[v] = s;
    }
    RegularFormula body = gen(depth - 1);
    pool.resize(mark);
    return RegularFormula::exists(std::move(bound), std::move(body));
  }
};

void occurring_vars(const RegularFormula& f, std::set<std::string>& out) {
  switch (f.kind) {
    case RegularFormula::Truth:
      break;
    case RegularFormula::Atom:
      out.insert(f.args.begin(), f.args.end());
      break;
    case RegularFormula::Eq:
      out.insert(f.lhs);
      out.insert(f.rhs);
      break;
    default:
      out.insert(f.bound.begin(), f.bound.end());
      for (const auto& c : f.children) occurring_vars(c, out);
  }
}

} // namespace

RandomFormula random_regular_formula(const Signature& sig, std::mt19937_64& rng,
                                     int max_depth) {
  FormulaGen g{sig, rng};
  RandomFormula out;
  out.formula = g.gen(max_depth);
  std::set<std::string> occ;
  occurring_vars(out.formula, occ);
  for (const auto& v : occ) out.var_sorts[v] = g.sorts.at(v);
  return out;
}

RegularTheory random_theory(const Signature& sig, std::mt19937_64& rng, int n_sequents,
                            int max_depth) {
  RegularTheory t;
  t.sig = sig;
  for (int i = 0; i < n_sequents; ++i) {
    FormulaGen g{sig, rng};
    Sequent sq;
    sq.lhs = g.gen(max_depth);
    sq.rhs = g.gen(max_depth);
    std::set<std::string> seen;
    for (const auto* f : {&sq.lhs, &sq.rhs})
      for (const auto& v : free_vars(*f))
        if (seen.insert(v).second) sq.context.push_back(v);
    std::set<std::string> occ;
    for (const auto* f : {&sq.lhs, &sq.rhs}) occurring_vars(*f, occ);
    for (const auto& v : occ) sq.var_sorts[v] = g.sorts.at(v);
    t.sequents.push_back(std::move(sq));
  }
  return t;
}

} // namespace catlogic
