#include "catlogic/ppcat.hpp"

#include "catlogic/fincat.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace catlogic {

namespace {

// Incremental conjunction builder over a fixed block of free variables.
// Each added formula keeps its own bound variables; free variable j lands in
// column fmap[j] (-1 substitutes zero), colliding columns add coefficients.
struct Builder {
  const FiniteRing& r;
  int n, m = 0;
  std::vector<std::vector<int>> rows;

  Builder(const FiniteRing& rr, int nn) : r(rr), n(nn) {}

  void add(const LinearPp& f, const std::vector<int>& fmap) {
    int base = n + m;
    for (auto& row : rows) row.resize(base + f.m, r.zero());
    m += f.m;
    for (const auto& fr : f.rows) {
      std::vector<int> row(n + m, r.zero());
      for (int j = 0; j < f.n; ++j)
        if (fmap[j] >= 0) row[fmap[j]] = r.add(row[fmap[j]], fr[j]);
      for (int j = 0; j < f.m; ++j) row[base + j] = fr[f.n + j];
      rows.push_back(std::move(row));
    }
  }

  // Rows of f applied to a difference of two free blocks: coefficient at
  // plus[j], its negative at minus[j].
  void add_difference(const LinearPp& f, const std::vector<int>& plus,
                      const std::vector<int>& minus) {
    int base = n + m;
    for (auto& row : rows) row.resize(base + f.m, r.zero());
    m += f.m;
    for (const auto& fr : f.rows) {
      std::vector<int> row(n + m, r.zero());
      for (int j = 0; j < f.n; ++j) {
        row[plus[j]] = r.add(row[plus[j]], fr[j]);
        row[minus[j]] = r.add(row[minus[j]], r.neg(fr[j]));
      }
      for (int j = 0; j < f.m; ++j) row[base + j] = fr[f.n + j];
      rows.push_back(std::move(row));
    }
  }

  LinearPp done() { return pp_simplify(r, LinearPp{n, m, rows}); }
};

std::vector<int> seq(int from, int count) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = from + i;
  return v;
}

} // namespace

LinearPp pp_simplify(const FiniteRing& r, LinearPp f) {
  std::vector<char> used(f.m, 0);
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> rows;
  for (const auto& row : f.rows) {
    bool zero = true;
    for (int c : row) zero = zero && c == r.zero();
    if (zero || !seen.insert(row).second) continue;
    rows.push_back(row);
  }
  for (const auto& row : rows)
    for (int j = 0; j < f.m; ++j)
      if (row[f.n + j] != r.zero()) used[j] = 1;
  int kept = 0;
  std::vector<int> col(f.m);
  for (int j = 0; j < f.m; ++j)
    if (used[j]) col[j] = kept++;
  for (auto& row : rows) {
    std::vector<int> out(f.n + kept, r.zero());
    for (int j = 0; j < f.n; ++j) out[j] = row[j];
    for (int j = 0; j < f.m; ++j)
      if (used[j]) out[f.n + col[j]] = row[f.n + j];
    row = std::move(out);
  }
  // Canonicalize: bound variables are interchangeable, so sort rows and
  // bound columns to a fixpoint.  Different derivations of the same
  // conjunction then compare equal structurally.
  for (int pass = 0; pass < 4; ++pass) {
    auto before = rows;
    std::sort(rows.begin(), rows.end());
    std::vector<int> perm(kept);
    for (int j = 0; j < kept; ++j) perm[j] = j;
    std::stable_sort(perm.begin(), perm.end(), [&](int x, int y) {
      for (const auto& row : rows) {
        if (row[f.n + x] != row[f.n + y]) return row[f.n + x] < row[f.n + y];
      }
      return false;
    });
    for (auto& row : rows) {
      std::vector<int> b(kept);
      for (int j = 0; j < kept; ++j) b[j] = row[f.n + perm[j]];
      for (int j = 0; j < kept; ++j) row[f.n + j] = b[j];
    }
    std::sort(rows.begin(), rows.end());
    if (rows == before) break;
  }
  return LinearPp{f.n, kept, rows};
}

LinearPp pp_truth(int n) { return LinearPp{n, 0, {}}; }

LinearPp pp_zero(const FiniteRing& r, int n) {
  std::vector<std::vector<int>> rows(n, std::vector<int>(n, r.zero()));
  for (int i = 0; i < n; ++i) rows[i][i] = r.one();
  return LinearPp{n, 0, rows};
}

LinearPp pp_identity_graph(const FiniteRing& r, int n) { return pp_scalar_graph(r, n, r.one()); }

LinearPp pp_scalar_graph(const FiniteRing& r, int n, int s) {
  std::vector<std::vector<int>> rows(n, std::vector<int>(2 * n, r.zero()));
  for (int i = 0; i < n; ++i) {
    rows[i][i] = s;
    rows[i][n + i] = r.neg(r.one());
  }
  return LinearPp{2 * n, 0, rows};
}

LinearPp pp_and(const FiniteRing& r, const LinearPp& a, const LinearPp& b) {
  if (a.n != b.n) throw error("pp conjunction: arity mismatch");
  Builder bl(r, a.n);
  bl.add(a, seq(0, a.n));
  bl.add(b, seq(0, b.n));
  return bl.done();
}

LinearPp pp_embed(const FiniteRing& r, const LinearPp& f, int total_n, int offset) {
  if (offset < 0 || offset + f.n > total_n) throw error("pp embed: block out of range");
  Builder bl(r, total_n);
  bl.add(f, seq(offset, f.n));
  return bl.done();
}

LinearPp pp_block(const FiniteRing& r, const LinearPp& a, const LinearPp& b) {
  Builder bl(r, a.n + b.n);
  bl.add(a, seq(0, a.n));
  bl.add(b, seq(a.n, b.n));
  return bl.done();
}

LinearPp pp_exists_suffix(const LinearPp& f, int k) {
  if (k < 0 || k > f.n) throw error("pp exists: suffix out of range");
  // Columns are already laid out frees-then-bounds, so moving the boundary
  // is a reinterpretation.
  return LinearPp{f.n - k, f.m + k, f.rows};
}

LinearPp pp_subst_zero_prefix(const LinearPp& f, int k) {
  if (k < 0 || k > f.n) throw error("pp subst: prefix out of range");
  std::vector<std::vector<int>> rows;
  rows.reserve(f.rows.size());
  for (const auto& row : f.rows) rows.emplace_back(row.begin() + k, row.end());
  return LinearPp{f.n - k, f.m, rows};
}

LinearPp pp_sum(const FiniteRing& r, const LinearPp& a, const LinearPp& b) {
  if (a.n != b.n) throw error("pp sum: arity mismatch");
  int n = a.n;
  Builder bl(r, 3 * n);
  std::vector<std::vector<int>> link(n, std::vector<int>(3 * n, r.zero()));
  for (int i = 0; i < n; ++i) {
    link[i][i] = r.one();
    link[i][n + i] = r.neg(r.one());
    link[i][2 * n + i] = r.neg(r.one());
  }
  bl.add(LinearPp{3 * n, 0, link}, seq(0, 3 * n));
  bl.add(a, seq(n, n));
  bl.add(b, seq(2 * n, n));
  return pp_simplify(r, pp_exists_suffix(bl.done(), 2 * n));
}

bool pp_equivalent(const FiniteRing& r, const LinearPp& a, const LinearPp& b) {
  return pp_implies(r, a, b) && pp_implies(r, b, a);
}

PpMorphism::PpMorphism(const FiniteRing& r, PpObject s, PpObject t, LinearPp g)
    : src(std::move(s)), tgt(std::move(t)), rho(pp_simplify(r, std::move(g))) {
  int na = src.arity(), nb = tgt.arity();
  if (rho.n != na + nb) throw error("pp morphism: relation arity mismatch");
  LinearPp num_b = pp_embed(r, tgt.num(), na + nb, na);
  if (!pp_implies(r, src.num(), pp_exists_suffix(pp_and(r, rho, num_b), nb)))
    throw error("pp morphism: not total");
  if (!pp_implies(r, pp_and(r, rho, pp_embed(r, src.num(), na + nb, 0)), num_b))
    throw error("pp morphism: does not land in the target numerator");
  if (!pp_implies(r, pp_and(r, rho, pp_embed(r, src.den(), na + nb, 0)),
                  pp_embed(r, tgt.den(), na + nb, na)))
    throw error("pp morphism: does not respect denominators");
  if (!pp_implies(r, pp_subst_zero_prefix(rho, na), tgt.den()))
    throw error("pp morphism: not single-valued modulo the denominator");
}

PpObject zero_pp_object(const FiniteRing& r, int arity) {
  return PpObject(r, pp_zero(r, arity), pp_zero(r, arity));
}

bool is_zero_object(const FiniteRing& r, const PpObject& x) {
  return pp_implies(r, x.num(), x.den());
}

PpObject direct_sum(const FiniteRing& r, const PpObject& a, const PpObject& b) {
  return PpObject(r, pp_block(r, a.den(), b.den()), pp_block(r, a.num(), b.num()));
}

PpMorphism identity_morphism(const FiniteRing& r, const PpObject& x) {
  return PpMorphism(r, x, x, pp_identity_graph(r, x.arity()));
}

PpMorphism zero_morphism(const FiniteRing& r, const PpObject& a, const PpObject& b) {
  int na = a.arity(), nb = b.arity();
  LinearPp g = pp_and(r, pp_embed(r, a.num(), na + nb, 0), pp_embed(r, b.den(), na + nb, na));
  return PpMorphism(r, a, b, g);
}

PpMorphism compose(const FiniteRing& r, const PpMorphism& g, const PpMorphism& f) {
  if (!(g.src == f.tgt)) throw error("compose: endpoint mismatch");
  int na = f.src.arity(), nb = f.tgt.arity(), nc = g.tgt.arity();
  Builder bl(r, na + nc + nb);
  std::vector<int> fm = seq(0, na);
  std::vector<int> mid = seq(na + nc, nb);
  fm.insert(fm.end(), mid.begin(), mid.end());
  bl.add(f.rho, fm);
  std::vector<int> gm = mid;
  std::vector<int> out = seq(na, nc);
  gm.insert(gm.end(), out.begin(), out.end());
  bl.add(g.rho, gm);
  LinearPp comp = pp_simplify(r, pp_exists_suffix(bl.done(), nb));
  return PpMorphism(PpMorphism::unchecked_t{}, f.src, g.tgt, std::move(comp));
}

PpMorphism scalar_morphism(const FiniteRing& r, const PpObject& x, int s) {
  return PpMorphism(r, x, x, pp_scalar_graph(r, x.arity(), s));
}

bool mor_equal(const FiniteRing& r, const PpMorphism& f, const PpMorphism& g) {
  if (!(f.src == g.src) || !(f.tgt == g.tgt)) throw error("mor_equal: endpoint mismatch");
  if (f.rho == g.rho) return true;
  int na = f.src.arity(), nb = f.tgt.arity();
  int total = na + 2 * nb;
  Builder lhs(r, total);
  std::vector<int> fm = seq(0, na);
  std::vector<int> b1 = seq(na, nb);
  fm.insert(fm.end(), b1.begin(), b1.end());
  lhs.add(f.rho, fm);
  std::vector<int> gm = seq(0, na);
  std::vector<int> b2 = seq(na + nb, nb);
  gm.insert(gm.end(), b2.begin(), b2.end());
  lhs.add(g.rho, gm);
  lhs.add(f.src.num(), seq(0, na));
  Builder rhs(r, total);
  rhs.add_difference(f.tgt.den(), b1, b2);
  return pp_implies(r, lhs.done(), rhs.done());
}

bool is_zero_morphism(const FiniteRing& r, const PpMorphism& f) {
  return mor_equal(r, f, zero_morphism(r, f.src, f.tgt));
}

KernelData kernel(const FiniteRing& r, const PpMorphism& f) {
  int na = f.src.arity(), nb = f.tgt.arity();
  LinearPp dies =
      pp_exists_suffix(pp_and(r, f.rho, pp_embed(r, f.tgt.den(), na + nb, na)), nb);
  LinearPp num_k = pp_and(r, f.src.num(), dies);
  PpObject k(r, f.src.den(), num_k);
  PpMorphism incl(r, k, f.src, pp_identity_graph(r, na));
  return KernelData{std::move(k), std::move(incl)};
}

CokernelData cokernel(const FiniteRing& r, const PpMorphism& f) {
  int na = f.src.arity(), nb = f.tgt.arity();
  Builder img(r, nb + na);
  std::vector<int> rm = seq(nb, na);
  std::vector<int> out = seq(0, nb);
  rm.insert(rm.end(), out.begin(), out.end());
  img.add(f.rho, rm);
  img.add(f.src.num(), seq(nb, na));
  LinearPp image = pp_exists_suffix(img.done(), na);
  PpObject q(r, pp_sum(r, f.tgt.den(), image), f.tgt.num());
  PpMorphism proj(r, f.tgt, q, pp_identity_graph(r, nb));
  return CokernelData{std::move(q), std::move(proj)};
}

PpMorphism representable_cover(const FiniteRing& r, const PpObject& x) {
  int n = x.arity(), w = x.num().m;
  if (w == 0 && pp_implies(r, x.den(), pp_zero(r, n))) return identity_morphism(r, x);
  // Free the witness variables: the quantifier-free opening over the zero
  // denominator maps onto x by projecting away the witnesses.
  LinearPp theta{n + w, 0, x.num().rows};
  PpObject src(r, pp_zero(r, n + w), theta);
  std::vector<std::vector<int>> g(n, std::vector<int>(n + w + n, r.zero()));
  for (int i = 0; i < n; ++i) {
    g[i][i] = r.one();
    g[i][n + w + i] = r.neg(r.one());
  }
  return PpMorphism(r, src, x, LinearPp{n + w + n, 0, g});
}

EvGroup ev_object(const FiniteModule& m, const PpObject& x) {
  auto num = pp_solution_set(m, x.num());
  auto den = pp_solution_set(m, x.den());
  std::set<std::vector<int>> in_num(num.begin(), num.end());
  for (const auto& d : den)
    if (!in_num.count(d)) throw error("evaluation: denominator escapes the numerator");
  int n = x.arity();
  EvGroup g;
  std::map<std::vector<int>, std::vector<int>> rep;
  for (const auto& t : num) {
    std::vector<int> best;
    for (const auto& d : den) {
      std::vector<int> s(n);
      for (int i = 0; i < n; ++i) s[i] = m.add(t[i], d[i]);
      if (best.empty() || s < best) best = std::move(s);
    }
    rep[t] = best;
  }
  std::set<std::vector<int>> reps;
  for (const auto& kv : rep) reps.insert(kv.second);
  g.reps.assign(reps.begin(), reps.end());
  for (const auto& kv : rep)
    g.class_of[kv.first] =
        (int)(std::lower_bound(g.reps.begin(), g.reps.end(), kv.second) - g.reps.begin());
  g.order = (long long)g.reps.size();
  if (num.size() % den.size() != 0 || g.order != (long long)(num.size() / den.size()))
    throw error("evaluation: coset count mismatch");
  g.zero_class = g.class_of.at(std::vector<int>(n, m.zero()));
  return g;
}

int ev_add(const FiniteModule& m, const EvGroup& g, int a, int b) {
  const auto& ta = g.reps.at(a);
  const auto& tb = g.reps.at(b);
  std::vector<int> s(ta.size());
  for (size_t i = 0; i < ta.size(); ++i) s[i] = m.add(ta[i], tb[i]);
  return g.class_of.at(s);
}

EvHom ev_morphism(const FiniteModule& m, const PpMorphism& f) {
  const FiniteRing& r = m.ring();
  EvGroup a = ev_object(m, f.src), b = ev_object(m, f.tgt);
  int na = f.src.arity(), nb = f.tgt.arity();
  LinearPp both = pp_and(r, pp_and(r, f.rho, pp_embed(r, f.src.num(), na + nb, 0)),
                         pp_embed(r, f.tgt.num(), na + nb, na));
  EvHom h;
  h.src_classes = (int)a.order;
  h.tgt_classes = (int)b.order;
  h.table.assign(a.order, -1);
  for (const auto& s : pp_solution_set(m, both)) {
    int ca = a.class_of.at(std::vector<int>(s.begin(), s.begin() + na));
    int cb = b.class_of.at(std::vector<int>(s.begin() + na, s.end()));
    if (h.table[ca] == -1)
      h.table[ca] = cb;
    else if (h.table[ca] != cb)
      throw error("evaluation: morphism is not single-valued on classes");
  }
  for (int v : h.table)
    if (v == -1) throw error("evaluation: morphism is not total on classes");
  return h;
}

bool serre_membership(const FiniteRing& r, const std::vector<FiniteModule>& gens,
                      const PpObject& x) {
  std::vector<PpPair> t{x.pair};
  for (const auto& m : gens)
    if (!defclass_membership(r, t, m)) return false;
  return true;
}

} // namespace catlogic
