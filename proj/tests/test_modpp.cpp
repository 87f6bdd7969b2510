#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "catlogic/modpp.hpp"
#include "catlogic/oracles.hpp"
#include "catlogic/zlinalg.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace catlogic;

namespace {

LinearPp pp(int n, int m, std::vector<std::vector<int>> rows) {
  return LinearPp{n, m, std::move(rows)};
}

// Formulas with n + m <= 3 and up to two rows, entries uniform.
LinearPp random_pp(const FiniteRing& r, std::mt19937& rng) {
  int n = 1 + (int)(rng() % 2);
  int m = (int)(rng() % (4 - n));
  int nrows = (int)(rng() % 3);
  LinearPp p{n, m, {}};
  for (int t = 0; t < nrows; ++t) {
    std::vector<int> row(n + m);
    for (auto& e : row) e = (int)(rng() % r.size());
    p.rows.push_back(std::move(row));
  }
  return p;
}

int mul_by(const FiniteModule& m, long long k, int x) {
  int acc = m.zero();
  for (long long i = 0; i < k; ++i) acc = m.add(acc, x);
  return acc;
}

bool diagonal(const ZMat& d) {
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = 0; j < d[i].size(); ++j)
      if (i != j && d[i][j] != 0) return false;
  return true;
}

ZMat transpose(const ZMat& m) {
  if (m.empty()) return m;
  ZMat t(m[0].size(), ZVec(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[0].size(); ++j) t[j][i] = m[i][j];
  return t;
}

std::vector<int> identity_table(int n) {
  std::vector<int> id(n);
  for (int i = 0; i < n; ++i) id[i] = i;
  return id;
}

} // namespace

TEST_CASE("smith normal form: U A V = D with tracked inverse") {
  std::vector<ZMat> mats = {
      {{1, 2}},
      {{2, 0}, {0, 4}},
      {{6, 4}, {2, 0}, {0, 3}},
      {{0, 0}, {0, 0}},
  };
  std::mt19937 rng(41);
  for (int i = 0; i < 12; ++i) {
    ZMat a(2 + rng() % 2, ZVec(2 + rng() % 3));
    for (auto& row : a)
      for (auto& e : row) e = (long long)(rng() % 11) - 5;
    mats.push_back(std::move(a));
  }
  for (const auto& a : mats) {
    Smith s = smith_normal_form(a);
    CHECK(zmat_mul(zmat_mul(s.u, a), s.v) == s.d);
    CHECK(diagonal(s.d));
    int cols = (int)a[0].size();
    CHECK(zmat_mul(s.v, s.vinv) == zmat_identity(cols));
    for (int t = 0; t < (int)std::min(a.size(), a[0].size()); ++t) {
      if (t < s.rank)
        CHECK(s.d[t][t] > 0);
      else
        CHECK(s.d[t][t] == 0);
    }
  }
}

TEST_CASE("kernel lattices are complete") {
  ZMat a = {{1, 2}};
  ZMat k = kernel_lattice(a);
  REQUIRE(k.size() == 1);
  for (const auto& g : k) CHECK(zmat_apply(a, g) == ZVec{0});
  // every brute-force solution is a lattice point
  for (long long x = -4; x <= 4; ++x)
    for (long long y = -4; y <= 4; ++y) {
      if (x + 2 * y != 0) continue;
      CHECK(solve_integer(transpose(k), {x, y}).has_value());
    }

  ZMat b = {{2, 4, 0}, {0, 0, 3}};
  ZMat kb = kernel_lattice(b);
  for (const auto& g : kb) CHECK(zmat_apply(b, g) == ZVec{0, 0});
  for (long long x = -3; x <= 3; ++x)
    for (long long y = -3; y <= 3; ++y)
      for (long long z = -3; z <= 3; ++z) {
        bool sol = 2 * x + 4 * y == 0 && 3 * z == 0;
        if (sol) CHECK(solve_integer(transpose(kb), {x, y, z}).has_value());
      }
  CHECK(kernel_lattice(ZMat{}).empty());
}

TEST_CASE("solve_integer agrees with brute search") {
  std::mt19937 rng(42);
  for (int it = 0; it < 60; ++it) {
    ZMat a(2, ZVec(2));
    for (auto& row : a)
      for (auto& e : row) e = (long long)(rng() % 9) - 4;
    ZVec b = {(long long)(rng() % 9) - 4, (long long)(rng() % 9) - 4};
    bool brute = false;
    for (long long x = -12; x <= 12 && !brute; ++x)
      for (long long y = -12; y <= 12 && !brute; ++y)
        brute = a[0][0] * x + a[0][1] * y == b[0] && a[1][0] * x + a[1][1] * y == b[1];
    auto got = solve_integer(a, b);
    if (got) {
      CHECK(zmat_apply(a, *got) == b);
    } else {
      CHECK_FALSE(brute); // no integer solution at all, not just out of range
    }
    if (brute) CHECK(got.has_value());
  }
}

TEST_CASE("quotient structure diagonalizes the relation lattice") {
  auto check_rels = [](int k, const ZMat& rels) {
    QuotientStructure q = quotient_structure(k, rels);
    CHECK(zmat_mul(q.v, q.vinv) == zmat_identity(k));
    for (const auto& r : rels) {
      ZVec xp = zmat_apply(q.vinv, r);
      for (int i = 0; i < k; ++i) {
        if (q.orders[i] == 0)
          CHECK(xp[i] == 0);
        else
          CHECK(xp[i] % q.orders[i] == 0);
      }
    }
    return q;
  };
  auto q1 = check_rels(2, {{1, 2}});
  std::multiset<long long> o1(q1.orders.begin(), q1.orders.end());
  CHECK(o1 == std::multiset<long long>{1, 0}); // Z^2 / <(1,2)> = Z

  auto q2 = check_rels(2, {{2, 0}, {0, 4}});
  std::multiset<long long> o2(q2.orders.begin(), q2.orders.end());
  CHECK(o2 == std::multiset<long long>{2, 4});

  // relation lattice of exists y (x - 2y = 0) over Z/4
  auto q3 = check_rels(2, {{1, 2}, {4, 0}, {0, 4}});
  std::multiset<long long> o3(q3.orders.begin(), q3.orders.end());
  CHECK(o3 == std::multiset<long long>{1, 4});

  auto q4 = quotient_structure(3, {});
  CHECK(q4.orders == ZVec{0, 0, 0});
}

TEST_CASE("ring builders and validation") {
  FiniteRing z4 = FiniteRing::cyclic(4);
  CHECK(z4.size() == 4);
  CHECK(z4.add(3, 2) == 1);
  CHECK(z4.mul(2, 2) == 0);
  CHECK(z4.neg(1) == 3);

  FiniteRing f = FiniteRing::f2x2();
  CHECK(f.mul(2, 2) == 0);       // x * x = 0
  CHECK(f.mul(3, 3) == 1);       // (1+x)^2 = 1
  CHECK(f.add(3, 2) == 1);       // (1+x) + x = 1
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(f.mul(a, b) == f.mul(b, a));

  FiniteRing z6 = FiniteRing::cyclic(6);
  CHECK(z6.mul(2, 3) == 0);

  // tampered tables are rejected
  std::vector<std::vector<int>> add(4, std::vector<int>(4)), mul = add;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      add[a][b] = (a + b) % 4;
      mul[a][b] = (a * b) % 4;
    }
  auto bad_add = add;
  bad_add[1][2] = 0;
  CHECK_THROWS_AS(FiniteRing(bad_add, mul, 0, 1), error);
  auto bad_mul = mul;
  bad_mul[2][2] = 1;
  CHECK_THROWS_AS(FiniteRing(add, bad_mul, 0, 1), error);
  CHECK_THROWS_AS(FiniteRing(add, mul, 0, 2), error); // 2 is not a unit element
  CHECK_THROWS_AS(FiniteRing::cyclic(0), error);
}

TEST_CASE("module builders and validation") {
  FiniteRing r = FiniteRing::cyclic(4);
  FiniteModule m = ring_as_module(r);
  CHECK(m.size() == 4);
  CHECK(m.act(2, 3) == 2);
  CHECK(m.neg(1) == 3);
  CHECK(zero_module(r).size() == 1);

  FiniteModule z2 = quotient_by_ideal(r, {2});
  CHECK(z2.size() == 2);
  CHECK(z2.add(1, 1) == 0);
  CHECK(z2.act(2, 1) == 0); // 2 acts as zero on R/(2)
  CHECK(z2.act(3, 1) == 1);

  FiniteRing z6 = FiniteRing::cyclic(6);
  CHECK(quotient_by_ideal(z6, {2}).size() == 2);
  CHECK(quotient_by_ideal(z6, {3}).size() == 3);
  CHECK(quotient_by_ideal(z6, {1}).size() == 1);
  CHECK(quotient_by_ideal(FiniteRing::f2x2(), {2}).size() == 2);

  // action must respect the unit
  std::vector<std::vector<int>> add(2, std::vector<int>(2));
  add[0] = {0, 1};
  add[1] = {1, 0};
  std::vector<std::vector<int>> act(4, std::vector<int>(2, 0));
  CHECK_THROWS_AS(FiniteModule(r, add, act), error);
}

TEST_CASE("product modules use the first factor as high digit") {
  FiniteRing z6 = FiniteRing::cyclic(6);
  FiniteModule a = quotient_by_ideal(z6, {3}); // Z/3
  FiniteModule b = quotient_by_ideal(z6, {2}); // Z/2
  FiniteModule p = product_module(z6, {a, b});
  CHECK(p.size() == 6);
  // (1,0) + (0,1) = (1,1): 1*2+0 = 2, 0*2+1 = 1, 1*2+1 = 3
  CHECK(p.add(2, 1) == 3);
  CHECK(modules_isomorphic(p, ring_as_module(z6)));
  CHECK(product_module(z6, {}).size() == 1);
}

TEST_CASE("module bases decompose into cyclics") {
  FiniteRing r = FiniteRing::cyclic(4);
  ModuleBasis b = module_basis(ring_as_module(r));
  CHECK(b.gens == std::vector<int>{1});
  CHECK(b.orders == std::vector<long long>{4});

  FiniteModule m = product_module(r, {quotient_by_ideal(r, {2}),
                                      quotient_by_ideal(r, {2})});
  ModuleBasis b2 = module_basis(m);
  REQUIRE(b2.gens.size() == 2);
  CHECK(b2.orders == std::vector<long long>{2, 2});
  // spans: all four elements are sums of multiples of the generators
  std::set<int> seen;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      seen.insert(m.add(mul_by(m, i, b2.gens[0]), mul_by(m, j, b2.gens[1])));
  CHECK(seen.size() == 4);

  ModuleBasis b3 = module_basis(ring_as_module(FiniteRing::cyclic(6)));
  CHECK(b3.gens == std::vector<int>{1});
  CHECK(b3.orders == std::vector<long long>{6});

  CHECK(module_basis(zero_module(r)).gens.empty());
}

TEST_CASE("module corpus: counts and shapes are stable") {
  FiniteRing z4 = FiniteRing::cyclic(4);
  FiniteRing z6 = FiniteRing::cyclic(6);
  FiniteRing f = FiniteRing::f2x2();

  auto sizes = [](const std::vector<FiniteModule>& ms) {
    std::vector<int> out;
    for (const auto& m : ms) out.push_back(m.size());
    return out;
  };

  auto c4 = module_corpus(z4, 16);
  CHECK(sizes(c4) == std::vector<int>{1, 2, 4, 4, 8, 8, 16, 16, 16});
  auto c4s = module_corpus(z4, 8);
  CHECK(sizes(c4s) == std::vector<int>{1, 2, 4, 4, 8, 8});
  auto c6 = module_corpus(z6, 16);
  CHECK(sizes(c6) == std::vector<int>{1, 2, 3, 4, 6, 8, 9, 12, 16});
  auto cf = module_corpus(f, 16);
  CHECK(sizes(cf) == std::vector<int>{1, 2, 4, 4, 8, 8, 16, 16, 16});

  for (const auto& corpus : {c4, c6, cf})
    for (size_t i = 0; i < corpus.size(); ++i)
      for (size_t j = i + 1; j < corpus.size(); ++j)
        CHECK_FALSE(modules_isomorphic(corpus[i], corpus[j]));

  // over f2x2, the free module and (R/x)^2 share a group but not an action
  CHECK(cf[2].size() == 4);
  CHECK(cf[3].size() == 4);
  CHECK_FALSE(modules_isomorphic(cf[2], cf[3]));
}

TEST_CASE("module hom enumeration") {
  FiniteRing r = FiniteRing::cyclic(4);
  FiniteModule z2 = quotient_by_ideal(r, {2});
  FiniteModule z4 = ring_as_module(r);
  auto homs = all_module_homs(z2, z4);
  REQUIRE(homs.size() == 2);
  std::set<std::vector<int>> hs(homs.begin(), homs.end());
  CHECK(hs.count({0, 0}) == 1);
  CHECK(hs.count({0, 2}) == 1);
  for (const auto& h : homs) CHECK(is_module_hom(z2, z4, h));

  // brute force over all functions agrees
  int brute = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (is_module_hom(z2, z4, {a, b})) ++brute;
  CHECK(brute == 2);

  CHECK(all_module_homs(z4, z4).size() == 4);
  CHECK(all_module_homs(z4, z2).size() == 2);
}

TEST_CASE("solution sets: frozen examples over Z/4") {
  FiniteRing r = FiniteRing::cyclic(4);
  FiniteModule m = ring_as_module(r);

  // exists y (x - 2y = 0): divisibility by 2
  LinearPp div2 = pp(1, 1, {{1, 2}}); // -2 = 2 in Z/4
  CHECK(pp_solution_set(m, div2) ==
        std::vector<std::vector<int>>{{0}, {2}});

  // x = x places no constraint
  CHECK(pp_solution_set(m, pp(1, 0, {{0}})) ==
        std::vector<std::vector<int>>{{0}, {1}, {2}, {3}});

  // x = 0
  CHECK(pp_solution_set(m, pp(1, 0, {{1}})) ==
        std::vector<std::vector<int>>{{0}});

  // 2x = 0
  CHECK(pp_solution_set(m, pp(1, 0, {{2}})) ==
        std::vector<std::vector<int>>{{0}, {2}});

  // no equations at all
  CHECK(pp_solution_set(zero_module(r), pp(2, 0, {})).size() == 1);

  CHECK_THROWS_AS(pp_solution_set(m, pp(1, 0, {{9}})), error);
  CHECK_THROWS_AS(pp_solution_set(m, pp(1, 1, {{1}})), error);
}

TEST_CASE("solution sets match the literal sweep") {
  std::vector<FiniteRing> rings = {FiniteRing::cyclic(4), FiniteRing::cyclic(6),
                                   FiniteRing::f2x2()};
  for (size_t ri = 0; ri < rings.size(); ++ri) {
    const FiniteRing& r = rings[ri];
    auto corpus = module_corpus(r, 16);
    std::mt19937 rng(7001 + (unsigned)ri);
    for (int it = 0; it < 40; ++it) {
      LinearPp phi = random_pp(r, rng);
      const FiniteModule& m = corpus[rng() % corpus.size()];
      auto fast = pp_solution_set(m, phi);
      auto slow = pp_sweep_oracle(m, phi);
      REQUIRE(fast == slow);
      // solution sets are subgroups...
      std::set<std::vector<int>> set(fast.begin(), fast.end());
      for (const auto& a : fast)
        for (const auto& b : fast) {
          std::vector<int> c(phi.n);
          for (int j = 0; j < phi.n; ++j) c[j] = m.add(a[j], b[j]);
          CHECK(set.count(c) == 1);
        }
      // ...closed under every endomorphism of the module
      if (m.size() <= 8 && it % 4 == 0) {
        for (const auto& e : all_module_homs(m, m))
          for (const auto& a : fast) {
            std::vector<int> c(phi.n);
            for (int j = 0; j < phi.n; ++j) c[j] = e[a[j]];
            CHECK(set.count(c) == 1);
          }
      }
    }
  }
}

TEST_CASE("solution sets respect finite products") {
  FiniteRing r = FiniteRing::cyclic(4);
  FiniteModule m = ring_as_module(r);
  FiniteModule n = quotient_by_ideal(r, {2});
  FiniteModule p = product_module(r, {m, n});
  std::mt19937 rng(4242);
  for (int it = 0; it < 25; ++it) {
    LinearPp phi = random_pp(r, rng);
    auto sm = pp_solution_set(m, phi);
    auto sn = pp_solution_set(n, phi);
    std::vector<std::vector<int>> expect;
    for (const auto& a : sm)
      for (const auto& b : sn) {
        std::vector<int> t(phi.n);
        for (int j = 0; j < phi.n; ++j) t[j] = a[j] * n.size() + b[j];
        expect.push_back(std::move(t));
      }
    std::sort(expect.begin(), expect.end());
    CHECK(pp_solution_set(p, phi) == expect);
  }
}

TEST_CASE("free realizations: frozen examples and characteristic property") {
  FiniteRing r = FiniteRing::cyclic(4);
  FiniteModule m = ring_as_module(r);

  // exists y (x - 2y = 0): F = R^2 / <(1,2)> = Z/4 with c of order 2
  FreeRealization fr = free_realization(r, pp(1, 1, {{1, 2}}));
  CHECK(fr.module.size() == 4);
  CHECK(modules_isomorphic(fr.module, m));
  REQUIRE(fr.gens.size() == 1);
  CHECK(mul_by(fr.module, 2, fr.gens[0]) == fr.module.zero());
  CHECK(fr.gens[0] != fr.module.zero());
  std::set<int> images;
  for (const auto& h : all_module_homs(fr.module, m)) images.insert(h[fr.gens[0]]);
  CHECK(images == std::set<int>{0, 2});

  // x = 0 realizes freely in the zero module
  FreeRealization fr0 = free_realization(r, pp(1, 0, {{1}}));
  CHECK(fr0.module.size() == 1);
  CHECK(fr0.gens == std::vector<int>{0});

  // no equations: the free module on one generator
  FreeRealization frt = free_realization(r, pp(1, 0, {}));
  CHECK(modules_isomorphic(frt.module, m));

  // phi(M) = { h(c-bar) : h in Hom(F, M) } across rings, formulas, modules
  std::vector<FiniteRing> rings = {FiniteRing::cyclic(4), FiniteRing::cyclic(6),
                                   FiniteRing::f2x2()};
  for (size_t ri = 0; ri < rings.size(); ++ri) {
    const FiniteRing& ring = rings[ri];
    auto corpus = module_corpus(ring, 8);
    std::mt19937 rng(9100 + (unsigned)ri);
    for (int it = 0; it < 8; ++it) {
      LinearPp phi = random_pp(ring, rng);
      FreeRealization f = free_realization(ring, phi);
      for (const auto& mod : corpus) {
        std::set<std::vector<int>> via_homs;
        for (const auto& h : all_module_homs(f.module, mod)) {
          std::vector<int> t(phi.n);
          for (int j = 0; j < phi.n; ++j) t[j] = h[f.gens[j]];
          via_homs.insert(std::move(t));
        }
        auto direct = pp_solution_set(mod, phi);
        CHECK(std::vector<std::vector<int>>(via_homs.begin(), via_homs.end()) ==
              direct);
      }
    }
  }
}

TEST_CASE("pp implication: frozen examples") {
  FiniteRing r = FiniteRing::cyclic(4);
  LinearPp x0 = pp(1, 0, {{1}});        // x = 0
  LinearPp div2 = pp(1, 1, {{1, 2}});   // exists y, x = 2y
  LinearPp ann2 = pp(1, 0, {{2}});      // 2x = 0

  CHECK(pp_implies(r, x0, div2));
  CHECK_FALSE(pp_implies(r, div2, x0)); // x = 2 witnesses the failure
  CHECK(pp_implies(r, div2, ann2));
  CHECK_FALSE(pp_implies(r, ann2, div2));
  CHECK(pp_implies(r, div2, div2));
  CHECK(pp_implies(r, div2, pp(1, 0, {}))); // truth is implied by anything
  CHECK_THROWS_AS(pp_implies(r, x0, pp(2, 0, {{1, 0}})), error);
}

TEST_CASE("pp implication agrees with the module sweep") {
  std::vector<FiniteRing> rings = {FiniteRing::cyclic(4), FiniteRing::cyclic(6),
                                   FiniteRing::f2x2()};
  for (size_t ri = 0; ri < rings.size(); ++ri) {
    const FiniteRing& r = rings[ri];
    std::mt19937 rng(5200 + (unsigned)ri);
    int agree = 0;
    for (int it = 0; it < 60; ++it) {
      LinearPp phi = random_pp(r, rng);
      LinearPp psi = random_pp(r, rng);
      psi.n = phi.n;
      for (auto& row : psi.rows) row.resize(psi.n + psi.m, 0);
      bool fast = pp_implies(r, phi, psi);
      bool slow = pp_implies_sweep_oracle(r, phi, psi, 16);
      REQUIRE(fast == slow);
      ++agree;
    }
    CHECK(agree == 60);
  }
}

TEST_CASE("pp pairs validate their orientation") {
  FiniteRing r = FiniteRing::cyclic(4);
  LinearPp x0 = pp(1, 0, {{1}});
  LinearPp div2 = pp(1, 1, {{1, 2}});
  LinearPp ann2 = pp(1, 0, {{2}});
  CHECK_NOTHROW(PpPair(r, x0, div2));
  CHECK_NOTHROW(PpPair(r, div2, ann2));
  CHECK_THROWS_AS(PpPair(r, ann2, x0), error);
  CHECK_THROWS_AS(PpPair(r, x0, pp(2, 0, {{1, 0}})), error);
}

TEST_CASE("definable class membership: frozen examples") {
  FiniteRing r = FiniteRing::cyclic(4);
  std::vector<PpPair> t;
  t.emplace_back(r, pp(1, 1, {{1, 2}}), pp(1, 0, {{2}}));

  FiniteModule z4 = ring_as_module(r);
  FiniteModule z2 = quotient_by_ideal(r, {2});
  CHECK(defclass_membership(r, t, z4));      // both sides are {0, 2}
  CHECK_FALSE(defclass_membership(r, t, z2)); // {0} vs {0, 1}
  CHECK(defclass_membership(r, {}, z2));      // empty theory accepts all
  CHECK_THROWS_AS(defclass_membership(FiniteRing::cyclic(6), t, z4), error);
}

TEST_CASE("purity: frozen examples") {
  FiniteRing r = FiniteRing::cyclic(4);
  FiniteModule z4 = ring_as_module(r);
  FiniteModule z2 = quotient_by_ideal(r, {2});

  // Z/2 -> Z/4, 1 |-> 2: additive, injective, but no retraction
  CHECK_FALSE(is_pure_embedding(z2, z4, {0, 2}));
  // the witnessing formula: 2 is divisible by 2 in Z/4, 1 is not in Z/2
  LinearPp div2 = pp(1, 1, {{1, 2}});
  CHECK(pp_solution_set(z4, div2) == std::vector<std::vector<int>>{{0}, {2}});
  CHECK(pp_solution_set(z2, div2) == std::vector<std::vector<int>>{{0}});

  CHECK(is_pure_embedding(z4, z4, identity_table(4)));
  // coordinate inclusion into a product splits
  FiniteModule sq = product_module(r, {z2, z2});
  CHECK(is_pure_embedding(z2, sq, {0, 2}));

  CHECK_THROWS_AS(is_pure_embedding(z2, z4, {0, 1}), error);  // not a hom
  CHECK_THROWS_AS(is_pure_embedding(z2, z4, {0, 0}), error);  // not injective
}

TEST_CASE("purity coincides with an exhibited retraction") {
  FiniteRing r = FiniteRing::cyclic(4);
  auto corpus = module_corpus(r, 8);
  int checked = 0;
  for (const auto& a : corpus) {
    if (a.size() > 8) continue;
    for (const auto& b : corpus) {
      if (a.size() > b.size()) continue;
      auto backs = all_module_homs(b, a);
      int used = 0;
      for (const auto& f : all_module_homs(a, b)) {
        std::set<int> img(f.begin(), f.end());
        if ((int)img.size() != a.size()) continue; // not injective
        if (++used > 25) break;
        bool split = false;
        for (const auto& g : backs) {
          bool id = true;
          for (int x = 0; x < a.size() && id; ++x) id = g[f[x]] == x;
          split |= id;
        }
        CHECK(is_pure_embedding(a, b, f) == split);
        ++checked;
      }
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("pure embeddings reflect pp formulas") {
  FiniteRing r = FiniteRing::cyclic(4);
  FiniteModule z2 = quotient_by_ideal(r, {2});
  FiniteModule sq = product_module(r, {z2, z2});
  std::vector<int> f = {0, 2};
  REQUIRE(is_pure_embedding(z2, sq, f));
  std::mt19937 rng(660);
  for (int it = 0; it < 30; ++it) {
    LinearPp phi = random_pp(r, rng);
    if (phi.n != 1) continue;
    auto sa = pp_solution_set(z2, phi);
    auto sb = pp_solution_set(sq, phi);
    std::set<std::vector<int>> sbs(sb.begin(), sb.end());
    for (int x = 0; x < z2.size(); ++x) {
      bool in_b = sbs.count({f[x]}) == 1;
      bool in_a = std::binary_search(sa.begin(), sa.end(), std::vector<int>{x});
      CHECK(in_a == in_b); // reflected, not just preserved
    }
  }
}

TEST_CASE("closure audit: definable classes pass, ad-hoc classes fail") {
  FiniteRing r = FiniteRing::cyclic(4);
  auto corpus = module_corpus(r, 8);
  std::vector<PpPair> t;
  t.emplace_back(r, pp(1, 1, {{1, 2}}), pp(1, 0, {{2}}));
  ClosureReport ok = closure_audit(r, t, corpus);
  CHECK(ok.ok);
  CHECK(ok.violations.empty());

  // negative control: bounded size is not closed under products
  ClosureReport bad = closure_audit(
      [](const FiniteModule& m) { return m.size() <= 2; }, corpus);
  CHECK_FALSE(bad.ok);
  bool product_violation = false;
  for (const auto& v : bad.violations)
    product_violation |= v.find("product") != std::string::npos;
  CHECK(product_violation);

  // negative control: missing summands are reported
  ClosureReport bad2 = closure_audit(
      [](const FiniteModule& m) { return m.size() == 1 || m.size() == 8; },
      corpus);
  CHECK_FALSE(bad2.ok);
  bool summand_violation = false;
  for (const auto& v : bad2.violations)
    summand_violation |= v.find("direct summand") != std::string::npos;
  CHECK(summand_violation);
}

TEST_CASE("reduced products: constant family over a chain") {
  FiniteRing r = FiniteRing::cyclic(4);
  FiniteModule z4 = ring_as_module(r);
  std::vector<std::vector<bool>> leq = {{true, true}, {false, true}};
  std::map<std::pair<int, int>, std::vector<int>> maps;
  maps[{0, 1}] = identity_table(4);

  ReducedProduct rp = reduced_product(r, leq, {z4, z4}, maps);
  CHECK(rp.top == 1);
  CHECK(rp.colimit == z4);
  CHECK(rp.prods[0].size() == 16);
  CHECK(rp.prods[1].size() == 4);
  CHECK(rp.h == identity_table(4)); // constant family: h is an isomorphism
  CHECK(rp.h_i[0] == std::vector<int>{0, 5, 10, 15}); // x |-> (x, x)
  std::vector<int> proj(16);
  for (int e = 0; e < 16; ++e) proj[e] = e % 4;
  CHECK(rp.big_h[0] == proj);
  CHECK(rp.splits_verified);
  CHECK(rp.purity_verified);
}

TEST_CASE("reduced products: diamond poset") {
  FiniteRing r = FiniteRing::cyclic(4);
  FiniteModule z2 = quotient_by_ideal(r, {2});
  FiniteModule z4 = ring_as_module(r);
  auto chain = [&](int n) {
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) leq[i][i] = true;
    return leq;
  };
  std::vector<std::vector<bool>> leq = chain(4);
  leq[0][1] = leq[0][2] = leq[1][3] = leq[2][3] = leq[0][3] = true;
  std::vector<int> dbl = {0, 2}; // Z/2 -> Z/4
  std::map<std::pair<int, int>, std::vector<int>> maps;
  maps[{0, 1}] = dbl;
  maps[{0, 2}] = identity_table(2);
  maps[{1, 3}] = identity_table(4);
  maps[{2, 3}] = dbl;
  maps[{0, 3}] = dbl;
  ReducedProduct rp = reduced_product(r, leq, {z2, z4, z2, z4}, maps);
  CHECK(rp.top == 3);
  CHECK(rp.splits_verified);
  CHECK(rp.purity_verified);
  CHECK(rp.prods[0].size() == 2 * 4 * 2 * 4);
  CHECK(rp.h_ik.count({0, 3}) == 1);

  // malformed inputs
  std::vector<std::vector<bool>> antichain = chain(2);
  CHECK_THROWS_AS(reduced_product(r, antichain, {z2, z2}, {}), error);
  std::map<std::pair<int, int>, std::vector<int>> missing;
  std::vector<std::vector<bool>> two = {{true, true}, {false, true}};
  CHECK_THROWS_AS(reduced_product(r, two, {z2, z4}, missing), error);
  std::map<std::pair<int, int>, std::vector<int>> badfun = maps;
  badfun[{0, 3}] = {0, 0}; // no longer the composite
  CHECK_THROWS_AS(reduced_product(r, leq, {z2, z4, z2, z4}, badfun), error);
}

TEST_CASE("distributivity probe") {
  FiniteRing r = FiniteRing::cyclic(4);
  FiniteModule z2 = quotient_by_ideal(r, {2});
  FiniteModule z4 = ring_as_module(r);

  std::vector<std::vector<FiniteModule>> chains = {{z2, z4}, {z4, z4}};
  std::vector<std::vector<std::vector<int>>> maps = {{{0, 2}},
                                                     {identity_table(4)}};
  CHECK(distributivity_probe(r, chains, maps));
  CHECK(distributivity_probe(r, {{z4}}, {{}}));
  CHECK(distributivity_probe(r, {}, {}));
  // chains of different lengths get padded
  std::vector<std::vector<FiniteModule>> uneven = {{z2, z4, z4}, {z4}};
  std::vector<std::vector<std::vector<int>>> umaps = {
      {{0, 2}, identity_table(4)}, {}};
  CHECK(distributivity_probe(r, uneven, umaps));

  std::vector<std::vector<std::vector<int>>> bad = {{{0, 1}},
                                                    {identity_table(4)}};
  CHECK_THROWS_AS(distributivity_probe(r, chains, bad), error);
  CHECK_THROWS_AS(distributivity_probe(r, {{}}, {{}}), error);
}
