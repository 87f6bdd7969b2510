#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "catlogic/fincat.hpp"
#include "catlogic/modpp.hpp"
#include "catlogic/ppcat.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <set>
#include <vector>

using namespace catlogic;

namespace {

LinearPp pp(int n, int m, std::vector<std::vector<int>> rows) {
  return LinearPp{n, m, std::move(rows)};
}

LinearPp random_pp(const FiniteRing& r, std::mt19937& rng, int n) {
  int m = (int)(rng() % 2);
  int nrows = (int)(rng() % 3);
  LinearPp p{n, m, {}};
  for (int t = 0; t < nrows; ++t) {
    std::vector<int> row(n + m);
    for (auto& e : row) e = (int)(rng() % r.size());
    p.rows.push_back(std::move(row));
  }
  return p;
}

std::set<std::vector<int>> sols(const FiniteModule& m, const LinearPp& f) {
  auto v = pp_solution_set(m, f);
  return std::set<std::vector<int>>(v.begin(), v.end());
}

// x = s y for one variable.
LinearPp div_by(const FiniteRing& r, int s) {
  return pp(1, 1, {{r.one(), r.neg(s)}});
}

// s x = 0.
LinearPp ann_by(const FiniteRing& r, int s) { return pp(1, 0, {{s}}); }

// The fixture everything below leans on: over Z/4, the module object
// M = truth/(x=0), the subobject 2M, the annihilator of 2, and M/2M.
struct Z4Fixture {
  FiniteRing r = FiniteRing::cyclic(4);
  FiniteModule m = ring_as_module(r);
  FiniteModule m2 = quotient_by_ideal(r, {2});
  LinearPp truth1 = pp_truth(1);
  LinearPp zero1 = pp_zero(r, 1);
  LinearPp div2 = div_by(r, 2);
  LinearPp ann2 = ann_by(r, 2);
  PpObject whole{r, zero1, truth1};
  PpObject twoM{r, zero1, div2};
  PpObject tors{r, zero1, ann2};
  PpObject quot{r, div2, truth1};
};

// Deterministic pool of valid morphisms for the property tests, built from
// the constructions only (random relations almost never satisfy the side
// conditions).
struct Pool {
  std::vector<PpObject> objs;
  std::vector<PpMorphism> mors;
};

Pool build_pool(const FiniteRing& r) {
  Pool p;
  int s = 2 % r.size();
  PpObject whole(r, pp_zero(r, 1), pp_truth(1));
  PpObject sub(r, pp_zero(r, 1), div_by(r, s));
  PpObject tors(r, ann_by(r, s), pp_truth(1));
  p.objs = {whole, sub, tors, zero_pp_object(r, 1)};
  for (const auto& x : p.objs) p.mors.push_back(identity_morphism(r, x));
  for (const auto& x : p.objs)
    for (const auto& y : p.objs) p.mors.push_back(zero_morphism(r, x, y));
  for (const auto& x : p.objs)
    for (int e = 0; e < r.size(); ++e) {
      try {
        p.mors.push_back(scalar_morphism(r, x, e));
      } catch (const error&) {
      }
    }
  PpMorphism f = scalar_morphism(r, whole, s);
  auto k = kernel(r, f);
  auto q = cokernel(r, f);
  p.objs.push_back(k.obj);
  p.objs.push_back(q.obj);
  p.mors.push_back(k.incl);
  p.mors.push_back(q.proj);
  p.mors.push_back(representable_cover(r, sub));
  p.objs.push_back(p.mors.back().src);
  for (const auto& x : p.objs) {
    try {
      p.mors.push_back(zero_morphism(r, x, k.obj));
    } catch (const error&) {
    }
  }
  return p;
}

std::vector<FiniteRing> three_rings() {
  return {FiniteRing::cyclic(4), FiniteRing::cyclic(6), FiniteRing::f2x2()};
}

} // namespace

TEST_CASE("formula toolkit matches set arithmetic") {
  FiniteRing r = FiniteRing::cyclic(4);
  std::mt19937 rng(0x9a11);
  auto corpus = module_corpus(r, 8);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 1 + (int)(rng() % 2);
    LinearPp a = random_pp(r, rng, n), b = random_pp(r, rng, n);
    const FiniteModule& m = corpus[rng() % corpus.size()];
    auto sa = sols(m, a), sb = sols(m, b);

    auto sand = sols(m, pp_and(r, a, b));
    std::set<std::vector<int>> expect_and;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::inserter(expect_and, expect_and.begin()));
    CHECK(sand == expect_and);

    std::set<std::vector<int>> expect_sum;
    for (const auto& u : sa)
      for (const auto& v : sb) {
        std::vector<int> w(n);
        for (int i = 0; i < n; ++i) w[i] = m.add(u[i], v[i]);
        expect_sum.insert(w);
      }
    CHECK(sols(m, pp_sum(r, a, b)) == expect_sum);

    std::set<std::vector<int>> expect_block;
    for (const auto& u : sa)
      for (const auto& v : sb) {
        std::vector<int> w = u;
        w.insert(w.end(), v.begin(), v.end());
        expect_block.insert(w);
      }
    CHECK(sols(m, pp_block(r, a, b)) == expect_block);

    std::set<std::vector<int>> expect_proj, expect_zero;
    for (const auto& u : sa) {
      expect_proj.insert(std::vector<int>(u.begin(), u.end() - 1));
      if (u[0] == m.zero()) expect_zero.insert(std::vector<int>(u.begin() + 1, u.end()));
    }
    CHECK(sols(m, pp_exists_suffix(a, 1)) == expect_proj);
    CHECK(sols(m, pp_subst_zero_prefix(a, 1)) == expect_zero);

    CHECK(sols(m, pp_simplify(r, a)) == sa);
  }
}

TEST_CASE("objects validate the pair orientation") {
  Z4Fixture z;
  CHECK_NOTHROW(PpObject(z.r, z.div2, z.ann2));   // 2|x entails 2x=0
  CHECK_NOTHROW(PpObject(z.r, z.zero1, z.div2));
  CHECK_THROWS_AS(PpObject(z.r, z.ann2, z.div2), error); // 2x=0 does not give 2|x
  CHECK(zero_pp_object(z.r).arity() == 1);
  CHECK(is_zero_object(z.r, zero_pp_object(z.r)));
  CHECK_FALSE(is_zero_object(z.r, z.whole));
  CHECK_FALSE(is_zero_object(z.r, z.twoM));
}

TEST_CASE("morphism side conditions are machine-checked") {
  Z4Fixture z;
  // x' = 2x on the module object is fine.
  CHECK_NOTHROW(scalar_morphism(z.r, z.whole, 2));
  // x' = x with x = 0 forced is not total on the numerator.
  CHECK_THROWS_WITH(PpMorphism(z.r, z.whole, z.whole,
                               pp(2, 0, {{1, 3}, {1, 0}})),
                    "pp morphism: not total");
  // The full relation reaches outside the numerator 2|x.
  CHECK_THROWS_WITH(PpMorphism(z.r, z.whole, z.twoM, pp(2, 0, {})),
                    "pp morphism: does not land in the target numerator");
  // Relating every x to all of 2M is not single-valued modulo (x'=0).
  CHECK_THROWS_WITH(PpMorphism(z.r, z.whole, z.twoM, pp(2, 1, {{0, 1, 2}})),
                    "pp morphism: does not respect denominators");
  CHECK_THROWS_WITH(PpMorphism(z.r, z.whole, z.whole, pp(1, 0, {{1}})),
                    "pp morphism: relation arity mismatch");
}

TEST_CASE("morphism equality is graph agreement modulo the denominator") {
  Z4Fixture z;
  // On truth/(2x=0) the graphs x'=x and x'=3x agree: the difference 2x is
  // killed by the denominator.
  PpObject c(z.r, z.ann2, z.truth1);
  CHECK(mor_equal(z.r, identity_morphism(z.r, c), scalar_morphism(z.r, c, 3)));
  // On the module object they differ at x = 1.
  CHECK_FALSE(mor_equal(z.r, identity_morphism(z.r, z.whole),
                        scalar_morphism(z.r, z.whole, 3)));
  CHECK(mor_equal(z.r, scalar_morphism(z.r, z.whole, 1),
                  identity_morphism(z.r, z.whole)));
  CHECK_THROWS_WITH(mor_equal(z.r, identity_morphism(z.r, c),
                              identity_morphism(z.r, z.whole)),
                    "mor_equal: endpoint mismatch");
}

TEST_CASE("composition: frozen cases and identity neutrality") {
  Z4Fixture z;
  PpMorphism two = scalar_morphism(z.r, z.whole, 2);
  PpMorphism four = compose(z.r, two, two);
  CHECK(mor_equal(z.r, four, zero_morphism(z.r, z.whole, z.whole)));
  CHECK(is_zero_morphism(z.r, four));
  CHECK_FALSE(is_zero_morphism(z.r, two));
  PpMorphism id = identity_morphism(z.r, z.whole);
  CHECK(mor_equal(z.r, compose(z.r, id, two), two));
  CHECK(mor_equal(z.r, compose(z.r, two, id), two));
  PpObject c(z.r, z.ann2, z.truth1);
  CHECK_THROWS_WITH(compose(z.r, scalar_morphism(z.r, c, 2), two),
                    "compose: endpoint mismatch");
  // Composites revalidate cleanly through the checking constructor.
  CHECK_NOTHROW(PpMorphism(z.r, four.src, four.tgt, four.rho));
}

TEST_CASE("composition is associative on a construction pool") {
  for (const auto& r : three_rings()) {
    Pool p = build_pool(r);
    std::vector<std::array<int, 3>> triples;
    int nm = (int)p.mors.size();
    for (int h = 0; h < nm; ++h)
      for (int g = 0; g < nm; ++g) {
        if (!(p.mors[h].src == p.mors[g].tgt)) continue;
        for (int f = 0; f < nm; ++f)
          if (p.mors[g].src == p.mors[f].tgt) triples.push_back({h, g, f});
      }
    REQUIRE(triples.size() >= 1000);
    std::mt19937 rng(0xa5);
    std::shuffle(triples.begin(), triples.end(), rng);
    triples.resize(1000);
    std::vector<PpMorphism> comp = p.mors;
    std::map<std::pair<int, int>, int> cache;
    auto compose_idx = [&](int g, int f) {
      auto key = std::make_pair(g, f);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      comp.push_back(compose(r, comp[g], comp[f]));
      int id = (int)comp.size() - 1;
      cache.emplace(key, id);
      return id;
    };
    int checked = 0;
    for (const auto& t : triples) {
      int left = compose_idx(compose_idx(t[0], t[1]), t[2]);
      int right = compose_idx(t[0], compose_idx(t[1], t[2]));
      CHECK(mor_equal(r, comp[left], comp[right]));
      ++checked;
    }
    CHECK(checked == 1000);
  }
}

TEST_CASE("kernels: frozen cases") {
  Z4Fixture z;
  PpMorphism two = scalar_morphism(z.r, z.whole, 2);
  auto k = kernel(z.r, two);
  CHECK(pp_equivalent(z.r, k.obj.num(), z.ann2));
  CHECK(pp_equivalent(z.r, k.obj.den(), z.zero1));
  CHECK(is_zero_object(z.r, kernel(z.r, identity_morphism(z.r, z.whole)).obj));
  auto kz = kernel(z.r, zero_morphism(z.r, z.whole, z.twoM));
  CHECK(pp_equivalent(z.r, kz.obj.num(), z.truth1));
  CHECK(pp_equivalent(z.r, kz.obj.den(), z.zero1));
}

TEST_CASE("cokernels: frozen cases") {
  Z4Fixture z;
  PpMorphism two = scalar_morphism(z.r, z.whole, 2);
  auto q = cokernel(z.r, two);
  CHECK(pp_equivalent(z.r, q.obj.num(), z.truth1));
  CHECK(pp_equivalent(z.r, q.obj.den(), z.div2));
  CHECK(is_zero_object(z.r, cokernel(z.r, identity_morphism(z.r, z.whole)).obj));
  auto qz = cokernel(z.r, zero_morphism(z.r, z.tors, z.whole));
  CHECK(pp_equivalent(z.r, qz.obj.num(), z.truth1));
  CHECK(pp_equivalent(z.r, qz.obj.den(), z.zero1));
}

TEST_CASE("kernel and cokernel satisfy the universal property on probes") {
  Z4Fixture z;
  PpMorphism two = scalar_morphism(z.r, z.whole, 2);
  auto k = kernel(z.r, two);
  auto q = cokernel(z.r, two);
  // Probes t with 2t = 0 factor through the kernel; the factoring is the
  // same relation retargeted, and the checking constructor accepts exactly
  // the factorable ones.
  for (int s = 0; s < 4; ++s) {
    PpMorphism t = scalar_morphism(z.r, z.whole, s);
    bool kills = is_zero_morphism(z.r, compose(z.r, two, t));
    CHECK(kills == (s % 2 == 0));
    if (kills) {
      PpMorphism u(z.r, z.whole, k.obj, t.rho);
      CHECK(mor_equal(z.r, compose(z.r, k.incl, u), t));
    } else {
      CHECK_THROWS_AS(PpMorphism(z.r, z.whole, k.obj, t.rho), error);
    }
  }
  // The torsion inclusion kills the map, so it factors as well.
  PpMorphism j(z.r, z.tors, z.whole, pp_identity_graph(z.r, 1));
  CHECK(is_zero_morphism(z.r, compose(z.r, two, j)));
  PpMorphism u(z.r, z.tors, k.obj, j.rho);
  CHECK(mor_equal(z.r, compose(z.r, k.incl, u), j));
  // Dually, maps killing the image factor through the cokernel.
  for (int s = 0; s < 4; ++s) {
    PpMorphism t = scalar_morphism(z.r, z.whole, s);
    bool kills = is_zero_morphism(z.r, compose(z.r, t, two));
    CHECK(kills == (s % 2 == 0));
    if (kills) {
      PpMorphism v(z.r, q.obj, z.whole, t.rho);
      CHECK(mor_equal(z.r, compose(z.r, v, q.proj), t));
    } else {
      CHECK_THROWS_AS(PpMorphism(z.r, q.obj, z.whole, t.rho), error);
    }
  }
}

TEST_CASE("evaluation: frozen groups over Z/4") {
  Z4Fixture z;
  EvGroup g = ev_object(z.m, z.twoM);
  CHECK(g.order == 2);
  CHECK(g.reps == std::vector<std::vector<int>>{{0}, {2}});
  CHECK(g.zero_class == 0);
  CHECK(ev_object(z.m, z.whole).order == 4);
  CHECK(ev_object(z.m, z.quot).order == 2);
  CHECK(ev_object(z.m, zero_pp_object(z.r)).order == 1);
  // Over the quotient module Z/2 the subobject 2M evaluates to 0.
  CHECK(ev_object(z.m2, z.twoM).order == 1);
  // Addition is the coset group: on the module object, classes are elements.
  EvGroup w = ev_object(z.m, z.whole);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(ev_add(z.m, w, a, b) == z.m.add(a, b));
  EvHom h = ev_morphism(z.m, scalar_morphism(z.r, z.whole, 2));
  CHECK(h.table == std::vector<int>{0, 2, 0, 2});
}

TEST_CASE("evaluation is functorial and additive") {
  for (const auto& r : three_rings()) {
    Pool p = build_pool(r);
    auto corpus = module_corpus(r, 6);
    std::mt19937 rng(0xf0);
    int done = 0;
    for (int trial = 0; trial < 400 && done < 25; ++trial) {
      int gi = (int)(rng() % p.mors.size()), fi = (int)(rng() % p.mors.size());
      if (!(p.mors[gi].src == p.mors[fi].tgt)) continue;
      PpMorphism gf = compose(r, p.mors[gi], p.mors[fi]);
      const FiniteModule& m = corpus[rng() % corpus.size()];
      EvHom hg = ev_morphism(m, p.mors[gi]);
      EvHom hf = ev_morphism(m, p.mors[fi]);
      EvHom hgf = ev_morphism(m, gf);
      REQUIRE(hgf.src_classes == hf.src_classes);
      for (int c = 0; c < hf.src_classes; ++c)
        CHECK(hgf.table[c] == hg.table[hf.table[c]]);
      ++done;
    }
    CHECK(done == 25);
    // Direct sums multiply evaluations.
    for (int i = 0; i < (int)p.objs.size(); ++i)
      for (const auto& m : corpus) {
        const PpObject& x = p.objs[i];
        const PpObject& y = p.objs[(i + 1) % p.objs.size()];
        CHECK(ev_object(m, direct_sum(r, x, y)).order ==
              ev_object(m, x).order * ev_object(m, y).order);
      }
  }
}

TEST_CASE("evaluation is exact on kernels and cokernels") {
  for (const auto& r : three_rings()) {
    Pool p = build_pool(r);
    auto corpus = module_corpus(r, 8);
    int pairs = 0;
    for (const auto& f : p.mors) {
      auto k = kernel(r, f);
      auto q = cokernel(r, f);
      for (const auto& m : corpus) {
        EvHom hf = ev_morphism(m, f);
        EvHom hi = ev_morphism(m, k.incl);
        EvHom hp = ev_morphism(m, q.proj);
        int tz = ev_object(m, f.tgt).zero_class;
        // ev(ker) includes bijectively onto the kernel of ev(f).
        std::set<int> image(hi.table.begin(), hi.table.end());
        CHECK((int)image.size() == hi.src_classes);
        std::set<int> evker;
        for (int c = 0; c < hf.src_classes; ++c)
          if (hf.table[c] == tz) evker.insert(c);
        CHECK(image == evker);
        // ev(coker) is the quotient by the image of ev(f).
        std::set<int> cover(hp.table.begin(), hp.table.end());
        CHECK((int)cover.size() == hp.tgt_classes);
        int qz = ev_object(m, q.obj).zero_class;
        std::set<int> dies, evim(hf.table.begin(), hf.table.end());
        for (int c = 0; c < hp.src_classes; ++c)
          if (hp.table[c] == qz) dies.insert(c);
        CHECK(dies == evim);
      }
      ++pairs;
    }
    CHECK(pairs == (int)p.mors.size());
  }
}

TEST_CASE("representable covers present every object") {
  Z4Fixture z;
  // 2M is covered by the graph of multiplication by 2, freed.
  PpMorphism c = representable_cover(z.r, z.twoM);
  CHECK(c.src.num().m == 0);
  CHECK(pp_equivalent(z.r, c.src.den(), pp_zero(z.r, c.src.arity())));
  CHECK(is_zero_object(z.r, cokernel(z.r, c).obj));
  // Two-step presentation: cover the kernel of the first cover.
  auto k = kernel(z.r, c);
  PpMorphism c2 = representable_cover(z.r, k.obj);
  CHECK(c2.src.num().m == 0);
  CHECK(is_zero_object(z.r, cokernel(z.r, c2).obj));
  // Already-representable objects get their identity.
  PpMorphism idc = representable_cover(z.r, z.whole);
  CHECK(mor_equal(z.r, idc, identity_morphism(z.r, z.whole)));
  PpMorphism zc = representable_cover(z.r, zero_pp_object(z.r));
  CHECK(is_zero_object(z.r, zc.src));
  // A non-representable denominator still yields an epi from a representable.
  PpObject serre(z.r, z.div2, z.ann2);
  PpMorphism cs = representable_cover(z.r, serre);
  CHECK(cs.src.num().m == 0);
  CHECK(pp_equivalent(z.r, cs.src.den(), pp_zero(z.r, cs.src.arity())));
  CHECK(is_zero_object(z.r, cokernel(z.r, cs).obj));
  // The epi certificate holds evaluation-wise too.
  for (const auto& m : module_corpus(z.r, 8)) {
    CHECK(ev_object(m, cokernel(z.r, c).obj).order == 1);
    EvHom h = ev_morphism(m, c);
    CHECK(std::set<int>(h.table.begin(), h.table.end()).size() == (size_t)h.tgt_classes);
  }
}

TEST_CASE("serre membership: frozen cases") {
  Z4Fixture z;
  PpObject x(z.r, z.div2, z.ann2);
  CHECK(serre_membership(z.r, {z.m}, x));
  CHECK_FALSE(serre_membership(z.r, {z.m2}, x));
  CHECK(serre_membership(z.r, {z.m, z.m2}, zero_pp_object(z.r)));
  CHECK(serre_membership(z.r, {}, x));
  // Membership is exactly vanishing of every evaluation.
  for (const auto& m : module_corpus(z.r, 8))
    CHECK(serre_membership(z.r, {m}, x) == (ev_object(m, x).order == 1));
}
