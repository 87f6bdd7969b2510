#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "catlogic/fincat.hpp"
#include "test_util.hpp"

using namespace catlogic;

TEST_CASE("chain C2 tables") {
  auto c2 = make_chain_category(2);
  CHECK(c2.object_count() == 2);
  CHECK(c2.morphism_count() == 3);
  int arrow = -1;
  for (int f = 0; f < c2.morphism_count(); ++f)
    if (!c2.is_identity(f)) arrow = f;
  REQUIRE(arrow >= 0);
  CHECK(c2.dom(arrow) == 0);
  CHECK(c2.cod(arrow) == 1);
  CHECK(c2.compose(arrow, c2.identity(0)) == arrow);
  CHECK(c2.compose(c2.identity(1), arrow) == arrow);

  // The unique non-identity arrow of the arrow category: mono and epi
  // (all parallel pairs in a thin category are equal) but nothing splits.
  auto flags = classify_morphism(c2, arrow);
  CHECK(flags.mono);
  CHECK(flags.epi);
  CHECK_FALSE(flags.split_mono);
  CHECK_FALSE(flags.split_epi);
  CHECK_FALSE(flags.iso);
}

TEST_CASE("validation rejects broken tables") {
  // Missing composite.
  CategoryData d;
  d.num_objects = 2;
  d.morphisms = {{0, 0}, {1, 1}, {0, 1}};
  d.identity = {0, 1};
  d.comp = {{0, 0, 0}, {1, 1, 1}, {2, 0, 2}}; // forgot identity(1) o arrow
  auto bad = FinCategory::validate(d);
  CHECK(!bad.empty());
  CHECK_THROWS_AS(FinCategory::from_data(d), error);

  // Associativity violation: "composition" g o f picks the wrong element of a
  // 3-element monoid-like table.
  CategoryData m;
  m.num_objects = 1;
  m.morphisms = {{0, 0}, {0, 0}, {0, 0}};
  m.identity = {0};
  auto set = [&](int g, int f, int gf) { m.comp.push_back({g, f, gf}); };
  // e=0 unit; 1*1=2, 1*2=0, 2*1=1, 2*2=1 -- not associative
  for (int k = 0; k < 3; ++k) {
    set(0, k, k);
    set(k, 0, k);
  }
  set(1, 1, 2);
  set(1, 2, 0);
  set(2, 1, 1);
  set(2, 2, 1);
  auto bad2 = FinCategory::validate(m);
  bool assoc_reported = false;
  for (const auto& s : bad2)
    if (s.find("associativity") != std::string::npos) assoc_reported = true;
  CHECK(assoc_reported);
}

TEST_CASE("identity endpoints are checked") {
  CategoryData d;
  d.num_objects = 2;
  d.morphisms = {{0, 0}, {0, 1}};
  d.identity = {0, 1}; // id of object 1 is not an endomorphism
  auto bad = FinCategory::validate(d);
  CHECK(!bad.empty());
}

TEST_CASE("opposite is an involution and swaps mono/epi") {
  auto b2 = make_b2();
  auto op = b2.opposite();
  auto opop = op.opposite();
  CHECK(opop.object_count() == b2.object_count());
  for (int f = 0; f < b2.morphism_count(); ++f) {
    CHECK(opop.dom(f) == b2.dom(f));
    CHECK(opop.cod(f) == b2.cod(f));
  }
  for (int g = 0; g < b2.morphism_count(); ++g)
    for (int f = 0; f < b2.morphism_count(); ++f)
      if (b2.composable(g, f)) CHECK(opop.compose(g, f) == b2.compose(g, f));

  for (int f = 0; f < b2.morphism_count(); ++f) {
    auto here = classify_morphism(b2, f);
    auto there = classify_morphism(op, f);
    CHECK(here.mono == there.epi);
    CHECK(here.epi == there.mono);
    CHECK(here.split_mono == there.split_epi);
    CHECK(here.iso == there.iso);
  }
}

TEST_CASE("flag implications on assorted categories") {
  std::vector<FinCategory> cats;
  cats.push_back(make_chain_category(3));
  cats.push_back(make_b2());
  cats.push_back(make_monoid_category({{0, 1}, {1, 0}}, 0));          // Z2
  cats.push_back(make_monoid_category({{0, 1}, {1, 1}}, 0));          // unit + absorber
  for (const auto& c : cats)
    for (int f = 0; f < c.morphism_count(); ++f) {
      auto fl = classify_morphism(c, f);
      if (fl.iso) {
        CHECK(fl.split_mono);
        CHECK(fl.split_epi);
      }
      if (fl.split_mono) CHECK(fl.mono);
      if (fl.split_epi) CHECK(fl.epi);
      if (c.is_identity(f)) CHECK(fl.iso);
    }
}

TEST_CASE("group elements are isos") {
  auto z2 = make_monoid_category({{0, 1}, {1, 0}}, 0);
  for (int f = 0; f < 2; ++f) CHECK(classify_morphism(z2, f).iso);
  // The absorbing element of {1, a | a*a = a} splits nothing.
  auto m = make_monoid_category({{0, 1}, {1, 1}}, 0);
  auto fl = classify_morphism(m, 1);
  CHECK_FALSE(fl.mono);
  CHECK_FALSE(fl.epi);
  CHECK_FALSE(fl.iso);
}

TEST_CASE("functor validation") {
  auto c2 = make_chain_category(2);
  auto b2 = make_b2();
  CHECK_NOTHROW(FinFunctor::identity_functor(&b2));

  // Chain into B2 along 0 <= 3.
  std::vector<int> om = {0, 3};
  std::vector<int> mm(c2.morphism_count());
  for (int f = 0; f < c2.morphism_count(); ++f) {
    int d = om[c2.dom(f)], c = om[c2.cod(f)];
    mm[f] = b2.hom(d, c).at(0);
  }
  CHECK_NOTHROW(FinFunctor(&c2, &b2, om, mm));

  // Break identity preservation.
  std::vector<int> bad_mm = mm;
  bad_mm[c2.identity(0)] = b2.hom(0, 3).at(0);
  CHECK_THROWS_AS(FinFunctor(&c2, &b2, om, bad_mm), error);
}

TEST_CASE("natural transformation validation") {
  auto pt = make_chain_category(1);
  auto b2 = make_b2();
  FinFunctor bottom(&pt, &b2, {0}, {b2.identity(0)});
  FinFunctor top(&pt, &b2, {3}, {b2.identity(3)});
  CHECK_NOTHROW(NatTransform(&bottom, &top, {b2.hom(0, 3).at(0)}));
  CHECK_THROWS_AS(NatTransform(&bottom, &top, {b2.identity(0)}), error);
  CHECK_THROWS_AS(NatTransform(&top, &bottom, {b2.hom(0, 3).at(0)}), error);
}

TEST_CASE("equivalence: skeleton inclusion is an equivalence") {
  // Codiscrete preorder on two points: both objects isomorphic.
  std::vector<std::vector<bool>> leq = {{true, true}, {true, true}};
  auto codisc = make_preorder_category(leq);
  auto pt = make_chain_category(1);
  FinFunctor incl(&pt, &codisc, {0}, {codisc.identity(0)});
  CHECK(is_equivalence(incl));

  auto disc2 = make_discrete_category(2);
  FinFunctor not_ess(&pt, &disc2, {0}, {disc2.identity(0)});
  CHECK_FALSE(is_equivalence(not_ess));

  CHECK(is_equivalence(FinFunctor::identity_functor(&codisc)));
}

TEST_CASE("category isomorphism search") {
  auto c2 = make_chain_category(2);
  auto c2b = make_chain_category(2);
  CHECK(are_isomorphic(c2, c2b));
  CHECK_FALSE(are_isomorphic(c2, make_discrete_category(2)));
  CHECK_FALSE(are_isomorphic(make_monoid_category({{0, 1}, {1, 0}}, 0),
                             make_monoid_category({{0, 1}, {1, 1}}, 0)));
  // Relabelled B2: swap the two atoms.
  std::vector<std::vector<bool>> leq(4, std::vector<bool>(4, false));
  for (int i = 0; i < 4; ++i) leq[i][i] = true;
  leq[0][1] = leq[0][2] = leq[0][3] = true;
  leq[2][3] = leq[1][3] = true;
  CHECK(are_isomorphic(make_b2(), make_preorder_category(leq)));
}
