#include "catlogic/limits.hpp"

#include <algorithm>
#include <functional>

namespace catlogic {

Diagram make_diagram(const FinCategory& ambient, FinCategory shape, std::vector<int> obj,
                     std::vector<int> mor) {
  Diagram d{std::move(shape), std::move(obj), std::move(mor)};
  // Reuse the functor validator for the functoriality laws.
  FinFunctor check(&d.shape, &ambient, d.obj, d.mor);
  (void)check;
  return d;
}

namespace {

// Enumerate cones over d in (apex, legs-lex) order and feed them to `sink`;
// stop early when sink returns false.
void for_each_cone(const FinCategory& c, const Diagram& d,
                   const std::function<bool(const Cone&)>& sink) {
  const int k = d.shape.object_count();
  for (int apex = 0; apex < c.object_count(); ++apex) {
    Cone cone;
    cone.apex = apex;
    cone.legs.assign(k, -1);
    std::function<bool(int)> rec = [&](int i) -> bool {
      if (i == k) return sink(cone);
      for (int leg : c.hom(apex, d.obj[i])) {
        cone.legs[i] = leg;
        bool ok = true;
        for (int a = 0; a < d.shape.morphism_count() && ok; ++a) {
          int s = d.shape.dom(a), t = d.shape.cod(a);
          if (s > i || t > i || (s != i && t != i)) continue;
          if (cone.legs[s] < 0 || cone.legs[t] < 0) continue;
          ok = c.compose(d.mor[a], cone.legs[s]) == cone.legs[t];
        }
        if (ok && !rec(i + 1)) return false;
      }
      cone.legs[i] = -1;
      return true;
    };
    if (!rec(0)) return;
  }
}

void for_each_cocone(const FinCategory& c, const Diagram& d,
                     const std::function<bool(const Cocone&)>& sink) {
  const int k = d.shape.object_count();
  for (int apex = 0; apex < c.object_count(); ++apex) {
    Cocone cone;
    cone.apex = apex;
    cone.legs.assign(k, -1);
    std::function<bool(int)> rec = [&](int i) -> bool {
      if (i == k) return sink(cone);
      for (int leg : c.hom(d.obj[i], apex)) {
        cone.legs[i] = leg;
        bool ok = true;
        for (int a = 0; a < d.shape.morphism_count() && ok; ++a) {
          int s = d.shape.dom(a), t = d.shape.cod(a);
          if (s > i || t > i || (s != i && t != i)) continue;
          if (cone.legs[s] < 0 || cone.legs[t] < 0) continue;
          ok = c.compose(cone.legs[t], d.mor[a]) == cone.legs[s];
        }
        if (ok && !rec(i + 1)) return false;
      }
      cone.legs[i] = -1;
      return true;
    };
    if (!rec(0)) return;
  }
}

std::vector<Cone> all_cones(const FinCategory& c, const Diagram& d) {
  std::vector<Cone> out;
  for_each_cone(c, d, [&](const Cone& k) {
    out.push_back(k);
    return true;
  });
  return out;
}

std::vector<Cocone> all_cocones(const FinCategory& c, const Diagram& d) {
  std::vector<Cocone> out;
  for_each_cocone(c, d, [&](const Cocone& k) {
    out.push_back(k);
    return true;
  });
  return out;
}

bool is_terminal_cone(const FinCategory& c, const Cone& t, const std::vector<Cone>& cones) {
  const int k = static_cast<int>(t.legs.size());
  for (const Cone& other : cones) {
    int count = 0;
    for (int m : c.hom(other.apex, t.apex)) {
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) ok = c.compose(t.legs[i], m) == other.legs[i];
      if (ok) ++count;
    }
    if (count != 1) return false;
  }
  return true;
}

bool is_initial_cocone(const FinCategory& c, const Cocone& t, const std::vector<Cocone>& cones) {
  const int k = static_cast<int>(t.legs.size());
  for (const Cocone& other : cones) {
    int count = 0;
    for (int m : c.hom(t.apex, other.apex)) {
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) ok = c.compose(m, t.legs[i]) == other.legs[i];
      if (ok) ++count;
    }
    if (count != 1) return false;
  }
  return true;
}

} // namespace

std::optional<Cone> limit(const FinCategory& c, const Diagram& d) {
  auto cones = all_cones(c, d);
  // Cones were generated in (apex, legs) lexicographic order, so the first
  // terminal one is the canonical representative.
  for (const Cone& t : cones)
    if (is_terminal_cone(c, t, cones)) return t;
  return std::nullopt;
}

std::optional<Cocone> colimit(const FinCategory& c, const Diagram& d) {
  auto cones = all_cocones(c, d);
  for (const Cocone& t : cones)
    if (is_initial_cocone(c, t, cones)) return t;
  return std::nullopt;
}

FinCategory shape_empty() {
  CategoryData d;
  d.num_objects = 0;
  return FinCategory::from_data(d);
}

FinCategory shape_discrete_pair() { return make_discrete_category(2); }

FinCategory shape_parallel_pair() {
  CategoryData d;
  d.num_objects = 2;
  d.morphisms = {{0, 0}, {1, 1}, {0, 1}, {0, 1}};
  d.identity = {0, 1};
  d.comp = {{0, 0, 0}, {1, 1, 1}, {2, 0, 2}, {1, 2, 2}, {3, 0, 3}, {1, 3, 3}};
  return FinCategory::from_data(d);
}

FinCategory shape_cospan() {
  CategoryData d;
  d.num_objects = 3;
  d.morphisms = {{0, 0}, {1, 1}, {2, 2}, {0, 2}, {1, 2}};
  d.identity = {0, 1, 2};
  d.comp = {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 0, 3}, {2, 3, 3}, {4, 1, 4}, {2, 4, 4}};
  return FinCategory::from_data(d);
}

FinCategory shape_span() {
  CategoryData d;
  d.num_objects = 3;
  d.morphisms = {{0, 0}, {1, 1}, {2, 2}, {2, 0}, {2, 1}};
  d.identity = {0, 1, 2};
  d.comp = {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {0, 3, 3}, {3, 2, 3}, {1, 4, 4}, {4, 2, 4}};
  return FinCategory::from_data(d);
}

std::optional<int> terminal_object(const FinCategory& c) {
  auto lim = limit(c, make_diagram(c, shape_empty(), {}, {}));
  if (!lim) return std::nullopt;
  return lim->apex;
}

std::optional<int> initial_object(const FinCategory& c) {
  auto col = colimit(c, make_diagram(c, shape_empty(), {}, {}));
  if (!col) return std::nullopt;
  return col->apex;
}

std::optional<Cone> product(const FinCategory& c, int x, int y) {
  auto sh = shape_discrete_pair();
  return limit(c, make_diagram(c, sh, {x, y}, {c.identity(x), c.identity(y)}));
}

std::optional<Cone> equalizer(const FinCategory& c, int u, int v) {
  if (c.dom(u) != c.dom(v) || c.cod(u) != c.cod(v)) throw error("equalizer: pair not parallel");
  auto sh = shape_parallel_pair();
  int x = c.dom(u), y = c.cod(u);
  return limit(c, make_diagram(c, sh, {x, y}, {c.identity(x), c.identity(y), u, v}));
}

std::optional<Cone> pullback(const FinCategory& c, int f, int g) {
  if (c.cod(f) != c.cod(g)) throw error("pullback: cospan endpoints disagree");
  auto sh = shape_cospan();
  int x = c.dom(f), y = c.dom(g), z = c.cod(f);
  return limit(c, make_diagram(c, sh, {x, y, z}, {c.identity(x), c.identity(y), c.identity(z), f, g}));
}

std::optional<Cocone> coequalizer(const FinCategory& c, int u, int v) {
  if (c.dom(u) != c.dom(v) || c.cod(u) != c.cod(v)) throw error("coequalizer: pair not parallel");
  auto sh = shape_parallel_pair();
  int x = c.dom(u), y = c.cod(u);
  return colimit(c, make_diagram(c, sh, {x, y}, {c.identity(x), c.identity(y), u, v}));
}

std::optional<Cocone> pushout(const FinCategory& c, int f, int g) {
  if (c.dom(f) != c.dom(g)) throw error("pushout: span endpoints disagree");
  auto sh = shape_span();
  int a = c.dom(f), x = c.cod(f), y = c.cod(g);
  return colimit(c, make_diagram(c, sh, {x, y, a}, {c.identity(x), c.identity(y), c.identity(a), f, g}));
}

std::optional<KernelPair> kernel_pair(const FinCategory& c, int f) {
  auto pb = pullback(c, f, f);
  if (!pb) return std::nullopt;
  return KernelPair{pb->apex, pb->legs[0], pb->legs[1]};
}

bool is_regular_epi(const FinCategory& c, int f) {
  const int x = c.dom(f);
  for (int u = 0; u < c.morphism_count(); ++u) {
    if (c.cod(u) != x) continue;
    for (int v = 0; v < c.morphism_count(); ++v) {
      if (c.cod(v) != x || c.dom(v) != c.dom(u)) continue;
      if (c.compose(f, u) != c.compose(f, v)) continue;
      // Is f the coequalizer of (u, v)?
      bool good = true;
      for (int q = 0; q < c.morphism_count() && good; ++q) {
        if (c.dom(q) != x) continue;
        if (c.compose(q, u) != c.compose(q, v)) continue;
        int count = 0;
        for (int m : c.hom(c.cod(f), c.cod(q)))
          if (c.compose(m, f) == q) ++count;
        good = count == 1;
      }
      if (good) return true;
    }
  }
  return false;
}

std::vector<EquivRelation> equivalence_relations(const FinCategory& c, int x) {
  auto prod = product(c, x, x);
  if (!prod) throw error("equivalence_relations: no product " + c.object_name(x) + " x " + c.object_name(x));
  const int p = prod->apex;
  const int pi1 = prod->legs[0], pi2 = prod->legs[1];

  // Subobjects of P: monos into P, grouped up to iso over the domain.
  std::vector<int> monos;
  for (int m = 0; m < c.morphism_count(); ++m)
    if (c.cod(m) == p && classify_morphism(c, m).mono) monos.push_back(m);

  std::vector<int> reps;
  std::vector<bool> claimed(monos.size(), false);
  for (size_t i = 0; i < monos.size(); ++i) {
    if (claimed[i]) continue;
    reps.push_back(monos[i]);
    for (size_t j = i + 1; j < monos.size(); ++j) {
      if (claimed[j]) continue;
      // same subobject iff an iso aligns them over P
      bool same = false;
      for (int h : c.hom(c.dom(monos[j]), c.dom(monos[i]))) {
        if (!classify_morphism(c, h).iso) continue;
        if (c.compose(monos[i], h) == monos[j]) {
          same = true;
          break;
        }
      }
      if (same) claimed[j] = true;
    }
  }

  std::vector<EquivRelation> out;
  for (int m : reps) {
    EquivRelation er;
    er.rel_obj = c.dom(m);
    er.mono = m;
    er.p1 = c.compose(pi1, m);
    er.p2 = c.compose(pi2, m);

    er.refl = -1;
    for (int r : c.hom(x, er.rel_obj))
      if (c.compose(er.p1, r) == c.identity(x) && c.compose(er.p2, r) == c.identity(x)) {
        er.refl = r;
        break;
      }
    if (er.refl < 0) continue;

    er.sym = -1;
    for (int s : c.hom(er.rel_obj, er.rel_obj))
      if (c.compose(er.p1, s) == er.p2 && c.compose(er.p2, s) == er.p1) {
        er.sym = s;
        break;
      }
    if (er.sym < 0) continue;

    auto pb = pullback(c, er.p2, er.p1);
    if (!pb)
      throw error("equivalence_relations: missing pullback R x_X R over " + c.object_name(x));
    er.pb_obj = pb->apex;
    er.q1 = pb->legs[0];
    er.q2 = pb->legs[1];
    er.trans = -1;
    for (int t : c.hom(er.pb_obj, er.rel_obj))
      if (c.compose(er.p1, t) == c.compose(er.p1, er.q1) &&
          c.compose(er.p2, t) == c.compose(er.p2, er.q2)) {
        er.trans = t;
        break;
      }
    if (er.trans < 0) continue;

    out.push_back(er);
  }
  return out;
}

ClassifyResult classify(const FinCategory& c) {
  ClassifyResult r;
  r.is_lex = true;
  if (!terminal_object(c)) {
    r.is_lex = false;
    r.detail = "no terminal object";
  }
  for (int x = 0; x < c.object_count() && r.is_lex; ++x)
    for (int y = 0; y < c.object_count() && r.is_lex; ++y)
      if (!product(c, x, y)) {
        r.is_lex = false;
        r.detail = "missing product " + c.object_name(x) + " x " + c.object_name(y);
      }
  for (int u = 0; u < c.morphism_count() && r.is_lex; ++u)
    for (int v = 0; v < c.morphism_count() && r.is_lex; ++v) {
      if (c.dom(v) != c.dom(u) || c.cod(v) != c.cod(u)) continue;
      if (!equalizer(c, u, v)) {
        r.is_lex = false;
        r.detail = "missing equalizer of (" + c.morphism_name(u) + ", " + c.morphism_name(v) + ")";
      }
    }
  if (!r.is_lex) return r;

  r.is_regular = true;
  for (int f = 0; f < c.morphism_count() && r.is_regular; ++f) {
    auto kp = kernel_pair(c, f);
    if (!kp) {
      r.is_regular = false;
      r.detail = "missing kernel pair of " + c.morphism_name(f);
      break;
    }
    if (!coequalizer(c, kp->p1, kp->p2)) {
      r.is_regular = false;
      r.detail = "missing coequalizer of the kernel pair of " + c.morphism_name(f);
    }
  }
  for (int f = 0; f < c.morphism_count() && r.is_regular; ++f) {
    if (!is_regular_epi(c, f)) continue;
    for (int g = 0; g < c.morphism_count() && r.is_regular; ++g) {
      if (c.cod(g) != c.cod(f)) continue;
      auto pb = pullback(c, f, g);
      if (!pb) {
        r.is_regular = false;
        r.detail = "missing pullback of " + c.morphism_name(f) + " along " + c.morphism_name(g);
        break;
      }
      if (!is_regular_epi(c, pb->legs[1])) {
        r.is_regular = false;
        r.detail = "regular epi " + c.morphism_name(f) + " not stable along " + c.morphism_name(g);
      }
    }
  }
  if (!r.is_regular) return r;

  r.is_exact = true;
  for (int x = 0; x < c.object_count() && r.is_exact; ++x) {
    for (const auto& er : equivalence_relations(c, x)) {
      bool realized = false;
      for (int f = 0; f < c.morphism_count() && !realized; ++f) {
        if (c.dom(f) != x) continue;
        auto kp = kernel_pair(c, f);
        if (!kp) continue;
        for (int i : c.hom(kp->obj, er.rel_obj)) {
          if (!classify_morphism(c, i).iso) continue;
          if (c.compose(er.p1, i) == kp->p1 && c.compose(er.p2, i) == kp->p2) {
            realized = true;
            break;
          }
        }
      }
      if (!realized) {
        r.is_exact = false;
        r.detail = "equivalence relation on " + c.object_name(x) + " is not a kernel pair";
        break;
      }
    }
  }
  return r;
}

bool is_regular_functor(const FinFunctor& F) {
  const FinCategory& a = F.src();
  const FinCategory& b = F.tgt();
  if (!classify(a).is_regular || !classify(b).is_regular)
    throw error("is_regular_functor: both categories must be regular");

  auto t = terminal_object(a);
  int ft = F.on_object(*t);
  for (int z = 0; z < b.object_count(); ++z)
    if (b.hom(z, ft).size() != 1) return false;

  for (int x = 0; x < a.object_count(); ++x)
    for (int y = 0; y < a.object_count(); ++y) {
      auto pr = product(a, x, y);
      int fp = F.on_object(pr->apex);
      int fp1 = F.on_morphism(pr->legs[0]), fp2 = F.on_morphism(pr->legs[1]);
      for (int z = 0; z < b.object_count(); ++z)
        for (int u : b.hom(z, F.on_object(x)))
          for (int v : b.hom(z, F.on_object(y))) {
            int count = 0;
            for (int m : b.hom(z, fp))
              if (b.compose(fp1, m) == u && b.compose(fp2, m) == v) ++count;
            if (count != 1) return false;
          }
    }

  for (int u = 0; u < a.morphism_count(); ++u)
    for (int v = 0; v < a.morphism_count(); ++v) {
      if (a.dom(v) != a.dom(u) || a.cod(v) != a.cod(u)) continue;
      auto eq = equalizer(a, u, v);
      int fe = F.on_morphism(eq->legs[0]);
      int fu = F.on_morphism(u), fv = F.on_morphism(v);
      if (b.compose(fu, fe) != b.compose(fv, fe)) return false;
      for (int z = 0; z < b.object_count(); ++z)
        for (int w : b.hom(z, b.dom(fu))) {
          if (b.compose(fu, w) != b.compose(fv, w)) continue;
          int count = 0;
          for (int m : b.hom(z, b.dom(fe)))
            if (b.compose(fe, m) == w) ++count;
          if (count != 1) return false;
        }
    }

  for (int f = 0; f < a.morphism_count(); ++f)
    if (is_regular_epi(a, f) && !is_regular_epi(b, F.on_morphism(f))) return false;
  return true;
}

} // namespace catlogic
