#include "catlogic/cli.hpp"

#include "catlogic/category_io.hpp"
#include "catlogic/corpus.hpp"
#include "catlogic/fincat.hpp"
#include "catlogic/limits.hpp"
#include "catlogic/modpp.hpp"
#include "catlogic/oracles.hpp"
#include "catlogic/ppcat.hpp"
#include "catlogic/presheaf.hpp"
#include "catlogic/reglogic.hpp"
#include "catlogic/sites.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

namespace catlogic {
namespace {

using nlohmann::ordered_json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw error(path + ": cannot write");
  f << text;
  if (!f.flush()) throw error(path + ": write failed");
}

ordered_json verdict_json(const ClassifyResult& v) {
  ordered_json j;
  j["lex"] = v.is_lex;
  j["regular"] = v.is_regular;
  j["exact"] = v.is_exact;
  return j;
}

// ---- classify / complete --------------------------------------------------

void cmd_classify(const std::string& file, RunReport& rep) {
  FinCategory c = load_category_json(slurp(file), file);
  ClassifyResult v = classify(c);
  ordered_json d = verdict_json(v);
  if (!v.detail.empty()) d["detail"] = v.detail;
  d["objects"] = c.object_count();
  d["morphisms"] = c.morphism_count();
  rep.add("classify", true, d);
}

void cmd_complete(const std::string& file, const std::string& out_path, RunReport& rep) {
  FinCategory c = load_category_json(slurp(file), file);
  Completion comp = ex_lex_completion(c);
  ordered_json doc = ordered_json::parse(category_to_json(comp.category));
  ordered_json unit_obj = ordered_json::object(), unit_mor = ordered_json::object();
  for (int x = 0; x < c.object_count(); ++x)
    unit_obj[c.object_name(x)] = comp.category.object_name(comp.unit_obj[x]);
  for (int f = 0; f < c.morphism_count(); ++f)
    unit_mor[c.morphism_name(f)] = comp.category.morphism_name(comp.unit_mor[f]);
  doc["unit_objects"] = unit_obj;
  doc["unit_morphisms"] = unit_mor;

  ordered_json d;
  d["objects"] = comp.category.object_count();
  d["morphisms"] = comp.category.morphism_count();
  d["verdict"] = verdict_json(classify(comp.category));
  if (out_path.empty())
    d["completion"] = doc;
  else {
    spill(out_path, doc.dump(2) + "\n");
    d["written"] = out_path;
  }
  rep.add("complete", true, d);
}

// ---- site -----------------------------------------------------------------

bool action_bijective(const CovFunctor& f, int h) {
  int a = f.base().dom(h), b = f.base().cod(h);
  if (f.size(a) != f.size(b)) return false;
  std::vector<char> hit(static_cast<size_t>(f.size(b)), 0);
  for (int e = 0; e < f.size(a); ++e) {
    int v = f.apply(h, e);
    if (hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

void cmd_sheafcheck(const std::string& site_file, const std::string& functor_file,
                    RunReport& rep) {
  Site s = load_site_json(slurp(site_file), site_file);
  CovFunctor f = load_functor_json(&s.base, slurp(functor_file), functor_file);
  bool ok = is_sheaf(s, f);
  ordered_json d;
  d["site"] = site_file;
  d["functor"] = functor_file;
  if (!ok) {
    for (const auto& at : s.covers)
      for (int h : at)
        if (!action_bijective(f, h)) {
          ordered_json ce;
          ce["cover"] = s.base.morphism_name(h);
          ce["reason"] = "F(h) is not bijective";
          ce["dom_size"] = f.size(s.base.dom(h));
          ce["cod_size"] = f.size(s.base.cod(h));
          d["counterexample"] = ce;
          goto found;
        }
  found:;
  }
  rep.add("sheafcheck", ok, d);
}

void cmd_points(const std::string& site_file, RunReport& rep) {
  Site s = load_site_json(slurp(site_file), site_file);
  SitePoints p = enumerate_points(s);
  ordered_json pts = ordered_json::array();
  for (std::uint32_t mask : p.masks) {
    ordered_json one = ordered_json::array();
    for (int x = 0; x < s.base.object_count(); ++x)
      if (mask >> x & 1u) one.push_back(s.base.object_name(x));
    pts.push_back(one);
  }
  ordered_json d;
  d["site"] = site_file;
  d["count"] = p.masks.size();
  d["points"] = pts;
  rep.add("points", true, d);
}

// ---- logic ----------------------------------------------------------------

RegularTheory load_theory(const std::string& file) {
  try {
    return parse_theory(slurp(file));
  } catch (const error& e) {
    throw error(file + ": " + e.what());
  }
}

/// First (sequent, assignment) with lhs true and rhs false, as a report
/// payload; null when the structure models the theory.
ordered_json models_counterexample(const RegularTheory& t, const FinStructure& m) {
  for (size_t i = 0; i < t.sequents.size(); ++i) {
    const Sequent& seq = t.sequents[i];
    std::vector<int> sizes;
    for (const std::string& v : seq.context)
      sizes.push_back(m.sort_sizes[seq.var_sorts.at(v)]);
    std::vector<int> odo(seq.context.size(), 0);
    bool more = true;
    if (std::find(sizes.begin(), sizes.end(), 0) != sizes.end()) more = false;
    while (more) {
      std::map<std::string, int> asg;
      for (size_t k = 0; k < odo.size(); ++k) asg[seq.context[k]] = odo[k];
      if (eval(t.sig, m, seq.lhs, seq.var_sorts, asg) &&
          !eval(t.sig, m, seq.rhs, seq.var_sorts, asg)) {
        ordered_json ce;
        ce["sequent_index"] = i;
        ce["sequent"] = print_formula(seq.lhs, t.sig) + " => " + print_formula(seq.rhs, t.sig);
        ordered_json aj = ordered_json::object();
        for (const auto& [v, val] : asg) aj[v] = val;
        ce["assignment"] = aj;
        return ce;
      }
      int k = static_cast<int>(odo.size()) - 1;
      for (; k >= 0; --k) {
        if (++odo[k] < sizes[k]) break;
        odo[k] = 0;
      }
      if (k < 0) more = false;
    }
  }
  return nullptr;
}

void cmd_models(const std::string& theory_file, const std::string& struct_file,
                RunReport& rep) {
  RegularTheory t = load_theory(theory_file);
  FinStructure m = load_structure_json(t.sig, slurp(struct_file), struct_file);
  bool ok = models(t, m);
  ordered_json d;
  d["theory"] = theory_file;
  d["structure"] = struct_file;
  if (!ok) d["counterexample"] = models_counterexample(t, m);
  rep.add("models", ok, d);
}

void cmd_normalize(const std::string& theory_file, RunReport& rep) {
  RegularTheory t = load_theory(theory_file);
  int rewritten = 0;
  for (Sequent& seq : t.sequents) {
    if (seq.auto_fun) continue; // the printer skips these; a reparse regenerates them
    std::map<std::string, int> vs = seq.var_sorts;
    seq.lhs = pp_normalize(seq.lhs, vs).as_formula();
    seq.rhs = pp_normalize(seq.rhs, vs).as_formula();
    seq.var_sorts = std::move(vs);
    ++rewritten;
  }
  ordered_json d;
  d["theory"] = theory_file;
  d["sequents"] = rewritten;
  d["normalized"] = print_theory(t);
  rep.add("normalize", true, d);
}

// ---- pp -------------------------------------------------------------------

FiniteModule resolve_module(const FiniteRing& r, const std::string& expr,
                            const std::string& file) {
  if (!file.empty()) return load_module_json(r, slurp(file), file);
  return module_by_expr(r, expr);
}

void cmd_pp_solve(const std::string& ring, const std::string& module_expr,
                  const std::string& module_file, const std::string& formula,
                  RunReport& rep) {
  FiniteRing r = ring_by_name(ring);
  FiniteModule m = resolve_module(r, module_expr, module_file);
  LinearPp phi = parse_pp_text(r, formula);
  auto sols = pp_solution_set(m, phi);
  ordered_json d;
  d["ring"] = ring;
  d["module"] = module_file.empty() ? module_expr : module_file;
  d["module_size"] = m.size();
  d["formula"] = pp_to_text(phi);
  d["count"] = sols.size();
  d["solutions"] = sols;
  rep.add("solve", true, d);
}

void cmd_pp_implies(const std::string& ring, const std::string& phi_text,
                    const std::string& psi_text, RunReport& rep) {
  FiniteRing r = ring_by_name(ring);
  LinearPp phi = parse_pp_text(r, phi_text);
  LinearPp psi = parse_pp_text(r, psi_text);
  if (phi.n != psi.n)
    throw error("pp implies: free arities differ (" + std::to_string(phi.n) + " vs " +
                std::to_string(psi.n) + ")");
  bool ok = pp_implies(r, phi, psi);
  ordered_json d;
  d["ring"] = ring;
  d["phi"] = pp_to_text(phi);
  d["psi"] = pp_to_text(psi);
  d["implies"] = ok;
  if (!ok) {
    // Witness: a module and tuple satisfying phi but not psi.  The corpus
    // usually has a small one; the free realization of phi always works.
    ordered_json ce;
    bool found = false;
    for (const FiniteModule& m : module_corpus(r, 16)) {
      auto in_phi = pp_solution_set(m, phi);
      auto in_psi = pp_solution_set(m, psi);
      for (const auto& t : in_phi)
        if (!std::binary_search(in_psi.begin(), in_psi.end(), t)) {
          ce["module"] = ordered_json::parse(module_to_json(m));
          ce["tuple"] = t;
          found = true;
          break;
        }
      if (found) break;
    }
    if (!found) {
      FreeRealization fr = free_realization(r, phi);
      ce["module"] = ordered_json::parse(module_to_json(fr.module));
      ce["tuple"] = fr.gens;
    }
    ce["replay"] = "catlogic pp solve --ring " + ring +
                   " --module-file <module> \"" + pp_to_text(psi) +
                   "\"  # the tuple is absent";
    d["counterexample"] = ce;
  }
  rep.add("implies", ok, d);
}

std::vector<PpPair> build_pairs(const FiniteRing& r,
                                const std::vector<std::string>& formulas) {
  if (formulas.empty() || formulas.size() % 2 != 0)
    throw error("pp pairs: expected an even number of formulas (phi psi ...)");
  std::vector<PpPair> pairs;
  for (size_t i = 0; i < formulas.size(); i += 2)
    pairs.emplace_back(r, parse_pp_text(r, formulas[i]), parse_pp_text(r, formulas[i + 1]));
  return pairs;
}

void cmd_pp_member(const std::string& ring, const std::string& module_expr,
                   const std::string& module_file,
                   const std::vector<std::string>& formulas, RunReport& rep) {
  FiniteRing r = ring_by_name(ring);
  FiniteModule m = resolve_module(r, module_expr, module_file);
  std::vector<PpPair> pairs = build_pairs(r, formulas);
  bool ok = defclass_membership(r, pairs, m);
  ordered_json d;
  d["ring"] = ring;
  d["module"] = module_file.empty() ? module_expr : module_file;
  d["pairs"] = pairs.size();
  if (!ok) {
    for (size_t i = 0; i < pairs.size(); ++i) {
      auto in_phi = pp_solution_set(m, pairs[i].phi);
      auto in_psi = pp_solution_set(m, pairs[i].psi);
      if (in_phi != in_psi) {
        ordered_json ce;
        ce["pair_index"] = i;
        ce["phi"] = pp_to_text(pairs[i].phi);
        ce["psi"] = pp_to_text(pairs[i].psi);
        for (const auto& t : in_psi)
          if (!std::binary_search(in_phi.begin(), in_phi.end(), t)) {
            ce["tuple"] = t; // satisfies psi but not phi
            break;
          }
        d["counterexample"] = ce;
        break;
      }
    }
  }
  rep.add("member", ok, d);
}

void cmd_pp_audit(const std::string& ring, int max_size,
                  const std::vector<std::string>& formulas, RunReport& rep) {
  FiniteRing r = ring_by_name(ring);
  std::vector<PpPair> pairs = build_pairs(r, formulas);
  std::vector<FiniteModule> modules = module_corpus(r, max_size);
  ClosureReport cr = closure_audit(r, pairs, modules);
  ordered_json d;
  d["ring"] = ring;
  d["pairs"] = pairs.size();
  d["modules"] = modules.size();
  if (!cr.ok) d["violations"] = cr.violations;
  rep.add("audit", cr.ok, d);
}

// ---- ppcat scripts --------------------------------------------------------

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

/// Splits "phi, psi" at the unique bracket-depth-0 comma.
std::pair<std::string, std::string> split_pair_args(const std::string& inner) {
  int depth = 0;
  int at = -1;
  for (size_t i = 0; i < inner.size(); ++i) {
    char c = inner[i];
    if (c == '[' || c == '(') ++depth;
    else if (c == ']' || c == ')') --depth;
    else if (c == ',' && depth == 0) {
      if (at >= 0) throw error("expected exactly two comma-separated formulas");
      at = static_cast<int>(i);
    }
  }
  if (at < 0) throw error("expected exactly two comma-separated formulas");
  return {strip(inner.substr(0, at)), strip(inner.substr(at + 1))};
}

ordered_json pair_json(const PpObject& x) {
  ordered_json j;
  j["phi"] = pp_to_text(x.pair.phi);
  j["psi"] = pp_to_text(x.pair.psi);
  j["arity"] = x.arity();
  return j;
}

void run_ppc_script(const std::string& file, RunReport& rep) {
  static const std::regex re_ring(R"(^ring\s+(\S+)$)");
  static const std::regex re_obj(R"(^obj\s+(\w+)\s*=\s*pair\((.*)\)$)");
  static const std::regex re_mor(R"(^mor\s+(\w+)\s*:\s*(\w+)\s*->\s*(\w+)\s*=\s*graph\((.*)\)$)");
  static const std::regex re_kernel(R"(^(ker|coker)\s+(\w+)$)");
  static const std::regex re_ev(R"(^ev\s+(\S+)\s+(\w+)$)");

  std::istringstream in(slurp(file));
  bool have_ring = false;
  FiniteRing ring = FiniteRing::cyclic(2);
  std::map<std::string, PpObject> objects;
  std::map<std::string, PpMorphism> morphisms;

  std::string raw;
  for (int ln = 1; std::getline(in, raw); ++ln) {
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = strip(line);
    if (line.empty()) continue;
    try {
      std::smatch m;
      if (std::regex_match(line, m, re_ring)) {
        if (have_ring) throw error("ring already declared");
        ring = ring_by_name(m[1]);
        have_ring = true;
        ordered_json d;
        d["size"] = ring.size();
        rep.add("ring " + m[1].str(), true, d);
        continue;
      }
      if (!have_ring) throw error("no ring declared (start the script with `ring <name>`)");
      if (std::regex_match(line, m, re_obj)) {
        auto [phi_text, psi_text] = split_pair_args(m[2]);
        PpObject x(ring, parse_pp_text(ring, phi_text), parse_pp_text(ring, psi_text));
        ordered_json d = pair_json(x);
        objects.insert_or_assign(m[1], x);
        rep.add("obj " + m[1].str(), true, d);
      } else if (std::regex_match(line, m, re_mor)) {
        auto src = objects.find(m[2]);
        auto tgt = objects.find(m[3]);
        if (src == objects.end()) throw error("unknown object " + m[2].str());
        if (tgt == objects.end()) throw error("unknown object " + m[3].str());
        PpMorphism f(ring, src->second, tgt->second, parse_pp_text(ring, m[4]));
        ordered_json d;
        d["src"] = m[2].str();
        d["tgt"] = m[3].str();
        d["rho"] = pp_to_text(f.rho);
        morphisms.insert_or_assign(m[1], f);
        rep.add("mor " + m[1].str(), true, d);
      } else if (std::regex_match(line, m, re_kernel)) {
        auto f = morphisms.find(m[2]);
        if (f == morphisms.end()) throw error("unknown morphism " + m[2].str());
        ordered_json d;
        if (m[1] == "ker") {
          KernelData k = kernel(ring, f->second);
          d["object"] = pair_json(k.obj);
          d["inclusion"] = pp_to_text(k.incl.rho);
        } else {
          CokernelData q = cokernel(ring, f->second);
          d["object"] = pair_json(q.obj);
          d["projection"] = pp_to_text(q.proj.rho);
        }
        rep.add(m[1].str() + " " + m[2].str(), true, d);
      } else if (std::regex_match(line, m, re_ev)) {
        FiniteModule mod = module_by_expr(ring, m[1]);
        ordered_json d;
        d["module"] = m[1].str();
        d["module_size"] = mod.size();
        if (auto f = morphisms.find(m[2]); f != morphisms.end()) {
          EvHom h = ev_morphism(mod, f->second);
          d["src_order"] = h.src_classes;
          d["tgt_order"] = h.tgt_classes;
          d["map"] = h.table;
        } else if (auto x = objects.find(m[2]); x != objects.end()) {
          EvGroup g = ev_object(mod, x->second);
          d["order"] = g.order;
        } else {
          throw error("unknown name " + m[2].str());
        }
        rep.add("ev " + m[1].str() + " " + m[2].str(), true, d);
      } else {
        throw error("unrecognized statement: " + line);
      }
    } catch (const error& e) {
      throw error(file + ":" + std::to_string(ln) + ": " + e.what());
    }
  }
  if (!have_ring) throw error(file + ": empty script (no ring declared)");
}

// ---- oracle suite ---------------------------------------------------------

LinearPp random_linear(const FiniteRing& r, std::mt19937_64& rng) {
  LinearPp f;
  f.n = 1 + static_cast<int>(rng() % 2);
  f.m = static_cast<int>(rng() % 2);
  int rows = 1 + static_cast<int>(rng() % 2);
  f.rows.assign(rows, std::vector<int>(static_cast<size_t>(f.n + f.m), 0));
  for (auto& row : f.rows)
    for (int& e : row) e = static_cast<int>(rng() % r.size());
  return f;
}

void suite_classify(std::uint64_t seed, int budget, RunReport& rep) {
  auto corpus = classifier_corpus(3, 8, seed, std::min(budget, 200));
  int agree = 0;
  bool ok = true;
  ordered_json d;
  d["instances"] = corpus.size();
  for (const FinCategory& c : corpus) {
    ClassifyResult a = classify(c);
    ClassifyResult b = classify_oracle(c);
    if (a.is_lex == b.is_lex && a.is_regular == b.is_regular && a.is_exact == b.is_exact)
      ++agree;
    else if (ok) {
      ok = false;
      ordered_json ce;
      ce["category"] = ordered_json::parse(category_to_json(c));
      ce["classify"] = verdict_json(a);
      ce["oracle"] = verdict_json(b);
      d["counterexample"] = ce;
    }
  }
  d["agreements"] = agree;
  rep.add("classify-vs-oracle", ok, d);
}

void suite_pp(std::mt19937_64& rng, int budget, RunReport& rep) {
  const std::pair<const char*, FiniteRing> rings[] = {
      {"z4", FiniteRing::cyclic(4)}, {"f2x2", FiniteRing::f2x2()}, {"z6", FiniteRing::cyclic(6)}};

  int imp_total = 0, imp_agree = 0;
  int sol_total = 0, sol_agree = 0;
  ordered_json imp_d, sol_d;
  bool imp_ok = true, sol_ok = true;
  for (const auto& [name, r] : rings) {
    auto corpus = module_corpus(r, 12);
    for (int i = 0; i < budget; ++i) {
      LinearPp phi = random_linear(r, rng), psi = random_linear(r, rng);
      psi.n = phi.n; // align free arities
      for (auto& row : psi.rows) row.resize(static_cast<size_t>(psi.n + psi.m), 0);
      ++imp_total;
      bool a = pp_implies(r, phi, psi);
      bool b = pp_implies_sweep_oracle(r, phi, psi, 16);
      if (a == b)
        ++imp_agree;
      else if (imp_ok) {
        imp_ok = false;
        ordered_json ce;
        ce["ring"] = name;
        ce["phi"] = pp_to_text(phi);
        ce["psi"] = pp_to_text(psi);
        ce["implies"] = a;
        ce["sweep"] = b;
        imp_d["counterexample"] = ce;
      }

      LinearPp theta = random_linear(r, rng);
      const FiniteModule& m = corpus[rng() % corpus.size()];
      ++sol_total;
      if (pp_solution_set(m, theta) == pp_sweep_oracle(m, theta))
        ++sol_agree;
      else if (sol_ok) {
        sol_ok = false;
        ordered_json ce;
        ce["ring"] = name;
        ce["formula"] = pp_to_text(theta);
        ce["module"] = ordered_json::parse(module_to_json(m));
        sol_d["counterexample"] = ce;
      }
    }
  }
  imp_d["instances"] = imp_total;
  imp_d["agreements"] = imp_agree;
  sol_d["instances"] = sol_total;
  sol_d["agreements"] = sol_agree;
  rep.add("pp-implies-vs-sweep", imp_ok, imp_d);
  rep.add("pp-solve-vs-sweep", sol_ok, sol_d);
}

void suite_sheaf(std::mt19937_64& rng, int budget, RunReport& rep) {
  int total = 0, agree = 0;
  bool ok = true;
  ordered_json d;
  std::vector<Site> sites;
  for (const FinCategory& base : all_lattices(3)) {
    sites.push_back(Site{base, {}});
    sites.back().covers.assign(static_cast<size_t>(base.object_count()), {});
    for (int x = 0; x < base.object_count(); ++x)
      sites.back().covers[x].push_back(base.identity(x)); // trivial coverage
    std::vector<int> gen;
    for (int f = 0; f < base.morphism_count(); ++f)
      if (rng() % 3 == 0) gen.push_back(f);
    sites.push_back(coverage_from_injectives(base, saturate(base, gen)));
  }
  for (Site& s : sites) {
    auto tables = all_cov_functor_tables(s.base, 2);
    int want = std::max(1, budget / static_cast<int>(sites.size()));
    for (int i = 0; i < want && !tables.empty(); ++i) {
      const FunctorTables& t = tables[rng() % tables.size()];
      CovFunctor f(&s.base, t.sizes, t.action);
      ++total;
      bool a = is_sheaf(s, f);
      bool b = sheaf_amalgamation_oracle(s, f);
      if (a == b)
        ++agree;
      else if (ok) {
        ok = false;
        ordered_json ce;
        ce["site"] = ordered_json::parse(site_to_json(s));
        ce["sizes"] = t.sizes;
        ce["action"] = t.action;
        ce["is_sheaf"] = a;
        ce["amalgamation"] = b;
        d["counterexample"] = ce;
      }
    }
  }
  d["instances"] = total;
  d["agreements"] = agree;
  rep.add("sheaf-vs-amalgamation", ok, d);
}

void suite_points(RunReport& rep) {
  auto lattices = all_lattices(4);
  auto orders = all_lattice_orders(4);
  int agree = 0;
  bool ok = true;
  ordered_json d;
  d["instances"] = lattices.size();
  for (size_t i = 0; i < lattices.size(); ++i) {
    Site s{lattices[i], {}};
    s.covers.assign(static_cast<size_t>(s.base.object_count()), {});
    for (int x = 0; x < s.base.object_count(); ++x)
      s.covers[x].push_back(s.base.identity(x));
    std::vector<std::uint32_t> pts = enumerate_points(s).masks;
    std::vector<std::uint32_t> filters = filter_oracle(orders[i]);
    std::sort(pts.begin(), pts.end());
    std::sort(filters.begin(), filters.end());
    if (pts == filters)
      ++agree;
    else if (ok) {
      ok = false;
      ordered_json ce;
      ce["lattice_index"] = i;
      ce["points"] = pts;
      ce["filters"] = filters;
      d["counterexample"] = ce;
    }
  }
  d["agreements"] = agree;
  rep.add("points-vs-filters", ok, d);
}

} // namespace

RunReport oracle_suite(std::uint64_t seed, int budget) {
  RunReport rep;
  rep.command = "catlogic oracle --seed " + std::to_string(seed) + " --budget " +
                std::to_string(budget);
  if (budget <= 0) return rep;
  std::mt19937_64 rng(seed);
  suite_classify(seed, budget, rep);
  suite_pp(rng, budget, rep);
  suite_sheaf(rng, budget, rep);
  suite_points(rep);
  std::sort(rep.checks.begin(), rep.checks.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
  return rep;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite categories, regular logic and pp-module checks", "catlogic"};
  app.require_subcommand(0, 1);
  app.fallthrough(); // --seed/--out/--format may follow the subcommand

  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out_path;
  std::string format = "text";
  app.add_option("--seed", seed, "seed for all randomized checks");
  app.add_option("--jobs", jobs, "worker pool size; checks also run fine inline")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "write the primary output to a file instead of stdout");
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "text"}));

  std::string classify_file;
  CLI::App* sc_classify =
      app.add_subcommand("classify", "lex/regular/exact verdict for a category file");
  sc_classify->add_option("category", classify_file, "category JSON file")->required();

  std::string complete_file;
  CLI::App* sc_complete = app.add_subcommand(
      "complete", "ex/lex completion of a lex category (--out receives the completion)");
  sc_complete->add_option("category", complete_file, "category JSON file")->required();

  CLI::App* sc_site = app.add_subcommand("site", "sites: sheaf checks and points");
  sc_site->require_subcommand(1);
  std::string sheaf_site, sheaf_functor;
  CLI::App* sc_sheaf =
      sc_site->add_subcommand("sheafcheck", "is the functor a sheaf for the site?");
  sc_sheaf->add_option("site", sheaf_site, "site JSON file")->required();
  sc_sheaf->add_option("functor", sheaf_functor, "functor JSON file")->required();
  std::string points_site;
  CLI::App* sc_points =
      sc_site->add_subcommand("points", "continuous subterminal points of the site");
  sc_points->add_option("site", points_site, "site JSON file")->required();

  CLI::App* sc_logic =
      app.add_subcommand("logic", "regular theories: satisfaction and pp normal form");
  sc_logic->require_subcommand(1);
  std::string models_theory, models_struct;
  CLI::App* sc_models =
      sc_logic->add_subcommand("models", "does the structure satisfy the theory?");
  sc_models->add_option("theory", models_theory, ".rth theory file")->required();
  sc_models->add_option("structure", models_struct, "structure JSON file")->required();
  std::string norm_theory;
  CLI::App* sc_norm =
      sc_logic->add_subcommand("normalize", "rewrite every sequent in prenex pp form");
  sc_norm->add_option("theory", norm_theory, ".rth theory file")->required();

  CLI::App* sc_pp = app.add_subcommand("pp", "pp formulas over a finite ring");
  sc_pp->require_subcommand(1);
  std::string pp_ring;
  std::string pp_module = "R", pp_module_file;
  std::string solve_formula, imp_phi, imp_psi;
  std::vector<std::string> member_formulas, audit_formulas;
  int audit_max = 8;

  CLI::App* sc_solve = sc_pp->add_subcommand("solve", "solution set of a formula in a module");
  sc_solve->add_option("--ring", pp_ring, "ring name: z<n> or f2x2")->required();
  sc_solve->add_option("--module", pp_module, "module expression: R or R/(a,b,...)");
  sc_solve->add_option("--module-file", pp_module_file, "module JSON file (overrides --module)");
  sc_solve->add_option("formula", solve_formula, "pp formula")->required();

  CLI::App* sc_implies =
      sc_pp->add_subcommand("implies", "does phi entail psi over all modules?");
  sc_implies->add_option("--ring", pp_ring, "ring name: z<n> or f2x2")->required();
  sc_implies->add_option("phi", imp_phi, "pp formula")->required();
  sc_implies->add_option("psi", imp_psi, "pp formula")->required();

  CLI::App* sc_member =
      sc_pp->add_subcommand("member", "is the module in the definable class of the pairs?");
  sc_member->add_option("--ring", pp_ring, "ring name: z<n> or f2x2")->required();
  sc_member->add_option("--module", pp_module, "module expression: R or R/(a,b,...)");
  sc_member->add_option("--module-file", pp_module_file, "module JSON file (overrides --module)");
  sc_member->add_option("formulas", member_formulas, "pp pairs: phi1 psi1 [phi2 psi2 ...]")
      ->required();

  CLI::App* sc_audit = sc_pp->add_subcommand(
      "audit", "closure audit of the pairs' definable class over the module corpus");
  sc_audit->add_option("--ring", pp_ring, "ring name: z<n> or f2x2")->required();
  sc_audit->add_option("--max-size", audit_max, "corpus module size bound");
  sc_audit->add_option("formulas", audit_formulas, "pp pairs: phi1 psi1 [phi2 psi2 ...]")
      ->required();

  CLI::App* sc_ppcat = app.add_subcommand("ppcat", "pp-pair category batch scripts");
  sc_ppcat->require_subcommand(1);
  std::string ppc_file;
  CLI::App* sc_run = sc_ppcat->add_subcommand("run", "execute a .ppc script");
  sc_run->add_option("script", ppc_file, ".ppc script file")->required();

  int budget = 64;
  CLI::App* sc_oracle =
      app.add_subcommand("oracle", "cross-check implementations against independent oracles");
  sc_oracle->add_option("--budget", budget, "instances per oracle pair (0 = empty report)")
      ->check(CLI::NonNegativeNumber);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* at = &app;
    while (!at->get_subcommands().empty()) at = at->get_subcommands().front();
    out << at->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "catlogic: " << e.what() << "\n";
    return 2;
  }

  RunReport rep;
  rep.command = "catlogic";
  for (const std::string& a : args) {
    rep.command += " ";
    if (a.find_first_of(" \t\"") == std::string::npos)
      rep.command += a;
    else {
      rep.command += '"';
      for (char ch : a) {
        if (ch == '"' || ch == '\\') rep.command += '\\';
        rep.command += ch;
      }
      rep.command += '"';
    }
  }
  bool complete_claims_out = false;
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (sc_classify->parsed()) {
      cmd_classify(classify_file, rep);
    } else if (sc_complete->parsed()) {
      cmd_complete(complete_file, out_path, rep);
      complete_claims_out = !out_path.empty();
    } else if (sc_sheaf->parsed()) {
      cmd_sheafcheck(sheaf_site, sheaf_functor, rep);
    } else if (sc_points->parsed()) {
      cmd_points(points_site, rep);
    } else if (sc_models->parsed()) {
      cmd_models(models_theory, models_struct, rep);
    } else if (sc_norm->parsed()) {
      cmd_normalize(norm_theory, rep);
    } else if (sc_solve->parsed()) {
      cmd_pp_solve(pp_ring, pp_module, pp_module_file, solve_formula, rep);
    } else if (sc_implies->parsed()) {
      cmd_pp_implies(pp_ring, imp_phi, imp_psi, rep);
    } else if (sc_member->parsed()) {
      cmd_pp_member(pp_ring, pp_module, pp_module_file, member_formulas, rep);
    } else if (sc_audit->parsed()) {
      cmd_pp_audit(pp_ring, audit_max, audit_formulas, rep);
    } else if (sc_run->parsed()) {
      run_ppc_script(ppc_file, rep);
    } else if (sc_oracle->parsed()) {
      std::string echo = rep.command;
      rep = oracle_suite(seed, budget);
      rep.command = echo;
    } else {
      out << app.help();
      return 0;
    }
  } catch (const error& e) {
    err << "catlogic: " << e.what() << "\n";
    return 2;
  }
  rep.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  (void)jobs; // checks share nothing; a pool of 1 already meets the contract

  int code = rep.all_ok() ? 0 : 1;
  std::string rendered = rep.render(format);
  try {
    if (!out_path.empty() && !complete_claims_out)
      spill(out_path, rendered);
    else
      out << rendered;
  } catch (const error& e) {
    err << "catlogic: " << e.what() << "\n";
    return 2;
  }
  return code;
}

} // namespace catlogic
