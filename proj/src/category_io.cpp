#include "catlogic/category_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace catlogic {

namespace {

using json = nlohmann::ordered_json;

json parse_json(const std::string& text, const std::string& filename) {
  try {
    return json::parse(text);
  } catch (const std::exception& e) {
    throw error(filename + ": " + e.what());
  }
}

// Keyed lookup with the filename folded into the message.
const json& field(const json& j, const char* key, const std::string& filename) {
  auto it = j.find(key);
  if (it == j.end()) throw error(filename + ": missing field \"" + key + "\"");
  return *it;
}

int name_index(const std::map<std::string, int>& ids, const std::string& name,
               const char* what, const std::string& filename) {
  auto it = ids.find(name);
  if (it == ids.end())
    throw error(filename + ": unknown " + what + " \"" + name + "\"");
  return it->second;
}

} // namespace

FinCategory load_category_json(const std::string& text, const std::string& filename) {
  json j = parse_json(text, filename);
  CategoryData d;
  try {
    std::map<std::string, int> obj_ids, mor_ids;
    for (const auto& o : field(j, "objects", filename)) {
      std::string name = o.get<std::string>();
      if (!obj_ids.emplace(name, d.num_objects).second)
        throw error(filename + ": duplicate object \"" + name + "\"");
      d.object_names.push_back(name);
      ++d.num_objects;
    }
    for (const auto& m : field(j, "morphisms", filename)) {
      std::string name = field(m, "id", filename).get<std::string>();
      if (!mor_ids.emplace(name, (int)d.morphisms.size()).second)
        throw error(filename + ": duplicate morphism \"" + name + "\"");
      MorRec rec;
      rec.dom = name_index(obj_ids, field(m, "dom", filename).get<std::string>(),
                           "object", filename);
      rec.cod = name_index(obj_ids, field(m, "cod", filename).get<std::string>(),
                           "object", filename);
      d.morphisms.push_back(rec);
      d.morphism_names.push_back(name);
    }
    d.identity.assign(d.num_objects, -1);
    for (const auto& [obj, mor] : field(j, "identity", filename).items())
      d.identity[name_index(obj_ids, obj, "object", filename)] =
          name_index(mor_ids, mor.get<std::string>(), "morphism", filename);
    for (const auto& t : field(j, "comp", filename)) {
      if (t.size() != 3) throw error(filename + ": comp entries must be [g, f, gf]");
      d.comp.push_back({name_index(mor_ids, t[0].get<std::string>(), "morphism", filename),
                        name_index(mor_ids, t[1].get<std::string>(), "morphism", filename),
                        name_index(mor_ids, t[2].get<std::string>(), "morphism", filename)});
    }
  } catch (const json::exception& e) {
    throw error(filename + ": " + e.what());
  }
  return FinCategory::from_data(d);
}

std::string category_to_json(const FinCategory& c) {
  json j;
  j["objects"] = json::array();
  for (int x = 0; x < c.object_count(); ++x) j["objects"].push_back(c.object_name(x));
  j["morphisms"] = json::array();
  for (int f = 0; f < c.morphism_count(); ++f)
    j["morphisms"].push_back({{"id", c.morphism_name(f)},
                              {"dom", c.object_name(c.dom(f))},
                              {"cod", c.object_name(c.cod(f))}});
  j["identity"] = json::object();
  for (int x = 0; x < c.object_count(); ++x)
    j["identity"][c.object_name(x)] = c.morphism_name(c.identity(x));
  j["comp"] = json::array();
  for (int g = 0; g < c.morphism_count(); ++g)
    for (int f = 0; f < c.morphism_count(); ++f)
      if (c.composable(g, f))
        j["comp"].push_back({c.morphism_name(g), c.morphism_name(f),
                             c.morphism_name(c.compose(g, f))});
  return j.dump(2) + "\n";
}

Site load_site_json(const std::string& text, const std::string& filename) {
  Site s;
  s.base = load_category_json(text, filename);
  json j = parse_json(text, filename);
  std::map<std::string, int> mor_ids;
  for (int f = 0; f < s.base.morphism_count(); ++f) mor_ids[s.base.morphism_name(f)] = f;
  s.covers.assign(s.base.object_count(), {});
  try {
    for (const auto& m : field(j, "covers", filename)) {
      int f = name_index(mor_ids, m.get<std::string>(), "morphism", filename);
      s.covers[s.base.dom(f)].push_back(f);
    }
  } catch (const json::exception& e) {
    throw error(filename + ": " + e.what());
  }
  for (auto& v : s.covers) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return s;
}

std::string site_to_json(const Site& s) {
  json j = json::parse(category_to_json(s.base));
  j["covers"] = json::array();
  for (const auto& v : s.covers)
    for (int f : v) j["covers"].push_back(s.base.morphism_name(f));
  return j.dump(2) + "\n";
}

CovFunctor load_functor_json(const FinCategory* base, const std::string& text,
                             const std::string& filename) {
  json j = parse_json(text, filename);
  std::vector<int> sizes(base->object_count(), -1);
  std::vector<std::vector<int>> action(base->morphism_count());
  try {
    for (const auto& [obj, n] : field(j, "sizes", filename).items()) {
      bool found = false;
      for (int x = 0; x < base->object_count(); ++x)
        if (base->object_name(x) == obj) {
          sizes[x] = n.get<int>();
          found = true;
        }
      if (!found) throw error(filename + ": unknown object \"" + obj + "\"");
    }
    for (int x = 0; x < base->object_count(); ++x)
      if (sizes[x] < 0)
        throw error(filename + ": missing size for object \"" + base->object_name(x) + "\"");
    for (const auto& [mor, tbl] : field(j, "action", filename).items()) {
      int id = -1;
      for (int f = 0; f < base->morphism_count(); ++f)
        if (base->morphism_name(f) == mor) id = f;
      if (id < 0) throw error(filename + ": unknown morphism \"" + mor + "\"");
      action[id] = tbl.get<std::vector<int>>();
    }
  } catch (const json::exception& e) {
    throw error(filename + ": " + e.what());
  }
  for (int f = 0; f < base->morphism_count(); ++f)
    if (action[f].empty() && base->is_identity(f)) {
      action[f].resize(sizes[base->dom(f)]);
      for (int i = 0; i < sizes[base->dom(f)]; ++i) action[f][i] = i;
    }
  return CovFunctor(base, std::move(sizes), std::move(action));
}

FinStructure load_structure_json(const Signature& sig, const std::string& text,
                                 const std::string& filename) {
  json j = parse_json(text, filename);
  FinStructure m;
  m.sort_sizes.assign(sig.sorts.size(), -1);
  m.rels.assign(sig.rels.size(), {});
  try {
    for (const auto& [sort, n] : field(j, "sorts", filename).items())
      m.sort_sizes[sig.sort_index(sort)] = n.get<int>();
    for (size_t s = 0; s < sig.sorts.size(); ++s)
      if (m.sort_sizes[s] < 0)
        throw error(filename + ": missing size for sort \"" + sig.sorts[s] + "\"");
    if (j.contains("relations"))
      for (const auto& [rel, tuples] : j["relations"].items()) {
        auto& table = m.rels[sig.rel_index(rel)];
        for (const auto& t : tuples) table.push_back(t.get<std::vector<int>>());
        std::sort(table.begin(), table.end());
        table.erase(std::unique(table.begin(), table.end()), table.end());
      }
  } catch (const json::exception& e) {
    throw error(filename + ": " + e.what());
  }
  validate_structure(sig, m);
  return m;
}

FiniteRing ring_by_name(const std::string& name) {
  if (name == "f2x2") return FiniteRing::f2x2();
  if (name.size() >= 2 && name[0] == 'z') {
    int n = 0;
    for (size_t i = 1; i < name.size(); ++i) {
      if (!isdigit((unsigned char)name[i])) { n = 0; break; }
      n = n * 10 + (name[i] - '0');
    }
    if (n > 0) return FiniteRing::cyclic(n);
  }
  throw error("unknown ring \"" + name + "\" (use z<n> or f2x2)");
}

FiniteModule module_by_expr(const FiniteRing& r, const std::string& expr) {
  std::string s;
  for (char c : expr)
    if (!isspace((unsigned char)c)) s += c;
  if (s == "R") return ring_as_module(r);
  if (s.rfind("R/(", 0) == 0 && s.back() == ')') {
    std::vector<int> gens;
    std::string body = s.substr(3, s.size() - 4);
    std::istringstream in(body);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        gens.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw error("bad module expression \"" + expr + "\"");
      }
    }
    return quotient_by_ideal(r, gens);
  }
  throw error("bad module expression \"" + expr + "\" (use R or R/(a,b,...))");
}

FiniteModule load_module_json(const FiniteRing& r, const std::string& text,
                              const std::string& filename) {
  json j = parse_json(text, filename);
  try {
    return FiniteModule(r, field(j, "add", filename).get<std::vector<std::vector<int>>>(),
                        field(j, "act", filename).get<std::vector<std::vector<int>>>());
  } catch (const json::exception& e) {
    throw error(filename + ": " + e.what());
  }
}

std::string module_to_json(const FiniteModule& m) {
  json j;
  j["add"] = json::array();
  j["act"] = json::array();
  for (int a = 0; a < m.size(); ++a) {
    json row = json::array();
    for (int b = 0; b < m.size(); ++b) row.push_back(m.add(a, b));
    j["add"].push_back(row);
  }
  for (int s = 0; s < m.ring().size(); ++s) {
    json row = json::array();
    for (int a = 0; a < m.size(); ++a) row.push_back(m.act(s, a));
    j["act"].push_back(row);
  }
  return j.dump();
}

namespace {

// Integer coefficient -> ring element, as a multiple of 1.
int coeff_element(const FiniteRing& r, long long c) {
  int ch = 1;
  int acc = r.one();
  while (acc != r.zero()) {
    acc = r.add(acc, r.one());
    ++ch;
  }
  long long k = ((c % ch) + ch) % ch;
  int out = r.zero();
  for (long long i = 0; i < k; ++i) out = r.add(out, r.one());
  return out;
}

LinearPp parse_pp_matrix(const FiniteRing& r, const std::string& text) {
  std::istringstream in(text);
  std::string kw;
  in >> kw; // "pp"
  LinearPp f;
  auto expect = [&](const char* name) {
    std::string tok;
    in >> tok;
    std::string prefix = std::string(name) + "=";
    if (tok.rfind(prefix, 0) != 0)
      throw error("pp: expected " + prefix + "..., got \"" + tok + "\"");
    return tok.substr(prefix.size());
  };
  try {
    f.n = std::stoi(expect("n"));
    f.m = std::stoi(expect("m"));
  } catch (const std::exception&) {
    throw error("pp: bad n=/m= value");
  }
  std::string rest, tok;
  while (in >> tok) rest += tok;
  if (rest.rfind("rows=", 0) != 0) throw error("pp: expected rows=[[...]]");
  rest = rest.substr(5);
  std::vector<std::vector<int>> rows;
  std::vector<int> cur;
  std::string num;
  int depth = 0;
  auto flush = [&] {
    if (num.empty()) return;
    long long v;
    try {
      v = std::stoll(num);
    } catch (const std::exception&) {
      throw error("pp: bad entry \"" + num + "\"");
    }
    long long a = v < 0 ? -v : v;
    if (a >= r.size()) throw error("pp: entry " + num + " is not a ring element id");
    cur.push_back(v < 0 ? r.neg((int)a) : (int)a);
    num.clear();
  };
  for (char c : rest) {
    if (c == '[') {
      ++depth;
      if (depth == 2) cur.clear();
    } else if (c == ']') {
      flush();
      if (depth == 2) rows.push_back(cur);
      --depth;
    } else if (c == ',') {
      flush();
    } else if (c == '-' || isdigit((unsigned char)c)) {
      num += c;
    } else if (!isspace((unsigned char)c)) {
      throw error(std::string("pp: unexpected character '") + c + "'");
    }
  }
  if (depth != 0) throw error("pp: unbalanced brackets in rows");
  for (const auto& row : rows)
    if ((int)row.size() != f.n + f.m)
      throw error("pp: row length " + std::to_string(row.size()) + " != n+m");
  f.rows = std::move(rows);
  return f;
}

} // namespace

LinearPp parse_pp_text(const FiniteRing& r, const std::string& text) {
  size_t i = text.find_first_not_of(" \t\r\n");
  if (i == std::string::npos) throw error("pp: empty formula");
  if (text.compare(i, 2, "pp") == 0 && i + 2 < text.size() &&
      isspace((unsigned char)text[i + 2]))
    return parse_pp_matrix(r, text.substr(i));
  LinearPpText t = parse_linear_pp(text);
  // Free columns are ordered by name (numeric suffixes compared as numbers),
  // not by first occurrence, so `graph(x2 = 2*x1)` keeps x1 in column 0.
  std::sort(t.free_vars.begin(), t.free_vars.end(), [](const std::string& a, const std::string& b) {
    size_t pa = a.find_last_not_of("0123456789") + 1;
    size_t pb = b.find_last_not_of("0123456789") + 1;
    if (a.compare(0, pa, b, 0, pb) != 0 || pa == a.size() || pb == b.size())
      return a < b;
    return std::stoll(a.substr(pa)) < std::stoll(b.substr(pb));
  });
  LinearPp f;
  f.n = (int)t.free_vars.size();
  f.m = (int)t.bound_vars.size();
  std::map<std::string, int> col;
  for (int j = 0; j < f.n; ++j) col[t.free_vars[j]] = j;
  for (int j = 0; j < f.m; ++j) col[t.bound_vars[j]] = f.n + j;
  for (const auto& row : t.rows) {
    std::vector<int> out(f.n + f.m, r.zero());
    for (const auto& [var, c] : row) out[col.at(var)] = coeff_element(r, c);
    f.rows.push_back(std::move(out));
  }
  return f;
}

std::string pp_to_text(const LinearPp& f) {
  std::ostringstream out;
  out << "pp n=" << f.n << " m=" << f.m << " rows=[";
  for (size_t t = 0; t < f.rows.size(); ++t) {
    out << (t ? ",[" : "[");
    for (size_t j = 0; j < f.rows[t].size(); ++j) out << (j ? "," : "") << f.rows[t][j];
    out << "]";
  }
  out << "]";
  return out.str();
}

} // namespace catlogic
