#include "catlogic/reglogic.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

namespace catlogic {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw error(msg); }

[[noreturn]] void fail_at(int line, int col, const std::string& msg) {
  std::ostringstream os;
  os << "line " << line << " col " << col << ": " << msg;
  throw error(os.str());
}

bool reserved_word(const std::string& s) {
  return s == "T" || s == "forall" || s == "exists" || s == "sort" || s == "rel" ||
         s == "fun" || s == "E";
}

} // namespace

int Signature::sort_index(const std::string& name) const {
  for (int i = 0; i < (int)sorts.size(); ++i)
    if (sorts[i] == name) return i;
  fail("unknown sort: " + name);
}

int Signature::rel_index(const std::string& name) const {
  for (int i = 0; i < (int)rels.size(); ++i)
    if (rels[i].name == name) return i;
  fail("unknown relation: " + name);
}

RegularFormula RegularFormula::truth() { return {}; }

RegularFormula RegularFormula::atom(int rel, std::vector<std::string> args) {
  RegularFormula f;
  f.kind = Atom;
  f.rel = rel;
  f.args = std::move(args);
  return f;
}

RegularFormula RegularFormula::eq(std::string a, std::string b) {
  RegularFormula f;
  f.kind = Eq;
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return f;
}

RegularFormula RegularFormula::conj(std::vector<RegularFormula> parts) {
  if (parts.empty()) return truth();
  if (parts.size() == 1) return std::move(parts[0]);
  RegularFormula f;
  f.kind = And;
  f.children = std::move(parts);
  return f;
}

RegularFormula RegularFormula::exists(std::vector<std::string> bound, RegularFormula body) {
  if (bound.empty()) return body;
  RegularFormula f;
  f.kind = Exists;
  f.bound = std::move(bound);
  f.children.push_back(std::move(body));
  return f;
}

RegularFormula PpFormula::as_formula() const {
  return RegularFormula::exists(bound, RegularFormula::conj(atoms));
}

// ---- tokenizer ------------------------------------------------------------

namespace {

struct Token {
  enum Kind { Ident, Int, LParen, RParen, Comma, Colon, Amp, Seq, To, Equal, Star, Plus, Minus, End };
  Kind kind;
  std::string text;
  long long ival = 0;
  int line, col;
};

bool ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum((unsigned char)c) || c == '_' || c == '\'';
}

std::vector<Token> tokenize(const std::string& line, int line_no) {
  std::vector<Token> out;
  size_t i = 0;
  auto push = [&](Token::Kind k, std::string text, size_t col) {
    out.push_back({k, std::move(text), 0, line_no, (int)col + 1});
  };
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace((unsigned char)c)) {
      ++i;
      continue;
    }
    size_t start = i;
    if (ident_start(c)) {
      while (i < line.size() && ident_char(line[i])) ++i;
      push(Token::Ident, line.substr(start, i - start), start);
    } else if (std::isdigit((unsigned char)c)) {
      while (i < line.size() && std::isdigit((unsigned char)line[i])) ++i;
      Token t{Token::Int, line.substr(start, i - start), 0, line_no, (int)start + 1};
      t.ival = std::stoll(t.text);
      out.push_back(t);
    } else if (c == '=' && i + 1 < line.size() && line[i + 1] == '>') {
      i += 2;
      push(Token::Seq, "=>", start);
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      i += 2;
      push(Token::To, "->", start);
    } else {
      ++i;
      switch (c) {
        case '(': push(Token::LParen, "(", start); break;
        case ')': push(Token::RParen, ")", start); break;
        case ',': push(Token::Comma, ",", start); break;
        case ':': push(Token::Colon, ":", start); break;
        case '&': push(Token::Amp, "&", start); break;
        case '=': push(Token::Equal, "=", start); break;
        case '*': push(Token::Star, "*", start); break;
        case '+': push(Token::Plus, "+", start); break;
        case '-': push(Token::Minus, "-", start); break;
        default:
          fail_at(line_no, (int)start + 1,
                  std::string("unexpected character '") + c + "'");
      }
    }
  }
  out.push_back({Token::End, "", 0, line_no, (int)line.size() + 1});
  return out;
}

// ---- recursive-descent sequent parser ------------------------------------

struct SequentParser {
  const Signature& sig;
  const std::vector<Token>& toks;
  size_t pos = 0;
  std::set<std::string> line_idents; // reserved pool for flattening freshness
  int fresh_counter = 0;

  SequentParser(const Signature& s, const std::vector<Token>& t) : sig(s), toks(t) {
    for (const auto& tk : t)
      if (tk.kind == Token::Ident) line_idents.insert(tk.text);
  }

  const Token& peek() const { return toks[pos]; }
  Token next() { return toks[pos++]; }
  bool at(Token::Kind k) const { return toks[pos].kind == k; }

  Token expect(Token::Kind k, const std::string& what) {
    if (!at(k)) fail_at(peek().line, peek().col, "expected " + what);
    return next();
  }

  std::string expect_var() {
    Token t = expect(Token::Ident, "identifier");
    if (reserved_word(t.text))
      fail_at(t.line, t.col, "'" + t.text + "' is reserved and cannot name a variable");
    for (const auto& r : sig.rels)
      if (r.name == t.text)
        fail_at(t.line, t.col, "'" + t.text + "' names a relation, not a variable");
    for (const auto& f : sig.funs)
      if (f.name == t.text)
        fail_at(t.line, t.col, "'" + t.text + "' names a function, not a variable");
    return t.text;
  }

  std::string fresh_var() {
    for (;;) {
      std::string cand = "w" + std::to_string(fresh_counter++) + "'";
      if (!line_idents.count(cand)) {
        line_idents.insert(cand);
        return cand;
      }
    }
  }

  int fun_index(const std::string& name) const {
    for (int i = 0; i < (int)sig.funs.size(); ++i)
      if (sig.funs[i].name == name) return i;
    return -1;
  }

  int rel_by_name(const std::string& name) const {
    for (int i = 0; i < (int)sig.rels.size(); ++i)
      if (sig.rels[i].name == name) return i;
    return -1;
  }

  // Parses a term, flattening function applications into graph atoms over a
  // fresh variable.  Returns the variable holding the term's value.
  std::string term(std::vector<std::string>& fresh, std::vector<RegularFormula>& prefix) {
    Token t = expect(Token::Ident, "term");
    int fi = fun_index(t.text);
    if (fi < 0) {
      if (reserved_word(t.text))
        fail_at(t.line, t.col, "'" + t.text + "' is reserved and cannot name a variable");
      if (rel_by_name(t.text) >= 0)
        fail_at(t.line, t.col, "'" + t.text + "' names a relation, not a variable");
      return t.text;
    }
    expect(Token::LParen, "'(' after function name");
    std::vector<std::string> args;
    if (!at(Token::RParen)) {
      args.push_back(term(fresh, prefix));
      while (at(Token::Comma)) {
        next();
        args.push_back(term(fresh, prefix));
      }
    }
    expect(Token::RParen, "')'");
    if ((int)args.size() != (int)sig.funs[fi].arg_sorts.size())
      fail_at(t.line, t.col, "function '" + t.text + "' expects " +
                                 std::to_string(sig.funs[fi].arg_sorts.size()) +
                                 " arguments");
    std::string v = fresh_var();
    fresh.push_back(v);
    args.push_back(v);
    prefix.push_back(RegularFormula::atom(sig.funs[fi].graph_rel, std::move(args)));
    return v;
  }

  RegularFormula unit() {
    const Token& t = peek();
    if (t.kind == Token::LParen) {
      next();
      RegularFormula f = conj();
      expect(Token::RParen, "')'");
      return f;
    }
    if (t.kind == Token::Ident && t.text == "T") {
      next();
      return RegularFormula::truth();
    }
    if (t.kind == Token::Ident && t.text == "exists") {
      next();
      std::vector<std::string> bound;
      bound.push_back(expect_var());
      while (at(Token::Ident) && peek().text != "exists") bound.push_back(expect_var());
      expect(Token::Colon, "':' after exists variables");
      std::set<std::string> seen;
      for (const auto& b : bound)
        if (!seen.insert(b).second)
          fail_at(t.line, t.col, "variable '" + b + "' bound twice");
      return RegularFormula::exists(std::move(bound), conj());
    }
    if (t.kind != Token::Ident)
      fail_at(t.line, t.col, "expected formula, found '" + t.text + "'");
    // Relation atom or equality.
    int ri = rel_by_name(t.text);
    if (ri >= 0 && toks[pos + 1].kind == Token::LParen) {
      next();
      next();
      std::vector<std::string> fresh;
      std::vector<RegularFormula> prefix;
      std::vector<std::string> args;
      if (!at(Token::RParen)) {
        args.push_back(term(fresh, prefix));
        while (at(Token::Comma)) {
          next();
          args.push_back(term(fresh, prefix));
        }
      }
      expect(Token::RParen, "')'");
      if ((int)args.size() != (int)sig.rels[ri].arg_sorts.size())
        fail_at(t.line, t.col, "relation '" + t.text + "' expects " +
                                   std::to_string(sig.rels[ri].arg_sorts.size()) +
                                   " arguments");
      prefix.push_back(RegularFormula::atom(ri, std::move(args)));
      return RegularFormula::exists(std::move(fresh), RegularFormula::conj(std::move(prefix)));
    }
    std::vector<std::string> fresh;
    std::vector<RegularFormula> prefix;
    std::string a = term(fresh, prefix);
    expect(Token::Equal, "'=' (or a declared relation)");
    std::string b = term(fresh, prefix);
    prefix.push_back(RegularFormula::eq(a, b));
    return RegularFormula::exists(std::move(fresh), RegularFormula::conj(std::move(prefix)));
  }

  RegularFormula conj() {
    std::vector<RegularFormula> parts;
    parts.push_back(unit());
    while (at(Token::Amp)) {
      next();
      parts.push_back(unit());
    }
    return RegularFormula::conj(std::move(parts));
  }
};

void collect_vars(const RegularFormula& f, std::vector<std::string>& order,
                  std::set<std::string>& seen) {
  auto add = [&](const std::string& v) {
    if (seen.insert(v).second) order.push_back(v);
  };
  switch (f.kind) {
    case RegularFormula::Truth: break;
    case RegularFormula::Atom:
      for (const auto& a : f.args) add(a);
      break;
    case RegularFormula::Eq:
      add(f.lhs);
      add(f.rhs);
      break;
    case RegularFormula::And:
      for (const auto& c : f.children) collect_vars(c, order, seen);
      break;
    case RegularFormula::Exists:
      for (const auto& b : f.bound) add(b);
      collect_vars(f.children[0], order, seen);
      break;
  }
}

void free_vars_rec(const RegularFormula& f, std::vector<std::string>& order,
                   std::set<std::string>& seen, std::set<std::string>& bound) {
  switch (f.kind) {
    case RegularFormula::Truth: break;
    case RegularFormula::Atom:
      for (const auto& a : f.args)
        if (!bound.count(a) && seen.insert(a).second) order.push_back(a);
      break;
    case RegularFormula::Eq:
      for (const auto* v : {&f.lhs, &f.rhs})
        if (!bound.count(*v) && seen.insert(*v).second) order.push_back(*v);
      break;
    case RegularFormula::And:
      for (const auto& c : f.children) free_vars_rec(c, order, seen, bound);
      break;
    case RegularFormula::Exists: {
      std::vector<std::string> added;
      for (const auto& b : f.bound)
        if (bound.insert(b).second) added.push_back(b);
      free_vars_rec(f.children[0], order, seen, bound);
      for (const auto& b : added) bound.erase(b);
      break;
    }
  }
}

void check_no_shadowing(const RegularFormula& f, std::set<std::string> in_scope,
                        int line, int col) {
  if (f.kind == RegularFormula::Exists) {
    for (const auto& b : f.bound)
      if (!in_scope.insert(b).second)
        fail_at(line, col, "variable '" + b + "' is shadowed by a nested binder");
  }
  for (const auto& c : f.children) check_no_shadowing(c, in_scope, line, col);
}

} // namespace

std::vector<std::string> free_vars(const RegularFormula& f) {
  std::vector<std::string> order;
  std::set<std::string> seen, bound;
  free_vars_rec(f, order, seen, bound);
  return order;
}

std::map<std::string, int> infer_sorts(const Signature& sig,
                                       const std::vector<const RegularFormula*>& fs) {
  // Union-find over variable names with sort constraints from atom positions.
  std::vector<std::string> vars;
  std::set<std::string> seen;
  for (const auto* f : fs) collect_vars(*f, vars, seen);
  std::map<std::string, int> id;
  for (int i = 0; i < (int)vars.size(); ++i) id[vars[i]] = i;
  std::vector<int> parent(vars.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> sort_of(vars.size(), -1);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto assign = [&](int x, int s) {
    x = find(x);
    if (sort_of[x] >= 0 && sort_of[x] != s)
      fail("variable '" + vars[x] + "' used with sorts '" + sig.sorts[sort_of[x]] +
           "' and '" + sig.sorts[s] + "'");
    sort_of[x] = s;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (sort_of[a] >= 0) assign(b, sort_of[a]);
    if (sort_of[b] >= 0) assign(a, sort_of[b]);
    parent[b] = a;
  };
  auto walk = [&](const RegularFormula& f, auto&& self) -> void {
    switch (f.kind) {
      case RegularFormula::Atom: {
        const auto& decl = sig.rels.at(f.rel);
        if (decl.arg_sorts.size() != f.args.size())
          fail("relation '" + decl.name + "' arity mismatch");
        for (size_t i = 0; i < f.args.size(); ++i)
          assign(id.at(f.args[i]), decl.arg_sorts[i]);
        break;
      }
      case RegularFormula::Eq:
        unite(id.at(f.lhs), id.at(f.rhs));
        break;
      default:
        for (const auto& c : f.children) self(c, self);
    }
  };
  for (const auto* f : fs) walk(*f, walk);
  std::map<std::string, int> out;
  for (int i = 0; i < (int)vars.size(); ++i) {
    int s = sort_of[find(i)];
    if (s < 0) {
      if (sig.sorts.size() != 1)
        fail("cannot infer the sort of variable '" + vars[i] + "'");
      s = 0;
    }
    out[vars[i]] = s;
  }
  return out;
}

// ---- theory parsing -------------------------------------------------------

RegularTheory parse_theory(const std::string& text) {
  RegularTheory t;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  auto check_fresh_name = [&](const std::string& name, int col) {
    for (const auto& s : t.sig.sorts)
      if (s == name) fail_at(line_no, col, "duplicate name '" + name + "'");
    for (const auto& r : t.sig.rels)
      if (r.name == name) fail_at(line_no, col, "duplicate name '" + name + "'");
    for (const auto& f : t.sig.funs)
      if (f.name == name) fail_at(line_no, col, "duplicate name '" + name + "'");
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::vector<Token> toks = tokenize(line, line_no);
    if (toks[0].kind == Token::End) continue;

    if (toks[0].kind == Token::Ident && toks[0].text == "sort") {
      if (toks.size() != 3 || toks[1].kind != Token::Ident)
        fail_at(line_no, toks[0].col, "expected: sort NAME");
      check_fresh_name(toks[1].text, toks[1].col);
      t.sig.sorts.push_back(toks[1].text);
      continue;
    }
    if (toks[0].kind == Token::Ident && toks[0].text == "rel") {
      if (toks.size() < 4 || toks[1].kind != Token::Ident || toks[2].kind != Token::Colon)
        fail_at(line_no, toks[0].col, "expected: rel NAME : sort...");
      check_fresh_name(toks[1].text, toks[1].col);
      Signature::RelDecl d;
      d.name = toks[1].text;
      for (size_t i = 3; i + 1 < toks.size(); ++i) {
        if (toks[i].kind != Token::Ident)
          fail_at(toks[i].line, toks[i].col, "expected sort name");
        bool found = false;
        for (int s = 0; s < (int)t.sig.sorts.size(); ++s)
          if (t.sig.sorts[s] == toks[i].text) {
            d.arg_sorts.push_back(s);
            found = true;
          }
        if (!found) fail_at(toks[i].line, toks[i].col, "unknown sort '" + toks[i].text + "'");
      }
      t.sig.rels.push_back(std::move(d));
      continue;
    }
    if (toks[0].kind == Token::Ident && toks[0].text == "fun") {
      // fun NAME : sort... -> sort ; compiles to a graph relation plus
      // totality and single-valuedness sequents appended at the end.
      if (toks.size() < 4 || toks[1].kind != Token::Ident || toks[2].kind != Token::Colon)
        fail_at(line_no, toks[0].col, "expected: fun NAME : sort... -> sort");
      check_fresh_name(toks[1].text, toks[1].col);
      Signature::FunDecl d;
      d.name = toks[1].text;
      size_t i = 3;
      auto sort_at = [&](size_t j) {
        if (toks[j].kind != Token::Ident)
          fail_at(toks[j].line, toks[j].col, "expected sort name");
        for (int s = 0; s < (int)t.sig.sorts.size(); ++s)
          if (t.sig.sorts[s] == toks[j].text) return s;
        fail_at(toks[j].line, toks[j].col, "unknown sort '" + toks[j].text + "'");
      };
      while (i < toks.size() && toks[i].kind != Token::To) d.arg_sorts.push_back(sort_at(i++));
      if (i + 3 != toks.size() || toks[i].kind != Token::To)
        fail_at(line_no, toks[0].col, "expected: fun NAME : sort... -> sort");
      d.res_sort = sort_at(i + 1);
      d.graph_rel = (int)t.sig.rels.size();
      Signature::RelDecl g;
      g.name = d.name + "'graph";
      g.arg_sorts = d.arg_sorts;
      g.arg_sorts.push_back(d.res_sort);
      for (const auto& r : t.sig.rels)
        if (r.name == g.name) fail_at(line_no, toks[1].col, "duplicate name '" + g.name + "'");
      t.sig.rels.push_back(std::move(g));
      t.sig.funs.push_back(std::move(d));
      continue;
    }

    // Sequent line: [forall vars :] formula => formula
    SequentParser p(t.sig, toks);
    Sequent sq;
    bool explicit_ctx = false;
    if (p.at(Token::Ident) && p.peek().text == "forall") {
      p.next();
      explicit_ctx = true;
      sq.context.push_back(p.expect_var());
      while (p.at(Token::Ident)) sq.context.push_back(p.expect_var());
      p.expect(Token::Colon, "':' after forall variables");
      std::set<std::string> seen;
      for (const auto& v : sq.context)
        if (!seen.insert(v).second)
          fail_at(line_no, 1, "variable '" + v + "' listed twice in forall");
    }
    sq.lhs = p.conj();
    p.expect(Token::Seq, "'=>'");
    sq.rhs = p.conj();
    if (!p.at(Token::End))
      fail_at(p.peek().line, p.peek().col, "trailing input after sequent");

    check_no_shadowing(sq.lhs, {}, line_no, 1);
    check_no_shadowing(sq.rhs, {}, line_no, 1);
    std::vector<std::string> frees;
    {
      std::set<std::string> seen, bound;
      free_vars_rec(sq.lhs, frees, seen, bound);
      free_vars_rec(sq.rhs, frees, seen, bound);
    }
    if (explicit_ctx) {
      std::set<std::string> ctx(sq.context.begin(), sq.context.end());
      for (const auto& v : frees)
        if (!ctx.count(v))
          fail_at(line_no, 1, "free variable '" + v + "' is not in the forall prefix");
    } else {
      sq.context = frees;
    }
    sq.var_sorts = infer_sorts(t.sig, {&sq.lhs, &sq.rhs});
    for (const auto& v : sq.context)
      if (!sq.var_sorts.count(v)) {
        if (t.sig.sorts.size() != 1)
          fail_at(line_no, 1, "cannot infer the sort of variable '" + v + "'");
        sq.var_sorts[v] = 0;
      }
    t.sequents.push_back(std::move(sq));
  }
  if (t.sig.sorts.empty() && !t.sequents.empty())
    fail("theory declares no sorts but has sequents");

  // Totality and single-valuedness for each declared function.
  for (const auto& fd : t.sig.funs) {
    std::vector<std::string> as;
    for (size_t i = 0; i < fd.arg_sorts.size(); ++i) as.push_back("a" + std::to_string(i));
    Sequent tot;
    tot.auto_fun = true;
    tot.context = as;
    for (size_t i = 0; i < as.size(); ++i) tot.var_sorts[as[i]] = fd.arg_sorts[i];
    tot.var_sorts["w"] = fd.res_sort;
    tot.lhs = RegularFormula::truth();
    std::vector<std::string> args = as;
    args.push_back("w");
    tot.rhs = RegularFormula::exists({"w"}, RegularFormula::atom(fd.graph_rel, args));
    t.sequents.push_back(std::move(tot));

    Sequent sv;
    sv.auto_fun = true;
    sv.context = as;
    sv.context.push_back("u");
    sv.context.push_back("v");
    for (size_t i = 0; i < as.size(); ++i) sv.var_sorts[as[i]] = fd.arg_sorts[i];
    sv.var_sorts["u"] = sv.var_sorts["v"] = fd.res_sort;
    std::vector<std::string> au = as, av = as;
    au.push_back("u");
    av.push_back("v");
    sv.lhs = RegularFormula::conj({RegularFormula::atom(fd.graph_rel, au),
                                   RegularFormula::atom(fd.graph_rel, av)});
    sv.rhs = RegularFormula::eq("u", "v");
    t.sequents.push_back(std::move(sv));
  }
  return t;
}

// ---- printing -------------------------------------------------------------

namespace {

void print_rec(const RegularFormula& f, const Signature& sig, std::ostream& os,
               bool parenthesize_and) {
  switch (f.kind) {
    case RegularFormula::Truth:
      os << "T";
      break;
    case RegularFormula::Atom: {
      os << sig.rels.at(f.rel).name << "(";
      for (size_t i = 0; i < f.args.size(); ++i)
        os << (i ? "," : "") << f.args[i];
      os << ")";
      break;
    }
    case RegularFormula::Eq:
      os << f.lhs << " = " << f.rhs;
      break;
    case RegularFormula::And: {
      if (parenthesize_and) os << "(";
      for (size_t i = 0; i < f.children.size(); ++i) {
        if (i) os << " & ";
        print_rec(f.children[i], sig, os, true);
      }
      if (parenthesize_and) os << ")";
      break;
    }
    case RegularFormula::Exists: {
      // exists binds to the right; protect when we sit inside a conjunction.
      if (parenthesize_and) os << "(";
      os << "exists";
      for (const auto& b : f.bound) os << " " << b;
      os << ": ";
      print_rec(f.children[0], sig, os, false);
      if (parenthesize_and) os << ")";
      break;
    }
  }
}

} // namespace

std::string print_formula(const RegularFormula& f, const Signature& sig) {
  std::ostringstream os;
  print_rec(f, sig, os, false);
  return os.str();
}

std::string print_theory(const RegularTheory& t) {
  std::ostringstream os;
  for (const auto& s : t.sig.sorts) os << "sort " << s << "\n";
  // Declarations in rel-index order so a reparse rebuilds identical indices;
  // function graph relations print as their fun declaration.
  for (int i = 0; i < (int)t.sig.rels.size(); ++i) {
    const Signature::FunDecl* fd = nullptr;
    for (const auto& f : t.sig.funs)
      if (f.graph_rel == i) fd = &f;
    if (fd) {
      os << "fun " << fd->name << " :";
      for (int s : fd->arg_sorts) os << " " << t.sig.sorts[s];
      os << " -> " << t.sig.sorts[fd->res_sort] << "\n";
    } else {
      os << "rel " << t.sig.rels[i].name << " :";
      for (int s : t.sig.rels[i].arg_sorts) os << " " << t.sig.sorts[s];
      os << "\n";
    }
  }
  for (const auto& sq : t.sequents) {
    if (sq.auto_fun) continue;
    if (!sq.context.empty()) {
      os << "forall";
      for (const auto& v : sq.context) os << " " << v;
      os << ": ";
    }
    print_rec(sq.lhs, t.sig, os, false);
    os << " => ";
    print_rec(sq.rhs, t.sig, os, false);
    os << "\n";
  }
  return os.str();
}

// ---- linear mode ----------------------------------------------------------

LinearPpText parse_linear_pp(const std::string& text) {
  std::vector<Token> toks = tokenize(text, 1);
  LinearPpText out;
  size_t pos = 0;
  auto at = [&](Token::Kind k) { return toks[pos].kind == k; };
  auto expect = [&](Token::Kind k, const std::string& what) {
    if (!at(k)) fail_at(toks[pos].line, toks[pos].col, "expected " + what);
    return toks[pos++];
  };

  std::set<std::string> bound_set;
  if (at(Token::Ident) && toks[pos].text == "E") {
    ++pos;
    while (at(Token::Ident)) {
      Token t = toks[pos++];
      if (reserved_word(t.text)) fail_at(t.line, t.col, "'" + t.text + "' is reserved");
      if (!bound_set.insert(t.text).second)
        fail_at(t.line, t.col, "variable '" + t.text + "' bound twice");
      out.bound_vars.push_back(t.text);
    }
    expect(Token::Colon, "':' after bound variables");
  }

  std::set<std::string> free_seen;
  auto note_var = [&](const std::string& v) {
    if (!bound_set.count(v) && free_seen.insert(v).second) out.free_vars.push_back(v);
  };

  // side := term (('+'|'-') term)* ; term := [INT '*'] var | INT
  auto parse_side = [&](std::map<std::string, long long>& acc, long long sign_all) {
    long long sign = 1;
    bool first = true;
    for (;;) {
      if (at(Token::Minus)) {
        ++pos;
        sign = -1;
      } else if (at(Token::Plus)) {
        ++pos;
        sign = 1;
      } else if (!first) {
        break;
      }
      long long coeff = 1;
      if (at(Token::Int)) {
        coeff = toks[pos++].ival;
        if (at(Token::Star)) {
          ++pos;
        } else if (at(Token::Ident)) {
          // allow "2x" shorthand? no: require '*' or end of term
          fail_at(toks[pos].line, toks[pos].col, "expected '*' between coefficient and variable");
        } else {
          if (coeff != 0)
            fail_at(toks[pos - 1].line, toks[pos - 1].col,
                    "nonzero constant term in linear equation");
          first = false;
          sign = 1;
          if (!at(Token::Plus) && !at(Token::Minus)) break;
          continue;
        }
      }
      Token v = expect(Token::Ident, "variable");
      if (reserved_word(v.text)) fail_at(v.line, v.col, "'" + v.text + "' is reserved");
      note_var(v.text);
      acc[v.text] += sign_all * sign * coeff;
      first = false;
      sign = 1;
      if (!at(Token::Plus) && !at(Token::Minus)) break;
    }
  };

  for (;;) {
    std::map<std::string, long long> row;
    parse_side(row, 1);
    expect(Token::Equal, "'='");
    parse_side(row, -1); // lhs - rhs = 0
    std::erase_if(row, [](const auto& kv) { return kv.second == 0; });
    out.rows.push_back(std::move(row));
    if (at(Token::Amp)) {
      ++pos;
      continue;
    }
    break;
  }
  expect(Token::End, "end of input");
  for (const auto& b : out.bound_vars)
    if (free_seen.count(b)) fail("variable '" + b + "' both bound and free");
  return out;
}

// ---- structures and evaluation -------------------------------------------

void validate_structure(const Signature& sig, const FinStructure& m) {
  std::vector<std::string> problems;
  if (m.sort_sizes.size() != sig.sorts.size())
    problems.push_back("expected " + std::to_string(sig.sorts.size()) + " sort carriers");
  for (size_t s = 0; s < m.sort_sizes.size() && s < sig.sorts.size(); ++s)
    if (m.sort_sizes[s] < 0)
      problems.push_back("sort '" + sig.sorts[s] + "' has negative size");
  if (m.rels.size() != sig.rels.size())
    problems.push_back("expected " + std::to_string(sig.rels.size()) + " relation tables");
  for (size_t r = 0; r < m.rels.size() && r < sig.rels.size(); ++r) {
    const auto& decl = sig.rels[r];
    for (const auto& tup : m.rels[r]) {
      if (tup.size() != decl.arg_sorts.size()) {
        problems.push_back("relation '" + decl.name + "' has a tuple of wrong arity");
        continue;
      }
      for (size_t i = 0; i < tup.size(); ++i)
        if (tup[i] < 0 || tup[i] >= m.sort_sizes.at(decl.arg_sorts[i]))
          problems.push_back("relation '" + decl.name + "' tuple value out of range");
    }
    if (!std::is_sorted(m.rels[r].begin(), m.rels[r].end()) ||
        std::adjacent_find(m.rels[r].begin(), m.rels[r].end()) != m.rels[r].end())
      problems.push_back("relation '" + decl.name + "' tuples not sorted and unique");
  }
  if (!problems.empty()) {
    std::string msg = "invalid structure:";
    for (const auto& p : problems) msg += "\n  " + p;
    fail(msg);
  }
}

FinStructure product_structure(const Signature& sig, const FinStructure& a,
                               const FinStructure& b) {
  validate_structure(sig, a);
  validate_structure(sig, b);
  FinStructure p;
  for (size_t s = 0; s < sig.sorts.size(); ++s)
    p.sort_sizes.push_back(a.sort_sizes[s] * b.sort_sizes[s]);
  p.rels.resize(sig.rels.size());
  for (size_t r = 0; r < sig.rels.size(); ++r) {
    const auto& decl = sig.rels[r];
    std::vector<int> tup(decl.arg_sorts.size(), 0);
    long long count = 1;
    for (int s : decl.arg_sorts) count *= p.sort_sizes[s];
    for (long long k = 0; k < count; ++k) {
      std::vector<int> ta(tup.size()), tb(tup.size());
      for (size_t i = 0; i < tup.size(); ++i) {
        int bs = b.sort_sizes[decl.arg_sorts[i]];
        ta[i] = tup[i] / bs;
        tb[i] = tup[i] % bs;
      }
      if (std::binary_search(a.rels[r].begin(), a.rels[r].end(), ta) &&
          std::binary_search(b.rels[r].begin(), b.rels[r].end(), tb))
        p.rels[r].push_back(tup);
      int i = (int)tup.size() - 1;
      while (i >= 0 && ++tup[i] == p.sort_sizes[decl.arg_sorts[i]]) tup[i--] = 0;
    }
  }
  return p;
}

bool eval(const Signature&, const FinStructure& m, const RegularFormula& f,
          const std::map<std::string, int>& var_sorts,
          const std::map<std::string, int>& assignment) {
  auto value = [&](const std::string& v, const std::map<std::string, int>& env) {
    auto it = env.find(v);
    if (it == env.end()) fail("unassigned variable '" + v + "'");
    return it->second;
  };
  auto rec = [&](const RegularFormula& g, std::map<std::string, int>& env,
                 auto&& self) -> bool {
    switch (g.kind) {
      case RegularFormula::Truth:
        return true;
      case RegularFormula::Atom: {
        std::vector<int> tup;
        tup.reserve(g.args.size());
        for (const auto& a : g.args) tup.push_back(value(a, env));
        const auto& table = m.rels.at(g.rel);
        return std::binary_search(table.begin(), table.end(), tup);
      }
      case RegularFormula::Eq:
        return value(g.lhs, env) == value(g.rhs, env);
      case RegularFormula::And:
        for (const auto& c : g.children)
          if (!self(c, env, self)) return false;
        return true;
      case RegularFormula::Exists: {
        // Odometer over carriers of the bound variables.
        std::vector<int> sizes;
        for (const auto& b : g.bound) sizes.push_back(m.sort_sizes.at(var_sorts.at(b)));
        for (int sz : sizes)
          if (sz == 0) return false;
        std::vector<int> vals(sizes.size(), 0);
        std::vector<std::optional<int>> saved;
        for (const auto& b : g.bound) {
          auto it = env.find(b);
          saved.push_back(it == env.end() ? std::nullopt : std::optional<int>(it->second));
        }
        bool ok = false;
        for (;;) {
          for (size_t i = 0; i < g.bound.size(); ++i) env[g.bound[i]] = vals[i];
          if (self(g.children[0], env, self)) {
            ok = true;
            break;
          }
          int i = (int)vals.size() - 1;
          while (i >= 0 && ++vals[i] == sizes[i]) vals[i--] = 0;
          if (i < 0) break;
        }
        for (size_t i = 0; i < g.bound.size(); ++i) {
          if (saved[i])
            env[g.bound[i]] = *saved[i];
          else
            env.erase(g.bound[i]);
        }
        return ok;
      }
    }
    return false;
  };
  std::map<std::string, int> env = assignment;
  return rec(f, env, rec);
}

EvalSet eval_set(const Signature& sig, const FinStructure& m, const RegularFormula& f,
                 const std::map<std::string, int>& var_sorts) {
  EvalSet out;
  out.vars = free_vars(f);
  std::vector<int> sizes;
  for (const auto& v : out.vars) sizes.push_back(m.sort_sizes.at(var_sorts.at(v)));
  for (int sz : sizes)
    if (sz == 0) return out;
  std::vector<int> vals(sizes.size(), 0);
  for (;;) {
    std::map<std::string, int> env;
    for (size_t i = 0; i < out.vars.size(); ++i) env[out.vars[i]] = vals[i];
    if (eval(sig, m, f, var_sorts, env)) out.tuples.push_back(vals);
    if (vals.empty()) break;
    int i = (int)vals.size() - 1;
    while (i >= 0 && ++vals[i] == sizes[i]) vals[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

// ---- prenex normalization -------------------------------------------------

namespace {

void rename_var(RegularFormula& f, const std::string& from, const std::string& to) {
  switch (f.kind) {
    case RegularFormula::Truth:
      break;
    case RegularFormula::Atom:
      for (auto& a : f.args)
        if (a == from) a = to;
      break;
    case RegularFormula::Eq:
      if (f.lhs == from) f.lhs = to;
      if (f.rhs == from) f.rhs = to;
      break;
    case RegularFormula::And:
      for (auto& c : f.children) rename_var(c, from, to);
      break;
    case RegularFormula::Exists:
      for (const auto& b : f.bound)
        if (b == from) return; // shadowed below this point
      for (auto& c : f.children) rename_var(c, from, to);
      break;
  }
}

PpFormula normalize_rec(const RegularFormula& f, std::set<std::string>& used,
                        std::map<std::string, int>& var_sorts) {
  PpFormula out;
  switch (f.kind) {
    case RegularFormula::Truth:
      break;
    case RegularFormula::Atom:
    case RegularFormula::Eq:
      out.atoms.push_back(f);
      break;
    case RegularFormula::And:
      for (const auto& c : f.children) {
        PpFormula p = normalize_rec(c, used, var_sorts);
        out.bound.insert(out.bound.end(), p.bound.begin(), p.bound.end());
        out.atoms.insert(out.atoms.end(), p.atoms.begin(), p.atoms.end());
      }
      break;
    case RegularFormula::Exists: {
      RegularFormula body = f.children[0];
      std::vector<std::string> names;
      for (const auto& b : f.bound) {
        std::string name = b;
        while (used.count(name)) name += "'";
        if (name != b) rename_var(body, b, name);
        used.insert(name);
        if (!var_sorts.count(name)) {
          auto it = var_sorts.find(b);
          if (it != var_sorts.end()) var_sorts[name] = it->second;
        }
        names.push_back(name);
      }
      PpFormula p = normalize_rec(body, used, var_sorts);
      out.bound = std::move(names);
      out.bound.insert(out.bound.end(), p.bound.begin(), p.bound.end());
      out.atoms = std::move(p.atoms);
      break;
    }
  }
  return out;
}

} // namespace

PpFormula pp_normalize(const RegularFormula& f, std::map<std::string, int>& var_sorts) {
  std::set<std::string> used;
  for (const auto& v : free_vars(f)) used.insert(v);
  return normalize_rec(f, used, var_sorts);
}

bool models(const RegularTheory& t, const FinStructure& m) {
  validate_structure(t.sig, m);
  for (const auto& sq : t.sequents) {
    std::vector<std::string> vars = sq.context;
    std::set<std::string> seen(vars.begin(), vars.end());
    for (const auto* f : {&sq.lhs, &sq.rhs})
      for (const auto& v : free_vars(*f))
        if (seen.insert(v).second) vars.push_back(v);
    std::vector<int> sizes;
    for (const auto& v : vars) sizes.push_back(m.sort_sizes.at(sq.var_sorts.at(v)));
    bool any_empty = false;
    for (int sz : sizes) any_empty |= sz == 0;
    if (any_empty) continue; // universally quantified over an empty carrier
    std::vector<int> vals(sizes.size(), 0);
    for (;;) {
      std::map<std::string, int> env;
      for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = vals[i];
      if (eval(t.sig, m, sq.lhs, sq.var_sorts, env) &&
          !eval(t.sig, m, sq.rhs, sq.var_sorts, env))
        return false;
      if (vals.empty()) break;
      int i = (int)vals.size() - 1;
      while (i >= 0 && ++vals[i] == sizes[i]) vals[i--] = 0;
      if (i < 0) break;
    }
  }
  return true;
}

// ---- injectivity ----------------------------------------------------------

bool is_structure_hom(const Signature& sig, const FinStructure& a, const FinStructure& b,
                      const std::vector<std::vector<int>>& maps) {
  if (maps.size() != sig.sorts.size()) return false;
  for (size_t s = 0; s < maps.size(); ++s) {
    if ((int)maps[s].size() != a.sort_sizes.at(s)) return false;
    for (int v : maps[s])
      if (v < 0 || v >= b.sort_sizes.at(s)) return false;
  }
  for (size_t r = 0; r < sig.rels.size(); ++r) {
    const auto& decl = sig.rels[r];
    for (const auto& tup : a.rels.at(r)) {
      std::vector<int> img(tup.size());
      for (size_t i = 0; i < tup.size(); ++i) img[i] = maps[decl.arg_sorts[i]][tup[i]];
      if (!std::binary_search(b.rels.at(r).begin(), b.rels.at(r).end(), img)) return false;
    }
  }
  return true;
}

std::vector<std::vector<std::vector<int>>> all_homs(const Signature& sig,
                                                    const FinStructure& a,
                                                    const FinStructure& b) {
  validate_structure(sig, a);
  validate_structure(sig, b);
  // Flattened positions (sort, element); odometer with a full check per leaf.
  std::vector<std::pair<int, int>> positions;
  for (int s = 0; s < (int)a.sort_sizes.size(); ++s)
    for (int e = 0; e < a.sort_sizes[s]; ++e) positions.emplace_back(s, e);
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> maps(sig.sorts.size());
  for (size_t s = 0; s < maps.size(); ++s) maps[s].assign(a.sort_sizes[s], 0);
  for (const auto& [s, e] : positions)
    if (b.sort_sizes[s] == 0) return out; // nothing to map into
  std::vector<int> vals(positions.size(), 0);
  for (;;) {
    for (size_t i = 0; i < positions.size(); ++i)
      maps[positions[i].first][positions[i].second] = vals[i];
    if (is_structure_hom(sig, a, b, maps)) out.push_back(maps);
    if (positions.empty()) break;
    int i = (int)positions.size() - 1;
    while (i >= 0 && ++vals[i] == b.sort_sizes[positions[i].first]) vals[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

bool is_injective(const Signature& sig, const FinStructure& k, const StructureMorphism& h) {
  if (!is_structure_hom(sig, h.src, h.tgt, h.maps)) fail("h is not a homomorphism");
  validate_structure(sig, k);
  for (const auto& u : all_homs(sig, h.src, k)) {
    bool factors = false;
    for (const auto& v : all_homs(sig, h.tgt, k)) {
      bool commutes = true;
      for (size_t s = 0; s < u.size() && commutes; ++s)
        for (size_t e = 0; e < u[s].size(); ++e)
          if (v[s][h.maps[s][e]] != u[s][e]) {
            commutes = false;
            break;
          }
      if (commutes) {
        factors = true;
        break;
      }
    }
    if (!factors) return false;
  }
  return true;
}

RegularTheory theory_from_injectivity(const Signature& sig,
                                      const std::vector<StructureMorphism>& ms) {
  RegularTheory t;
  t.sig = sig;
  for (const auto& h : ms) {
    if (!is_structure_hom(sig, h.src, h.tgt, h.maps)) fail("h is not a homomorphism");
    const FinStructure& a = h.src;
    const FinStructure& b = h.tgt;
    Sequent sq;
    // One variable per element of A, flattened sort-major.
    std::vector<std::vector<std::string>> xvar(sig.sorts.size());
    int counter = 0;
    for (size_t s = 0; s < sig.sorts.size(); ++s)
      for (int e = 0; e < a.sort_sizes[s]; ++e) {
        std::string v = "x" + std::to_string(counter++);
        xvar[s].push_back(v);
        sq.context.push_back(v);
        sq.var_sorts[v] = (int)s;
      }
    std::vector<RegularFormula> diag_a;
    for (size_t r = 0; r < sig.rels.size(); ++r)
      for (const auto& tup : a.rels[r]) {
        std::vector<std::string> args;
        for (size_t i = 0; i < tup.size(); ++i)
          args.push_back(xvar[sig.rels[r].arg_sorts[i]][tup[i]]);
        diag_a.push_back(RegularFormula::atom((int)r, std::move(args)));
      }
    sq.lhs = RegularFormula::conj(std::move(diag_a));

    // Elements of B: images take the variable of their first preimage,
    // the rest get fresh existentials.
    std::vector<std::vector<std::string>> bvar(sig.sorts.size());
    std::vector<std::string> ys;
    std::vector<RegularFormula> rhs_atoms;
    counter = 0;
    for (size_t s = 0; s < sig.sorts.size(); ++s) {
      bvar[s].assign(b.sort_sizes[s], "");
      for (int e = 0; e < a.sort_sizes[s]; ++e) {
        int img = h.maps[s][e];
        if (bvar[s][img].empty())
          bvar[s][img] = xvar[s][e];
        else // h identifies e with an earlier element: assert equality
          rhs_atoms.push_back(RegularFormula::eq(xvar[s][e], bvar[s][img]));
      }
      for (int e = 0; e < b.sort_sizes[s]; ++e)
        if (bvar[s][e].empty()) {
          std::string v = "y" + std::to_string(counter++);
          bvar[s][e] = v;
          ys.push_back(v);
          sq.var_sorts[v] = (int)s;
        }
    }
    for (size_t r = 0; r < sig.rels.size(); ++r)
      for (const auto& tup : b.rels[r]) {
        std::vector<std::string> args;
        for (size_t i = 0; i < tup.size(); ++i)
          args.push_back(bvar[sig.rels[r].arg_sorts[i]][tup[i]]);
        rhs_atoms.push_back(RegularFormula::atom((int)r, std::move(args)));
      }
    sq.rhs = RegularFormula::exists(std::move(ys), RegularFormula::conj(std::move(rhs_atoms)));
    t.sequents.push_back(std::move(sq));
  }
  return t;
}

} // namespace catlogic
