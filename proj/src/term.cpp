#include "algvar/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

namespace algvar {

std::size_t Term::depth() const {
  std::size_t d = 0;
  for (const auto& a : args) d = std::max(d, a.depth());
  return d + 1;
}

namespace {

// ------------------------------------------------------------------ lexer

enum class Tok { ident, one, lparen, rparen, comma, star, omega, colon, eq, leq, implies, amp, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

std::vector<Token> lex(std::string_view s, std::size_t line) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
  while (i < s.size()) {
    const char c = s[i];
    const std::size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && is_ident(s[j])) ++j;
      out.push_back({Tok::ident, std::string(s.substr(i, j - i)), col});
      i = j;
    } else if (c == '1' && (i + 1 == s.size() || !is_ident(s[i + 1]))) {
      out.push_back({Tok::one, "1", col});
      ++i;
    } else if (c == '(') {
      out.push_back({Tok::lparen, "(", col});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::rparen, ")", col});
      ++i;
    } else if (c == ',') {
      out.push_back({Tok::comma, ",", col});
      ++i;
    } else if (c == '*') {
      out.push_back({Tok::star, "*", col});
      ++i;
    } else if (c == ':') {
      out.push_back({Tok::colon, ":", col});
      ++i;
    } else if (c == '&') {
      out.push_back({Tok::amp, "&", col});
      ++i;
    } else if (c == '^') {
      if (s.substr(i, 2) == "^w" && (i + 2 == s.size() || !is_ident(s[i + 2]))) {
        out.push_back({Tok::omega, "^w", col});
        i += 2;
      } else if (s.substr(i, 3) == "^\xCF\x89") {
        out.push_back({Tok::omega, "^w", col});
        i += 3;
      } else {
        throw ParseError("expected 'w' after '^'", line, col);
      }
    } else if (s.substr(i, 2) == "<=") {
      out.push_back({Tok::leq, "<=", col});
      i += 2;
    } else if (s.substr(i, 2) == "=>") {
      out.push_back({Tok::implies, "=>", col});
      i += 2;
    } else if (c == '=') {
      out.push_back({Tok::eq, "=", col});
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }
  out.push_back({Tok::end, "", s.size() + 1});
  return out;
}

// ------------------------------------------------------------ untyped AST

struct Raw {
  enum class K { var, call, star, omega, one };
  K kind;
  std::string name;
  std::string annot;
  std::vector<Raw> kids;
  std::size_t column = 0;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::size_t line) : toks_(std::move(toks)), line_(line) {}

  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, peek().column); }

  Raw term() {
    Raw left = factor();
    while (peek().kind == Tok::star) {
      const auto col = take().column;
      Raw right = factor();
      Raw node{Raw::K::star, "*", "", {}, col};
      node.kids.push_back(std::move(left));
      node.kids.push_back(std::move(right));
      left = std::move(node);
    }
    return left;
  }

  Raw factor() {
    Raw base = atom();
    while (peek().kind == Tok::omega) {
      const auto col = take().column;
      Raw node{Raw::K::omega, "^w", "", {}, col};
      node.kids.push_back(std::move(base));
      base = std::move(node);
    }
    return base;
  }

  Raw atom() {
    const Token t = peek();
    if (t.kind == Tok::lparen) {
      take();
      Raw inner = term();
      expect(Tok::rparen, "')'");
      return inner;
    }
    if (t.kind == Tok::one) {
      take();
      return Raw{Raw::K::one, "1", "", {}, t.column};
    }
    if (t.kind != Tok::ident) fail("expected a term");
    take();
    if (peek().kind == Tok::lparen) {
      take();
      Raw call{Raw::K::call, t.text, "", {}, t.column};
      if (peek().kind != Tok::rparen) {
        call.kids.push_back(term());
        while (peek().kind == Tok::comma) {
          take();
          call.kids.push_back(term());
        }
      }
      expect(Tok::rparen, "')'");
      return call;
    }
    Raw v{Raw::K::var, t.text, "", {}, t.column};
    if (peek().kind == Tok::colon) {
      take();
      if (peek().kind != Tok::ident) fail("expected a sort name");
      v.annot = take().text;
    }
    return v;
  }

  std::size_t line() const { return line_; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

// -------------------------------------------------------- sort inference

class Typer {
 public:
  Typer(const Signature& sig, std::size_t line) : sig_(sig), line_(line) {}

  void declare(const Raw& r) {
    if (r.kind == Raw::K::var) {
      if (!vars_.count(r.name)) {
        order_.push_back(r.name);
        vars_[r.name] = sig_.num_sorts() == 1 ? std::optional<SortId>(0) : std::nullopt;
      }
      if (!r.annot.empty()) {
        auto s = sig_.find_sort(r.annot);
        if (!s) throw ParseError("unknown sort '" + r.annot + "'", line_, r.column);
        assign(r, *s);
      }
    }
    for (const auto& k : r.kids) declare(k);
  }

  // Returns the sort of r if it can be determined, assigning variable sorts
  // from the expectation where possible.
  std::optional<SortId> infer(const Raw& r, std::optional<SortId> expected) {
    switch (r.kind) {
      case Raw::K::var: {
        auto& v = vars_[r.name];
        if (!v && expected) assign(r, *expected);
        if (v && expected && *v != *expected)
          throw ParseError("variable '" + r.name + "' used at two sorts", line_, r.column);
        return v;
      }
      case Raw::K::one: {
        auto o = resolve_one(expected, r.column);
        if (o) return sig_.op(*o).output;
        return std::nullopt;
      }
      case Raw::K::call: {
        auto o = sig_.find_op(r.name);
        if (!o) throw ParseError("undeclared op '" + r.name + "'", line_, r.column);
        const auto& op = sig_.op(*o);
        if (op.inputs.size() != r.kids.size())
          throw ParseError("op '" + r.name + "' expects " + std::to_string(op.inputs.size()) + " arguments",
                           line_, r.column);
        for (std::size_t i = 0; i < r.kids.size(); ++i) {
          auto got = infer(r.kids[i], op.inputs[i]);
          if (got && *got != op.inputs[i])
            throw ParseError("argument sort mismatch for '" + r.name + "'", line_, r.kids[i].column);
        }
        if (expected && *expected != op.output)
          throw ParseError("op '" + r.name + "' has the wrong output sort", line_, r.column);
        return op.output;
      }
      case Raw::K::omega: {
        auto s = infer(r.kids[0], expected);
        if (s && expected && *s != *expected) throw ParseError("sort mismatch at '^w'", line_, r.column);
        return s;
      }
      case Raw::K::star: {
        auto l = infer(r.kids[0], std::nullopt);
        auto rr = infer(r.kids[1], std::nullopt);
        auto cands = star_candidates(l, rr, expected);
        if (cands.empty()) throw ParseError("no binary operation fits '*' here", line_, r.column);
        if (cands.size() > 1) return std::nullopt;
        const auto& op = sig_.op(cands[0]);
        if (!l) infer(r.kids[0], op.inputs[0]);
        if (!rr) infer(r.kids[1], op.inputs[1]);
        return op.output;
      }
    }
    return std::nullopt;
  }

  std::vector<OpId> star_candidates(std::optional<SortId> l, std::optional<SortId> r,
                                    std::optional<SortId> out) const {
    std::vector<OpId> c;
    for (OpId o = 0; o < sig_.num_ops(); ++o) {
      const auto& op = sig_.op(o);
      if (op.inputs.size() != 2) continue;
      if (l && op.inputs[0] != *l) continue;
      if (r && op.inputs[1] != *r) continue;
      if (out && op.output != *out) continue;
      c.push_back(o);
    }
    return c;
  }

  std::optional<OpId> resolve_one(std::optional<SortId> expected, std::size_t column) const {
    std::vector<OpId> c;
    for (OpId o = 0; o < sig_.num_ops(); ++o) {
      const auto& op = sig_.op(o);
      if (op.inputs.empty() && (!expected || op.output == *expected)) c.push_back(o);
    }
    if (c.empty()) throw ParseError("no constant fits '1' here", line_, column);
    if (c.size() > 1) return std::nullopt;
    return c[0];
  }

  Term build(const Raw& r, std::optional<SortId> expected) {
    switch (r.kind) {
      case Raw::K::var: {
        auto v = vars_.at(r.name);
        if (!v) throw ParseError("cannot infer the sort of '" + r.name + "'", line_, r.column);
        auto idx = std::find(order_.begin(), order_.end(), r.name) - order_.begin();
        return Term::var(static_cast<std::size_t>(idx), *v);
      }
      case Raw::K::one: {
        auto o = resolve_one(expected, r.column);
        if (!o) throw ParseError("ambiguous constant '1'", line_, r.column);
        return Term{Term::Kind::apply, *o, sig_.op(*o).output, {}};
      }
      case Raw::K::call: {
        OpId o = sig_.op_id(r.name);
        const auto& op = sig_.op(o);
        Term t{Term::Kind::apply, o, op.output, {}};
        for (std::size_t i = 0; i < r.kids.size(); ++i) t.args.push_back(build(r.kids[i], op.inputs[i]));
        return t;
      }
      case Raw::K::omega: {
        Term inner = build(r.kids[0], expected);
        if (!product_op(sig_, inner.sort))
          throw ParseError("'^w' needs a unique binary product on sort " + sig_.sorts()[inner.sort], line_,
                           r.column);
        SortId s = inner.sort;
        Term t{Term::Kind::omega, 0, s, {}};
        t.args.push_back(std::move(inner));
        return t;
      }
      case Raw::K::star: {
        auto l = infer(r.kids[0], std::nullopt);
        auto rr = infer(r.kids[1], std::nullopt);
        auto cands = star_candidates(l, rr, expected);
        if (cands.size() != 1) throw ParseError("ambiguous '*'", line_, r.column);
        const auto& op = sig_.op(cands[0]);
        Term t{Term::Kind::apply, cands[0], op.output, {}};
        t.args.push_back(build(r.kids[0], op.inputs[0]));
        t.args.push_back(build(r.kids[1], op.inputs[1]));
        return t;
      }
    }
    throw ParseError("bad term", line_, r.column);
  }

  std::size_t known() const {
    std::size_t n = 0;
    for (const auto& [k, v] : vars_) n += v.has_value();
    return n;
  }

  const std::vector<std::string>& order() const { return order_; }
  std::vector<SortId> sorts() const {
    std::vector<SortId> out;
    for (const auto& n : order_) out.push_back(*vars_.at(n));
    return out;
  }

 private:
  void assign(const Raw& r, SortId s) {
    auto& v = vars_[r.name];
    if (v && *v != s) throw ParseError("variable '" + r.name + "' used at two sorts", line_, r.column);
    v = s;
  }

  const Signature& sig_;
  std::size_t line_;
  std::map<std::string, std::optional<SortId>> vars_;
  std::vector<std::string> order_;
};

Law parse_law_at(const Signature& sig, std::string_view text, std::size_t line) {
  Parser p(lex(text, line), line);
  struct Rel {
    Raw lhs, rhs;
    LawRelation rel;
    std::size_t column;
  };
  std::vector<Rel> parts;
  bool implication = false;
  while (true) {
    Raw l = p.term();
    const Token op = p.peek();
    LawRelation rel;
    if (op.kind == Tok::eq)
      rel = LawRelation::eq;
    else if (op.kind == Tok::leq)
      rel = LawRelation::leq;
    else
      p.fail("expected '=' or '<='");
    p.take();
    Raw r = p.term();
    parts.push_back({std::move(l), std::move(r), rel, op.column});
    if (p.peek().kind == Tok::amp) {
      if (implication) p.fail("'&' is only allowed among premises");
      p.take();
      continue;
    }
    if (p.peek().kind == Tok::implies) {
      if (implication) p.fail("only one '=>' is allowed");
      implication = true;
      p.take();
      continue;
    }
    if (p.peek().kind != Tok::end) p.fail("unexpected token '" + p.peek().text + "'");
    break;
  }
  if (parts.size() > 1 && !implication) p.fail("premises must be followed by '=>'");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i)
    if (parts[i].rel != LawRelation::eq) throw ParseError("premises must be equations", line, parts[i].column);
  if (parts.back().rel == LawRelation::leq && !sig.ordered())
    throw ParseError("inequations need an ordered signature", line, parts.back().column);

  Typer ty(sig, line);
  for (const auto& part : parts) {
    ty.declare(part.lhs);
    ty.declare(part.rhs);
  }
  for (int pass = 0; pass < 16; ++pass) {
    const auto before = ty.known();
    for (const auto& part : parts) {
      auto ls = ty.infer(part.lhs, std::nullopt);
      auto rs = ty.infer(part.rhs, ls);
      if (!ls && rs) ty.infer(part.lhs, rs);
    }
    if (ty.known() == before && pass > 0) break;
  }
  Law law;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto ls = ty.infer(parts[i].lhs, std::nullopt);
    auto rs = ty.infer(parts[i].rhs, ls);
    if (!ls) ls = ty.infer(parts[i].lhs, rs);
    Term lt = ty.build(parts[i].lhs, ls ? ls : rs);
    Term rt = ty.build(parts[i].rhs, lt.sort);
    if (lt.sort != rt.sort) throw ParseError("both sides must have the same sort", line, parts[i].column);
    if (i + 1 < parts.size()) {
      law.premises.push_back({std::move(lt), std::move(rt)});
    } else {
      law.lhs = std::move(lt);
      law.rhs = std::move(rt);
      law.relation = parts[i].rel;
    }
  }
  law.var_names = ty.order();
  law.var_sorts = ty.sorts();
  return law;
}

// --------------------------------------------------------------- printing

bool infix_op(const Signature& sig, OpId o) {
  const auto& op = sig.op(o);
  if (op.inputs.size() != 2) return false;
  if (op.name != "mul" && op.name != "prod" && op.name != "mix") return false;
  for (OpId p = 0; p < sig.num_ops(); ++p)
    if (p != o && sig.op(p).inputs == op.inputs) return false;
  return true;
}

bool unique_constant(const Signature& sig, OpId o) {
  for (OpId p = 0; p < sig.num_ops(); ++p)
    if (p != o && sig.op(p).inputs.empty()) return false;
  return true;
}

class Printer {
 public:
  Printer(const Signature& sig, const Law& law) : sig_(sig), law_(law), shown_(law.var_names.size(), false) {}

  std::string print(const Term& t) {
    switch (t.kind) {
      case Term::Kind::var: {
        std::string s = law_.var_names[t.id];
        if (!shown_[t.id] && sig_.num_sorts() > 1) s += ":" + sig_.sorts()[t.sort];
        shown_[t.id] = true;
        return s;
      }
      case Term::Kind::omega: {
        const Term& a = t.args[0];
        std::string inner = print(a);
        if (a.kind == Term::Kind::apply && infix_op(sig_, a.id)) inner = "(" + inner + ")";
        return inner + "^w";
      }
      case Term::Kind::apply: {
        const auto& op = sig_.op(t.id);
        if (t.args.empty()) return unique_constant(sig_, t.id) ? "1" : op.name + "()";
        if (infix_op(sig_, t.id)) {
          std::string l = print(t.args[0]);
          std::string r = print(t.args[1]);
          const Term& b = t.args[1];
          if (b.kind == Term::Kind::apply && infix_op(sig_, b.id)) r = "(" + r + ")";
          return l + " * " + r;
        }
        std::string s = op.name + "(";
        for (std::size_t i = 0; i < t.args.size(); ++i) s += (i ? "," : "") + print(t.args[i]);
        return s + ")";
      }
    }
    return "";
  }

 private:
  const Signature& sig_;
  const Law& law_;
  std::vector<bool> shown_;
};

}  // namespace

Law parse_law(const Signature& sig, std::string_view text) { return parse_law_at(sig, text, 1); }

std::string to_string(const Signature& sig, const Law& law) {
  Printer p(sig, law);
  std::string out;
  for (std::size_t i = 0; i < law.premises.size(); ++i) {
    if (i) out += " & ";
    out += p.print(law.premises[i].lhs) + " = " + p.print(law.premises[i].rhs);
  }
  if (!law.premises.empty()) out += " => ";
  out += p.print(law.lhs);
  out += law.relation == LawRelation::eq ? " = " : " <= ";
  out += p.print(law.rhs);
  return out;
}

std::vector<Law> parse_laws(const Signature& sig, std::string_view text) {
  std::vector<Law> out;
  std::size_t line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto row = text.substr(start, end - start);
    ++line;
    auto first = row.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && row[first] != '#') out.push_back(parse_law_at(sig, row, line));
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

std::string serialize_laws(const Signature& sig, const std::vector<Law>& laws) {
  std::string out;
  for (const auto& l : laws) out += to_string(sig, l) + "\n";
  return out;
}

// ------------------------------------------------------------- evaluation

namespace {

void collect_omega_sorts(const Term& t, std::set<SortId>& out) {
  if (t.kind == Term::Kind::omega) out.insert(t.sort);
  for (const auto& a : t.args) collect_omega_sorts(a, out);
}

std::vector<OpId> omega_products(const FiniteAlgebra& alg, const std::vector<const Term*>& terms) {
  std::set<SortId> sorts;
  for (auto* t : terms) collect_omega_sorts(*t, sorts);
  std::vector<OpId> mul(alg.num_sorts(), static_cast<OpId>(-1));
  for (auto s : sorts) {
    auto o = product_op(alg.signature(), s);
    if (!o) throw AlgebraError("sort " + alg.signature().sorts()[s] + " has no unique binary product");
    if (!detail::is_associative(alg, *o))
      throw AlgebraError("product on sort " + alg.signature().sorts()[s] + " is not associative");
    mul[s] = *o;
  }
  return mul;
}

Elem eval(const FiniteAlgebra& alg, const Term& t, std::span<const Elem> env, const std::vector<OpId>& mul) {
  switch (t.kind) {
    case Term::Kind::var:
      return env[t.id];
    case Term::Kind::omega:
      return detail::omega_power_unchecked(alg, mul[t.sort], eval(alg, t.args[0], env, mul));
    case Term::Kind::apply: {
      Elem buf[8];
      std::vector<Elem> big;
      Elem* args = buf;
      if (t.args.size() > 8) {
        big.resize(t.args.size());
        args = big.data();
      }
      for (std::size_t i = 0; i < t.args.size(); ++i) args[i] = eval(alg, t.args[i], env, mul);
      return alg.apply(t.id, std::span<const Elem>(args, t.args.size()));
    }
  }
  return 0;
}

void check_sorts(const FiniteAlgebra& alg, const Term& t, const std::vector<SortId>* var_sorts) {
  const auto& sig = alg.signature();
  if (t.kind == Term::Kind::apply) {
    if (t.id >= sig.num_ops()) throw AlgebraError("term references an undeclared op");
    const auto& op = sig.op(t.id);
    if (op.inputs.size() != t.args.size() || op.output != t.sort) throw AlgebraError("term is not well-sorted");
    for (std::size_t i = 0; i < t.args.size(); ++i)
      if (t.args[i].sort != op.inputs[i]) throw AlgebraError("term is not well-sorted");
  } else if (t.kind == Term::Kind::omega) {
    if (t.args.size() != 1 || t.args[0].sort != t.sort) throw AlgebraError("term is not well-sorted");
  } else if (var_sorts) {
    if (t.id >= var_sorts->size() || (*var_sorts)[t.id] != t.sort) throw AlgebraError("variable sort mismatch");
  }
  if (t.sort >= sig.num_sorts()) throw AlgebraError("term is not well-sorted");
  for (const auto& a : t.args) check_sorts(alg, a, var_sorts);
}

}  // namespace

Elem eval_term(const FiniteAlgebra& alg, const Term& term, std::span<const Elem> env) {
  check_sorts(alg, term, nullptr);
  std::vector<const Term*> ts{&term};
  auto mul = omega_products(alg, ts);
  std::function<void(const Term&)> bound = [&](const Term& t) {
    if (t.kind == Term::Kind::var) {
      if (t.id >= env.size()) throw AlgebraError("unbound variable");
      if (env[t.id] >= alg.size(t.sort)) throw AlgebraError("assignment outside the carrier of the variable's sort");
    }
    for (const auto& a : t.args) bound(a);
  };
  bound(term);
  return eval(alg, term, env, mul);
}

std::vector<Elem> evaluate_all(const FiniteAlgebra& alg, const Term& term, const std::vector<SortId>& var_sorts) {
  check_sorts(alg, term, &var_sorts);
  std::vector<const Term*> ts{&term};
  auto mul = omega_products(alg, ts);
  std::vector<std::size_t> radices;
  for (auto s : var_sorts) radices.push_back(alg.size(s));
  std::vector<Elem> out;
  for_each_tuple(radices, [&](std::span<const Elem> env) { out.push_back(eval(alg, term, env, mul)); });
  return out;
}

LawReport check_law(const FiniteAlgebra& alg, const Law& law) {
  if (law.relation == LawRelation::leq && !alg.ordered())
    throw AlgebraError("inequation checked on an unordered algebra");
  std::vector<const Term*> ts{&law.lhs, &law.rhs};
  for (const auto& p : law.premises) {
    ts.push_back(&p.lhs);
    ts.push_back(&p.rhs);
  }
  for (auto* t : ts) check_sorts(alg, *t, &law.var_sorts);
  auto mul = omega_products(alg, ts);
  std::vector<std::size_t> radices;
  for (auto s : law.var_sorts) radices.push_back(alg.size(s));
  LawReport rep;
  for_each_tuple(radices, [&](std::span<const Elem> env) {
    if (!rep.pass) return;
    for (const auto& p : law.premises)
      if (eval(alg, p.lhs, env, mul) != eval(alg, p.rhs, env, mul)) return;
    const Elem l = eval(alg, law.lhs, env, mul);
    const Elem r = eval(alg, law.rhs, env, mul);
    const bool ok = law.relation == LawRelation::eq ? l == r : alg.leq(law.lhs.sort, l, r);
    if (!ok) {
      rep.pass = false;
      rep.witness.assign(env.begin(), env.end());
    }
  });
  return rep;
}

LawReport validate_laws(const FiniteAlgebra& alg, const std::vector<Law>& laws) {
  for (std::size_t i = 0; i < laws.size(); ++i) {
    auto r = check_law(alg, laws[i]);
    if (!r.pass) {
      r.failed_law = i;
      return r;
    }
  }
  return {};
}

std::string describe_witness(const FiniteAlgebra& alg, const Law& law, const std::vector<Elem>& env) {
  std::string out;
  for (std::size_t i = 0; i < env.size() && i < law.var_names.size(); ++i) {
    if (i) out += ", ";
    const SortId s = law.var_sorts[i];
    out += law.var_names[i] + "=s" + std::to_string(s) + "#" + std::to_string(env[i]) + "(" +
           alg.label(s, env[i]) + ")";
  }
  return out;
}

// ---------------------------------------------------------------- presets

namespace presets {

namespace {

std::vector<Law> parse_all(const Signature& sig, std::initializer_list<const char*> lines) {
  std::vector<Law> out;
  for (auto* l : lines) out.push_back(parse_law(sig, l));
  return out;
}

}  // namespace

std::vector<Law> semigroup(const Signature& sig) { return parse_all(sig, {"x * y * z = x * (y * z)"}); }

std::vector<Law> monoid(const Signature& sig) {
  return parse_all(sig, {"x * y * z = x * (y * z)", "1 * x = x", "x * 1 = x"});
}

std::vector<Law> wilke(const FiniteAlgebra& alg) {
  const auto& sig = alg.signature();
  auto out = parse_all(sig, {
                                "x:plus * y:plus * z:plus = x * (y * z)",
                                "x:plus * y:plus * z:omega = x * (y * z)",
                                "x:plus * opow(y:plus * x) = opow(x * y)",
                            });
  const std::size_t n = alg.size(sig.sort_id("plus"));
  std::string power = "x:plus";
  for (std::size_t k = 2; k <= n; ++k) {
    power += " * x";
    out.push_back(parse_law(sig, "opow(" + power + ") = opow(x)"));
  }
  return out;
}

std::vector<Law> tree(const Signature& sig) {
  return parse_all(sig, {
                            "sigma(sigma(p:c,q),r) = sigma(p,sigma(q,r))",
                            "eta(sigma(p:c,q),t) = eta(p,eta(q,t))",
                            "eta(lambda(a:l,s),t) = kappa(a,t,s)",
                            "eta(rho(a:l,s),t) = kappa(a,s,t)",
                        });
}

std::vector<Law> stabilization(const Signature& sig) {
  auto out = monoid(sig);
  auto extra = parse_all(sig, {
                                  "s * t * (s * t) = s * t & t * s * (t * s) = t * s => sharp(s * t) * s = s * sharp(t * s)",
                                  "e * e = e => sharp(e) * sharp(e) = sharp(e)",
                                  "e * e = e => sharp(sharp(e)) = sharp(e)",
                                  "e * e = e => sharp(e) * e = sharp(e)",
                                  "e * e = e => e * sharp(e) = sharp(e)",
                                  "x = 1 => sharp(x) = x",
                                  "x * x = x => x^w = x",
                              });
  out.insert(out.end(), extra.begin(), extra.end());
  // the order part of (S2) only makes sense for ordered monoids
  if (sig.ordered()) out.insert(out.begin() + 8, parse_law(sig, "e * e = e => sharp(e) <= e"));
  return out;
}

std::vector<Law> by_name(const FiniteAlgebra& alg, std::string_view name) {
  const auto& sig = alg.signature();
  if (name == "semigroup") return semigroup(sig);
  if (name == "monoid") return monoid(sig);
  if (name == "omega" || name == "wilke") return wilke(alg);
  if (name == "tree") return tree(sig);
  if (name == "stabilization") return stabilization(sig);
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

}  // namespace presets

}  // namespace algvar
