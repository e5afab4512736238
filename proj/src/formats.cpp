#include "algvar/formats.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace algvar {

using json = nlohmann::ordered_json;

namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tok;
  std::vector<std::size_t> col;

  [[noreturn]] void fail(const std::string& what, std::size_t i = 0) const {
    throw ParseError(what, number, i < col.size() ? col[i] : 1);
  }
  const std::string& at(std::size_t i) const {
    if (i >= tok.size()) fail("missing field", tok.size() ? tok.size() - 1 : 0);
    return tok[i];
  }
};

std::vector<Line> lines_of(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto raw = text.substr(pos, end - pos);
    ++number;
    Line l{number, {}, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      if (i >= raw.size()) break;
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      l.tok.emplace_back(raw.substr(i, j - i));
      l.col.push_back(i + 1);
      i = j;
    }
    if (!l.tok.empty() && l.tok[0][0] != '#') out.push_back(std::move(l));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

// "name(a,b)" -> name, args split at top-level commas.
std::pair<std::string, std::vector<std::string>> split_call(const Line& l, std::size_t i) {
  const auto& t = l.at(i);
  auto open = t.find('(');
  if (open == std::string::npos || open == 0 || t.back() != ')') l.fail("expected name(args)", i);
  std::string name = t.substr(0, open);
  std::string inner = t.substr(open + 1, t.size() - open - 2);
  std::vector<std::string> args;
  if (inner.empty()) return {name, args};
  int depth = 0;
  std::string cur;
  for (char c : inner) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      args.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  args.push_back(cur);
  return {name, args};
}

std::size_t index_in(const std::vector<std::string>& v, const std::string& x) {
  return static_cast<std::size_t>(std::find(v.begin(), v.end(), x) - v.begin());
}

// ------------------------------------------------------------ algebra text

struct AlgebraReader {
  std::vector<std::string> sorts;
  bool ordered = false;
  std::vector<std::vector<std::string>> labels;
  std::vector<bool> declared;
  std::vector<OpSymbol> ops;
  std::vector<std::size_t> op_line;
  std::vector<std::vector<Elem>> tables;
  std::vector<std::vector<char>> filled;
  std::vector<std::vector<std::pair<Elem, Elem>>> order;
  std::optional<SortId> order_sort;
  bool have_sorts = false;

  SortId sort(const Line& l, std::size_t i) const {
    auto k = index_in(sorts, l.at(i));
    if (k == sorts.size()) l.fail("unknown sort '" + l.tok[i] + "'", i);
    return k;
  }
  Elem element(const Line& l, std::size_t i, SortId s, const std::string& label) const {
    auto k = index_in(labels[s], label);
    if (k == labels[s].size()) l.fail("unknown element '" + label + "' of sort " + sorts[s], i);
    return static_cast<Elem>(k);
  }
  std::size_t offset(OpId o, const std::vector<Elem>& args) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < args.size(); ++i) off = off * labels[ops[o].inputs[i]].size() + args[i];
    return off;
  }

  // Returns false for lines that belong to someone else.
  bool handle(const Line& l) {
    const auto& k = l.tok[0];
    if (k == "sorts") {
      if (have_sorts) l.fail("sorts declared twice");
      have_sorts = true;
      sorts.assign(l.tok.begin() + 1, l.tok.end());
      labels.assign(sorts.size(), {});
      declared.assign(sorts.size(), false);
      order.assign(sorts.size(), {});
      return true;
    }
    if (!have_sorts) l.fail("expected 'sorts' first");
    if (k == "ordered") {
      if (l.tok.size() != 1) l.fail("unexpected field", 1);
      ordered = true;
      return true;
    }
    if (k == "elements") {
      auto s = sort(l, 1);
      if (declared[s]) l.fail("elements of " + sorts[s] + " declared twice", 1);
      declared[s] = true;
      labels[s].assign(l.tok.begin() + 2, l.tok.end());
      return true;
    }
    if (k == "op") {
      if (l.tok.size() < 4 || l.tok[2] != ":" || l.tok[l.tok.size() - 2] != "->") l.fail("expected op NAME : SORTS -> SORT");
      OpSymbol op{l.tok[1], {}, 0};
      for (std::size_t i = 3; i + 2 < l.tok.size(); ++i) op.inputs.push_back(sort(l, i));
      op.output = sort(l, l.tok.size() - 1);
      for (const auto& o : ops)
        if (o.name == op.name) l.fail("op '" + op.name + "' declared twice", 1);
      std::size_t n = 1;
      for (auto in : op.inputs) n *= labels[in].size();
      ops.push_back(op);
      op_line.push_back(l.number);
      tables.emplace_back(n, 0);
      filled.emplace_back(n, 0);
      return true;
    }
    if (k == "order") {
      order_sort = sort(l, 1);
      if (l.tok.size() != 2) l.fail("unexpected field", 2);
      return true;
    }
    if (l.tok.size() == 3 && l.tok[1] == "<=") {
      if (!order_sort) l.fail("order pair outside an order section");
      auto s = *order_sort;
      order[s].emplace_back(element(l, 0, s, l.tok[0]), element(l, 2, s, l.tok[2]));
      return true;
    }
    if (k.find('(') != std::string::npos) {
      if (l.tok.size() != 3 || l.tok[1] != "=") l.fail("expected name(args) = value");
      auto [name, args] = split_call(l, 0);
      OpId o = 0;
      while (o < ops.size() && ops[o].name != name) ++o;
      if (o == ops.size()) l.fail("unknown op '" + name + "'");
      if (args.size() != ops[o].inputs.size()) l.fail("wrong number of arguments for " + name);
      std::vector<Elem> xs;
      for (std::size_t i = 0; i < args.size(); ++i) xs.push_back(element(l, 0, ops[o].inputs[i], args[i]));
      auto off = offset(o, xs);
      if (filled[o][off]) l.fail("entry defined twice");
      filled[o][off] = 1;
      tables[o][off] = element(l, 2, ops[o].output, l.tok[2]);
      return true;
    }
    return false;
  }

  FiniteAlgebra finish() const {
    if (!have_sorts) throw ParseError("missing 'sorts' line", 1, 1);
    for (OpId o = 0; o < ops.size(); ++o)
      if (std::find(filled[o].begin(), filled[o].end(), 0) != filled[o].end())
        throw AlgebraError("line " + std::to_string(op_line[o]) + ": table of op '" + ops[o].name + "' is not total");
    SortedRelation rel;
    if (ordered)
      for (SortId s = 0; s < sorts.size(); ++s) {
        Relation r = Relation::identity(labels[s].size());
        for (auto [a, b] : order[s]) r.set(a, b);
        rel.push_back(std::move(r));
      }
    else
      for (const auto& o : order)
        if (!o.empty()) throw AlgebraError("order given for an unordered algebra");
    return FiniteAlgebra(Signature(sorts, ops, ordered), labels, tables, std::move(rel));
  }
};

void write_algebra(std::ostringstream& out, const FiniteAlgebra& a) {
  const auto& sig = a.signature();
  out << "sorts " << join(sig.sorts()) << "\n";
  if (a.ordered()) out << "ordered\n";
  for (SortId s = 0; s < a.num_sorts(); ++s) {
    out << "elements " << sig.sorts()[s];
    for (const auto& l : a.labels(s)) out << ' ' << l;
    out << "\n";
  }
  for (const auto& op : sig.ops()) {
    out << "op " << op.name << " :";
    for (auto in : op.inputs) out << ' ' << sig.sorts()[in];
    out << " -> " << sig.sorts()[op.output] << "\n";
  }
  for (OpId o = 0; o < sig.num_ops(); ++o) {
    const auto& op = sig.op(o);
    for_each_tuple(a.input_sizes(o), [&](std::span<const Elem> t) {
      out << op.name << '(';
      for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << a.label(op.inputs[i], t[i]);
      out << ") = " << a.label(op.output, a.apply(o, t)) << "\n";
    });
  }
  if (a.ordered())
    for (SortId s = 0; s < a.num_sorts(); ++s) {
      bool header = false;
      for (Elem x = 0; x < a.size(s); ++x)
        for (Elem y = 0; y < a.size(s); ++y) {
          if (x == y || !a.leq(s, x, y)) continue;
          if (!header) out << "order " << sig.sorts()[s] << "\n";
          header = true;
          out << a.label(s, x) << " <= " << a.label(s, y) << "\n";
        }
    }
}

void write_letters_accept(std::ostringstream& out, const Recognizer& rec) {
  const auto& a = *rec.algebra;
  for (const auto& l : rec.letters)
    out << "letter " << l.name << ' ' << a.signature().sorts()[l.sort] << ' ' << a.label(l.sort, l.image) << "\n";
  for (SortId s = 0; s < a.num_sorts(); ++s) {
    std::vector<std::string> acc;
    for (Elem x = 0; x < a.size(s); ++x)
      if (rec.accept[s][x]) acc.push_back(a.label(s, x));
    if (!acc.empty()) out << "accept " << a.signature().sorts()[s] << ' ' << join(acc) << "\n";
  }
}

std::vector<std::string> default_states(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("q" + std::to_string(i));
  return v;
}

std::vector<std::string> read_states(const Line& l) {
  if (l.tok.size() == 2 && std::all_of(l.tok[1].begin(), l.tok[1].end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return default_states(std::stoul(l.tok[1]));
  return {l.tok.begin() + 1, l.tok.end()};
}

std::string write_states(const std::vector<std::string>& states) {
  if (states == default_states(states.size())) return "states " + std::to_string(states.size());
  return "states " + join(states);
}

std::size_t lookup(const Line& l, std::size_t i, const std::vector<std::string>& v, const char* what) {
  auto k = index_in(v, l.at(i));
  if (k == v.size()) l.fail(std::string("unknown ") + what + " '" + l.tok[i] + "'", i);
  return k;
}

}  // namespace

FiniteAlgebra parse_algebra(std::string_view text) {
  AlgebraReader r;
  for (const auto& l : lines_of(text))
    if (!r.handle(l)) l.fail("unexpected line");
  return r.finish();
}

std::string serialize_algebra(const FiniteAlgebra& alg) {
  std::ostringstream out;
  write_algebra(out, alg);
  return out.str();
}

Recognizer parse_recognizer(std::string_view text) {
  AlgebraReader r;
  std::vector<Line> letters, accepts;
  for (const auto& l : lines_of(text)) {
    if (l.tok[0] == "letter") {
      if (l.tok.size() != 4) l.fail("expected letter NAME SORT ELEMENT");
      letters.push_back(l);
    } else if (l.tok[0] == "accept") {
      accepts.push_back(l);
    } else if (!r.handle(l)) {
      l.fail("unexpected line");
    }
  }
  auto alg = std::make_shared<const FiniteAlgebra>(r.finish());
  std::vector<Letter> ls;
  for (const auto& l : letters) {
    auto s = r.sort(l, 2);
    ls.push_back({l.tok[1], s, r.element(l, 3, s, l.tok[3])});
  }
  SortedSubset acc = empty_subset(*alg);
  for (const auto& l : accepts) {
    auto s = r.sort(l, 1);
    for (std::size_t i = 2; i < l.tok.size(); ++i) acc[s][r.element(l, i, s, l.tok[i])] = true;
  }
  return Recognizer::make(alg, std::move(ls), std::move(acc));
}

std::string serialize_recognizer(const Recognizer& rec) {
  std::ostringstream out;
  write_algebra(out, *rec.algebra);
  write_letters_accept(out, rec);
  return out.str();
}

// ------------------------------------------------------------------ dfa

Dfa parse_dfa(std::string_view text) {
  Dfa d;
  bool have_states = false, have_alpha = false, have_init = false;
  std::vector<std::vector<int>> delta;
  std::vector<std::string> init_name, final_names;
  std::vector<Line> finals_lines, init_lines, trans;
  std::size_t last = 1;
  for (const auto& l : lines_of(text)) {
    last = l.number;
    const auto& k = l.tok[0];
    if (k == "states") {
      d.states = read_states(l);
      have_states = true;
    } else if (k == "alphabet") {
      d.alphabet.assign(l.tok.begin() + 1, l.tok.end());
      have_alpha = true;
    } else if (k == "init") {
      if (l.tok.size() != 2) l.fail("expected init STATE");
      init_lines.push_back(l);
      have_init = true;
    } else if (k == "final") {
      finals_lines.push_back(l);
    } else if (l.tok.size() == 4 && l.tok[2] == "->") {
      trans.push_back(l);
    } else {
      l.fail("unexpected line");
    }
  }
  if (!have_states) throw ParseError("missing 'states' line", last, 1);
  if (!have_alpha) throw ParseError("missing 'alphabet' line", last, 1);
  if (!have_init) throw ParseError("missing 'init' line", last, 1);
  const std::size_t n = d.states.size();
  d.initial = lookup(init_lines.back(), 1, d.states, "state");
  d.finals.assign(n, false);
  for (const auto& l : finals_lines)
    for (std::size_t i = 1; i < l.tok.size(); ++i) d.finals[lookup(l, i, d.states, "state")] = true;
  delta.assign(n, std::vector<int>(d.alphabet.size(), -1));
  for (const auto& l : trans) {
    auto q = lookup(l, 0, d.states, "state");
    auto a = lookup(l, 1, d.alphabet, "letter");
    auto r = lookup(l, 3, d.states, "state");
    if (delta[q][a] >= 0) l.fail("transition defined twice");
    delta[q][a] = static_cast<int>(r);
  }
  d.delta.assign(n, std::vector<std::size_t>(d.alphabet.size()));
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t a = 0; a < d.alphabet.size(); ++a) {
      if (delta[q][a] < 0)
        throw AlgebraError("missing transition from " + d.states[q] + " on " + d.alphabet[a]);
      d.delta[q][a] = static_cast<std::size_t>(delta[q][a]);
    }
  d.validate();
  return d;
}

std::string serialize_dfa(const Dfa& d) {
  std::ostringstream out;
  out << write_states(d.states) << "\n";
  out << "alphabet " << join(d.alphabet) << "\n";
  out << "init " << d.states[d.initial] << "\n";
  out << "final";
  for (std::size_t q = 0; q < d.states.size(); ++q)
    if (d.finals[q]) out << ' ' << d.states[q];
  out << "\n";
  for (std::size_t q = 0; q < d.states.size(); ++q)
    for (std::size_t a = 0; a < d.alphabet.size(); ++a)
      out << d.states[q] << ' ' << d.alphabet[a] << " -> " << d.states[d.delta[q][a]] << "\n";
  return out.str();
}

// ---------------------------------------------------------------- omega

OmegaRecognizer parse_omega(std::string_view text) {
  std::optional<OmegaRecognizer::Mode> mode;
  std::vector<std::vector<std::string>> labels(2);
  bool have_plus = false, have_omega = false;
  std::vector<Line> body;
  std::size_t last = 1;
  for (const auto& l : lines_of(text)) {
    last = l.number;
    const auto& k = l.tok[0];
    if (k == "mode") {
      if (l.at(1) == "infinitary")
        mode = OmegaRecognizer::Mode::infinitary;
      else if (l.tok[1] == "omega")
        mode = OmegaRecognizer::Mode::omega_only;
      else
        l.fail("mode must be infinitary or omega", 1);
    } else if (k == "plus") {
      labels[0].assign(l.tok.begin() + 1, l.tok.end());
      have_plus = true;
    } else if (k == "omega") {
      labels[1].assign(l.tok.begin() + 1, l.tok.end());
      have_omega = true;
    } else {
      body.push_back(l);
    }
  }
  if (!mode) throw ParseError("missing 'mode' line", last, 1);
  if (!have_plus || !have_omega) throw ParseError("missing 'plus' or 'omega' carrier", last, 1);
  const std::size_t np = labels[0].size(), nw = labels[1].size();
  std::vector<std::vector<int>> tables{std::vector<int>(np * np, -1), std::vector<int>(np * nw, -1),
                                       std::vector<int>(np, -1)};
  std::vector<Letter> letters;
  SortedSubset acc{std::vector<bool>(np), std::vector<bool>(nw)};
  auto elem = [&](const Line& l, std::size_t i, SortId s) {
    return static_cast<Elem>(lookup(l, i, labels[s], s == 0 ? "plus element" : "omega element"));
  };
  auto put = [&](const Line& l, std::size_t t, std::size_t off, Elem v) {
    if (tables[t][off] >= 0) l.fail("entry defined twice");
    tables[t][off] = static_cast<int>(v);
  };
  for (const auto& l : body) {
    const auto& k = l.tok[0];
    if (k == "prod") {
      if (l.tok.size() != 5 || l.tok[3] != "=") l.fail("expected prod x y = z");
      put(l, 0, elem(l, 1, 0) * np + elem(l, 2, 0), elem(l, 4, 0));
    } else if (k == "mix") {
      if (l.tok.size() != 5 || l.tok[3] != "=") l.fail("expected mix x z = z'");
      put(l, 1, elem(l, 1, 0) * nw + elem(l, 2, 1), elem(l, 4, 1));
    } else if (k == "opow") {
      if (l.tok.size() != 4 || l.tok[2] != "=") l.fail("expected opow x = z");
      put(l, 2, elem(l, 1, 0), elem(l, 3, 1));
    } else if (k == "letters") {
      for (std::size_t i = 1; i < l.tok.size(); ++i) {
        auto eq = l.tok[i].find('=');
        if (eq == std::string::npos || eq == 0) l.fail("expected letter=element", i);
        auto name = l.tok[i].substr(0, eq);
        auto k2 = index_in(labels[0], l.tok[i].substr(eq + 1));
        if (k2 == np) l.fail("unknown plus element '" + l.tok[i].substr(eq + 1) + "'", i);
        letters.push_back({name, 0, static_cast<Elem>(k2)});
      }
    } else if (k == "accept_plus" || k == "accept_omega") {
      const SortId s = k == "accept_plus" ? 0 : 1;
      for (std::size_t i = 1; i < l.tok.size(); ++i) acc[s][elem(l, i, s)] = true;
    } else {
      l.fail("unexpected line");
    }
  }
  std::vector<std::vector<Elem>> t(3);
  const char* names[] = {"prod", "mix", "opow"};
  for (std::size_t i = 0; i < 3; ++i)
    for (int v : tables[i]) {
      if (v < 0) throw AlgebraError(std::string("table of ") + names[i] + " is not total");
      t[i].push_back(static_cast<Elem>(v));
    }
  auto alg = make_algebra(wilke_signature(), labels, std::move(t));
  return OmegaRecognizer::make(Recognizer::make(alg, std::move(letters), std::move(acc)), *mode);
}

std::string serialize_omega(const OmegaRecognizer& r) {
  const auto& a = *r.rec.algebra;
  if (a.ordered()) throw std::invalid_argument("ordered omega recognizers use the generic recognizer format");
  std::ostringstream out;
  out << "mode " << (r.mode == OmegaRecognizer::Mode::infinitary ? "infinitary" : "omega") << "\n";
  out << "plus " << join(a.labels(0)) << "\n";
  out << "omega " << join(a.labels(1)) << "\n";
  const auto np = a.size(0), nw = a.size(1);
  for (Elem x = 0; x < np; ++x)
    for (Elem y = 0; y < np; ++y)
      out << "prod " << a.label(0, x) << ' ' << a.label(0, y) << " = " << a.label(0, a.apply(0, {x, y})) << "\n";
  for (Elem x = 0; x < np; ++x)
    for (Elem z = 0; z < nw; ++z)
      out << "mix " << a.label(0, x) << ' ' << a.label(1, z) << " = " << a.label(1, a.apply(1, {x, z})) << "\n";
  for (Elem x = 0; x < np; ++x) out << "opow " << a.label(0, x) << " = " << a.label(1, a.apply(2, {x})) << "\n";
  out << "letters";
  for (const auto& l : r.rec.letters) out << ' ' << l.name << '=' << a.label(0, l.image);
  out << "\n";
  for (SortId s = 0; s < 2; ++s) {
    out << (s == 0 ? "accept_plus" : "accept_omega");
    for (Elem x = 0; x < a.size(s); ++x)
      if (r.rec.accept[s][x]) out << ' ' << a.label(s, x);
    out << "\n";
  }
  return out.str();
}

// -------------------------------------------------------- tree automaton

TreeAutomaton parse_tree_automaton(std::string_view text) {
  TreeAutomaton ta;
  bool have_states = false, have_alpha = false;
  std::vector<Line> body;
  std::size_t last = 1;
  for (const auto& l : lines_of(text)) {
    last = l.number;
    if (l.tok[0] == "states") {
      ta.states = read_states(l);
      have_states = true;
    } else if (l.tok[0] == "alphabet") {
      ta.alphabet.assign(l.tok.begin() + 1, l.tok.end());
      have_alpha = true;
    } else {
      body.push_back(l);
    }
  }
  if (!have_states || !have_alpha) throw ParseError("missing 'states' or 'alphabet' line", last, 1);
  const std::size_t n = ta.states.size(), k = ta.alphabet.size();
  std::vector<int> leaf(k, -1);
  std::vector<int> node(k * n * n, -1);
  ta.finals.assign(n, false);
  for (const auto& l : body) {
    const auto& key = l.tok[0];
    if (key == "final") {
      for (std::size_t i = 1; i < l.tok.size(); ++i) ta.finals[lookup(l, i, ta.states, "state")] = true;
    } else if (key == "leaf") {
      if (l.tok.size() != 4 || l.tok[2] != "->") l.fail("expected leaf a -> q");
      auto a = lookup(l, 1, ta.alphabet, "label");
      if (leaf[a] >= 0) l.fail("leaf rule defined twice");
      leaf[a] = static_cast<int>(lookup(l, 3, ta.states, "state"));
    } else if (key == "node") {
      if (l.tok.size() != 6 || l.tok[4] != "->") l.fail("expected node a q q' -> q''");
      auto a = lookup(l, 1, ta.alphabet, "label");
      auto q = lookup(l, 2, ta.states, "state");
      auto r = lookup(l, 3, ta.states, "state");
      auto& slot = node[(a * n + q) * n + r];
      if (slot >= 0) l.fail("node rule defined twice");
      slot = static_cast<int>(lookup(l, 5, ta.states, "state"));
    } else {
      l.fail("unexpected line");
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    if (leaf[a] < 0) throw AlgebraError("missing leaf rule for " + ta.alphabet[a]);
    ta.leaf.push_back(static_cast<std::size_t>(leaf[a]));
  }
  ta.node.assign(k, std::vector<std::vector<std::size_t>>(n, std::vector<std::size_t>(n)));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r) {
        int v = node[(a * n + q) * n + r];
        if (v < 0)
          throw AlgebraError("missing node rule " + ta.alphabet[a] + " " + ta.states[q] + " " + ta.states[r]);
        ta.node[a][q][r] = static_cast<std::size_t>(v);
      }
  ta.validate();
  return ta;
}

std::string serialize_tree_automaton(const TreeAutomaton& ta) {
  std::ostringstream out;
  out << write_states(ta.states) << "\n";
  out << "alphabet " << join(ta.alphabet) << "\n";
  out << "final";
  for (std::size_t q = 0; q < ta.states.size(); ++q)
    if (ta.finals[q]) out << ' ' << ta.states[q];
  out << "\n";
  for (std::size_t a = 0; a < ta.alphabet.size(); ++a)
    out << "leaf " << ta.alphabet[a] << " -> " << ta.states[ta.leaf[a]] << "\n";
  for (std::size_t a = 0; a < ta.alphabet.size(); ++a)
    for (std::size_t q = 0; q < ta.states.size(); ++q)
      for (std::size_t r = 0; r < ta.states.size(); ++r)
        out << "node " << ta.alphabet[a] << ' ' << ta.states[q] << ' ' << ta.states[r] << " -> "
            << ta.states[ta.node[a][q][r]] << "\n";
  return out.str();
}

// ----------------------------------------------------------------- laws

Signature named_signature(std::string_view name, bool ordered) {
  if (name == "monoid") return monoid_signature(ordered);
  if (name == "omega") return wilke_signature(ordered);
  if (name == "tree") return tree_signature(ordered);
  if (name == "stabilization")
    return Signature({"M"}, {{"one", {}, 0}, {"mul", {0, 0}, 0}, {"sharp", {0}, 0}}, ordered);
  throw std::invalid_argument("unknown signature '" + std::string(name) + "'");
}

LawFile parse_law_file(std::string_view text, const Signature* fallback) {
  LawFile f;
  std::size_t pos = 0, number = 0;
  bool first = true;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto raw = text.substr(pos, end - pos);
    ++number;
    auto b = raw.find_first_not_of(" \t\r");
    if (b != std::string_view::npos && raw[b] != '#') {
      auto body = raw.substr(b);
      if (first && body.rfind("signature", 0) == 0) {
        Line l = lines_of(body)[0];
        l.number = number;
        if (l.tok.size() < 2 || l.tok.size() > 3 || (l.tok.size() == 3 && l.tok[2] != "ordered"))
          l.fail("expected signature NAME [ordered]");
        f.signature_name = l.tok[1];
        f.ordered = l.tok.size() == 3;
        try {
          f.signature = named_signature(l.tok[1], f.ordered);
        } catch (const std::invalid_argument& e) {
          l.fail(e.what(), 1);
        }
      } else {
        if (first) {
          if (!fallback) throw ParseError("law file needs a signature header or an algebra", number, 1);
          f.signature = *fallback;
          f.ordered = fallback->ordered();
        }
        try {
          f.laws.push_back(parse_law(f.signature, body));
        } catch (const ParseError& e) {
          throw ParseError(std::string(e.what()).substr(std::string(e.what()).find(": ") + 2), number,
                           e.column() + b);
        }
      }
      first = false;
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (first) {
    if (!fallback) throw ParseError("empty law file", number, 1);
    f.signature = *fallback;
  }
  return f;
}

std::string serialize_law_file(const LawFile& f) {
  std::string out;
  if (f.signature_name) out += "signature " + *f.signature_name + (f.ordered ? " ordered" : "") + "\n";
  for (const auto& l : f.laws) out += to_string(f.signature, l) + "\n";
  return out;
}

// --------------------------------------------------------------- family

FamilyFile parse_family(std::string_view text) {
  FamilyFile f;
  auto lines = lines_of(text);
  if (lines.empty() || lines[0].tok.size() != 1 || lines[0].tok[0] != "family")
    throw ParseError("expected 'family' first", lines.empty() ? 1 : lines[0].number, 1);
  // dfa blocks are re-parsed from their source lines so errors keep their line numbers
  std::vector<std::string_view> raw;
  {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      raw.push_back(text.substr(pos, end - pos));
      if (end == text.size()) break;
      pos = end + 1;
    }
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    const auto& k = l.tok[0];
    if (k == "mode") {
      if (l.at(1) == "boolean")
        f.mode = ClosureMode::boolean;
      else if (l.tok[1] == "positive")
        f.mode = ClosureMode::positive;
      else
        l.fail("mode must be boolean or positive", 1);
    } else if (k == "ordered") {
      f.ordered = true;
    } else if (k == "class") {
      try {
        MorphismClass::by_name(l.at(1));
      } catch (const std::invalid_argument& e) {
        l.fail(e.what(), 1);
      }
      f.morphism_class = l.tok[1];
    } else if (k == "dfa") {
      std::size_t j = i + 1;
      while (j < lines.size() && !(lines[j].tok.size() == 1 && lines[j].tok[0] == "end")) ++j;
      if (j == lines.size()) l.fail("dfa block without 'end'");
      // keep the original numbering by blanking lines outside the block
      std::string block;
      for (std::size_t n = 1; n <= raw.size(); ++n) {
        if (n > l.number && n < lines[j].number) block += raw[n - 1];
        block += '\n';
      }
      f.members.push_back(parse_dfa(block));
      i = j;
    } else {
      l.fail("unexpected line");
    }
  }
  return f;
}

std::string serialize_family(const FamilyFile& f) {
  std::string out = "family\n";
  out += std::string("mode ") + (f.mode == ClosureMode::boolean ? "boolean" : "positive") + "\n";
  if (f.ordered) out += "ordered\n";
  if (f.morphism_class) out += "class " + *f.morphism_class + "\n";
  for (const auto& d : f.members) out += "dfa\n" + serialize_dfa(d) + "end\n";
  return out;
}

// ----------------------------------------------------------------- json

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset to line and column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(e.what(), line, col);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <class F>
auto semantic(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw AlgebraError(std::string("malformed document: ") + e.what());
  }
}

json algebra_json(const FiniteAlgebra& a) {
  const auto& sig = a.signature();
  json j;
  j["sorts"] = sig.sorts();
  j["ordered"] = a.ordered();
  json el = json::object();
  for (SortId s = 0; s < a.num_sorts(); ++s) el[sig.sorts()[s]] = a.labels(s);
  j["elements"] = el;
  json ops = json::array();
  for (const auto& op : sig.ops()) {
    json o;
    o["name"] = op.name;
    std::vector<std::string> ins;
    for (auto in : op.inputs) ins.push_back(sig.sorts()[in]);
    o["inputs"] = ins;
    o["output"] = sig.sorts()[op.output];
    ops.push_back(o);
  }
  j["ops"] = ops;
  json tables = json::object();
  for (OpId o = 0; o < sig.num_ops(); ++o) {
    std::vector<std::string> t;
    for (auto v : a.table(o)) t.push_back(a.label(sig.op(o).output, v));
    tables[sig.op(o).name] = t;
  }
  j["tables"] = tables;
  if (a.ordered()) {
    json ord = json::object();
    for (SortId s = 0; s < a.num_sorts(); ++s) {
      json pairs = json::array();
      for (Elem x = 0; x < a.size(s); ++x)
        for (Elem y = 0; y < a.size(s); ++y)
          if (x != y && a.leq(s, x, y)) pairs.push_back({a.label(s, x), a.label(s, y)});
      ord[sig.sorts()[s]] = pairs;
    }
    j["order"] = ord;
  }
  return j;
}

FiniteAlgebra algebra_of(const json& j) {
  auto sorts = j.at("sorts").get<std::vector<std::string>>();
  const bool ordered = j.at("ordered").get<bool>();
  std::vector<std::vector<std::string>> labels;
  for (const auto& s : sorts) labels.push_back(j.at("elements").at(s).get<std::vector<std::string>>());
  auto sort_of = [&](const std::string& s) {
    auto k = index_in(sorts, s);
    if (k == sorts.size()) throw AlgebraError("unknown sort '" + s + "'");
    return k;
  };
  auto elem_of = [&](SortId s, const std::string& x) {
    auto k = index_in(labels[s], x);
    if (k == labels[s].size()) throw AlgebraError("unknown element '" + x + "'");
    return static_cast<Elem>(k);
  };
  std::vector<OpSymbol> ops;
  for (const auto& o : j.at("ops")) {
    OpSymbol op{o.at("name").get<std::string>(), {}, sort_of(o.at("output").get<std::string>())};
    for (const auto& in : o.at("inputs")) op.inputs.push_back(sort_of(in.get<std::string>()));
    ops.push_back(op);
  }
  std::vector<std::vector<Elem>> tables;
  for (const auto& op : ops) {
    std::vector<Elem> t;
    for (const auto& x : j.at("tables").at(op.name)) t.push_back(elem_of(op.output, x.get<std::string>()));
    tables.push_back(std::move(t));
  }
  SortedRelation rel;
  if (ordered)
    for (SortId s = 0; s < sorts.size(); ++s) {
      Relation r = Relation::identity(labels[s].size());
      if (j.contains("order") && j["order"].contains(sorts[s]))
        for (const auto& p : j["order"][sorts[s]])
          r.set(elem_of(s, p.at(0).get<std::string>()), elem_of(s, p.at(1).get<std::string>()));
      rel.push_back(std::move(r));
    }
  return FiniteAlgebra(Signature(sorts, ops, ordered), labels, tables, std::move(rel));
}

}  // namespace

std::string algebra_to_json(const FiniteAlgebra& alg) { return dump(algebra_json(alg)); }

FiniteAlgebra algebra_from_json(std::string_view text) {
  auto j = parse_json(text);
  return semantic([&] { return algebra_of(j); });
}

std::string recognizer_to_json(const Recognizer& rec) {
  const auto& a = *rec.algebra;
  json j = algebra_json(a);
  json letters = json::array();
  for (const auto& l : rec.letters)
    letters.push_back({{"name", l.name}, {"sort", a.signature().sorts()[l.sort]}, {"element", a.label(l.sort, l.image)}});
  j["letters"] = letters;
  json acc = json::object();
  for (SortId s = 0; s < a.num_sorts(); ++s) {
    std::vector<std::string> v;
    for (Elem x = 0; x < a.size(s); ++x)
      if (rec.accept[s][x]) v.push_back(a.label(s, x));
    acc[a.signature().sorts()[s]] = v;
  }
  j["accept"] = acc;
  return dump(j);
}

Recognizer recognizer_from_json(std::string_view text) {
  auto j = parse_json(text);
  return semantic([&] {
    auto alg = std::make_shared<const FiniteAlgebra>(algebra_of(j));
    const auto& sig = alg->signature();
    std::vector<Letter> letters;
    for (const auto& l : j.at("letters")) {
      auto s = sig.sort_id(l.at("sort").get<std::string>());
      letters.push_back({l.at("name").get<std::string>(), s, alg->element(s, l.at("element").get<std::string>())});
    }
    SortedSubset acc = empty_subset(*alg);
    for (SortId s = 0; s < sig.num_sorts(); ++s)
      if (j.at("accept").contains(sig.sorts()[s]))
        for (const auto& x : j["accept"][sig.sorts()[s]]) acc[s][alg->element(s, x.get<std::string>())] = true;
    return Recognizer::make(alg, std::move(letters), std::move(acc));
  });
}

std::string dfa_to_json(const Dfa& d) {
  json j;
  j["states"] = d.states;
  j["alphabet"] = d.alphabet;
  j["initial"] = d.states[d.initial];
  std::vector<std::string> finals;
  for (std::size_t q = 0; q < d.states.size(); ++q)
    if (d.finals[q]) finals.push_back(d.states[q]);
  j["finals"] = finals;
  json tr = json::array();
  for (std::size_t q = 0; q < d.states.size(); ++q)
    for (std::size_t a = 0; a < d.alphabet.size(); ++a)
      tr.push_back({d.states[q], d.alphabet[a], d.states[d.delta[q][a]]});
  j["transitions"] = tr;
  return dump(j);
}

Dfa dfa_from_json(std::string_view text) {
  auto j = parse_json(text);
  return semantic([&] {
    Dfa d;
    d.states = j.at("states").get<std::vector<std::string>>();
    d.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    auto find = [](const std::vector<std::string>& v, const std::string& x, const char* what) {
      auto k = index_in(v, x);
      if (k == v.size()) throw AlgebraError(std::string("unknown ") + what + " '" + x + "'");
      return k;
    };
    d.initial = find(d.states, j.at("initial").get<std::string>(), "state");
    d.finals.assign(d.states.size(), false);
    for (const auto& q : j.at("finals")) d.finals[find(d.states, q.get<std::string>(), "state")] = true;
    std::vector<std::vector<int>> delta(d.states.size(), std::vector<int>(d.alphabet.size(), -1));
    for (const auto& t : j.at("transitions")) {
      auto q = find(d.states, t.at(0).get<std::string>(), "state");
      auto a = find(d.alphabet, t.at(1).get<std::string>(), "letter");
      delta[q][a] = static_cast<int>(find(d.states, t.at(2).get<std::string>(), "state"));
    }
    d.delta.assign(d.states.size(), std::vector<std::size_t>(d.alphabet.size()));
    for (std::size_t q = 0; q < d.states.size(); ++q)
      for (std::size_t a = 0; a < d.alphabet.size(); ++a) {
        if (delta[q][a] < 0) throw AlgebraError("transition table is not total");
        d.delta[q][a] = static_cast<std::size_t>(delta[q][a]);
      }
    d.validate();
    return d;
  });
}

std::string omega_to_json(const OmegaRecognizer& r) {
  const auto& a = *r.rec.algebra;
  json j;
  j["mode"] = r.mode == OmegaRecognizer::Mode::infinitary ? "infinitary" : "omega";
  j["plus"] = a.labels(0);
  j["omega"] = a.labels(1);
  json prod = json::array(), mix = json::array(), opow = json::array();
  for (Elem x = 0; x < a.size(0); ++x)
    for (Elem y = 0; y < a.size(0); ++y) prod.push_back({a.label(0, x), a.label(0, y), a.label(0, a.apply(0, {x, y}))});
  for (Elem x = 0; x < a.size(0); ++x)
    for (Elem z = 0; z < a.size(1); ++z) mix.push_back({a.label(0, x), a.label(1, z), a.label(1, a.apply(1, {x, z}))});
  for (Elem x = 0; x < a.size(0); ++x) opow.push_back({a.label(0, x), a.label(1, a.apply(2, {x}))});
  j["prod"] = prod;
  j["mix"] = mix;
  j["opow"] = opow;
  json letters = json::object();
  for (const auto& l : r.rec.letters) letters[l.name] = a.label(0, l.image);
  j["letters"] = letters;
  for (SortId s = 0; s < 2; ++s) {
    std::vector<std::string> v;
    for (Elem x = 0; x < a.size(s); ++x)
      if (r.rec.accept[s][x]) v.push_back(a.label(s, x));
    j[s == 0 ? "accept_plus" : "accept_omega"] = v;
  }
  return dump(j);
}

OmegaRecognizer omega_from_json(std::string_view text) {
  auto j = parse_json(text);
  // rebuilt through the text format so both share validation
  return semantic([&] {
    std::string t = "mode " + j.at("mode").get<std::string>() + "\n";
    t += "plus " + join(j.at("plus").get<std::vector<std::string>>()) + "\n";
    t += "omega " + join(j.at("omega").get<std::vector<std::string>>()) + "\n";
    for (const auto& e : j.at("prod"))
      t += "prod " + e.at(0).get<std::string>() + " " + e.at(1).get<std::string>() + " = " + e.at(2).get<std::string>() + "\n";
    for (const auto& e : j.at("mix"))
      t += "mix " + e.at(0).get<std::string>() + " " + e.at(1).get<std::string>() + " = " + e.at(2).get<std::string>() + "\n";
    for (const auto& e : j.at("opow")) t += "opow " + e.at(0).get<std::string>() + " = " + e.at(1).get<std::string>() + "\n";
    t += "letters";
    for (const auto& [k, v] : j.at("letters").items()) t += " " + k + "=" + v.get<std::string>();
    t += "\naccept_plus " + join(j.at("accept_plus").get<std::vector<std::string>>());
    t += "\naccept_omega " + join(j.at("accept_omega").get<std::vector<std::string>>()) + "\n";
    try {
      return parse_omega(t);
    } catch (const ParseError& e) {
      throw AlgebraError(std::string("malformed document: ") + e.what());
    }
  });
}

std::string tree_automaton_to_json(const TreeAutomaton& ta) {
  json j;
  j["states"] = ta.states;
  j["alphabet"] = ta.alphabet;
  std::vector<std::string> finals;
  for (std::size_t q = 0; q < ta.states.size(); ++q)
    if (ta.finals[q]) finals.push_back(ta.states[q]);
  j["finals"] = finals;
  json leaf = json::object();
  for (std::size_t a = 0; a < ta.alphabet.size(); ++a) leaf[ta.alphabet[a]] = ta.states[ta.leaf[a]];
  j["leaf"] = leaf;
  json node = json::array();
  for (std::size_t a = 0; a < ta.alphabet.size(); ++a)
    for (std::size_t q = 0; q < ta.states.size(); ++q)
      for (std::size_t r = 0; r < ta.states.size(); ++r)
        node.push_back({ta.alphabet[a], ta.states[q], ta.states[r], ta.states[ta.node[a][q][r]]});
  j["node"] = node;
  return dump(j);
}

TreeAutomaton tree_automaton_from_json(std::string_view text) {
  auto j = parse_json(text);
  return semantic([&] {
    std::string t = "states " + join(j.at("states").get<std::vector<std::string>>()) + "\n";
    t += "alphabet " + join(j.at("alphabet").get<std::vector<std::string>>()) + "\n";
    t += "final " + join(j.at("finals").get<std::vector<std::string>>()) + "\n";
    for (const auto& [k, v] : j.at("leaf").items()) t += "leaf " + k + " -> " + v.get<std::string>() + "\n";
    for (const auto& e : j.at("node"))
      t += "node " + e.at(0).get<std::string>() + " " + e.at(1).get<std::string>() + " " + e.at(2).get<std::string>() +
           " -> " + e.at(3).get<std::string>() + "\n";
    try {
      return parse_tree_automaton(t);
    } catch (const ParseError& e) {
      throw AlgebraError(std::string("malformed document: ") + e.what());
    }
  });
}

// ---------------------------------------------------------------- files

std::optional<FileType> detect_file_type(std::string_view path) {
  FileType t{FileKind::algebra, false};
  auto ends = [&](std::string_view suf) {
    return path.size() >= suf.size() && path.substr(path.size() - suf.size()) == suf;
  };
  if (ends(".json")) {
    t.json = true;
    path.remove_suffix(5);
  }
  static const std::pair<const char*, FileKind> table[] = {
      {".alg", FileKind::algebra}, {".rec", FileKind::recognizer},  {".dfa", FileKind::dfa},
      {".omega", FileKind::omega}, {".ta", FileKind::tree_automaton}, {".laws", FileKind::laws},
      {".family", FileKind::family}};
  for (const auto& [suf, kind] : table)
    if (ends(suf)) {
      t.kind = kind;
      if (t.json && (kind == FileKind::laws || kind == FileKind::family)) return std::nullopt;
      return t;
    }
  return std::nullopt;
}

std::string kind_name(FileKind k) {
  switch (k) {
    case FileKind::algebra: return "algebra";
    case FileKind::recognizer: return "recognizer";
    case FileKind::dfa: return "dfa";
    case FileKind::omega: return "omega";
    case FileKind::tree_automaton: return "tree-automaton";
    case FileKind::laws: return "laws";
    case FileKind::family: return "family";
  }
  return "unknown";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string reformat(FileType type, std::string_view text, const Signature* fallback) {
  if (type.json) switch (type.kind) {
      case FileKind::algebra: return algebra_to_json(algebra_from_json(text));
      case FileKind::recognizer: return recognizer_to_json(recognizer_from_json(text));
      case FileKind::dfa: return dfa_to_json(dfa_from_json(text));
      case FileKind::omega: return omega_to_json(omega_from_json(text));
      case FileKind::tree_automaton: return tree_automaton_to_json(tree_automaton_from_json(text));
      default: throw std::invalid_argument("no JSON mirror for " + kind_name(type.kind));
    }
  switch (type.kind) {
    case FileKind::algebra: return serialize_algebra(parse_algebra(text));
    case FileKind::recognizer: return serialize_recognizer(parse_recognizer(text));
    case FileKind::dfa: return serialize_dfa(parse_dfa(text));
    case FileKind::omega: return serialize_omega(parse_omega(text));
    case FileKind::tree_automaton: return serialize_tree_automaton(parse_tree_automaton(text));
    case FileKind::laws: return serialize_law_file(parse_law_file(text, fallback));
    case FileKind::family: return serialize_family(parse_family(text));
  }
  return {};
}

}  // namespace algvar
