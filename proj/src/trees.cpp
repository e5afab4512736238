#include "algvar/trees.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "algvar/term.hpp"

namespace algvar {

namespace {
constexpr SortId kL = 0, kT = 1, kC = 2;
constexpr OpId kIota = 0, kKappa = 1, kLambda = 2, kRho = 3, kEta = 4, kSigma = 5;
}  // namespace

Signature tree_signature(bool ordered) {
  return Signature({"l", "t", "c"},
                   {{"iota", {kL}, kT},
                    {"kappa", {kL, kT, kT}, kT},
                    {"lambda", {kL, kT}, kC},
                    {"rho", {kL, kT}, kC},
                    {"eta", {kC, kT}, kT},
                    {"sigma", {kC, kC}, kC}},
                   ordered);
}

std::size_t LabeledTree::depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d + 1;
}

std::size_t LabeledTree::holes() const {
  std::size_t n = hole ? 1 : 0;
  for (const auto& c : children) n += c.holes();
  return n;
}

std::string LabeledTree::to_string() const {
  if (hole) return "*";
  if (children.empty()) return label;
  return label + "(" + children[0].to_string() + "," + children[1].to_string() + ")";
}

namespace {

struct TreeParser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, 1, pos + 1); }
  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  LabeledTree parse() {
    skip();
    if (eat('*')) return LabeledTree{"", {}, true};
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           std::string_view("(),*").find(text[pos]) == std::string_view::npos)
      ++pos;
    if (pos == start) fail("expected a label or '*'");
    LabeledTree t{std::string(text.substr(start, pos - start)), {}, false};
    if (eat('(')) {
      t.children.push_back(parse());
      if (!eat(',')) fail("expected ','");
      t.children.push_back(parse());
      if (!eat(')')) fail("expected ')'");
    }
    return t;
  }
};

}  // namespace

LabeledTree parse_tree(std::string_view text) {
  TreeParser p{text};
  auto t = p.parse();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return t;
}

std::vector<LabeledTree> all_trees(const std::vector<std::string>& alphabet, std::size_t depth) {
  std::vector<LabeledTree> level;
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<LabeledTree> next;
    for (const auto& a : alphabet) next.push_back({a, {}, false});
    if (d > 1)
      for (const auto& a : alphabet)
        for (const auto& x : level)
          for (const auto& y : level) next.push_back({a, {x, y}, false});
    level = std::move(next);
  }
  return level;
}

std::vector<LabeledTree> all_contexts(const std::vector<std::string>& alphabet, std::size_t depth) {
  std::vector<LabeledTree> ctx;
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<LabeledTree> next{{"", {}, true}};
    if (d > 1) {
      auto trees = all_trees(alphabet, d - 1);
      for (const auto& a : alphabet) {
        for (const auto& c : ctx)
          for (const auto& t : trees) next.push_back({a, {c, t}, false});
        for (const auto& t : trees)
          for (const auto& c : ctx) next.push_back({a, {t, c}, false});
      }
    }
    ctx = std::move(next);
  }
  return ctx;
}

void TreeAutomaton::validate() const {
  const std::size_t n = states.size(), k = alphabet.size();
  if (finals.size() != n) throw AlgebraError("final flags have the wrong size");
  if (leaf.size() != k || node.size() != k) throw AlgebraError("tree automaton is not total");
  for (auto q : leaf)
    if (q >= n) throw AlgebraError("leaf target out of range");
  for (std::size_t a = 0; a < k; ++a) {
    if (node[a].size() != n) throw AlgebraError("tree automaton is not total");
    for (const auto& row : node[a]) {
      if (row.size() != n) throw AlgebraError("tree automaton is not total");
      for (auto q : row)
        if (q >= n) throw AlgebraError("node target out of range");
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (alphabet[i] == alphabet[j]) throw AlgebraError("duplicate letter '" + alphabet[i] + "'");
}

std::size_t TreeAutomaton::letter(std::string_view name) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == name) return i;
  throw std::invalid_argument("unknown label '" + std::string(name) + "'");
}

std::size_t TreeAutomaton::run(const LabeledTree& t) const {
  if (t.hole) throw std::invalid_argument("tree contains a hole");
  const auto a = letter(t.label);
  if (t.children.empty()) return leaf[a];
  return node[a][run(t.children[0])][run(t.children[1])];
}

Recognizer compile_tree_automaton(const TreeAutomaton& ta) {
  ta.validate();
  const std::size_t k = ta.alphabet.size();
  // reachable states with a witness tree each
  std::vector<std::size_t> reach;
  std::vector<std::string> witness;
  std::vector<int> index(ta.states.size(), -1);
  auto add_state = [&](std::size_t q, std::string w) {
    if (index[q] >= 0) return false;
    index[q] = static_cast<int>(reach.size());
    reach.push_back(q);
    witness.push_back(std::move(w));
    return true;
  };
  for (std::size_t a = 0; a < k; ++a) add_state(ta.leaf[a], ta.alphabet[a]);
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t m = reach.size();
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          grew |= add_state(ta.node[a][reach[i]][reach[j]],
                            ta.alphabet[a] + "(" + witness[i] + "," + witness[j] + ")");
  }
  const std::size_t nt = reach.size();
  auto node_idx = [&](std::size_t a, Elem s, Elem t) {
    return static_cast<Elem>(index[ta.node[a][reach[s]][reach[t]]]);
  };

  using Map = std::vector<Elem>;
  std::vector<Map> ctx;
  std::vector<std::string> ctx_label;
  std::map<Map, Elem> ctx_index;
  auto add_ctx = [&](Map m, std::string label) {
    auto [it, fresh] = ctx_index.emplace(m, static_cast<Elem>(ctx.size()));
    if (fresh) {
      ctx.push_back(std::move(m));
      ctx_label.push_back(std::move(label));
    }
    return it->second;
  };
  std::vector<Elem> lam(k * nt), rh(k * nt);
  std::vector<Map> gens;
  std::vector<std::string> gen_labels;
  for (std::size_t a = 0; a < k; ++a)
    for (Elem s = 0; s < nt; ++s) {
      Map l(nt), r(nt);
      for (Elem q = 0; q < nt; ++q) {
        l[q] = node_idx(a, q, s);
        r[q] = node_idx(a, s, q);
      }
      std::string ll = ta.alphabet[a] + "(*," + witness[s] + ")";
      std::string rl = ta.alphabet[a] + "(" + witness[s] + ",*)";
      lam[a * nt + s] = add_ctx(l, ll);
      rh[a * nt + s] = add_ctx(r, rl);
      gens.push_back(std::move(l));
      gen_labels.push_back(std::move(ll));
      gens.push_back(std::move(r));
      gen_labels.push_back(std::move(rl));
    }
  auto plug = [](const std::string& outer, const std::string& inner) {
    auto star = outer.find('*');
    return outer.substr(0, star) + inner + outer.substr(star + 1);
  };
  for (std::size_t i = 0; i < ctx.size(); ++i)
    for (std::size_t g = 0; g < gens.size(); ++g) {
      Map h(nt);
      for (Elem q = 0; q < nt; ++q) h[q] = ctx[i][gens[g][q]];
      add_ctx(std::move(h), plug(ctx_label[i], gen_labels[g]));
    }
  const std::size_t nc = ctx.size();

  std::vector<std::vector<Elem>> tables(6);
  for (std::size_t a = 0; a < k; ++a) tables[kIota].push_back(static_cast<Elem>(index[ta.leaf[a]]));
  for (std::size_t a = 0; a < k; ++a)
    for (Elem s = 0; s < nt; ++s)
      for (Elem t = 0; t < nt; ++t) tables[kKappa].push_back(node_idx(a, s, t));
  tables[kLambda] = lam;
  tables[kRho] = rh;
  for (Elem c = 0; c < nc; ++c)
    for (Elem t = 0; t < nt; ++t) tables[kEta].push_back(ctx[c][t]);
  for (Elem p = 0; p < nc; ++p)
    for (Elem q = 0; q < nc; ++q) {
      Map h(nt);
      for (Elem t = 0; t < nt; ++t) h[t] = ctx[p][ctx[q][t]];
      tables[kSigma].push_back(ctx_index.at(h));
    }
  std::vector<std::string> state_labels;
  for (auto q : reach) state_labels.push_back(ta.states[q]);
  auto alg = make_algebra(tree_signature(), std::vector<std::vector<std::string>>{ta.alphabet, state_labels, ctx_label},
                          std::move(tables));
  std::vector<Letter> letters;
  for (std::size_t a = 0; a < k; ++a) letters.push_back({ta.alphabet[a], kL, static_cast<Elem>(a)});
  SortedSubset acc = empty_subset(*alg);
  for (Elem t = 0; t < nt; ++t) acc[kT][t] = ta.finals[reach[t]];
  return Recognizer::make(alg, std::move(letters), std::move(acc));
}

Elem evaluate_tree(const Recognizer& rec, const LabeledTree& t) {
  if (t.hole) throw std::invalid_argument("tree contains a hole");
  const auto& letter = rec.letters[rec.letter(t.label)];
  if (letter.sort != kL) throw std::invalid_argument("label '" + t.label + "' is not in sort l");
  if (t.children.empty()) return rec.algebra->apply(kIota, {letter.image});
  return rec.algebra->apply(kKappa,
                            {letter.image, evaluate_tree(rec, t.children[0]), evaluate_tree(rec, t.children[1])});
}

std::optional<Elem> evaluate_context(const Recognizer& rec, const LabeledTree& c) {
  if (c.holes() != 1) throw std::invalid_argument("context must contain exactly one hole");
  if (c.hole) return std::nullopt;
  const Elem a = rec.letters[rec.letter(c.label)].image;
  const bool left = c.children[0].holes() == 1;
  const auto& path = c.children[left ? 0 : 1];
  const Elem side = evaluate_tree(rec, c.children[left ? 1 : 0]);
  const Elem base = rec.algebra->apply(left ? kLambda : kRho, {a, side});
  auto inner = evaluate_context(rec, path);
  return inner ? rec.algebra->apply(kSigma, {base, *inner}) : base;
}

bool tree_membership(const Recognizer& rec, const LabeledTree& t) { return rec.accept[kT][evaluate_tree(rec, t)]; }

Recognizer context_derivative(const Recognizer& rec, const LabeledTree& c) {
  auto e = evaluate_context(rec, c);
  if (!e) return rec;
  SortedSubset acc = empty_subset(*rec.algebra);
  for (Elem t = 0; t < rec.algebra->size(kT); ++t) acc[kT][t] = rec.accept[kT][rec.algebra->apply(kEta, {*e, t})];
  return rec.with_accept(std::move(acc));
}

void require_tree_algebra(const FiniteAlgebra& alg) {
  if (!(alg.signature().with_order(false) == tree_signature())) throw AlgebraError("not a tree algebra signature");
  auto laws = presets::tree(alg.signature());
  auto rep = validate_laws(alg, laws);
  if (!rep.pass) {
    const auto& law = laws[*rep.failed_law];
    throw AlgebraError("law " + to_string(alg.signature(), law) + " fails at " +
                       describe_witness(alg, law, rep.witness));
  }
}

RecognizerQuotient syntactic_reduced_tree_algebra(const Recognizer& rec) {
  require_tree_algebra(*rec.algebra);
  auto [trimmed, inclusion] = trim(rec);
  auto syn = syntactic_algebra(trimmed, elementary_translations(trimmed.algebra));
  auto red = reduce_quotient(syn.recognizer, elementary_translations(syn.recognizer.algebra), {kT});
  return {red.recognizer, compose(red.projection, syn.projection)};
}

}  // namespace algvar
