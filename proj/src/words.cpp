#include "algvar/words.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace algvar {

void Dfa::validate() const {
  if (states.empty()) throw AlgebraError("dfa has no states");
  if (initial >= states.size()) throw AlgebraError("initial state out of range");
  if (finals.size() != states.size()) throw AlgebraError("final flags have the wrong size");
  if (delta.size() != states.size()) throw AlgebraError("transition table has the wrong size");
  for (std::size_t q = 0; q < states.size(); ++q) {
    if (delta[q].size() != alphabet.size()) throw AlgebraError("transition from " + states[q] + " is not total");
    for (auto r : delta[q])
      if (r >= states.size()) throw AlgebraError("transition target out of range");
  }
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    for (std::size_t j = i + 1; j < alphabet.size(); ++j)
      if (alphabet[i] == alphabet[j]) throw AlgebraError("duplicate letter '" + alphabet[i] + "'");
}

std::size_t Dfa::letter(std::string_view name) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == name) return i;
  throw std::invalid_argument("unknown letter '" + std::string(name) + "'");
}

std::size_t Dfa::run(const Word& w) const {
  std::size_t q = initial;
  for (const auto& a : w) q = delta[q][letter(a)];
  return q;
}

Signature monoid_signature(bool ordered) {
  return Signature({"M"}, {{"one", {}, 0}, {"mul", {0, 0}, 0}}, ordered);
}

namespace {

bool single_chars(const std::vector<std::string>& alphabet) {
  return std::all_of(alphabet.begin(), alphabet.end(), [](const std::string& s) { return s.size() == 1; });
}

std::string word_label(const std::vector<std::string>& alphabet, const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  const bool dense = single_chars(alphabet);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i && !dense) out += '.';
    out += w[i];
  }
  return out;
}

struct MonoidOps {
  OpId one;
  OpId mul;
};

MonoidOps monoid_ops(const FiniteAlgebra& alg) {
  const auto& sig = alg.signature();
  if (sig.num_sorts() != 1) throw AlgebraError("expected a one-sorted monoid");
  auto mul = product_op(sig, 0);
  std::optional<OpId> one;
  for (OpId o = 0; o < sig.num_ops(); ++o)
    if (sig.op(o).inputs.empty()) one = o;
  if (!mul || !one) throw AlgebraError("expected a unit constant and a binary product");
  return {*one, *mul};
}

}  // namespace

Recognizer compile_dfa(const Dfa& d, bool ordered) {
  d.validate();
  using Map = std::vector<std::uint32_t>;
  const std::size_t n = d.states.size();
  Map id(n);
  for (std::size_t q = 0; q < n; ++q) id[q] = static_cast<std::uint32_t>(q);
  std::vector<Map> elems{id};
  std::vector<Word> words{{}};
  std::map<Map, Elem> index{{id, 0}};
  // breadth-first in letter order gives shortlex representatives
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t a = 0; a < d.alphabet.size(); ++a) {
      Map m(n);
      for (std::size_t q = 0; q < n; ++q) m[q] = static_cast<std::uint32_t>(d.delta[elems[i][q]][a]);
      if (index.count(m)) continue;
      index.emplace(m, static_cast<Elem>(elems.size()));
      Word w = words[i];
      w.push_back(d.alphabet[a]);
      elems.push_back(std::move(m));
      words.push_back(std::move(w));
    }
  const std::size_t k = elems.size();
  std::vector<Elem> mul(k * k);
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y) {
      Map m(n);
      for (std::size_t q = 0; q < n; ++q) m[q] = elems[y][elems[x][q]];
      mul[x * k + y] = index.at(m);
    }
  std::vector<std::string> labels;
  for (const auto& w : words) labels.push_back(word_label(d.alphabet, w));
  auto alg = make_algebra(monoid_signature(ordered), std::vector<std::vector<std::string>>{labels},
                          std::vector<std::vector<Elem>>{{0}, mul});
  std::vector<Letter> letters;
  for (std::size_t a = 0; a < d.alphabet.size(); ++a) {
    Map m(n);
    for (std::size_t q = 0; q < n; ++q) m[q] = static_cast<std::uint32_t>(d.delta[q][a]);
    letters.push_back({d.alphabet[a], 0, index.at(m)});
  }
  SortedSubset acc(1, std::vector<bool>(k));
  for (std::size_t x = 0; x < k; ++x) acc[0][x] = d.finals[elems[x][d.initial]];
  return Recognizer::make(alg, std::move(letters), std::move(acc));
}

Word parse_word(const std::vector<std::string>& alphabet, std::string_view text) {
  auto is_letter = [&](std::string_view s) {
    return std::find(alphabet.begin(), alphabet.end(), s) != alphabet.end();
  };
  if ((text.empty() || text == "1" || text == "ε") && !is_letter(text)) return {};
  Word out;
  if (text.find_first_of(" \t.") != std::string_view::npos) {
    std::string cur;
    for (char ch : text) {
      if (ch == ' ' || ch == '\t' || ch == '.') {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
  } else if (single_chars(alphabet)) {
    for (char ch : text) out.emplace_back(1, ch);
  } else {
    out.emplace_back(text);
  }
  for (const auto& a : out)
    if (!is_letter(a)) throw std::invalid_argument("unknown letter '" + a + "'");
  return out;
}

std::vector<std::string> alphabet_of(const Recognizer& rec) {
  std::vector<std::string> out;
  for (const auto& l : rec.letters) out.push_back(l.name);
  return out;
}

Elem evaluate_word(const Recognizer& rec, const Word& w) {
  const auto ops = monoid_ops(*rec.algebra);
  Elem v = rec.algebra->apply(ops.one, {});
  for (const auto& a : w) v = rec.algebra->apply(ops.mul, {v, rec.letters[rec.letter(a)].image});
  return v;
}

bool membership(const Recognizer& rec, const Word& w) { return rec.accept[0][evaluate_word(rec, w)]; }

Recognizer derivative(const Recognizer& rec, Side side, const Word& y) {
  const auto ops = monoid_ops(*rec.algebra);
  const Elem m = evaluate_word(rec, y);
  SortedSubset acc = empty_subset(*rec.algebra);
  for (Elem x = 0; x < rec.algebra->size(0); ++x) {
    const Elem v = side == Side::left ? rec.algebra->apply(ops.mul, {m, x}) : rec.algebra->apply(ops.mul, {x, m});
    acc[0][x] = rec.accept[0][v];
  }
  return rec.with_accept(std::move(acc));
}

SubstitutionSpec SubstitutionSpec::parse(std::string_view text, const std::vector<std::string>& target) {
  SubstitutionSpec g;
  g.target = target;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    auto item = text.substr(pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0)
        throw std::invalid_argument("substitution item '" + std::string(item) + "' is not of the form c=word");
      std::string name(item.substr(0, eq));
      if (std::find(g.source.begin(), g.source.end(), name) != g.source.end())
        throw std::invalid_argument("letter '" + name + "' substituted twice");
      g.source.push_back(name);
      g.images.push_back(parse_word(target, item.substr(eq + 1)));
    }
    pos = end + 1;
  }
  if (g.source.empty()) throw std::invalid_argument("empty substitution");
  return g;
}

Word SubstitutionSpec::apply(const Word& w) const {
  Word out;
  for (const auto& a : w) {
    auto it = std::find(source.begin(), source.end(), a);
    if (it == source.end()) throw std::invalid_argument("unknown letter '" + a + "'");
    const auto& img = images[it - source.begin()];
    out.insert(out.end(), img.begin(), img.end());
  }
  return out;
}

std::string SubstitutionSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (i) out += ',';
    out += source[i] + "=" + (images[i].empty() ? std::string() : word_label(target, images[i]));
  }
  return out;
}

Recognizer preimage(const Recognizer& rec, const SubstitutionSpec& g) {
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < g.source.size(); ++i)
    letters.push_back({g.source[i], 0, evaluate_word(rec, g.images[i])});
  return Recognizer::make(rec.algebra, std::move(letters), rec.accept);
}

RecognizerQuotient syntactic_monoid(const Recognizer& rec) {
  monoid_ops(*rec.algebra);
  auto [trimmed, inclusion] = trim(rec);
  auto q = syntactic_algebra(trimmed, elementary_translations(trimmed.algebra));
  return q;
}

AperiodicReport is_aperiodic(const FiniteAlgebra& monoid) {
  const auto ops = monoid_ops(monoid);
  for (Elem x = 0; x < monoid.size(0); ++x) {
    const Elem e = idempotent_power(monoid, 0, x);
    if (monoid.apply(ops.mul, {e, x}) != e) return {false, x};
  }
  return {true, std::nullopt};
}

Recognizer complement(const Recognizer& rec) {
  if (rec.algebra->ordered()) throw std::invalid_argument("complement of an ordered recognizer; use order_flip");
  SortedSubset acc = rec.accept;
  for (auto& row : acc) row.flip();
  return rec.with_accept(std::move(acc));
}

}  // namespace algvar
