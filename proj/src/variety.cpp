#include "algvar/variety.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "algvar/detail/saturate.hpp"
#include "algvar/omega.hpp"

namespace algvar {

ProfiniteReport satisfies_profinite_law(const FiniteAlgebra& alg, const Law& law,
                                        const std::vector<bool>* generator_sorts) {
  if (generator_sorts)
    for (auto s : law.var_sorts)
      if (s >= generator_sorts->size() || !(*generator_sorts)[s]) return {true, true, {}};
  auto rep = check_law(alg, law);
  return {rep.pass, false, rep.witness};
}

// ------------------------------------------------------- generated algebras

namespace {

bool multi_char_letters(const std::vector<Letter>& letters) {
  return std::any_of(letters.begin(), letters.end(), [](const Letter& l) { return l.name.size() != 1; });
}

// Discovers the algebra generated by keyed letters and builds it with
// witness-term labels, in canonical order.
template <class Key, class Apply, class Leq>
std::optional<std::pair<Recognizer, std::vector<std::vector<Key>>>> discover(
    const Signature& sig, const std::vector<std::pair<Letter, Key>>& seeds, Apply&& apply, Leq&& leq,
    std::size_t limit = static_cast<std::size_t>(-1)) {
  const std::size_t ns = sig.num_sorts();
  std::vector<std::vector<Key>> elems(ns);
  std::vector<std::map<Key, Elem>> index(ns);
  std::vector<std::map<Key, std::string>> wit(ns);
  std::vector<Letter> letters;
  std::vector<Letter> plain;
  for (const auto& [l, k] : seeds) plain.push_back(l);
  const bool dotted = multi_char_letters(plain);
  for (const auto& [l, k] : seeds) {
    if (!index[l.sort].count(k)) {
      index[l.sort].emplace(k, static_cast<Elem>(elems[l.sort].size()));
      elems[l.sort].push_back(k);
      wit[l.sort].emplace(k, l.name);
    }
    letters.push_back({l.name, l.sort, index[l.sort].at(k)});
  }
  std::vector<std::size_t> nullary(ns, 0);
  for (const auto& op : sig.ops())
    if (op.inputs.empty()) ++nullary[op.output];
  auto witness = [&](OpId o, const std::vector<const Key*>& args) {
    const auto& op = sig.op(o);
    if (op.inputs.empty()) return nullary[op.output] == 1 ? std::string("1") : op.name + "()";
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < args.size(); ++i) parts.push_back(wit[op.inputs[i]].at(*args[i]));
    if ((op.name == "mul" || op.name == "prod") && args.size() == 2 && op.inputs[0] == op.output &&
        op.inputs[1] == op.output)
      return parts[0] + (dotted ? "." : "") + parts[1];
    std::string out = op.name + "(";
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
    return out + ")";
  };
  bool ok = detail::saturate<Key>(
      sig, elems, index,
      [&](OpId o, const std::vector<const Key*>& args) {
        Key out = apply(o, args);
        auto& w = wit[sig.op(o).output];
        if (!w.count(out)) w.emplace(out, witness(o, args));
        return out;
      },
      limit);
  if (!ok) return std::nullopt;
  std::vector<std::vector<std::string>> labels(ns);
  for (SortId s = 0; s < ns; ++s) {
    std::set<std::string> seen;
    bool fine = true;
    for (const auto& k : elems[s]) {
      const auto& w = wit[s].at(k);
      if (w.size() > 48 || !valid_label(w) || !seen.insert(w).second) fine = false;
      labels[s].push_back(w);
    }
    if (!fine)
      for (std::size_t i = 0; i < labels[s].size(); ++i) labels[s][i] = sig.sorts()[s] + std::to_string(i);
  }
  std::vector<std::vector<Elem>> tables(sig.num_ops());
  for (OpId o = 0; o < sig.num_ops(); ++o) {
    const auto& op = sig.op(o);
    std::vector<std::size_t> radices;
    for (auto in : op.inputs) radices.push_back(elems[in].size());
    std::vector<const Key*> args(op.inputs.size());
    for_each_tuple(radices, [&](std::span<const Elem> t) {
      for (std::size_t i = 0; i < t.size(); ++i) args[i] = &elems[op.inputs[i]][t[i]];
      tables[o].push_back(index[op.output].at(apply(o, args)));
    });
  }
  SortedRelation order;
  if (sig.ordered())
    for (SortId s = 0; s < ns; ++s) {
      Relation r(elems[s].size());
      for (Elem i = 0; i < elems[s].size(); ++i)
        for (Elem j = 0; j < elems[s].size(); ++j)
          if (leq(s, elems[s][i], elems[s][j])) r.set(i, j);
      order.push_back(std::move(r));
    }
  auto alg = make_algebra(sig, std::move(labels), std::move(tables), std::move(order));
  return std::pair{Recognizer::generators_only(alg, std::move(letters)), std::move(elems)};
}

std::string key_of_canonical(const Recognizer& g) {
  const auto& a = *g.algebra;
  std::string k;
  auto put = [&](std::size_t v) {
    k += std::to_string(v);
    k += ' ';
  };
  for (SortId s = 0; s < a.num_sorts(); ++s) put(a.size(s));
  k += '|';
  for (const auto& l : g.letters) {
    k += l.name + ':';
    put(l.sort);
    put(l.image);
  }
  k += '|';
  for (const auto& t : a.tables()) {
    for (auto v : t) put(v);
    k += ';';
  }
  if (a.ordered())
    for (SortId s = 0; s < a.num_sorts(); ++s)
      for (Elem i = 0; i < a.size(s); ++i)
        for (Elem j = 0; j < a.size(s); ++j) k += a.leq(s, i, j) ? '1' : '0';
  return k;
}

std::optional<Pairing> pair_limited(const Recognizer& a, const Recognizer& b, std::size_t limit) {
  const auto& A = *a.algebra;
  const auto& B = *b.algebra;
  if (!(A.signature() == B.signature())) throw AlgebraError("paired algebras have different signatures");
  if (a.letters.size() != b.letters.size()) throw AlgebraError("paired algebras have different alphabets");
  using Key = std::pair<Elem, Elem>;
  std::vector<std::pair<Letter, Key>> seeds;
  for (const auto& l : a.letters) {
    const auto& m = b.letters[b.letter(l.name)];
    if (m.sort != l.sort) throw AlgebraError("letter '" + l.name + "' has different sorts");
    seeds.push_back({l, Key{l.image, m.image}});
  }
  std::vector<Elem> xa, xb;
  auto apply = [&](OpId o, const std::vector<const Key*>& args) {
    xa.clear();
    xb.clear();
    for (auto* p : args) {
      xa.push_back(p->first);
      xb.push_back(p->second);
    }
    return Key{A.apply(o, std::span<const Elem>(xa)), B.apply(o, std::span<const Elem>(xb))};
  };
  auto leq = [&](SortId s, const Key& x, const Key& y) { return A.leq(s, x.first, y.first) && B.leq(s, x.second, y.second); };
  auto r = discover<Key>(A.signature(), seeds, apply, leq, limit);
  if (!r) return std::nullopt;
  Pairing p{std::move(r->first), {}, {}};
  for (const auto& sort : r->second) {
    p.first.emplace_back();
    p.second.emplace_back();
    for (const auto& [x, y] : sort) {
      p.first.back().push_back(x);
      p.second.back().push_back(y);
    }
  }
  return p;
}

SortedSubset pull_back(const SortedSubset& s, const std::vector<std::vector<Elem>>& map) {
  SortedSubset out(map.size());
  for (SortId i = 0; i < map.size(); ++i)
    for (auto x : map[i]) out[i].push_back(s[i][x]);
  return out;
}

std::size_t total(const Recognizer& g) { return g.algebra->total_size(); }

std::size_t max_sort(const Recognizer& g) {
  std::size_t m = 0;
  for (auto s : g.algebra->sizes()) m = std::max(m, s);
  return m;
}

// Every subset (up-set when ordered) of the carrier, sort by sort.
std::vector<SortedSubset> all_subsets(const FiniteAlgebra& a) {
  std::vector<SortedSubset> out{SortedSubset{}};
  for (SortId s = 0; s < a.num_sorts(); ++s) {
    const std::size_t n = a.size(s);
    if (n > 20) throw std::length_error("carrier too large to enumerate subsets");
    std::vector<std::vector<bool>> rows;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<bool> row(n);
      for (std::size_t i = 0; i < n; ++i) row[i] = (mask >> i) & 1;
      bool up = true;
      if (a.ordered())
        for (Elem x = 0; x < n && up; ++x)
          for (Elem y = 0; y < n && up; ++y)
            if (row[x] && a.leq(s, x, y) && !row[y]) up = false;
      if (up) rows.push_back(std::move(row));
    }
    std::vector<SortedSubset> next;
    for (const auto& prefix : out)
      for (const auto& row : rows) {
        auto v = prefix;
        v.push_back(row);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

Recognizer with_letter_order(const Recognizer& g, const std::vector<std::string>& names) {
  if (g.letters.size() != names.size()) throw AlgebraError("alphabets differ");
  std::vector<Letter> letters;
  for (const auto& n : names) letters.push_back(g.letters[g.letter(n)]);
  return Recognizer::make(g.algebra, std::move(letters), g.accept);
}

}  // namespace

Recognizer as_generated(const Recognizer& rec) { return canonical_generated(rec); }

Recognizer canonical_generated(const Recognizer& g) {
  const auto& A = *g.algebra;
  std::vector<std::pair<Letter, Elem>> seeds;
  for (const auto& l : g.letters) seeds.push_back({l, l.image});
  std::vector<Elem> buf;
  auto apply = [&](OpId o, const std::vector<const Elem*>& args) {
    buf.clear();
    for (auto* p : args) buf.push_back(*p);
    return A.apply(o, std::span<const Elem>(buf));
  };
  auto leq = [&](SortId s, Elem x, Elem y) { return A.leq(s, x, y); };
  return discover<Elem>(A.signature(), seeds, apply, leq)->first;
}

std::string quotient_key(const Recognizer& g) { return key_of_canonical(canonical_generated(g)); }

Pairing pair_generated(const Recognizer& a, const Recognizer& b) {
  return *pair_limited(a, b, static_cast<std::size_t>(-1));
}

std::vector<Recognizer> all_quotients(const Recognizer& g) {
  auto c = canonical_generated(g);
  std::vector<Quotient> qs;
  if (c.algebra->ordered())
    for (const auto& p : all_stable_preorders(*c.algebra)) qs.push_back(quotient_by(c.algebra, p));
  else
    for (const auto& p : all_congruences(*c.algebra)) qs.push_back(quotient_by(c.algebra, p));
  std::vector<Recognizer> out;
  std::set<std::string> keys;
  for (const auto& q : qs) {
    std::vector<Letter> letters;
    for (const auto& l : c.letters) letters.push_back({l.name, l.sort, q.projection(l.sort, l.image)});
    auto r = canonical_generated(Recognizer::generators_only(q.algebra, std::move(letters)));
    if (keys.insert(key_of_canonical(r)).second) out.push_back(std::move(r));
  }
  return out;
}

// ------------------------------------------------- local pseudovarieties

LocalPseudovariety generate_local_pseudovariety(const std::vector<Recognizer>& gens, std::size_t bound) {
  if (gens.empty()) throw std::invalid_argument("no generators");
  LocalPseudovariety v;
  v.bound = bound;
  for (const auto& l : gens[0].letters) v.alphabet.push_back(l.name);
  std::vector<std::size_t> queue;
  auto add = [&](const Recognizer& r) {
    if (max_sort(r) > bound) {
      v.truncated = true;
      return;
    }
    auto key = key_of_canonical(r);
    if (!v.keys.insert(key).second) return;
    v.members.push_back(r);
    queue.push_back(v.members.size() - 1);
  };
  for (const auto& g : gens) add(canonical_generated(with_letter_order(g, v.alphabet)));
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const std::size_t i = queue[qi];
    for (auto& q : all_quotients(v.members[i])) add(q);
    for (std::size_t j = 0; j <= i && j < v.members.size(); ++j) {
      auto p = pair_limited(v.members[i], v.members[j], bound);
      if (p)
        add(p->rec);
      else
        v.truncated = true;
    }
  }
  return v;
}

bool same_ideal(const LocalPseudovariety& a, const LocalPseudovariety& b) { return a.keys == b.keys; }

// --------------------------------------------------------- language families

LanguageFamily family_of(const std::vector<Recognizer>& langs) {
  if (langs.empty()) throw std::invalid_argument("no languages");
  std::vector<std::string> names;
  for (const auto& l : langs[0].letters) names.push_back(l.name);
  Recognizer shared = canonical_generated(with_letter_order(langs[0], names));
  for (std::size_t i = 1; i < langs.size(); ++i) shared = pair_generated(shared, langs[i]).rec;
  std::set<SortedSubset> members;
  for (const auto& l : langs) members.insert(pull_back(l.accept, pair_generated(shared, l).second));
  return {shared, {members.begin(), members.end()}, false};
}

bool same_family(const LanguageFamily& a, const LanguageFamily& b) {
  // pulling back along the surjective projections keeps members distinct
  if (a.members.size() != b.members.size()) return false;
  auto p = pair_generated(a.shared, b.shared);
  auto moved = [](const std::vector<SortedSubset>& members, const std::vector<std::vector<Elem>>& map) {
    bool identity = true;
    for (const auto& m : map)
      for (Elem x = 0; x < m.size(); ++x) identity = identity && m[x] == x;
    if (identity) return members;
    std::vector<SortedSubset> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(pull_back(m, map));
    std::sort(out.begin(), out.end());
    return out;
  };
  return moved(a.members, p.first) == moved(b.members, p.second);
}

std::vector<Recognizer> family_languages(const LanguageFamily& f) {
  std::vector<Recognizer> out;
  for (const auto& m : f.members) out.push_back(f.shared.with_accept(m));
  return out;
}

LanguageFamily languages_of(const LocalPseudovariety& v) {
  if (v.members.empty()) throw std::invalid_argument("empty ideal");
  Recognizer shared = v.members[0];
  for (std::size_t i = 1; i < v.members.size(); ++i) shared = pair_generated(shared, v.members[i]).rec;
  std::set<SortedSubset> langs;
  if (v.keys.count(key_of_canonical(shared))) {
    for (auto& s : all_subsets(*shared.algebra)) langs.insert(std::move(s));
  } else {
    for (const auto& m : v.members) {
      auto map = pair_generated(shared, m).second;
      for (const auto& s : all_subsets(*m.algebra)) langs.insert(pull_back(s, map));
    }
  }
  return {shared, {langs.begin(), langs.end()}, v.truncated};
}

MorphismClass MorphismClass::all() {
  return {"all", [](const SubstitutionSpec&) { return true; }};
}

MorphismClass MorphismClass::non_erasing() {
  return {"non-erasing", [](const SubstitutionSpec& g) {
            return std::none_of(g.images.begin(), g.images.end(), [](const Word& w) { return w.empty(); });
          }};
}

MorphismClass MorphismClass::length_preserving() {
  return {"length-preserving", [](const SubstitutionSpec& g) {
            return std::all_of(g.images.begin(), g.images.end(), [](const Word& w) { return w.size() == 1; });
          }};
}

MorphismClass MorphismClass::by_name(std::string_view name) {
  if (name == "all") return all();
  if (name == "non-erasing") return non_erasing();
  if (name == "length-preserving") return length_preserving();
  throw std::invalid_argument("unknown morphism class '" + std::string(name) + "'");
}

Presentation default_presentation(const AlgebraPtr& alg) {
  if (alg->signature().with_order(false) == wilke_signature()) return omega_presentation(alg);
  return elementary_translations(alg);
}

namespace {

bool is_monoid_signature(const Signature& sig) { return sig.with_order(false) == monoid_signature(); }

std::vector<SubstitutionSpec> substitutions(const std::vector<std::string>& alphabet, std::size_t max_len,
                                            bool nonempty) {
  std::vector<Word> words{{}};
  for (std::size_t len = 1, lo = 0; len <= max_len; ++len) {
    const std::size_t hi = words.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (const auto& a : alphabet) {
        auto w = words[i];
        w.push_back(a);
        words.push_back(std::move(w));
      }
    lo = hi;
  }
  if (nonempty) words.erase(words.begin());
  std::vector<SubstitutionSpec> out;
  std::vector<std::size_t> radices(alphabet.size(), words.size());
  for_each_tuple(radices, [&](std::span<const Elem> t) {
    SubstitutionSpec g{alphabet, alphabet, {}};
    for (auto i : t) g.images.push_back(words[i]);
    out.push_back(std::move(g));
  });
  return out;
}

// Letter maps into the shared algebra, one per substitution or per
// assignment of letters to elements of their sort.
std::vector<std::vector<Elem>> letter_images(const Recognizer& shared, const ClosureOptions& opts) {
  std::vector<std::vector<Elem>> out;
  const auto& sig = shared.algebra->signature();
  if (opts.all_morphisms) {
    std::vector<std::size_t> radices;
    for (const auto& l : shared.letters) radices.push_back(shared.algebra->size(l.sort));
    for_each_tuple(radices, [&](std::span<const Elem> t) { out.emplace_back(t.begin(), t.end()); });
    return out;
  }
  const bool monoid = is_monoid_signature(sig);
  if (!monoid && !(sig.with_order(false) == wilke_signature()))
    throw std::invalid_argument("preimages under substitutions need a word or omega signature");
  for (const auto& g : substitutions(alphabet_of(shared), opts.max_image_length, !monoid)) {
    if (!opts.preimage_class->admits(g)) continue;
    std::vector<Elem> img;
    for (const auto& w : g.images) img.push_back(monoid ? evaluate_word(shared, w) : evaluate_plus(shared, w));
    out.push_back(std::move(img));
  }
  return out;
}

Recognizer relettered(const Recognizer& shared, const std::vector<Elem>& images) {
  auto letters = shared.letters;
  for (std::size_t i = 0; i < letters.size(); ++i) letters[i].image = images[i];
  return Recognizer::generators_only(shared.algebra, std::move(letters));
}

// Every union of the given sets, sorted; the empty union included.
std::vector<std::vector<bool>> unions_of(const std::vector<std::vector<bool>>& sets) {
  const std::size_t n = sets.size();
  if (n <= 64) {
    // bit n-1-y stands for y, so numeric order is the order of the rows
    auto bit = [n](std::size_t y) { return std::uint64_t{1} << (n - 1 - y); };
    std::vector<std::uint64_t> masks(n, 0);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (sets[x][y]) masks[x] |= bit(y);
    std::unordered_set<std::uint64_t> seen{0};
    std::vector<std::uint64_t> stack{0}, all{0};
    while (!stack.empty()) {
      const auto m = stack.back();
      stack.pop_back();
      for (std::size_t x = 0; x < n; ++x) {
        const auto v = m | masks[x];
        if (v != m && seen.insert(v).second) {
          stack.push_back(v);
          all.push_back(v);
        }
      }
    }
    std::sort(all.begin(), all.end());
    std::vector<std::vector<bool>> out;
    out.reserve(all.size());
    for (auto m : all) {
      std::vector<bool> row(n);
      for (std::size_t y = 0; y < n; ++y) row[y] = (m & bit(y)) != 0;
      out.push_back(std::move(row));
    }
    return out;
  }
  std::set<std::vector<bool>> members{std::vector<bool>(n, false)};
  std::vector<std::vector<bool>> stack(members.begin(), members.end());
  while (!stack.empty()) {
    auto m = std::move(stack.back());
    stack.pop_back();
    for (std::size_t x = 0; x < n; ++x) {
      if (m[x]) continue;
      auto v = m;
      for (std::size_t y = 0; y < n; ++y) v[y] = v[y] || sets[x][y];
      if (members.insert(v).second) stack.push_back(std::move(v));
    }
  }
  return {members.begin(), members.end()};
}

}  // namespace

LanguageFamily close_language_family(const LanguageFamily& f, const ClosureOptions& opts) {
  Recognizer shared = f.shared;
  const auto& alg0 = *shared.algebra;
  if (alg0.ordered() && opts.mode == ClosureMode::boolean)
    throw std::invalid_argument("boolean closure in the ordered regime; use positive mode");
  std::set<SortedSubset> langs(f.members.begin(), f.members.end());
  bool truncated = f.truncated;
  const bool preimages = opts.all_morphisms || opts.preimage_class.has_value();
  std::vector<std::vector<std::vector<Elem>>> psi;
  if (preimages) {
    // grow the shared algebra until every substitution acts on it
    for (bool changed = true; changed && !truncated;) {
      changed = false;
      for (const auto& img : letter_images(shared, opts)) {
        auto p = pair_limited(shared, relettered(shared, img), opts.max_shared_size);
        if (!p) {
          truncated = true;
          break;
        }
        if (total(p->rec) == total(shared)) continue;
        std::set<SortedSubset> moved;
        for (const auto& l : langs) moved.insert(pull_back(l, p->first));
        langs = std::move(moved);
        shared = p->rec;
        changed = true;
        break;
      }
    }
    if (!truncated)
      for (const auto& img : letter_images(shared, opts)) psi.push_back(pair_generated(shared, relettered(shared, img)).second);
  }
  const auto& alg = *shared.algebra;
  const auto ops = default_presentation(shared.algebra).ops;
  const std::size_t ns = alg.num_sorts();
  // Derivatives and preimages act sortwise and commute with unions,
  // intersections and complements, and diagonals mix sorts freely. So the
  // closure is the product over sorts of the lattices generated by the rows
  // reachable under the unary maps.
  std::vector<std::set<std::vector<bool>>> rows(ns);
  std::vector<std::pair<SortId, std::vector<bool>>> todo;
  auto add = [&](SortId s, std::vector<bool> r) {
    if (rows[s].insert(r).second) todo.emplace_back(s, std::move(r));
  };
  for (const auto& l : langs)
    for (SortId s = 0; s < ns; ++s) add(s, l[s]);
  while (!todo.empty()) {
    auto [t, r] = std::move(todo.back());
    todo.pop_back();
    for (const auto& u : ops) {
      if (u.target != t) continue;
      std::vector<bool> d(alg.size(u.source));
      for (Elem x = 0; x < d.size(); ++x) d[x] = r[u.map[x]];
      add(u.source, std::move(d));
    }
    for (const auto& m : psi) {
      std::vector<bool> d;
      for (auto x : m[t]) d.push_back(r[x]);
      add(t, std::move(d));
    }
  }
  std::vector<std::vector<std::vector<bool>>> per_sort(ns);
  for (SortId s = 0; s < ns; ++s) {
    const std::size_t n = alg.size(s);
    // least member containing x: the rows through x, and in boolean mode the
    // complements of the rows missing x
    std::vector<std::vector<bool>> least(n, std::vector<bool>(n, true));
    for (const auto& r : rows[s])
      for (Elem x = 0; x < n; ++x)
        if (r[x] || opts.mode == ClosureMode::boolean)
          for (Elem y = 0; y < n; ++y) least[x][y] = least[x][y] && r[y] == r[x];
    per_sort[s] = unions_of(least);
  }
  std::vector<SortedSubset> out;
  if (ns == 1) {
    out.reserve(per_sort[0].size());
    for (auto& row : per_sort[0]) out.push_back(SortedSubset{std::move(row)});
    return {shared, std::move(out), truncated};
  }
  out.push_back(SortedSubset{});
  for (SortId s = 0; s < ns; ++s) {
    std::vector<SortedSubset> next;
    next.reserve(out.size() * per_sort[s].size());
    for (const auto& c : out)
      for (const auto& row : per_sort[s]) {
        auto v = c;
        v.push_back(row);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return {shared, std::move(out), truncated};
}

LanguageFamily close_language_family(const std::vector<Recognizer>& langs, const ClosureOptions& opts) {
  return close_language_family(family_of(langs), opts);
}

LanguageFamily straubing_filter(const std::vector<Recognizer>& langs, const MorphismClass& c, ClosureOptions opts) {
  opts.all_morphisms = false;
  opts.preimage_class = c;
  return close_language_family(langs, opts);
}

LocalPseudovariety family_to_pseudovariety(const LanguageFamily& f, std::size_t bound) {
  const auto pres = default_presentation(f.shared.algebra);
  std::vector<Recognizer> gens;
  std::set<std::string> keys;
  for (const auto& m : f.members) {
    auto syn = syntactic_algebra(f.shared.with_accept(m), pres);
    auto g = canonical_generated(syn.recognizer);
    if (keys.insert(key_of_canonical(g)).second) gens.push_back(std::move(g));
  }
  auto v = generate_local_pseudovariety(gens, bound);
  v.truncated = v.truncated || f.truncated;
  return v;
}

namespace {

void compare(RoundtripReport& rep, const LocalPseudovariety& v, const LanguageFamily& f, const ClosureOptions& opts,
             std::size_t bound) {
  rep.ideal_size = v.members.size();
  rep.family_size = f.members.size();
  auto v2 = family_to_pseudovariety(f, bound);
  auto f2 = languages_of(v2);
  auto closed = close_language_family(f, opts);
  rep.truncated = v.truncated || f.truncated || v2.truncated || f2.truncated || closed.truncated;
  rep.ideal_fixed = same_ideal(v, v2);
  rep.family_fixed = same_family(f, f2) && same_family(f, closed);
  if (!rep.ideal_fixed)
    rep.mismatch = "ideal has " + std::to_string(v.members.size()) + " members, regenerated ideal has " +
                   std::to_string(v2.members.size());
  else if (!rep.family_fixed)
    rep.mismatch = "family has " + std::to_string(f.members.size()) + " languages, regenerated family has " +
                   std::to_string(f2.members.size()) + ", its closure " + std::to_string(closed.members.size());
}

}  // namespace

RoundtripReport roundtrip_from_generators(const std::vector<Recognizer>& gens, std::size_t bound, ClosureMode mode) {
  RoundtripReport rep;
  auto v = generate_local_pseudovariety(gens, bound);
  auto f = languages_of(v);
  ClosureOptions opts;
  opts.mode = mode;
  compare(rep, v, f, opts, bound);
  return rep;
}

RoundtripReport roundtrip_from_languages(const std::vector<Recognizer>& langs, std::size_t bound,
                                         const ClosureOptions& opts) {
  RoundtripReport rep;
  auto f = close_language_family(langs, opts);
  auto v = family_to_pseudovariety(f, bound);
  compare(rep, v, f, opts, bound);
  return rep;
}

}  // namespace algvar
