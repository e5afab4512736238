#include "algvar/presentation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace algvar {

// --------------------------------------------------------------- recognizer

SortedSubset empty_subset(const FiniteAlgebra& alg) {
  SortedSubset s(alg.num_sorts());
  for (SortId i = 0; i < alg.num_sorts(); ++i) s[i].assign(alg.size(i), false);
  return s;
}

bool is_up_set(const FiniteAlgebra& alg, const SortedSubset& set) {
  for (SortId s = 0; s < alg.num_sorts(); ++s)
    for (Elem a = 0; a < alg.size(s); ++a)
      for (Elem b = 0; b < alg.size(s); ++b)
        if (set[s][a] && alg.leq(s, a, b) && !set[s][b]) return false;
  return true;
}

Recognizer Recognizer::make(AlgebraPtr algebra, std::vector<Letter> letters, SortedSubset accept) {
  if (!algebra) throw std::invalid_argument("recognizer without algebra");
  std::set<std::string> names;
  for (const auto& l : letters) {
    if (l.name.empty() || !valid_label(l.name)) throw AlgebraError("invalid letter name '" + l.name + "'");
    if (!names.insert(l.name).second) throw AlgebraError("duplicate letter '" + l.name + "'");
    if (l.sort >= algebra->num_sorts() || l.image >= algebra->size(l.sort))
      throw AlgebraError("letter '" + l.name + "' maps outside the carrier");
  }
  if (accept.empty()) accept = empty_subset(*algebra);
  if (accept.size() != algebra->num_sorts()) throw AlgebraError("accept set has the wrong number of sorts");
  for (SortId s = 0; s < accept.size(); ++s)
    if (accept[s].size() != algebra->size(s)) throw AlgebraError("accept set has the wrong size");
  if (algebra->ordered() && !is_up_set(*algebra, accept)) throw AlgebraError("accept set is not an up-set");
  Recognizer r;
  r.algebra = std::move(algebra);
  r.letters = std::move(letters);
  r.accept = std::move(accept);
  r.reject_pad.assign(r.algebra->num_sorts(), false);
  return r;
}

Recognizer Recognizer::generators_only(AlgebraPtr algebra, std::vector<Letter> letters) {
  return make(std::move(algebra), std::move(letters), {});
}

bool Recognizer::generated() const {
  std::vector<std::vector<Elem>> gens(algebra->num_sorts());
  for (const auto& l : letters) gens[l.sort].push_back(l.image);
  auto flags = closure_of(*algebra, gens);
  for (const auto& f : flags)
    if (std::find(f.begin(), f.end(), 0) != f.end()) return false;
  return true;
}

std::optional<std::size_t> Recognizer::find_letter(std::string_view name) const {
  for (std::size_t i = 0; i < letters.size(); ++i)
    if (letters[i].name == name) return i;
  return std::nullopt;
}

std::size_t Recognizer::letter(std::string_view name) const {
  if (auto i = find_letter(name)) return *i;
  throw std::invalid_argument("unknown letter '" + std::string(name) + "'");
}

Recognizer Recognizer::with_accept(SortedSubset acc) const { return make(algebra, letters, std::move(acc)); }

std::pair<Recognizer, Morphism> trim(const Recognizer& rec) {
  if (rec.generated()) return {rec, identity_morphism(rec.algebra)};
  std::vector<std::vector<Elem>> gens(rec.algebra->num_sorts());
  for (const auto& l : rec.letters) gens[l.sort].push_back(l.image);
  auto sub = generated_subalgebra(rec.algebra, gens);
  std::vector<Letter> letters;
  for (const auto& l : rec.letters) {
    const auto& inc = sub.inclusion.maps[l.sort];
    Elem pos = static_cast<Elem>(std::find(inc.begin(), inc.end(), l.image) - inc.begin());
    letters.push_back({l.name, l.sort, pos});
  }
  SortedSubset acc(rec.algebra->num_sorts());
  for (SortId s = 0; s < acc.size(); ++s)
    for (auto a : sub.inclusion.maps[s]) acc[s].push_back(rec.accept[s][a]);
  return {Recognizer::make(sub.algebra, std::move(letters), std::move(acc)), sub.inclusion};
}

Recognizer transport(const Recognizer& rec, const Morphism& proj) {
  const auto& tgt = *proj.target;
  SortedSubset acc(tgt.num_sorts());
  for (SortId s = 0; s < tgt.num_sorts(); ++s) {
    acc[s].assign(tgt.size(s), false);
    std::vector<int> seen(tgt.size(s), -1);
    for (Elem a = 0; a < rec.algebra->size(s); ++a) {
      const Elem b = proj(s, a);
      const int v = rec.accept[s][a] ? 1 : 0;
      if (seen[b] >= 0 && seen[b] != v) throw AlgebraError("accept set is not saturated by the quotient");
      seen[b] = v;
      acc[s][b] = v != 0;
    }
  }
  std::vector<Letter> letters;
  for (const auto& l : rec.letters) letters.push_back({l.name, l.sort, proj(l.sort, l.image)});
  return Recognizer::make(proj.target, std::move(letters), std::move(acc));
}

Recognizer order_flip(const Recognizer& rec) {
  const auto& a = *rec.algebra;
  SortedRelation order;
  if (a.ordered())
    for (SortId s = 0; s < a.num_sorts(); ++s) {
      Relation r(a.size(s));
      for (Elem x = 0; x < a.size(s); ++x)
        for (Elem y = 0; y < a.size(s); ++y)
          if (a.leq(s, y, x)) r.set(x, y);
      order.push_back(std::move(r));
    }
  std::vector<std::vector<std::string>> labels;
  for (SortId s = 0; s < a.num_sorts(); ++s) labels.push_back(a.labels(s));
  auto flipped = make_algebra(a.signature(), std::move(labels), a.tables(), std::move(order));
  SortedSubset acc = rec.accept;
  for (auto& row : acc) row.flip();
  return Recognizer::make(flipped, rec.letters, std::move(acc));
}

// ------------------------------------------------------------ presentations

bool Presentation::add(UnaryOp op) {
  for (const auto& o : ops)
    if (o.source == op.source && o.target == op.target && o.map == op.map) return false;
  ops.push_back(std::move(op));
  return true;
}

Presentation elementary_translations(const AlgebraPtr& alg) {
  Presentation p{alg, translation_maps(*alg), false};
  return p;
}

Presentation omega_presentation(const AlgebraPtr& alg) {
  const auto& sig = alg->signature();
  auto plus = sig.find_sort("plus"), omega = sig.find_sort("omega");
  auto prod = sig.find_op("prod"), mix = sig.find_op("mix"), opow = sig.find_op("opow");
  if (!plus || !omega || !prod || !mix || !opow || sig.num_sorts() != 2 || sig.num_ops() != 3)
    throw AlgebraError("algebra does not carry the Wilke signature");
  if (sig.op(*prod).inputs != std::vector<SortId>{*plus, *plus} || sig.op(*prod).output != *plus ||
      sig.op(*mix).inputs != std::vector<SortId>{*plus, *omega} || sig.op(*mix).output != *omega ||
      sig.op(*opow).inputs != std::vector<SortId>{*plus} || sig.op(*opow).output != *omega)
    throw AlgebraError("algebra does not carry the Wilke signature");
  const auto np = alg->size(*plus), nw = alg->size(*omega);
  Presentation p{alg, {}, false};
  auto iota = [](std::size_t n) {
    std::vector<Elem> v(n);
    for (Elem i = 0; i < n; ++i) v[i] = i;
    return v;
  };
  // the adjoined unit acts as the identity on both sorts
  p.add({*plus, *plus, iota(np), "1*_"});
  for (Elem y = 0; y < np; ++y) {
    std::vector<Elem> left(np), right(np);
    for (Elem x = 0; x < np; ++x) {
      left[x] = alg->apply(*prod, {y, x});
      right[x] = alg->apply(*prod, {x, y});
    }
    p.add({*plus, *plus, left, alg->label(*plus, y) + "*_"});
    p.add({*plus, *plus, right, "_*" + alg->label(*plus, y)});
  }
  for (Elem z = 0; z < nw; ++z) {
    std::vector<Elem> m(np);
    for (Elem x = 0; x < np; ++x) m[x] = alg->apply(*mix, {x, z});
    p.add({*plus, *omega, m, "_*" + alg->label(*omega, z)});
  }
  {
    std::vector<Elem> w(np);
    for (Elem x = 0; x < np; ++x) w[x] = alg->apply(*opow, {x});
    p.add({*plus, *omega, w, "_^w"});
  }
  p.add({*omega, *omega, iota(nw), "1*_"});
  for (Elem y = 0; y < np; ++y) {
    std::vector<Elem> m(nw);
    for (Elem z = 0; z < nw; ++z) m[z] = alg->apply(*mix, {y, z});
    p.add({*omega, *omega, m, alg->label(*plus, y) + "*_"});
  }
  return p;
}

Presentation omega_presentation(const Recognizer& rec) { return omega_presentation(rec.algebra); }

Presentation composition_closure(const Presentation& p) {
  Presentation out{p.base, {}, true};
  std::map<std::tuple<SortId, SortId, std::vector<Elem>>, std::size_t> seen;
  auto insert = [&](UnaryOp op) {
    auto key = std::make_tuple(op.source, op.target, op.map);
    if (seen.count(key)) return false;
    seen.emplace(std::move(key), out.ops.size());
    out.ops.push_back(std::move(op));
    return true;
  };
  const auto& alg = *p.base;
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    std::vector<Elem> id(alg.size(s));
    for (Elem a = 0; a < id.size(); ++a) id[a] = a;
    insert({s, s, std::move(id), "id_" + alg.signature().sorts()[s]});
  }
  for (const auto& g : p.ops) insert(g);
  // left-compose generators until nothing new appears
  for (std::size_t i = 0; i < out.ops.size(); ++i) {
    for (const auto& g : p.ops) {
      if (g.source != out.ops[i].target) continue;
      const auto& f = out.ops[i];
      std::vector<Elem> m(f.map.size());
      for (Elem a = 0; a < m.size(); ++a) m[a] = g.map[f.map[a]];
      std::string label = f.label.rfind("id_", 0) == 0 ? g.label : g.label + "∘" + f.label;
      insert({f.source, g.target, std::move(m), std::move(label)});
    }
  }
  return out;
}

std::optional<UnaryOp> lift_unary(const Morphism& e, const UnaryOp& u) {
  if (!is_surjective(e)) throw std::invalid_argument("lift_unary needs a surjective morphism");
  std::vector<Elem> map(e.target->size(u.source), 0);
  std::vector<char> set(map.size(), 0);
  for (Elem a = 0; a < u.map.size(); ++a) {
    const Elem b = e(u.source, a);
    const Elem img = e(u.target, u.map[a]);
    if (!set[b]) {
      set[b] = 1;
      map[b] = img;
    } else if (map[b] != img) {
      return std::nullopt;
    }
  }
  return UnaryOp{u.source, u.target, std::move(map), u.label};
}

// -------------------------------------------------------------- refinement

Partition refine_partition(const std::vector<std::size_t>& sizes, const std::vector<UnaryOp>& ops,
                           const Partition& init) {
  Partition cur = init;
  std::vector<std::vector<const UnaryOp*>> from(sizes.size());
  for (const auto& u : ops) from[u.source].push_back(&u);
  while (true) {
    std::vector<std::vector<std::uint32_t>> raw(sizes.size());
    bool split = false;
    for (SortId s = 0; s < sizes.size(); ++s) {
      // key each element by its block and the blocks of its images
      std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
      raw[s].resize(sizes[s]);
      for (Elem a = 0; a < sizes[s]; ++a) {
        std::vector<std::uint32_t> key{cur.block(s, a)};
        for (auto* u : from[s]) key.push_back(cur.block(u->target, u->map[a]));
        auto it = ids.emplace(std::move(key), static_cast<std::uint32_t>(ids.size())).first;
        raw[s][a] = it->second;
      }
      if (ids.size() != cur.num_blocks(s)) split = true;
    }
    if (!split) return cur;
    cur = Partition(std::move(raw));
  }
}

SortedRelation refine_preorder(const std::vector<UnaryOp>& ops, SortedRelation rel) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& u : ops) {
      auto& src = rel[u.source];
      const auto& tgt = rel[u.target];
      for (Elem a = 0; a < src.size(); ++a)
        for (Elem b = 0; b < src.size(); ++b)
          if (src(a, b) && !tgt(u.map[a], u.map[b])) {
            src.set(a, b, false);
            changed = true;
          }
    }
  }
  return rel;
}

namespace {

void require_base(const Recognizer& rec, const Presentation& p) {
  if (p.base != rec.algebra && !(*p.base == *rec.algebra))
    throw std::invalid_argument("presentation does not live on the recognizer's algebra");
}

bool in_subset(const SortSubset& s0, SortId s) { return std::find(s0.begin(), s0.end(), s) != s0.end(); }

void check_s0(const FiniteAlgebra& alg, const SortSubset& s0) {
  if (s0.empty()) throw std::invalid_argument("sort subset must be nonempty");
  for (auto s : s0)
    if (s >= alg.num_sorts()) throw std::invalid_argument("sort subset names an undeclared sort");
}

}  // namespace

Partition syntactic_congruence(const Recognizer& rec, const Presentation& p) {
  require_base(rec, p);
  std::vector<std::vector<std::uint32_t>> raw(rec.algebra->num_sorts());
  for (SortId s = 0; s < raw.size(); ++s)
    for (Elem a = 0; a < rec.algebra->size(s); ++a) raw[s].push_back(rec.accept[s][a] ? 1 : 0);
  return refine_partition(rec.algebra->sizes(), p.ops, Partition(std::move(raw)));
}

SortedRelation syntactic_preorder(const Recognizer& rec, const Presentation& p) {
  require_base(rec, p);
  SortedRelation init;
  for (SortId s = 0; s < rec.algebra->num_sorts(); ++s) {
    const std::size_t n = rec.algebra->size(s);
    Relation r(n);
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        if (!rec.accept[s][a] || rec.accept[s][b]) r.set(a, b);
    init.push_back(std::move(r));
  }
  return refine_preorder(p.ops, std::move(init));
}

RecognizerQuotient syntactic_algebra(const Recognizer& rec, const Presentation& p) {
  if (!rec.generated()) throw std::invalid_argument("recognizer is not generated by its letters; trim it first");
  Quotient q = rec.algebra->ordered() ? quotient_by(rec.algebra, syntactic_preorder(rec, p))
                                      : quotient_by(rec.algebra, syntactic_congruence(rec, p));
  return {transport(rec, q.projection), q.projection};
}

Partition reduction_congruence(const Recognizer& rec, const Presentation& p, const SortSubset& s0) {
  require_base(rec, p);
  check_s0(*rec.algebra, s0);
  const auto sizes = rec.algebra->sizes();
  std::vector<std::vector<std::uint32_t>> raw(sizes.size());
  for (SortId s = 0; s < sizes.size(); ++s)
    for (Elem a = 0; a < sizes[s]; ++a) raw[s].push_back(in_subset(s0, s) ? a : 0);
  return refine_partition(sizes, p.ops, Partition(std::move(raw)));
}

SortedRelation reduction_preorder(const Recognizer& rec, const Presentation& p, const SortSubset& s0) {
  require_base(rec, p);
  check_s0(*rec.algebra, s0);
  SortedRelation init;
  for (SortId s = 0; s < rec.algebra->num_sorts(); ++s)
    init.push_back(in_subset(s0, s) ? rec.algebra->order(s) : Relation(rec.algebra->size(s), true));
  return refine_preorder(p.ops, std::move(init));
}

RecognizerQuotient reduce_quotient(const Recognizer& rec, const Presentation& p, const SortSubset& s0) {
  Quotient q = rec.algebra->ordered() ? quotient_by(rec.algebra, reduction_preorder(rec, p, s0))
                                      : quotient_by(rec.algebra, reduction_congruence(rec, p, s0));
  return {transport(rec, q.projection), q.projection};
}

ReducedReport is_reduced(const Recognizer& rec, const Presentation& p, const SortSubset& s0) {
  const auto& alg = *rec.algebra;
  const bool ordered = alg.ordered();
  ReducedReport rep;
  auto separated_in_target = [&](SortId t, Elem x, Elem y) {
    return ordered ? !alg.leq(t, x, y) : x != y;
  };
  // candidate pairs: distinct (ordered: incomparable in the given direction)
  std::vector<std::tuple<SortId, Elem, Elem>> pairs;
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    if (in_subset(s0, s)) continue;
    for (Elem a = 0; a < alg.size(s); ++a)
      for (Elem b = 0; b < alg.size(s); ++b) {
        if (ordered ? alg.leq(s, a, b) : a >= b) continue;
        pairs.emplace_back(s, a, b);
      }
  }
  check_s0(alg, s0);
  // shortest separating composite by breadth-first search over pairs
  for (auto [s, a, b] : pairs) {
    using State = std::tuple<SortId, Elem, Elem>;
    std::map<State, std::pair<State, const UnaryOp*>> prev;
    std::deque<State> queue{{s, a, b}};
    prev.emplace(State{s, a, b}, std::pair{State{s, a, b}, nullptr});
    std::optional<State> hit;
    while (!queue.empty() && !hit) {
      auto st = queue.front();
      queue.pop_front();
      auto [t, x, y] = st;
      if (in_subset(s0, t) && separated_in_target(t, x, y)) {
        hit = st;
        break;
      }
      for (const auto& u : p.ops) {
        if (u.source != t) continue;
        State nx{u.target, u.map[x], u.map[y]};
        if (prev.emplace(nx, std::pair{st, &u}).second) queue.push_back(nx);
      }
    }
    if (!hit) {
      rep.reduced = false;
      rep.unseparated = std::tuple{s, a, b};
      rep.separators.clear();
      return rep;
    }
    std::string via;
    for (State cur = *hit; prev.at(cur).second;) {
      auto [before, op] = prev.at(cur);
      via += (via.empty() ? "" : "∘") + op->label;
      cur = before;
    }
    if (via.empty()) via = "id";
    rep.separators.push_back({s, a, b, via});
  }
  return rep;
}

}  // namespace algvar
