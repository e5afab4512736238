#include "algvar/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "algvar/detail/saturate.hpp"

namespace algvar {

Signature::Signature(std::vector<std::string> sorts, std::vector<OpSymbol> ops, bool ordered)
    : sorts_(std::move(sorts)), ops_(std::move(ops)), ordered_(ordered) {
  std::set<std::string> seen;
  for (const auto& s : sorts_) {
    if (s.empty() || !valid_label(s)) throw AlgebraError("invalid sort name '" + s + "'");
    if (!seen.insert(s).second) throw AlgebraError("duplicate sort '" + s + "'");
  }
  std::set<std::string> names;
  for (const auto& op : ops_) {
    if (op.name.empty() || !valid_label(op.name)) throw AlgebraError("invalid op name '" + op.name + "'");
    if (!names.insert(op.name).second) throw AlgebraError("duplicate op '" + op.name + "'");
    for (auto in : op.inputs)
      if (in >= sorts_.size()) throw AlgebraError("op '" + op.name + "' uses an undeclared sort");
    if (op.output >= sorts_.size()) throw AlgebraError("op '" + op.name + "' uses an undeclared sort");
  }
}

std::optional<SortId> Signature::find_sort(std::string_view name) const {
  for (SortId s = 0; s < sorts_.size(); ++s)
    if (sorts_[s] == name) return s;
  return std::nullopt;
}

SortId Signature::sort_id(std::string_view name) const {
  if (auto s = find_sort(name)) return *s;
  throw AlgebraError("unknown sort '" + std::string(name) + "'");
}

std::optional<OpId> Signature::find_op(std::string_view name) const {
  for (OpId o = 0; o < ops_.size(); ++o)
    if (ops_[o].name == name) return o;
  return std::nullopt;
}

OpId Signature::op_id(std::string_view name) const {
  if (auto o = find_op(name)) return *o;
  throw AlgebraError("unknown op '" + std::string(name) + "'");
}

Signature Signature::with_order(bool ordered) const {
  Signature s = *this;
  s.ordered_ = ordered;
  return s;
}

bool valid_label(std::string_view label) {
  if (label.empty()) return false;
  int depth = 0;
  for (char c : label) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '=' || c == '#') return false;
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) return false;
    if (c == ',' && depth == 0) return false;
  }
  return depth == 0;
}

FiniteAlgebra::FiniteAlgebra(Signature sig, std::vector<std::vector<std::string>> labels,
                             std::vector<std::vector<Elem>> tables, SortedRelation order)
    : sig_(std::move(sig)), labels_(std::move(labels)), tables_(std::move(tables)), order_(std::move(order)) {
  if (labels_.size() != sig_.num_sorts()) throw AlgebraError("carrier count does not match sorts");
  for (SortId s = 0; s < labels_.size(); ++s) {
    std::set<std::string_view> seen;
    for (const auto& l : labels_[s]) {
      if (!valid_label(l)) throw AlgebraError("invalid element label '" + l + "'");
      if (!seen.insert(l).second)
        throw AlgebraError("duplicate element '" + l + "' in sort " + sig_.sorts()[s]);
    }
  }
  if (tables_.size() != sig_.num_ops()) throw AlgebraError("table count does not match ops");
  for (OpId o = 0; o < sig_.num_ops(); ++o) {
    const auto& op = sig_.op(o);
    std::size_t expected = 1;
    for (auto in : op.inputs) expected *= size(in);
    if (tables_[o].size() != expected)
      throw AlgebraError("table of '" + op.name + "' is not total");
    if (expected > 0 && size(op.output) == 0)
      throw AlgebraError("op '" + op.name + "' maps a nonempty tuple space into an empty sort");
    for (auto v : tables_[o])
      if (v >= size(op.output)) throw AlgebraError("table of '" + op.name + "' has an out-of-range entry");
  }
  if (!sig_.ordered()) {
    if (!order_.empty()) throw AlgebraError("order given for an unordered signature");
  }
  if (order_.empty()) {
    for (SortId s = 0; s < labels_.size(); ++s) order_.push_back(Relation::identity(size(s)));
    return;
  }
  if (order_.size() != labels_.size()) throw AlgebraError("order count does not match sorts");
  for (SortId s = 0; s < labels_.size(); ++s) {
    if (order_[s].size() != size(s)) throw AlgebraError("order size mismatch");
    if (!order_[s].is_partial_order())
      throw AlgebraError("order on sort " + sig_.sorts()[s] + " is not a partial order");
  }
  for (OpId o = 0; o < sig_.num_ops(); ++o) {
    const auto& op = sig_.op(o);
    auto radices = input_sizes(o);
    std::vector<Elem> u;
    for_each_tuple(radices, [&](std::span<const Elem> t) {
      u.assign(t.begin(), t.end());
      Elem out = apply(o, t);
      for (std::size_t i = 0; i < t.size(); ++i) {
        const Elem keep = u[i];
        for (Elem b = 0; b < radices[i]; ++b) {
          if (b == keep || !order_[op.inputs[i]](keep, b)) continue;
          u[i] = b;
          if (!order_[op.output](out, apply(o, u)))
            throw AlgebraError("op '" + op.name + "' is not monotone");
        }
        u[i] = keep;
      }
    });
  }
}

std::vector<std::size_t> FiniteAlgebra::sizes() const {
  std::vector<std::size_t> out;
  for (const auto& l : labels_) out.push_back(l.size());
  return out;
}

std::size_t FiniteAlgebra::total_size() const {
  std::size_t n = 0;
  for (const auto& l : labels_) n += l.size();
  return n;
}

std::optional<Elem> FiniteAlgebra::find_label(SortId s, std::string_view label) const {
  for (Elem a = 0; a < labels_[s].size(); ++a)
    if (labels_[s][a] == label) return a;
  return std::nullopt;
}

Elem FiniteAlgebra::element(SortId s, std::string_view label) const {
  if (auto a = find_label(s, label)) return *a;
  throw AlgebraError("no element '" + std::string(label) + "' in sort " + sig_.sorts()[s]);
}

std::vector<std::size_t> FiniteAlgebra::input_sizes(OpId o) const {
  std::vector<std::size_t> r;
  for (auto in : sig_.op(o).inputs) r.push_back(size(in));
  return r;
}

std::size_t FiniteAlgebra::offset(OpId o, std::span<const Elem> args) const {
  const auto& inputs = sig_.op(o).inputs;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) idx = idx * size(inputs[i]) + args[i];
  return idx;
}

// ---------------------------------------------------------------- morphisms

bool is_homomorphism(const FiniteAlgebra& src, const FiniteAlgebra& tgt,
                     const std::vector<std::vector<Elem>>& maps) {
  if (!(src.signature() == tgt.signature())) return false;
  if (maps.size() != src.num_sorts()) return false;
  for (SortId s = 0; s < maps.size(); ++s) {
    if (maps[s].size() != src.size(s)) return false;
    for (auto v : maps[s])
      if (v >= tgt.size(s)) return false;
  }
  const auto& sig = src.signature();
  for (OpId o = 0; o < sig.num_ops(); ++o) {
    const auto& op = sig.op(o);
    bool ok = true;
    std::vector<Elem> img(op.inputs.size());
    for_each_tuple(src.input_sizes(o), [&](std::span<const Elem> t) {
      if (!ok) return;
      for (std::size_t i = 0; i < t.size(); ++i) img[i] = maps[op.inputs[i]][t[i]];
      if (maps[op.output][src.apply(o, t)] != tgt.apply(o, img)) ok = false;
    });
    if (!ok) return false;
  }
  if (sig.ordered()) {
    for (SortId s = 0; s < maps.size(); ++s)
      for (Elem a = 0; a < src.size(s); ++a)
        for (Elem b = 0; b < src.size(s); ++b)
          if (src.leq(s, a, b) && !tgt.leq(s, maps[s][a], maps[s][b])) return false;
  }
  return true;
}

Morphism make_morphism(AlgebraPtr source, AlgebraPtr target, std::vector<std::vector<Elem>> maps) {
  if (!is_homomorphism(*source, *target, maps)) throw AlgebraError("map is not a homomorphism");
  return Morphism{std::move(source), std::move(target), std::move(maps)};
}

Morphism identity_morphism(AlgebraPtr a) {
  std::vector<std::vector<Elem>> maps(a->num_sorts());
  for (SortId s = 0; s < maps.size(); ++s) {
    maps[s].resize(a->size(s));
    std::iota(maps[s].begin(), maps[s].end(), 0u);
  }
  return Morphism{a, a, std::move(maps)};
}

Morphism compose(const Morphism& g, const Morphism& f) {
  std::vector<std::vector<Elem>> maps(f.maps.size());
  for (SortId s = 0; s < maps.size(); ++s)
    for (auto v : f.maps[s]) maps[s].push_back(g.maps[s][v]);
  return Morphism{f.source, g.target, std::move(maps)};
}

bool is_surjective(const Morphism& m) {
  for (SortId s = 0; s < m.maps.size(); ++s) {
    std::vector<char> hit(m.target->size(s), 0);
    for (auto v : m.maps[s]) hit[v] = 1;
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) return false;
  }
  return true;
}

bool is_injective(const Morphism& m) {
  for (SortId s = 0; s < m.maps.size(); ++s) {
    std::vector<char> hit(m.target->size(s), 0);
    for (auto v : m.maps[s]) {
      if (hit[v]) return false;
      hit[v] = 1;
    }
  }
  return true;
}

bool is_order_reflecting(const Morphism& m) {
  for (SortId s = 0; s < m.maps.size(); ++s)
    for (Elem a = 0; a < m.source->size(s); ++a)
      for (Elem b = 0; b < m.source->size(s); ++b)
        if (m.target->leq(s, m.maps[s][a], m.maps[s][b]) && !m.source->leq(s, a, b)) return false;
  return true;
}

Partition kernel(const Morphism& m) { return Partition(m.maps); }

SortedRelation ordered_kernel(const Morphism& m) {
  SortedRelation out;
  for (SortId s = 0; s < m.maps.size(); ++s) {
    const std::size_t n = m.source->size(s);
    Relation r(n);
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        if (m.target->leq(s, m.maps[s][a], m.maps[s][b])) r.set(a, b);
    out.push_back(std::move(r));
  }
  return out;
}

// ------------------------------------------------------------- translations

std::vector<UnaryOp> translation_maps(const FiniteAlgebra& alg) {
  const auto& sig = alg.signature();
  std::vector<UnaryOp> out;
  std::map<std::tuple<SortId, SortId, std::vector<Elem>>, std::size_t> seen;
  for (OpId o = 0; o < sig.num_ops(); ++o) {
    const auto& op = sig.op(o);
    const std::size_t k = op.inputs.size();
    for (std::size_t pos = 0; pos < k; ++pos) {
      std::vector<std::size_t> radices;
      for (std::size_t i = 0; i < k; ++i)
        if (i != pos) radices.push_back(alg.size(op.inputs[i]));
      const SortId src = op.inputs[pos];
      std::vector<Elem> args(k);
      for_each_tuple(radices, [&](std::span<const Elem> rest) {
        std::vector<Elem> map(alg.size(src));
        for (Elem a = 0; a < map.size(); ++a) {
          for (std::size_t i = 0, j = 0; i < k; ++i) args[i] = (i == pos) ? a : rest[j++];
          map[a] = alg.apply(o, args);
        }
        auto key = std::make_tuple(src, op.output, map);
        if (seen.count(key)) return;
        std::string label = op.name + "(";
        for (std::size_t i = 0, j = 0; i < k; ++i) {
          if (i) label += ",";
          label += (i == pos) ? std::string("_") : alg.label(op.inputs[i], rest[j++]);
        }
        label += ")";
        seen.emplace(std::move(key), out.size());
        out.push_back(UnaryOp{src, op.output, std::move(map), std::move(label)});
      });
    }
  }
  return out;
}

bool is_congruence(const FiniteAlgebra& alg, const Partition& p) {
  if (p.num_sorts() != alg.num_sorts()) return false;
  for (SortId s = 0; s < alg.num_sorts(); ++s)
    if (p.size(s) != alg.size(s)) return false;
  // representative of every block
  std::vector<std::vector<Elem>> rep(alg.num_sorts());
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    rep[s].assign(p.num_blocks(s), 0);
    for (Elem a = alg.size(s); a-- > 0;) rep[s][p.block(s, a)] = a;
  }
  const auto& sig = alg.signature();
  for (OpId o = 0; o < sig.num_ops(); ++o) {
    const auto& op = sig.op(o);
    bool ok = true;
    std::vector<Elem> r(op.inputs.size());
    for_each_tuple(alg.input_sizes(o), [&](std::span<const Elem> t) {
      if (!ok) return;
      for (std::size_t i = 0; i < t.size(); ++i) r[i] = rep[op.inputs[i]][p.block(op.inputs[i], t[i])];
      if (!p.same(op.output, alg.apply(o, t), alg.apply(o, r))) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

bool is_stable_preorder(const FiniteAlgebra& alg, const SortedRelation& r) {
  if (r.size() != alg.num_sorts()) return false;
  for (SortId s = 0; s < r.size(); ++s) {
    if (r[s].size() != alg.size(s) || !r[s].is_preorder()) return false;
    if (!r[s].contains(alg.order(s))) return false;
  }
  for (const auto& u : translation_maps(alg))
    for (Elem a = 0; a < u.map.size(); ++a)
      for (Elem b = 0; b < u.map.size(); ++b)
        if (r[u.source](a, b) && !r[u.target](u.map[a], u.map[b])) return false;
  return true;
}

// ---------------------------------------------------------------- quotients

namespace {

Quotient build_quotient(const AlgebraPtr& alg, const Partition& p, const SortedRelation* class_order,
                        bool ordered) {
  const auto& sig = alg->signature();
  std::vector<std::vector<Elem>> rep(alg->num_sorts());
  std::vector<std::vector<std::string>> labels(alg->num_sorts());
  for (SortId s = 0; s < alg->num_sorts(); ++s) {
    rep[s].assign(p.num_blocks(s), 0);
    for (Elem a = alg->size(s); a-- > 0;) rep[s][p.block(s, a)] = a;
    for (auto r : rep[s]) labels[s].push_back(alg->label(s, r));
  }
  std::vector<std::vector<Elem>> tables(sig.num_ops());
  for (OpId o = 0; o < sig.num_ops(); ++o) {
    const auto& op = sig.op(o);
    std::vector<std::size_t> radices;
    for (auto in : op.inputs) radices.push_back(p.num_blocks(in));
    std::vector<Elem> r(op.inputs.size());
    for_each_tuple(radices, [&](std::span<const Elem> t) {
      for (std::size_t i = 0; i < t.size(); ++i) r[i] = rep[op.inputs[i]][t[i]];
      tables[o].push_back(p.block(op.output, alg->apply(o, r)));
    });
  }
  SortedRelation order;
  if (ordered) {
    for (SortId s = 0; s < alg->num_sorts(); ++s) {
      const std::size_t n = p.num_blocks(s);
      Relation rel(n);
      for (Elem a = 0; a < alg->size(s); ++a)
        for (Elem b = 0; b < alg->size(s); ++b)
          if ((*class_order)[s](a, b)) rel.set(p.block(s, a), p.block(s, b));
      rel.close_transitively();
      if (!rel.antisymmetric())
        throw AlgebraError("partition is not compatible with the order on sort " + sig.sorts()[s]);
      order.push_back(std::move(rel));
    }
  }
  auto q = make_algebra(sig.with_order(ordered), std::move(labels), std::move(tables), std::move(order));
  std::vector<std::vector<Elem>> maps(alg->num_sorts());
  for (SortId s = 0; s < alg->num_sorts(); ++s) maps[s] = p.blocks(s);
  return Quotient{q, Morphism{alg, q, std::move(maps)}};
}

}  // namespace

Quotient quotient_by(const AlgebraPtr& alg, const Partition& congruence) {
  if (!is_congruence(*alg, congruence)) throw AlgebraError("partition is not a congruence");
  return build_quotient(alg, congruence, &alg->orders(), alg->ordered());
}

Quotient quotient_by(const AlgebraPtr& alg, const SortedRelation& preorder) {
  if (!is_stable_preorder(*alg, preorder)) throw AlgebraError("relation is not a stable preorder");
  return build_quotient(alg, Partition::from_relation(preorder), &preorder, true);
}

// ------------------------------------------------------------- subalgebras

std::vector<std::vector<char>> closure_of(const FiniteAlgebra& alg,
                                          const std::vector<std::vector<Elem>>& gens) {
  const auto& sig = alg.signature();
  std::vector<std::vector<Elem>> elems(alg.num_sorts());
  std::vector<std::map<Elem, Elem>> index(alg.num_sorts());
  for (SortId s = 0; s < gens.size() && s < alg.num_sorts(); ++s)
    for (auto g : gens[s]) {
      if (g >= alg.size(s)) throw AlgebraError("generator outside the carrier");
      if (index[s].emplace(g, static_cast<Elem>(elems[s].size())).second) elems[s].push_back(g);
    }
  std::vector<Elem> buf;
  detail::saturate<Elem>(sig, elems, index, [&](OpId o, const std::vector<const Elem*>& args) {
    buf.resize(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) buf[i] = *args[i];
    return alg.apply(o, buf);
  });
  std::vector<std::vector<char>> flags(alg.num_sorts());
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    flags[s].assign(alg.size(s), 0);
    for (auto a : elems[s]) flags[s][a] = 1;
  }
  return flags;
}

namespace {

Subalgebra restrict_to(const AlgebraPtr& alg, const std::vector<std::vector<char>>& flags) {
  const auto& sig = alg->signature();
  std::vector<std::vector<Elem>> members(alg->num_sorts()), pos(alg->num_sorts());
  std::vector<std::vector<std::string>> labels(alg->num_sorts());
  for (SortId s = 0; s < alg->num_sorts(); ++s) {
    pos[s].assign(alg->size(s), 0);
    for (Elem a = 0; a < alg->size(s); ++a)
      if (flags[s][a]) {
        pos[s][a] = static_cast<Elem>(members[s].size());
        members[s].push_back(a);
        labels[s].push_back(alg->label(s, a));
      }
  }
  std::vector<std::vector<Elem>> tables(sig.num_ops());
  for (OpId o = 0; o < sig.num_ops(); ++o) {
    const auto& op = sig.op(o);
    std::vector<std::size_t> radices;
    for (auto in : op.inputs) radices.push_back(members[in].size());
    std::vector<Elem> r(op.inputs.size());
    for_each_tuple(radices, [&](std::span<const Elem> t) {
      for (std::size_t i = 0; i < t.size(); ++i) r[i] = members[op.inputs[i]][t[i]];
      tables[o].push_back(pos[op.output][alg->apply(o, r)]);
    });
  }
  SortedRelation order;
  if (alg->ordered())
    for (SortId s = 0; s < alg->num_sorts(); ++s) {
      Relation rel(members[s].size());
      for (Elem a = 0; a < members[s].size(); ++a)
        for (Elem b = 0; b < members[s].size(); ++b)
          if (alg->leq(s, members[s][a], members[s][b])) rel.set(a, b);
      order.push_back(std::move(rel));
    }
  auto sub = make_algebra(sig, std::move(labels), std::move(tables), std::move(order));
  return Subalgebra{sub, Morphism{sub, alg, std::move(members)}};
}

}  // namespace

Subalgebra generated_subalgebra(const AlgebraPtr& alg, const std::vector<std::vector<Elem>>& gens) {
  return restrict_to(alg, closure_of(*alg, gens));
}

// ---------------------------------------------------------------- products

Product direct_product(const std::vector<AlgebraPtr>& factors) {
  if (factors.empty()) throw AlgebraError("direct product needs at least one factor");
  const auto& sig = factors[0]->signature();
  for (const auto& f : factors)
    if (!(f->signature() == sig)) throw AlgebraError("signature mismatch in direct product");
  if (factors.size() == 1) return Product{factors[0], {identity_morphism(factors[0])}};
  const std::size_t k = factors.size();
  const std::size_t ns = sig.num_sorts();
  std::vector<std::vector<std::size_t>> radices(ns);
  std::vector<std::size_t> sizes(ns, 1);
  for (SortId s = 0; s < ns; ++s)
    for (const auto& f : factors) {
      radices[s].push_back(f->size(s));
      sizes[s] *= f->size(s);
    }
  auto decode = [&](SortId s, std::size_t idx) {
    std::vector<Elem> c(k);
    for (std::size_t i = k; i-- > 0;) {
      c[i] = static_cast<Elem>(idx % radices[s][i]);
      idx /= radices[s][i];
    }
    return c;
  };
  auto encode = [&](SortId s, const std::vector<Elem>& c) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i) idx = idx * radices[s][i] + c[i];
    return static_cast<Elem>(idx);
  };
  std::vector<std::vector<std::string>> labels(ns);
  for (SortId s = 0; s < ns; ++s)
    for (std::size_t x = 0; x < sizes[s]; ++x) {
      auto c = decode(s, x);
      std::string l = "(";
      for (std::size_t i = 0; i < k; ++i) l += (i ? "," : "") + factors[i]->label(s, c[i]);
      labels[s].push_back(l + ")");
    }
  std::vector<std::vector<Elem>> tables(sig.num_ops());
  for (OpId o = 0; o < sig.num_ops(); ++o) {
    const auto& op = sig.op(o);
    std::vector<std::size_t> rad;
    for (auto in : op.inputs) rad.push_back(sizes[in]);
    std::vector<std::vector<Elem>> comps(op.inputs.size());
    std::vector<Elem> args(op.inputs.size());
    for_each_tuple(rad, [&](std::span<const Elem> t) {
      for (std::size_t j = 0; j < t.size(); ++j) comps[j] = decode(op.inputs[j], t[j]);
      std::vector<Elem> out(k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < t.size(); ++j) args[j] = comps[j][i];
        out[i] = factors[i]->apply(o, args);
      }
      tables[o].push_back(encode(op.output, out));
    });
  }
  SortedRelation order;
  if (sig.ordered())
    for (SortId s = 0; s < ns; ++s) {
      Relation rel(sizes[s]);
      for (std::size_t x = 0; x < sizes[s]; ++x) {
        auto cx = decode(s, x);
        for (std::size_t y = 0; y < sizes[s]; ++y) {
          auto cy = decode(s, y);
          bool le = true;
          for (std::size_t i = 0; i < k && le; ++i) le = factors[i]->leq(s, cx[i], cy[i]);
          if (le) rel.set(static_cast<Elem>(x), static_cast<Elem>(y));
        }
      }
      order.push_back(std::move(rel));
    }
  auto prod = make_algebra(sig, std::move(labels), std::move(tables), std::move(order));
  Product result{prod, {}};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<Elem>> maps(ns);
    for (SortId s = 0; s < ns; ++s)
      for (std::size_t x = 0; x < sizes[s]; ++x) maps[s].push_back(decode(s, x)[i]);
    result.projections.push_back(Morphism{prod, factors[i], std::move(maps)});
  }
  return result;
}

namespace {

void require_common_source(const Morphism& a, const Morphism& b) {
  if (a.source != b.source && !(*a.source == *b.source))
    throw std::invalid_argument("morphisms do not share a source");
}

}  // namespace

Morphism subdirect_product(const Morphism& e0, const Morphism& e1) {
  require_common_source(e0, e1);
  const auto& src = e0.source;
  Quotient q;
  if (src->ordered()) {
    auto k0 = ordered_kernel(e0), k1 = ordered_kernel(e1);
    SortedRelation both;
    for (SortId s = 0; s < k0.size(); ++s) both.push_back(k0[s].intersect(k1[s]));
    q = quotient_by(src, both);
  } else {
    q = quotient_by(src, kernel(e0).meet(kernel(e1)));
  }
  // relabel classes by their pair of images
  std::vector<std::vector<std::string>> labels(src->num_sorts());
  for (SortId s = 0; s < src->num_sorts(); ++s) {
    labels[s].resize(q.algebra->size(s));
    for (Elem a = 0; a < src->size(s); ++a)
      labels[s][q.projection(s, a)] =
          "(" + e0.target->label(s, e0(s, a)) + "," + e1.target->label(s, e1(s, a)) + ")";
  }
  auto img = make_algebra(q.algebra->signature(), std::move(labels), q.algebra->tables(),
                          src->ordered() ? q.algebra->orders() : SortedRelation{});
  return Morphism{src, img, q.projection.maps};
}

std::optional<Morphism> factor_through(const Morphism& e, const Morphism& f) {
  require_common_source(e, f);
  if (!is_surjective(e)) throw std::invalid_argument("factor_through needs a surjective morphism");
  const auto& src = *e.source;
  std::vector<std::vector<Elem>> g(src.num_sorts());
  for (SortId s = 0; s < src.num_sorts(); ++s) {
    g[s].assign(e.target->size(s), 0);
    std::vector<char> set(e.target->size(s), 0);
    for (Elem a = 0; a < src.size(s); ++a) {
      const Elem b = e(s, a);
      if (!set[b]) {
        set[b] = 1;
        g[s][b] = f(s, a);
      } else if (g[s][b] != f(s, a)) {
        return std::nullopt;
      }
    }
    if (e.target->ordered())
      for (Elem a = 0; a < src.size(s); ++a)
        for (Elem b = 0; b < src.size(s); ++b)
          if (e.target->leq(s, e(s, a), e(s, b)) && !f.target->leq(s, f(s, a), f(s, b))) return std::nullopt;
  }
  return Morphism{e.target, f.target, std::move(g)};
}

bool quotient_leq(const Morphism& e0, const Morphism& e1) { return factor_through(e1, e0).has_value(); }

bool quotient_leq(const Partition& e0, const Partition& e1) { return e1.refines(e0); }

// ---------------------------------------------------------------- division

namespace {

// Small generating set, chosen greedily in carrier order.
std::vector<std::pair<SortId, Elem>> greedy_generators(const FiniteAlgebra& alg) {
  std::vector<std::pair<SortId, Elem>> gens;
  std::vector<std::vector<Elem>> cur(alg.num_sorts());
  auto flags = closure_of(alg, cur);
  for (SortId s = 0; s < alg.num_sorts(); ++s)
    for (Elem a = 0; a < alg.size(s); ++a) {
      if (flags[s][a]) continue;
      gens.emplace_back(s, a);
      cur[s].push_back(a);
      flags = closure_of(alg, cur);
    }
  return gens;
}

}  // namespace

std::optional<Division> divides(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (!(a->signature() == b->signature())) throw AlgebraError("signature mismatch in divides");
  for (SortId s = 0; s < a->num_sorts(); ++s)
    if (a->size(s) > b->size(s)) return std::nullopt;
  const auto& sig = a->signature();
  const auto gens = greedy_generators(*a);
  std::vector<std::size_t> radices;
  for (auto [s, x] : gens) radices.push_back(b->size(s));
  // pair of (b element, a element) per sort
  using Key = std::pair<Elem, Elem>;
  std::optional<Division> found;
  std::vector<Elem> bb, aa;
  auto try_choice = [&](std::span<const Elem> choice) {
    std::vector<std::vector<Key>> elems(sig.num_sorts());
    std::vector<std::map<Key, Elem>> index(sig.num_sorts());
    for (std::size_t i = 0; i < gens.size(); ++i) {
      Key k{choice[i], gens[i].second};
      auto s = gens[i].first;
      if (index[s].emplace(k, static_cast<Elem>(elems[s].size())).second) elems[s].push_back(k);
    }
    detail::saturate<Key>(sig, elems, index, [&](OpId o, const std::vector<const Key*>& args) {
      bb.resize(args.size());
      aa.resize(args.size());
      for (std::size_t i = 0; i < args.size(); ++i) {
        bb[i] = args[i]->first;
        aa[i] = args[i]->second;
      }
      return Key{b->apply(o, bb), a->apply(o, aa)};
    });
    std::vector<std::map<Elem, Elem>> fn(sig.num_sorts());
    for (SortId s = 0; s < sig.num_sorts(); ++s)
      for (const auto& [x, y] : elems[s]) {
        auto [it, fresh] = fn[s].emplace(x, y);
        if (!fresh && it->second != y) return false;
      }
    std::vector<std::vector<Elem>> sub_gens(sig.num_sorts());
    for (std::size_t i = 0; i < gens.size(); ++i) sub_gens[gens[i].first].push_back(choice[i]);
    auto sub = generated_subalgebra(b, sub_gens);
    std::vector<std::vector<Elem>> surj(sig.num_sorts());
    for (SortId s = 0; s < sig.num_sorts(); ++s)
      for (auto x : sub.inclusion.maps[s]) surj[s].push_back(fn[s].at(x));
    if (!is_homomorphism(*sub.algebra, *a, surj)) return false;
    Morphism m{sub.algebra, a, std::move(surj)};
    if (!is_surjective(m)) return false;
    found = Division{sub.inclusion, std::move(m)};
    return true;
  };
  if (gens.empty()) {
    std::vector<Elem> none;
    try_choice(none);
    return found;
  }
  std::vector<Elem> t(radices.size(), 0);
  for (auto r : radices)
    if (r == 0) return std::nullopt;
  while (true) {
    if (try_choice(t)) return found;
    std::size_t i = t.size();
    while (true) {
      if (i == 0) return std::nullopt;
      --i;
      if (++t[i] < radices[i]) break;
      t[i] = 0;
    }
  }
}

// ------------------------------------------------------------- isomorphism

namespace {

std::vector<std::vector<std::uint32_t>> refine_colors(const FiniteAlgebra& alg) {
  const auto& sig = alg.signature();
  const std::size_t ns = alg.num_sorts();
  std::vector<std::vector<std::uint32_t>> color(ns);
  for (SortId s = 0; s < ns; ++s) color[s].assign(alg.size(s), 0);
  std::size_t classes = 0;
  while (true) {
    std::vector<std::vector<std::vector<std::uint64_t>>> sigs(ns);
    for (SortId s = 0; s < ns; ++s) {
      sigs[s].resize(alg.size(s));
      for (Elem a = 0; a < alg.size(s); ++a) {
        sigs[s][a].push_back(color[s][a]);
        std::size_t below = 0, above = 0;
        for (Elem b = 0; b < alg.size(s); ++b) {
          below += alg.leq(s, b, a);
          above += alg.leq(s, a, b);
        }
        sigs[s][a].push_back(below);
        sigs[s][a].push_back(above);
      }
    }
    for (OpId o = 0; o < sig.num_ops(); ++o) {
      const auto& op = sig.op(o);
      // per element and position: sorted list of (arg colors, output color, output==arg)
      std::vector<std::vector<std::vector<std::vector<std::uint64_t>>>> occ(op.inputs.size());
      for (std::size_t i = 0; i < op.inputs.size(); ++i) occ[i].resize(alg.size(op.inputs[i]));
      std::vector<std::size_t> hits(alg.size(op.output), 0);
      for_each_tuple(alg.input_sizes(o), [&](std::span<const Elem> t) {
        const Elem out = alg.apply(o, t);
        ++hits[out];
        for (std::size_t i = 0; i < t.size(); ++i) {
          std::vector<std::uint64_t> row;
          for (std::size_t j = 0; j < t.size(); ++j) {
            row.push_back(color[op.inputs[j]][t[j]]);
            row.push_back(op.inputs[j] == op.inputs[i] && t[j] == t[i]);
          }
          row.push_back(color[op.output][out]);
          row.push_back(op.output == op.inputs[i] && out == t[i]);
          occ[i][t[i]].push_back(std::move(row));
        }
      });
      for (std::size_t i = 0; i < op.inputs.size(); ++i)
        for (Elem a = 0; a < occ[i].size(); ++a) {
          auto& rows = occ[i][a];
          std::sort(rows.begin(), rows.end());
          auto& dst = sigs[op.inputs[i]][a];
          dst.push_back(0xFFFFFFFFull);
          for (const auto& r : rows) dst.insert(dst.end(), r.begin(), r.end());
        }
      for (Elem a = 0; a < hits.size(); ++a) sigs[op.output][a].push_back(hits[a]);
    }
    std::size_t total = 0;
    for (SortId s = 0; s < ns; ++s) {
      auto sorted = sigs[s];
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      for (Elem a = 0; a < alg.size(s); ++a)
        color[s][a] = static_cast<std::uint32_t>(
            std::lower_bound(sorted.begin(), sorted.end(), sigs[s][a]) - sorted.begin());
      total += sorted.size();
    }
    if (total == classes) break;
    classes = total;
  }
  return color;
}

std::vector<std::uint32_t> encode(const FiniteAlgebra& alg, const std::vector<std::vector<Elem>>& to_new,
                                  const std::vector<std::vector<Elem>>& to_old) {
  const auto& sig = alg.signature();
  std::vector<std::uint32_t> code;
  for (SortId s = 0; s < alg.num_sorts(); ++s) code.push_back(static_cast<std::uint32_t>(alg.size(s)));
  std::vector<Elem> old;
  for (OpId o = 0; o < sig.num_ops(); ++o) {
    const auto& op = sig.op(o);
    old.resize(op.inputs.size());
    for_each_tuple(alg.input_sizes(o), [&](std::span<const Elem> t) {
      for (std::size_t i = 0; i < t.size(); ++i) old[i] = to_old[op.inputs[i]][t[i]];
      code.push_back(to_new[op.output][alg.apply(o, old)]);
    });
  }
  if (alg.ordered())
    for (SortId s = 0; s < alg.num_sorts(); ++s)
      for (Elem a = 0; a < alg.size(s); ++a)
        for (Elem b = 0; b < alg.size(s); ++b)
          code.push_back(alg.leq(s, to_old[s][a], to_old[s][b]));
  return code;
}

}  // namespace

std::string canonical_form(const FiniteAlgebra& alg) {
  const auto color = refine_colors(alg);
  const std::size_t ns = alg.num_sorts();
  // cells: elements grouped by color, cells ordered by color
  std::vector<std::vector<std::vector<Elem>>> cells(ns);
  for (SortId s = 0; s < ns; ++s) {
    std::map<std::uint32_t, std::vector<Elem>> by;
    for (Elem a = 0; a < alg.size(s); ++a) by[color[s][a]].push_back(a);
    for (auto& [c, v] : by) cells[s].push_back(v);
  }
  std::vector<std::vector<Elem>*> all_cells;
  for (auto& sc : cells)
    for (auto& c : sc) all_cells.push_back(&c);
  std::optional<std::vector<std::uint32_t>> best;
  std::vector<std::vector<Elem>> to_new(ns), to_old(ns);
  for (SortId s = 0; s < ns; ++s) {
    to_new[s].resize(alg.size(s));
    to_old[s].resize(alg.size(s));
  }
  auto evaluate = [&] {
    for (SortId s = 0; s < ns; ++s) {
      Elem next = 0;
      for (auto& c : cells[s])
        for (auto a : c) {
          to_old[s][next] = a;
          to_new[s][a] = next++;
        }
    }
    auto code = encode(alg, to_new, to_old);
    if (!best || code < *best) best = std::move(code);
  };
  // enumerate permutations of every cell (odometer over next_permutation)
  for (auto* c : all_cells) std::sort(c->begin(), c->end());
  while (true) {
    evaluate();
    std::size_t i = 0;
    for (; i < all_cells.size(); ++i) {
      if (std::next_permutation(all_cells[i]->begin(), all_cells[i]->end())) break;
    }
    if (i == all_cells.size()) break;
  }
  std::string out;
  out += alg.ordered() ? "o" : "u";
  for (auto v : *best) out += std::to_string(v) + ",";
  return out;
}

bool is_isomorphic(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (!(a.signature() == b.signature()) || a.sizes() != b.sizes()) return false;
  return canonical_form(a) == canonical_form(b);
}

// ------------------------------------------------------ congruence lattice

namespace {

Partition generated_congruence(const FiniteAlgebra& alg, const std::vector<UnaryOp>& tr,
                               std::vector<std::tuple<SortId, Elem, Elem>> pairs) {
  const std::size_t ns = alg.num_sorts();
  std::vector<std::vector<Elem>> parent(ns);
  for (SortId s = 0; s < ns; ++s) {
    parent[s].resize(alg.size(s));
    std::iota(parent[s].begin(), parent[s].end(), 0u);
  }
  auto find = [&](SortId s, Elem x) {
    while (parent[s][x] != x) x = parent[s][x] = parent[s][parent[s][x]];
    return x;
  };
  std::deque<std::tuple<SortId, Elem, Elem>> queue;
  auto unite = [&](SortId s, Elem x, Elem y) {
    x = find(s, x);
    y = find(s, y);
    if (x == y) return;
    parent[s][std::max(x, y)] = std::min(x, y);
    queue.emplace_back(s, x, y);
  };
  for (auto [s, x, y] : pairs) unite(s, x, y);
  while (!queue.empty()) {
    auto [s, x, y] = queue.front();
    queue.pop_front();
    for (const auto& u : tr)
      if (u.source == s) unite(u.target, u.map[x], u.map[y]);
  }
  std::vector<std::vector<std::uint32_t>> raw(ns);
  for (SortId s = 0; s < ns; ++s)
    for (Elem a = 0; a < alg.size(s); ++a) raw[s].push_back(find(s, a));
  return Partition(std::move(raw));
}

SortedRelation generated_preorder(const std::vector<UnaryOp>& tr,
                                  SortedRelation rel, std::vector<std::tuple<SortId, Elem, Elem>> pairs) {
  std::deque<std::tuple<SortId, Elem, Elem>> queue;
  auto add = [&](SortId s, Elem x, Elem y) {
    if (rel[s](x, y)) return;
    rel[s].set(x, y);
    queue.emplace_back(s, x, y);
  };
  for (auto [s, x, y] : pairs) add(s, x, y);
  while (true) {
    while (!queue.empty()) {
      auto [s, x, y] = queue.front();
      queue.pop_front();
      for (const auto& u : tr)
        if (u.source == s) add(u.target, u.map[x], u.map[y]);
    }
    // transitive closure; translations of new pairs are then processed
    bool changed = false;
    for (SortId s = 0; s < rel.size(); ++s) {
      auto closed = rel[s];
      closed.close_transitively();
      for (Elem a = 0; a < closed.size(); ++a)
        for (Elem b = 0; b < closed.size(); ++b)
          if (closed(a, b) && !rel[s](a, b)) {
            add(s, a, b);
            changed = true;
          }
    }
    if (!changed) return rel;
  }
}

SortedRelation join_relations(const SortedRelation& a, const SortedRelation& b) {
  SortedRelation out = a;
  for (SortId s = 0; s < a.size(); ++s) {
    for (Elem x = 0; x < a[s].size(); ++x)
      for (Elem y = 0; y < a[s].size(); ++y)
        if (b[s](x, y)) out[s].set(x, y);
    out[s].close_transitively();
  }
  return out;
}

}  // namespace

Partition principal_congruence(const FiniteAlgebra& alg, SortId s, Elem a, Elem b) {
  return generated_congruence(alg, translation_maps(alg), {{s, a, b}});
}

std::vector<Partition> all_congruences(const FiniteAlgebra& alg) {
  const auto tr = translation_maps(alg);
  std::set<Partition> principals;
  for (SortId s = 0; s < alg.num_sorts(); ++s)
    for (Elem a = 0; a < alg.size(s); ++a)
      for (Elem b = a + 1; b < alg.size(s); ++b) principals.insert(generated_congruence(alg, tr, {{s, a, b}}));
  std::set<Partition> found{Partition::discrete(alg.sizes())};
  std::deque<Partition> work(found.begin(), found.end());
  while (!work.empty()) {
    auto cur = work.front();
    work.pop_front();
    for (const auto& p : principals) {
      auto j = cur.join(p);
      if (found.insert(j).second) work.push_back(j);
    }
  }
  return {found.begin(), found.end()};
}

SortedRelation principal_stable_preorder(const FiniteAlgebra& alg, SortId s, Elem a, Elem b) {
  return generated_preorder(translation_maps(alg), alg.orders(), {{s, a, b}});
}

std::vector<SortedRelation> all_stable_preorders(const FiniteAlgebra& alg) {
  const auto tr = translation_maps(alg);
  auto key = [](const SortedRelation& r) {
    std::vector<char> k;
    for (const auto& rel : r)
      for (Elem a = 0; a < rel.size(); ++a)
        for (Elem b = 0; b < rel.size(); ++b) k.push_back(rel(a, b));
    return k;
  };
  std::vector<SortedRelation> principals;
  std::set<std::vector<char>> pkeys;
  for (SortId s = 0; s < alg.num_sorts(); ++s)
    for (Elem a = 0; a < alg.size(s); ++a)
      for (Elem b = 0; b < alg.size(s); ++b) {
        if (alg.leq(s, a, b)) continue;
        auto p = generated_preorder(tr, alg.orders(), {{s, a, b}});
        if (pkeys.insert(key(p)).second) principals.push_back(std::move(p));
      }
  std::map<std::vector<char>, SortedRelation> found;
  found.emplace(key(alg.orders()), alg.orders());
  std::deque<SortedRelation> work{alg.orders()};
  while (!work.empty()) {
    auto cur = work.front();
    work.pop_front();
    for (const auto& p : principals) {
      auto j = join_relations(cur, p);
      if (found.emplace(key(j), j).second) work.push_back(j);
    }
  }
  std::vector<SortedRelation> out;
  for (auto& [k, r] : found) out.push_back(r);
  return out;
}

// ------------------------------------------------------- idempotent power

std::optional<OpId> product_op(const Signature& sig, SortId s) {
  std::optional<OpId> found;
  for (OpId o = 0; o < sig.num_ops(); ++o) {
    const auto& op = sig.op(o);
    if (op.inputs.size() == 2 && op.inputs[0] == s && op.inputs[1] == s && op.output == s) {
      if (found) return std::nullopt;
      found = o;
    }
  }
  return found;
}

namespace detail {

Elem omega_power_unchecked(const FiniteAlgebra& alg, OpId mul, Elem x) {
  std::vector<Elem> powers{x};
  std::vector<char> seen(alg.size(alg.signature().op(mul).output), 0);
  seen[x] = 1;
  while (true) {
    Elem next = alg.apply(mul, {powers.back(), x});
    if (seen[next]) break;
    seen[next] = 1;
    powers.push_back(next);
  }
  for (auto p : powers)
    if (alg.apply(mul, {p, p}) == p) return p;
  throw AlgebraError("no idempotent power found (table not associative)");
}

bool is_associative(const FiniteAlgebra& alg, OpId mul) {
  const std::size_t n = alg.size(alg.signature().op(mul).output);
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      const Elem ab = alg.apply(mul, {a, b});
      for (Elem c = 0; c < n; ++c)
        if (alg.apply(mul, {ab, c}) != alg.apply(mul, {a, alg.apply(mul, {b, c})})) return false;
    }
  return true;
}

}  // namespace detail

Elem idempotent_power(const FiniteAlgebra& alg, SortId s, Elem x) {
  auto mul = product_op(alg.signature(), s);
  if (!mul) throw AlgebraError("sort " + alg.signature().sorts()[s] + " has no unique binary product");
  if (!detail::is_associative(alg, *mul)) throw AlgebraError("product on sort " + alg.signature().sorts()[s] + " is not associative");
  if (x >= alg.size(s)) throw AlgebraError("element outside the carrier");
  return detail::omega_power_unchecked(alg, *mul, x);
}

}  // namespace algvar
