#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "algvar/omega.hpp"
#include "algvar/presentation.hpp"
#include "algvar/words.hpp"

using namespace algvar;

namespace {

using MapKey = std::tuple<SortId, SortId, std::vector<Elem>>;

std::set<MapKey> keys(const std::vector<UnaryOp>& ops) {
  std::set<MapKey> out;
  for (const auto& u : ops) out.emplace(u.source, u.target, u.map);
  return out;
}

Recognizer ab_star_monoid() { return compile_dfa(parse_dfa(fixture_text("ab_star.dfa"))); }

// Every composite of the maps (one sort), identity included.
std::set<std::vector<Elem>> closure_maps(std::size_t n, const std::vector<std::vector<Elem>>& gens) {
  std::vector<Elem> id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<Elem>(i);
  std::set<std::vector<Elem>> seen{id};
  std::vector<std::vector<Elem>> todo{id};
  while (!todo.empty()) {
    auto f = todo.back();
    todo.pop_back();
    for (const auto& g : gens) {
      std::vector<Elem> h(n);
      for (std::size_t i = 0; i < n; ++i) h[i] = g[f[i]];
      if (seen.insert(h).second) todo.push_back(h);
    }
  }
  return seen;
}

}  // namespace

TEST_SUITE("presentation") {
  TEST_CASE("recognizer validation") {
    auto z2 = oracle::cyclic(2);
    CHECK_THROWS_AS(Recognizer::make(z2, {{"a", 0, 5}}, {{true, false}}), AlgebraError);
    CHECK_THROWS_AS(Recognizer::make(z2, {{"a", 0, 1}}, {{true}}), AlgebraError);
    auto r = Recognizer::make(z2, {{"a", 0, 1}}, {{true, false}});
    CHECK(r.generated());
    CHECK(r.letter("a") == 0);
    CHECK_FALSE(Recognizer::make(z2, {}, {{true, false}}).generated());
  }

  TEST_CASE("elementary translations of the (ab)* monoid") {
    auto rec = ab_star_monoid();
    const auto& m = *rec.algebra;
    const std::size_t n = m.size(0);
    std::set<MapKey> brute;
    for (Elem k = 0; k < n; ++k) {
      std::vector<Elem> l(n), r(n);
      for (Elem x = 0; x < n; ++x) {
        l[x] = m.apply(1, {k, x});
        r[x] = m.apply(1, {x, k});
      }
      brute.emplace(0, 0, l);
      brute.emplace(0, 0, r);
    }
    auto p = elementary_translations(rec);
    CHECK(p.ops.size() <= 12);
    CHECK(p.ops.size() == keys(p.ops).size());
    CHECK(keys(p.ops) == brute);
  }

  TEST_CASE("one-element algebra has only identities and constants") {
    auto p = elementary_translations(oracle::cyclic(1));
    for (const auto& u : p.ops) CHECK(u.map == std::vector<Elem>{0});
  }

  TEST_CASE("tree recognizer translations cover all six operations") {
    auto rec = compile_tree_automaton(parse_tree_automaton(fixture_text("root_a.ta")));
    const auto& alg = *rec.algebra;
    auto got = keys(elementary_translations(rec).ops);
    // every a -> op(..., a, ...) by direct enumeration, per op
    std::set<MapKey> all;
    for (OpId o = 0; o < alg.signature().num_ops(); ++o) {
      const auto& in = alg.signature().op(o).inputs;
      std::set<MapKey> per_op;
      for (std::size_t pos = 0; pos < in.size(); ++pos) {
        auto radices = alg.input_sizes(o);
        radices[pos] = 1;
        for_each_tuple(radices, [&](std::span<const Elem> fixed) {
          std::vector<Elem> args(fixed.begin(), fixed.end()), map;
          for (Elem x = 0; x < alg.size(in[pos]); ++x) {
            args[pos] = x;
            map.push_back(alg.apply(o, std::span<const Elem>(args)));
          }
          per_op.emplace(in[pos], alg.signature().op(o).output, map);
        });
      }
      CHECK_FALSE(per_op.empty());
      for (const auto& k : per_op) CHECK(got.count(k) == 1);
      all.insert(per_op.begin(), per_op.end());
    }
    CHECK(alg.signature().num_ops() == 6);
    CHECK(got == all);
  }

  TEST_CASE("omega presentation of the infinitely-many-a recognizer") {
    auto r = parse_omega(fixture_text("inf_a.omega"));
    auto p = omega_presentation(r.rec);
    const auto& alg = *r.rec.algebra;
    std::set<MapKey> expect;
    for (Elem k = 0; k < 2; ++k) {
      std::vector<Elem> l, rt, mx;
      for (Elem x = 0; x < 2; ++x) {
        l.push_back(alg.apply(0, {k, x}));
        rt.push_back(alg.apply(0, {x, k}));
        mx.push_back(alg.apply(1, {x, k}));
      }
      expect.emplace(0, 0, l);
      expect.emplace(0, 0, rt);
      expect.emplace(0, 1, mx);
      std::vector<Elem> act;
      for (Elem z = 0; z < 2; ++z) act.push_back(alg.apply(1, {k, z}));
      expect.emplace(1, 1, act);
    }
    expect.emplace(0, 1, std::vector<Elem>{alg.apply(2, {0}), alg.apply(2, {1})});
    auto got = keys(p.ops);
    CHECK(p.ops.size() == got.size());
    for (const auto& k : expect) CHECK(got.count(k) == 1);
    // the unit y = 1 contributes identities on both sorts
    CHECK(got.count(MapKey{0, 0, {0, 1}}) == 1);
    CHECK(got.count(MapKey{1, 1, {0, 1}}) == 1);
  }

  TEST_CASE("composition closure gives two-sided contexts") {
    auto rec = ab_star_monoid();
    const auto& m = *rec.algebra;
    const std::size_t n = m.size(0);
    auto closed = composition_closure(elementary_translations(rec));
    CHECK(closed.closed);
    std::set<std::vector<Elem>> brute;
    for (Elem k = 0; k < n; ++k)
      for (Elem l = 0; l < n; ++l) {
        std::vector<Elem> f(n);
        for (Elem x = 0; x < n; ++x) f[x] = m.apply(1, {m.apply(1, {k, x}), l});
        brute.insert(f);
      }
    std::set<std::vector<Elem>> got;
    for (const auto& u : closed.ops) got.insert(u.map);
    CHECK(got == brute);
    CHECK(keys(composition_closure(closed).ops) == keys(closed.ops));

    Presentation empty{rec.algebra, {}, false};
    auto ce = composition_closure(empty);
    for (const auto& u : ce.ops) CHECK(u.map == std::vector<Elem>({0, 1, 2, 3, 4, 5}));
  }

  TEST_CASE("lift_unary") {
    auto z6 = oracle::cyclic(6), z2 = oracle::cyclic(2);
    auto e = make_morphism(z6, z2, {{0, 1, 0, 1, 0, 1}});
    UnaryOp plus3{0, 0, {3, 4, 5, 0, 1, 2}, "+3"};
    auto lifted = lift_unary(e, plus3);
    REQUIRE(lifted.has_value());
    CHECK(lifted->map == std::vector<Elem>{1, 0});
    // 0 and 3 are merged mod 3 but +1-if-even sends them to 1 and 3
    auto e3 = make_morphism(z6, oracle::cyclic(3), {{0, 1, 2, 0, 1, 2}});
    UnaryOp breaking{0, 0, {1, 1, 3, 3, 5, 5}, "+1 if even"};
    CHECK_FALSE(lift_unary(e3, breaking).has_value());
    CHECK(lift_unary(e, breaking).has_value());
    auto id = lift_unary(identity_morphism(z6), plus3);
    REQUIRE(id.has_value());
    CHECK(id->map == plus3.map);
  }

  TEST_CASE("syntactic congruence examples") {
    auto rec = ab_star_monoid();
    auto p = elementary_translations(rec);
    CHECK(syntactic_congruence(rec, p).is_discrete());
    auto all = rec.with_accept({std::vector<bool>(rec.algebra->size(0), true)});
    CHECK(syntactic_congruence(all, p).num_blocks(0) == 1);

    auto z4 = parse_recognizer(fixture_text("z4_aa.rec"));
    auto c = syntactic_congruence(z4, elementary_translations(z4));
    CHECK(c.blocks(0) == std::vector<std::uint32_t>{0, 1, 0, 1});
    // with accept {0} the language is (aaaa)* and nothing merges
    auto z4_0 = z4.with_accept({{true, false, false, false}});
    CHECK(syntactic_congruence(z4_0, elementary_translations(z4_0)).is_discrete());
  }

  TEST_CASE("syntactic algebra examples") {
    auto z4 = parse_recognizer(fixture_text("z4_aa.rec"));
    auto q = syntactic_algebra(z4, elementary_translations(z4));
    CHECK(is_isomorphic(*q.recognizer.algebra, *oracle::cyclic(2)));
    for (const auto& w : oracle::words_upto({"a"}, 8)) CHECK(membership(q.recognizer, w) == membership(z4, w));

    auto rec = ab_star_monoid();
    auto same = syntactic_algebra(rec, elementary_translations(rec));
    CHECK(is_isomorphic(*same.recognizer.algebra, *rec.algebra));

    auto all = rec.with_accept({std::vector<bool>(rec.algebra->size(0), true)});
    CHECK(syntactic_algebra(all, elementary_translations(all)).recognizer.algebra->size(0) == 1);
  }

  TEST_CASE("refine_partition matches the coarsest stable refinement") {
    std::mt19937 rng(7);
    for (int round = 0; round < 40; ++round) {
      const std::size_t n = 2 + rng() % 4;
      std::vector<UnaryOp> ops;
      const std::size_t k = rng() % 3;
      for (std::size_t i = 0; i < k; ++i) {
        UnaryOp u{0, 0, std::vector<Elem>(n), "f"};
        for (auto& x : u.map) x = static_cast<Elem>(rng() % n);
        ops.push_back(u);
      }
      std::vector<std::uint32_t> init(n);
      for (auto& b : init) b = rng() % 2;
      auto got = refine_partition({n}, ops, Partition({init}));
      // brute force: stable equivalences below init, take the coarsest
      std::optional<Partition> best;
      for (const auto& e : oracle::equivalences(n)) {
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a)
          for (std::size_t b = 0; b < n && ok; ++b) {
            if (e[a] != e[b]) continue;
            if (init[a] != init[b]) ok = false;
            for (const auto& u : ops)
              if (e[u.map[a]] != e[u.map[b]]) ok = false;
          }
        if (ok && (!best || best->num_blocks(0) > Partition({e}).num_blocks(0))) best = Partition({e});
      }
      REQUIRE(best.has_value());
      CHECK(got == *best);
    }
  }

  TEST_CASE("refine_preorder matches the context characterization") {
    std::mt19937 rng(11);
    for (int round = 0; round < 40; ++round) {
      const std::size_t n = 2 + rng() % 4;
      std::vector<UnaryOp> ops;
      std::vector<std::vector<Elem>> maps;
      for (std::size_t i = 0; i < 2; ++i) {
        UnaryOp u{0, 0, std::vector<Elem>(n), "f"};
        for (auto& x : u.map) x = static_cast<Elem>(rng() % n);
        ops.push_back(u);
        maps.push_back(u.map);
      }
      // init: an up-set order a <= b iff up(a) implies up(b)
      std::vector<bool> up(n);
      for (std::size_t i = 0; i < n; ++i) up[i] = rng() % 2;
      Relation init(n);
      for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b) init.set(a, b, !up[a] || up[b]);
      auto got = refine_preorder(ops, {init});
      auto contexts = closure_maps(n, maps);
      for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b) {
          bool expect = true;
          for (const auto& f : contexts) expect = expect && init(f[a], f[b]);
          CHECK(got[0](a, b) == expect);
        }
    }
  }

  TEST_CASE("reduction merges the clone letter") {
    auto r = parse_omega(fixture_text("inf_a_clone.omega"));
    auto p = omega_presentation(r.rec);
    auto rep = is_reduced(r.rec, p, {1});
    CHECK_FALSE(rep.reduced);
    REQUIRE(rep.unseparated.has_value());
    CHECK(std::get<0>(*rep.unseparated) == 0);

    auto q = reduce_quotient(r.rec, p, {1});
    CHECK(q.recognizer.algebra->size(0) == 2);
    CHECK(q.recognizer.algebra->size(1) == 2);
    CHECK(is_reduced(q.recognizer, omega_presentation(q.recognizer), {1}).reduced);
    auto again = reduce_quotient(q.recognizer, omega_presentation(q.recognizer), {1});
    CHECK(is_isomorphic(*again.recognizer.algebra, *q.recognizer.algebra));

    CHECK(is_reduced(r.rec, p, {0, 1}).reduced);
    auto full = reduce_quotient(r.rec, p, {0, 1});
    CHECK(is_injective(full.projection));
  }

  TEST_CASE("order flip recognizes the complement") {
    auto z4 = parse_recognizer(fixture_text("z4_aa.rec"));
    auto f = order_flip(z4);
    for (const auto& w : oracle::words_upto({"a"}, 6)) CHECK(membership(f, w) != membership(z4, w));
  }
}
