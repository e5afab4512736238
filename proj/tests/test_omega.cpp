#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "algvar/omega.hpp"

using namespace algvar;

namespace {

OmegaRecognizer inf_a() { return parse_omega(fixture_text("inf_a.omega")); }

bool contains_a(const Word& w) { return std::find(w.begin(), w.end(), "a") != w.end(); }

}  // namespace

TEST_SUITE("omega") {
  TEST_CASE("signature and validation") {
    auto sig = wilke_signature();
    CHECK(sig.sorts() == std::vector<std::string>{"plus", "omega"});
    CHECK(sig.op_id("prod") == 0);
    CHECK(sig.op_id("mix") == 1);
    CHECK(sig.op_id("opow") == 2);
    auto r = inf_a();
    CHECK_NOTHROW(require_wilke(*r.rec.algebra));
    auto bad = r.rec.with_accept({{true, false}, {true, false}});
    CHECK_THROWS_AS(OmegaRecognizer::make(bad, OmegaRecognizer::Mode::omega_only), AlgebraError);
  }

  TEST_CASE("lasso examples") {
    auto r = inf_a();
    auto al = alphabet_of(r.rec);
    CHECK(lasso_membership(r, parse_lasso(al, "b;ab")));
    CHECK_FALSE(lasso_membership(r, parse_lasso(al, "ab;b")));
    CHECK(lasso_membership(r, parse_lasso(al, ";a")));
    CHECK(lasso_membership(r, {{}, {"a"}}));
    CHECK_THROWS(parse_lasso(al, "a;"));
  }

  TEST_CASE("lasso semantics of the fixture") {
    auto r = inf_a();
    auto words = oracle::words_upto({"a", "b"}, 3);
    for (const auto& u : words)
      for (const auto& v : words) {
        if (v.empty()) continue;
        CHECK(lasso_membership(r, {u, v}) == contains_a(v));
      }
  }

  TEST_CASE("Muller automata compile to Wilke algebras with the same lassos") {
    std::mt19937 rng(21);
    for (int round = 0; round < 15; ++round) {
      auto m = oracle::random_muller(rng, 2 + rng() % 2);
      auto r = oracle::muller_recognizer(m);
      CHECK_NOTHROW(require_wilke(*r.rec.algebra));
      CHECK(is_complete(*r.rec.algebra));
      auto words = oracle::words_upto({"a", "b"}, 3);
      for (const auto& u : words)
        for (const auto& v : words)
          if (!v.empty()) CHECK(lasso_membership(r, {u, v}) == oracle::muller_accepts(m, u, v));
      auto syn = syntactic_omega_semigroup(r);
      auto sr = OmegaRecognizer::make(syn.recognizer, OmegaRecognizer::Mode::omega_only);
      CHECK_NOTHROW(require_wilke(*syn.recognizer.algebra));
      for (const auto& u : words)
        for (const auto& v : words)
          if (!v.empty()) CHECK(lasso_membership(sr, {u, v}) == oracle::muller_accepts(m, u, v));
    }
  }

  TEST_CASE("finite words in infinitary mode") {
    auto r = inf_a();
    auto fin = OmegaRecognizer::make(r.rec.with_accept({{true, false}, {true, false}}), OmegaRecognizer::Mode::infinitary);
    CHECK(finite_membership(fin, {"b", "a"}));
    CHECK_FALSE(finite_membership(fin, {"b", "b"}));
    CHECK(lasso_membership(fin, {{}, {"a"}}));
  }

  TEST_CASE("Ramsey factorization examples") {
    auto triv = oracle::cyclic(1);
    CHECK(ramsey_factorize(*triv, 0, {}, {0}, 4) == std::vector<std::size_t>{0, 1, 2, 3});
    auto z2 = oracle::cyclic(2);
    CHECK(ramsey_factorize(*z2, 0, {}, std::vector<Elem>{1}, 5) == std::vector<std::size_t>{0, 2, 4, 6, 8});

    auto syn = syntactic_monoid(compile_dfa(parse_dfa(fixture_text("ab_star.dfa"))));
    const auto& m = *syn.recognizer.algebra;
    const Elem a = syn.recognizer.letters[syn.recognizer.letter("a")].image;
    const Elem b = syn.recognizer.letters[syn.recognizer.letter("b")].image;
    auto cuts = ramsey_factorize(m, 0, {}, {a, b}, 5);
    CHECK(cuts == std::vector<std::size_t>{0, 2, 4, 6, 8});
    const Elem ab = m.apply(1, {a, b});
    CHECK(m.apply(1, {ab, ab}) == ab);

    CHECK_THROWS(ramsey_factorize(*z2, 0, {}, {}, 3));
    CHECK_THROWS(ramsey_factorize(*z2, 0, {}, {1}, 1));
  }

  TEST_CASE("Ramsey factorization matches exhaustive search") {
    std::mt19937 rng(17);
    for (int n = 1; n <= 4; ++n)
      for (const auto& t : oracle::semigroups(n, true)) {
        auto alg = oracle::monoid_algebra(t);
        for (int k = 0; k < 3; ++k) {
          std::vector<int> pre(rng() % 3), per(1 + rng() % 3);
          for (auto& x : pre) x = static_cast<int>(rng() % n);
          for (auto& x : per) x = static_cast<int>(rng() % n);
          auto expect = oracle::ramsey_search(t, pre, per, 4, 40, 6);
          REQUIRE(expect.has_value());
          std::vector<Elem> p(pre.begin(), pre.end()), q(per.begin(), per.end());
          CHECK(ramsey_factorize(*alg, 0, p, q, 4) == *expect);
        }
      }
  }

  TEST_CASE("derivatives") {
    auto r = inf_a();
    const auto& alg = *r.rec.algebra;
    auto same = omega_derivative(r, OmegaDerivative::omega_left, {});
    CHECK(same.rec.accept == r.rec.accept);

    // omega^-1 L: x^w in L iff x contains a
    auto w = omega_derivative(r, OmegaDerivative::plus_omega);
    CHECK(w.rec.accept[0] == std::vector<bool>{true, false});
    CHECK(w.rec.accept[1] == std::vector<bool>{false, false});
    for (const auto& x : oracle::words_upto({"a", "b"}, 4))
      if (!x.empty()) CHECK(finite_membership(w, x) == contains_a(x));

    auto bl = omega_derivative(r, OmegaDerivative::omega_left, {"b"});
    CHECK(bl.rec.accept == r.rec.accept);

    auto pl = omega_derivative(r, OmegaDerivative::plus_left, {});
    CHECK(pl.rec.accept[0] == r.rec.accept[0]);

    // x in L A^-1 iff x A is accepted; A is the omega value of a^w
    const Elem A = alg.element(1, "A");
    auto mx = omega_derivative(r, OmegaDerivative::plus_mix, {}, A);
    CHECK(mx.rec.accept[0] == std::vector<bool>{true, true});
    CHECK_THROWS(omega_derivative(r, OmegaDerivative::plus_mix, {}, 9));
  }

  TEST_CASE("syntactic omega-semigroups") {
    auto r = inf_a();
    auto q = syntactic_omega_semigroup(r);
    CHECK(q.recognizer.algebra->size(0) == 2);
    CHECK(q.recognizer.algebra->size(1) == 2);

    auto clone = parse_omega(fixture_text("inf_a_clone.omega"));
    auto qc = syntactic_omega_semigroup(clone);
    CHECK(qc.recognizer.algebra->size(0) == 2);
    CHECK(is_isomorphic(*qc.recognizer.algebra, *r.rec.algebra));

    auto all = OmegaRecognizer::make(r.rec.with_accept({{false, false}, {true, true}}), OmegaRecognizer::Mode::omega_only);
    auto qa = syntactic_omega_semigroup(all);
    CHECK(qa.recognizer.algebra->size(0) == 1);
    CHECK(qa.recognizer.algebra->size(1) == 1);
  }

  TEST_CASE("reduced syntactic omega-semigroups") {
    auto r = inf_a();
    auto q = syntactic_reduced_omega(r);
    CHECK(is_isomorphic(*q.recognizer.algebra, *r.rec.algebra));
    auto clone = parse_omega(fixture_text("inf_a_clone.omega"));
    auto qc = syntactic_reduced_omega(clone);
    CHECK(qc.recognizer.algebra->size(0) == 2);
    CHECK(qc.recognizer.algebra->size(1) == 2);
    auto empty = OmegaRecognizer::make(r.rec.with_accept({{false, false}, {false, false}}), OmegaRecognizer::Mode::omega_only);
    auto qe = syntactic_reduced_omega(empty);
    CHECK(qe.recognizer.algebra->size(0) == 1);
    CHECK(qe.recognizer.algebra->size(1) == 1);
  }

  TEST_CASE("completeness") {
    auto r = inf_a();
    CHECK(is_complete(*r.rec.algebra));
    // add an omega element C that no s t^w reaches
    const auto& a = *r.rec.algebra;
    std::vector<std::vector<Elem>> tables{a.table(0), {}, a.table(2)};
    for (Elem s = 0; s < 2; ++s) {
      for (Elem z = 0; z < 2; ++z) tables[1].push_back(a.apply(1, {s, z}));
      tables[1].push_back(2);
    }
    auto bigger = make_algebra(wilke_signature(), std::vector<std::vector<std::string>>{{"a", "b"}, {"A", "B", "C"}}, tables);
    CHECK_FALSE(is_complete(*bigger));
    auto one = make_algebra(wilke_signature(), std::vector<std::vector<std::string>>{{"p"}, {"w"}},
                            std::vector<std::vector<Elem>>{{0}, {0}, {0}});
    CHECK(is_complete(*one));
  }
}
