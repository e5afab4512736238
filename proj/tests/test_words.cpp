#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "algvar/words.hpp"

using namespace algvar;

namespace {

Dfa load(const std::string& name) { return parse_dfa(fixture_text(name)); }

// Syntactic classes of the words of length <= len, numbered by first occurrence.
std::vector<int> syntactic_images(const RecognizerQuotient& q, const std::vector<Word>& words) {
  std::vector<int> out;
  for (const auto& w : words) out.push_back(static_cast<int>(evaluate_word(q.recognizer, w)));
  return out;
}

}  // namespace

TEST_SUITE("words") {
  TEST_CASE("dfa validation") {
    Dfa d = load("ab_star.dfa");
    CHECK_NOTHROW(d.validate());
    d.delta[1][0] = 7;
    CHECK_THROWS_AS(d.validate(), AlgebraError);
  }

  TEST_CASE("compile_dfa examples") {
    auto all = compile_dfa(load("sigma_star.dfa"));
    CHECK(all.algebra->size(0) == 1);
    CHECK(all.accept[0][0]);

    auto ab = compile_dfa(load("ab_star.dfa"));
    CHECK(ab.algebra->size(0) == 6);
    std::set<std::string> labels(ab.algebra->labels(0).begin(), ab.algebra->labels(0).end());
    CHECK(labels == std::set<std::string>{"1", "a", "b", "aa", "ab", "ba"});

    auto aa = compile_dfa(load("aa_star.dfa"));
    CHECK(is_isomorphic(*aa.algebra, *oracle::cyclic(2)));
  }

  TEST_CASE("transition monoid size matches the transformation closure") {
    std::mt19937 rng(3);
    for (int round = 0; round < 30; ++round) {
      auto d = oracle::random_dfa(rng, 2 + rng() % 3, {"a", "b"});
      std::set<std::vector<std::size_t>> maps;
      for (const auto& w : oracle::words_upto(d.alphabet, 10)) {
        std::vector<std::size_t> f;
        for (std::size_t q = 0; q < d.states.size(); ++q) f.push_back(oracle::run_dfa(d, q, w));
        maps.insert(f);
      }
      auto rec = compile_dfa(d);
      CHECK(rec.algebra->size(0) == maps.size());
      for (const auto& w : oracle::words_upto(d.alphabet, 6)) CHECK(membership(rec, w) == oracle::dfa_accepts(d, w));
    }
  }

  TEST_CASE("membership") {
    auto rec = compile_dfa(load("ab_star.dfa"));
    CHECK(membership(rec, {}));
    CHECK(membership(rec, {"a", "b"}));
    CHECK_FALSE(membership(rec, {"a"}));
    CHECK(membership(rec, parse_word(alphabet_of(rec), "abab")));
    CHECK_FALSE(membership(rec, parse_word(alphabet_of(rec), "aab")));
  }

  TEST_CASE("parse_word") {
    std::vector<std::string> ab{"a", "b"};
    CHECK(parse_word(ab, "ab") == Word{"a", "b"});
    CHECK(parse_word(ab, "a.b") == Word{"a", "b"});
    CHECK(parse_word(ab, "").empty());
    CHECK(parse_word(ab, "1").empty());
    std::vector<std::string> long_letters{"x1", "y"};
    CHECK(parse_word(long_letters, "x1 y x1") == Word{"x1", "y", "x1"});
  }

  TEST_CASE("derivatives") {
    const Dfa d = load("ab_star.dfa");
    auto rec = compile_dfa(d);
    auto words = oracle::words_upto(d.alphabet, 6);

    auto same = derivative(rec, Side::left, {});
    for (const auto& w : words) CHECK(membership(same, w) == membership(rec, w));

    // y^-1 L: x in it iff yx in L
    for (const Word& y : {Word{"a"}, Word{"b"}, Word{"a", "b"}, Word{"a", "a"}}) {
      auto left = derivative(rec, Side::left, y);
      auto right = derivative(rec, Side::right, y);
      for (const auto& w : words) {
        CHECK(membership(left, w) == oracle::dfa_accepts(d, oracle::concat(y, w)));
        CHECK(membership(right, w) == oracle::dfa_accepts(d, oracle::concat(w, y)));
      }
    }
    // a^-1 (ab)* = b(ab)*
    auto left = derivative(rec, Side::left, {"a"});
    CHECK(membership(left, {"b"}));
    CHECK(membership(left, {"b", "a", "b"}));
    CHECK_FALSE(membership(left, {}));
    // (ab)* (ab)^-1 = (ab)*
    auto right = derivative(rec, Side::right, {"a", "b"});
    for (const auto& w : words) CHECK(membership(right, w) == membership(rec, w));
  }

  TEST_CASE("substitution specs") {
    auto g = SubstitutionSpec::parse("c=ab,d=", {"a", "b"});
    CHECK(g.source == std::vector<std::string>{"c", "d"});
    CHECK(g.images[0] == Word{"a", "b"});
    CHECK(g.images[1].empty());
    CHECK(g.apply({"c", "d", "c"}) == Word{"a", "b", "a", "b"});
    CHECK(SubstitutionSpec::parse(g.to_string(), {"a", "b"}).images == g.images);
  }

  TEST_CASE("preimages") {
    const Dfa d = load("ab_star.dfa");
    auto rec = compile_dfa(d);
    auto id = SubstitutionSpec::parse("a=a,b=b", {"a", "b"});
    auto same = preimage(rec, id);
    for (const auto& w : oracle::words_upto(d.alphabet, 6)) CHECK(membership(same, w) == membership(rec, w));

    auto c_ab = preimage(rec, SubstitutionSpec::parse("c=ab", {"a", "b"}));
    auto c_eps = preimage(rec, SubstitutionSpec::parse("c=", {"a", "b"}));
    auto c_a = preimage(rec, SubstitutionSpec::parse("c=a", {"a", "b"}));
    for (const auto& w : oracle::words_upto({"c"}, 6)) {
      CHECK(membership(c_ab, w));
      CHECK(membership(c_eps, w));
      CHECK(membership(c_a, w) == w.empty());
    }
    // random substitutions against a direct run of the image
    std::mt19937 rng(5);
    for (int round = 0; round < 20; ++round) {
      SubstitutionSpec g;
      g.source = {"c", "e"};
      g.target = {"a", "b"};
      for (int i = 0; i < 2; ++i) {
        Word img;
        for (std::size_t k = rng() % 4; k > 0; --k) img.push_back(rng() % 2 ? "a" : "b");
        g.images.push_back(img);
      }
      auto pre = preimage(rec, g);
      for (const auto& w : oracle::words_upto(g.source, 5)) CHECK(membership(pre, w) == oracle::dfa_accepts(d, g.apply(w)));
    }
  }

  TEST_CASE("syntactic monoid sizes") {
    CHECK(syntactic_monoid(compile_dfa(load("ab_star.dfa"))).recognizer.algebra->size(0) == 6);
    CHECK(syntactic_monoid(compile_dfa(load("sigma_star.dfa"))).recognizer.algebra->size(0) == 1);
    CHECK(syntactic_monoid(compile_dfa(load("aa_star.dfa"))).recognizer.algebra->size(0) == 2);
  }

  TEST_CASE("syntactic monoid agrees with the two-sided congruence on random automata") {
    std::mt19937 rng(9);
    for (int round = 0; round < 25; ++round) {
      auto d = oracle::random_dfa(rng, 3, {"a", "b"});
      auto q = syntactic_monoid(compile_dfa(d));
      auto words = oracle::words_upto(d.alphabet, 5);
      auto brute = oracle::two_sided_classes(d, words, 3);
      CHECK(oracle::same_partition(syntactic_images(q, words), brute));
      for (const auto& w : words) CHECK(membership(q.recognizer, w) == oracle::dfa_accepts(d, w));
    }
  }

  TEST_CASE("ordered syntactic monoid") {
    auto q = syntactic_monoid(compile_dfa(load("contains_a.dfa"), true));
    const auto& m = *q.recognizer.algebra;
    REQUIRE(m.ordered());
    CHECK(m.size(0) == 2);
    const Elem a = q.recognizer.letters[q.recognizer.letter("a")].image;
    const Elem b = q.recognizer.letters[q.recognizer.letter("b")].image;
    // u <= v iff every context accepting u accepts v
    CHECK(m.leq(0, b, a));
    CHECK_FALSE(m.leq(0, a, b));
    CHECK(is_up_set(m, q.recognizer.accept));
  }

  TEST_CASE("aperiodicity") {
    auto ab = syntactic_monoid(compile_dfa(load("ab_star.dfa")));
    CHECK(is_aperiodic(*ab.recognizer.algebra).aperiodic);
    auto z2 = parse_algebra(fixture_text("z2.alg"));
    auto r = is_aperiodic(z2);
    CHECK_FALSE(r.aperiodic);
    REQUIRE(r.witness.has_value());
    CHECK(z2.label(0, *r.witness) == "a");
    CHECK(is_aperiodic(*oracle::cyclic(1)).aperiodic);
    for (int n = 1; n <= 4; ++n)
      for (const auto& t : oracle::semigroups(n, true))
        CHECK(is_aperiodic(*oracle::monoid_algebra(t)).aperiodic == oracle::aperiodic(t));
  }

  TEST_CASE("complement") {
    const Dfa d = load("ends_a.dfa");
    auto c = complement(compile_dfa(d));
    for (const auto& w : oracle::words_upto(d.alphabet, 6)) CHECK(membership(c, w) != oracle::dfa_accepts(d, w));
  }
}
