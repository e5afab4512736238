#include <map>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "algvar/variety.hpp"

using namespace algvar;

namespace {

Recognizer cyclic_gen(int n) { return Recognizer::generators_only(oracle::cyclic(n), {{"a", 0, n > 1 ? 1u : 0u}}); }

Recognizer dfa_rec(const std::string& name, bool ordered = false) {
  return compile_dfa(parse_dfa(fixture_text(name)), ordered);
}

using Transform = std::vector<std::size_t>;

// Boolean and derivative closure of a DFA language inside the transition
// monoid, with languages as sets of transformations.
std::size_t naive_boolean_closure(const Dfa& d) {
  std::map<Transform, int> index;
  std::vector<Transform> elems;
  for (const auto& w : oracle::words_upto(d.alphabet, 8)) {
    Transform f;
    for (std::size_t q = 0; q < d.states.size(); ++q) f.push_back(oracle::run_dfa(d, q, w));
    if (index.emplace(f, static_cast<int>(elems.size())).second) elems.push_back(f);
  }
  const std::size_t n = elems.size();
  auto then = [&](const Transform& f, const Transform& g) {
    Transform h;
    for (auto x : f) h.push_back(g[x]);
    return index.at(h);
  };
  std::vector<Transform> letters;
  for (std::size_t a = 0; a < d.alphabet.size(); ++a) {
    Transform f;
    for (std::size_t q = 0; q < d.states.size(); ++q) f.push_back(d.delta[q][a]);
    letters.push_back(f);
  }
  using Lang = std::vector<bool>;
  Lang start(n);
  for (std::size_t i = 0; i < n; ++i) start[i] = d.finals[elems[i][d.initial]];
  std::set<Lang> seen{start};
  std::vector<Lang> todo{start};
  auto add = [&](const Lang& l) {
    if (seen.insert(l).second) todo.push_back(l);
  };
  while (!todo.empty()) {
    Lang l = todo.back();
    todo.pop_back();
    Lang c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = !l[i];
    add(c);
    for (const auto& g : letters) {
      Lang left(n), right(n);
      for (std::size_t i = 0; i < n; ++i) {
        left[i] = l[then(g, elems[i])];
        right[i] = l[then(elems[i], g)];
      }
      add(left);
      add(right);
    }
    for (const auto& m : std::vector<Lang>(seen.begin(), seen.end())) {
      Lang u(n), v(n);
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = l[i] || m[i];
        v[i] = l[i] && m[i];
      }
      add(u);
      add(v);
    }
  }
  return seen.size();
}

}  // namespace

TEST_SUITE("variety") {
  TEST_CASE("profinite laws") {
    auto z2 = parse_algebra(fixture_text("z2.alg"));
    auto sig = z2.signature();
    CHECK(satisfies_profinite_law(z2, parse_law(sig, "x = x")).holds);
    auto ap = parse_law(sig, "x^w * x = x^w");
    auto r = satisfies_profinite_law(z2, ap);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witness.size() == 1);
    CHECK(z2.label(0, r.witness[0]) == "a");
    CHECK(satisfies_profinite_law(*oracle::cyclic(6), parse_law(sig, "x * y = y * x")).holds);
    CHECK(satisfies_profinite_law(*oracle::cyclic(6), parse_law(sig, "x^w = 1")).holds);
  }

  TEST_CASE("laws with variables in generator-free sorts hold vacuously") {
    auto r = parse_omega(fixture_text("inf_a.omega"));
    auto law = parse_law(r.rec.algebra->signature(), "x:omega = y:omega");
    CHECK_FALSE(satisfies_profinite_law(*r.rec.algebra, law).holds);
    std::vector<bool> gens{true, false};
    auto v = satisfies_profinite_law(*r.rec.algebra, law, &gens);
    CHECK(v.holds);
    CHECK(v.vacuous);
  }

  TEST_CASE("aperiodicity is the law x^w x = x^w") {
    auto law = parse_law(monoid_signature(), "x^w * x = x^w");
    for (int n = 1; n <= 4; ++n)
      for (const auto& t : oracle::semigroups(n, true)) {
        auto a = oracle::monoid_algebra(t);
        CHECK(satisfies_profinite_law(*a, law).holds == oracle::aperiodic(t));
        CHECK(is_aperiodic(*a).aperiodic == oracle::aperiodic(t));
      }
  }

  TEST_CASE("long products parse quickly") {
    std::string text = "x";
    for (int i = 0; i < 60; ++i) text += " * x";
    auto law = parse_law(monoid_signature(), text + " = x");
    CHECK(law.lhs.depth() == 61);
  }

  TEST_CASE("generated algebras") {
    auto g = as_generated(dfa_rec("ab_star.dfa"));
    CHECK(g.accept[0] == std::vector<bool>(g.algebra->size(0), false));
    auto c = canonical_generated(g);
    CHECK(quotient_key(c) == quotient_key(canonical_generated(c)));
    // relabeling letters' images by an automorphism keeps the key
    auto z3a = Recognizer::generators_only(oracle::cyclic(3), {{"a", 0, 1}});
    auto z3b = Recognizer::generators_only(oracle::cyclic(3), {{"a", 0, 2}});
    CHECK(quotient_key(z3a) == quotient_key(z3b));
    CHECK(quotient_key(cyclic_gen(2)) != quotient_key(cyclic_gen(3)));
  }

  TEST_CASE("pairing and quotients") {
    auto p = pair_generated(cyclic_gen(2), cyclic_gen(3));
    CHECK(p.rec.algebra->size(0) == 6);
    CHECK(is_isomorphic(*p.rec.algebra, *oracle::cyclic(6)));
    auto same = pair_generated(cyclic_gen(2), cyclic_gen(2));
    CHECK(same.rec.algebra->size(0) == 2);
    auto triv = pair_generated(cyclic_gen(2), cyclic_gen(1));
    CHECK(triv.rec.algebra->size(0) == 2);

    CHECK(all_quotients(cyclic_gen(2)).size() == 2);
    CHECK(all_quotients(cyclic_gen(6)).size() == 4);
  }

  TEST_CASE("local pseudovarieties") {
    auto t = generate_local_pseudovariety({cyclic_gen(1)}, 4);
    CHECK(t.members.size() == 1);
    auto z2 = generate_local_pseudovariety({cyclic_gen(2)}, 4);
    CHECK(z2.members.size() == 2);
    CHECK_FALSE(z2.truncated);
    auto z6 = generate_local_pseudovariety({cyclic_gen(2), cyclic_gen(3)}, 6);
    CHECK(z6.members.size() == 4);
    CHECK_FALSE(z6.truncated);
    bool has6 = false;
    for (const auto& m : z6.members) has6 = has6 || m.algebra->size(0) == 6;
    CHECK(has6);
    auto cut = generate_local_pseudovariety({cyclic_gen(2), cyclic_gen(3)}, 4);
    CHECK(cut.truncated);
    CHECK(same_ideal(z6, generate_local_pseudovariety({cyclic_gen(6)}, 6)));
    CHECK_FALSE(same_ideal(z6, z2));
  }

  TEST_CASE("closure operator properties of ideal generation") {
    auto a = generate_local_pseudovariety({cyclic_gen(2)}, 6);
    auto ab = generate_local_pseudovariety({cyclic_gen(2), cyclic_gen(3)}, 6);
    // monotone and extensive
    for (const auto& k : a.keys) CHECK(ab.keys.count(k) == 1);
    // idempotent
    auto again = generate_local_pseudovariety(ab.members, 6);
    CHECK(same_ideal(again, ab));
  }

  TEST_CASE("languages of an ideal") {
    auto t = languages_of(generate_local_pseudovariety({cyclic_gen(1)}, 4));
    CHECK(t.members.size() == 2);
    auto z2 = languages_of(generate_local_pseudovariety({cyclic_gen(2)}, 4));
    CHECK(z2.members.size() == 4);
    // parity unions: membership depends only on the length mod 2
    for (const auto& r : family_languages(z2))
      for (const auto& w : oracle::words_upto({"a"}, 6)) CHECK(membership(r, w) == membership(r, Word(w.size() % 2, "a")));
  }

  TEST_CASE("boolean closure") {
    auto sigma = dfa_rec("sigma_star.dfa");
    auto empty = complement(sigma);
    auto f = close_language_family(std::vector<Recognizer>{empty}, {});
    CHECK(f.members.size() == 2);

    const Dfa d = parse_dfa(fixture_text("ab_star.dfa"));
    auto ab = close_language_family(std::vector<Recognizer>{compile_dfa(d)}, {});
    CHECK(ab.members.size() == naive_boolean_closure(d));
    CHECK_FALSE(ab.truncated);
    for (const char* name : {"ends_a.dfa", "first_a.dfa", "len_mod3.dfa"}) {
      const Dfa e = parse_dfa(fixture_text(name));
      CHECK(close_language_family(std::vector<Recognizer>{compile_dfa(e)}, {}).members.size() == naive_boolean_closure(e));
    }
  }

  TEST_CASE("positive closure in the ordered regime keeps up-sets") {
    ClosureOptions opts;
    opts.mode = ClosureMode::positive;
    auto f = close_language_family(std::vector<Recognizer>{dfa_rec("contains_a.dfa", true)}, opts);
    for (const auto& m : f.members) CHECK(is_up_set(*f.shared.algebra, m));
    // empty, contains a, everything
    CHECK(f.members.size() == 3);
    ClosureOptions boolean;
    CHECK_THROWS(close_language_family(std::vector<Recognizer>{dfa_rec("contains_a.dfa", true)}, boolean));
  }

  TEST_CASE("family to pseudovariety") {
    auto sigma = dfa_rec("sigma_star.dfa");
    auto trivial = family_to_pseudovariety(family_of({sigma, complement(sigma)}), 4);
    CHECK(trivial.members.size() == 1);

    auto parity = family_to_pseudovariety(languages_of(generate_local_pseudovariety({cyclic_gen(2)}, 4)), 4);
    CHECK(same_ideal(parity, generate_local_pseudovariety({cyclic_gen(2)}, 4)));

    auto rec = dfa_rec("ab_star.dfa");
    auto closed = close_language_family(std::vector<Recognizer>{rec}, {});
    auto v = family_to_pseudovariety(closed, 6);
    auto syn = as_generated(syntactic_monoid(rec).recognizer);
    CHECK(same_ideal(v, generate_local_pseudovariety({syn}, 6)));
  }

  TEST_CASE("round trips") {
    auto t = roundtrip_from_generators({cyclic_gen(1)}, 4);
    CHECK(t.pass());
    auto z2 = roundtrip_from_generators({cyclic_gen(2)}, 4);
    CHECK(z2.pass());
    CHECK(z2.family_size == 4);
    auto ab = roundtrip_from_languages({dfa_rec("ab_star.dfa")}, 6);
    CHECK(ab.pass());
  }

  TEST_CASE("morphism classes") {
    auto ne = MorphismClass::non_erasing();
    CHECK(ne.admits(SubstitutionSpec::parse("c=ab", {"a", "b"})));
    CHECK_FALSE(ne.admits(SubstitutionSpec::parse("c=", {"a", "b"})));
    auto lp = MorphismClass::length_preserving();
    CHECK(lp.admits(SubstitutionSpec::parse("c=a", {"a", "b"})));
    CHECK_FALSE(lp.admits(SubstitutionSpec::parse("c=ab", {"a", "b"})));
    CHECK(MorphismClass::all().admits(SubstitutionSpec::parse("c=", {"a", "b"})));
    CHECK(MorphismClass::by_name("length-preserving").name == "length-preserving");
    CHECK_THROWS(MorphismClass::by_name("bogus"));
  }

  TEST_CASE("Straubing restriction") {
    auto even = dfa_rec("even_length.dfa");
    ClosureOptions unrestricted;
    unrestricted.all_morphisms = true;
    auto full = close_language_family(std::vector<Recognizer>{even}, unrestricted);
    auto all = straubing_filter({even}, MorphismClass::all());
    CHECK(same_family(full, all));
    auto lp = straubing_filter({even}, MorphismClass::length_preserving());
    CHECK(lp.members.size() == 4);
    CHECK(all.members.size() == 16);
    // every length-preserving language is in the larger family
    auto big = family_languages(all);
    for (const auto& small : family_languages(lp)) {
      bool found = false;
      for (const auto& b : big) {
        bool same = true;
        for (const auto& w : oracle::words_upto({"a", "b"}, 6)) same = same && membership(small, w) == membership(b, w);
        found = found || same;
      }
      CHECK(found);
    }
  }
}
