#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include "algvar/cli.hpp"
#include "algvar/formats.hpp"

using namespace algvar;
using algvar::cli::dispatch;
using algvar::cli::Report;

namespace {

struct Run {
  int code;
  std::string out, err;
  Report report;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Report r;
  int code = dispatch(args, out, err, &r);
  return {code, out.str(), err.str(), r};
}

std::string verdict(const Report& r, const std::string& key) {
  for (const auto& [k, v] : r.verdicts)
    if (k == key) return v;
  return "<missing " + key + ">";
}

std::vector<std::string> fixture_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(ALGVAR_FIXTURES)) {
    auto name = e.path().filename().string();
    if (name != "malformed.dfa") out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("syntactic prints the 6-element monoid") {
    auto r = run({"syntactic", "--dfa", fixture("ab_star.dfa")});
    CHECK(r.code == 0);
    CHECK(verdict(r.report, "elements") == "6");
    CHECK(verdict(r.report, "aperiodic") == "yes");
    auto lib = syntactic_monoid(compile_dfa(parse_dfa(fixture_text("ab_star.dfa"))));
    CHECK(r.report.body_text == serialize_recognizer(lib.recognizer));
    CHECK(r.out.rfind("syntactic: pass\n", 0) == 0);

    CHECK(verdict(run({"syntactic", "--dfa", fixture("aa_star.dfa")}).report, "elements") == "2");
    CHECK(verdict(run({"syntactic", "--dfa", fixture("sigma_star.dfa")}).report, "elements") == "1");
    CHECK(verdict(run({"syntactic", "--rec", fixture("z4_aa.rec")}).report, "elements") == "2");
  }

  TEST_CASE("law failure exits 1 with a witness") {
    auto r = run({"law", "--alg", fixture("z2.alg"), "--law", "x^w * x = x^w"});
    CHECK(r.code == 1);
    REQUIRE(r.report.witnesses.size() == 1);
    CHECK(r.report.witnesses[0] == "x=s0#1(a)");
    CHECK(r.out.find("witness: x=s0#1(a)") != std::string::npos);

    // Z2 is a monoid but not aperiodic
    auto file = run({"law", "--alg", fixture("z2.alg"), "--laws", fixture("monoid.laws")});
    CHECK(file.code == 1);
    CHECK(verdict(file.report, "law 0") == "x * y * z = x * (y * z) holds");
    CHECK(run({"law", "--alg", fixture("ab_star.dfa.json"), "--law", "x = x"}).code == 2);
    auto stab = run({"law", "--alg", fixture("stab.alg"), "--preset", "stabilization"});
    CHECK(stab.code == 0);
    auto bad = run({"law", "--alg", fixture("stab_bad.alg"), "--preset", "stabilization"});
    CHECK(bad.code == 1);
    REQUIRE(bad.report.witnesses.size() == 1);
    CHECK(bad.report.witnesses[0] == "x=s0#0(1)");
  }

  TEST_CASE("usage and parse errors exit 2") {
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"syntactic"}).code == 2);
    CHECK(run({"--bound", "0", "ideal", "--gens", fixture("aa_star.dfa")}).code == 2);
    auto m = run({"syntactic", "--dfa", fixture("malformed.dfa")});
    CHECK(m.code == 2);
    CHECK(m.err.find("line 6") != std::string::npos);
    CHECK(run({"syntactic", "--dfa", fixture("missing.dfa")}).code == 2);
  }

  TEST_CASE("validate with a preset reports a semantic error with witness") {
    auto r = run({"validate", fixture("bad_monoid.alg"), "--preset", "monoid"});
    CHECK(r.code == 1);
    REQUIRE(r.report.witnesses.size() == 1);
    CHECK(r.report.witnesses[0] == "x=s0#1(a)");
    auto ok = run({"validate", fixture("z2.alg"), "--preset", "monoid"});
    CHECK(ok.code == 0);
    CHECK(verdict(ok.report, "canonical") == "yes");
    for (const auto& name : fixture_files()) {
      auto v = run({"validate", fixture(name)});
      CHECK_MESSAGE(v.code == 0, name);
    }
  }

  TEST_CASE("derivative and preimage mirror the library") {
    const Dfa d = parse_dfa(fixture_text("ab_star.dfa"));
    auto rec = compile_dfa(d);
    auto r = run({"derivative", "--dfa", fixture("ab_star.dfa"), "--side", "left", "--word", "a"});
    CHECK(r.code == 0);
    CHECK(r.report.body_text == serialize_recognizer(derivative(rec, Side::left, {"a"})));
    CHECK(run({"derivative", "--dfa", fixture("ab_star.dfa"), "--side", "left", "--word", "a", "--test", "b"}).code == 0);
    CHECK(run({"derivative", "--dfa", fixture("ab_star.dfa"), "--side", "left", "--word", "a", "--test", "ab"}).code == 1);

    auto p = run({"preimage", "--dfa", fixture("ab_star.dfa"), "--map", "c=ab"});
    CHECK(p.code == 0);
    CHECK(p.report.body_text == serialize_recognizer(preimage(rec, SubstitutionSpec::parse("c=ab", d.alphabet))));
    CHECK(run({"preimage", "--dfa", fixture("ab_star.dfa"), "--map", "c=a", "--test", "c"}).code == 1);
  }

  TEST_CASE("ideal, closure and roundtrip mirror the library") {
    auto i = run({"--bound", "6", "ideal", "--gens", fixture("aa_star.dfa"), fixture("len_mod3.dfa")});
    CHECK(i.code == 0);
    auto gens = std::vector<Recognizer>{as_generated(syntactic_monoid(compile_dfa(parse_dfa(fixture_text("aa_star.dfa")))).recognizer),
                                        as_generated(syntactic_monoid(compile_dfa(parse_dfa(fixture_text("len_mod3.dfa")))).recognizer)};
    CHECK(verdict(i.report, "members") == std::to_string(generate_local_pseudovariety(gens, 6).members.size()));
    CHECK(verdict(i.report, "members") == "4");

    auto c = run({"closure", "--family", fixture("even_length.family")});
    CHECK(c.code == 0);
    CHECK(verdict(c.report, "languages") == "4");
    auto e = compile_dfa(parse_dfa(fixture_text("even_length.dfa")));
    CHECK(verdict(run({"closure", "--family", fixture("even_length.family"), "--all-morphisms"}).report, "languages") ==
          std::to_string(straubing_filter({e}, MorphismClass::all()).members.size()));

    auto rt = run({"--bound", "6", "roundtrip", "--seed", fixture("ab_star.dfa")});
    CHECK(rt.code == 0);
    auto lib = roundtrip_from_languages({compile_dfa(parse_dfa(fixture_text("ab_star.dfa")))}, 6);
    CHECK(verdict(rt.report, "ideal") == std::to_string(lib.ideal_size) + " fixed");
    CHECK(verdict(rt.report, "family") == std::to_string(lib.family_size) + " fixed");
  }

  TEST_CASE("reduce and omega commands mirror the library") {
    auto r = run({"reduce", "--omega", fixture("inf_a_clone.omega")});
    CHECK(r.code == 0);
    CHECK(verdict(r.report, "after") == "plus[a,b] omega[A,B]");
    auto clone = parse_omega(fixture_text("inf_a_clone.omega"));
    auto q = reduce_quotient(clone.rec, omega_presentation(clone.rec), {1});
    CHECK(r.report.body_text == serialize_recognizer(q.recognizer));

    auto s = run({"omega", "syntactic", "--omega", fixture("inf_a.omega")});
    CHECK(s.code == 0);
    CHECK(verdict(s.report, "elements") == "plus[a,b] omega[A,B]");
    CHECK(run({"omega", "member", "--omega", fixture("inf_a.omega"), "--lasso", "b;ab"}).code == 0);
    CHECK(run({"omega", "member", "--omega", fixture("inf_a.omega"), "--lasso", "ab;b"}).code == 1);
  }

  TEST_CASE("tree commands mirror the library") {
    auto s = run({"tree", "syntactic", "--ta", fixture("root_a.ta")});
    CHECK(s.code == 0);
    auto lib = syntactic_reduced_tree_algebra(compile_tree_automaton(parse_tree_automaton(fixture_text("root_a.ta"))));
    CHECK(s.report.body_text == serialize_recognizer(lib.recognizer));
    CHECK(run({"tree", "member", "--ta", fixture("root_a.ta"), "--tree", "a(b,b)"}).code == 0);
    CHECK(run({"tree", "member", "--ta", fixture("root_a.ta"), "--tree", "b"}).code == 1);
    CHECK(run({"tree", "derivative", "--ta", fixture("root_a.ta"), "--context", "b(*,b)", "--tree", "a"}).code == 1);
  }

  TEST_CASE("JSON reports mirror the text reports") {
    const std::vector<std::vector<std::string>> cmds{
        {"syntactic", "--dfa", fixture("ab_star.dfa")},
        {"law", "--alg", fixture("z2.alg"), "--law", "x^w * x = x^w"},
        {"closure", "--family", fixture("even_length.family")},
        {"reduce", "--omega", fixture("inf_a_clone.omega")},
    };
    for (auto args : cmds) {
      auto text = run(args);
      args.insert(args.begin(), "--json");
      auto js = run(args);
      CHECK(text.code == js.code);
      auto j = nlohmann::ordered_json::parse(js.out);
      CHECK(j["pass"].get<bool>() == text.report.pass);
      CHECK(j["witnesses"].get<std::vector<std::string>>() == text.report.witnesses);
      std::vector<std::pair<std::string, std::string>> v;
      for (auto it = j["verdicts"].begin(); it != j["verdicts"].end(); ++it) v.emplace_back(it.key(), it.value());
      CHECK(v == text.report.verdicts);
    }
  }

  TEST_CASE("output file and timing") {
    auto path = std::filesystem::temp_directory_path() / "algvar_cli_test.txt";
    auto r = run({"-o", path.string(), "syntactic", "--dfa", fixture("aa_star.dfa")});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(read_file(path.string()) == r.report.to_text());
    std::filesystem::remove(path);
    auto t = run({"--timing", "syntactic", "--dfa", fixture("aa_star.dfa")});
    CHECK(t.out.find("elapsed_ms: ") != std::string::npos);
    CHECK(run({"syntactic", "--dfa", fixture("aa_star.dfa")}).out.find("elapsed_ms") == std::string::npos);
  }

  TEST_CASE("session config") {
    cli::SessionConfig c;
    CHECK_NOTHROW(c.validate());
    c.bound = 0;
    CHECK_THROWS(c.validate());
    c.bound = 3;
    c.ordered = true;
    c.mode = ClosureMode::boolean;
    CHECK_THROWS(c.validate());
    c.mode = ClosureMode::positive;
    CHECK_NOTHROW(c.validate());

    setenv("ALGVAR_BOUND", "5", 1);
    CHECK(cli::default_bound() == 5);
    setenv("ALGVAR_BOUND", "zero", 1);
    CHECK(cli::default_bound() == 8);
    unsetenv("ALGVAR_BOUND");
    CHECK(cli::default_bound() == 8);
  }

  TEST_CASE("every fixture round trips byte for byte") {
    for (const auto& name : fixture_files()) {
      auto type = detect_file_type(name);
      REQUIRE_MESSAGE(type.has_value(), name);
      const auto text = fixture_text(name);
      const auto sig = monoid_signature();
      CHECK_MESSAGE(reformat(*type, text, &sig) == text, name);
    }
  }

  TEST_CASE("JSON mirrors agree with the text fixtures") {
    CHECK(dfa_from_json(fixture_text("ab_star.dfa.json")).delta == parse_dfa(fixture_text("ab_star.dfa")).delta);
    CHECK(algebra_from_json(fixture_text("z2.alg.json")) == parse_algebra(fixture_text("z2.alg")));
    CHECK(serialize_omega(omega_from_json(fixture_text("inf_a.omega.json"))) == fixture_text("inf_a.omega"));
    CHECK(serialize_tree_automaton(tree_automaton_from_json(fixture_text("root_a.ta.json"))) == fixture_text("root_a.ta"));
    CHECK(serialize_recognizer(recognizer_from_json(fixture_text("z4_aa.rec.json"))) == fixture_text("z4_aa.rec"));
    CHECK(dfa_to_json(parse_dfa(fixture_text("ab_star.dfa"))) == fixture_text("ab_star.dfa.json"));
  }

  TEST_CASE("file type detection") {
    CHECK(detect_file_type("x.dfa")->kind == FileKind::dfa);
    CHECK(detect_file_type("x.dfa.json")->json);
    CHECK(detect_file_type("dir/x.ta")->kind == FileKind::tree_automaton);
    CHECK(detect_file_type("x.laws")->kind == FileKind::laws);
    CHECK_FALSE(detect_file_type("x.txt").has_value());
    CHECK_FALSE(detect_file_type("x.laws.json").has_value());
  }

  TEST_CASE("parse diagnostics") {
    try {
      parse_dfa(fixture_text("malformed.dfa"));
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 6);
      CHECK(e.column() == 1);
    }
    CHECK_THROWS_AS(parse_algebra("sorts M\nelements M 1 a\nop one : -> M\nop mul : M M -> M\none() = 1\n"), AlgebraError);
    try {
      parse_algebra("sorts M\nelements M 1\nop mul : M M -> Q\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_law(monoid_signature(), "x * = y"), ParseError);
    CHECK_THROWS_AS(parse_law_file("signature nope\nx = x\n"), std::exception);
  }

  TEST_CASE("law files") {
    auto f = parse_law_file(fixture_text("monoid.laws"));
    CHECK(f.signature_name == "monoid");
    CHECK(f.laws.size() == 4);
    CHECK(serialize_law_file(f) == fixture_text("monoid.laws"));
    auto sig = monoid_signature();
    auto g = parse_law_file("x * y = y * x\n", &sig);
    CHECK_FALSE(g.signature_name.has_value());
    CHECK(g.laws.size() == 1);
  }

  TEST_CASE("family files") {
    auto f = parse_family(fixture_text("even_length.family"));
    CHECK(f.mode == ClosureMode::boolean);
    CHECK(f.morphism_class == "length-preserving");
    CHECK(f.members.size() == 1);
    CHECK(serialize_family(f) == fixture_text("even_length.family"));
  }
}
