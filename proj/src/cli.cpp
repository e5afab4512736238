#include "algvar/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "algvar/formats.hpp"
#include "algvar/omega.hpp"
#include "algvar/trees.hpp"
#include "algvar/words.hpp"
#include "json.hpp"

namespace algvar::cli {

using json = nlohmann::ordered_json;

void SessionConfig::validate() const {
  if (bound < 1) throw std::invalid_argument("bound must be at least 1");
  if (ordered && mode == ClosureMode::boolean)
    throw std::invalid_argument("boolean closure needs the unordered regime");
  if (morphism_class) MorphismClass::by_name(*morphism_class);
}

std::string Report::to_text(bool timing) const {
  std::string out = command + ": " + (pass ? "pass" : "fail") + "\n";
  for (const auto& [k, v] : verdicts) out += k + ": " + v + "\n";
  for (const auto& w : witnesses) out += "witness: " + w + "\n";
  if (truncated) out += "truncated: yes\n";
  if (timing) out += "elapsed_ms: " + std::to_string(elapsed_ms) + "\n";
  if (!body_text.empty()) out += "---\n" + body_text;
  return out;
}

std::string Report::to_json(bool timing) const {
  json j;
  j["command"] = command;
  j["pass"] = pass;
  json v = json::object();
  for (const auto& [k, val] : verdicts) v[k] = val;
  j["verdicts"] = v;
  j["witnesses"] = witnesses;
  j["truncated"] = truncated;
  if (timing) j["elapsed_ms"] = elapsed_ms;
  if (!body_json.empty()) j["result"] = json::parse(body_json);
  return j.dump(2) + "\n";
}

std::size_t default_bound() {
  if (const char* env = std::getenv("ALGVAR_BOUND")) {
    char* end = nullptr;
    auto v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return v;
  }
  return 8;
}

namespace {

// Input problems: exit 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested check failed: exit 1.
struct CheckFailed : std::runtime_error {
  std::vector<std::string> witnesses;
  CheckFailed(const std::string& what, std::vector<std::string> w) : std::runtime_error(what), witnesses(std::move(w)) {}
};

FileType type_of(const std::string& path, std::initializer_list<FileKind> allowed) {
  auto t = detect_file_type(path);
  if (!t) throw InputError(path + ": unrecognized file extension");
  for (auto k : allowed)
    if (t->kind == k) return *t;
  throw InputError(path + ": unexpected " + kind_name(t->kind) + " file");
}

template <class F>
auto loading(const std::string& path, F&& f) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
  try {
    return f(text);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const AlgebraError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Dfa load_dfa(const std::string& path) {
  auto t = type_of(path, {FileKind::dfa});
  return loading(path, [&](const std::string& s) { return t.json ? dfa_from_json(s) : parse_dfa(s); });
}

FiniteAlgebra load_algebra(const std::string& path) {
  auto t = type_of(path, {FileKind::algebra, FileKind::recognizer});
  return loading(path, [&](const std::string& s) {
    if (t.kind == FileKind::recognizer) return FiniteAlgebra(*(t.json ? recognizer_from_json(s) : parse_recognizer(s)).algebra);
    return t.json ? algebra_from_json(s) : parse_algebra(s);
  });
}

OmegaRecognizer load_omega(const std::string& path) {
  auto t = type_of(path, {FileKind::omega});
  return loading(path, [&](const std::string& s) { return t.json ? omega_from_json(s) : parse_omega(s); });
}

TreeAutomaton load_ta(const std::string& path) {
  auto t = type_of(path, {FileKind::tree_automaton});
  return loading(path, [&](const std::string& s) {
    return t.json ? tree_automaton_from_json(s) : parse_tree_automaton(s);
  });
}

// Any recognizer-like file.
Recognizer load_recognizer(const std::string& path, bool ordered) {
  auto t = type_of(path, {FileKind::recognizer, FileKind::dfa, FileKind::omega, FileKind::tree_automaton});
  switch (t.kind) {
    case FileKind::dfa: return compile_dfa(load_dfa(path), ordered);
    case FileKind::omega: return load_omega(path).rec;
    case FileKind::tree_automaton: return compile_tree_automaton(load_ta(path));
    default:
      return loading(path, [&](const std::string& s) { return t.json ? recognizer_from_json(s) : parse_recognizer(s); });
  }
}

FamilyFile load_family(const std::string& path) {
  type_of(path, {FileKind::family});
  return loading(path, [](const std::string& s) { return parse_family(s); });
}

void require_preset(const FiniteAlgebra& alg, const std::string& preset) {
  std::vector<Law> laws;
  try {
    laws = presets::by_name(alg, preset);
  } catch (const ParseError& e) {
    throw InputError(std::string("preset does not fit the signature: ") + e.what());
  }
  auto rep = validate_laws(alg, laws);
  if (!rep.pass) {
    const auto& law = laws[*rep.failed_law];
    throw CheckFailed("algebra fails " + preset + " law " + to_string(alg.signature(), law),
                      {describe_witness(alg, law, rep.witness)});
  }
}

std::string labels_of(const FiniteAlgebra& a) {
  std::string out;
  for (SortId s = 0; s < a.num_sorts(); ++s) {
    out += (s ? " " : "") + a.signature().sorts()[s] + "[";
    for (Elem x = 0; x < a.size(s); ++x) out += (x ? "," : "") + a.label(s, x);
    out += "]";
  }
  return out;
}

std::string subset_of(const FiniteAlgebra& a, const SortedSubset& sub) {
  std::string out;
  for (SortId s = 0; s < a.num_sorts(); ++s) {
    out += (s ? " " : "") + a.signature().sorts()[s] + "{";
    bool first = true;
    for (Elem x = 0; x < a.size(s); ++x)
      if (sub[s][x]) {
        out += (first ? "" : ",") + a.label(s, x);
        first = false;
      }
    out += "}";
  }
  return out;
}

void set_body(Report& r, const Recognizer& rec) {
  r.body_text = serialize_recognizer(rec);
  r.body_json = recognizer_to_json(rec);
}

void describe_family(Report& r, const LanguageFamily& f) {
  const auto& a = *f.shared.algebra;
  r.add("shared", labels_of(a));
  r.add("languages", std::to_string(f.members.size()));
  for (std::size_t i = 0; i < f.members.size(); ++i) r.add("language " + std::to_string(i), subset_of(a, f.members[i]));
  r.truncated = r.truncated || f.truncated;
}

void describe_ideal(Report& r, const LocalPseudovariety& v) {
  r.add("alphabet", [&] {
    std::string s;
    for (std::size_t i = 0; i < v.alphabet.size(); ++i) s += (i ? " " : "") + v.alphabet[i];
    return s;
  }());
  r.add("members", std::to_string(v.members.size()));
  for (std::size_t i = 0; i < v.members.size(); ++i) r.add("member " + std::to_string(i), labels_of(*v.members[i].algebra));
  r.truncated = r.truncated || v.truncated;
}

SortSubset sorts_named(const FiniteAlgebra& a, const std::vector<std::string>& names) {
  SortSubset out;
  for (const auto& n : names) {
    auto s = a.signature().find_sort(n);
    if (!s) throw InputError("unknown sort '" + n + "'");
    out.push_back(*s);
  }
  return out;
}

struct Options {
  SessionConfig cfg;
  std::optional<std::string> mode_name;
  std::string dfa, rec, alg, omega, ta, family, laws_file, preset, validate, map, side = "left", word, test, lasso,
      context, tree, file, to;
  std::vector<std::string> dfas, recs, gens, seeds, laws, s0;
  bool reduced = false, all_morphisms = false;
  std::size_t max_image_length = 2;
};

void need_one(std::initializer_list<std::pair<const char*, const std::string*>> opts) {
  int n = 0;
  std::string names;
  for (auto [name, v] : opts) {
    n += !v->empty();
    names += (names.empty() ? "" : " or ") + std::string(name);
  }
  if (n != 1) throw CLI::ValidationError("exactly one of " + names + " is required");
}

Recognizer word_input(const Options& o) {
  need_one({{"--dfa", &o.dfa}, {"--rec", &o.rec}});
  return o.dfa.empty() ? load_recognizer(o.rec, o.cfg.ordered) : compile_dfa(load_dfa(o.dfa), o.cfg.ordered);
}

void check_word_member(Report& r, const Recognizer& rec, const std::string& word) {
  if (word.empty()) return;
  auto w = parse_word(alphabet_of(rec), word);
  bool in = membership(rec, w);
  r.add("member", in ? "yes" : "no");
  r.pass = in;
}

// ------------------------------------------------------------- commands

void cmd_syntactic(const Options& o, Report& r) {
  auto rec = word_input(o);
  RecognizerQuotient q = [&] {
    if (rec.algebra->signature().with_order(false) == monoid_signature()) return syntactic_monoid(rec);
    auto [t, inc] = trim(rec);
    return syntactic_algebra(t, default_presentation(t.algebra));
  }();
  const auto& a = *q.recognizer.algebra;
  r.add("elements", std::to_string(a.total_size()));
  if (a.signature().with_order(false) == monoid_signature())
    r.add("aperiodic", is_aperiodic(a).aperiodic ? "yes" : "no");
  set_body(r, q.recognizer);
}

void cmd_derivative(const Options& o, Report& r) {
  auto rec = word_input(o);
  const auto side = o.side == "right" ? Side::right : Side::left;
  auto y = parse_word(alphabet_of(rec), o.word);
  auto d = derivative(rec, side, y);
  r.add("derivative", std::string(side == Side::left ? "left" : "right") + " by " + (o.word.empty() ? "1" : o.word));
  check_word_member(r, d, o.test);
  set_body(r, d);
}

void cmd_preimage(const Options& o, Report& r) {
  auto rec = word_input(o);
  if (o.map.empty()) throw CLI::ValidationError("--map is required");
  auto g = SubstitutionSpec::parse(o.map, alphabet_of(rec));
  auto p = preimage(rec, g);
  r.add("substitution", g.to_string());
  check_word_member(r, p, o.test);
  set_body(r, p);
}

void cmd_law(const Options& o, Report& r) {
  need_one({{"--alg", &o.alg}});
  auto alg = load_algebra(o.alg);
  if (!o.validate.empty()) require_preset(alg, o.validate);
  std::vector<Law> laws;
  try {
    for (const auto& text : o.laws) laws.push_back(parse_law(alg.signature(), text));
    if (!o.laws_file.empty())
      for (auto& l : loading(o.laws_file, [&](const std::string& s) {
             return parse_law_file(s, &alg.signature()).laws;
           }))
        laws.push_back(std::move(l));
    if (!o.preset.empty())
      for (auto& l : presets::by_name(alg, o.preset)) laws.push_back(std::move(l));
  } catch (const ParseError& e) {
    throw InputError(e.what());
  }
  if (laws.empty()) throw CLI::ValidationError("give --law, --laws or --preset");
  for (std::size_t i = 0; i < laws.size(); ++i) {
    auto rep = check_law(alg, laws[i]);
    r.add("law " + std::to_string(i), to_string(alg.signature(), laws[i]) + (rep.pass ? " holds" : " fails"));
    if (!rep.pass && r.pass) {
      r.pass = false;
      r.witnesses.push_back(describe_witness(alg, laws[i], rep.witness));
    }
  }
}

std::string convert(const Options& o) {
  auto type = type_of(o.file, {FileKind::algebra, FileKind::recognizer, FileKind::dfa, FileKind::omega,
                               FileKind::tree_automaton, FileKind::laws, FileKind::family});
  const bool json = o.to.empty() ? type.json : o.to == "json";
  if (json && (type.kind == FileKind::laws || type.kind == FileKind::family))
    throw InputError("no JSON mirror for " + kind_name(type.kind));
  return loading(o.file, [&](const std::string& s) -> std::string {
    switch (type.kind) {
      case FileKind::algebra: {
        auto a = type.json ? algebra_from_json(s) : parse_algebra(s);
        return json ? algebra_to_json(a) : serialize_algebra(a);
      }
      case FileKind::recognizer: {
        auto a = type.json ? recognizer_from_json(s) : parse_recognizer(s);
        return json ? recognizer_to_json(a) : serialize_recognizer(a);
      }
      case FileKind::dfa: {
        auto a = type.json ? dfa_from_json(s) : parse_dfa(s);
        return json ? dfa_to_json(a) : serialize_dfa(a);
      }
      case FileKind::omega: {
        auto a = type.json ? omega_from_json(s) : parse_omega(s);
        return json ? omega_to_json(a) : serialize_omega(a);
      }
      case FileKind::tree_automaton: {
        auto a = type.json ? tree_automaton_from_json(s) : parse_tree_automaton(s);
        return json ? tree_automaton_to_json(a) : serialize_tree_automaton(a);
      }
      default: return reformat(type, s);
    }
  });
}

void cmd_validate(const Options& o, Report& r) {
  auto type = type_of(o.file, {FileKind::algebra, FileKind::recognizer, FileKind::dfa, FileKind::omega,
                               FileKind::tree_automaton, FileKind::laws, FileKind::family});
  r.add("kind", kind_name(type.kind) + (type.json ? " (json)" : ""));
  std::optional<FiniteAlgebra> fallback;
  if (!o.alg.empty()) fallback = load_algebra(o.alg);
  const Signature* sig = fallback ? &fallback->signature() : nullptr;
  auto text = loading(o.file, [](const std::string& s) { return s; });
  auto again = loading(o.file, [&](const std::string& s) { return reformat(type, s, sig); });
  r.add("canonical", again == text ? "yes" : "no");
  std::optional<FiniteAlgebra> alg;
  if (type.kind == FileKind::algebra || type.kind == FileKind::recognizer) alg = load_algebra(o.file);
  if (type.kind == FileKind::omega) {
    alg = *load_omega(o.file).rec.algebra;
    try {
      require_wilke(*alg);
    } catch (const AlgebraError& e) {
      throw CheckFailed(e.what(), {});
    }
  }
  if (type.kind == FileKind::tree_automaton) {
    alg = *compile_tree_automaton(load_ta(o.file)).algebra;
    try {
      require_tree_algebra(*alg);
    } catch (const AlgebraError& e) {
      throw CheckFailed(e.what(), {});
    }
  }
  if (!o.preset.empty()) {
    if (!alg) throw InputError("--preset needs an algebra");
    require_preset(*alg, o.preset);
    r.add("preset", o.preset + " holds");
  }
}

// .dfa files stand for their syntactic monoids, other recognizers for the
// algebra their letters generate.
std::vector<Recognizer> generators(const std::vector<std::string>& paths, bool ordered) {
  std::vector<Recognizer> gens;
  for (const auto& p : paths) {
    if (type_of(p, {FileKind::dfa, FileKind::recognizer, FileKind::omega, FileKind::tree_automaton}).kind ==
        FileKind::dfa)
      gens.push_back(canonical_generated(syntactic_monoid(compile_dfa(load_dfa(p), ordered)).recognizer));
    else
      gens.push_back(as_generated(load_recognizer(p, ordered)));
  }
  return gens;
}

void cmd_ideal(const Options& o, Report& r) {
  auto gens = generators(o.gens, o.cfg.ordered);
  if (gens.empty()) throw CLI::ValidationError("give at least one generator with --gens");
  r.add("bound", std::to_string(o.cfg.bound));
  describe_ideal(r, generate_local_pseudovariety(gens, o.cfg.bound));
}

struct FamilyInput {
  std::vector<Recognizer> langs;
  ClosureOptions opts;
};

FamilyInput family_input(const Options& o) {
  FamilyInput in;
  bool ordered = o.cfg.ordered;
  std::optional<std::string> cls = o.cfg.morphism_class;
  in.opts.mode = o.cfg.mode;
  if (!o.family.empty()) {
    auto f = load_family(o.family);
    ordered = ordered || f.ordered;
    if (!o.mode_name) in.opts.mode = f.ordered ? ClosureMode::positive : f.mode;
    if (!cls) cls = f.morphism_class;
    for (const auto& d : f.members) in.langs.push_back(compile_dfa(d, ordered));
  }
  for (const auto& p : o.seeds) {
    if (type_of(p, {FileKind::family, FileKind::dfa, FileKind::recognizer}).kind != FileKind::family) continue;
    auto f = load_family(p);
    ordered = ordered || f.ordered;
    if (!o.mode_name) in.opts.mode = f.ordered ? ClosureMode::positive : f.mode;
    if (!cls) cls = f.morphism_class;
    for (const auto& d : f.members) in.langs.push_back(compile_dfa(d, ordered));
  }
  for (const auto& p : o.seeds)
    if (detect_file_type(p)->kind != FileKind::family) in.langs.push_back(load_recognizer(p, ordered));
  for (const auto& p : o.dfas) in.langs.push_back(compile_dfa(load_dfa(p), ordered));
  for (const auto& p : o.recs) in.langs.push_back(load_recognizer(p, ordered));
  if (in.langs.empty()) throw CLI::ValidationError("give --family, --seed, --dfa or --rec");
  if (ordered && in.opts.mode == ClosureMode::boolean)
    throw CLI::ValidationError("boolean closure needs the unordered regime");
  if (cls) in.opts.preimage_class = MorphismClass::by_name(*cls);
  in.opts.all_morphisms = o.all_morphisms;
  in.opts.max_image_length = o.max_image_length;
  return in;
}

void cmd_closure(const Options& o, Report& r) {
  auto in = family_input(o);
  r.add("mode", in.opts.mode == ClosureMode::boolean ? "boolean" : "positive");
  r.add("preimages", in.opts.all_morphisms ? "all morphisms"
                     : in.opts.preimage_class ? in.opts.preimage_class->name
                                              : "none");
  describe_family(r, close_language_family(in.langs, in.opts));
}

void cmd_roundtrip(const Options& o, Report& r) {
  RoundtripReport rep;
  if (!o.gens.empty()) {
    rep = roundtrip_from_generators(generators(o.gens, o.cfg.ordered), o.cfg.bound, o.cfg.mode);
  } else {
    auto in = family_input(o);
    rep = roundtrip_from_languages(in.langs, o.cfg.bound, in.opts);
  }
  r.add("bound", std::to_string(o.cfg.bound));
  r.add("ideal", std::to_string(rep.ideal_size) + (rep.ideal_fixed ? " fixed" : " moved"));
  r.add("family", std::to_string(rep.family_size) + (rep.family_fixed ? " fixed" : " moved"));
  r.truncated = rep.truncated;
  r.pass = rep.pass();
  if (!rep.mismatch.empty()) r.witnesses.push_back(rep.mismatch);
  if (rep.truncated && rep.mismatch.empty()) r.witnesses.push_back("size bound reached");
}

void report_reduction(Report& r, const Recognizer& before, const RecognizerQuotient& q, const SortSubset& s0) {
  r.add("before", labels_of(*before.algebra));
  r.add("after", labels_of(*q.recognizer.algebra));
  auto check = is_reduced(q.recognizer, default_presentation(q.recognizer.algebra), s0);
  r.add("reduced", check.reduced ? "yes" : "no");
  if (!check.reduced) {
    r.pass = false;
    auto [s, a, b] = *check.unseparated;
    r.witnesses.push_back("s" + std::to_string(s) + "#" + std::to_string(a) + "(" + q.recognizer.algebra->label(s, a) +
                          ") s" + std::to_string(s) + "#" + std::to_string(b) + "(" +
                          q.recognizer.algebra->label(s, b) + ")");
  }
  set_body(r, q.recognizer);
}

void cmd_reduce(const Options& o, Report& r) {
  need_one({{"--omega", &o.omega}, {"--ta", &o.ta}, {"--rec", &o.rec}});
  Recognizer rec = !o.omega.empty() ? load_omega(o.omega).rec
                   : !o.ta.empty()  ? compile_tree_automaton(load_ta(o.ta))
                                    : load_recognizer(o.rec, o.cfg.ordered);
  SortSubset s0;
  if (!o.s0.empty())
    s0 = sorts_named(*rec.algebra, o.s0);
  else if (!o.omega.empty())
    s0 = {1};
  else if (!o.ta.empty())
    s0 = {1};
  else
    throw CLI::ValidationError("--s0 is required for --rec");
  auto [t, inc] = trim(rec);
  auto q = reduce_quotient(t, default_presentation(t.algebra), s0);
  report_reduction(r, t, q, s0);
}

void cmd_omega_syntactic(const Options& o, Report& r) {
  auto om = load_omega(o.omega);
  auto q = o.reduced ? syntactic_reduced_omega(om) : syntactic_omega_semigroup(om);
  r.add("elements", labels_of(*q.recognizer.algebra));
  set_body(r, q.recognizer);
}

void cmd_omega_member(const Options& o, Report& r) {
  auto om = load_omega(o.omega);
  need_one({{"--lasso", &o.lasso}, {"--word", &o.word}});
  const auto alpha = alphabet_of(om.rec);
  bool in = false;
  if (!o.lasso.empty()) {
    auto l = parse_lasso(alpha, o.lasso);
    auto v = evaluate_lasso(om.rec, l);
    r.add("value", "s1#" + std::to_string(v) + "(" + om.rec.algebra->label(1, v) + ")");
    in = lasso_membership(om, l);
  } else {
    auto w = parse_word(alpha, o.word);
    auto v = evaluate_plus(om.rec, w);
    r.add("value", "s0#" + std::to_string(v) + "(" + om.rec.algebra->label(0, v) + ")");
    in = finite_membership(om, w);
  }
  r.add("member", in ? "yes" : "no");
  r.pass = in;
}

void cmd_tree_syntactic(const Options& o, Report& r) {
  auto rec = compile_tree_automaton(load_ta(o.ta));
  auto q = syntactic_reduced_tree_algebra(rec);
  r.add("elements", labels_of(*q.recognizer.algebra));
  set_body(r, q.recognizer);
}

LabeledTree tree_arg(const std::string& text, const char* what) {
  try {
    return parse_tree(text);
  } catch (const ParseError& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

void cmd_tree_derivative(const Options& o, Report& r) {
  auto rec = compile_tree_automaton(load_ta(o.ta));
  if (o.context.empty()) throw CLI::ValidationError("--context is required");
  auto d = context_derivative(rec, tree_arg(o.context, "context"));
  if (!o.tree.empty()) {
    bool in = tree_membership(d, tree_arg(o.tree, "tree"));
    r.add("member", in ? "yes" : "no");
    r.pass = in;
  }
  set_body(r, d);
}

void cmd_tree_member(const Options& o, Report& r) {
  auto ta = load_ta(o.ta);
  if (o.tree.empty()) throw CLI::ValidationError("--tree is required");
  auto rec = compile_tree_automaton(ta);
  auto t = tree_arg(o.tree, "tree");
  auto v = evaluate_tree(rec, t);
  r.add("value", "s1#" + std::to_string(v) + "(" + rec.algebra->label(1, v) + ")");
  bool in = tree_membership(rec, t);
  r.add("member", in ? "yes" : "no");
  r.pass = in;
}

}  // namespace

int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err, Report* report) {
  Options o;
  o.cfg.bound = default_bound();
  Report r;
  std::function<void(const Options&, Report&)> run;

  CLI::App app{"Finite algebras, recognizers and language families", "algvar"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_flag("--json", o.cfg.json, "JSON report");
  app.add_flag("--timing", o.cfg.timing, "Include elapsed time");
  app.add_flag("--ordered", o.cfg.ordered, "Ordered regime");
  app.add_option("--bound", o.cfg.bound, "Size bound (default ALGVAR_BOUND or 8)");
  app.add_option("--mode", o.mode_name, "Closure mode")->check(CLI::IsMember({"boolean", "positive"}));
  app.add_option("--class", o.cfg.morphism_class, "Morphism class")
      ->check(CLI::IsMember({"all", "non-erasing", "length-preserving"}));
  app.add_option("-o,--output", o.cfg.output, "Write the report to a file");

  auto sub = [&](CLI::App* parent, const std::string& name, const std::string& help, auto fn) {
    auto* c = parent->add_subcommand(name, help);
    c->callback([&r, &run, fn, name, parent] {
      r.command = parent->get_name() == "algvar" ? name : parent->get_name() + " " + name;
      run = fn;
    });
    return c;
  };

  auto* c = sub(&app, "syntactic", "Syntactic monoid or algebra", cmd_syntactic);
  c->add_option("--dfa", o.dfa);
  c->add_option("--rec", o.rec);

  c = sub(&app, "derivative", "Left or right derivative of a word language", cmd_derivative);
  c->add_option("--dfa", o.dfa);
  c->add_option("--rec", o.rec);
  c->add_option("--side", o.side)->check(CLI::IsMember({"left", "right"}));
  c->add_option("--word", o.word, "Word to derive by");
  c->add_option("--test", o.test, "Test membership in the result");

  c = sub(&app, "preimage", "Preimage under a substitution", cmd_preimage);
  c->add_option("--dfa", o.dfa);
  c->add_option("--rec", o.rec);
  c->add_option("--map", o.map, "Substitution such as c=ab,d=");
  c->add_option("--test", o.test, "Test membership in the result");

  c = sub(&app, "law", "Check laws on a finite algebra", cmd_law);
  c->add_option("--alg", o.alg);
  c->add_option("--law", o.laws);
  c->add_option("--laws", o.laws_file);
  c->add_option("--preset", o.preset);
  c->add_option("--validate", o.validate, "Require a preset before checking");

  c = sub(&app, "validate", "Parse a file and check it", cmd_validate);
  c->add_option("file", o.file)->required();
  c->add_option("--preset", o.preset);
  c->add_option("--alg", o.alg, "Signature source for law files without a header");

  bool converting = false;
  auto* conv = app.add_subcommand("convert", "Print a file in canonical text or JSON form");
  conv->add_option("file", o.file)->required();
  conv->add_option("--to", o.to)->check(CLI::IsMember({"text", "json"}));
  conv->callback([&] { converting = true; });

  c = sub(&app, "ideal", "Local pseudovariety generated by algebras", cmd_ideal);
  c->add_option("--gens", o.gens, "Generators: .dfa files (syntactic monoids) or generated .rec files");

  c = sub(&app, "closure", "Closure of a language family", cmd_closure);
  c->add_option("--family", o.family);
  c->add_option("--dfa", o.dfas);
  c->add_option("--rec", o.recs);
  c->add_flag("--all-morphisms", o.all_morphisms);
  c->add_option("--max-image-length", o.max_image_length);

  c = sub(&app, "roundtrip", "Check the ideal and family round trip", cmd_roundtrip);
  c->add_option("--family", o.family);
  c->add_option("--dfa", o.dfas);
  c->add_option("--rec", o.recs);
  c->add_option("--gens", o.gens, "Generators instead of languages");
  c->add_option("--seed", o.seeds, "Seed files: .family, .dfa or .rec");
  c->add_flag("--all-morphisms", o.all_morphisms);
  c->add_option("--max-image-length", o.max_image_length);

  c = sub(&app, "reduce", "Reduced quotient", cmd_reduce);
  c->add_option("--omega", o.omega);
  c->add_option("--ta", o.ta);
  c->add_option("--rec", o.rec);
  c->add_option("--s0", o.s0, "Sorts kept injective");

  auto* om = app.add_subcommand("omega", "Omega-word recognizers");
  om->require_subcommand(1);
  c = sub(om, "syntactic", "Syntactic omega-semigroup", cmd_omega_syntactic);
  c->add_option("--omega,--rec", o.omega)->required();
  c->add_flag("--reduced", o.reduced);
  c = sub(om, "member", "Lasso or finite word membership", cmd_omega_member);
  c->add_option("--omega,--rec", o.omega)->required();
  c->add_option("--lasso", o.lasso, "u;v");
  c->add_option("--word", o.word);

  auto* tr = app.add_subcommand("tree", "Tree automata");
  tr->require_subcommand(1);
  c = sub(tr, "syntactic", "Syntactic reduced tree algebra", cmd_tree_syntactic);
  c->add_option("--ta", o.ta)->required();
  c = sub(tr, "derivative", "Context derivative", cmd_tree_derivative);
  c->add_option("--ta", o.ta)->required();
  c->add_option("--context", o.context);
  c->add_option("--tree", o.tree, "Test membership in the result");
  c = sub(tr, "member", "Tree membership", cmd_tree_member);
  c->add_option("--ta", o.ta)->required();
  c->add_option("--tree", o.tree);

  // first word that is neither a flag nor a global option value
  for (std::size_t i = 0; i < argv.size(); ++i) {
    const auto& a = argv[i];
    if (a == "--bound" || a == "--mode" || a == "--class" || a == "-o" || a == "--output") {
      ++i;
      continue;
    }
    if (a.empty() || a[0] == '-') continue;
    if (!app.get_subcommand_no_throw(a)) {
      err << "error: unknown subcommand '" << a << "'\n";
      return 2;
    }
    break;
  }

  std::vector<std::string> args{"algvar"};
  args.insert(args.end(), argv.begin(), argv.end());
  std::vector<char*> cargs;
  for (auto& a : args) cargs.push_back(a.data());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  if (converting) {
    try {
      out << convert(o);
      return 0;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
  }

  if (o.mode_name) o.cfg.mode = *o.mode_name == "boolean" ? ClosureMode::boolean : ClosureMode::positive;
  else if (o.cfg.ordered) o.cfg.mode = ClosureMode::positive;

  int code = 0;
  const auto start = std::chrono::steady_clock::now();
  try {
    o.cfg.validate();
    run(o, r);
    code = r.pass ? 0 : 1;
  } catch (const CheckFailed& e) {
    r.pass = false;
    r.add("error", e.what());
    r.witnesses.insert(r.witnesses.end(), e.witnesses.begin(), e.witnesses.end());
    code = 1;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  const auto text = o.cfg.json ? r.to_json(o.cfg.timing) : r.to_text(o.cfg.timing);
  if (o.cfg.output) {
    std::ofstream f(*o.cfg.output, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << *o.cfg.output << "\n";
      return 2;
    }
    f << text;
  } else {
    out << text;
  }
  if (report) *report = r;
  return code;
}

}  // namespace algvar::cli
