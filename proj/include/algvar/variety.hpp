#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "algvar/presentation.hpp"
#include "algvar/term.hpp"
#include "algvar/words.hpp"

namespace algvar {

// --- profinite laws ------------------------------------------------------

struct ProfiniteReport {
  bool holds = true;
  bool vacuous = false;  // some variable lives in a sort without generators
  std::vector<Elem> witness;
};

// Exhaustive over assignments; ^w is the idempotent power. When generator
// sorts are given, a law with a variable outside them holds vacuously.
ProfiniteReport satisfies_profinite_law(const FiniteAlgebra& alg, const Law& law,
                                        const std::vector<bool>* generator_sorts = nullptr);

// --- generated algebras --------------------------------------------------
// A recognizer with letters but no accepted elements stands for a quotient
// of the free algebra on its letters.

// Drops the accept sets and restricts to the part reached from the letters.
Recognizer as_generated(const Recognizer& rec);

// Renumbers elements in discovery order from the letters and relabels them by
// witness terms. Two generated algebras are isomorphic over the letters iff
// their canonical forms have the same key.
Recognizer canonical_generated(const Recognizer& g);
std::string quotient_key(const Recognizer& g);

struct Pairing {
  Recognizer rec;  // canonical; accept sets empty
  std::vector<std::vector<Elem>> first, second;
};

// Subalgebra of the product generated by the letter pairs. Letters are
// matched by name.
Pairing pair_generated(const Recognizer& a, const Recognizer& b);

// Quotients by every congruence (stable preorder when ordered), canonical.
std::vector<Recognizer> all_quotients(const Recognizer& g);

// --- local pseudovarieties -----------------------------------------------

struct LocalPseudovariety {
  std::vector<std::string> alphabet;
  std::vector<Recognizer> members;  // canonical, deduplicated
  std::set<std::string> keys;
  std::size_t bound = 0;
  bool truncated = false;
};

// Closure of gens under quotients and pairings; algebras with a sort larger
// than bound are dropped and reported through truncated.
LocalPseudovariety generate_local_pseudovariety(const std::vector<Recognizer>& gens, std::size_t bound);
bool same_ideal(const LocalPseudovariety& a, const LocalPseudovariety& b);

// --- language families ---------------------------------------------------

struct LanguageFamily {
  Recognizer shared;                  // generated, canonical
  std::vector<SortedSubset> members;  // sorted, distinct
  bool truncated = false;
};

// Pulls every language back to the pairing of all recognizers.
LanguageFamily family_of(const std::vector<Recognizer>& langs);
bool same_family(const LanguageFamily& a, const LanguageFamily& b);
// Family members as recognizers on the shared algebra.
std::vector<Recognizer> family_languages(const LanguageFamily& f);

LanguageFamily languages_of(const LocalPseudovariety& v);

struct MorphismClass {
  std::string name;
  std::function<bool(const SubstitutionSpec&)> admits;

  static MorphismClass all();
  static MorphismClass non_erasing();
  static MorphismClass length_preserving();
  static MorphismClass by_name(std::string_view name);
};

enum class ClosureMode { boolean, positive };

struct ClosureOptions {
  ClosureMode mode = ClosureMode::boolean;
  // Preimages under substitutions of the class with images of length at most
  // max_image_length.
  std::optional<MorphismClass> preimage_class;
  // Preimages under every homomorphism, through all letter maps into the
  // shared algebra. Takes precedence over preimage_class.
  bool all_morphisms = false;
  std::size_t max_image_length = 2;
  std::size_t max_shared_size = 64;
};

// Presentation used for derivatives and syntactic algebras: the omega
// presentation for Wilke algebras, elementary translations otherwise.
Presentation default_presentation(const AlgebraPtr& alg);

LanguageFamily close_language_family(const LanguageFamily& f, const ClosureOptions& opts);
LanguageFamily close_language_family(const std::vector<Recognizer>& langs, const ClosureOptions& opts);
LanguageFamily straubing_filter(const std::vector<Recognizer>& langs, const MorphismClass& c,
                                ClosureOptions opts = {});

LocalPseudovariety family_to_pseudovariety(const LanguageFamily& f, std::size_t bound);

struct RoundtripReport {
  bool ideal_fixed = false;
  bool family_fixed = false;
  bool truncated = false;
  std::size_t ideal_size = 0;
  std::size_t family_size = 0;
  std::string mismatch;

  bool pass() const { return ideal_fixed && family_fixed && !truncated; }
};

RoundtripReport roundtrip_from_generators(const std::vector<Recognizer>& gens, std::size_t bound,
                                          ClosureMode mode = ClosureMode::boolean);
RoundtripReport roundtrip_from_languages(const std::vector<Recognizer>& langs, std::size_t bound,
                                         const ClosureOptions& opts = {});

}  // namespace algvar
