#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algvar/presentation.hpp"

namespace algvar {

using Word = std::vector<std::string>;

struct Dfa {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::vector<std::vector<std::size_t>> delta;  // delta[q][letter]
  std::size_t initial = 0;
  std::vector<bool> finals;

  // Checks totality and index ranges; throws AlgebraError.
  void validate() const;
  std::size_t letter(std::string_view name) const;
  std::size_t run(const Word& w) const;
  bool accepts(const Word& w) const { return finals[run(w)]; }
};

// Signature with sort M, a constant "one" and a binary "mul".
Signature monoid_signature(bool ordered = false);

// Transition monoid recognizer. Elements are labeled by their shortlex least
// word, "1" for the identity. The order is discrete when ordered is set.
Recognizer compile_dfa(const Dfa& d, bool ordered = false);

// Splits a word: on whitespace or '.', else into characters when every letter
// of the alphabet is a single character. "", "1" and "ε" denote the empty word
// unless they are letters.
Word parse_word(const std::vector<std::string>& alphabet, std::string_view text);
std::vector<std::string> alphabet_of(const Recognizer& rec);

// Value of w in a one-sorted monoid recognizer.
Elem evaluate_word(const Recognizer& rec, const Word& w);
bool membership(const Recognizer& rec, const Word& w);

enum class Side { left, right };

Recognizer derivative(const Recognizer& rec, Side side, const Word& y);

struct SubstitutionSpec {
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::vector<Word> images;

  // "c=ab,d=" style; target letters split as in parse_word.
  static SubstitutionSpec parse(std::string_view text, const std::vector<std::string>& target);
  Word apply(const Word& w) const;
  std::string to_string() const;
};

Recognizer preimage(const Recognizer& rec, const SubstitutionSpec& g);

// Syntactic (ordered) monoid through the two-sided translations. Trims first.
RecognizerQuotient syntactic_monoid(const Recognizer& rec);

struct AperiodicReport {
  bool aperiodic = true;
  std::optional<Elem> witness;
};

AperiodicReport is_aperiodic(const FiniteAlgebra& monoid);

// Complement of an unordered recognizer's language.
Recognizer complement(const Recognizer& rec);

}  // namespace algvar
