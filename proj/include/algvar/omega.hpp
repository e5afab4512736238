#pragma once

#include <string>
#include <vector>

#include "algvar/presentation.hpp"
#include "algvar/words.hpp"

namespace algvar {

// Sorts plus, omega; ops prod: plus plus -> plus, mix: plus omega -> omega,
// opow: plus -> omega.
Signature wilke_signature(bool ordered = false);

struct OmegaRecognizer {
  enum class Mode { infinitary, omega_only };
  Recognizer rec;
  Mode mode = Mode::infinitary;

  // Checks the signature, and an empty plus accept set in omega_only mode.
  static OmegaRecognizer make(Recognizer rec, Mode mode);

  SortId plus() const { return 0; }
  SortId omega() const { return 1; }
};

struct Lasso {
  Word spoke;
  Word loop;
};

// "u;v" with words split as in parse_word.
Lasso parse_lasso(const std::vector<std::string>& alphabet, std::string_view text);

// Value of a nonempty finite word in the plus sort.
Elem evaluate_plus(const Recognizer& rec, const Word& w);
Elem evaluate_lasso(const Recognizer& rec, const Lasso& l);
bool lasso_membership(const OmegaRecognizer& r, const Lasso& l);
bool finite_membership(const OmegaRecognizer& r, const Word& w);

// Cuts k0 < k1 < ... (count of them) of the sequence prefix.period^w such that
// every block between consecutive cuts has the same idempotent value and the
// cuts extend to an infinite factorization with that property. Returns the
// lexicographically least such prefix of cuts. Values are elements of sort s
// of alg, which must carry an associative product on s.
std::vector<std::size_t> ramsey_factorize(const FiniteAlgebra& alg, SortId s, const std::vector<Elem>& prefix,
                                          const std::vector<Elem>& period, std::size_t count);

enum class OmegaDerivative { plus_left, plus_right, plus_mix, plus_omega, omega_left };

// ctx_word is used by the left/right kinds, ctx_elem (an omega element) by
// plus_mix. The sort that is not derived accepts nothing.
OmegaRecognizer omega_derivative(const OmegaRecognizer& r, OmegaDerivative kind, const Word& ctx_word = {},
                                 Elem ctx_elem = 0);

// Throws AlgebraError naming the failed law when the Wilke identities fail.
void require_wilke(const FiniteAlgebra& alg);

RecognizerQuotient syntactic_omega_semigroup(const OmegaRecognizer& r);
// Syntactic algebra followed by reduction with respect to the omega sort.
RecognizerQuotient syntactic_reduced_omega(const OmegaRecognizer& r);

// Every omega element is t^w or s t^w.
bool is_complete(const FiniteAlgebra& alg);

}  // namespace algvar
