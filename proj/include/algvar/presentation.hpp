#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "algvar/algebra.hpp"

namespace algvar {

struct Letter {
  std::string name;
  SortId sort = 0;
  Elem image = 0;
  friend bool operator==(const Letter&, const Letter&) = default;
};

using SortedSubset = std::vector<std::vector<bool>>;

// A finite algebra with a generator map and an accepted subset per sort. The
// same type without accepted elements stands for a generated quotient of the
// free algebra.
struct Recognizer {
  AlgebraPtr algebra;
  std::vector<Letter> letters;
  SortedSubset accept;
  // value of the empty language per sort; always reject
  std::vector<bool> reject_pad;

  // Validates letters and accept sets (up-sets when ordered).
  static Recognizer make(AlgebraPtr algebra, std::vector<Letter> letters, SortedSubset accept);
  static Recognizer generators_only(AlgebraPtr algebra, std::vector<Letter> letters);

  bool accepts(SortId s, Elem a) const { return accept[s][a]; }
  bool generated() const;
  std::optional<std::size_t> find_letter(std::string_view name) const;
  std::size_t letter(std::string_view name) const;
  Recognizer with_accept(SortedSubset accept) const;
};

SortedSubset empty_subset(const FiniteAlgebra& alg);
bool is_up_set(const FiniteAlgebra& alg, const SortedSubset& s);

// Restriction to the subalgebra generated by the letters, with the inclusion.
std::pair<Recognizer, Morphism> trim(const Recognizer& rec);
// Moves letters and accept sets along a surjection; throws if the accept set
// is not saturated by the kernel.
Recognizer transport(const Recognizer& rec, const Morphism& projection);
// Reverses every order and complements the accept sets, so the result
// recognizes the complement language with the up-set convention.
Recognizer order_flip(const Recognizer& rec);

struct Presentation {
  AlgebraPtr base;
  std::vector<UnaryOp> ops;
  bool closed = false;

  // Adds op unless an op with the same source, target and map exists.
  bool add(UnaryOp op);
};

// Set of sort ids.
using SortSubset = std::vector<SortId>;

Presentation elementary_translations(const AlgebraPtr& alg);
inline Presentation elementary_translations(const Recognizer& rec) { return elementary_translations(rec.algebra); }
Presentation omega_presentation(const Recognizer& rec);
Presentation omega_presentation(const AlgebraPtr& alg);
Presentation composition_closure(const Presentation& p);
std::optional<UnaryOp> lift_unary(const Morphism& e, const UnaryOp& u);

// Coarsest partition (greatest preorder) below init stable under every op.
Partition refine_partition(const std::vector<std::size_t>& sizes, const std::vector<UnaryOp>& ops,
                           const Partition& init);
SortedRelation refine_preorder(const std::vector<UnaryOp>& ops, SortedRelation init);

Partition syntactic_congruence(const Recognizer& rec, const Presentation& p);
SortedRelation syntactic_preorder(const Recognizer& rec, const Presentation& p);

struct RecognizerQuotient {
  Recognizer recognizer;
  Morphism projection;
};

// Quotient by the syntactic congruence (preorder when ordered). The
// recognizer must be generated by its letters.
RecognizerQuotient syntactic_algebra(const Recognizer& rec, const Presentation& p);

Partition reduction_congruence(const Recognizer& rec, const Presentation& p, const SortSubset& s0);
SortedRelation reduction_preorder(const Recognizer& rec, const Presentation& p, const SortSubset& s0);
RecognizerQuotient reduce_quotient(const Recognizer& rec, const Presentation& p, const SortSubset& s0);

struct Separation {
  SortId sort;
  Elem a;
  Elem b;
  std::string via;  // composite of presentation labels, innermost last
};

struct ReducedReport {
  bool reduced = true;
  std::optional<std::tuple<SortId, Elem, Elem>> unseparated;
  std::vector<Separation> separators;
};

ReducedReport is_reduced(const Recognizer& rec, const Presentation& p, const SortSubset& s0);

}  // namespace algvar
