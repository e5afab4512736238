#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "algvar/relation.hpp"

namespace algvar {

using OpId = std::size_t;

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OpSymbol {
  std::string name;
  std::vector<SortId> inputs;
  SortId output = 0;
  friend bool operator==(const OpSymbol&, const OpSymbol&) = default;
};

class Signature {
 public:
  Signature() = default;
  Signature(std::vector<std::string> sorts, std::vector<OpSymbol> ops, bool ordered = false);

  const std::vector<std::string>& sorts() const { return sorts_; }
  const std::vector<OpSymbol>& ops() const { return ops_; }
  const OpSymbol& op(OpId o) const { return ops_[o]; }
  std::size_t num_sorts() const { return sorts_.size(); }
  std::size_t num_ops() const { return ops_.size(); }
  bool ordered() const { return ordered_; }

  std::optional<SortId> find_sort(std::string_view name) const;
  SortId sort_id(std::string_view name) const;
  std::optional<OpId> find_op(std::string_view name) const;
  OpId op_id(std::string_view name) const;
  Signature with_order(bool ordered) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<std::string> sorts_;
  std::vector<OpSymbol> ops_;
  bool ordered_ = false;
};

// Calls f(tuple) for every tuple in the product of 0..radix-1, first
// coordinate most significant. No calls when some radix is zero.
template <class F>
void for_each_tuple(const std::vector<std::size_t>& radices, F&& f) {
  for (auto r : radices)
    if (r == 0) return;
  std::vector<Elem> t(radices.size(), 0);
  while (true) {
    f(std::span<const Elem>(t));
    std::size_t i = t.size();
    while (i > 0) {
      --i;
      if (++t[i] < radices[i]) break;
      t[i] = 0;
      if (i == 0) return;
    }
    if (t.empty()) return;
  }
}

class FiniteAlgebra {
 public:
  // tables[o] lists outputs in row-major order over the input sorts. An empty
  // order means the discrete order; it must be empty for unordered signatures.
  FiniteAlgebra(Signature sig, std::vector<std::vector<std::string>> labels,
                std::vector<std::vector<Elem>> tables, SortedRelation order = {});

  const Signature& signature() const { return sig_; }
  bool ordered() const { return sig_.ordered(); }
  std::size_t num_sorts() const { return labels_.size(); }
  std::size_t size(SortId s) const { return labels_[s].size(); }
  std::vector<std::size_t> sizes() const;
  std::size_t total_size() const;
  const std::string& label(SortId s, Elem a) const { return labels_[s][a]; }
  const std::vector<std::string>& labels(SortId s) const { return labels_[s]; }
  std::optional<Elem> find_label(SortId s, std::string_view label) const;
  Elem element(SortId s, std::string_view label) const;

  std::vector<std::size_t> input_sizes(OpId o) const;
  std::size_t offset(OpId o, std::span<const Elem> args) const;
  Elem apply(OpId o, std::span<const Elem> args) const { return tables_[o][offset(o, args)]; }
  Elem apply(OpId o, std::initializer_list<Elem> args) const {
    return apply(o, std::span<const Elem>(args.begin(), args.size()));
  }
  const std::vector<Elem>& table(OpId o) const { return tables_[o]; }
  const std::vector<std::vector<Elem>>& tables() const { return tables_; }

  bool leq(SortId s, Elem a, Elem b) const { return order_[s](a, b); }
  const Relation& order(SortId s) const { return order_[s]; }
  const SortedRelation& orders() const { return order_; }

  friend bool operator==(const FiniteAlgebra&, const FiniteAlgebra&) = default;

 private:
  Signature sig_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<Elem>> tables_;
  SortedRelation order_;
};

using AlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

template <class... Args>
AlgebraPtr make_algebra(Args&&... args) {
  return std::make_shared<const FiniteAlgebra>(std::forward<Args>(args)...);
}

bool valid_label(std::string_view label);

struct Morphism {
  AlgebraPtr source;
  AlgebraPtr target;
  std::vector<std::vector<Elem>> maps;

  Elem operator()(SortId s, Elem a) const { return maps[s][a]; }
};

// Validates the homomorphism (and monotonicity) conditions; throws AlgebraError.
Morphism make_morphism(AlgebraPtr source, AlgebraPtr target, std::vector<std::vector<Elem>> maps);
bool is_homomorphism(const FiniteAlgebra& source, const FiniteAlgebra& target,
                     const std::vector<std::vector<Elem>>& maps);
Morphism identity_morphism(AlgebraPtr a);
// g after f
Morphism compose(const Morphism& g, const Morphism& f);
bool is_surjective(const Morphism& m);
bool is_injective(const Morphism& m);
bool is_order_reflecting(const Morphism& m);
Partition kernel(const Morphism& m);
SortedRelation ordered_kernel(const Morphism& m);

// A unary map between two carriers of one algebra.
struct UnaryOp {
  SortId source = 0;
  SortId target = 0;
  std::vector<Elem> map;
  std::string label;
};

// Every a -> op(..., a, ...) with the other arguments fixed, deduplicated by
// (source, target, map); first occurrence wins the label.
std::vector<UnaryOp> translation_maps(const FiniteAlgebra& alg);

bool is_congruence(const FiniteAlgebra& alg, const Partition& p);
bool is_stable_preorder(const FiniteAlgebra& alg, const SortedRelation& r);

struct Quotient {
  AlgebraPtr algebra;
  Morphism projection;
};

Quotient quotient_by(const AlgebraPtr& alg, const Partition& congruence);
Quotient quotient_by(const AlgebraPtr& alg, const SortedRelation& preorder);

struct Subalgebra {
  AlgebraPtr algebra;
  Morphism inclusion;
};

Subalgebra generated_subalgebra(const AlgebraPtr& alg, const std::vector<std::vector<Elem>>& gens);
// Sorted subset closed under all operations, as membership flags per sort.
std::vector<std::vector<char>> closure_of(const FiniteAlgebra& alg,
                                          const std::vector<std::vector<Elem>>& gens);

struct Product {
  AlgebraPtr algebra;
  std::vector<Morphism> projections;
};

Product direct_product(const std::vector<AlgebraPtr>& factors);
Morphism subdirect_product(const Morphism& e0, const Morphism& e1);
std::optional<Morphism> factor_through(const Morphism& e, const Morphism& f);
bool quotient_leq(const Morphism& e0, const Morphism& e1);
// Quotients of a common algebra given by kernels: e0 <= e1 iff ker e1 is inside ker e0.
bool quotient_leq(const Partition& e0, const Partition& e1);

struct Division {
  Morphism inclusion;
  Morphism surjection;
};

std::optional<Division> divides(const AlgebraPtr& a, const AlgebraPtr& b);

std::string canonical_form(const FiniteAlgebra& alg);
bool is_isomorphic(const FiniteAlgebra& a, const FiniteAlgebra& b);

Partition principal_congruence(const FiniteAlgebra& alg, SortId s, Elem a, Elem b);
std::vector<Partition> all_congruences(const FiniteAlgebra& alg);
SortedRelation principal_stable_preorder(const FiniteAlgebra& alg, SortId s, Elem a, Elem b);
std::vector<SortedRelation> all_stable_preorders(const FiniteAlgebra& alg);

// The unique binary operation s x s -> s, if any.
std::optional<OpId> product_op(const Signature& sig, SortId s);
// Unique idempotent in the cyclic subsemigroup generated by x.
Elem idempotent_power(const FiniteAlgebra& alg, SortId s, Elem x);

namespace detail {
bool is_associative(const FiniteAlgebra& alg, OpId mul);
Elem omega_power_unchecked(const FiniteAlgebra& alg, OpId mul, Elem x);
}  // namespace detail

}  // namespace algvar
