#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algvar/presentation.hpp"

namespace algvar {

// Sorts l, t, c; ops iota, kappa, lambda, rho, eta, sigma.
Signature tree_signature(bool ordered = false);

// Full binary tree; a leaf has no children, an inner node two. A hole is a
// leaf with hole set and an empty label.
struct LabeledTree {
  std::string label;
  std::vector<LabeledTree> children;
  bool hole = false;

  std::size_t depth() const;
  std::size_t holes() const;
  std::string to_string() const;
  friend bool operator==(const LabeledTree&, const LabeledTree&) = default;
};

// Term syntax a(b,c) with '*' for the hole.
LabeledTree parse_tree(std::string_view text);
// Every hole-free tree over the alphabet of depth at most d; a leaf has depth 1.
std::vector<LabeledTree> all_trees(const std::vector<std::string>& alphabet, std::size_t depth);
// Every tree with exactly one hole, of depth at most d; includes the bare hole.
std::vector<LabeledTree> all_contexts(const std::vector<std::string>& alphabet, std::size_t depth);

struct TreeAutomaton {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::vector<std::size_t> leaf;                           // leaf[a]
  std::vector<std::vector<std::vector<std::size_t>>> node;  // node[a][q][r]
  std::vector<bool> finals;

  void validate() const;
  std::size_t letter(std::string_view name) const;
  std::size_t run(const LabeledTree& t) const;
  bool accepts(const LabeledTree& t) const { return finals[run(t)]; }
};

// Recognizer with l = letters, t = reachable states, c = closure of the one-step
// context maps under composition. Accepts on sort t only.
Recognizer compile_tree_automaton(const TreeAutomaton& ta);

Elem evaluate_tree(const Recognizer& rec, const LabeledTree& t);
// Element of sort c; nullopt for the bare hole.
std::optional<Elem> evaluate_context(const Recognizer& rec, const LabeledTree& c);
bool tree_membership(const Recognizer& rec, const LabeledTree& t);

Recognizer context_derivative(const Recognizer& rec, const LabeledTree& c);

// Throws AlgebraError naming the failed law when the tree equations fail.
void require_tree_algebra(const FiniteAlgebra& alg);

// Syntactic algebra by elementary translations, then reduction with respect to t.
RecognizerQuotient syntactic_reduced_tree_algebra(const Recognizer& rec);

}  // namespace algvar
