#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "algvar/algebra.hpp"

namespace algvar {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }
  std::size_t line_;
  std::size_t column_;
};

// Term over a signature extended with a formal omega power on every sort that
// carries an associative binary product.
struct Term {
  enum class Kind { var, apply, omega };
  Kind kind = Kind::var;
  std::size_t id = 0;  // variable index or op id
  SortId sort = 0;
  std::vector<Term> args;

  static Term var(std::size_t index, SortId sort) { return Term{Kind::var, index, sort, {}}; }
  std::size_t depth() const;
  friend bool operator==(const Term&, const Term&) = default;
};

enum class LawRelation { eq, leq };

struct Equation {
  Term lhs;
  Term rhs;
};

struct Law {
  std::vector<std::string> var_names;
  std::vector<SortId> var_sorts;
  std::vector<Equation> premises;
  Term lhs;
  Term rhs;
  LawRelation relation = LawRelation::eq;

  bool is_quasi() const { return !premises.empty(); }
};

Law parse_law(const Signature& sig, std::string_view text);
std::string to_string(const Signature& sig, const Law& law);
// One law per line; blank lines and lines starting with '#' are skipped.
std::vector<Law> parse_laws(const Signature& sig, std::string_view text);
std::string serialize_laws(const Signature& sig, const std::vector<Law>& laws);

Elem eval_term(const FiniteAlgebra& alg, const Term& term, std::span<const Elem> env);

// Values of term under every assignment of the given variable sorts, in
// odometer order with the first variable most significant.
std::vector<Elem> evaluate_all(const FiniteAlgebra& alg, const Term& term,
                               const std::vector<SortId>& var_sorts);

struct LawReport {
  bool pass = true;
  std::optional<std::size_t> failed_law;
  std::vector<Elem> witness;
};

LawReport check_law(const FiniteAlgebra& alg, const Law& law);
LawReport validate_laws(const FiniteAlgebra& alg, const std::vector<Law>& laws);
std::string describe_witness(const FiniteAlgebra& alg, const Law& law, const std::vector<Elem>& env);

namespace presets {
std::vector<Law> semigroup(const Signature& sig);
std::vector<Law> monoid(const Signature& sig);
// Needs the algebra because (x^k)^w = x^w ranges over k <= |plus|.
std::vector<Law> wilke(const FiniteAlgebra& alg);
std::vector<Law> tree(const Signature& sig);
std::vector<Law> stabilization(const Signature& sig);
std::vector<Law> by_name(const FiniteAlgebra& alg, std::string_view name);
}  // namespace presets

}  // namespace algvar
