#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algvar/omega.hpp"
#include "algvar/term.hpp"
#include "algvar/trees.hpp"
#include "algvar/variety.hpp"
#include "algvar/words.hpp"

namespace algvar {

// Text parsers throw ParseError with a line and column for syntax errors and
// AlgebraError for semantic ones (non-total tables, non-monotone ops, ...).
// Serializers emit the canonical form, which parses back to the same value.

FiniteAlgebra parse_algebra(std::string_view text);
std::string serialize_algebra(const FiniteAlgebra& alg);

Recognizer parse_recognizer(std::string_view text);
std::string serialize_recognizer(const Recognizer& rec);

Dfa parse_dfa(std::string_view text);
std::string serialize_dfa(const Dfa& d);

OmegaRecognizer parse_omega(std::string_view text);
std::string serialize_omega(const OmegaRecognizer& r);

TreeAutomaton parse_tree_automaton(std::string_view text);
std::string serialize_tree_automaton(const TreeAutomaton& ta);

// Built-in signatures for law files: monoid, omega, tree, stabilization.
Signature named_signature(std::string_view name, bool ordered = false);

struct LawFile {
  std::optional<std::string> signature_name;  // from a "signature" header
  bool ordered = false;
  Signature signature;
  std::vector<Law> laws;
};

// The header "signature NAME [ordered]" is optional; without it the fallback
// signature is used.
LawFile parse_law_file(std::string_view text, const Signature* fallback = nullptr);
std::string serialize_law_file(const LawFile& f);

struct FamilyFile {
  ClosureMode mode = ClosureMode::boolean;
  bool ordered = false;
  std::optional<std::string> morphism_class;
  std::vector<Dfa> members;
};

FamilyFile parse_family(std::string_view text);
std::string serialize_family(const FamilyFile& f);

// JSON mirrors of the text formats.
std::string algebra_to_json(const FiniteAlgebra& alg);
FiniteAlgebra algebra_from_json(std::string_view text);
std::string recognizer_to_json(const Recognizer& rec);
Recognizer recognizer_from_json(std::string_view text);
std::string dfa_to_json(const Dfa& d);
Dfa dfa_from_json(std::string_view text);
std::string omega_to_json(const OmegaRecognizer& r);
OmegaRecognizer omega_from_json(std::string_view text);
std::string tree_automaton_to_json(const TreeAutomaton& ta);
TreeAutomaton tree_automaton_from_json(std::string_view text);

enum class FileKind { algebra, recognizer, dfa, omega, tree_automaton, laws, family };

struct FileType {
  FileKind kind;
  bool json = false;
};

// By extension: .alg .rec .dfa .omega .ta .laws .family, optionally followed
// by .json.
std::optional<FileType> detect_file_type(std::string_view path);
std::string kind_name(FileKind k);

std::string read_file(const std::string& path);

// Parses and serializes again in the same format. Law files without a header
// need the fallback signature.
std::string reformat(FileType type, std::string_view text, const Signature* fallback = nullptr);

}  // namespace algvar
