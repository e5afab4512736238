#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algvar/variety.hpp"

namespace algvar::cli {

struct SessionConfig {
  std::size_t bound = 8;
  bool ordered = false;
  ClosureMode mode = ClosureMode::boolean;
  std::optional<std::string> morphism_class;
  std::vector<std::string> inputs;
  std::optional<std::string> output;
  bool json = false;
  bool timing = false;

  // Throws std::invalid_argument when the bound is zero or the mode does not
  // fit the regime.
  void validate() const;
};

struct Report {
  std::string command;
  bool pass = true;
  std::vector<std::pair<std::string, std::string>> verdicts;
  std::vector<std::string> witnesses;
  bool truncated = false;
  double elapsed_ms = 0;
  // Payload: canonical text and the JSON mirror (empty when there is none).
  std::string body_text;
  std::string body_json;

  void add(std::string key, std::string value) { verdicts.emplace_back(std::move(key), std::move(value)); }
  std::string to_text(bool timing = false) const;
  std::string to_json(bool timing = false) const;
};

// Default bound: ALGVAR_BOUND if set and valid, else 8.
std::size_t default_bound();

// Runs one command. argv excludes the program name. Exit codes: 0 success,
// 1 checked property failed, 2 usage, parse or input error.
int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err, Report* report = nullptr);

}  // namespace algvar::cli
