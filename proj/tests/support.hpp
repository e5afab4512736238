#pragma once

#include <string>

#include "algvar/formats.hpp"

#ifndef ALGVAR_FIXTURES
#define ALGVAR_FIXTURES "tests/fixtures"
#endif

inline std::string fixture(const std::string& name) { return std::string(ALGVAR_FIXTURES) + "/" + name; }
inline std::string fixture_text(const std::string& name) { return algvar::read_file(fixture(name)); }
