#pragma once

#include <string>

#include "mimpv/ast.hpp"
#include "mimpv/diagnostics.hpp"
#include "mimpv/lexer.hpp"

namespace mimpv::lang {

// Parses a whole source file (one or more annotated functions).
// Throws ParseError with a file:line:col diagnostic on the first error.
Unit parse_unit(const std::string& source, const std::string& file);

// Convenience for sources holding exactly one function.
Program parse_program(const std::string& source, const std::string& file);

}  // namespace mimpv::lang
