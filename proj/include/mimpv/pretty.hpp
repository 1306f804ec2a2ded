#pragma once

#include <string>

#include "mimpv/ast.hpp"

namespace mimpv::lang {

// Canonical source form. Parsing the output of pretty() yields an AST equal
// (modulo positions) to the one printed; increments reappear as plain
// assignments and multiple contract clauses merge into one.
std::string pretty(const Expr& e);
std::string pretty(const Formula& f);
std::string pretty(const Stmt& s, int indent = 0);
std::string pretty(const Program& p);
std::string pretty(const Unit& u);

}  // namespace mimpv::lang
