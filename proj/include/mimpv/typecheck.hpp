#pragma once

#include <string>

#include "mimpv/ast.hpp"
#include "mimpv/diagnostics.hpp"

namespace mimpv::lang {

// Rewrites every for-loop into { init; while (cond) { body; step } }.
void desugar(Program& p);
void desugar(Unit& u);

// Desugars, then resolves scopes, annotates expression types and enforces
// the language rules:
//   - ints and int arrays only; arrays exist as parameters, never locals
//   - every variable is definitely assigned before it is read
//   - int functions return on every path
//   - \result, ==>, \forall and \alldifferent appear in contracts only
//     (\result only under ensures)
//   - called functions must exist, match their argument list, be non-void,
//     not write to any array parameter, and not be (mutually) recursive
// Throws CheckError at the first violation.
void typecheck(Unit& u, const std::string& file = "<input>");
void typecheck(Program& p, const std::string& file = "<input>");

}  // namespace mimpv::lang
