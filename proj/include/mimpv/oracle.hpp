// Exhaustive concrete conformance check. Every input tuple within the
// given bounds is executed on the interpreter; the first one that
// passes requires and then breaks the contract is reported. Slow by
// design, but its verdict needs no trust in the solver, which makes it
// the reference the search engine is compared against on small boxes.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "mimpv/interp.hpp"

namespace mimpv::lang {

struct OracleParams {
  std::map<std::string, int> array_len;
  // per-parameter value bounds; array slots share their array's entry
  std::map<std::string, std::pair<fd::Val, fd::Val>> bounds;
  std::pair<fd::Val, fd::Val> default_bounds{0, 4};
  long long cap = 10'000'000;  // refuse boxes with more tuples than this
  long long step_limit = 5'000'000;
};

struct OracleViolation {
  ConcreteInput input;
  std::string kind;  // "ensures" or "index"
  std::optional<fd::Val> result;
};

struct OracleReport {
  bool cap_exceeded = false;
  long long combinations = 0;  // tuples in the box (saturating)
  long long checked = 0;       // tuples that passed requires and ran
  std::optional<OracleViolation> violation;
};

// Enumerates ascending, last parameter dimension fastest. Inputs whose
// execution traps outside the program's control (value leaving the
// domain, step limit) are skipped rather than counted against the
// contract; an out-of-bounds array access is a violation. Throws
// ConfigError for a missing array length or inverted bounds.
OracleReport oracle_check(const Unit& unit, const Program& prog,
                          const OracleParams& params);

}  // namespace mimpv::lang
