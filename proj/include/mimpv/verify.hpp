// Bounded program verification by path exploration over the store.
//
// The engine walks the statement tree depth first. Branch conditions
// translate to constraints; a condition the store already decides is
// forced and consumes no choice point, anything else forks the search
// (then/continue explored before else/exit). Loops unwind decision by
// decision up to a safety limit. At each complete consistent path the
// negated ensures clause is split into cases and each case solved; a
// solution is a concrete counterexample, which is re-executed on the
// interpreter before being reported. Calls are handled modularly: the
// callee's requires must be entailed (its negation unsatisfiable) and
// its ensures is assumed of a fresh result.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mimpv/translate.hpp"

namespace mimpv::lang {

enum class CexKind {
  EnsuresViolation,       // a complete path can violate an ensures conjunct
  IndexViolation,         // an array access can leave [0, len)
  PreconditionViolation,  // a call site does not entail the callee requires
};

const char* cex_kind_name(CexKind k);

// One line of the witness trace: an SSA instance and its solved value
// (or remaining interval, for a variable the search never needed to
// fix). declared_* are the bounds the instance was created with.
struct TraceLine {
  std::string base;
  int version = 0;
  int slot = -1;  // -1 for scalars
  fd::Val declared_lo = 0, declared_hi = 0;
  bool fixed = true;
  fd::Val value = 0;
  fd::Val dom_lo = 0, dom_hi = 0;
};

struct Counterexample {
  CexKind kind = CexKind::EnsuresViolation;
  int violated_case = -1;  // index of the violated top-level conjunct
  int call_index = -1;     // which call along the path, for precondition kinds
  std::string detail;      // callee or array involved, for diagnostics
  std::vector<TraceLine> trace;
  std::map<std::string, fd::Val> inputs;
  std::map<std::string, std::vector<fd::Val>> input_arrays;
  std::optional<fd::Val> result;
  std::vector<std::uint8_t> decisions;  // branch polarities along the path
};

struct Verdict {
  enum class Kind { Verified, Counterexample, ResourceExceeded };
  Kind kind = Kind::Verified;
  long long feasible_paths = 0;
  long long nodes = 0;      // choice points plus labeling nodes
  int max_loop_iters = 0;   // deepest unwinding on any feasible path
  std::string resource;     // which limit tripped, for ResourceExceeded
  std::optional<Counterexample> cex;
};

const char* verdict_name(Verdict::Kind k);

// Verify prog (which must belong to unit and be typechecked) under the
// given instantiation. Throws ConfigError for a bad instantiation.
Verdict verify(const Unit& unit, const Program& prog,
               const InstanceParams& inst);

// The witness trace in its printable form: a "Counter-example found"
// header, one line per SSA instance in creation order.
std::string format_trace(const Counterexample& cex);

}  // namespace mimpv::lang
