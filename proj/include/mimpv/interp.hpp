// Concrete big-step interpreter for the mini language.
//
// Executes a program on fully concrete inputs with mathematical integer
// semantics bounded by the store's default domain: any intermediate
// value leaving it is a trap, not a wraparound. Used by the input
// enumeration oracle and to re-execute verifier witnesses.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mimpv/ast.hpp"
#include "mimpv/domain.hpp"

namespace mimpv::lang {

struct ConcreteInput {
  std::map<std::string, fd::Val> scalars;
  std::map<std::string, std::vector<fd::Val>> arrays;
};

// A call executed in the top frame: callee name and the concrete
// arguments at entry, keyed by the callee's formal parameter names.
struct CallEvent {
  std::string callee;
  std::map<std::string, fd::Val> scalars;
  std::map<std::string, std::vector<fd::Val>> arrays;
};

struct InterpResult {
  enum class Status {
    Ok,
    OutOfBounds,    // array access outside [0, len)
    OutOfDomain,    // intermediate value outside the default domain
    DivideByZero,
    StepLimit,
  };
  Status status = Status::Ok;
  std::optional<fd::Val> result;
  std::map<std::string, std::vector<fd::Val>> final_arrays;
  // Branch tests evaluated in the top frame, in order (if and while
  // conditions; callee-internal decisions are not recorded).
  std::vector<std::uint8_t> decisions;
  std::vector<CallEvent> calls;
  long long steps = 0;
};

InterpResult interpret(const Unit& unit, const Program& prog,
                       const ConcreteInput& in,
                       long long step_limit = 5'000'000);

// Concrete truth of a contract formula. arrays hold the state the
// formula talks about (entry state for requires, final state for
// ensures). Returns nullopt when evaluation itself traps (division by
// zero or an out-of-range array access inside the formula).
std::optional<bool> eval_formula(
    const Formula& f, const std::map<std::string, fd::Val>& scalars,
    const std::map<std::string, std::vector<fd::Val>>& arrays,
    std::optional<fd::Val> result);

}  // namespace mimpv::lang
