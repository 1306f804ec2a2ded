#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "mimpv/store.hpp"

namespace mimpv::fd {

enum class SolveResult { Sat, Unsat, Budget };

struct SolveBudget {
  long long max_nodes = 0;  // 0 = unlimited
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SolveStats {
  long long nodes = 0;
};

// Domains at most this large are enumerated value by value; anything wider
// is split at the midpoint so value-independent conflicts die once per half.
inline constexpr Val kEnumLimit = 64;

// Depth-first search with propagation at every step. Variables are labeled
// in the given order (first unfixed one next); ties between halves and
// values always try the smaller side first, so the first solution found is
// minimal in that sense. On Sat the store is left in the solved state; on
// Unsat and Budget it is restored to its entry state.
SolveResult solve(Store& s, const std::vector<VarId>& order, SolveStats& stats,
                  const SolveBudget& budget = {});

// Every solution projected onto `vars`, in ascending lexicographic order.
// Intended for small test problems; stops once `limit` tuples are found.
std::vector<std::vector<Val>> enumerate_solutions(
    Store& s, const std::vector<VarId>& vars, std::size_t limit);

}  // namespace mimpv::fd
