#include "mimpv/solve.hpp"

namespace mimpv::fd {

namespace {

VarId pick(Store& s, const std::vector<VarId>& order) {
  VarId wide = -1;
  for (VarId v : order) {
    const Domain& d = s.domain(v);
    if (d.fixed()) continue;
    if (d.size() <= kEnumLimit) return v;
    if (wide == -1) wide = v;
  }
  return wide;
}

struct Search {
  Store& s;
  const std::vector<VarId>& order;
  SolveStats& stats;
  const SolveBudget& budget;

  bool over_budget() {
    if (budget.max_nodes > 0 && stats.nodes > budget.max_nodes) return true;
    if (budget.deadline && (stats.nodes & 255) == 0 &&
        std::chrono::steady_clock::now() > *budget.deadline)
      return true;
    return false;
  }

  // Rewind to m with the node's paused propagation queue reinstated:
  // work pending at node entry must survive into the sibling branch.
  void rewind(Store::Mark m, const std::vector<int>& pending) {
    s.clear_pending();
    s.undo_to(m);
    s.requeue(pending);
  }

  SolveResult dfs() {
    VarId v = pick(s, order);
    if (v == -1) {
      // Everything is fixed; finish any propagation a yield postponed.
      if (s.has_pending() && s.drain() == PostResult::Inconsistent)
        return SolveResult::Unsat;
      return SolveResult::Sat;
    }
    const std::vector<int> pending = s.pending();
    const Domain d = s.domain(v);
    if (d.size() <= kEnumLimit) {
      for (Val val = d.next_in(d.lo); val <= d.hi; val = d.next_in(val + 1)) {
        ++stats.nodes;
        if (over_budget()) return SolveResult::Budget;
        Store::Mark m = s.mark();
        if (s.assign(v, val) == PostResult::Ok) {
          SolveResult r = dfs();
          if (r == SolveResult::Sat) return r;
          rewind(m, pending);
          if (r == SolveResult::Budget) return r;
        } else {
          rewind(m, pending);
        }
      }
      return SolveResult::Unsat;
    }
    Val mid = d.lo + (d.hi - d.lo) / 2;
    const Val halves[2][2] = {{d.lo, mid}, {mid + 1, d.hi}};
    for (const auto& h : halves) {
      ++stats.nodes;
      if (over_budget()) return SolveResult::Budget;
      Store::Mark m = s.mark();
      if (s.clamp(v, h[0], h[1]) == PostResult::Ok) {
        SolveResult r = dfs();
        if (r == SolveResult::Sat) return r;
        rewind(m, pending);
        if (r == SolveResult::Budget) return r;
      } else {
        rewind(m, pending);
      }
    }
    return SolveResult::Unsat;
  }
};

}  // namespace

SolveResult solve(Store& s, const std::vector<VarId>& order, SolveStats& stats,
                  const SolveBudget& budget) {
  SolveResult r = Search{s, order, stats, budget}.dfs();
  if (r != SolveResult::Sat) s.clear_pending();
  return r;
}

namespace {

void enum_rec(Store& s, const std::vector<VarId>& vars, std::size_t limit,
              std::vector<std::vector<Val>>& out) {
  if (out.size() >= limit) return;
  VarId v = -1;
  for (VarId cand : vars) {
    if (!s.fixed(cand)) {
      v = cand;
      break;
    }
  }
  if (v == -1) {
    std::vector<Val> tuple;
    tuple.reserve(vars.size());
    for (VarId cand : vars) tuple.push_back(s.value(cand));
    out.push_back(std::move(tuple));
    return;
  }
  const Domain d = s.domain(v);
  for (Val val = d.next_in(d.lo); val <= d.hi; val = d.next_in(val + 1)) {
    Store::Mark m = s.mark();
    if (s.assign(v, val) == PostResult::Ok) enum_rec(s, vars, limit, out);
    s.undo_to(m);
    if (out.size() >= limit) return;
  }
}

}  // namespace

std::vector<std::vector<Val>> enumerate_solutions(
    Store& s, const std::vector<VarId>& vars, std::size_t limit) {
  std::vector<std::vector<Val>> out;
  enum_rec(s, vars, limit, out);
  return out;
}

}  // namespace mimpv::fd
