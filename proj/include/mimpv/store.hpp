#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mimpv/domain.hpp"

namespace mimpv::fd {

using VarId = std::int32_t;

enum class PostResult { Ok, Inconsistent };

// Comparison of a linear sum against a constant.
enum class CmpKind : std::uint8_t { Le, Eq, Ne };

using Term = std::pair<Val, VarId>;
using Terms = std::vector<Term>;

// Thrown when propagation exceeds its run budget; the driver reports a
// resource verdict instead of an answer.
struct PropagationBudgetExceeded {};

// Backtrackable store of integer variables and propagators.
//
// Bounds reasoning alone creeps one unit at a time through cycles like
// x <= y together with y <= x - 1, which is hopeless on 2^31-wide domains.
// Three mechanisms close that gap:
//   - posting x == y merges the variables (union-find), so later constraints
//     see one variable,
//   - linear constraints are canonicalized and two posts with the same
//     left-hand side intersect their intervals immediately,
//   - unit two-variable rows feed a difference graph whose potentials are
//     repaired incrementally on every edge insert, failing as soon as a
//     negative cycle appears.
class Store {
 public:
  struct Mark {
    std::size_t trail = 0;
    std::size_t vars = 0;
    std::size_t constraints = 0;
  };

  struct Stats {
    long long propagations = 0;
  };

  VarId new_var(Domain d, std::string name = {});
  VarId new_fixed(Val v);
  std::size_t num_vars() const { return vars_.size(); }

  VarId find(VarId v) const;
  const Domain& domain(VarId v) const { return vars_[find(v)].dom; }
  bool fixed(VarId v) const { return domain(v).fixed(); }
  Val value(VarId v) const { return domain(v).lo; }
  Val min(VarId v) const { return domain(v).lo; }
  Val max(VarId v) const { return domain(v).hi; }
  const std::string& name(VarId v) const { return vars_[v].name; }

  Mark mark() const;
  void undo_to(const Mark& m);

  // Every post runs propagation to a fixpoint. After Inconsistent the store
  // is part-way through the failed change; undo_to the mark taken before.
  PostResult assign(VarId v, Val val);
  PostResult exclude(VarId v, Val val);
  PostResult clamp(VarId v, Val lo, Val hi);
  PostResult post_linear(Terms terms, Val lo, Val hi);   // lo <= sum <= hi
  PostResult post_linear_neq(Terms terms, Val k);        // sum != k
  PostResult post_eq(VarId a, VarId b);                  // merges the two
  PostResult post_neq(VarId a, VarId b);
  PostResult post_mult(VarId x, VarId y, VarId z);       // z == x * y
  PostResult post_div(VarId x, VarId y, VarId z);        // z == x / y, Java /
  PostResult post_element(VarId idx, std::vector<VarId> table, VarId val);
  PostResult post_array_update(std::vector<VarId> before, VarId idx, VarId val,
                               std::vector<VarId> after);
  PostResult post_alldiff(const std::vector<VarId>& vars);
  // b in 0..1; b == 1  <=>  sum(terms) <kind> k
  PostResult post_reif_cmp(VarId b, Terms terms, Val k, CmpKind kind);
  PostResult post_bool_and(VarId b, std::vector<VarId> xs);
  PostResult post_bool_or(VarId b, std::vector<VarId> xs);

  Stats& stats() { return stats_; }
  void set_propagation_budget(long long runs) { prop_budget_ = runs; }

  // Propagation yielding. With a step limit set, propagate() may return
  // Ok with work still queued rather than grind out a slowly converging
  // fixpoint; the search then splits a variable instead. Callers that
  // pause must preserve the pending queue across undo_to themselves.
  void set_yield_limit(long long steps) { yield_limit_ = steps; }
  bool has_pending() const { return queue_head_ < queue_.size(); }
  std::vector<int> pending() const;
  void requeue(const std::vector<int>& cs);
  void clear_pending() { clear_queue(); }
  PostResult drain();

  // Index variables of array constraints touching v. Labeling these
  // first turns element and update constraints into plain aliases, which
  // is what lets the rest of the store decide quickly.
  std::vector<VarId> array_indices_near(VarId v) const;

 private:
  enum class CKind : std::uint8_t {
    Row,          // lo <= sum(terms) <= hi
    NeqSum,       // sum(terms) != k (k kept in lo)
    Mult,         // vars {x, y, z}
    Div,          // vars {x, y, z}
    Element,      // vars {idx, val, table...}
    ArrayUpdate,  // vars {idx, val, before..., after...}
    Reif,         // b <=> sum(terms) cmp k (k in lo)
    BoolAnd,      // vars {b, xs...}
    BoolOr,
  };

  struct Constraint {
    CKind kind;
    std::uint8_t state = 0;  // Reif: 1 once the plain atom has been posted
    CmpKind cmp = CmpKind::Le;
    Val lo = -kNoBound;
    Val hi = kNoBound;
    Terms terms;
    std::vector<VarId> vars;
    VarId b = -1;
  };

  struct VarEntry {
    Domain dom;
    std::string name;
  };

  enum class TKind : std::uint8_t {
    Dom, Parent, Rank, Watch, RowBounds, State, Pi, Adj, RowKey
  };
  struct TrailEntry {
    TKind kind;
    VarId v = 0;
    int c = 0;
    Val a = 0, b = 0;
    std::uint8_t byte = 0;
    Domain dom;   // Dom entries
    Terms key;    // RowKey entries
  };

  // posting helpers (no propagation loop of their own)
  PostResult write_domain(VarId root, Domain&& nd);
  PostResult clamp_root(VarId v, Val lo, Val hi);
  PostResult exclude_root(VarId v, Val val);
  PostResult unify(VarId a, VarId b);
  PostResult add_edge(VarId u, VarId v, Val w);  // means: x_v <= x_u + w
  PostResult repair_potentials(VarId u, VarId v, Val w);
  PostResult post_linear_pre(Terms terms, Val lo, Val hi);
  PostResult post_linear_neq_pre(Terms terms, Val k);
  PostResult post_reif_pre(VarId b, Terms terms, Val k, CmpKind kind);
  int add_constraint(Constraint&& c);
  void watch(VarId v, int c);
  void enqueue(int c);
  void enqueue_watchers(VarId root);
  void clear_queue();
  PostResult propagate();

  Terms canonical(const Terms& terms) const;  // roots resolved, combined
  // sign/gcd-normalized key plus the mapped interval
  struct NormRow { Terms key; Val lo, hi; };
  NormRow normalize_row(Terms terms, Val lo, Val hi) const;

  PostResult run(int c);
  PostResult run_row(Constraint& c);
  PostResult run_neq_sum(Constraint& c);
  std::optional<Val> graph_dist(VarId from, VarId to) const;
  PostResult run_mult(Constraint& c);
  PostResult run_div(Constraint& c);
  PostResult run_element(Constraint& c);
  PostResult run_array_update(Constraint& c);
  PostResult run_reif(int ci);
  PostResult run_bool_and(Constraint& c);
  PostResult run_bool_or(Constraint& c);

  std::vector<VarEntry> vars_;
  std::vector<VarId> parent_;
  std::vector<int> rank_;
  std::vector<std::vector<int>> watchers_;
  std::vector<std::vector<std::pair<VarId, Val>>> adj_;  // difference graph
  std::vector<Val> pi_;                                  // graph potentials
  std::vector<Constraint> constraints_;
  std::map<Terms, int> row_index_;
  std::vector<TrailEntry> trail_;
  // Domain writes trail at most once per mark epoch: undo only ever
  // needs the oldest domain since the mark it rewinds to.
  mutable std::uint64_t epoch_ = 1;
  std::vector<std::uint64_t> dom_stamp_;
  std::vector<int> queue_;
  std::size_t queue_head_ = 0;
  std::vector<std::uint8_t> in_queue_;
  Stats stats_;
  long long prop_budget_ = 0;  // 0 = unlimited
  long long yield_limit_ = 0;  // 0 = run to fixpoint
};

}  // namespace mimpv::fd
