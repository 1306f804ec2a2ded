// Translation of program paths into the finite-domain store.
//
// A PathCtx owns the store for one verification job together with the
// SSA environment the walk threads through it: every assignment creates
// a fresh (name, version) instance, arrays are vectors of slot variables
// copied on write, and a trace records each printable instance in
// creation order. All of that rewinds with save()/restore() so the
// search can branch.
//
// Contract formulas translate in two modes. post_formula posts a formula
// positively as un-reified constraints (embedded disjunctions fall back
// to reification). negation_cases/assertion_cases compile a formula into
// an explicit list of constraint cases, one per way of violating or
// satisfying it, which the search then tries one at a time.

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mimpv/ast.hpp"
#include "mimpv/store.hpp"

namespace mimpv::lang {

using fd::Val;
using fd::VarId;

// How one verification run is instantiated: concrete array lengths,
// optional domain overrides per parameter name (arrays bound their
// slots), and search budgets. Zero budgets mean unlimited.
struct InstanceParams {
  std::map<std::string, int> array_len;
  std::map<std::string, std::pair<Val, Val>> bounds;
  int max_unwind = 0;          // 0: derived from lengths and overrides
  long long budget_nodes = 0;  // search nodes across the whole run
  long long budget_ms = 0;     // wall clock for the whole run
};

// A bad instantiation (missing array length, inverted bounds, unknown
// function). Reported to the user, not a verification verdict.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by translation when a post makes the store inconsistent: the
// current path is infeasible. The walk catches it at the enclosing
// branch point and rewinds.
struct PathDead {};

// One printable SSA instance, in creation order. slot is -1 for
// scalars; declared_* are the bounds the instance was created with
// (overrides for parameters, the default domain otherwise), which is
// what the witness trace prints even when the store has narrowed the
// domain since.
struct TraceVar {
  std::string base;
  int version = 0;
  int slot = -1;
  Val declared_lo = fd::kDefaultLo;
  Val declared_hi = fd::kDefaultHi;
  VarId var = -1;
};

// Identifier bindings for translating a contract formula: formal
// parameter names to actual variables, \result, and enclosing
// quantifier indices already fixed to concrete values.
struct FormulaEnv {
  std::map<std::string, VarId> scalars;
  std::map<std::string, std::vector<VarId>> arrays;
  std::optional<VarId> result;
  std::map<std::string, Val> index;
};

// One way of satisfying (or violating) a formula: a conjunction of
// posts to run in order. Each post throws PathDead if it closes the
// store. top_index identifies the outermost conjunct the case came
// from, for reporting which ensures clause a witness violates.
struct Case {
  int top_index = -1;
  std::vector<std::function<void()>> posts;
};

class PathCtx {
 public:
  // Called before an array access posts its bounds constraint, with the
  // access domain still unclamped. The engine uses it to detect
  // out-of-bounds accesses; translation itself only needs the clamp.
  using IndexGuard =
      std::function<void(const std::string& array, VarId idx, int len)>;

  PathCtx(const Unit& unit, const Program& prog, const InstanceParams& inst);

  fd::Store& store() { return store_; }
  const Unit& unit() const { return unit_; }
  const Program& program() const { return prog_; }
  const InstanceParams& inst() const { return inst_; }

  const std::vector<TraceVar>& trace() const { return trace_; }
  const std::map<std::string, VarId>& param_scalars() const {
    return param_scalars_;
  }
  const std::map<std::string, std::vector<VarId>>& param_arrays() const {
    return param_arrays_;
  }

  void set_index_guard(IndexGuard g) { index_guard_ = std::move(g); }

  // Rewind token for the search. Restoring truncates the trace and the
  // element-read cache and puts the SSA environment back.
  struct Snap {
    fd::Store::Mark mark;
    std::map<std::string, std::pair<int, VarId>> scalars;
    std::map<std::string, std::pair<int, std::vector<VarId>>> arrays;
    std::size_t trace = 0;
    std::size_t reads = 0;
  };
  Snap save() const;
  void restore(const Snap& s);

  // --- statement translation (program environment) ---
  void decl_scalar(const std::string& name, const Expr* init);
  void assign_scalar(const std::string& name, const Expr& value);
  void bind_scalar(const std::string& name, VarId v);  // call results
  void array_assign(const std::string& name, const Expr& index,
                    const Expr& value);

  VarId expr(const Expr& e);       // Int-typed, program environment
  VarId bool_expr(const Expr& e);  // Bool-typed, 0/1 variable

  VarId lookup(const std::string& name) const;
  const std::vector<VarId>& slots(const std::string& name) const;
  int array_len(const std::string& name) const;

  // Environment for the program's own contract at the current point:
  // every parameter at its current version.
  FormulaEnv make_env(std::optional<VarId> result) const;

  // --- contract translation ---
  void post_formula(const Formula& f, const FormulaEnv& env);
  std::vector<Case> negation_cases(const Formula& f, const FormulaEnv& env);
  std::vector<Case> assertion_cases(const Formula& f, const FormulaEnv& env);

  // Constant value of e through the store, if every variable in it is
  // fixed. Used for exact quantifier expansion.
  std::optional<Val> const_val(const Expr& e, const FormulaEnv& env);

  // Roots of the variables touched by posts since begin_record. The
  // engine seeds its labeling order with them.
  void begin_record();
  std::vector<VarId> take_record();

  void trace_result(VarId v);

 private:
  struct Lin {  // linear view of an expression: terms + constant
    fd::Terms terms;
    Val c = 0;
  };
  enum class Cmp { Le, Lt, Ge, Gt, Eq, Ne };

  struct ReadEntry {
    std::vector<VarId> slots;
    VarId idx_root = -1;
    VarId val = -1;
  };

  void ok(fd::PostResult r);
  void record(VarId v);
  void record_terms(const fd::Terms& ts);
  VarId fresh(const std::string& name, fd::Domain d);
  VarId fixed_var(Val v);
  VarId bool_var(const std::string& name);

  VarId expr_in(const Expr& e, const FormulaEnv* fenv);
  VarId bool_expr_in(const Expr& e, const FormulaEnv* fenv);
  VarId read_elem(const std::string& array, const std::vector<VarId>& slots,
                  VarId idx);
  Lin linearize(const Expr& e, const FormulaEnv* fenv);
  VarId materialize(Lin l);
  VarId negate_bool(VarId x);
  void post_lin_cmp(Lin diff, Cmp op);
  void post_cmp(const Expr& l, const Expr& r, BinOp op, bool negate,
                const FormulaEnv* fenv);
  void post_expr_truth(const Expr& e, bool want, const FormulaEnv* fenv);
  VarId formula_bool(const Formula& f, const FormulaEnv& env);

  std::vector<Case> pos_cases(const Formula& f, const FormulaEnv& env);
  std::vector<Case> neg_cases(const Formula& f, const FormulaEnv& env);
  std::vector<Case> reified_pos(const Formula& f, const FormulaEnv& env);
  std::vector<Case> reified_neg(const Formula& f, const FormulaEnv& env);
  static std::vector<Case> cross(std::vector<Case> a, std::vector<Case> b);
  static void flatten_and(const Formula& f, std::vector<const Formula*>& out);
  std::pair<Val, Val> range_of(const Expr& e, const FormulaEnv& env);
  std::pair<Val, Val> quant_span(const FForAll& q, const FormulaEnv& env);
  VarId guard_bool(const FForAll& q, Val j, const FormulaEnv& env);

  void push_trace(const std::string& base, int version, int slot, Val dlo,
                  Val dhi, VarId v);

  const Unit& unit_;
  const Program& prog_;
  InstanceParams inst_;
  fd::Store store_;

  std::map<std::string, std::pair<int, VarId>> scalars_;
  std::map<std::string, std::pair<int, std::vector<VarId>>> arrays_;
  std::map<std::string, VarId> param_scalars_;
  std::map<std::string, std::vector<VarId>> param_arrays_;
  std::vector<TraceVar> trace_;
  std::vector<ReadEntry> reads_;
  IndexGuard index_guard_;

  bool recording_ = false;
  std::vector<VarId> recorded_;
};

}  // namespace mimpv::lang
