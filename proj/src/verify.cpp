#include "mimpv/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "mimpv/interp.hpp"
#include "mimpv/solve.hpp"

namespace mimpv::lang {
namespace {

using fd::Val;
using fd::VarId;
using Clock = std::chrono::steady_clock;

// Propagator runs across the whole exploration. Generous: a run is one
// constraint revision, and honest instances stay far below this.
constexpr long long kPropagationBudget = 200'000'000;

// Per-propagate step allowance while refuting a case. Opposing
// inequality chains can converge one unit per round across the full
// value range; past this many steps the search splits instead.
constexpr long long kYieldSteps = 2000;

struct YieldScope {
  fd::Store& store;
  explicit YieldScope(fd::Store& s) : store(s) {
    store.set_yield_limit(kYieldSteps);
  }
  ~YieldScope() { store.set_yield_limit(0); }
};

struct CexFound {
  Counterexample cex;
};

struct ResourceStop {
  std::string which;
};

bool stmt_has_call(const Stmt& s);

bool list_has_call(const std::vector<StmtPtr>& body) {
  for (const auto& s : body)
    if (s && stmt_has_call(*s)) return true;
  return false;
}

bool stmt_has_call(const Stmt& s) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SCallAssign>) {
          return true;
        } else if constexpr (std::is_same_v<T, SIf>) {
          return stmt_has_call(*n.then_branch) ||
                 (n.else_branch && stmt_has_call(*n.else_branch));
        } else if constexpr (std::is_same_v<T, SWhile>) {
          return stmt_has_call(*n.body);
        } else if constexpr (std::is_same_v<T, SFor>) {
          return (n.init && stmt_has_call(*n.init)) ||
                 (n.step && stmt_has_call(*n.step)) || stmt_has_call(*n.body);
        } else if constexpr (std::is_same_v<T, SBlock>) {
          return list_has_call(n.stmts);
        } else {
          return false;
        }
      },
      s.node);
}

class Engine {
 public:
  Engine(const Unit& unit, const Program& prog, const InstanceParams& inst)
      : ctx_(unit, prog, inst) {
    const InstanceParams& ip = ctx_.inst();
    if (ip.max_unwind > 0) {
      max_unwind_ = ip.max_unwind;
    } else {
      // Enough headroom for every corpus shape: nested scans need about
      // twice the array length, counting loops span a scalar override.
      long long u = 8;
      for (const auto& [name, slots] : ctx_.param_arrays())
        u = std::max(u, 2LL * static_cast<long long>(slots.size()) + 8);
      for (const auto& [name, b] : ip.bounds) {
        if (ctx_.param_arrays().count(name)) continue;
        long long span = b.second - b.first;
        u = std::max(u, std::min<long long>(span, 1 << 20) + 8);
      }
      max_unwind_ = static_cast<int>(std::min<long long>(u, 1 << 20));
    }
    if (ip.budget_ms > 0)
      deadline_ = Clock::now() + std::chrono::milliseconds(ip.budget_ms);
    has_calls_ = list_has_call(ctx_.program().body);
    ctx_.store().set_propagation_budget(kPropagationBudget);
    ctx_.set_index_guard([this](const std::string& a, VarId idx, int len) {
      guard_index(a, idx, len);
    });
  }

  Verdict run() {
    try {
      if (ctx_.program().contract.requires_f) {
        try {
          ctx_.post_formula(*ctx_.program().contract.requires_f,
                            ctx_.make_env(std::nullopt));
        } catch (const PathDead&) {
          return verdict_;  // unsatisfiable requires: nothing to explore
        }
      }
      try {
        run_seq(ctx_.program().body, 0, nullptr);
      } catch (const PathDead&) {
        // the fully forced prefix closed the store before any choice point
      }
    } catch (CexFound& f) {
      verdict_.kind = Verdict::Kind::Counterexample;
      verdict_.cex = std::move(f.cex);
    } catch (const ResourceStop& r) {
      verdict_.kind = Verdict::Kind::ResourceExceeded;
      verdict_.resource = r.which;
    } catch (const fd::PropagationBudgetExceeded&) {
      verdict_.kind = Verdict::Kind::ResourceExceeded;
      verdict_.resource = "propagation budget";
    }
    return verdict_;
  }

 private:
  // The rest of the current path, threaded through the walk so branch
  // points can run both arms to completion. Lives on the call stack.
  struct Kont {
    virtual ~Kont() = default;
    virtual void run(Engine& e) const = 0;
  };

  struct SeqKont final : Kont {
    const std::vector<StmtPtr>* list;
    std::size_t i;
    const Kont* next;
    SeqKont(const std::vector<StmtPtr>* l, std::size_t pos, const Kont* n)
        : list(l), i(pos), next(n) {}
    void run(Engine& e) const override { e.run_seq(*list, i, next); }
  };

  struct LoopKont final : Kont {
    const SWhile* w;
    int iters;  // completed iterations of this activation
    const Kont* next;
    LoopKont(const SWhile* loop, int it, const Kont* n)
        : w(loop), iters(it), next(n) {}
    void run(Engine& e) const override { e.exec_while(*w, iters, next); }
  };

  struct Saved {
    PathCtx::Snap snap;
    std::size_t decisions;
    int iters_high;
    long long calls;
  };

  Saved save() const {
    return {ctx_.save(), decisions_.size(), path_iters_high_, calls_seen_};
  }

  void restore(const Saved& s) {
    ctx_.store().clear_pending();
    ctx_.restore(s.snap);
    decisions_.resize(s.decisions);
    path_iters_high_ = s.iters_high;
    calls_seen_ = s.calls;
  }

  void resume(const Kont* k) {
    if (k)
      k->run(*this);
    else
      complete_path(std::nullopt);  // fell off the end of a void body
  }

  void run_seq(const std::vector<StmtPtr>& list, std::size_t i,
               const Kont* next) {
    if (i >= list.size()) {
      resume(next);
      return;
    }
    SeqKont k(&list, i + 1, next);
    exec(*list[i], &k);
  }

  void exec(const Stmt& s, const Kont* k) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, SDecl>) {
            ctx_.decl_scalar(n.name, n.init.get());
            resume(k);
          } else if constexpr (std::is_same_v<T, SAssign>) {
            ctx_.assign_scalar(n.name, *n.value);
            resume(k);
          } else if constexpr (std::is_same_v<T, SArrayAssign>) {
            ctx_.array_assign(n.array, *n.index, *n.value);
            resume(k);
          } else if constexpr (std::is_same_v<T, SIf>) {
            branch(n, k);
          } else if constexpr (std::is_same_v<T, SWhile>) {
            exec_while(n, 0, k);
          } else if constexpr (std::is_same_v<T, SFor>) {
            throw std::logic_error("for statement survived desugaring");
          } else if constexpr (std::is_same_v<T, SReturn>) {
            if (n.value) {
              VarId v = ctx_.expr(*n.value);
              ctx_.trace_result(v);
              complete_path(v);
            } else {
              complete_path(std::nullopt);
            }
          } else if constexpr (std::is_same_v<T, SCallAssign>) {
            handle_call(n, k);
          } else {
            static_assert(std::is_same_v<T, SBlock>);
            run_seq(n.stmts, 0, k);
          }
        },
        s.node);
  }

  void branch(const SIf& n, const Kont* k) {
    VarId b = ctx_.bool_expr(*n.cond);
    if (ctx_.store().fixed(b)) {
      bool taken = ctx_.store().value(b) != 0;
      decisions_.push_back(taken ? 1 : 0);
      if (taken)
        exec(*n.then_branch, k);
      else if (n.else_branch)
        exec(*n.else_branch, k);
      else
        resume(k);
      return;
    }
    fork(
        b, [&] { exec(*n.then_branch, k); },
        [&] {
          if (n.else_branch)
            exec(*n.else_branch, k);
          else
            resume(k);
        });
  }

  void exec_while(const SWhile& w, int iters, const Kont* k) {
    VarId b = ctx_.bool_expr(*w.cond);
    if (ctx_.store().fixed(b)) {
      bool taken = ctx_.store().value(b) != 0;
      decisions_.push_back(taken ? 1 : 0);
      if (taken)
        enter_loop(w, iters, k);
      else
        resume(k);
      return;
    }
    fork(b, [&] { enter_loop(w, iters, k); }, [&] { resume(k); });
  }

  void enter_loop(const SWhile& w, int iters, const Kont* k) {
    if (iters >= max_unwind_)
      throw ResourceStop{"loop unwinding limit (" +
                         std::to_string(max_unwind_) + ")"};
    path_iters_high_ = std::max(path_iters_high_, iters + 1);
    LoopKont next(&w, iters + 1, k);
    exec(*w.body, &next);
  }

  // One choice point: continue the walk under b=1, rewind, then under
  // b=0. An arm whose assignment or descent closes the store just dies.
  template <class FThen, class FElse>
  void fork(VarId b, FThen then_f, FElse else_f) {
    check_budget();
    {
      Saved s = save();
      ++verdict_.nodes;
      decisions_.push_back(1);
      try {
        if (ctx_.store().assign(b, 1) == fd::PostResult::Ok) then_f();
      } catch (const PathDead&) {
      }
      restore(s);
    }
    Saved s = save();
    ++verdict_.nodes;
    decisions_.push_back(0);
    try {
      if (ctx_.store().assign(b, 0) == fd::PostResult::Ok) else_f();
    } catch (const PathDead&) {
    }
    restore(s);
  }

  void complete_path(std::optional<VarId> result) {
    ++verdict_.feasible_paths;
    verdict_.max_loop_iters =
        std::max(verdict_.max_loop_iters, path_iters_high_);
    const Formula* ens = ctx_.program().contract.ensures_f.get();
    if (!ens) return;
    FormulaEnv env = ctx_.make_env(result);
    for (const Case& c : ctx_.negation_cases(*ens, env))
      try_case(c, CexKind::EnsuresViolation, "", result);
  }

  // Post one violation case on top of the path constraints and search
  // for a witness. Sat aborts the whole exploration via CexFound.
  void try_case(const Case& c, CexKind kind, const std::string& detail,
                std::optional<VarId> result) {
    check_budget();
    Saved s = save();
    YieldScope yield(ctx_.store());
    ctx_.begin_record();
    bool dead = false;
    try {
      for (const auto& post : c.posts) post();
    } catch (const PathDead&) {
      dead = true;
    }
    std::vector<VarId> seeds = ctx_.take_record();
    if (!dead) {
      fd::SolveResult r = solve_now(std::move(seeds));
      if (r == fd::SolveResult::Sat)
        throw CexFound{snapshot(kind, c.top_index, detail, result)};
      if (r == fd::SolveResult::Budget) budget_stop();
    }
    restore(s);
  }

  void handle_call(const SCallAssign& c, const Kont* k) {
    const Program* callee = ctx_.unit().find(c.callee);
    if (!callee) throw std::logic_error("unknown callee: " + c.callee);
    FormulaEnv fenv;
    for (std::size_t i = 0; i < callee->params.size(); ++i) {
      const Param& p = callee->params[i];
      const Expr& arg = *c.args[i];
      if (p.type == Ty::IntArray) {
        const auto* ref = std::get_if<VarRef>(&arg.node);
        if (!ref)
          throw std::logic_error("array argument must be a plain variable");
        fenv.arrays[p.name] = ctx_.slots(ref->name);
      } else {
        fenv.scalars[p.name] = ctx_.expr(arg);
      }
    }
    if (callee->contract.requires_f) {
      for (const Case& cs :
           ctx_.negation_cases(*callee->contract.requires_f, fenv))
        try_case(cs, CexKind::PreconditionViolation, c.callee, std::nullopt);
    }
    ++calls_seen_;
    VarId res = ctx_.store().new_var(fd::Domain(), c.target);
    ctx_.bind_scalar(c.target, res);
    fenv.result = res;
    if (callee->contract.ensures_f)
      ctx_.post_formula(*callee->contract.ensures_f, fenv);
    resume(k);
  }

  // Called by translation before an array access is clamped into
  // bounds. If the unclamped index domain can leave [0, len), search
  // each escaping side for a concrete witness.
  void guard_index(const std::string& array, VarId idx, int len) {
    Val lo = ctx_.store().min(idx);
    Val hi = ctx_.store().max(idx);
    if (lo >= 0 && hi < len) return;
    if (lo < 0) probe_index(array, idx, true, len);
    if (hi >= len) probe_index(array, idx, false, len);
  }

  void probe_index(const std::string& array, VarId idx, bool low, int len) {
    check_budget();
    Saved s = save();
    YieldScope yield(ctx_.store());
    fd::PostResult r = low ? ctx_.store().clamp(idx, -fd::kNoBound, -1)
                           : ctx_.store().clamp(idx, len, fd::kNoBound);
    if (r == fd::PostResult::Ok) {
      fd::SolveResult sr = solve_now({idx});
      if (sr == fd::SolveResult::Sat)
        throw CexFound{
            snapshot(CexKind::IndexViolation, low ? 0 : 1, array,
                     std::nullopt)};
      if (sr == fd::SolveResult::Budget) budget_stop();
    }
    restore(s);
  }

  // Label case variables first, then the printable trace, then
  // everything else so Sat means a fully concrete store.
  fd::SolveResult solve_now(std::vector<VarId> seeds) {
    std::vector<VarId> order = std::move(seeds);
    std::size_t n = ctx_.store().num_vars();
    order.reserve(order.size() + ctx_.trace().size() + n);
    // The index variables adjacent to the violated atoms decide the
    // array structure; settling them first keeps the search from
    // enumerating indices the atoms never look at.
    for (std::size_t i = 0, end = order.size(); i < end; ++i)
      for (VarId idx : ctx_.store().array_indices_near(order[i]))
        order.push_back(idx);
    for (const TraceVar& t : ctx_.trace()) order.push_back(t.var);
    for (std::size_t v = 0; v < n; ++v)
      order.push_back(static_cast<VarId>(v));
    fd::SolveBudget budget;
    budget.deadline = deadline_;
    if (ctx_.inst().budget_nodes > 0) {
      long long left = ctx_.inst().budget_nodes - verdict_.nodes;
      if (left <= 0) budget_stop();
      budget.max_nodes = left;
    }
    fd::SolveStats stats;
    fd::SolveResult r = fd::solve(ctx_.store(), order, stats, budget);
    verdict_.nodes += stats.nodes;
    return r;
  }

  void check_budget() {
    if (deadline_ && Clock::now() >= *deadline_)
      throw ResourceStop{"time budget (" +
                         std::to_string(ctx_.inst().budget_ms) + " ms)"};
    if (ctx_.inst().budget_nodes > 0 &&
        verdict_.nodes >= ctx_.inst().budget_nodes)
      throw ResourceStop{"node budget (" +
                         std::to_string(ctx_.inst().budget_nodes) + ")"};
  }

  [[noreturn]] void budget_stop() {
    if (deadline_ && Clock::now() >= *deadline_)
      throw ResourceStop{"time budget (" +
                         std::to_string(ctx_.inst().budget_ms) + " ms)"};
    throw ResourceStop{"node budget (" +
                       std::to_string(ctx_.inst().budget_nodes) + ")"};
  }

  Counterexample snapshot(CexKind kind, int case_idx, const std::string& detail,
                          std::optional<VarId> result) {
    fd::Store& st = ctx_.store();
    Counterexample cex;
    cex.kind = kind;
    cex.violated_case = case_idx;
    if (kind == CexKind::PreconditionViolation)
      cex.call_index = static_cast<int>(calls_seen_);
    cex.detail = detail;
    cex.decisions = decisions_;
    for (const TraceVar& t : ctx_.trace()) {
      TraceLine ln;
      ln.base = t.base;
      ln.version = t.version;
      ln.slot = t.slot;
      ln.declared_lo = t.declared_lo;
      ln.declared_hi = t.declared_hi;
      ln.fixed = st.fixed(t.var);
      if (ln.fixed) ln.value = st.value(t.var);
      ln.dom_lo = st.min(t.var);
      ln.dom_hi = st.max(t.var);
      cex.trace.push_back(std::move(ln));
    }
    for (const auto& [name, v] : ctx_.param_scalars())
      cex.inputs[name] = st.min(v);
    for (const auto& [name, slots] : ctx_.param_arrays()) {
      std::vector<Val> vals;
      vals.reserve(slots.size());
      for (VarId v : slots) vals.push_back(st.min(v));
      cex.input_arrays[name] = std::move(vals);
    }
    if (result && st.fixed(*result)) cex.result = st.value(*result);
    validate(cex);
    return cex;
  }

  // Re-execute the witness on the concrete interpreter before reporting
  // it. A divergence here is an engine bug, not a user error.
  void validate(const Counterexample& cex) {
    const Program& prog = ctx_.program();
    ConcreteInput in{cex.inputs, cex.input_arrays};
    InterpResult ir = interpret(ctx_.unit(), prog, in);
    if (prog.contract.requires_f) {
      std::optional<bool> pre =
          eval_formula(*prog.contract.requires_f, cex.inputs, cex.input_arrays,
                       std::nullopt);
      if (!pre || !*pre)
        throw std::logic_error("witness replay: requires does not hold");
    }
    switch (cex.kind) {
      case CexKind::IndexViolation:
        if (ir.status != InterpResult::Status::OutOfBounds)
          throw std::logic_error("witness replay: no out-of-bounds access");
        if (ir.decisions != cex.decisions)
          throw std::logic_error("witness replay: decisions diverged");
        break;
      case CexKind::PreconditionViolation: {
        if (cex.call_index < 0 ||
            static_cast<std::size_t>(cex.call_index) >= ir.calls.size())
          throw std::logic_error("witness replay: call not reached");
        if (cex.decisions.size() > ir.decisions.size() ||
            !std::equal(cex.decisions.begin(), cex.decisions.end(),
                        ir.decisions.begin()))
          throw std::logic_error("witness replay: decisions diverged");
        const CallEvent& ev = ir.calls[static_cast<std::size_t>(cex.call_index)];
        const Program* callee = ctx_.unit().find(ev.callee);
        std::optional<bool> pre =
            callee && callee->contract.requires_f
                ? eval_formula(*callee->contract.requires_f, ev.scalars,
                               ev.arrays, std::nullopt)
                : std::optional<bool>(true);
        if (pre && *pre)
          throw std::logic_error("witness replay: callee requires holds");
        break;
      }
      case CexKind::EnsuresViolation: {
        // With calls on the path the witness is relative to the callee
        // contract, not to the callee body, so only the entry state is
        // checked against it.
        if (has_calls_) break;
        if (ir.status != InterpResult::Status::Ok)
          throw std::logic_error("witness replay: execution trapped");
        if (ir.decisions != cex.decisions)
          throw std::logic_error("witness replay: decisions diverged");
        if (cex.result && (!ir.result || *ir.result != *cex.result))
          throw std::logic_error("witness replay: result diverged");
        if (prog.contract.ensures_f) {
          std::optional<bool> post =
              eval_formula(*prog.contract.ensures_f, cex.inputs,
                           ir.final_arrays, ir.result);
          if (!post || *post)
            throw std::logic_error("witness replay: ensures not violated");
        }
        break;
      }
    }
  }

  PathCtx ctx_;
  Verdict verdict_;
  int max_unwind_ = 0;
  std::optional<Clock::time_point> deadline_;
  std::vector<std::uint8_t> decisions_;
  int path_iters_high_ = 0;
  long long calls_seen_ = 0;
  bool has_calls_ = false;
};

}  // namespace

const char* cex_kind_name(CexKind k) {
  switch (k) {
    case CexKind::EnsuresViolation:
      return "ensures violation";
    case CexKind::IndexViolation:
      return "index out of bounds";
    case CexKind::PreconditionViolation:
      return "precondition violation";
  }
  return "?";
}

const char* verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Verified:
      return "Verified";
    case Verdict::Kind::Counterexample:
      return "Counterexample";
    case Verdict::Kind::ResourceExceeded:
      return "ResourceExceeded";
  }
  return "?";
}

Verdict verify(const Unit& unit, const Program& prog,
               const InstanceParams& inst) {
  Engine e(unit, prog, inst);
  return e.run();
}

std::string format_trace(const Counterexample& cex) {
  std::ostringstream os;
  os << "Counter-example found\n";
  for (const TraceLine& t : cex.trace) {
    os << t.base << "_" << t.version;
    if (t.slot >= 0) os << "[" << t.slot << "]";
    os << "[" << t.declared_lo << ":" << t.declared_hi << "] : ";
    if (t.fixed)
      os << t.value;
    else
      os << "[" << t.dom_lo << ".." << t.dom_hi << "]";
    os << "\n";
  }
  return os.str();
}

}  // namespace mimpv::lang
