#include "mimpv/typecheck.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mimpv::lang {

CheckError::CheckError(std::string file, SourcePos pos,
                       const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(pos.line) + ":" +
                         std::to_string(pos.col) + ": " + message),
      diag_{std::move(file), pos, message} {}

namespace {

template <typename Node>
StmtPtr make_stmt(SourcePos pos, Node&& n) {
  auto s = std::make_unique<Stmt>();
  s->pos = pos;
  s->node = std::forward<Node>(n);
  return s;
}

void desugar_stmt(Stmt& s) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SIf>) {
          desugar_stmt(*n.then_branch);
          if (n.else_branch) desugar_stmt(*n.else_branch);
        } else if constexpr (std::is_same_v<T, SWhile>) {
          desugar_stmt(*n.body);
        } else if constexpr (std::is_same_v<T, SFor>) {
          desugar_stmt(*n.body);
        } else if constexpr (std::is_same_v<T, SBlock>) {
          for (auto& c : n.stmts) desugar_stmt(*c);
        }
      },
      s.node);
  if (auto* f = std::get_if<SFor>(&s.node)) {
    SourcePos pos = s.pos;
    StmtPtr init = std::move(f->init);
    ExprPtr cond = std::move(f->cond);
    StmtPtr step = std::move(f->step);
    StmtPtr body = std::move(f->body);
    if (!cond) {
      cond = std::make_unique<Expr>();
      cond->pos = pos;
      cond->node = BoolLit{true};
    }
    SBlock inner;
    inner.stmts.push_back(std::move(body));
    if (step) inner.stmts.push_back(std::move(step));
    SWhile loop{std::move(cond), make_stmt(pos, std::move(inner))};
    SBlock outer;
    if (init) outer.stmts.push_back(std::move(init));
    outer.stmts.push_back(make_stmt(pos, std::move(loop)));
    s.node = std::move(outer);
  }
}

class Scope {
 public:
  void push() { frames_.emplace_back(); }
  void pop() { frames_.pop_back(); }

  bool declared(const std::string& name) const {
    for (const auto& f : frames_)
      if (f.count(name)) return true;
    return false;
  }

  void declare(const std::string& name, Ty ty) {
    frames_.back().emplace(name, ty);
  }

  const Ty* lookup(const std::string& name) const {
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      auto hit = it->find(name);
      if (hit != it->end()) return &hit->second;
    }
    return nullptr;
  }

 private:
  std::vector<std::unordered_map<std::string, Ty>> frames_;
};

struct ExprCtx {
  bool in_contract = false;
  bool in_ensures = false;
  Ty result_ty = Ty::Void;
  std::set<std::string>* assigned = nullptr;  // null inside contracts
};

class Checker {
 public:
  Checker(Unit& u, std::string file) : unit_(u), file_(std::move(file)) {}

  void run() {
    for (Program& p : unit_.programs) {
      if (fns_.count(p.name))
        error(p.pos, "duplicate function '" + p.name + "'");
      fns_.emplace(p.name, &p);
    }
    collect_calls();
    reject_recursion();
    for (Program& p : unit_.programs) writes_arrays(p.name);
    for (Program& p : unit_.programs) check_program(p);
  }

 private:
  [[noreturn]] void error(SourcePos pos, const std::string& msg) {
    throw CheckError(file_, pos, msg);
  }

  // --- call graph ---------------------------------------------------------

  void collect_calls() {
    for (Program& p : unit_.programs) {
      auto& edges = calls_[p.name];
      for (const auto& s : p.body) scan_calls(*s, edges);
    }
  }

  void scan_calls(const Stmt& s,
                  std::vector<std::pair<SourcePos, std::string>>& out) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, SCallAssign>) {
            out.emplace_back(s.pos, n.callee);
          } else if constexpr (std::is_same_v<T, SIf>) {
            scan_calls(*n.then_branch, out);
            if (n.else_branch) scan_calls(*n.else_branch, out);
          } else if constexpr (std::is_same_v<T, SWhile>) {
            scan_calls(*n.body, out);
          } else if constexpr (std::is_same_v<T, SBlock>) {
            for (const auto& c : n.stmts) scan_calls(*c, out);
          }
        },
        s.node);
  }

  void reject_recursion() {
    std::unordered_map<std::string, int> color;  // 0 new, 1 open, 2 done
    for (const Program& p : unit_.programs) visit_calls(p.name, color);
  }

  void visit_calls(const std::string& name,
                   std::unordered_map<std::string, int>& color) {
    int& c = color[name];
    if (c == 2) return;
    c = 1;
    for (const auto& [pos, callee] : calls_[name]) {
      if (!fns_.count(callee)) continue;  // reported later with this position
      if (color[callee] == 1)
        error(pos, "recursive call to '" + callee + "' is not supported");
      if (color[callee] == 0) visit_calls(callee, color);
    }
    c = 2;
  }

  bool writes_arrays(const std::string& name) {
    auto memo = writes_.find(name);
    if (memo != writes_.end()) return memo->second;
    const Program* p = fns_.at(name);
    bool w = false;
    for (const auto& s : p->body) w = w || stmt_writes_array(*s);
    for (const auto& [pos, callee] : calls_.at(name))
      if (fns_.count(callee)) w = w || writes_arrays(callee);
    return writes_[name] = w;
  }

  bool stmt_writes_array(const Stmt& s) {
    return std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, SArrayAssign>) {
            return true;
          } else if constexpr (std::is_same_v<T, SIf>) {
            return stmt_writes_array(*n.then_branch) ||
                   (n.else_branch && stmt_writes_array(*n.else_branch));
          } else if constexpr (std::is_same_v<T, SWhile>) {
            return stmt_writes_array(*n.body);
          } else if constexpr (std::is_same_v<T, SBlock>) {
            for (const auto& c : n.stmts)
              if (stmt_writes_array(*c)) return true;
            return false;
          } else {
            return false;
          }
        },
        s.node);
  }

  // --- per-function checks ------------------------------------------------

  void check_program(Program& p) {
    current_ = &p;
    scope_ = Scope{};
    scope_.push();
    for (const Param& param : p.params) {
      if (scope_.declared(param.name))
        error(param.pos, "duplicate parameter '" + param.name + "'");
      scope_.declare(param.name, param.type);
    }

    ExprCtx req{true, false, p.result_type, nullptr};
    if (p.contract.requires_f) check_formula(*p.contract.requires_f, req);
    ExprCtx ens{true, true, p.result_type, nullptr};
    if (p.contract.ensures_f) check_formula(*p.contract.ensures_f, ens);

    std::set<std::string> assigned;
    for (const Param& param : p.params) assigned.insert(param.name);
    scope_.push();
    for (auto& s : p.body) check_stmt(*s, assigned);
    scope_.pop();

    if (p.result_type == Ty::Int) {
      bool returns = false;
      for (const auto& s : p.body) returns = returns || always_returns(*s);
      if (!returns)
        error(p.pos, "function '" + p.name + "' may not return a value");
    }
    scope_.pop();
  }

  bool always_returns(const Stmt& s) {
    return std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, SReturn>) {
            return true;
          } else if constexpr (std::is_same_v<T, SIf>) {
            return n.else_branch && always_returns(*n.then_branch) &&
                   always_returns(*n.else_branch);
          } else if constexpr (std::is_same_v<T, SBlock>) {
            for (const auto& c : n.stmts)
              if (always_returns(*c)) return true;
            return false;
          } else {
            return false;
          }
        },
        s.node);
  }

  void check_stmt(Stmt& s, std::set<std::string>& assigned) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          ExprCtx ctx{false, false, current_->result_type, &assigned};
          if constexpr (std::is_same_v<T, SDecl>) {
            if (n.init) require(*n.init, Ty::Int, ctx);
            declare_local(s.pos, n.name);
            if (n.init)
              assigned.insert(n.name);
            else
              assigned.erase(n.name);
          } else if constexpr (std::is_same_v<T, SAssign>) {
            const Ty* ty = scope_.lookup(n.name);
            if (!ty) error(s.pos, "assignment to undeclared '" + n.name + "'");
            if (*ty != Ty::Int)
              error(s.pos, "cannot assign to array '" + n.name + "'");
            require(*n.value, Ty::Int, ctx);
            assigned.insert(n.name);
          } else if constexpr (std::is_same_v<T, SArrayAssign>) {
            const Ty* ty = scope_.lookup(n.array);
            if (!ty || *ty != Ty::IntArray)
              error(s.pos, "'" + n.array + "' is not an array");
            require(*n.index, Ty::Int, ctx);
            require(*n.value, Ty::Int, ctx);
          } else if constexpr (std::is_same_v<T, SIf>) {
            require(*n.cond, Ty::Bool, ctx);
            std::set<std::string> after_then = assigned;
            scope_.push();
            check_stmt(*n.then_branch, after_then);
            scope_.pop();
            if (n.else_branch) {
              std::set<std::string> after_else = assigned;
              scope_.push();
              check_stmt(*n.else_branch, after_else);
              scope_.pop();
              assigned.clear();
              std::set_intersection(
                  after_then.begin(), after_then.end(), after_else.begin(),
                  after_else.end(),
                  std::inserter(assigned, assigned.begin()));
            }
          } else if constexpr (std::is_same_v<T, SWhile>) {
            require(*n.cond, Ty::Bool, ctx);
            std::set<std::string> inside = assigned;  // body may never run
            scope_.push();
            check_stmt(*n.body, inside);
            scope_.pop();
          } else if constexpr (std::is_same_v<T, SFor>) {
            throw std::logic_error("for-loop survived desugaring");
          } else if constexpr (std::is_same_v<T, SReturn>) {
            if (current_->result_type == Ty::Void) {
              if (n.value)
                error(s.pos, "void function cannot return a value");
            } else {
              if (!n.value) error(s.pos, "return needs a value here");
              require(*n.value, Ty::Int, ctx);
            }
          } else if constexpr (std::is_same_v<T, SCallAssign>) {
            check_call(s.pos, n, assigned);
          } else if constexpr (std::is_same_v<T, SBlock>) {
            scope_.push();
            for (auto& c : n.stmts) check_stmt(*c, assigned);
            scope_.pop();
          }
        },
        s.node);
  }

  void check_call(SourcePos pos, SCallAssign& call,
                  std::set<std::string>& assigned) {
    auto it = fns_.find(call.callee);
    if (it == fns_.end())
      error(pos, "call to unknown function '" + call.callee + "'");
    const Program& callee = *it->second;
    if (callee.result_type != Ty::Int)
      error(pos, "'" + call.callee + "' does not return a value");
    if (writes_.at(call.callee))
      error(pos, "cannot call '" + call.callee +
                     "': it writes to an array parameter");
    if (call.args.size() != callee.params.size())
      error(pos, "'" + call.callee + "' expects " +
                     std::to_string(callee.params.size()) + " arguments, got " +
                     std::to_string(call.args.size()));
    ExprCtx ctx{false, false, current_->result_type, &assigned};
    for (size_t i = 0; i < call.args.size(); ++i)
      require(*call.args[i], callee.params[i].type, ctx);
    if (call.declares_target) {
      declare_local(pos, call.target);
    } else {
      const Ty* ty = scope_.lookup(call.target);
      if (!ty) error(pos, "assignment to undeclared '" + call.target + "'");
      if (*ty != Ty::Int)
        error(pos, "cannot assign to array '" + call.target + "'");
    }
    assigned.insert(call.target);
  }

  void declare_local(SourcePos pos, const std::string& name) {
    if (scope_.declared(name))
      error(pos, "'" + name + "' is already declared");
    scope_.declare(name, Ty::Int);
  }

  // --- expressions and formulas -------------------------------------------

  void require(Expr& e, Ty want, ExprCtx& ctx) {
    Ty got = check_expr(e, ctx);
    if (got != want)
      error(e.pos, std::string("expected ") + ty_name(want) + ", found " +
                       ty_name(got));
  }

  Ty check_expr(Expr& e, ExprCtx& ctx) {
    Ty ty = std::visit(
        [&](auto& n) -> Ty {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            return Ty::Int;
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            return Ty::Bool;
          } else if constexpr (std::is_same_v<T, VarRef>) {
            const Ty* found = scope_.lookup(n.name);
            if (!found) error(e.pos, "undeclared variable '" + n.name + "'");
            if (*found == Ty::Int && ctx.assigned &&
                !ctx.assigned->count(n.name))
              error(e.pos, "'" + n.name + "' may be used before assignment");
            return *found;
          } else if constexpr (std::is_same_v<T, ArrayRead>) {
            const Ty* found = scope_.lookup(n.array);
            if (!found || *found != Ty::IntArray)
              error(e.pos, "'" + n.array + "' is not an array");
            require(*n.index, Ty::Int, ctx);
            return Ty::Int;
          } else if constexpr (std::is_same_v<T, LengthOf>) {
            const Ty* found = scope_.lookup(n.array);
            if (!found || *found != Ty::IntArray)
              error(e.pos, "'" + n.array + "' is not an array");
            return Ty::Int;
          } else if constexpr (std::is_same_v<T, Unary>) {
            Ty want = n.op == UnOp::Neg ? Ty::Int : Ty::Bool;
            require(*n.operand, want, ctx);
            return want;
          } else if constexpr (std::is_same_v<T, Binary>) {
            switch (n.op) {
              case BinOp::Add:
              case BinOp::Sub:
              case BinOp::Mul:
              case BinOp::Div:
                require(*n.lhs, Ty::Int, ctx);
                require(*n.rhs, Ty::Int, ctx);
                return Ty::Int;
              case BinOp::Eq:
              case BinOp::Ne:
              case BinOp::Lt:
              case BinOp::Le:
              case BinOp::Gt:
              case BinOp::Ge:
                require(*n.lhs, Ty::Int, ctx);
                require(*n.rhs, Ty::Int, ctx);
                return Ty::Bool;
              case BinOp::Implies:
                if (!ctx.in_contract)
                  error(e.pos, "'==>' is only allowed in contracts");
                [[fallthrough]];
              case BinOp::And:
              case BinOp::Or:
                require(*n.lhs, Ty::Bool, ctx);
                require(*n.rhs, Ty::Bool, ctx);
                return Ty::Bool;
            }
            error(e.pos, "bad operator");
          } else if constexpr (std::is_same_v<T, ResultRef>) {
            if (!ctx.in_ensures)
              error(e.pos, "'\\result' is only allowed in ensures clauses");
            if (ctx.result_ty != Ty::Int)
              error(e.pos, "'\\result' used in a void function");
            return Ty::Int;
          } else {
            // QuantExpr / AllDiffRef that was not lifted to a formula
            error(e.pos,
                  "quantifiers are only allowed at the top of contract "
                  "clauses");
          }
        },
        e.node);
    e.type = ty;
    return ty;
  }

  void check_formula(Formula& f, ExprCtx& ctx) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, FAtom>) {
            require(*n.expr, Ty::Bool, ctx);
          } else if constexpr (std::is_same_v<T, FNot>) {
            check_formula(*n.f, ctx);
          } else if constexpr (std::is_same_v<T, FAnd> ||
                               std::is_same_v<T, FOr> ||
                               std::is_same_v<T, FImplies>) {
            check_formula(*n.lhs, ctx);
            check_formula(*n.rhs, ctx);
          } else if constexpr (std::is_same_v<T, FForAll>) {
            require(*n.lo, Ty::Int, ctx);
            require(*n.hi, Ty::Int, ctx);
            if (scope_.declared(n.id))
              error(f.pos, "quantified variable '" + n.id + "' shadows another");
            scope_.push();
            scope_.declare(n.id, Ty::Int);
            check_formula(*n.body, ctx);
            scope_.pop();
          } else if constexpr (std::is_same_v<T, FAllDifferent>) {
            const Ty* found = scope_.lookup(n.array);
            if (!found || *found != Ty::IntArray)
              error(f.pos, "'" + n.array + "' is not an array");
          }
        },
        f.node);
  }

  Unit& unit_;
  std::string file_;
  Program* current_ = nullptr;
  Scope scope_;
  std::unordered_map<std::string, Program*> fns_;
  std::unordered_map<std::string, std::vector<std::pair<SourcePos, std::string>>>
      calls_;
  std::unordered_map<std::string, bool> writes_;
};

}  // namespace

void desugar(Program& p) {
  for (auto& s : p.body) desugar_stmt(*s);
}

void desugar(Unit& u) {
  for (auto& p : u.programs) desugar(p);
}

void typecheck(Unit& u, const std::string& file) {
  desugar(u);
  Checker(u, file).run();
}

void typecheck(Program& p, const std::string& file) {
  Unit u;
  u.programs.push_back(std::move(p));
  try {
    typecheck(u, file);
  } catch (...) {
    p = std::move(u.programs[0]);
    throw;
  }
  p = std::move(u.programs[0]);
}

}  // namespace mimpv::lang
