#include "mimpv/ast.hpp"

namespace mimpv::lang {

const char* ty_name(Ty t) {
  switch (t) {
    case Ty::Unknown: return "unknown";
    case Ty::Int: return "int";
    case Ty::Bool: return "boolean";
    case Ty::IntArray: return "int[]";
    case Ty::Void: return "void";
  }
  return "?";
}

const char* binop_name(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    case BinOp::Implies: return "==>";
  }
  return "?";
}

static ExprPtr clone_opt(const ExprPtr& e) { return e ? clone(*e) : nullptr; }

ExprPtr clone(const Expr& e) {
  auto out = std::make_unique<Expr>();
  out->pos = e.pos;
  out->type = e.type;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit> || std::is_same_v<T, BoolLit> ||
                      std::is_same_v<T, VarRef> || std::is_same_v<T, LengthOf> ||
                      std::is_same_v<T, ResultRef> ||
                      std::is_same_v<T, AllDiffRef>) {
          out->node = n;
        } else if constexpr (std::is_same_v<T, ArrayRead>) {
          out->node = ArrayRead{n.array, clone(*n.index)};
        } else if constexpr (std::is_same_v<T, Unary>) {
          out->node = Unary{n.op, clone(*n.operand)};
        } else if constexpr (std::is_same_v<T, Binary>) {
          out->node = Binary{n.op, clone(*n.lhs), clone(*n.rhs)};
        } else if constexpr (std::is_same_v<T, QuantExpr>) {
          out->node = QuantExpr{n.id, clone(*n.range), clone(*n.body)};
        }
      },
      e.node);
  return out;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  bool eq = false;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, IntLit>) {
          eq = x.value == y.value;
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          eq = x.value == y.value;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          eq = x.name == y.name;
        } else if constexpr (std::is_same_v<T, ArrayRead>) {
          eq = x.array == y.array && expr_equal(*x.index, *y.index);
        } else if constexpr (std::is_same_v<T, LengthOf>) {
          eq = x.array == y.array;
        } else if constexpr (std::is_same_v<T, Unary>) {
          eq = x.op == y.op && expr_equal(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          eq = x.op == y.op && expr_equal(*x.lhs, *y.lhs) &&
               expr_equal(*x.rhs, *y.rhs);
        } else if constexpr (std::is_same_v<T, ResultRef>) {
          eq = true;
        } else if constexpr (std::is_same_v<T, QuantExpr>) {
          eq = x.id == y.id && expr_equal(*x.range, *y.range) &&
               expr_equal(*x.body, *y.body);
        } else if constexpr (std::is_same_v<T, AllDiffRef>) {
          eq = x.array == y.array;
        }
      },
      a.node);
  return eq;
}

FormulaPtr clone(const Formula& f) {
  auto out = std::make_unique<Formula>();
  out->pos = f.pos;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FAtom>) {
          out->node = FAtom{clone(*n.expr)};
        } else if constexpr (std::is_same_v<T, FNot>) {
          out->node = FNot{clone(*n.f)};
        } else if constexpr (std::is_same_v<T, FAnd>) {
          out->node = FAnd{clone(*n.lhs), clone(*n.rhs)};
        } else if constexpr (std::is_same_v<T, FOr>) {
          out->node = FOr{clone(*n.lhs), clone(*n.rhs)};
        } else if constexpr (std::is_same_v<T, FImplies>) {
          out->node = FImplies{clone(*n.lhs), clone(*n.rhs)};
        } else if constexpr (std::is_same_v<T, FForAll>) {
          out->node = FForAll{n.id, clone(*n.lo), clone(*n.hi), clone(*n.body)};
        } else if constexpr (std::is_same_v<T, FAllDifferent>) {
          out->node = n;
        }
      },
      f.node);
  return out;
}

bool formula_equal(const Formula& a, const Formula& b) {
  if (a.node.index() != b.node.index()) return false;
  bool eq = false;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, FAtom>) {
          eq = expr_equal(*x.expr, *y.expr);
        } else if constexpr (std::is_same_v<T, FNot>) {
          eq = formula_equal(*x.f, *y.f);
        } else if constexpr (std::is_same_v<T, FAnd> ||
                             std::is_same_v<T, FOr> ||
                             std::is_same_v<T, FImplies>) {
          eq = formula_equal(*x.lhs, *y.lhs) && formula_equal(*x.rhs, *y.rhs);
        } else if constexpr (std::is_same_v<T, FForAll>) {
          eq = x.id == y.id && expr_equal(*x.lo, *y.lo) &&
               expr_equal(*x.hi, *y.hi) && formula_equal(*x.body, *y.body);
        } else if constexpr (std::is_same_v<T, FAllDifferent>) {
          eq = x.array == y.array;
        }
      },
      a.node);
  return eq;
}

static StmtPtr clone_opt(const StmtPtr& s) { return s ? clone(*s) : nullptr; }

StmtPtr clone(const Stmt& s) {
  auto out = std::make_unique<Stmt>();
  out->pos = s.pos;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SDecl>) {
          out->node = SDecl{n.name, clone_opt(n.init)};
        } else if constexpr (std::is_same_v<T, SAssign>) {
          out->node = SAssign{n.name, clone(*n.value)};
        } else if constexpr (std::is_same_v<T, SArrayAssign>) {
          out->node = SArrayAssign{n.array, clone(*n.index), clone(*n.value)};
        } else if constexpr (std::is_same_v<T, SIf>) {
          out->node = SIf{clone(*n.cond), clone(*n.then_branch),
                          clone_opt(n.else_branch)};
        } else if constexpr (std::is_same_v<T, SWhile>) {
          out->node = SWhile{clone(*n.cond), clone(*n.body)};
        } else if constexpr (std::is_same_v<T, SFor>) {
          out->node = SFor{clone_opt(n.init), clone_opt(n.cond),
                           clone_opt(n.step), clone(*n.body)};
        } else if constexpr (std::is_same_v<T, SReturn>) {
          out->node = SReturn{clone_opt(n.value)};
        } else if constexpr (std::is_same_v<T, SCallAssign>) {
          SCallAssign c;
          c.target = n.target;
          c.declares_target = n.declares_target;
          c.callee = n.callee;
          for (const auto& a : n.args) c.args.push_back(clone(*a));
          out->node = std::move(c);
        } else if constexpr (std::is_same_v<T, SBlock>) {
          SBlock b;
          for (const auto& st : n.stmts) b.stmts.push_back(clone(*st));
          out->node = std::move(b);
        }
      },
      s.node);
  return out;
}

static bool stmt_equal_opt(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return !a && !b;
  return stmt_equal(*a, *b);
}

static bool expr_equal_opt(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return expr_equal(*a, *b);
}

bool stmt_equal(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  bool eq = false;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, SDecl>) {
          eq = x.name == y.name && expr_equal_opt(x.init, y.init);
        } else if constexpr (std::is_same_v<T, SAssign>) {
          eq = x.name == y.name && expr_equal(*x.value, *y.value);
        } else if constexpr (std::is_same_v<T, SArrayAssign>) {
          eq = x.array == y.array && expr_equal(*x.index, *y.index) &&
               expr_equal(*x.value, *y.value);
        } else if constexpr (std::is_same_v<T, SIf>) {
          eq = expr_equal(*x.cond, *y.cond) &&
               stmt_equal(*x.then_branch, *y.then_branch) &&
               stmt_equal_opt(x.else_branch, y.else_branch);
        } else if constexpr (std::is_same_v<T, SWhile>) {
          eq = expr_equal(*x.cond, *y.cond) && stmt_equal(*x.body, *y.body);
        } else if constexpr (std::is_same_v<T, SFor>) {
          eq = stmt_equal_opt(x.init, y.init) && expr_equal_opt(x.cond, y.cond) &&
               stmt_equal_opt(x.step, y.step) && stmt_equal(*x.body, *y.body);
        } else if constexpr (std::is_same_v<T, SReturn>) {
          eq = expr_equal_opt(x.value, y.value);
        } else if constexpr (std::is_same_v<T, SCallAssign>) {
          eq = x.target == y.target && x.declares_target == y.declares_target &&
               x.callee == y.callee && x.args.size() == y.args.size();
          if (eq)
            for (size_t i = 0; i < x.args.size(); ++i)
              if (!expr_equal(*x.args[i], *y.args[i])) { eq = false; break; }
        } else if constexpr (std::is_same_v<T, SBlock>) {
          eq = x.stmts.size() == y.stmts.size();
          if (eq)
            for (size_t i = 0; i < x.stmts.size(); ++i)
              if (!stmt_equal(*x.stmts[i], *y.stmts[i])) { eq = false; break; }
        }
      },
      a.node);
  return eq;
}

static bool formula_equal_opt(const FormulaPtr& a, const FormulaPtr& b) {
  if (!a || !b) return !a && !b;
  return formula_equal(*a, *b);
}

bool program_equal(const Program& a, const Program& b) {
  if (a.name != b.name || a.result_type != b.result_type) return false;
  if (a.params.size() != b.params.size()) return false;
  for (size_t i = 0; i < a.params.size(); ++i)
    if (a.params[i].name != b.params[i].name ||
        a.params[i].type != b.params[i].type)
      return false;
  if (!formula_equal_opt(a.contract.requires_f, b.contract.requires_f) ||
      !formula_equal_opt(a.contract.ensures_f, b.contract.ensures_f))
    return false;
  if (a.body.size() != b.body.size()) return false;
  for (size_t i = 0; i < a.body.size(); ++i)
    if (!stmt_equal(*a.body[i], *b.body[i])) return false;
  return true;
}

Program clone(const Program& p) {
  Program out;
  out.pos = p.pos;
  out.name = p.name;
  out.result_type = p.result_type;
  out.params = p.params;
  if (p.contract.requires_f)
    out.contract.requires_f = clone(*p.contract.requires_f);
  if (p.contract.ensures_f)
    out.contract.ensures_f = clone(*p.contract.ensures_f);
  for (const auto& s : p.body) out.body.push_back(clone(*s));
  return out;
}

const Program* Unit::find(const std::string& name) const {
  for (const auto& p : programs)
    if (p.name == name) return &p;
  return nullptr;
}

bool unit_equal(const Unit& a, const Unit& b) {
  if (a.programs.size() != b.programs.size()) return false;
  for (size_t i = 0; i < a.programs.size(); ++i)
    if (!program_equal(a.programs[i], b.programs[i])) return false;
  return true;
}

}  // namespace mimpv::lang
