#include "mimpv/pretty.hpp"

#include <sstream>

namespace mimpv::lang {

namespace {

// Higher binds tighter. Matches the parser's precedence chain; a child is
// parenthesized when its level is below what its context requires.
int binop_prec(BinOp op) {
  switch (op) {
    case BinOp::Implies: return 1;
    case BinOp::Or: return 2;
    case BinOp::And: return 3;
    case BinOp::Eq:
    case BinOp::Ne: return 4;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 5;
    case BinOp::Add:
    case BinOp::Sub: return 6;
    case BinOp::Mul:
    case BinOp::Div: return 7;
  }
  return 10;
}

const char* binop_sym(BinOp op) {
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

class Printer {
 public:
  std::string take() { return os_.str(); }

  void expr(const Expr& e, int min_prec) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            os_ << n.value;
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            os_ << (n.value ? "true" : "false");
          } else if constexpr (std::is_same_v<T, VarRef>) {
            os_ << n.name;
          } else if constexpr (std::is_same_v<T, ResultRef>) {
            os_ << "\\result";
          } else if constexpr (std::is_same_v<T, LengthOf>) {
            os_ << n.array << ".length";
          } else if constexpr (std::is_same_v<T, AllDiffRef>) {
            os_ << "\\alldifferent " << n.array;
          } else if constexpr (std::is_same_v<T, ArrayRead>) {
            os_ << n.array << "[";
            expr(*n.index, 1);
            os_ << "]";
          } else if constexpr (std::is_same_v<T, Unary>) {
            bool paren = min_prec > 8;
            if (paren) os_ << "(";
            os_ << (n.op == UnOp::Neg ? "-" : "!");
            expr(*n.operand, 9);
            if (paren) os_ << ")";
          } else if constexpr (std::is_same_v<T, Binary>) {
            int p = binop_prec(n.op);
            bool paren = p < min_prec;
            if (paren) os_ << "(";
            bool right_assoc = n.op == BinOp::Implies;
            expr(*n.lhs, right_assoc ? p + 1 : p);
            os_ << " " << binop_sym(n.op) << " ";
            expr(*n.rhs, right_assoc ? p : p + 1);
            if (paren) os_ << ")";
          } else if constexpr (std::is_same_v<T, QuantExpr>) {
            bool paren = min_prec > 1;
            if (paren) os_ << "(";
            os_ << "\\forall int " << n.id << "; ";
            expr(*n.range, 1);
            os_ << "; ";
            expr(*n.body, 1);
            if (paren) os_ << ")";
          }
        },
        e.node);
  }

  void formula(const Formula& f, int min_prec) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, FAtom>) {
            expr(*n.expr, min_prec);
          } else if constexpr (std::is_same_v<T, FNot>) {
            bool paren = min_prec > 8;
            if (paren) os_ << "(";
            os_ << "!";
            formula(*n.f, 9);
            if (paren) os_ << ")";
          } else if constexpr (std::is_same_v<T, FAnd>) {
            binary_formula(*n.lhs, *n.rhs, "&&", 3, false, min_prec);
          } else if constexpr (std::is_same_v<T, FOr>) {
            binary_formula(*n.lhs, *n.rhs, "||", 2, false, min_prec);
          } else if constexpr (std::is_same_v<T, FImplies>) {
            binary_formula(*n.lhs, *n.rhs, "==>", 1, true, min_prec);
          } else if constexpr (std::is_same_v<T, FForAll>) {
            bool paren = min_prec > 1;
            if (paren) os_ << "(";
            os_ << "\\forall int " << n.id << "; (";
            expr(*n.lo, 5);
            os_ << " <= " << n.id << " && " << n.id << " < ";
            expr(*n.hi, 5);
            os_ << "); ";
            formula(*n.body, 1);
            if (paren) os_ << ")";
          } else if constexpr (std::is_same_v<T, FAllDifferent>) {
            os_ << "\\alldifferent " << n.array;
          }
        },
        f.node);
  }

  void stmt(const Stmt& s, int ind) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, SBlock>) {
            indent(ind);
            os_ << "{\n";
            for (const auto& c : n.stmts) stmt(*c, ind + 1);
            indent(ind);
            os_ << "}\n";
          } else if constexpr (std::is_same_v<T, SIf>) {
            indent(ind);
            if_stmt(n, ind);
          } else if constexpr (std::is_same_v<T, SWhile>) {
            indent(ind);
            os_ << "while (";
            expr(*n.cond, 1);
            os_ << ")";
            body(n.body, ind);
          } else if constexpr (std::is_same_v<T, SFor>) {
            indent(ind);
            os_ << "for (";
            if (n.init) stmt_inline(*n.init);
            os_ << "; ";
            if (n.cond) expr(*n.cond, 1);
            os_ << "; ";
            if (n.step) stmt_inline(*n.step);
            os_ << ")";
            body(n.body, ind);
          } else {
            indent(ind);
            stmt_inline(s);
            os_ << ";\n";
          }
        },
        s.node);
  }

  void program(const Program& p) {
    if (p.contract.requires_f || p.contract.ensures_f) {
      bool first = true;
      os_ << "/*@";
      if (p.contract.requires_f) {
        os_ << " requires ";
        formula(*p.contract.requires_f, 1);
        os_ << ";\n";
        first = false;
      }
      if (p.contract.ensures_f) {
        os_ << (first ? " " : "  @ ") << "ensures ";
        formula(*p.contract.ensures_f, 1);
        os_ << ";\n";
      }
      os_ << "  @*/\n";
    }
    os_ << ty_name(p.result_type) << " " << p.name << "(";
    for (size_t i = 0; i < p.params.size(); ++i) {
      if (i) os_ << ", ";
      os_ << (p.params[i].type == Ty::IntArray ? "int[]" : "int") << " "
          << p.params[i].name;
    }
    os_ << ") {\n";
    for (const auto& s : p.body) stmt(*s, 1);
    os_ << "}\n";
  }

 private:
  void indent(int ind) {
    for (int i = 0; i < ind; ++i) os_ << "    ";
  }

  // Declarations, assignments and calls without indent, ';' or newline;
  // shared between statement position and for-loop headers.
  void stmt_inline(const Stmt& s) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, SDecl>) {
            os_ << "int " << n.name;
            if (n.init) {
              os_ << " = ";
              expr(*n.init, 1);
            }
          } else if constexpr (std::is_same_v<T, SAssign>) {
            os_ << n.name << " = ";
            expr(*n.value, 1);
          } else if constexpr (std::is_same_v<T, SArrayAssign>) {
            os_ << n.array << "[";
            expr(*n.index, 1);
            os_ << "] = ";
            expr(*n.value, 1);
          } else if constexpr (std::is_same_v<T, SCallAssign>) {
            if (n.declares_target) os_ << "int ";
            os_ << n.target << " = " << n.callee << "(";
            for (size_t i = 0; i < n.args.size(); ++i) {
              if (i) os_ << ", ";
              expr(*n.args[i], 1);
            }
            os_ << ")";
          } else if constexpr (std::is_same_v<T, SReturn>) {
            os_ << "return";
            if (n.value) {
              os_ << " ";
              expr(*n.value, 1);
            }
          } else {
            os_ << "/* unexpected */";
          }
        },
        s.node);
  }

  // Loop or branch body: blocks open on the same line, single statements go
  // on the next line one level deeper. Ends with a newline either way.
  void body(const StmtPtr& s, int ind) {
    if (std::holds_alternative<SBlock>(s->node)) {
      os_ << " {\n";
      for (const auto& c : std::get<SBlock>(s->node).stmts) stmt(*c, ind + 1);
      indent(ind);
      os_ << "}\n";
    } else {
      os_ << "\n";
      stmt(*s, ind + 1);
    }
  }

  // Indent for the `if` keyword has already been printed (supports the
  // `else if` continuation).
  void if_stmt(const SIf& n, int ind) {
    os_ << "if (";
    expr(*n.cond, 1);
    os_ << ")";
    bool then_block = std::holds_alternative<SBlock>(n.then_branch->node);
    if (then_block) {
      os_ << " {\n";
      for (const auto& c : std::get<SBlock>(n.then_branch->node).stmts)
        stmt(*c, ind + 1);
      indent(ind);
      os_ << "}";
    } else {
      os_ << "\n";
      stmt(*n.then_branch, ind + 1);
    }
    if (!n.else_branch) {
      if (then_block) os_ << "\n";
      return;
    }
    if (then_block) {
      os_ << " else";
    } else {
      indent(ind);
      os_ << "else";
    }
    if (auto* nested = std::get_if<SIf>(&n.else_branch->node)) {
      os_ << " ";
      if_stmt(*nested, ind);
    } else if (std::holds_alternative<SBlock>(n.else_branch->node)) {
      os_ << " {\n";
      for (const auto& c : std::get<SBlock>(n.else_branch->node).stmts)
        stmt(*c, ind + 1);
      indent(ind);
      os_ << "}\n";
    } else {
      os_ << "\n";
      stmt(*n.else_branch, ind + 1);
    }
  }

  void binary_formula(const Formula& lhs, const Formula& rhs, const char* sym,
                      int p, bool right_assoc, int min_prec) {
    bool paren = p < min_prec;
    if (paren) os_ << "(";
    formula(lhs, right_assoc ? p + 1 : p);
    os_ << " " << sym << " ";
    formula(rhs, right_assoc ? p : p + 1);
    if (paren) os_ << ")";
  }

  std::ostringstream os_;
};

}  // namespace

std::string pretty(const Expr& e) {
  Printer p;
  p.expr(e, 1);
  return p.take();
}

std::string pretty(const Formula& f) {
  Printer p;
  p.formula(f, 1);
  return p.take();
}

std::string pretty(const Stmt& s, int indent) {
  Printer p;
  p.stmt(s, indent);
  return p.take();
}

std::string pretty(const Program& p) {
  Printer pr;
  pr.program(p);
  return pr.take();
}

std::string pretty(const Unit& u) {
  std::ostringstream out;
  for (size_t i = 0; i < u.programs.size(); ++i) {
    if (i) out << "\n";
    out << pretty(u.programs[i]);
  }
  return out.str();
}

}  // namespace mimpv::lang
