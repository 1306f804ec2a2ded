#include "mimpv/parser.hpp"

#include <utility>

namespace mimpv::lang {

namespace {

bool contains_var(const Expr& e, const std::string& name) {
  bool found = false;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRef>) {
          found = n.name == name;
        } else if constexpr (std::is_same_v<T, ArrayRead>) {
          found = n.array == name || contains_var(*n.index, name);
        } else if constexpr (std::is_same_v<T, Unary>) {
          found = contains_var(*n.operand, name);
        } else if constexpr (std::is_same_v<T, Binary>) {
          found = contains_var(*n.lhs, name) || contains_var(*n.rhs, name);
        } else if constexpr (std::is_same_v<T, QuantExpr>) {
          found = contains_var(*n.range, name) || contains_var(*n.body, name);
        }
      },
      e.node);
  return found;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string file)
      : toks_(std::move(toks)), file_(std::move(file)) {}

  Unit parse_unit() {
    Unit unit;
    while (!at(Tok::End)) unit.programs.push_back(parse_function());
    if (unit.programs.empty())
      error(cur().pos, "expected a function definition");
    return unit;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  const Token& peek(size_t k = 1) const {
    size_t j = i_ + k;
    return j < toks_.size() ? toks_[j] : toks_.back();
  }
  bool at(Tok k) const { return cur().kind == k; }

  Token advance() { return toks_[i_++]; }

  Token expect(Tok k, const char* what) {
    if (!at(k))
      error(cur().pos, std::string("expected ") + tok_name(k) + " " + what +
                           ", found " + tok_name(cur().kind));
    return advance();
  }

  bool accept(Tok k) {
    if (at(k)) {
      ++i_;
      return true;
    }
    return false;
  }

  [[noreturn]] void error(SourcePos p, const std::string& msg) {
    throw ParseError(file_, p, msg);
  }

  // --- functions -----------------------------------------------------------

  Program parse_function() {
    Program p;
    p.pos = cur().pos;
    if (at(Tok::ContractOpen)) parse_contract(p.contract);
    if (accept(Tok::KwVoid)) {
      p.result_type = Ty::Void;
    } else {
      expect(Tok::KwInt, "as result type");
      p.result_type = Ty::Int;
    }
    p.pos = cur().pos;
    p.name = expect(Tok::Ident, "as function name").text;
    expect(Tok::LParen, "before parameters");
    if (!at(Tok::RParen)) {
      do {
        p.params.push_back(parse_param());
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "after parameters");
    expect(Tok::LBrace, "to open function body");
    while (!at(Tok::RBrace)) p.body.push_back(parse_stmt());
    expect(Tok::RBrace, "to close function body");
    return p;
  }

  Param parse_param() {
    Param param;
    param.pos = cur().pos;
    expect(Tok::KwInt, "in parameter");
    param.type = Ty::Int;
    if (accept(Tok::LBracket)) {
      expect(Tok::RBracket, "in array parameter type");
      param.type = Ty::IntArray;
    }
    param.name = expect(Tok::Ident, "as parameter name").text;
    return param;
  }

  void parse_contract(Contract& c) {
    expect(Tok::ContractOpen, "to open contract");
    while (!at(Tok::ContractClose)) {
      bool is_requires;
      if (accept(Tok::KwRequires)) {
        is_requires = true;
      } else if (accept(Tok::KwEnsures)) {
        is_requires = false;
      } else {
        error(cur().pos, std::string("expected 'requires' or 'ensures', found ") +
                             tok_name(cur().kind));
      }
      ExprPtr e = parse_expr();
      expect(Tok::Semi, "after contract clause");
      FormulaPtr f = formula_from_expr(std::move(e));
      FormulaPtr& slot = is_requires ? c.requires_f : c.ensures_f;
      if (!slot) {
        slot = std::move(f);
      } else {
        auto conj = std::make_unique<Formula>();
        conj->pos = slot->pos;
        conj->node = FAnd{std::move(slot), std::move(f)};
        slot = std::move(conj);
      }
    }
    expect(Tok::ContractClose, "to close contract");
  }

  // --- statements ----------------------------------------------------------

  StmtPtr parse_stmt() {
    SourcePos p = cur().pos;
    switch (cur().kind) {
      case Tok::LBrace: {
        advance();
        SBlock b;
        while (!at(Tok::RBrace)) b.stmts.push_back(parse_stmt());
        expect(Tok::RBrace, "to close block");
        return make_stmt(p, std::move(b));
      }
      case Tok::KwInt:
        return parse_decl();
      case Tok::KwIf: {
        advance();
        expect(Tok::LParen, "after 'if'");
        ExprPtr cond = parse_expr();
        expect(Tok::RParen, "after condition");
        StmtPtr then_branch = parse_stmt();
        StmtPtr else_branch;
        if (accept(Tok::KwElse)) else_branch = parse_stmt();
        return make_stmt(
            p, SIf{std::move(cond), std::move(then_branch), std::move(else_branch)});
      }
      case Tok::KwWhile: {
        advance();
        expect(Tok::LParen, "after 'while'");
        ExprPtr cond = parse_expr();
        expect(Tok::RParen, "after condition");
        StmtPtr body = parse_stmt();
        return make_stmt(p, SWhile{std::move(cond), std::move(body)});
      }
      case Tok::KwFor:
        return parse_for();
      case Tok::KwReturn: {
        advance();
        ExprPtr v;
        if (!at(Tok::Semi)) v = parse_expr();
        expect(Tok::Semi, "after return");
        return make_stmt(p, SReturn{std::move(v)});
      }
      default:
        return parse_assign_like(/*need_semi=*/true);
    }
  }

  StmtPtr parse_decl() {
    SourcePos p = cur().pos;
    expect(Tok::KwInt, "in declaration");
    if (at(Tok::LBracket))
      error(cur().pos, "array variables are only allowed as parameters");
    std::string name = expect(Tok::Ident, "as variable name").text;
    ExprPtr init;
    if (accept(Tok::Assign)) {
      if (at(Tok::Ident) && peek().kind == Tok::LParen) {
        SCallAssign call = parse_call_tail(name);
        call.declares_target = true;
        expect(Tok::Semi, "after declaration");
        return make_stmt(p, std::move(call));
      }
      init = parse_expr();
    }
    expect(Tok::Semi, "after declaration");
    return make_stmt(p, SDecl{std::move(name), std::move(init)});
  }

  // target already consumed; cur() is the callee identifier.
  SCallAssign parse_call_tail(const std::string& target) {
    SCallAssign call;
    call.target = target;
    call.callee = expect(Tok::Ident, "as callee").text;
    expect(Tok::LParen, "in call");
    if (!at(Tok::RParen)) {
      do {
        call.args.push_back(parse_expr());
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "after call arguments");
    return call;
  }

  // assignment / array assignment / increment-decrement, used by both
  // statement position and for-loop headers.
  StmtPtr parse_assign_like(bool need_semi) {
    SourcePos p = cur().pos;
    std::string name = expect(Tok::Ident, "at start of statement").text;
    if (at(Tok::PlusPlus) || at(Tok::MinusMinus)) {
      BinOp op = at(Tok::PlusPlus) ? BinOp::Add : BinOp::Sub;
      advance();
      if (need_semi) expect(Tok::Semi, "after statement");
      auto var = std::make_unique<Expr>();
      var->pos = p;
      var->node = VarRef{name};
      auto one = std::make_unique<Expr>();
      one->pos = p;
      one->node = IntLit{1};
      auto sum = std::make_unique<Expr>();
      sum->pos = p;
      sum->node = Binary{op, std::move(var), std::move(one)};
      return make_stmt(p, SAssign{std::move(name), std::move(sum)});
    }
    if (accept(Tok::LBracket)) {
      ExprPtr idx = parse_expr();
      expect(Tok::RBracket, "after index");
      expect(Tok::Assign, "in array assignment");
      ExprPtr val = parse_expr();
      if (need_semi) expect(Tok::Semi, "after statement");
      return make_stmt(p,
                       SArrayAssign{std::move(name), std::move(idx), std::move(val)});
    }
    expect(Tok::Assign, "in assignment");
    if (at(Tok::Ident) && peek().kind == Tok::LParen) {
      SCallAssign call = parse_call_tail(name);
      if (need_semi) expect(Tok::Semi, "after statement");
      return make_stmt(p, std::move(call));
    }
    ExprPtr val = parse_expr();
    if (need_semi) expect(Tok::Semi, "after statement");
    return make_stmt(p, SAssign{std::move(name), std::move(val)});
  }

  StmtPtr parse_for() {
    SourcePos p = cur().pos;
    expect(Tok::KwFor, "at loop");
    expect(Tok::LParen, "after 'for'");
    StmtPtr init;
    if (!at(Tok::Semi)) {
      if (at(Tok::KwInt)) {
        advance();
        std::string name = expect(Tok::Ident, "as variable name").text;
        expect(Tok::Assign, "in for-loop initializer");
        init = make_stmt(p, SDecl{std::move(name), parse_expr()});
      } else {
        init = parse_assign_like(/*need_semi=*/false);
      }
    }
    expect(Tok::Semi, "after for-loop initializer");
    ExprPtr cond;
    if (!at(Tok::Semi)) cond = parse_expr();
    expect(Tok::Semi, "after for-loop condition");
    StmtPtr step;
    if (!at(Tok::RParen)) step = parse_assign_like(/*need_semi=*/false);
    expect(Tok::RParen, "after for-loop header");
    StmtPtr body = parse_stmt();
    return make_stmt(p, SFor{std::move(init), std::move(cond), std::move(step),
                             std::move(body)});
  }

  template <typename Node>
  StmtPtr make_stmt(SourcePos p, Node&& n) {
    auto s = std::make_unique<Stmt>();
    s->pos = p;
    s->node = std::forward<Node>(n);
    return s;
  }

  // --- expressions ---------------------------------------------------------
  //
  // implies > or > and > equality > relational > additive > multiplicative
  // > unary > postfix. `==>` is right-associative and only meaningful inside
  // contracts; the typechecker rejects it elsewhere.

  ExprPtr parse_expr() { return parse_implies(); }

  ExprPtr parse_implies() {
    ExprPtr lhs = parse_or();
    if (at(Tok::Implies)) {
      SourcePos p = cur().pos;
      advance();
      ExprPtr rhs = parse_implies();
      return make_binary(p, BinOp::Implies, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (at(Tok::OrOr)) {
      SourcePos p = cur().pos;
      advance();
      lhs = make_binary(p, BinOp::Or, std::move(lhs), parse_and());
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_equality();
    while (at(Tok::AndAnd)) {
      SourcePos p = cur().pos;
      advance();
      lhs = make_binary(p, BinOp::And, std::move(lhs), parse_equality());
    }
    return lhs;
  }

  ExprPtr parse_equality() {
    ExprPtr lhs = parse_relational();
    while (at(Tok::EqEq) || at(Tok::NotEq)) {
      SourcePos p = cur().pos;
      BinOp op = at(Tok::EqEq) ? BinOp::Eq : BinOp::Ne;
      advance();
      lhs = make_binary(p, op, std::move(lhs), parse_relational());
    }
    return lhs;
  }

  ExprPtr parse_relational() {
    ExprPtr lhs = parse_additive();
    while (at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) || at(Tok::Ge)) {
      SourcePos p = cur().pos;
      BinOp op = at(Tok::Lt)   ? BinOp::Lt
                 : at(Tok::Le) ? BinOp::Le
                 : at(Tok::Gt) ? BinOp::Gt
                               : BinOp::Ge;
      advance();
      lhs = make_binary(p, op, std::move(lhs), parse_additive());
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      SourcePos p = cur().pos;
      BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
      advance();
      lhs = make_binary(p, op, std::move(lhs), parse_multiplicative());
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      SourcePos p = cur().pos;
      BinOp op = at(Tok::Star) ? BinOp::Mul : BinOp::Div;
      advance();
      lhs = make_binary(p, op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    SourcePos p = cur().pos;
    if (accept(Tok::Minus)) {
      auto e = std::make_unique<Expr>();
      e->pos = p;
      e->node = Unary{UnOp::Neg, parse_unary()};
      return e;
    }
    if (accept(Tok::Bang)) {
      auto e = std::make_unique<Expr>();
      e->pos = p;
      e->node = Unary{UnOp::Not, parse_unary()};
      return e;
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    SourcePos p = cur().pos;
    auto e = std::make_unique<Expr>();
    e->pos = p;
    switch (cur().kind) {
      case Tok::IntLit:
        e->node = IntLit{advance().int_value};
        return e;
      case Tok::KwTrue:
        advance();
        e->node = BoolLit{true};
        return e;
      case Tok::KwFalse:
        advance();
        e->node = BoolLit{false};
        return e;
      case Tok::KwResult:
        advance();
        e->node = ResultRef{};
        return e;
      case Tok::LParen: {
        advance();
        ExprPtr inner = parse_expr();
        expect(Tok::RParen, "to close parenthesis");
        return inner;
      }
      case Tok::KwForall: {
        advance();
        expect(Tok::KwInt, "after '\\forall'");
        std::string id = expect(Tok::Ident, "as quantified variable").text;
        expect(Tok::Semi, "after quantified variable");
        ExprPtr range = parse_expr();
        expect(Tok::Semi, "after quantifier range");
        ExprPtr body = parse_expr();
        e->node = QuantExpr{std::move(id), std::move(range), std::move(body)};
        return e;
      }
      case Tok::KwAllDifferent: {
        advance();
        std::string arr = expect(Tok::Ident, "after '\\alldifferent'").text;
        e->node = AllDiffRef{std::move(arr)};
        return e;
      }
      case Tok::Ident: {
        std::string name = advance().text;
        if (accept(Tok::LBracket)) {
          ExprPtr idx = parse_expr();
          expect(Tok::RBracket, "after index");
          e->node = ArrayRead{std::move(name), std::move(idx)};
          return e;
        }
        if (accept(Tok::Dot)) {
          expect(Tok::KwLength, "after '.'");
          e->node = LengthOf{std::move(name)};
          return e;
        }
        e->node = VarRef{std::move(name)};
        return e;
      }
      default:
        error(p, std::string("expected expression, found ") +
                     tok_name(cur().kind));
    }
  }

  ExprPtr make_binary(SourcePos p, BinOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_unique<Expr>();
    e->pos = p;
    e->node = Binary{op, std::move(lhs), std::move(rhs)};
    return e;
  }

  // --- formula conversion --------------------------------------------------

  FormulaPtr formula_from_expr(ExprPtr e) {
    auto f = std::make_unique<Formula>();
    f->pos = e->pos;
    if (auto* b = std::get_if<Binary>(&e->node)) {
      switch (b->op) {
        case BinOp::And:
          f->node = FAnd{formula_from_expr(std::move(b->lhs)),
                         formula_from_expr(std::move(b->rhs))};
          return f;
        case BinOp::Or:
          f->node = FOr{formula_from_expr(std::move(b->lhs)),
                        formula_from_expr(std::move(b->rhs))};
          return f;
        case BinOp::Implies:
          f->node = FImplies{formula_from_expr(std::move(b->lhs)),
                             formula_from_expr(std::move(b->rhs))};
          return f;
        default:
          break;
      }
    }
    if (auto* u = std::get_if<Unary>(&e->node); u && u->op == UnOp::Not) {
      f->node = FNot{formula_from_expr(std::move(u->operand))};
      return f;
    }
    if (auto* q = std::get_if<QuantExpr>(&e->node)) {
      auto [lo, hi] = extract_range(*q);
      f->node = FForAll{q->id, std::move(lo), std::move(hi),
                        formula_from_expr(std::move(q->body))};
      return f;
    }
    if (auto* a = std::get_if<AllDiffRef>(&e->node)) {
      f->node = FAllDifferent{a->array};
      return f;
    }
    f->node = FAtom{std::move(e)};
    return f;
  }

  // The quantifier range must be a conjunction of a lower and an upper bound
  // on the quantified variable, e.g. (0 <= i && i < n). Returns [lo, hi).
  std::pair<ExprPtr, ExprPtr> extract_range(QuantExpr& q) {
    auto* conj = std::get_if<Binary>(&q.range->node);
    if (!conj || conj->op != BinOp::And)
      error(q.range->pos,
            "quantifier range must be a conjunction of two bounds on '" +
                q.id + "'");
    ExprPtr lo, hi;
    for (ExprPtr* side : {&conj->lhs, &conj->rhs}) {
      auto* cmp = std::get_if<Binary>(&(*side)->node);
      if (!cmp) error((*side)->pos, "quantifier range bound must be a comparison");
      auto is_id = [&](const ExprPtr& x) {
        auto* v = std::get_if<VarRef>(&x->node);
        return v && v->name == q.id;
      };
      ExprPtr bound;
      bool var_on_left;
      if (is_id(cmp->lhs) && !contains_var(*cmp->rhs, q.id)) {
        bound = std::move(cmp->rhs);
        var_on_left = true;
      } else if (is_id(cmp->rhs) && !contains_var(*cmp->lhs, q.id)) {
        bound = std::move(cmp->lhs);
        var_on_left = false;
      } else {
        error((*side)->pos, "quantifier range bound must compare '" + q.id +
                                "' against an expression not containing it");
      }
      // Normalize to  lo <= id < hi.
      BinOp op = cmp->op;
      if (!var_on_left) {
        op = op == BinOp::Lt   ? BinOp::Gt
             : op == BinOp::Le ? BinOp::Ge
             : op == BinOp::Gt ? BinOp::Lt
             : op == BinOp::Ge ? BinOp::Le
                               : op;
      }
      auto plus_one = [&](ExprPtr x) {
        auto one = std::make_unique<Expr>();
        one->pos = x->pos;
        one->node = IntLit{1};
        auto sum = std::make_unique<Expr>();
        sum->pos = x->pos;
        sum->node = Binary{BinOp::Add, std::move(x), std::move(one)};
        return sum;
      };
      switch (op) {
        case BinOp::Ge: lo = std::move(bound); break;             // id >= b
        case BinOp::Gt: lo = plus_one(std::move(bound)); break;   // id > b
        case BinOp::Lt: hi = std::move(bound); break;             // id < b
        case BinOp::Le: hi = plus_one(std::move(bound)); break;   // id <= b
        default:
          error((*side)->pos, "quantifier range bound must use <, <=, > or >=");
      }
    }
    if (!lo || !hi)
      error(q.range->pos,
            "quantifier range must provide a lower and an upper bound");
    return {std::move(lo), std::move(hi)};
  }

  std::vector<Token> toks_;
  std::string file_;
  size_t i_ = 0;
};

}  // namespace

Unit parse_unit(const std::string& source, const std::string& file) {
  return Parser(lex(source, file), file).parse_unit();
}

Program parse_program(const std::string& source, const std::string& file) {
  Unit u = parse_unit(source, file);
  if (u.programs.size() != 1)
    throw ParseError(file, u.programs[1].pos,
                     "expected exactly one function in this source");
  return std::move(u.programs[0]);
}

}  // namespace mimpv::lang
