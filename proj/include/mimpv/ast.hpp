// AST for the mini imperative language accepted by the verifier.
//
// A compilation unit is a list of annotated functions. Function bodies use a
// small statement language (decl/assign/if/while/for/return/call); contracts
// are boolean formulas over the parameters, array contents and \result.
// Positions are kept for diagnostics; structural equality ignores them.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mimpv::lang {

struct SourcePos {
  int line = 0;
  int col = 0;
};

// Types checked by the frontend. Expressions are Int or Bool; declarations
// and parameters are Int or IntArray; a function returns Int or Void.
enum class Ty { Unknown, Int, Bool, IntArray, Void };

const char* ty_name(Ty t);

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class UnOp { Neg, Not };
enum class BinOp {
  Add, Sub, Mul, Div,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or,
  Implies,  // contracts only
};

const char* binop_name(BinOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct IntLit { std::int64_t value = 0; };
struct BoolLit { bool value = false; };
struct VarRef { std::string name; };
struct ArrayRead { std::string array; ExprPtr index; };
struct LengthOf { std::string array; };
struct Unary { UnOp op; ExprPtr operand; };
struct Binary { BinOp op; ExprPtr lhs, rhs; };
struct ResultRef {};                 // \result, ensures clauses only
struct QuantExpr {                   // \forall int id; (range); body, contracts only
  std::string id;
  ExprPtr range;
  ExprPtr body;
};
struct AllDiffRef { std::string array; };  // \alldifferent a, contracts only

struct Expr {
  SourcePos pos;
  Ty type = Ty::Unknown;  // filled in by the typechecker
  std::variant<IntLit, BoolLit, VarRef, ArrayRead, LengthOf, Unary, Binary,
               ResultRef, QuantExpr, AllDiffRef>
      node;
};

ExprPtr clone(const Expr& e);
bool expr_equal(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// Contract formulas
// ---------------------------------------------------------------------------

struct Formula;
using FormulaPtr = std::unique_ptr<Formula>;

struct FAtom { ExprPtr expr; };      // boolean-typed expression
struct FNot { FormulaPtr f; };
struct FAnd { FormulaPtr lhs, rhs; };
struct FOr { FormulaPtr lhs, rhs; };
struct FImplies { FormulaPtr lhs, rhs; };
struct FForAll {                     // index ranges over [lo, hi)
  std::string id;
  ExprPtr lo;
  ExprPtr hi;
  FormulaPtr body;
};
struct FAllDifferent { std::string array; };

struct Formula {
  SourcePos pos;
  std::variant<FAtom, FNot, FAnd, FOr, FImplies, FForAll, FAllDifferent> node;
};

FormulaPtr clone(const Formula& f);
bool formula_equal(const Formula& a, const Formula& b);

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct SDecl {                       // int x; / int x = e;
  std::string name;
  ExprPtr init;                      // may be null
};
struct SAssign { std::string name; ExprPtr value; };
struct SArrayAssign { std::string array; ExprPtr index; ExprPtr value; };
struct SIf {
  ExprPtr cond;
  StmtPtr then_branch;
  StmtPtr else_branch;               // may be null
};
struct SWhile { ExprPtr cond; StmtPtr body; };
struct SFor {                        // desugared to SWhile before verification
  StmtPtr init;                      // may be null; SDecl or SAssign
  ExprPtr cond;                      // may be null (meaning true)
  StmtPtr step;                      // may be null; SAssign
  StmtPtr body;
};
struct SReturn { ExprPtr value; };   // value null for bare return in void fn
struct SCallAssign {                 // x = f(a, b); / int x = f(a, b);
  std::string target;
  bool declares_target = false;
  std::string callee;
  std::vector<ExprPtr> args;
};
struct SBlock { std::vector<StmtPtr> stmts; };

struct Stmt {
  SourcePos pos;
  std::variant<SDecl, SAssign, SArrayAssign, SIf, SWhile, SFor, SReturn,
               SCallAssign, SBlock>
      node;
};

StmtPtr clone(const Stmt& s);
bool stmt_equal(const Stmt& a, const Stmt& b);

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

struct Param {
  SourcePos pos;
  std::string name;
  Ty type = Ty::Int;                 // Int or IntArray
};

struct Contract {
  FormulaPtr requires_f;             // null means true
  FormulaPtr ensures_f;              // null means true
};

struct Program {
  SourcePos pos;
  std::string name;
  Ty result_type = Ty::Int;          // Int or Void
  std::vector<Param> params;
  Contract contract;
  std::vector<StmtPtr> body;
};

bool program_equal(const Program& a, const Program& b);
Program clone(const Program& p);

// A source file may hold several functions; the first is the default
// verification target and the rest provide contracts for calls.
struct Unit {
  std::vector<Program> programs;

  const Program* find(const std::string& name) const;
};

bool unit_equal(const Unit& a, const Unit& b);

}  // namespace mimpv::lang
