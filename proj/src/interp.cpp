#include "mimpv/interp.hpp"

#include <stdexcept>
#include <utility>
#include <variant>

namespace mimpv::lang {

using fd::Val;

namespace {

struct Trap {
  InterpResult::Status status;
};

struct ReturnSignal {
  std::optional<Val> value;
};

Val checked(Val v) {
  if (v < fd::kDefaultLo || v > fd::kDefaultHi)
    throw Trap{InterpResult::Status::OutOfDomain};
  return v;
}

class Run {
 public:
  Run(const Unit& unit, long long step_limit, InterpResult& out)
      : unit_(unit), step_limit_(step_limit), out_(out) {}

  // One call frame. Scalars live here; arrays are heap references so
  // callee writes would be visible to the caller (Java semantics).
  struct Frame {
    std::map<std::string, Val> scalars;
    std::map<std::string, std::size_t> arrays;  // name -> heap slot
    bool top = false;
  };

  std::vector<std::vector<Val>> heap;

  std::optional<Val> call(const Program& prog, Frame frame) {
    try {
      for (const StmtPtr& s : prog.body) exec(*s, frame);
    } catch (ReturnSignal& r) {
      return r.value;
    }
    return std::nullopt;  // void function falling off the end
  }

 private:
  void step() {
    if (++out_.steps > step_limit_) throw Trap{InterpResult::Status::StepLimit};
  }

  std::vector<Val>& array(Frame& f, const std::string& name) {
    return heap[f.arrays.at(name)];
  }

  Val eval(const Expr& e, Frame& f) {
    step();
    return std::visit(
        [&](const auto& n) -> Val {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            return n.value ? 1 : 0;
          } else if constexpr (std::is_same_v<T, VarRef>) {
            return f.scalars.at(n.name);
          } else if constexpr (std::is_same_v<T, LengthOf>) {
            return static_cast<Val>(array(f, n.array).size());
          } else if constexpr (std::is_same_v<T, ArrayRead>) {
            Val i = eval(*n.index, f);
            auto& a = array(f, n.array);
            if (i < 0 || i >= static_cast<Val>(a.size()))
              throw Trap{InterpResult::Status::OutOfBounds};
            return a[static_cast<std::size_t>(i)];
          } else if constexpr (std::is_same_v<T, Unary>) {
            Val v = eval(*n.operand, f);
            return n.op == UnOp::Neg ? checked(-v) : (v == 0 ? 1 : 0);
          } else if constexpr (std::is_same_v<T, Binary>) {
            switch (n.op) {
              case BinOp::And: {
                Val l = eval(*n.lhs, f);
                return l == 0 ? 0 : eval(*n.rhs, f);
              }
              case BinOp::Or: {
                Val l = eval(*n.lhs, f);
                return l != 0 ? 1 : eval(*n.rhs, f);
              }
              case BinOp::Implies: {
                Val l = eval(*n.lhs, f);
                return l == 0 ? 1 : eval(*n.rhs, f);
              }
              default:
                break;
            }
            Val l = eval(*n.lhs, f);
            Val r = eval(*n.rhs, f);
            switch (n.op) {
              case BinOp::Add: return checked(l + r);
              case BinOp::Sub: return checked(l - r);
              case BinOp::Mul: {
                // detect overflow before it leaves the 64-bit range
                __int128 p = static_cast<__int128>(l) * r;
                if (p < fd::kDefaultLo || p > fd::kDefaultHi)
                  throw Trap{InterpResult::Status::OutOfDomain};
                return static_cast<Val>(p);
              }
              case BinOp::Div:
                if (r == 0) throw Trap{InterpResult::Status::DivideByZero};
                return checked(l / r);  // C++ division truncates like Java
              case BinOp::Eq: return l == r;
              case BinOp::Ne: return l != r;
              case BinOp::Lt: return l < r;
              case BinOp::Le: return l <= r;
              case BinOp::Gt: return l > r;
              case BinOp::Ge: return l >= r;
              default:
                throw std::logic_error("operator not valid in programs");
            }
          } else {
            throw std::logic_error("contract-only expression in program");
          }
        },
        e.node);
  }

  bool test(const Expr& cond, Frame& f) {
    bool v = eval(cond, f) != 0;
    if (f.top) out_.decisions.push_back(v ? 1 : 0);
    return v;
  }

  void exec(const Stmt& s, Frame& f) {
    step();
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, SDecl>) {
            f.scalars[n.name] = n.init ? eval(*n.init, f) : 0;
          } else if constexpr (std::is_same_v<T, SAssign>) {
            f.scalars[n.name] = eval(*n.value, f);
          } else if constexpr (std::is_same_v<T, SArrayAssign>) {
            Val i = eval(*n.index, f);
            Val v = eval(*n.value, f);
            auto& a = array(f, n.array);
            if (i < 0 || i >= static_cast<Val>(a.size()))
              throw Trap{InterpResult::Status::OutOfBounds};
            a[static_cast<std::size_t>(i)] = v;
          } else if constexpr (std::is_same_v<T, SIf>) {
            if (test(*n.cond, f)) {
              exec(*n.then_branch, f);
            } else if (n.else_branch) {
              exec(*n.else_branch, f);
            }
          } else if constexpr (std::is_same_v<T, SWhile>) {
            while (test(*n.cond, f)) exec(*n.body, f);
          } else if constexpr (std::is_same_v<T, SReturn>) {
            ReturnSignal r;
            if (n.value) r.value = eval(*n.value, f);
            throw r;
          } else if constexpr (std::is_same_v<T, SCallAssign>) {
            const Program* callee = unit_.find(n.callee);
            if (!callee) throw std::logic_error("unknown callee " + n.callee);
            Frame g;
            CallEvent ev;
            ev.callee = n.callee;
            for (std::size_t a = 0; a < callee->params.size(); ++a) {
              const Param& p = callee->params[a];
              if (p.type == Ty::IntArray) {
                const auto* ref = std::get_if<VarRef>(&n.args[a]->node);
                if (!ref)
                  throw std::logic_error("array argument must be a variable");
                g.arrays[p.name] = f.arrays.at(ref->name);
                if (f.top) ev.arrays[p.name] = heap[g.arrays[p.name]];
              } else {
                g.scalars[p.name] = eval(*n.args[a], f);
                if (f.top) ev.scalars[p.name] = g.scalars[p.name];
              }
            }
            if (f.top) out_.calls.push_back(std::move(ev));
            std::optional<Val> r = call(*callee, std::move(g));
            if (callee->result_type == Ty::Int) {
              if (!r) throw std::logic_error("int callee returned no value");
              f.scalars[n.target] = *r;
            }
          } else if constexpr (std::is_same_v<T, SBlock>) {
            for (const StmtPtr& c : n.stmts) exec(*c, f);
          } else {
            throw std::logic_error("for-loop survived desugaring");
          }
        },
        s.node);
  }

  const Unit& unit_;
  long long step_limit_;
  InterpResult& out_;
};

}  // namespace

InterpResult interpret(const Unit& unit, const Program& prog,
                       const ConcreteInput& in, long long step_limit) {
  InterpResult out;
  Run run(unit, step_limit, out);
  Run::Frame top;
  top.top = true;
  for (const Param& p : prog.params) {
    if (p.type == Ty::IntArray) {
      run.heap.push_back(in.arrays.at(p.name));
      top.arrays[p.name] = run.heap.size() - 1;
    } else {
      top.scalars[p.name] = in.scalars.at(p.name);
    }
  }
  try {
    out.result = run.call(prog, std::move(top));
  } catch (const Trap& t) {
    out.status = t.status;
  }
  std::size_t slot = 0;
  for (const Param& p : prog.params) {
    if (p.type == Ty::IntArray) out.final_arrays[p.name] = run.heap[slot++];
  }
  return out;
}

namespace {

struct FormulaTrap {};

class FormulaEval {
 public:
  FormulaEval(const std::map<std::string, Val>& scalars,
              const std::map<std::string, std::vector<Val>>& arrays,
              std::optional<Val> result)
      : scalars_(scalars), arrays_(arrays), result_(result) {}

  bool truth(const Formula& f) {
    return std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, FAtom>) {
            return num(*n.expr) != 0;
          } else if constexpr (std::is_same_v<T, FNot>) {
            return !truth(*n.f);
          } else if constexpr (std::is_same_v<T, FAnd>) {
            return truth(*n.lhs) && truth(*n.rhs);
          } else if constexpr (std::is_same_v<T, FOr>) {
            return truth(*n.lhs) || truth(*n.rhs);
          } else if constexpr (std::is_same_v<T, FImplies>) {
            return !truth(*n.lhs) || truth(*n.rhs);
          } else if constexpr (std::is_same_v<T, FForAll>) {
            Val lo = num(*n.lo), hi = num(*n.hi);
            for (Val j = lo; j < hi; ++j) {
              index_[n.id] = j;
              bool ok = truth(*n.body);
              index_.erase(n.id);
              if (!ok) return false;
            }
            return true;
          } else {  // FAllDifferent
            const auto& a = arrays_.at(n.array);
            for (std::size_t i = 0; i < a.size(); ++i)
              for (std::size_t j = i + 1; j < a.size(); ++j)
                if (a[i] == a[j]) return false;
            return true;
          }
        },
        f.node);
  }

 private:
  Val num(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> Val {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            return n.value ? 1 : 0;
          } else if constexpr (std::is_same_v<T, VarRef>) {
            if (auto it = index_.find(n.name); it != index_.end())
              return it->second;
            return scalars_.at(n.name);
          } else if constexpr (std::is_same_v<T, LengthOf>) {
            return static_cast<Val>(arrays_.at(n.array).size());
          } else if constexpr (std::is_same_v<T, ArrayRead>) {
            Val i = num(*n.index);
            const auto& a = arrays_.at(n.array);
            if (i < 0 || i >= static_cast<Val>(a.size())) throw FormulaTrap{};
            return a[static_cast<std::size_t>(i)];
          } else if constexpr (std::is_same_v<T, ResultRef>) {
            if (!result_) throw FormulaTrap{};
            return *result_;
          } else if constexpr (std::is_same_v<T, Unary>) {
            Val v = num(*n.operand);
            return n.op == UnOp::Neg ? -v : (v == 0 ? 1 : 0);
          } else if constexpr (std::is_same_v<T, Binary>) {
            switch (n.op) {
              case BinOp::And: return num(*n.lhs) != 0 && num(*n.rhs) != 0;
              case BinOp::Or: return num(*n.lhs) != 0 || num(*n.rhs) != 0;
              case BinOp::Implies:
                return num(*n.lhs) == 0 || num(*n.rhs) != 0;
              default:
                break;
            }
            Val l = num(*n.lhs), r = num(*n.rhs);
            switch (n.op) {
              case BinOp::Add: return l + r;
              case BinOp::Sub: return l - r;
              case BinOp::Mul: return l * r;
              case BinOp::Div:
                if (r == 0) throw FormulaTrap{};
                return l / r;
              case BinOp::Eq: return l == r;
              case BinOp::Ne: return l != r;
              case BinOp::Lt: return l < r;
              case BinOp::Le: return l <= r;
              case BinOp::Gt: return l > r;
              case BinOp::Ge: return l >= r;
              default:
                throw std::logic_error("operator not valid in formulas");
            }
          } else {
            throw std::logic_error("nested quantifier expression");
          }
        },
        e.node);
  }

  const std::map<std::string, Val>& scalars_;
  const std::map<std::string, std::vector<Val>>& arrays_;
  std::optional<Val> result_;
  std::map<std::string, Val> index_;
};

}  // namespace

std::optional<bool> eval_formula(
    const Formula& f, const std::map<std::string, Val>& scalars,
    const std::map<std::string, std::vector<Val>>& arrays,
    std::optional<Val> result) {
  try {
    FormulaEval ev(scalars, arrays, result);
    return ev.truth(f);
  } catch (const FormulaTrap&) {
    return std::nullopt;
  }
}

}  // namespace mimpv::lang
