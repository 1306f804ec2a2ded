#include "mimpv/translate.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace mimpv::lang {

using fd::Domain;
using fd::PostResult;
using fd::Terms;

namespace {

// Ceiling on explicit case expansion (quantifier indices, disjunction
// cross products). Beyond it we fall back to a single reified case.
constexpr std::size_t kMaxCases = 4096;

std::string inst_name(const std::string& base, int version) {
  return base + "_" + std::to_string(version);
}

}  // namespace

PathCtx::PathCtx(const Unit& unit, const Program& prog,
                 const InstanceParams& inst)
    : unit_(unit), prog_(prog), inst_(inst) {
  for (const Param& p : prog_.params) {
    Val lo = fd::kDefaultLo, hi = fd::kDefaultHi;
    if (auto it = inst_.bounds.find(p.name); it != inst_.bounds.end()) {
      lo = it->second.first;
      hi = it->second.second;
      if (lo > hi)
        throw ConfigError("empty bound " + std::to_string(lo) + ".." +
                          std::to_string(hi) + " for parameter '" + p.name +
                          "'");
    }
    if (p.type == Ty::Int) {
      VarId v = store_.new_var(Domain(lo, hi), inst_name(p.name, 0));
      scalars_[p.name] = {0, v};
      param_scalars_[p.name] = v;
      push_trace(p.name, 0, -1, lo, hi, v);
    } else {
      auto it = inst_.array_len.find(p.name);
      if (it == inst_.array_len.end())
        throw ConfigError("missing length for array parameter '" + p.name +
                          "'");
      int len = it->second;
      if (len < 0)
        throw ConfigError("negative length for array parameter '" + p.name +
                          "'");
      std::vector<VarId> s(static_cast<std::size_t>(len));
      for (int j = 0; j < len; ++j) {
        s[j] = store_.new_var(Domain(lo, hi), inst_name(p.name, 0) + "[" +
                                                  std::to_string(j) + "]");
      }
      for (int j = 0; j < len; ++j) push_trace(p.name, 0, j, lo, hi, s[j]);
      arrays_[p.name] = {0, s};
      param_arrays_[p.name] = std::move(s);
    }
  }
}

PathCtx::Snap PathCtx::save() const {
  return {store_.mark(), scalars_, arrays_, trace_.size(), reads_.size()};
}

void PathCtx::restore(const Snap& s) {
  store_.undo_to(s.mark);
  scalars_ = s.scalars;
  arrays_ = s.arrays;
  trace_.resize(s.trace);
  reads_.resize(s.reads);
}

void PathCtx::ok(PostResult r) {
  if (r == PostResult::Inconsistent) throw PathDead{};
}

void PathCtx::record(VarId v) {
  if (recording_) recorded_.push_back(store_.find(v));
}

void PathCtx::record_terms(const Terms& ts) {
  if (!recording_) return;
  for (const auto& [coef, v] : ts) recorded_.push_back(store_.find(v));
}

void PathCtx::begin_record() {
  recording_ = true;
  recorded_.clear();
}

std::vector<VarId> PathCtx::take_record() {
  recording_ = false;
  return std::move(recorded_);
}

VarId PathCtx::fresh(const std::string& name, Domain d) {
  return store_.new_var(std::move(d), name);
}

VarId PathCtx::fixed_var(Val v) { return store_.new_fixed(v); }

VarId PathCtx::bool_var(const std::string& name) {
  return store_.new_var(Domain(0, 1), name);
}

void PathCtx::push_trace(const std::string& base, int version, int slot,
                         Val dlo, Val dhi, VarId v) {
  trace_.push_back({base, version, slot, dlo, dhi, v});
}

void PathCtx::trace_result(VarId v) {
  push_trace("result", 0, -1, fd::kDefaultLo, fd::kDefaultHi, v);
}

// --- environment -----------------------------------------------------------

VarId PathCtx::lookup(const std::string& name) const {
  return scalars_.at(name).second;
}

const std::vector<VarId>& PathCtx::slots(const std::string& name) const {
  return arrays_.at(name).second;
}

int PathCtx::array_len(const std::string& name) const {
  return static_cast<int>(arrays_.at(name).second.size());
}

FormulaEnv PathCtx::make_env(std::optional<VarId> result) const {
  FormulaEnv env;
  for (const auto& [name, sv] : scalars_) env.scalars[name] = sv.second;
  for (const auto& [name, av] : arrays_) env.arrays[name] = av.second;
  env.result = result;
  return env;
}

// --- statements ------------------------------------------------------------

void PathCtx::bind_scalar(const std::string& name, VarId v) {
  auto it = scalars_.find(name);
  int ver = it == scalars_.end() ? 0 : it->second.first + 1;
  scalars_[name] = {ver, v};
  push_trace(name, ver, -1, fd::kDefaultLo, fd::kDefaultHi, v);
}

void PathCtx::decl_scalar(const std::string& name, const Expr* init) {
  if (init) {
    bind_scalar(name, expr(*init));
    return;
  }
  auto it = scalars_.find(name);
  int ver = it == scalars_.end() ? 0 : it->second.first + 1;
  bind_scalar(name, fresh(inst_name(name, ver), Domain()));
}

void PathCtx::assign_scalar(const std::string& name, const Expr& value) {
  bind_scalar(name, expr(value));
}

void PathCtx::array_assign(const std::string& name, const Expr& index,
                           const Expr& value) {
  VarId vi = expr(index);
  VarId vv = expr(value);
  auto& [ver, cur] = arrays_.at(name);
  int len = static_cast<int>(cur.size());
  if (index_guard_) index_guard_(name, vi, len);
  ok(store_.clamp(vi, 0, len - 1));
  int nver = ver + 1;
  std::vector<VarId> next;
  if (store_.fixed(vi)) {
    next = cur;
    next[static_cast<std::size_t>(store_.value(vi))] = vv;
  } else {
    next.reserve(cur.size());
    for (int j = 0; j < len; ++j) {
      next.push_back(fresh(
          inst_name(name, nver) + "[" + std::to_string(j) + "]", Domain()));
    }
    ok(store_.post_array_update(cur, vi, vv, next));
    record(vi);
    record(vv);
  }
  arrays_[name] = {nver, next};
  for (int j = 0; j < len; ++j)
    push_trace(name, nver, j, fd::kDefaultLo, fd::kDefaultHi, next[j]);
}

// --- expressions -----------------------------------------------------------

VarId PathCtx::expr(const Expr& e) { return expr_in(e, nullptr); }

VarId PathCtx::bool_expr(const Expr& e) { return bool_expr_in(e, nullptr); }

VarId PathCtx::read_elem(const std::string& array,
                         const std::vector<VarId>& slots, VarId idx) {
  int len = static_cast<int>(slots.size());
  if (index_guard_) index_guard_(array, idx, len);
  ok(store_.clamp(idx, 0, len - 1));
  if (store_.fixed(idx))
    return slots[static_cast<std::size_t>(store_.value(idx))];
  VarId root = store_.find(idx);
  for (auto it = reads_.rbegin(); it != reads_.rend(); ++it) {
    if (it->idx_root == root && it->slots == slots) return it->val;
  }
  VarId val = fresh(array + "_at", Domain());
  ok(store_.post_element(idx, slots, val));
  record(idx);
  record(val);
  for (VarId s : slots) record(s);
  reads_.push_back({slots, root, val});
  return val;
}

PathCtx::Lin PathCtx::linearize(const Expr& e, const FormulaEnv* fenv) {
  return std::visit(
      [&](const auto& n) -> Lin {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return {{}, n.value};
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return {{}, n.value ? 1 : 0};
        } else if constexpr (std::is_same_v<T, VarRef>) {
          if (fenv) {
            if (auto it = fenv->index.find(n.name); it != fenv->index.end())
              return {{}, it->second};
            return {{{1, fenv->scalars.at(n.name)}}, 0};
          }
          return {{{1, scalars_.at(n.name).second}}, 0};
        } else if constexpr (std::is_same_v<T, LengthOf>) {
          std::size_t len = fenv ? fenv->arrays.at(n.array).size()
                                 : arrays_.at(n.array).second.size();
          return {{}, static_cast<Val>(len)};
        } else if constexpr (std::is_same_v<T, ResultRef>) {
          if (!fenv || !fenv->result)
            throw std::logic_error("\\result outside an ensures clause");
          return {{{1, *fenv->result}}, 0};
        } else if constexpr (std::is_same_v<T, ArrayRead>) {
          const std::vector<VarId>& s = fenv ? fenv->arrays.at(n.array)
                                             : arrays_.at(n.array).second;
          VarId vi = expr_in(*n.index, fenv);
          return {{{1, read_elem(n.array, s, vi)}}, 0};
        } else if constexpr (std::is_same_v<T, Unary>) {
          if (n.op == UnOp::Neg) {
            Lin l = linearize(*n.operand, fenv);
            for (auto& t : l.terms) t.first = -t.first;
            l.c = -l.c;
            return l;
          }
          return {{{1, bool_expr_in(e, fenv)}}, 0};
        } else if constexpr (std::is_same_v<T, Binary>) {
          switch (n.op) {
            case BinOp::Add: {
              Lin a = linearize(*n.lhs, fenv), b = linearize(*n.rhs, fenv);
              for (auto& t : b.terms) a.terms.push_back(t);
              a.c += b.c;
              return a;
            }
            case BinOp::Sub: {
              Lin a = linearize(*n.lhs, fenv), b = linearize(*n.rhs, fenv);
              for (auto& t : b.terms) a.terms.push_back({-t.first, t.second});
              a.c -= b.c;
              return a;
            }
            case BinOp::Mul: {
              Lin a = linearize(*n.lhs, fenv), b = linearize(*n.rhs, fenv);
              if (a.terms.empty() && b.terms.empty())
                return {{}, a.c * b.c};
              if (a.terms.empty() || b.terms.empty()) {
                if (b.terms.empty()) std::swap(a, b);
                Val k = a.c;  // k * (terms + c)
                if (k == 0) return {{}, 0};
                for (auto& t : b.terms) t.first *= k;
                b.c *= k;
                return b;
              }
              VarId x = materialize(a), y = materialize(b);
              VarId z = fresh("prod", Domain());
              ok(store_.post_mult(x, y, z));
              record(x);
              record(y);
              record(z);
              return {{{1, z}}, 0};
            }
            case BinOp::Div: {
              VarId x = materialize(linearize(*n.lhs, fenv));
              VarId y = materialize(linearize(*n.rhs, fenv));
              ok(store_.exclude(y, 0));
              VarId z = fresh("quot", Domain());
              ok(store_.post_div(x, y, z));
              record(x);
              record(y);
              record(z);
              return {{{1, z}}, 0};
            }
            default:
              return {{{1, bool_expr_in(e, fenv)}}, 0};
          }
        } else {
          throw std::logic_error("expression kind not valid here");
        }
      },
      e.node);
}

VarId PathCtx::materialize(Lin l) {
  if (l.terms.empty()) return fixed_var(l.c);
  if (l.terms.size() == 1 && l.terms[0].first == 1 && l.c == 0)
    return l.terms[0].second;
  VarId z = fresh("tmp", Domain());
  Terms row = std::move(l.terms);
  row.push_back({-1, z});
  record_terms(row);
  ok(store_.post_linear(std::move(row), -l.c, -l.c));
  return z;
}

VarId PathCtx::expr_in(const Expr& e, const FormulaEnv* fenv) {
  if (e.type == Ty::Bool) return bool_expr_in(e, fenv);
  return materialize(linearize(e, fenv));
}

VarId PathCtx::bool_expr_in(const Expr& e, const FormulaEnv* fenv) {
  if (const auto* b = std::get_if<BoolLit>(&e.node))
    return fixed_var(b->value ? 1 : 0);
  if (const auto* u = std::get_if<Unary>(&e.node); u && u->op == UnOp::Not) {
    VarId x = bool_expr_in(*u->operand, fenv);
    return negate_bool(x);
  }
  const auto* bin = std::get_if<Binary>(&e.node);
  if (!bin) throw std::logic_error("expression is not boolean");
  switch (bin->op) {
    case BinOp::And: {
      VarId l = bool_expr_in(*bin->lhs, fenv);
      VarId r = bool_expr_in(*bin->rhs, fenv);
      VarId b = bool_var("and");
      ok(store_.post_bool_and(b, {l, r}));
      record(b);
      return b;
    }
    case BinOp::Or: {
      VarId l = bool_expr_in(*bin->lhs, fenv);
      VarId r = bool_expr_in(*bin->rhs, fenv);
      VarId b = bool_var("or");
      ok(store_.post_bool_or(b, {l, r}));
      record(b);
      return b;
    }
    case BinOp::Implies: {
      VarId l = negate_bool(bool_expr_in(*bin->lhs, fenv));
      VarId r = bool_expr_in(*bin->rhs, fenv);
      VarId b = bool_var("imp");
      ok(store_.post_bool_or(b, {l, r}));
      record(b);
      return b;
    }
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: {
      Lin a = linearize(*bin->lhs, fenv), b = linearize(*bin->rhs, fenv);
      for (auto& t : b.terms) a.terms.push_back({-t.first, t.second});
      a.c -= b.c;
      // sum(a.terms) + a.c  <op>  0
      Terms terms = std::move(a.terms);
      Val k = -a.c;
      fd::CmpKind kind = fd::CmpKind::Le;
      switch (bin->op) {
        case BinOp::Le: kind = fd::CmpKind::Le; break;
        case BinOp::Lt: kind = fd::CmpKind::Le; k -= 1; break;
        case BinOp::Ge:
          for (auto& t : terms) t.first = -t.first;
          k = -k;
          kind = fd::CmpKind::Le;
          break;
        case BinOp::Gt:
          for (auto& t : terms) t.first = -t.first;
          k = -k - 1;
          kind = fd::CmpKind::Le;
          break;
        case BinOp::Eq: kind = fd::CmpKind::Eq; break;
        case BinOp::Ne: kind = fd::CmpKind::Ne; break;
        default: break;
      }
      if (terms.empty()) {
        bool truth = kind == fd::CmpKind::Le   ? 0 <= k
                     : kind == fd::CmpKind::Eq ? 0 == k
                                               : 0 != k;
        return fixed_var(truth ? 1 : 0);
      }
      VarId r = bool_var("cmp");
      record_terms(terms);
      record(r);
      ok(store_.post_reif_cmp(r, std::move(terms), k, kind));
      return r;
    }
    default:
      throw std::logic_error("operator is not boolean");
  }
}

VarId PathCtx::negate_bool(VarId x) {
  VarId nb = bool_var("not");
  ok(store_.post_linear({{1, x}, {1, nb}}, 1, 1));
  record(nb);
  return nb;
}

// --- comparisons as rows ---------------------------------------------------

void PathCtx::post_lin_cmp(Lin diff, Cmp op) {
  // sum(diff.terms) + diff.c  <op>  0
  Terms terms = std::move(diff.terms);
  Val k = -diff.c;
  if (terms.empty()) {
    bool truth = false;
    switch (op) {
      case Cmp::Le: truth = 0 <= k; break;
      case Cmp::Lt: truth = 0 < k; break;
      case Cmp::Ge: truth = 0 >= k; break;
      case Cmp::Gt: truth = 0 > k; break;
      case Cmp::Eq: truth = 0 == k; break;
      case Cmp::Ne: truth = 0 != k; break;
    }
    if (!truth) throw PathDead{};
    return;
  }
  record_terms(terms);
  switch (op) {
    case Cmp::Le:
      ok(store_.post_linear(std::move(terms), -fd::kNoBound, k));
      break;
    case Cmp::Lt:
      ok(store_.post_linear(std::move(terms), -fd::kNoBound, k - 1));
      break;
    case Cmp::Ge:
      ok(store_.post_linear(std::move(terms), k, fd::kNoBound));
      break;
    case Cmp::Gt:
      ok(store_.post_linear(std::move(terms), k + 1, fd::kNoBound));
      break;
    case Cmp::Eq:
      ok(store_.post_linear(std::move(terms), k, k));
      break;
    case Cmp::Ne:
      ok(store_.post_linear_neq(std::move(terms), k));
      break;
  }
}

void PathCtx::post_cmp(const Expr& l, const Expr& r, BinOp op, bool negate,
                       const FormulaEnv* fenv) {
  Lin a = linearize(l, fenv), b = linearize(r, fenv);
  for (auto& t : b.terms) a.terms.push_back({-t.first, t.second});
  a.c -= b.c;
  Cmp c;
  switch (op) {
    case BinOp::Le: c = negate ? Cmp::Gt : Cmp::Le; break;
    case BinOp::Lt: c = negate ? Cmp::Ge : Cmp::Lt; break;
    case BinOp::Ge: c = negate ? Cmp::Lt : Cmp::Ge; break;
    case BinOp::Gt: c = negate ? Cmp::Le : Cmp::Gt; break;
    case BinOp::Eq: c = negate ? Cmp::Ne : Cmp::Eq; break;
    case BinOp::Ne: c = negate ? Cmp::Eq : Cmp::Ne; break;
    default: throw std::logic_error("not a comparison");
  }
  post_lin_cmp(std::move(a), c);
}

void PathCtx::post_expr_truth(const Expr& e, bool want, const FormulaEnv* fenv) {
  if (const auto* b = std::get_if<BoolLit>(&e.node)) {
    if (b->value != want) throw PathDead{};
    return;
  }
  if (const auto* u = std::get_if<Unary>(&e.node); u && u->op == UnOp::Not) {
    post_expr_truth(*u->operand, !want, fenv);
    return;
  }
  const auto* bin = std::get_if<Binary>(&e.node);
  if (!bin) throw std::logic_error("expression is not boolean");
  switch (bin->op) {
    case BinOp::And:
      if (want) {
        post_expr_truth(*bin->lhs, true, fenv);
        post_expr_truth(*bin->rhs, true, fenv);
      } else {
        VarId b = bool_expr_in(e, fenv);
        record(b);
        ok(store_.assign(b, 0));
      }
      return;
    case BinOp::Or:
      if (!want) {
        post_expr_truth(*bin->lhs, false, fenv);
        post_expr_truth(*bin->rhs, false, fenv);
      } else {
        VarId b = bool_expr_in(e, fenv);
        record(b);
        ok(store_.assign(b, 1));
      }
      return;
    case BinOp::Implies:
      if (!want) {
        post_expr_truth(*bin->lhs, true, fenv);
        post_expr_truth(*bin->rhs, false, fenv);
      } else {
        VarId b = bool_expr_in(e, fenv);
        record(b);
        ok(store_.assign(b, 1));
      }
      return;
    default:
      post_cmp(*bin->lhs, *bin->rhs, bin->op, !want, fenv);
      return;
  }
}

// --- positive formula posting ----------------------------------------------

void PathCtx::post_formula(const Formula& f, const FormulaEnv& env) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FAtom>) {
          post_expr_truth(*n.expr, true, &env);
        } else if constexpr (std::is_same_v<T, FAnd>) {
          post_formula(*n.lhs, env);
          post_formula(*n.rhs, env);
        } else if constexpr (std::is_same_v<T, FNot>) {
          if (const auto* a = std::get_if<FAtom>(&n.f->node)) {
            post_expr_truth(*a->expr, false, &env);
          } else {
            VarId b = formula_bool(*n.f, env);
            record(b);
            ok(store_.assign(b, 0));
          }
        } else if constexpr (std::is_same_v<T, FOr> ||
                             std::is_same_v<T, FImplies>) {
          VarId b = formula_bool(f, env);
          record(b);
          ok(store_.assign(b, 1));
        } else if constexpr (std::is_same_v<T, FForAll>) {
          auto lo = const_val(*n.lo, env);
          auto hi = const_val(*n.hi, env);
          if (lo && hi) {
            for (Val j = *lo; j < *hi; ++j) {
              FormulaEnv e2 = env;
              e2.index[n.id] = j;
              post_formula(*n.body, e2);
            }
            return;
          }
          auto [alo, ahi] = quant_span(n, env);
          for (Val j = alo; j < ahi; ++j) {
            FormulaEnv e2 = env;
            e2.index[n.id] = j;
            VarId g = guard_bool(n, j, env);
            VarId bb = formula_bool(*n.body, e2);
            VarId one = fixed_var(1);
            ok(store_.post_bool_or(one, {negate_bool(g), bb}));
          }
        } else if constexpr (std::is_same_v<T, FAllDifferent>) {
          const auto& s = env.arrays.at(n.array);
          for (VarId v : s) record(v);
          ok(store_.post_alldiff(s));
        }
      },
      f.node);
}

VarId PathCtx::formula_bool(const Formula& f, const FormulaEnv& env) {
  return std::visit(
      [&](const auto& n) -> VarId {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FAtom>) {
          return bool_expr_in(*n.expr, &env);
        } else if constexpr (std::is_same_v<T, FNot>) {
          return negate_bool(formula_bool(*n.f, env));
        } else if constexpr (std::is_same_v<T, FAnd>) {
          VarId b = bool_var("fand");
          ok(store_.post_bool_and(
              b, {formula_bool(*n.lhs, env), formula_bool(*n.rhs, env)}));
          record(b);
          return b;
        } else if constexpr (std::is_same_v<T, FOr>) {
          VarId b = bool_var("for");
          ok(store_.post_bool_or(
              b, {formula_bool(*n.lhs, env), formula_bool(*n.rhs, env)}));
          record(b);
          return b;
        } else if constexpr (std::is_same_v<T, FImplies>) {
          VarId b = bool_var("fimp");
          ok(store_.post_bool_or(b, {negate_bool(formula_bool(*n.lhs, env)),
                                     formula_bool(*n.rhs, env)}));
          record(b);
          return b;
        } else if constexpr (std::is_same_v<T, FForAll>) {
          auto lo = const_val(*n.lo, env);
          auto hi = const_val(*n.hi, env);
          Val alo, ahi;
          bool exact = lo && hi;
          if (exact) {
            alo = *lo;
            ahi = *hi;
          } else {
            std::tie(alo, ahi) = quant_span(n, env);
          }
          std::vector<VarId> parts;
          for (Val j = alo; j < ahi; ++j) {
            FormulaEnv e2 = env;
            e2.index[n.id] = j;
            VarId bb = formula_bool(*n.body, e2);
            if (!exact) {
              VarId g = guard_bool(n, j, env);
              VarId imp = bool_var("qimp");
              ok(store_.post_bool_or(imp, {negate_bool(g), bb}));
              bb = imp;
            }
            parts.push_back(bb);
          }
          if (parts.empty()) return fixed_var(1);
          VarId b = bool_var("qall");
          ok(store_.post_bool_and(b, std::move(parts)));
          record(b);
          return b;
        } else {  // FAllDifferent
          const auto& s = env.arrays.at(n.array);
          std::vector<VarId> parts;
          for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t j = i + 1; j < s.size(); ++j) {
              VarId bij = bool_var("ne");
              ok(store_.post_reif_cmp(bij, {{1, s[i]}, {-1, s[j]}}, 0,
                                      fd::CmpKind::Ne));
              parts.push_back(bij);
            }
          }
          if (parts.empty()) return fixed_var(1);
          VarId b = bool_var("alldiff");
          ok(store_.post_bool_and(b, std::move(parts)));
          record(b);
          return b;
        }
      },
      f.node);
}

// --- case expansion --------------------------------------------------------

std::vector<Case> PathCtx::cross(std::vector<Case> a, std::vector<Case> b) {
  std::vector<Case> out;
  out.reserve(a.size() * b.size());
  for (const Case& x : a) {
    for (const Case& y : b) {
      Case c;
      c.top_index = x.top_index >= 0 ? x.top_index : y.top_index;
      c.posts = x.posts;
      c.posts.insert(c.posts.end(), y.posts.begin(), y.posts.end());
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::pair<Val, Val> PathCtx::range_of(const Expr& e, const FormulaEnv& env) {
  Lin l = linearize(e, &env);
  Val lo = l.c, hi = l.c;
  for (const auto& [coef, v] : l.terms) {
    if (coef > 0) {
      lo += coef * store_.min(v);
      hi += coef * store_.max(v);
    } else {
      lo += coef * store_.max(v);
      hi += coef * store_.min(v);
    }
  }
  return {lo, hi};
}

std::pair<Val, Val> PathCtx::quant_span(const FForAll& q,
                                        const FormulaEnv& env) {
  auto [llo, lhi] = range_of(*q.lo, env);
  auto [hlo, hhi] = range_of(*q.hi, env);
  (void)lhi;
  (void)hlo;
  if (hhi - llo > static_cast<Val>(kMaxCases))
    throw ConfigError("quantifier range too wide to expand (" +
                      std::to_string(llo) + ".." + std::to_string(hhi) + ")");
  return {llo, hhi};
}

VarId PathCtx::guard_bool(const FForAll& q, Val j, const FormulaEnv& env) {
  // lo <= j && j < hi, reified
  Lin lo = linearize(*q.lo, &env);
  Lin hi = linearize(*q.hi, &env);
  VarId g1;  // sum(lo.terms) <= j - lo.c
  if (lo.terms.empty()) {
    g1 = fixed_var(lo.c <= j ? 1 : 0);
  } else {
    g1 = bool_var("glo");
    ok(store_.post_reif_cmp(g1, std::move(lo.terms), j - lo.c,
                            fd::CmpKind::Le));
  }
  VarId g2;  // j < sum(hi.terms) + hi.c, as -sum(hi.terms) <= hi.c - j - 1
  if (hi.terms.empty()) {
    g2 = fixed_var(j < hi.c ? 1 : 0);
  } else {
    Terms t2;
    for (const auto& [coef, v] : hi.terms) t2.push_back({-coef, v});
    g2 = bool_var("ghi");
    ok(store_.post_reif_cmp(g2, std::move(t2), hi.c - j - 1, fd::CmpKind::Le));
  }
  VarId g = bool_var("guard");
  ok(store_.post_bool_and(g, {g1, g2}));
  return g;
}

std::vector<Case> PathCtx::neg_cases(const Formula& f, const FormulaEnv& env) {
  return std::visit(
      [&](const auto& n) -> std::vector<Case> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FAtom>) {
          const Expr* e = n.expr.get();
          Case c;
          c.posts.push_back(
              [this, e, env] { post_expr_truth(*e, false, &env); });
          return {std::move(c)};
        } else if constexpr (std::is_same_v<T, FNot>) {
          return pos_cases(*n.f, env);
        } else if constexpr (std::is_same_v<T, FAnd>) {
          std::vector<Case> out = neg_cases(*n.lhs, env);
          std::vector<Case> r = neg_cases(*n.rhs, env);
          out.insert(out.end(), std::make_move_iterator(r.begin()),
                     std::make_move_iterator(r.end()));
          return out;
        } else if constexpr (std::is_same_v<T, FOr>) {
          return cross(neg_cases(*n.lhs, env), neg_cases(*n.rhs, env));
        } else if constexpr (std::is_same_v<T, FImplies>) {
          return cross(pos_cases(*n.lhs, env), neg_cases(*n.rhs, env));
        } else if constexpr (std::is_same_v<T, FForAll>) {
          auto lo = const_val(*n.lo, env);
          auto hi = const_val(*n.hi, env);
          std::vector<Case> out;
          if (lo && hi) {
            for (Val j = *lo; j < *hi; ++j) {
              FormulaEnv e2 = env;
              e2.index[n.id] = j;
              std::vector<Case> body = neg_cases(*n.body, e2);
              out.insert(out.end(), std::make_move_iterator(body.begin()),
                         std::make_move_iterator(body.end()));
              if (out.size() > kMaxCases) return reified_neg(f, env);
            }
            return out;
          }
          auto [alo, ahi] = quant_span(n, env);
          const FForAll* q = &n;
          for (Val j = alo; j < ahi; ++j) {
            FormulaEnv e2 = env;
            e2.index[n.id] = j;
            Case guard;
            guard.posts.push_back([this, q, j, env] {
              Lin lo = linearize(*q->lo, &env);
              lo.c -= j;
              post_lin_cmp(std::move(lo), Cmp::Le);  // lo <= j
              Lin hi = linearize(*q->hi, &env);
              for (auto& t : hi.terms) t.first = -t.first;
              hi.c = j - hi.c;
              post_lin_cmp(std::move(hi), Cmp::Lt);  // j < hi
            });
            std::vector<Case> body = neg_cases(*n.body, e2);
            std::vector<Case> merged = cross({std::move(guard)}, std::move(body));
            out.insert(out.end(), std::make_move_iterator(merged.begin()),
                       std::make_move_iterator(merged.end()));
            if (out.size() > kMaxCases) return reified_neg(f, env);
          }
          return out;
        } else {  // FAllDifferent
          const auto s = env.arrays.at(n.array);
          std::vector<Case> out;
          for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t j = i + 1; j < s.size(); ++j) {
              Case c;
              VarId a = s[i], b = s[j];
              c.posts.push_back([this, a, b] {
                record(a);
                record(b);
                ok(store_.post_eq(a, b));
              });
              out.push_back(std::move(c));
            }
          }
          return out;
        }
      },
      f.node);
}

std::vector<Case> PathCtx::pos_cases(const Formula& f, const FormulaEnv& env) {
  return std::visit(
      [&](const auto& n) -> std::vector<Case> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FAtom>) {
          const Expr* e = n.expr.get();
          Case c;
          c.posts.push_back(
              [this, e, env] { post_expr_truth(*e, true, &env); });
          return {std::move(c)};
        } else if constexpr (std::is_same_v<T, FNot>) {
          return neg_cases(*n.f, env);
        } else if constexpr (std::is_same_v<T, FAnd>) {
          std::vector<Case> out =
              cross(pos_cases(*n.lhs, env), pos_cases(*n.rhs, env));
          if (out.size() > kMaxCases) return reified_pos(f, env);
          return out;
        } else if constexpr (std::is_same_v<T, FOr>) {
          std::vector<Case> out = pos_cases(*n.lhs, env);
          std::vector<Case> r = pos_cases(*n.rhs, env);
          out.insert(out.end(), std::make_move_iterator(r.begin()),
                     std::make_move_iterator(r.end()));
          return out;
        } else if constexpr (std::is_same_v<T, FImplies>) {
          std::vector<Case> out = neg_cases(*n.lhs, env);
          std::vector<Case> r = pos_cases(*n.rhs, env);
          out.insert(out.end(), std::make_move_iterator(r.begin()),
                     std::make_move_iterator(r.end()));
          return out;
        } else {
          // Quantified or global parts are posted whole.
          return reified_pos(f, env);
        }
      },
      f.node);
}

std::vector<Case> PathCtx::reified_pos(const Formula& f,
                                       const FormulaEnv& env) {
  const Formula* fp = &f;
  Case c;
  c.posts.push_back([this, fp, env] { post_formula(*fp, env); });
  return {std::move(c)};
}

std::vector<Case> PathCtx::reified_neg(const Formula& f,
                                       const FormulaEnv& env) {
  const Formula* fp = &f;
  Case c;
  c.posts.push_back([this, fp, env] {
    VarId b = formula_bool(*fp, env);
    record(b);
    ok(store_.assign(b, 0));
  });
  return {std::move(c)};
}

std::vector<Case> PathCtx::negation_cases(const Formula& f,
                                          const FormulaEnv& env) {
  std::vector<const Formula*> conjuncts;
  flatten_and(f, conjuncts);
  std::vector<Case> out;
  for (std::size_t i = 0; i < conjuncts.size(); ++i) {
    std::vector<Case> cs = neg_cases(*conjuncts[i], env);
    for (Case& c : cs) {
      c.top_index = static_cast<int>(i);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<Case> PathCtx::assertion_cases(const Formula& f,
                                           const FormulaEnv& env) {
  return pos_cases(f, env);
}

void PathCtx::flatten_and(const Formula& f,
                          std::vector<const Formula*>& out) {
  if (const auto* a = std::get_if<FAnd>(&f.node)) {
    flatten_and(*a->lhs, out);
    flatten_and(*a->rhs, out);
    return;
  }
  out.push_back(&f);
}

std::optional<Val> PathCtx::const_val(const Expr& e, const FormulaEnv& env) {
  Lin l = linearize(e, &env);
  Val v = l.c;
  for (const auto& [coef, var] : l.terms) {
    if (!store_.fixed(var)) return std::nullopt;
    v += coef * store_.value(var);
  }
  return v;
}

}  // namespace mimpv::lang
