// Acceptance harness: one check per shipping requirement, one PASS or
// FAIL line each, nonzero exit when anything fails. Wall-clock ceilings
// are asserted from measured time, never from budgets alone.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mimpv/corpus.hpp"
#include "mimpv/interp.hpp"
#include "mimpv/oracle.hpp"
#include "mimpv/parser.hpp"
#include "mimpv/solve.hpp"
#include "mimpv/store.hpp"
#include "mimpv/typecheck.hpp"
#include "mimpv/verify.hpp"

namespace {

using namespace mimpv;
using namespace mimpv::lang;
using fd::Domain;
using fd::Store;
using fd::Val;
using fd::VarId;

Unit load(const char* name) {
  const corpus::Entry* e = corpus::find(name);
  if (!e) throw std::runtime_error(std::string("no corpus entry ") + name);
  Unit u = parse_unit(e->source, e->file);
  typecheck(u, e->file);
  return u;
}

struct Timed {
  Verdict v;
  long long ms = 0;
};

Timed run(const Unit& u, const Program& p, const InstanceParams& inst) {
  auto t0 = std::chrono::steady_clock::now();
  Timed t;
  t.v = verify(u, p, inst);
  t.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
             .count();
  return t;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---- criteria 1 to 8: the benchmark table ----

bool crit_tritype(std::string& note) {
  Unit u = load("tritype");
  Timed t = run(u, u.programs[0], {});
  note = fmt("[%lld paths, %lld ms]", t.v.feasible_paths, t.ms);
  return t.v.kind == Verdict::Kind::Verified && t.v.feasible_paths == 10 &&
         t.ms <= 10'000;
}

bool crit_tritype_ko(std::string& note) {
  Unit u = load("tritypeKO");
  Timed t = run(u, u.programs[0], {});
  if (t.v.kind != Verdict::Kind::Counterexample || !t.v.cex) {
    note = "[no counterexample]";
    return false;
  }
  const Counterexample& c = *t.v.cex;
  Val i = c.inputs.at("i"), j = c.inputs.at("j"), k = c.inputs.at("k");
  note = fmt("[i=%lld j=%lld k=%lld, %lld ms]", i, j, k, t.ms);
  if (i != j || i + j > k) return false;
  ConcreteInput in;
  in.scalars = c.inputs;
  InterpResult r = interpret(u, u.programs[0], in);
  if (r.status != InterpResult::Status::Ok || r.result != 2) return false;
  // the same inputs with result 4 would satisfy the contract
  auto with_actual = eval_formula(*u.programs[0].contract.ensures_f, in.scalars,
                                  {}, r.result);
  auto with_demanded =
      eval_formula(*u.programs[0].contract.ensures_f, in.scalars, {}, 4);
  return with_actual == false && with_demanded == true && t.ms <= 10'000;
}

bool crit_bsearch(std::string& note) {
  Unit u = load("binarySearch");
  std::ostringstream o;
  bool ok = true;
  for (int len : {8, 16}) {
    InstanceParams inst;
    inst.array_len["tab"] = len;
    Timed t = run(u, u.programs[0], inst);
    int depth = 1;
    while ((1 << depth) < len) ++depth;  // log2(len) for powers of two
    ok = ok && t.v.kind == Verdict::Kind::Verified && t.ms <= 120'000 &&
         t.v.max_loop_iters <= depth + 1;
    o << " len " << len << ": " << verdict_name(t.v.kind) << " iters "
      << t.v.max_loop_iters << " in " << t.ms << " ms;";
  }
  note = "[" + o.str().substr(1) + "]";
  return ok;
}

bool crit_bsearch_ko(std::string& note) {
  Unit u = load("binarySearchKO");
  std::ostringstream o;
  bool ok = true;
  for (int len : {8, 16, 32, 64, 128}) {
    InstanceParams inst;
    inst.array_len["tab"] = len;
    Timed t = run(u, u.programs[0], inst);
    bool good = t.v.kind == Verdict::Kind::Counterexample && t.v.cex &&
                t.ms <= 60'000;
    if (good) {
      const Counterexample& c = *t.v.cex;
      ConcreteInput in;
      in.scalars = c.inputs;
      in.arrays = c.input_arrays;
      InterpResult r = interpret(u, u.programs[0], in);
      auto pre = eval_formula(*u.programs[0].contract.requires_f, in.scalars,
                              in.arrays, std::nullopt);
      auto post = eval_formula(*u.programs[0].contract.ensures_f, in.scalars,
                               r.final_arrays, r.result);
      good = r.status == InterpResult::Status::Ok && r.result == c.result &&
             r.decisions == c.decisions && pre == true && post == false;
    }
    ok = ok && good;
    o << " " << len << ":" << (good ? "ok" : "BAD") << "/" << t.ms << "ms";
  }
  note = "[" + o.str().substr(1) + "]";
  return ok;
}

bool crit_bubble(std::string& note) {
  Unit u = load("bubbleSortWithInit");
  std::ostringstream o;
  bool ok = true;
  for (int len : {8, 16, 32}) {
    InstanceParams inst;
    inst.array_len["tab"] = len;
    inst.budget_ms = 120'000;
    Timed t = run(u, u.programs[0], inst);
    bool good = t.ms <= 120'000 &&
                (t.v.kind == Verdict::Kind::Verified ||
                 (len == 32 && t.v.kind == Verdict::Kind::ResourceExceeded));
    ok = ok && good;
    o << " " << len << ":" << verdict_name(t.v.kind) << "/" << t.ms << "ms";
  }
  note = "[" + o.str().substr(1) + "]";
  return ok;
}

bool crit_square_sum(std::string& note) {
  Unit u = load("squareSum");
  std::ostringstream o;
  bool ok = true;
  for (int n : {8, 16}) {
    InstanceParams inst;
    inst.bounds["n"] = {0, n};
    Timed t = run(u, u.programs[0], inst);
    ok = ok && t.v.kind == Verdict::Kind::Verified && t.ms <= 120'000;
    o << " n<=" << n << ": " << verdict_name(t.v.kind) << "/" << t.ms << "ms";
  }
  note = "[" + o.str().substr(1) + "]";
  return ok;
}

bool crit_square_sum_array(std::string& note) {
  Unit u = load("squareSumArray");
  InstanceParams inst;
  inst.array_len["t"] = 6;
  Timed t = run(u, u.programs[0], inst);
  note = fmt("[%s, %lld ms]", verdict_name(t.v.kind), t.ms);
  return t.v.kind == Verdict::Kind::Verified && t.ms <= 300'000;
}

bool crit_selection_sort(std::string& note) {
  Unit u = load("selectionSort");
  const Program* sel = u.find("selectionSort");
  InstanceParams inst;
  inst.array_len["t"] = 40;
  Timed t = run(u, *sel, inst);
  bool ok = t.v.kind == Verdict::Kind::Verified && t.v.feasible_paths == 1 &&
            t.ms <= 5'000;
  Unit fm = load("findMin");
  InstanceParams fmi;
  fmi.array_len["t"] = 6;
  Timed tf = run(fm, fm.programs[0], fmi);
  note = fmt("[sort: %lld path in %lld ms; findMin: %s in %lld ms]",
             t.v.feasible_paths, t.ms, verdict_name(tf.v.kind), tf.ms);
  return ok && tf.v.kind == Verdict::Kind::Verified && tf.ms <= 300'000;
}

// ---- criterion 9: agreement with the exhaustive oracle ----

bool crit_oracle_agreement(std::string& note) {
  std::ostringstream o;
  bool ok = true;
  for (const corpus::Entry& e : corpus::all()) {
    Unit u = parse_unit(e.source, e.file);
    typecheck(u, e.file);
    const Program& p = u.programs[0];
    InstanceParams inst;
    OracleParams op;  // default box [0,4] per value
    for (const Param& prm : p.params) {
      inst.bounds[prm.name] = {0, 4};
      if (prm.type == Ty::IntArray) {
        inst.array_len[prm.name] = 4;
        op.array_len[prm.name] = 4;
      }
    }
    inst.budget_ms = 60'000;
    Verdict v = verify(u, p, inst);
    OracleReport r = oracle_check(u, p, op);
    bool engine_bad = v.kind == Verdict::Kind::Counterexample;
    bool oracle_bad = r.violation.has_value();
    bool agree = v.kind != Verdict::Kind::ResourceExceeded &&
                 !r.cap_exceeded && engine_bad == oracle_bad;
    ok = ok && agree;
    o << " " << e.name << ":" << (agree ? "ok" : "DISAGREE");
  }
  note = "[" + o.str().substr(1) + "]";
  return ok;
}

// ---- criterion 10: solver properties on random instances ----

// A generated problem: a store, its variables with their initial
// domains, and an independent concrete checker per constraint.
struct RandomProblem {
  Store s;
  std::vector<VarId> vars;
  std::vector<Domain> initial;
  std::vector<std::function<bool(const std::vector<Val>&)>> checks;
  bool inconsistent = false;  // some post already failed
};

// last dimension fastest, ascending: matches enumerate_solutions order
template <class F>
void for_each_tuple(const std::vector<Domain>& doms, F&& f) {
  std::vector<Val> t(doms.size());
  std::vector<Val> cur(doms.size());
  for (std::size_t i = 0; i < doms.size(); ++i) cur[i] = doms[i].lo;
  for (bool more = true; more;) {
    bool member = true;
    for (std::size_t i = 0; i < doms.size(); ++i) {
      if (!doms[i].contains(cur[i])) {
        member = false;
        break;
      }
      t[i] = cur[i];
    }
    if (member) f(t);
    more = false;
    for (std::size_t i = doms.size(); i-- > 0;) {
      if (cur[i] < doms[i].hi) {
        ++cur[i];
        more = true;
        break;
      }
      cur[i] = doms[i].lo;
    }
  }
}

RandomProblem make_problem(std::mt19937_64& rng, bool with_arrays) {
  RandomProblem p;
  std::uniform_int_distribution<int> nvar_d(2, 4);
  std::uniform_int_distribution<Val> lo_d(-6, 3);
  std::uniform_int_distribution<Val> width_d(0, 8);
  int nvars = nvar_d(rng);
  for (int i = 0; i < nvars; ++i) {
    Val lo = lo_d(rng);
    p.initial.emplace_back(lo, lo + width_d(rng));
  }

  auto any_var = [&] {
    return std::uniform_int_distribution<int>(0, nvars - 1)(rng);
  };
  auto bool_var = [&] {
    p.initial.emplace_back(0, 1);
    return nvars++;
  };

  struct Plan {
    int kind;
    std::vector<int> vs;
    fd::Terms terms;  // var slot kept in the VarId field
    Val lo = 0, hi = 0, k = 0;
    fd::CmpKind cmp = fd::CmpKind::Le;
  };
  std::vector<Plan> plans;
  int ncons = std::uniform_int_distribution<int>(1, 3)(rng);
  for (int c = 0; c < ncons; ++c) {
    int kind = std::uniform_int_distribution<int>(0, with_arrays ? 7 : 3)(rng);
    Plan pl;
    pl.kind = kind;
    switch (kind) {
      case 0: {  // interval row
        int nt = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int t = 0; t < nt; ++t) {
          Val coef = std::uniform_int_distribution<Val>(-3, 3)(rng);
          if (coef == 0) coef = 1;
          pl.terms.emplace_back(coef, any_var());
        }
        Val a = std::uniform_int_distribution<Val>(-12, 12)(rng);
        Val b = std::uniform_int_distribution<Val>(-12, 12)(rng);
        pl.lo = std::min(a, b);
        pl.hi = std::max(a, b);
        break;
      }
      case 1: {  // disequality row
        int nt = std::uniform_int_distribution<int>(1, 2)(rng);
        for (int t = 0; t < nt; ++t)
          pl.terms.emplace_back(
              std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1,
              any_var());
        pl.k = std::uniform_int_distribution<Val>(-6, 6)(rng);
        break;
      }
      case 2:  // product
        pl.vs = {any_var(), any_var(), any_var()};
        break;
      case 3:  // quotient
        pl.vs = {any_var(), any_var(), any_var()};
        break;
      case 4: {  // reified comparison
        pl.vs = {bool_var(), any_var()};
        pl.k = std::uniform_int_distribution<Val>(-4, 4)(rng);
        int which = std::uniform_int_distribution<int>(0, 2)(rng);
        pl.cmp = which == 0   ? fd::CmpKind::Le
                 : which == 1 ? fd::CmpKind::Eq
                              : fd::CmpKind::Ne;
        break;
      }
      case 5: {  // conjunction of 0/1 vars
        pl.vs = {bool_var(), bool_var(), bool_var()};
        break;
      }
      case 6: {  // element
        int len = std::uniform_int_distribution<int>(2, 3)(rng);
        pl.vs = {any_var(), any_var()};  // idx, val
        for (int t = 0; t < len; ++t) pl.vs.push_back(any_var());
        break;
      }
      case 7: {  // array update
        pl.vs = {any_var(), any_var()};  // idx, val
        for (int t = 0; t < 4; ++t) pl.vs.push_back(any_var());
        break;
      }
    }
    plans.push_back(std::move(pl));
  }

  for (const Domain& d : p.initial)
    p.vars.push_back(p.s.new_var(d));
  using Tup = const std::vector<Val>&;
  for (const Plan& pl : plans) {
    if (p.inconsistent) break;
    fd::PostResult r = fd::PostResult::Ok;
    switch (pl.kind) {
      case 0: {
        fd::Terms terms;
        for (auto [coef, slot] : pl.terms)
          terms.emplace_back(coef, p.vars[static_cast<std::size_t>(slot)]);
        r = p.s.post_linear(terms, pl.lo, pl.hi);
        auto tt = pl.terms;
        Val lo = pl.lo, hi = pl.hi;
        p.checks.push_back([tt, lo, hi](Tup t) {
          Val sum = 0;
          for (auto [coef, slot] : tt)
            sum += coef * t[static_cast<std::size_t>(slot)];
          return lo <= sum && sum <= hi;
        });
        break;
      }
      case 1: {
        fd::Terms terms;
        for (auto [coef, slot] : pl.terms)
          terms.emplace_back(coef, p.vars[static_cast<std::size_t>(slot)]);
        r = p.s.post_linear_neq(terms, pl.k);
        auto tt = pl.terms;
        Val k = pl.k;
        p.checks.push_back([tt, k](Tup t) {
          Val sum = 0;
          for (auto [coef, slot] : tt)
            sum += coef * t[static_cast<std::size_t>(slot)];
          return sum != k;
        });
        break;
      }
      case 2: {
        auto [x, y, z] = std::tuple(pl.vs[0], pl.vs[1], pl.vs[2]);
        r = p.s.post_mult(p.vars[x], p.vars[y], p.vars[z]);
        p.checks.push_back(
            [x, y, z](Tup t) { return t[z] == t[x] * t[y]; });
        break;
      }
      case 3: {
        auto [x, y, z] = std::tuple(pl.vs[0], pl.vs[1], pl.vs[2]);
        r = p.s.post_div(p.vars[x], p.vars[y], p.vars[z]);
        p.checks.push_back([x, y, z](Tup t) {
          return t[y] != 0 && t[z] == t[x] / t[y];
        });
        break;
      }
      case 4: {
        int b = pl.vs[0], x = pl.vs[1];
        r = p.s.post_reif_cmp(p.vars[b], {{1, p.vars[x]}}, pl.k, pl.cmp);
        Val k = pl.k;
        fd::CmpKind cmp = pl.cmp;
        p.checks.push_back([b, x, k, cmp](Tup t) {
          bool holds = cmp == fd::CmpKind::Le   ? t[x] <= k
                       : cmp == fd::CmpKind::Eq ? t[x] == k
                                                : t[x] != k;
          return (t[b] == 1) == holds;
        });
        break;
      }
      case 5: {
        int b = pl.vs[0], x = pl.vs[1], y = pl.vs[2];
        r = p.s.post_bool_and(p.vars[b], {p.vars[x], p.vars[y]});
        p.checks.push_back([b, x, y](Tup t) {
          return (t[b] == 1) == (t[x] == 1 && t[y] == 1);
        });
        break;
      }
      case 6: {
        std::vector<VarId> table;
        for (std::size_t t = 2; t < pl.vs.size(); ++t)
          table.push_back(p.vars[static_cast<std::size_t>(pl.vs[t])]);
        r = p.s.post_element(p.vars[pl.vs[0]], table, p.vars[pl.vs[1]]);
        auto vs = pl.vs;
        p.checks.push_back([vs](Tup t) {
          Val i = t[static_cast<std::size_t>(vs[0])];
          if (i < 0 || i >= static_cast<Val>(vs.size()) - 2) return false;
          return t[static_cast<std::size_t>(vs[2 + i])] ==
                 t[static_cast<std::size_t>(vs[1])];
        });
        break;
      }
      case 7: {
        std::vector<VarId> before = {p.vars[pl.vs[2]], p.vars[pl.vs[3]]};
        std::vector<VarId> after = {p.vars[pl.vs[4]], p.vars[pl.vs[5]]};
        r = p.s.post_array_update(before, p.vars[pl.vs[0]], p.vars[pl.vs[1]],
                                  after);
        auto vs = pl.vs;
        p.checks.push_back([vs](Tup t) {
          Val i = t[static_cast<std::size_t>(vs[0])];
          if (i < 0 || i >= 2) return false;
          for (Val j = 0; j < 2; ++j) {
            Val want = j == i ? t[static_cast<std::size_t>(vs[1])]
                              : t[static_cast<std::size_t>(vs[2 + j])];
            if (t[static_cast<std::size_t>(vs[4 + j])] != want) return false;
          }
          return true;
        });
        break;
      }
    }
    if (r == fd::PostResult::Inconsistent) p.inconsistent = true;
  }
  return p;
}

long long count_brute(const RandomProblem& p) {
  long long n = 0;
  for_each_tuple(p.initial, [&](const std::vector<Val>& t) {
    for (const auto& chk : p.checks)
      if (!chk(t)) return;
    ++n;
  });
  return n;
}

std::vector<Val> members(const Domain& d) {
  std::vector<Val> out;
  for (Val v = d.lo; v <= d.hi; ++v)
    if (d.contains(v)) out.push_back(v);
  return out;
}

bool prop_monotone(std::mt19937_64& rng) {
  RandomProblem p = make_problem(rng, true);
  if (p.inconsistent) return true;
  std::vector<std::vector<Val>> before;
  for (VarId v : p.vars) before.push_back(members(p.s.domain(v)));
  std::size_t pick =
      std::uniform_int_distribution<std::size_t>(0, p.vars.size() - 1)(rng);
  const Domain& d = p.s.domain(p.vars[pick]);
  if (d.empty()) return true;
  Val a = std::uniform_int_distribution<Val>(d.lo, d.hi)(rng);
  Val b = std::uniform_int_distribution<Val>(d.lo, d.hi)(rng);
  if (a > b) std::swap(a, b);
  Store::Mark m = p.s.mark();
  if (p.s.clamp(p.vars[pick], a, b) == fd::PostResult::Inconsistent) {
    p.s.undo_to(m);
    return true;
  }
  for (std::size_t i = 0; i < p.vars.size(); ++i) {
    std::vector<Val> after = members(p.s.domain(p.vars[i]));
    for (Val v : after) {
      bool was = false;
      for (Val w : before[i]) was = was || w == v;
      if (!was) return false;  // narrowing an input grew a domain
    }
  }
  return true;
}

bool prop_snapshot(std::mt19937_64& rng) {
  RandomProblem p = make_problem(rng, true);
  if (p.inconsistent) return true;
  Store::Mark m = p.s.mark();
  std::vector<Domain> doms;
  std::vector<VarId> roots;
  for (VarId v : p.vars) {
    doms.push_back(p.s.domain(v));
    roots.push_back(p.s.find(v));
  }
  // random extra work, consistent or not
  for (int i = 0; i < 3; ++i) {
    std::size_t pick =
        std::uniform_int_distribution<std::size_t>(0, p.vars.size() - 1)(rng);
    Val v = std::uniform_int_distribution<Val>(-4, 4)(rng);
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0:
        p.s.assign(p.vars[pick], v);
        break;
      case 1:
        p.s.exclude(p.vars[pick], v);
        break;
      case 2:
        p.s.post_linear({{1, p.vars[pick]}}, v, v + 2);
        break;
    }
  }
  p.s.undo_to(m);
  if (p.s.mark().constraints != m.constraints) return false;
  if (p.s.mark().vars != m.vars) return false;
  for (std::size_t i = 0; i < p.vars.size(); ++i) {
    if (!(p.s.domain(p.vars[i]) == doms[i])) return false;
    if (p.s.find(p.vars[i]) != roots[i]) return false;
  }
  return true;
}

bool prop_idempotent(std::mt19937_64& rng) {
  RandomProblem p = make_problem(rng, true);
  if (p.inconsistent) return true;
  std::vector<Domain> doms;
  for (VarId v : p.vars) doms.push_back(p.s.domain(v));
  std::vector<int> every;
  for (std::size_t c = 0; c < p.s.mark().constraints; ++c)
    every.push_back(static_cast<int>(c));
  p.s.requeue(every);
  if (p.s.drain() == fd::PostResult::Inconsistent) return false;
  for (std::size_t i = 0; i < p.vars.size(); ++i)
    if (!(p.s.domain(p.vars[i]) == doms[i])) return false;
  return true;
}

bool prop_element_channel(std::mt19937_64& rng) {
  Store s;
  std::uniform_int_distribution<Val> lo_d(-4, 3);
  std::uniform_int_distribution<Val> width_d(0, 6);
  int len = std::uniform_int_distribution<int>(2, 4)(rng);
  std::vector<Domain> init;
  auto mk = [&](Val lo, Val hi) {
    init.emplace_back(lo, hi);
    return s.new_var(Domain(lo, hi));
  };
  Val ilo = std::uniform_int_distribution<Val>(-2, 1)(rng);
  VarId idx = mk(ilo, ilo + width_d(rng));
  VarId val;
  {
    Val lo = lo_d(rng);
    val = mk(lo, lo + width_d(rng));
  }
  std::vector<VarId> table;
  for (int i = 0; i < len; ++i) {
    Val lo = lo_d(rng);
    table.push_back(mk(lo, lo + width_d(rng)));
  }
  std::vector<VarId> all = {idx, val};
  all.insert(all.end(), table.begin(), table.end());

  fd::PostResult r = s.post_element(idx, table, val);

  // ground truth by enumeration of the initial box
  bool any = false;
  std::vector<std::set<Val>> projected(all.size());
  for_each_tuple(init, [&](const std::vector<Val>& t) {
    Val i = t[0];
    if (i < 0 || i >= len) return;
    if (t[static_cast<std::size_t>(2 + i)] != t[1]) return;
    any = true;
    for (std::size_t k = 0; k < all.size(); ++k) projected[k].insert(t[k]);
  });

  if (r == fd::PostResult::Inconsistent) return !any;
  if (!any) {
    // a consistent store must still refute once everything is fixed;
    // full failure detection may be deferred to search, so nothing to
    // check here beyond solve finding no solution
    fd::SolveStats st;
    return fd::solve(s, all, st) == fd::SolveResult::Unsat;
  }
  // no solution may be pruned away
  for (std::size_t k = 0; k < all.size(); ++k)
    for (Val v : projected[k])
      if (!s.domain(all[k]).contains(v)) return false;
  // the index is channeled to [0, len) and to slots meeting val
  const Domain& di = s.domain(idx);
  if (di.lo < 0 || di.hi >= len) return false;
  for (Val i : members(di)) {
    bool meet = false;
    for (Val w : members(s.domain(table[static_cast<std::size_t>(i)])))
      meet = meet || s.domain(val).contains(w);
    if (!meet) return false;
  }
  // a fixed index aliases the slot with the value
  if (di.fixed() &&
      s.find(val) != s.find(table[static_cast<std::size_t>(di.lo)]))
    return false;
  return true;
}

bool prop_solve_equals_enumeration(std::mt19937_64& rng) {
  RandomProblem p = make_problem(rng, true);
  long long brute = count_brute(p);
  if (p.inconsistent) return brute == 0;
  Store::Mark m = p.s.mark();
  fd::SolveStats st;
  fd::SolveResult r = fd::solve(p.s, p.vars, st);
  if ((r == fd::SolveResult::Sat) != (brute > 0)) return false;
  p.s.undo_to(m);
  auto sols = fd::enumerate_solutions(p.s, p.vars,
                                      static_cast<std::size_t>(brute) + 8);
  if (static_cast<long long>(sols.size()) != brute) return false;
  // spot-check each reported tuple against the independent evaluators
  for (const auto& t : sols)
    for (const auto& chk : p.checks)
      if (!chk(t)) return false;
  return true;
}

bool crit_solver_properties(std::string& note) {
  struct PropRow {
    const char* name;
    bool (*fn)(std::mt19937_64&);
    int runs;
  };
  const PropRow props[] = {
      {"monotone", prop_monotone, 150},
      {"snapshot", prop_snapshot, 150},
      {"idempotent", prop_idempotent, 150},
      {"element", prop_element_channel, 150},
      {"solve=enum", prop_solve_equals_enumeration, 150},
  };
  std::ostringstream o;
  bool ok = true;
  for (const PropRow& pr : props) {
    int bad = 0;
    for (int i = 0; i < pr.runs; ++i) {
      std::mt19937_64 rng(0x5eed0000u + i);
      if (!pr.fn(rng)) ++bad;
    }
    ok = ok && bad == 0;
    o << " " << pr.name << ":" << (pr.runs - bad) << "/" << pr.runs;
  }
  note = "[" + o.str().substr(1) + "]";
  return ok;
}

// ---- criterion 11: the printable trace grammar ----

bool crit_trace_grammar(std::string& note) {
  const std::regex line_re(
      R"(^[A-Za-z_][A-Za-z0-9_]*_[0-9]+(\[[0-9]+\])?\[-?[0-9]+:-?[0-9]+\] : (-?[0-9]+|\[-?[0-9]+\.\.-?[0-9]+\])$)");
  int lines = 0, traces = 0;
  auto check = [&](const Unit& u, const Program& p,
                   const InstanceParams& inst) {
    Verdict v = verify(u, p, inst);
    if (v.kind != Verdict::Kind::Counterexample || !v.cex) return false;
    ++traces;
    std::istringstream in(format_trace(*v.cex));
    std::string line;
    if (!std::getline(in, line) || line != "Counter-example found")
      return false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      ++lines;
      if (!std::regex_match(line, line_re)) return false;
    }
    return true;
  };

  bool ok = true;
  {
    Unit u = load("tritypeKO");
    ok = ok && check(u, u.programs[0], {});
  }
  for (int len : {8, 16, 32, 64, 128}) {
    Unit u = load("binarySearchKO");
    InstanceParams inst;
    inst.array_len["tab"] = len;
    ok = ok && check(u, u.programs[0], inst);
  }
  {
    // an index violation and a precondition violation, for trace lines
    // with unfixed interval values
    Unit u = parse_unit(R"(
/*@ requires i >= 0;
  @ ensures \result >= 0 || \result <= 0;
  @*/
int peek(int[] t, int i) {
  return t[i];
}
)",
                        "<acceptance>");
    typecheck(u, "<acceptance>");
    InstanceParams inst;
    inst.array_len["t"] = 4;
    ok = ok && check(u, u.programs[0], inst);
  }
  {
    Unit u = parse_unit(R"(
int caller(int a) {
  int r = pos(a);
  return r;
}

/*@ requires x > 0;
  @ ensures \result == x;
  @*/
int pos(int x) {
  return x;
}
)",
                        "<acceptance>");
    typecheck(u, "<acceptance>");
    ok = ok && check(u, u.programs[0], {});
  }
  note = fmt("[%d lines across %d traces]", lines, traces);
  return ok;
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    bool (*fn)(std::string&);
  };
  const Criterion table[] = {
      {"tritype verified along exactly ten feasible paths", crit_tritype},
      {"faulty tritype refuted by a degenerate isosceles witness",
       crit_tritype_ko},
      {"binary search verified at 8 and 16 within its depth bound",
       crit_bsearch},
      {"faulty binary search refuted at 8 through 128, replay checked",
       crit_bsearch_ko},
      {"bubble sort verified at 8 and 16; 32 may time out but not lie",
       crit_bubble},
      {"square sum verified against its cubic closed form", crit_square_sum},
      {"square sum over a distinct-valued array verified at size 6",
       crit_square_sum_array},
      {"selection sort modular at 40 in one path; findMin exact at 6",
       crit_selection_sort},
      {"engine agrees with the exhaustive oracle on every program",
       crit_oracle_agreement},
      {"solver properties hold on randomized instances",
       crit_solver_properties},
      {"every witness trace line obeys the printable grammar",
       crit_trace_grammar},
  };
  int failures = 0;
  int i = 0;
  for (const Criterion& c : table) {
    ++i;
    std::string note;
    bool ok = false;
    try {
      ok = c.fn(note);
    } catch (const std::exception& e) {
      note = std::string("[exception: ") + e.what() + "]";
    }
    if (!ok) ++failures;
    std::printf("%s  %2d  %s %s\n", ok ? "PASS" : "FAIL", i, c.label,
                note.c_str());
  }
  if (failures) std::printf("%d of 11 acceptance checks failed\n", failures);
  return failures == 0 ? 0 : 1;
}
