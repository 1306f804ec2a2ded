#include "mimpv/store.hpp"


#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace mimpv::fd {

namespace {

using Wide = __int128;

Val clamp_wide(Wide w) {
  if (w > kNoBound) return kNoBound;
  if (w < -kNoBound) return -kNoBound;
  return static_cast<Val>(w);
}

// floor(sqrt(x)) for x >= 0
Val isqrt(Val x) {
  if (x < 0) return -1;
  Val r = static_cast<Val>(std::sqrt(static_cast<double>(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

}  // namespace

VarId Store::new_var(Domain d, std::string name) {
  VarId id = static_cast<VarId>(vars_.size());
  vars_.push_back({std::move(d), std::move(name)});
  parent_.push_back(id);
  rank_.push_back(0);
  watchers_.emplace_back();
  adj_.emplace_back();
  pi_.push_back(0);
  dom_stamp_.push_back(0);
  return id;
}

VarId Store::new_fixed(Val v) { return new_var(Domain(v, v)); }

VarId Store::find(VarId v) const {
  while (parent_[v] != v) v = parent_[v];
  return v;
}

Store::Mark Store::mark() const {
  ++epoch_;  // writes after this point must trail again
  return {trail_.size(), vars_.size(), constraints_.size()};
}

void Store::undo_to(const Mark& m) {
  assert(queue_head_ == queue_.size());
  while (trail_.size() > m.trail) {
    TrailEntry& e = trail_.back();
    switch (e.kind) {
      case TKind::Dom: vars_[e.v].dom = std::move(e.dom); break;
      case TKind::Parent: parent_[e.v] = e.v; break;
      case TKind::Rank: rank_[e.v] = static_cast<int>(e.a); break;
      case TKind::Watch: watchers_[e.v].resize(static_cast<size_t>(e.a)); break;
      case TKind::RowBounds:
        constraints_[e.c].lo = e.a;
        constraints_[e.c].hi = e.b;
        break;
      case TKind::State: constraints_[e.c].state = e.byte; break;
      case TKind::Pi: pi_[e.v] = e.a; break;
      case TKind::Adj: adj_[e.v].pop_back(); break;
      case TKind::RowKey: row_index_.erase(e.key); break;
    }
    trail_.pop_back();
  }
  constraints_.resize(m.constraints);
  in_queue_.resize(m.constraints);
  vars_.resize(m.vars);
  parent_.resize(m.vars);
  rank_.resize(m.vars);
  watchers_.resize(m.vars);
  adj_.resize(m.vars);
  pi_.resize(m.vars);
  dom_stamp_.resize(m.vars);
  ++epoch_;
}

// --- propagation queue ------------------------------------------------------

void Store::enqueue(int c) {
  if (in_queue_[c]) return;
  in_queue_[c] = 1;
  queue_.push_back(c);
}

void Store::enqueue_watchers(VarId root) {
  for (int c : watchers_[root]) enqueue(c);
}

void Store::clear_queue() {
  while (queue_head_ < queue_.size()) in_queue_[queue_[queue_head_++]] = 0;
  queue_.clear();
  queue_head_ = 0;
}

std::vector<int> Store::pending() const {
  return {queue_.begin() + queue_head_, queue_.end()};
}

void Store::requeue(const std::vector<int>& cs) {
  for (int c : cs) enqueue(c);
}

std::vector<VarId> Store::array_indices_near(VarId v) const {
  std::vector<VarId> out;
  for (int c : watchers_[find(v)]) {
    const Constraint& cc = constraints_[c];
    if (cc.kind == CKind::Element || cc.kind == CKind::ArrayUpdate)
      out.push_back(cc.vars[0]);
  }
  return out;
}

PostResult Store::drain() {
  long long saved = yield_limit_;
  yield_limit_ = 0;
  try {
    PostResult r = propagate();
    yield_limit_ = saved;
    return r;
  } catch (...) {
    yield_limit_ = saved;
    throw;
  }
}

PostResult Store::propagate() {
  long long steps = 0;
  while (queue_head_ < queue_.size()) {
    if (yield_limit_ > 0 && steps >= yield_limit_) return PostResult::Ok;
    ++steps;
    int c = queue_[queue_head_++];
    in_queue_[c] = 0;
    if (queue_head_ == queue_.size()) {
      queue_.clear();
      queue_head_ = 0;
    }
    ++stats_.propagations;
    if (prop_budget_ > 0 && stats_.propagations > prop_budget_) {
      clear_queue();
      throw PropagationBudgetExceeded{};
    }
    if (run(c) == PostResult::Inconsistent) {
      clear_queue();
      return PostResult::Inconsistent;
    }
  }
  return PostResult::Ok;
}

PostResult Store::run(int c) {
  switch (constraints_[c].kind) {
    case CKind::Row: return run_row(constraints_[c]);
    case CKind::NeqSum: return run_neq_sum(constraints_[c]);
    case CKind::Mult: return run_mult(constraints_[c]);
    case CKind::Div: return run_div(constraints_[c]);
    case CKind::Element: return run_element(constraints_[c]);
    case CKind::ArrayUpdate: return run_array_update(constraints_[c]);
    case CKind::Reif: return run_reif(c);
    case CKind::BoolAnd: return run_bool_and(constraints_[c]);
    case CKind::BoolOr: return run_bool_or(constraints_[c]);
  }
  return PostResult::Ok;
}

// --- domain writes ----------------------------------------------------------

PostResult Store::write_domain(VarId root, Domain&& nd) {
  Domain& cur = vars_[root].dom;
  if (nd.lo == cur.lo && nd.hi == cur.hi && nd.holes == cur.holes)
    return PostResult::Ok;
  if (dom_stamp_[root] != epoch_) {
    dom_stamp_[root] = epoch_;
    trail_.push_back({TKind::Dom, root, 0, 0, 0, 0, std::move(cur), {}});
  }
  cur = std::move(nd);
  if (cur.empty()) return PostResult::Inconsistent;
  enqueue_watchers(root);
  return PostResult::Ok;
}

PostResult Store::clamp_root(VarId v, Val lo, Val hi) {
  VarId r = find(v);
  Domain nd = vars_[r].dom;
  bool ch = nd.clamp_lo(lo);
  ch = nd.clamp_hi(hi) || ch;
  if (!ch) return PostResult::Ok;
  return write_domain(r, std::move(nd));
}

PostResult Store::exclude_root(VarId v, Val val) {
  VarId r = find(v);
  Domain nd = vars_[r].dom;
  if (!nd.remove(val)) return PostResult::Ok;
  return write_domain(r, std::move(nd));
}

// --- union-find and the difference graph ------------------------------------

PostResult Store::unify(VarId a, VarId b) {
  VarId ra = find(a), rb = find(b);
  if (ra == rb) return PostResult::Ok;
  // Bridge the graph nodes first: either root may carry older edges.
  if (add_edge(ra, rb, 0) == PostResult::Inconsistent)
    return PostResult::Inconsistent;
  if (add_edge(rb, ra, 0) == PostResult::Inconsistent)
    return PostResult::Inconsistent;
  if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
  if (rank_[ra] == rank_[rb]) {
    trail_.push_back({TKind::Rank, ra, 0, rank_[ra], 0, 0, {}, {}});
    ++rank_[ra];
  }
  Domain merged = vars_[ra].dom;
  merged.intersect(vars_[rb].dom);
  trail_.push_back({TKind::Parent, rb, 0, 0, 0, 0, {}, {}});
  parent_[rb] = ra;
  trail_.push_back(
      {TKind::Watch, ra, 0, static_cast<Val>(watchers_[ra].size()), 0, 0, {}, {}});
  watchers_[ra].insert(watchers_[ra].end(), watchers_[rb].begin(),
                       watchers_[rb].end());
  Domain& cur = vars_[ra].dom;
  if (!(merged.lo == cur.lo && merged.hi == cur.hi && merged.holes == cur.holes)) {
    trail_.push_back({TKind::Dom, ra, 0, 0, 0, 0, std::move(cur), {}});
    cur = std::move(merged);
  }
  if (cur.empty()) return PostResult::Inconsistent;
  // Constraints from either side may tighten now; wake them all.
  enqueue_watchers(ra);
  return PostResult::Ok;
}

PostResult Store::add_edge(VarId u, VarId v, Val w) {
  adj_[u].push_back({v, w});
  trail_.push_back({TKind::Adj, u, 0, 0, 0, 0, {}, {}});
  if (pi_[u] + w >= pi_[v]) return PostResult::Ok;
  return repair_potentials(u, v, w);
}

// Restore the potential invariant pi[x] + w >= pi[y] for all edges after
// inserting (u -> v, w). Potentials only decrease; if the decrease wave
// reaches back to u the new edge closed a negative cycle.
PostResult Store::repair_potentials(VarId u, VarId v, Val w) {
  struct Cand {
    Val val;
    Val orig;
  };
  std::unordered_map<VarId, Cand> cand;
  std::unordered_set<VarId> settled;
  using QE = std::pair<Val, VarId>;  // (orig - candidate, node)
  std::priority_queue<QE, std::vector<QE>, std::greater<>> heap;
  cand[v] = {pi_[u] + w, pi_[v]};
  heap.push({pi_[v] - (pi_[u] + w), v});
  while (!heap.empty()) {
    auto [delta, x] = heap.top();
    heap.pop();
    if (settled.count(x)) continue;
    auto it = cand.find(x);
    if (it == cand.end() || it->second.orig - it->second.val != delta)
      continue;  // stale heap entry
    if (x == u) return PostResult::Inconsistent;
    settled.insert(x);
    trail_.push_back({TKind::Pi, x, 0, pi_[x], 0, 0, {}, {}});
    pi_[x] = it->second.val;
    for (const auto& [y, wxy] : adj_[x]) {
      Val ny = pi_[x] + wxy;
      if (ny >= pi_[y]) continue;
      if (settled.count(y)) return PostResult::Inconsistent;
      auto jt = cand.find(y);
      if (jt != cand.end() && jt->second.val <= ny) continue;
      cand[y] = {ny, pi_[y]};
      heap.push({pi_[y] - ny, y});
    }
  }
  return PostResult::Ok;
}

// Shortest path over the difference edges, or nullopt when unreachable.
// The potential invariant keeps reduced costs non-negative, so plain
// Dijkstra applies. Distances outside the value range are useless to
// callers and reported as unreachable.
std::optional<Val> Store::graph_dist(VarId from, VarId to) const {
  if (from == to) return 0;
  std::unordered_map<VarId, Val> dist;  // reduced-cost distance
  std::unordered_set<VarId> settled;
  using QE = std::pair<Val, VarId>;
  std::priority_queue<QE, std::vector<QE>, std::greater<>> heap;
  dist.emplace(from, 0);
  heap.push({0, from});
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (!settled.insert(x).second) continue;
    if (x == to) {
      Wide td = Wide(d) - pi_[from] + pi_[to];
      if (td < -kNoBound / 2 || td > kNoBound / 2) return std::nullopt;
      return static_cast<Val>(td);
    }
    for (const auto& [y, w] : adj_[x]) {
      Wide rc = Wide(d) + pi_[x] + w - pi_[y];
      if (rc > kNoBound) continue;
      auto it = dist.find(y);
      if (it != dist.end() && it->second <= rc) continue;
      dist[y] = static_cast<Val>(rc);
      heap.push({static_cast<Val>(rc), y});
    }
  }
  return std::nullopt;
}

// --- linear rows ------------------------------------------------------------

Terms Store::canonical(const Terms& terms) const {
  Terms out;
  out.reserve(terms.size());
  for (const auto& [c, v] : terms) out.emplace_back(c, find(v));
  std::sort(out.begin(), out.end(),
            [](const Term& a, const Term& b) { return a.second < b.second; });
  size_t w = 0;
  for (size_t i = 0; i < out.size();) {
    Val coef = 0;
    size_t j = i;
    while (j < out.size() && out[j].second == out[i].second)
      coef += out[j++].first;
    if (coef != 0) out[w++] = {coef, out[i].second};
    i = j;
  }
  out.resize(w);
  return out;
}

Store::NormRow Store::normalize_row(Terms terms, Val lo, Val hi) const {
  Terms canon = canonical(terms);
  // Fold terms over fixed variables into the interval: the row keeps its
  // true arity, and it cannot outlive the fixings it folded because both
  // rewind with the same trail.
  Wide base = 0;
  std::size_t w = 0;
  for (const auto& t : canon) {
    const Domain& d = domain(t.second);
    if (d.fixed())
      base += Wide(t.first) * d.lo;
    else
      canon[w++] = t;
  }
  canon.resize(w);
  if (base != 0) {
    if (lo > -kNoBound) lo = clamp_wide(Wide(lo) - base);
    if (hi < kNoBound) hi = clamp_wide(Wide(hi) - base);
  }
  if (canon.empty()) return {std::move(canon), lo, hi};
  if (canon.front().first < 0) {
    for (auto& t : canon) t.first = -t.first;
    Val nlo = hi >= kNoBound ? -kNoBound : -hi;
    Val nhi = lo <= -kNoBound ? kNoBound : -lo;
    lo = nlo;
    hi = nhi;
  }
  Val g = 0;
  for (const auto& t : canon) g = std::gcd(g, t.first < 0 ? -t.first : t.first);
  if (g > 1) {
    for (auto& t : canon) t.first /= g;
    if (lo > -kNoBound) lo = ceil_div(lo, g);
    if (hi < kNoBound) hi = floor_div(hi, g);
  }
  return {std::move(canon), lo, hi};
}

int Store::add_constraint(Constraint&& c) {
  int idx = static_cast<int>(constraints_.size());
  constraints_.push_back(std::move(c));
  in_queue_.push_back(0);
  return idx;
}

void Store::watch(VarId v, int c) {
  VarId r = find(v);
  trail_.push_back(
      {TKind::Watch, r, 0, static_cast<Val>(watchers_[r].size()), 0, 0, {}, {}});
  watchers_[r].push_back(c);
}

PostResult Store::post_linear_pre(Terms terms, Val lo, Val hi) {
  NormRow row = normalize_row(std::move(terms), lo, hi);
  if (row.lo > row.hi) return PostResult::Inconsistent;
  if (row.key.empty())
    return (row.lo <= 0 && 0 <= row.hi) ? PostResult::Ok
                                        : PostResult::Inconsistent;
  if (row.key.size() == 1) {
    auto [c, x] = row.key.front();  // c > 0 after normalization
    return clamp_root(x, ceil_div(row.lo, c), floor_div(row.hi, c));
  }
  bool unit_pair = row.key.size() == 2 && row.key[0].first == 1 &&
                   row.key[1].first == -1;
  if (unit_pair && row.lo == 0 && row.hi == 0)
    return unify(row.key[0].second, row.key[1].second);
  // x - y in [lo, hi] doubles as a pair of difference graph edges
  auto register_edges = [&](Val lo2, Val hi2) {
    VarId x = row.key[0].second, y = row.key[1].second;
    if (hi2 < kNoBound / 2 && add_edge(y, x, hi2) == PostResult::Inconsistent)
      return PostResult::Inconsistent;
    if (lo2 > -kNoBound / 2 && add_edge(x, y, -lo2) == PostResult::Inconsistent)
      return PostResult::Inconsistent;
    return PostResult::Ok;
  };
  auto it = row_index_.find(row.key);
  if (it != row_index_.end()) {
    Constraint& existing = constraints_[it->second];
    Val nlo = std::max(existing.lo, row.lo);
    Val nhi = std::min(existing.hi, row.hi);
    if (nlo > nhi) return PostResult::Inconsistent;
    if (nlo != existing.lo || nhi != existing.hi) {
      trail_.push_back({TKind::RowBounds, 0, it->second, existing.lo,
                        existing.hi, 0, {}, {}});
      existing.lo = nlo;
      existing.hi = nhi;
      enqueue(it->second);
      if (unit_pair) {
        // Opposite inequalities meeting at [0, 0] pin x == y: merge the
        // variables so disequalities refute at once instead of creeping.
        if (nlo == 0 && nhi == 0)
          return unify(row.key[0].second, row.key[1].second);
        return register_edges(nlo, nhi);
      }
    }
    return PostResult::Ok;
  }
  Constraint c;
  c.kind = CKind::Row;
  c.lo = row.lo;
  c.hi = row.hi;
  c.terms = row.key;
  int idx = add_constraint(std::move(c));
  row_index_.emplace(row.key, idx);
  trail_.push_back({TKind::RowKey, 0, 0, 0, 0, 0, {}, row.key});
  for (const auto& [coef, v] : row.key) watch(v, idx);
  enqueue(idx);
  if (unit_pair) return register_edges(row.lo, row.hi);
  return PostResult::Ok;
}

PostResult Store::run_row(Constraint& c) {
  Terms t = canonical(c.terms);
  if (t.empty())
    return (c.lo <= 0 && 0 <= c.hi) ? PostResult::Ok : PostResult::Inconsistent;
  Wide sum_min = 0, sum_max = 0;
  for (const auto& [coef, v] : t) {
    const Domain& d = domain(v);
    if (coef > 0) {
      sum_min += Wide(coef) * d.lo;
      sum_max += Wide(coef) * d.hi;
    } else {
      sum_min += Wide(coef) * d.hi;
      sum_max += Wide(coef) * d.lo;
    }
  }
  if (sum_min > Wide(c.hi) || sum_max < Wide(c.lo))
    return PostResult::Inconsistent;
  // A row left with exactly two live unit terms is a difference
  // constraint. Register it with the potential graph: an implied
  // negative cycle is then refuted at once instead of by endpoint
  // shaving that walks the whole domain.
  if (t.size() > 2) {
    Terms live;
    Wide base = 0;
    for (const auto& [coef, v] : t) {
      const Domain& d = domain(v);
      if (d.fixed())
        base += Wide(coef) * d.lo;
      else
        live.emplace_back(coef, v);
    }
    if (live.size() == 2) {
      VarId x = -1, y = -1;
      if (live[0].first == 1 && live[1].first == -1) {
        x = live[0].second;
        y = live[1].second;
      } else if (live[0].first == -1 && live[1].first == 1) {
        x = live[1].second;
        y = live[0].second;
      }
      if (x >= 0) {  // x - y within [c.lo - base, c.hi - base]
        Val lo2 = c.lo > -kNoBound / 2 ? clamp_wide(Wide(c.lo) - base)
                                       : -kNoBound;
        Val hi2 =
            c.hi < kNoBound / 2 ? clamp_wide(Wide(c.hi) - base) : kNoBound;
        if (lo2 == 0 && hi2 == 0) return unify(x, y);
        if (hi2 < kNoBound / 2 &&
            add_edge(y, x, hi2) == PostResult::Inconsistent)
          return PostResult::Inconsistent;
        if (lo2 > -kNoBound / 2 &&
            add_edge(x, y, -lo2) == PostResult::Inconsistent)
          return PostResult::Inconsistent;
      }
    }
  }
  for (const auto& [coef, v] : t) {
    const Domain& d = domain(v);
    Wide my_min = coef > 0 ? Wide(coef) * d.lo : Wide(coef) * d.hi;
    Wide my_max = coef > 0 ? Wide(coef) * d.hi : Wide(coef) * d.lo;
    Val rest_min = clamp_wide(sum_min - my_min);
    Val rest_max = clamp_wide(sum_max - my_max);
    Val want_lo, want_hi;
    if (coef > 0) {
      want_lo = ceil_div(clamp_wide(Wide(c.lo) - rest_max), coef);
      want_hi = floor_div(clamp_wide(Wide(c.hi) - rest_min), coef);
    } else {
      want_lo = ceil_div(clamp_wide(Wide(c.hi) - rest_min), coef);
      want_hi = floor_div(clamp_wide(Wide(c.lo) - rest_max), coef);
    }
    if (clamp_root(v, want_lo, want_hi) == PostResult::Inconsistent)
      return PostResult::Inconsistent;
  }
  return PostResult::Ok;
}

PostResult Store::post_linear_neq_pre(Terms terms, Val k) {
  NormRow row = normalize_row(std::move(terms), k, k);
  if (row.lo != row.hi) return PostResult::Ok;  // k not divisible by the gcd
  k = row.lo;
  if (row.key.empty())
    return k == 0 ? PostResult::Inconsistent : PostResult::Ok;
  if (row.key.size() == 1) {
    auto [c, x] = row.key.front();
    if (k % c != 0) return PostResult::Ok;
    return exclude_root(x, k / c);
  }
  Constraint c;
  c.kind = CKind::NeqSum;
  c.lo = k;
  c.terms = std::move(row.key);
  int idx = add_constraint(std::move(c));
  for (const auto& [coef, v] : constraints_[idx].terms) watch(v, idx);
  enqueue(idx);
  return PostResult::Ok;
}

PostResult Store::run_neq_sum(Constraint& c) {
  Terms t = canonical(c.terms);
  Val k = c.lo;
  Wide fixed_sum = 0;
  Terms live;
  for (const auto& [coef, v] : t) {
    const Domain& d = domain(v);
    if (d.fixed()) {
      fixed_sum += Wide(coef) * d.lo;
    } else {
      if (live.size() == 2) return PostResult::Ok;  // three unfixed: nothing to prune
      live.emplace_back(coef, v);
    }
  }
  Wide rest = Wide(k) - fixed_sum;
  if (live.empty()) return rest == 0 ? PostResult::Inconsistent : PostResult::Ok;
  if (live.size() == 2) {
    // Two open unit terms leave x - y != rest. Domains cannot prune that,
    // but the difference graph may have pinned x - y to a single value:
    // opposing inequality chains do exactly that, and labeling would
    // otherwise walk the whole domain before noticing.
    VarId x = -1, y = -1;
    if (live[0].first == 1 && live[1].first == -1) {
      x = live[0].second;
      y = live[1].second;
    } else if (live[0].first == -1 && live[1].first == 1) {
      x = live[1].second;
      y = live[0].second;
    }
    if (x < 0 || rest < -kNoBound / 2 || rest > kNoBound / 2)
      return PostResult::Ok;
    std::optional<Val> up = graph_dist(y, x);  // x - y <= up
    if (!up || Wide(*up) != rest) return PostResult::Ok;
    std::optional<Val> dn = graph_dist(x, y);  // x - y >= -dn
    if (dn && Wide(-*dn) == rest) return PostResult::Inconsistent;
    return PostResult::Ok;
  }
  Val open_coef = live[0].first;
  VarId open_var = live[0].second;
  if (rest % open_coef != 0) return PostResult::Ok;
  Wide q = rest / open_coef;
  if (q < -kNoBound || q > kNoBound) return PostResult::Ok;
  return exclude_root(open_var, static_cast<Val>(q));
}

// --- multiplication and division --------------------------------------------

PostResult Store::run_mult(Constraint& c) {
  VarId x = c.vars[0], y = c.vars[1], z = c.vars[2];
  VarId rx = find(x), ry = find(y);
  const Domain& dx = vars_[rx].dom;
  if (rx == ry) {
    // z == x * x
    Val a = dx.lo, b = dx.hi;
    Wide hi2 = std::max(Wide(a) * a, Wide(b) * b);
    Wide lo2 = (a <= 0 && 0 <= b) ? 0 : std::min(Wide(a) * a, Wide(b) * b);
    if (clamp_root(z, clamp_wide(lo2), clamp_wide(hi2)) ==
        PostResult::Inconsistent)
      return PostResult::Inconsistent;
    const Domain& dz2 = domain(z);
    if (dz2.hi >= 0) {
      Val s = isqrt(dz2.hi);
      if (clamp_root(x, -s, s) == PostResult::Inconsistent)
        return PostResult::Inconsistent;
    }
    const Domain& dx2 = domain(x);
    if (dz2.lo > 0) {
      Val m = isqrt(dz2.lo - 1) + 1;  // smallest m with m*m >= lo
      if (dx2.lo >= 0) {
        if (clamp_root(x, m, dx2.hi) == PostResult::Inconsistent)
          return PostResult::Inconsistent;
      } else if (dx2.hi <= 0) {
        if (clamp_root(x, dx2.lo, -m) == PostResult::Inconsistent)
          return PostResult::Inconsistent;
      }
    }
    return PostResult::Ok;
  }
  const Domain& dy = vars_[ry].dom;
  auto corners = [](const Domain& p, const Domain& q, Wide& lo, Wide& hi) {
    Wide c1 = Wide(p.lo) * q.lo, c2 = Wide(p.lo) * q.hi;
    Wide c3 = Wide(p.hi) * q.lo, c4 = Wide(p.hi) * q.hi;
    lo = std::min(std::min(c1, c2), std::min(c3, c4));
    hi = std::max(std::max(c1, c2), std::max(c3, c4));
  };
  Wide plo, phi;
  corners(dx, dy, plo, phi);
  if (clamp_root(z, clamp_wide(plo), clamp_wide(phi)) ==
      PostResult::Inconsistent)
    return PostResult::Inconsistent;
  // reverse: x in hull of z / y when y cannot be zero
  auto reverse = [&](VarId target, const Domain& dd) -> PostResult {
    const Domain& dzz = domain(z);
    if (dd.lo == 0 && dd.hi == 0) {
      // target * 0 == z forces z == 0, no bound on target
      return (dzz.contains(0)) ? clamp_root(z, 0, 0) : PostResult::Inconsistent;
    }
    if (dd.lo <= 0 && 0 <= dd.hi) return PostResult::Ok;
    if (dd.fixed()) {
      Val cc = dd.lo;
      Val lo2 = cc > 0 ? ceil_div(dzz.lo, cc) : ceil_div(dzz.hi, cc);
      Val hi2 = cc > 0 ? floor_div(dzz.hi, cc) : floor_div(dzz.lo, cc);
      return clamp_root(target, lo2, hi2);
    }
    Val cands[4] = {floor_div(dzz.lo, dd.lo), floor_div(dzz.lo, dd.hi),
                    floor_div(dzz.hi, dd.lo), floor_div(dzz.hi, dd.hi)};
    Val lo2 = *std::min_element(cands, cands + 4);
    Val cands2[4] = {ceil_div(dzz.lo, dd.lo), ceil_div(dzz.lo, dd.hi),
                     ceil_div(dzz.hi, dd.lo), ceil_div(dzz.hi, dd.hi)};
    Val hi2 = *std::max_element(cands2, cands2 + 4);
    return clamp_root(target, lo2, hi2);
  };
  if (reverse(x, domain(y)) == PostResult::Inconsistent)
    return PostResult::Inconsistent;
  if (reverse(y, domain(x)) == PostResult::Inconsistent)
    return PostResult::Inconsistent;
  return PostResult::Ok;
}

PostResult Store::run_div(Constraint& c) {
  VarId x = c.vars[0], y = c.vars[1], z = c.vars[2];
  const Domain& dy = domain(y);
  if (dy.fixed() && dy.lo == 0) return PostResult::Inconsistent;
  const Domain& dx = domain(x);
  if (dy.fixed()) {
    Val d = dy.lo;
    // trunc division is monotone in x for fixed divisor
    Val q1 = dx.lo / d, q2 = dx.hi / d;
    if (clamp_root(z, std::min(q1, q2), std::max(q1, q2)) ==
        PostResult::Inconsistent)
      return PostResult::Inconsistent;
    const Domain& dz = domain(z);
    Val zl = dz.lo, zh = dz.hi;
    Val ad = d > 0 ? d : -d;
    // x values with trunc(x / d) in [zl, zh]
    Val xlo, xhi;
    if (d > 0) {
      xlo = zl * d - (zl <= 0 ? ad - 1 : 0);
      xhi = zh * d + (zh >= 0 ? ad - 1 : 0);
    } else {
      xlo = zh * d - (zh >= 0 ? ad - 1 : 0);
      xhi = zl * d + (zl <= 0 ? ad - 1 : 0);
    }
    return clamp_root(x, xlo, xhi);
  }
  // divisor not fixed: |z| <= |x|, extremes at divisor = +-1 or the bounds
  Val c1[2] = {dy.lo, dy.hi};
  Val cands[8];
  int n = 0;
  auto add_div = [&](Val d) {
    if (d == 0 || d < dy.lo || d > dy.hi) return;
    cands[n++] = dx.lo / d;
    cands[n++] = dx.hi / d;
  };
  add_div(c1[0]);
  add_div(c1[1]);
  add_div(1);
  add_div(-1);
  if (n == 0) return PostResult::Inconsistent;  // domain is only zero
  Val lo = *std::min_element(cands, cands + n);
  Val hi = *std::max_element(cands, cands + n);
  return clamp_root(z, lo, hi);
}

// --- element and array update ----------------------------------------------

PostResult Store::run_element(Constraint& c) {
  VarId idx = c.vars[0], val = c.vars[1];
  Val len = static_cast<Val>(c.vars.size()) - 2;
  if (clamp_root(idx, 0, len - 1) == PostResult::Inconsistent)
    return PostResult::Inconsistent;
  const Domain* did = &domain(idx);
  for (Val j = did->next_in(did->lo); j <= did->hi; j = did->next_in(j + 1)) {
    if (!domain(c.vars[2 + j]).intersects(domain(val))) {
      if (exclude_root(idx, j) == PostResult::Inconsistent)
        return PostResult::Inconsistent;
      did = &domain(idx);
    }
  }
  const Domain& di = domain(idx);
  if (di.fixed()) return unify(val, c.vars[2 + di.lo]);
  Val lo = kNoBound, hi = -kNoBound;
  for (Val j = di.next_in(di.lo); j <= di.hi; j = di.next_in(j + 1)) {
    const Domain& ds = domain(c.vars[2 + j]);
    lo = std::min(lo, ds.lo);
    hi = std::max(hi, ds.hi);
  }
  return clamp_root(val, lo, hi);
}

PostResult Store::run_array_update(Constraint& c) {
  VarId idx = c.vars[0], val = c.vars[1];
  Val len = (static_cast<Val>(c.vars.size()) - 2) / 2;
  const VarId* before = c.vars.data() + 2;
  const VarId* after = before + len;
  if (clamp_root(idx, 0, len - 1) == PostResult::Inconsistent)
    return PostResult::Inconsistent;
  for (Val j = 0; j < len; ++j) {
    if (!domain(idx).contains(j)) {
      if (unify(after[j], before[j]) == PostResult::Inconsistent)
        return PostResult::Inconsistent;
      continue;
    }
    const Domain& db = domain(before[j]);
    const Domain& dv = domain(val);
    if (clamp_root(after[j], std::min(db.lo, dv.lo), std::max(db.hi, dv.hi)) ==
        PostResult::Inconsistent)
      return PostResult::Inconsistent;
    if (!domain(after[j]).intersects(domain(before[j]))) {
      // the write must have landed here
      Domain nd = domain(idx);
      if (!nd.contains(j)) return PostResult::Inconsistent;
      if (clamp_root(idx, j, j) == PostResult::Inconsistent)
        return PostResult::Inconsistent;
    } else if (!domain(after[j]).intersects(domain(val))) {
      if (exclude_root(idx, j) == PostResult::Inconsistent)
        return PostResult::Inconsistent;
    }
  }
  const Domain& di = domain(idx);
  if (di.fixed()) return unify(after[di.lo], val);
  return PostResult::Ok;
}

// --- reified comparisons and boolean structure ------------------------------

PostResult Store::post_reif_pre(VarId b, Terms terms, Val k, CmpKind kind) {
  Constraint c;
  c.kind = CKind::Reif;
  c.cmp = kind;
  c.lo = k;
  c.terms = std::move(terms);
  c.b = b;
  int idx = add_constraint(std::move(c));
  watch(b, idx);
  for (const auto& [coef, v] : constraints_[idx].terms) watch(v, idx);
  enqueue(idx);
  return PostResult::Ok;
}

PostResult Store::run_reif(int ci) {
  Constraint& c = constraints_[ci];
  if (c.state == 1) return PostResult::Ok;
  Val k = c.lo;
  if (fixed(c.b)) {
    bool truth = value(c.b) == 1;
    trail_.push_back({TKind::State, 0, ci, 0, 0, c.state, {}, {}});
    c.state = 1;
    Terms copy = c.terms;  // c may move when posting grows constraints_
    CmpKind cmp = c.cmp;
    switch (cmp) {
      case CmpKind::Le:
        return truth ? post_linear_pre(std::move(copy), -kNoBound, k)
                     : post_linear_pre(std::move(copy), k + 1, kNoBound);
      case CmpKind::Eq:
        return truth ? post_linear_pre(std::move(copy), k, k)
                     : post_linear_neq_pre(std::move(copy), k);
      case CmpKind::Ne:
        return truth ? post_linear_neq_pre(std::move(copy), k)
                     : post_linear_pre(std::move(copy), k, k);
    }
    return PostResult::Ok;
  }
  Terms t = canonical(c.terms);
  Wide smin = 0, smax = 0;
  for (const auto& [coef, v] : t) {
    const Domain& d = domain(v);
    if (coef > 0) {
      smin += Wide(coef) * d.lo;
      smax += Wide(coef) * d.hi;
    } else {
      smin += Wide(coef) * d.hi;
      smax += Wide(coef) * d.lo;
    }
  }
  int force = -1;  // 0, 1, or leave free
  switch (c.cmp) {
    case CmpKind::Le:
      if (smax <= k) force = 1;
      else if (smin > k) force = 0;
      break;
    case CmpKind::Eq:
      if (smin == smax && smin == k) force = 1;
      else if (Wide(k) < smin || Wide(k) > smax) force = 0;
      break;
    case CmpKind::Ne:
      if (smin == smax && smin == k) force = 0;
      else if (Wide(k) < smin || Wide(k) > smax) force = 1;
      break;
  }
  if (force != -1) return clamp_root(c.b, force, force);
  return PostResult::Ok;
}

PostResult Store::run_bool_and(Constraint& c) {
  VarId b = c.vars[0];
  size_t n = c.vars.size() - 1;
  if (fixed(b) && value(b) == 1) {
    for (size_t i = 1; i <= n; ++i)
      if (clamp_root(c.vars[i], 1, 1) == PostResult::Inconsistent)
        return PostResult::Inconsistent;
    return PostResult::Ok;
  }
  size_t ones = 0;
  int open = -1;
  for (size_t i = 1; i <= n; ++i) {
    const Domain& d = domain(c.vars[i]);
    if (d.fixed() && d.lo == 0) return clamp_root(b, 0, 0);
    if (d.fixed() && d.lo == 1) ++ones;
    else open = static_cast<int>(i);
  }
  if (ones == n) return clamp_root(b, 1, 1);
  if (fixed(b) && value(b) == 0 && ones == n - 1 && open != -1)
    return clamp_root(c.vars[open], 0, 0);
  return PostResult::Ok;
}

PostResult Store::run_bool_or(Constraint& c) {
  VarId b = c.vars[0];
  size_t n = c.vars.size() - 1;
  if (fixed(b) && value(b) == 0) {
    for (size_t i = 1; i <= n; ++i)
      if (clamp_root(c.vars[i], 0, 0) == PostResult::Inconsistent)
        return PostResult::Inconsistent;
    return PostResult::Ok;
  }
  size_t zeros = 0;
  int open = -1;
  for (size_t i = 1; i <= n; ++i) {
    const Domain& d = domain(c.vars[i]);
    if (d.fixed() && d.lo == 1) return clamp_root(b, 1, 1);
    if (d.fixed() && d.lo == 0) ++zeros;
    else open = static_cast<int>(i);
  }
  if (zeros == n) return clamp_root(b, 0, 0);
  if (fixed(b) && value(b) == 1 && zeros == n - 1 && open != -1)
    return clamp_root(c.vars[open], 1, 1);
  return PostResult::Ok;
}

// --- public posting API -----------------------------------------------------

PostResult Store::assign(VarId v, Val val) { return clamp(v, val, val); }

PostResult Store::clamp(VarId v, Val lo, Val hi) {
  if (clamp_root(v, lo, hi) == PostResult::Inconsistent) {
    clear_queue();
    return PostResult::Inconsistent;
  }
  return propagate();
}

PostResult Store::exclude(VarId v, Val val) {
  if (exclude_root(v, val) == PostResult::Inconsistent) {
    clear_queue();
    return PostResult::Inconsistent;
  }
  return propagate();
}

PostResult Store::post_linear(Terms terms, Val lo, Val hi) {
  if (post_linear_pre(std::move(terms), lo, hi) == PostResult::Inconsistent) {
    clear_queue();
    return PostResult::Inconsistent;
  }
  return propagate();
}

PostResult Store::post_linear_neq(Terms terms, Val k) {
  if (post_linear_neq_pre(std::move(terms), k) == PostResult::Inconsistent) {
    clear_queue();
    return PostResult::Inconsistent;
  }
  return propagate();
}

PostResult Store::post_eq(VarId a, VarId b) {
  if (unify(a, b) == PostResult::Inconsistent) {
    clear_queue();
    return PostResult::Inconsistent;
  }
  return propagate();
}

PostResult Store::post_neq(VarId a, VarId b) {
  return post_linear_neq({{1, a}, {-1, b}}, 0);
}

PostResult Store::post_mult(VarId x, VarId y, VarId z) {
  Constraint c;
  c.kind = CKind::Mult;
  c.vars = {x, y, z};
  int idx = add_constraint(std::move(c));
  watch(x, idx);
  watch(y, idx);
  watch(z, idx);
  enqueue(idx);
  return propagate();
}

PostResult Store::post_div(VarId x, VarId y, VarId z) {
  Constraint c;
  c.kind = CKind::Div;
  c.vars = {x, y, z};
  int idx = add_constraint(std::move(c));
  watch(x, idx);
  watch(y, idx);
  watch(z, idx);
  enqueue(idx);
  return propagate();
}

PostResult Store::post_element(VarId idx, std::vector<VarId> table, VarId val) {
  Constraint c;
  c.kind = CKind::Element;
  c.vars.reserve(table.size() + 2);
  c.vars.push_back(idx);
  c.vars.push_back(val);
  c.vars.insert(c.vars.end(), table.begin(), table.end());
  int ci = add_constraint(std::move(c));
  for (VarId v : constraints_[ci].vars) watch(v, ci);
  enqueue(ci);
  return propagate();
}

PostResult Store::post_array_update(std::vector<VarId> before, VarId idx,
                                    VarId val, std::vector<VarId> after) {
  Constraint c;
  c.kind = CKind::ArrayUpdate;
  c.vars.reserve(before.size() * 2 + 2);
  c.vars.push_back(idx);
  c.vars.push_back(val);
  c.vars.insert(c.vars.end(), before.begin(), before.end());
  c.vars.insert(c.vars.end(), after.begin(), after.end());
  int ci = add_constraint(std::move(c));
  for (VarId v : constraints_[ci].vars) watch(v, ci);
  enqueue(ci);
  return propagate();
}

PostResult Store::post_alldiff(const std::vector<VarId>& vars) {
  for (size_t i = 0; i < vars.size(); ++i)
    for (size_t j = i + 1; j < vars.size(); ++j)
      if (post_linear_neq_pre({{1, vars[i]}, {-1, vars[j]}}, 0) ==
          PostResult::Inconsistent) {
        clear_queue();
        return PostResult::Inconsistent;
      }
  return propagate();
}

PostResult Store::post_reif_cmp(VarId b, Terms terms, Val k, CmpKind kind) {
  if (post_reif_pre(b, std::move(terms), k, kind) == PostResult::Inconsistent) {
    clear_queue();
    return PostResult::Inconsistent;
  }
  return propagate();
}

PostResult Store::post_bool_and(VarId b, std::vector<VarId> xs) {
  Constraint c;
  c.kind = CKind::BoolAnd;
  c.vars.reserve(xs.size() + 1);
  c.vars.push_back(b);
  c.vars.insert(c.vars.end(), xs.begin(), xs.end());
  int ci = add_constraint(std::move(c));
  for (VarId v : constraints_[ci].vars) watch(v, ci);
  enqueue(ci);
  return propagate();
}

PostResult Store::post_bool_or(VarId b, std::vector<VarId> xs) {
  Constraint c;
  c.kind = CKind::BoolOr;
  c.vars.reserve(xs.size() + 1);
  c.vars.push_back(b);
  c.vars.insert(c.vars.end(), xs.begin(), xs.end());
  int ci = add_constraint(std::move(c));
  for (VarId v : constraints_[ci].vars) watch(v, ci);
  enqueue(ci);
  return propagate();
}

}  // namespace mimpv::fd
