#include "mimpv/domain.hpp"

#include <algorithm>

namespace mimpv::fd {

Val Domain::size() const {
  if (empty()) return 0;
  return hi - lo + 1 - static_cast<Val>(holes.size());
}

bool Domain::contains(Val v) const {
  if (v < lo || v > hi) return false;
  return !std::binary_search(holes.begin(), holes.end(), v);
}

void Domain::normalize() {
  while (!empty()) {
    auto it = std::lower_bound(holes.begin(), holes.end(), lo);
    if (holes.begin() != it) holes.erase(holes.begin(), it);
    if (!holes.empty() && holes.front() == lo) {
      holes.erase(holes.begin());
      ++lo;
      continue;
    }
    auto back = std::upper_bound(holes.begin(), holes.end(), hi);
    if (back != holes.end()) holes.erase(back, holes.end());
    if (!holes.empty() && holes.back() == hi) {
      holes.pop_back();
      --hi;
      continue;
    }
    break;
  }
  if (empty()) holes.clear();
}

bool Domain::clamp_lo(Val v) {
  if (v <= lo) return false;
  lo = v;
  normalize();
  return true;
}

bool Domain::clamp_hi(Val v) {
  if (v >= hi) return false;
  hi = v;
  normalize();
  return true;
}

bool Domain::remove(Val v) {
  if (v < lo || v > hi) return false;
  if (v == lo) {
    ++lo;
    normalize();
    return true;
  }
  if (v == hi) {
    --hi;
    normalize();
    return true;
  }
  auto it = std::lower_bound(holes.begin(), holes.end(), v);
  if (it != holes.end() && *it == v) return false;
  if (holes.size() >= kMaxHoles) return false;  // dropped, stays a superset
  holes.insert(it, v);
  return true;
}

void Domain::intersect(const Domain& o) {
  lo = std::max(lo, o.lo);
  hi = std::min(hi, o.hi);
  if (empty()) {
    holes.clear();
    return;
  }
  std::vector<Val> merged;
  merged.reserve(holes.size() + o.holes.size());
  std::merge(holes.begin(), holes.end(), o.holes.begin(), o.holes.end(),
             std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  holes.clear();
  for (Val h : merged) {
    if (h <= lo || h >= hi) continue;
    if (holes.size() < kMaxHoles) holes.push_back(h);
  }
  normalize();
}

Val Domain::next_in(Val v) const {
  if (v < lo) v = lo;
  while (v <= hi && std::binary_search(holes.begin(), holes.end(), v)) ++v;
  return v > hi ? hi + 1 : v;
}

bool Domain::intersects(const Domain& o) const {
  Val l = std::max(lo, o.lo);
  Val h = std::min(hi, o.hi);
  if (l > h) return false;
  if (h - l + 1 > 2 * static_cast<Val>(kMaxHoles) + 2) return true;
  for (Val v = l; v <= h; ++v)
    if (contains(v) && o.contains(v)) return true;
  return false;
}

}  // namespace mimpv::fd
