#pragma once

#include <cstdint>
#include <vector>

namespace mimpv::fd {

using Val = std::int64_t;

// Every program variable ranges over this interval unless a tighter bound is
// requested. Values outside it are pruned, never wrapped.
inline constexpr Val kDefaultLo = -2147483647;
inline constexpr Val kDefaultHi = 2147483646;

// Open side of a linear constraint interval. Kept far below the int64 limit
// so sums of a few bounded terms cannot overflow past it.
inline constexpr Val kNoBound = INT64_MAX / 4;

constexpr Val floor_div(Val a, Val b) {
  Val q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

constexpr Val ceil_div(Val a, Val b) {
  Val q = a / b;
  return (a % b != 0 && ((a < 0) == (b < 0))) ? q + 1 : q;
}

// Interval with up to kMaxHoles removed interior values. When the cap is hit
// further removals are dropped, which keeps the set a superset of the true
// domain; propagators recheck exact satisfaction once variables are fixed.
struct Domain {
  static constexpr std::size_t kMaxHoles = 64;

  Val lo = kDefaultLo;
  Val hi = kDefaultHi;
  std::vector<Val> holes;  // sorted, strictly between lo and hi

  Domain() = default;
  Domain(Val l, Val h) : lo(l), hi(h) {}

  bool empty() const { return lo > hi; }
  bool fixed() const { return lo == hi; }
  Val size() const;
  bool contains(Val v) const;
  bool operator==(const Domain&) const = default;

  // Mutators return true when the domain changed. A wiped-out domain is left
  // with lo > hi.
  bool clamp_lo(Val v);
  bool clamp_hi(Val v);
  bool remove(Val v);
  void intersect(const Domain& o);

  // Smallest member >= v, or hi + 1 when there is none.
  Val next_in(Val v) const;

  // May report true for domains that only share holes; never reports false
  // for domains with a common member.
  bool intersects(const Domain& o) const;

 private:
  void normalize();
};

}  // namespace mimpv::fd
