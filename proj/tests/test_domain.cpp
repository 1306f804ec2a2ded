#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mimpv/domain.hpp"

using namespace mimpv::fd;

TEST_CASE("default bounds") {
  Domain d;
  CHECK(d.lo == -2147483647);
  CHECK(d.hi == 2147483646);
  CHECK(d.size() == 4294967294);
  CHECK(d.contains(0));
  CHECK_FALSE(d.contains(-2147483648LL));
}

TEST_CASE("integer division helpers round toward the right side") {
  CHECK(floor_div(7, 2) == 3);
  CHECK(floor_div(-7, 2) == -4);
  CHECK(floor_div(7, -2) == -4);
  CHECK(floor_div(-7, -2) == 3);
  CHECK(ceil_div(7, 2) == 4);
  CHECK(ceil_div(-7, 2) == -3);
  CHECK(ceil_div(6, 2) == 3);
  CHECK(ceil_div(-6, 3) == -2);
}

TEST_CASE("clamping and removal keep bounds inside the set") {
  Domain d(0, 10);
  CHECK(d.clamp_lo(3));
  CHECK_FALSE(d.clamp_lo(2));
  CHECK(d.lo == 3);
  CHECK(d.remove(3));
  CHECK(d.lo == 4);  // bound removal shifts instead of punching
  CHECK(d.remove(7));
  CHECK(d.holes == std::vector<Val>{7});
  CHECK(d.size() == 6);
  CHECK_FALSE(d.contains(7));
  CHECK(d.clamp_hi(7));
  CHECK(d.hi == 6);  // normalization walks over the hole
  CHECK(d.holes.empty());
}

TEST_CASE("removal to emptiness") {
  Domain d(5, 6);
  CHECK(d.remove(5));
  CHECK(d.remove(6));
  CHECK(d.empty());
  CHECK(d.size() == 0);
}

TEST_CASE("consecutive holes collapse against a moving bound") {
  Domain d(0, 10);
  for (Val v : {1, 2, 3}) CHECK(d.remove(v));
  CHECK(d.remove(0));
  CHECK(d.lo == 4);
  CHECK(d.holes.empty());
}

TEST_CASE("hole capacity overflow keeps a superset") {
  Domain d(0, 1000);
  for (Val v = 1; v <= static_cast<Val>(Domain::kMaxHoles); ++v)
    CHECK(d.remove(2 * v));
  CHECK_FALSE(d.remove(999));  // dropped, not removed
  CHECK(d.contains(999));
  CHECK(d.holes.size() == Domain::kMaxHoles);
}

TEST_CASE("intersect merges holes and bounds") {
  Domain a(0, 10);
  a.remove(4);
  Domain b(2, 8);
  b.remove(5);
  a.intersect(b);
  CHECK(a.lo == 2);
  CHECK(a.hi == 8);
  CHECK(a.holes == std::vector<Val>{4, 5});
  CHECK(a.size() == 5);
}

TEST_CASE("next_in skips holes") {
  Domain d(0, 10);
  d.remove(3);
  d.remove(4);
  CHECK(d.next_in(-5) == 0);
  CHECK(d.next_in(3) == 5);
  CHECK(d.next_in(10) == 10);
  CHECK(d.next_in(11) == 11);  // past the end
}

TEST_CASE("intersects is exact on narrow overlaps") {
  Domain a(0, 10);
  Domain b(11, 20);
  CHECK_FALSE(a.intersects(b));
  Domain c(10, 20);
  CHECK(a.intersects(c));
  Domain holey(0, 4);
  Domain other(2, 2);
  holey.remove(2);
  CHECK_FALSE(holey.intersects(other));
}
