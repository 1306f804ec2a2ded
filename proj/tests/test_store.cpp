#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "mimpv/store.hpp"

using namespace mimpv::fd;

TEST_CASE("linear row prunes bounds both ways") {
  Store s;
  VarId x = s.new_var(Domain(0, 4), "x");
  VarId y = s.new_var(Domain(0, 100), "y");
  REQUIRE(s.post_linear({{1, x}, {1, y}}, 10, 10) == PostResult::Ok);
  CHECK(s.min(y) == 6);
  CHECK(s.max(y) == 10);
  REQUIRE(s.clamp(y, 9, 10) == PostResult::Ok);
  CHECK(s.min(x) == 0);
  CHECK(s.max(x) == 1);
}

TEST_CASE("same left-hand side intersects intervals at post time") {
  Store s;
  VarId x = s.new_var(Domain(0, 30));
  VarId y = s.new_var(Domain(0, 30));
  REQUIRE(s.post_linear({{1, x}, {1, y}}, 0, 100) == PostResult::Ok);
  REQUIRE(s.post_linear({{1, x}, {1, y}}, 50, 200) == PostResult::Ok);
  // merged interval [50, 100] forces x >= 50 - 30
  CHECK(s.min(x) == 20);
}

TEST_CASE("disjoint intervals on one row fail without search") {
  Store s;
  VarId x = s.new_var(Domain(0, 100));
  VarId y = s.new_var(Domain(0, 100));
  VarId z = s.new_var(Domain(0, 100));
  REQUIRE(s.post_linear({{1, x}, {1, y}, {1, z}}, 0, 5) == PostResult::Ok);
  CHECK(s.post_linear({{1, x}, {1, y}, {1, z}}, 10, 20) ==
        PostResult::Inconsistent);
}

TEST_CASE("gcd normalization lines up scaled copies of a row") {
  Store s;
  VarId x = s.new_var(Domain(0, 50));
  VarId y = s.new_var(Domain(0, 50));
  // 2x + 2y in [0,4] is x + y in [0,2]
  REQUIRE(s.post_linear({{2, x}, {2, y}}, 0, 4) == PostResult::Ok);
  CHECK(s.post_linear({{1, x}, {1, y}}, 3, 9) == PostResult::Inconsistent);
}

TEST_CASE("sign normalization lines up mirrored rows") {
  Store s;
  VarId x = s.new_var(Domain(0, 50));
  VarId y = s.new_var(Domain(0, 50));
  REQUIRE(s.post_linear({{1, x}, {-1, y}}, 2, 2) == PostResult::Ok);
  SUBCASE("mirror with the same meaning merges cleanly") {
    REQUIRE(s.post_linear({{-1, x}, {1, y}}, -2, -2) == PostResult::Ok);
    REQUIRE(s.assign(y, 10) == PostResult::Ok);
    CHECK(s.value(x) == 12);
  }
  SUBCASE("mirror with a contradicting constant fails") {
    CHECK(s.post_linear({{-1, x}, {1, y}}, 3, 3) == PostResult::Inconsistent);
  }
}

TEST_CASE("difference cycle is refuted without bound creep") {
  Store s;
  VarId x = s.new_var(Domain{}, "x");
  VarId y = s.new_var(Domain{}, "y");
  VarId z = s.new_var(Domain{}, "z");
  REQUIRE(s.post_linear({{1, x}, {-1, y}}, -kNoBound, 0) == PostResult::Ok);
  REQUIRE(s.post_linear({{1, y}, {-1, z}}, -kNoBound, 0) == PostResult::Ok);
  CHECK(s.post_linear({{1, z}, {-1, x}}, -kNoBound, -1) ==
        PostResult::Inconsistent);
  // full-width domains: unit-step creep would need ~2^31 passes
  CHECK(s.stats().propagations < 1000);
}

TEST_CASE("rows reduced by fixed terms still feed the difference graph") {
  Store s;
  VarId x = s.new_var(Domain{});
  VarId y = s.new_var(Domain{});
  VarId one = s.new_fixed(1);
  // x - y + 1 <= 0 folds to x <= y - 1, which contradicts y <= x. The
  // graph must refute the cycle at once, not creep across the domain.
  REQUIRE(s.post_linear({{1, x}, {-1, y}, {1, one}}, -kNoBound, 0) ==
          PostResult::Ok);
  s.set_propagation_budget(10000);
  CHECK(s.post_linear({{1, y}, {-1, x}}, -kNoBound, 0) ==
        PostResult::Inconsistent);
  CHECK(s.stats().propagations < 1000);
}

TEST_CASE("equating variables merges them") {
  Store s;
  VarId a = s.new_var(Domain(0, 10), "a");
  VarId b = s.new_var(Domain(5, 15), "b");
  REQUIRE(s.post_eq(a, b) == PostResult::Ok);
  CHECK(s.find(a) == s.find(b));
  CHECK(s.min(a) == 5);
  CHECK(s.max(a) == 10);
  REQUIRE(s.assign(a, 7) == PostResult::Ok);
  CHECK(s.value(b) == 7);
  CHECK(s.post_neq(a, b) == PostResult::Inconsistent);
}

TEST_CASE("merging keeps difference edges through the union") {
  Store s;
  VarId x = s.new_var(Domain{});
  VarId y = s.new_var(Domain{});
  VarId z = s.new_var(Domain{});
  REQUIRE(s.post_linear({{1, x}, {-1, y}}, -kNoBound, 0) == PostResult::Ok);
  REQUIRE(s.post_eq(y, z) == PostResult::Ok);
  CHECK(s.post_linear({{1, z}, {-1, x}}, -kNoBound, -1) ==
        PostResult::Inconsistent);
  CHECK(s.stats().propagations < 1000);
}

TEST_CASE("undo restores domains, merges and constraints") {
  Store s;
  VarId a = s.new_var(Domain(0, 10), "a");
  VarId b = s.new_var(Domain(0, 10), "b");
  std::vector<Domain> before = {s.domain(a), s.domain(b)};
  Store::Mark m = s.mark();

  REQUIRE(s.post_linear({{1, a}, {1, b}}, 4, 4) == PostResult::Ok);
  REQUIRE(s.post_eq(a, b) == PostResult::Ok);
  VarId c = s.new_var(Domain(0, 3), "c");
  REQUIRE(s.assign(c, 2) == PostResult::Ok);
  CHECK(s.value(a) == 2);

  s.undo_to(m);
  CHECK(s.num_vars() == 2);
  CHECK(s.find(a) != s.find(b));
  CHECK(s.domain(a) == before[0]);
  CHECK(s.domain(b) == before[1]);

  // the undone rows are really gone: the opposite constraint now fits
  REQUIRE(s.post_linear({{1, a}, {1, b}}, 20, 20) == PostResult::Ok);
  CHECK(s.min(a) == 10);
}

TEST_CASE("undo after a failed post recovers the entry state") {
  Store s;
  VarId x = s.new_var(Domain(0, 5), "x");
  Domain before = s.domain(x);
  Store::Mark m = s.mark();
  REQUIRE(s.post_linear({{1, x}}, 9, 9) == PostResult::Inconsistent);
  s.undo_to(m);
  CHECK(s.domain(x) == before);
}

TEST_CASE("multiplication squares stay nonnegative") {
  Store s;
  VarId x = s.new_var(Domain(-3, 2), "x");
  VarId z = s.new_var(Domain{}, "z");
  REQUIRE(s.post_mult(x, x, z) == PostResult::Ok);
  CHECK(s.min(z) == 0);
  CHECK(s.max(z) == 9);
}

TEST_CASE("square root pruning in reverse") {
  Store s;
  VarId x = s.new_var(Domain(0, 100), "x");
  VarId z = s.new_var(Domain{}, "z");
  REQUIRE(s.post_mult(x, x, z) == PostResult::Ok);
  REQUIRE(s.clamp(z, 10, 80) == PostResult::Ok);
  CHECK(s.min(x) == 4);   // 3*3 = 9 < 10
  CHECK(s.max(x) == 8);   // 9*9 = 81 > 80
  Store t;
  VarId u = t.new_var(Domain(-100, 100));
  VarId w = t.new_var(Domain{});
  REQUIRE(t.post_mult(u, u, w) == PostResult::Ok);
  REQUIRE(t.clamp(w, 10, 80) == PostResult::Ok);
  CHECK(t.min(u) == -8);
  CHECK(t.max(u) == 8);
}

TEST_CASE("general multiplication corners") {
  Store s;
  VarId x = s.new_var(Domain(-2, 3), "x");
  VarId y = s.new_var(Domain(4, 5), "y");
  VarId z = s.new_var(Domain{}, "z");
  REQUIRE(s.post_mult(x, y, z) == PostResult::Ok);
  CHECK(s.min(z) == -10);
  CHECK(s.max(z) == 15);
}

TEST_CASE("multiplication inverts exactly for a fixed factor") {
  Store s;
  VarId x = s.new_var(Domain(-2, 3), "x");
  VarId y = s.new_var(Domain(5, 5), "y");
  VarId z = s.new_var(Domain{}, "z");
  REQUIRE(s.post_mult(x, y, z) == PostResult::Ok);
  REQUIRE(s.clamp(z, 12, 15) == PostResult::Ok);
  CHECK(s.value(x) == 3);
  CHECK(s.value(z) == 15);
}

TEST_CASE("division truncates toward zero") {
  Store s;
  VarId x = s.new_var(Domain(7, 7));
  VarId y = s.new_var(Domain(2, 2));
  VarId z = s.new_var(Domain{});
  REQUIRE(s.post_div(x, y, z) == PostResult::Ok);
  CHECK(s.value(z) == 3);
  Store t;
  VarId a = t.new_var(Domain(-7, -7));
  VarId b = t.new_var(Domain(2, 2));
  VarId c = t.new_var(Domain{});
  REQUIRE(t.post_div(a, b, c) == PostResult::Ok);
  CHECK(t.value(c) == -3);
}

TEST_CASE("division inverts exactly for a fixed divisor") {
  Store s;
  VarId x = s.new_var(Domain(-100, 100), "x");
  VarId y = s.new_var(Domain(2, 2));
  VarId z = s.new_var(Domain{}, "z");
  REQUIRE(s.post_div(x, y, z) == PostResult::Ok);
  REQUIRE(s.clamp(z, 3, 3) == PostResult::Ok);
  CHECK(s.min(x) == 6);
  CHECK(s.max(x) == 7);
  Store t;
  VarId a = t.new_var(Domain(-100, 100));
  VarId b = t.new_var(Domain(2, 2));
  VarId c = t.new_var(Domain{});
  REQUIRE(t.post_div(a, b, c) == PostResult::Ok);
  REQUIRE(t.clamp(c, -3, -3) == PostResult::Ok);
  CHECK(t.min(a) == -7);
  CHECK(t.max(a) == -6);
}

TEST_CASE("division by a fixed zero is inconsistent") {
  Store s;
  VarId x = s.new_var(Domain(0, 10));
  VarId y = s.new_var(Domain(0, 0));
  VarId z = s.new_var(Domain{});
  CHECK(s.post_div(x, y, z) == PostResult::Inconsistent);
}

TEST_CASE("element finds the index from the value") {
  Store s;
  std::vector<VarId> table = {s.new_fixed(5), s.new_fixed(7), s.new_fixed(5),
                              s.new_fixed(9)};
  VarId idx = s.new_var(Domain(0, 10), "idx");
  VarId val = s.new_var(Domain(7, 7), "val");
  REQUIRE(s.post_element(idx, table, val) == PostResult::Ok);
  CHECK(s.fixed(idx));
  CHECK(s.value(idx) == 1);
}

TEST_CASE("element hulls the value over the live slots") {
  Store s;
  std::vector<VarId> table = {s.new_fixed(5), s.new_fixed(7), s.new_fixed(5),
                              s.new_fixed(9)};
  VarId idx = s.new_var(Domain(1, 3), "idx");
  VarId val = s.new_var(Domain{}, "val");
  REQUIRE(s.exclude(idx, 2) == PostResult::Ok);
  REQUIRE(s.post_element(idx, table, val) == PostResult::Ok);
  CHECK(s.min(val) == 7);
  CHECK(s.max(val) == 9);
}

TEST_CASE("element with a fixed index links value and slot") {
  Store s;
  VarId open = s.new_var(Domain(0, 100), "slot");
  std::vector<VarId> table = {s.new_fixed(1), open, s.new_fixed(3)};
  VarId idx = s.new_var(Domain(1, 1), "idx");
  VarId val = s.new_var(Domain(10, 20), "val");
  REQUIRE(s.post_element(idx, table, val) == PostResult::Ok);
  CHECK(s.min(open) == 10);
  CHECK(s.max(open) == 20);
  REQUIRE(s.clamp(val, 12, 12) == PostResult::Ok);
  CHECK(s.value(open) == 12);
}

TEST_CASE("array update with a fixed index copies the rest") {
  Store s;
  std::vector<VarId> before = {s.new_fixed(1), s.new_fixed(2), s.new_fixed(3)};
  VarId idx = s.new_var(Domain(1, 1), "i");
  VarId val = s.new_var(Domain(9, 9), "v");
  std::vector<VarId> after = {s.new_var(Domain{}), s.new_var(Domain{}),
                              s.new_var(Domain{})};
  REQUIRE(s.post_array_update(before, idx, val, after) == PostResult::Ok);
  CHECK(s.value(after[0]) == 1);
  CHECK(s.value(after[1]) == 9);
  CHECK(s.value(after[2]) == 3);
}

TEST_CASE("array update infers the index from a changed slot") {
  Store s;
  std::vector<VarId> before = {s.new_fixed(1), s.new_fixed(2), s.new_fixed(3)};
  VarId idx = s.new_var(Domain(0, 2), "i");
  VarId val = s.new_var(Domain{}, "v");
  std::vector<VarId> after = {s.new_var(Domain{}), s.new_var(Domain{}),
                              s.new_var(Domain(7, 9))};
  REQUIRE(s.post_array_update(before, idx, val, after) == PostResult::Ok);
  CHECK(s.value(idx) == 2);
  CHECK(s.value(after[0]) == 1);
  CHECK(s.value(after[1]) == 2);
  CHECK(s.min(val) == 7);
  CHECK(s.max(val) == 9);
}

TEST_CASE("array update rules out slots that cannot take the value") {
  Store s;
  std::vector<VarId> before = {s.new_fixed(1), s.new_fixed(2), s.new_fixed(3)};
  VarId idx = s.new_var(Domain(0, 2), "i");
  VarId val = s.new_var(Domain(9, 9), "v");
  std::vector<VarId> after = {s.new_var(Domain(1, 1)), s.new_var(Domain{}),
                              s.new_var(Domain{})};
  REQUIRE(s.post_array_update(before, idx, val, after) == PostResult::Ok);
  // slot 0 kept its old value, so the write happened at 1 or 2
  CHECK(s.min(idx) == 1);
  REQUIRE(s.clamp(after[1], 2, 2) == PostResult::Ok);
  CHECK(s.value(idx) == 2);
  CHECK(s.value(after[2]) == 9);
}

TEST_CASE("reified comparison is entailed from bounds") {
  Store s;
  VarId x = s.new_var(Domain(0, 3), "x");
  VarId b = s.new_var(Domain(0, 1), "b");
  REQUIRE(s.post_reif_cmp(b, {{1, x}}, 5, CmpKind::Le) == PostResult::Ok);
  CHECK(s.value(b) == 1);
  Store t;
  VarId y = t.new_var(Domain(6, 9));
  VarId c = t.new_var(Domain(0, 1));
  REQUIRE(t.post_reif_cmp(c, {{1, y}}, 5, CmpKind::Le) == PostResult::Ok);
  CHECK(t.value(c) == 0);
}

TEST_CASE("forcing the bool posts the atom") {
  Store s;
  VarId x = s.new_var(Domain{}, "x");
  VarId b = s.new_var(Domain(0, 1), "b");
  REQUIRE(s.post_reif_cmp(b, {{1, x}}, 5, CmpKind::Le) == PostResult::Ok);
  REQUIRE(s.assign(b, 1) == PostResult::Ok);
  CHECK(s.max(x) == 5);
  Store t;
  VarId y = t.new_var(Domain{});
  VarId c = t.new_var(Domain(0, 1));
  REQUIRE(t.post_reif_cmp(c, {{1, y}}, 5, CmpKind::Le) == PostResult::Ok);
  REQUIRE(t.assign(c, 0) == PostResult::Ok);
  CHECK(t.min(y) == 6);
}

TEST_CASE("reified equality and disequality") {
  Store s;
  VarId x = s.new_var(Domain(7, 8), "x");
  VarId b = s.new_var(Domain(0, 1), "b");
  REQUIRE(s.post_reif_cmp(b, {{1, x}}, 7, CmpKind::Eq) == PostResult::Ok);
  REQUIRE(s.assign(b, 0) == PostResult::Ok);
  CHECK(s.value(x) == 8);
  Store t;
  VarId y = t.new_var(Domain(0, 9));
  VarId c = t.new_var(Domain(0, 1));
  REQUIRE(t.post_reif_cmp(c, {{1, y}}, 4, CmpKind::Ne) == PostResult::Ok);
  REQUIRE(t.assign(c, 0) == PostResult::Ok);
  CHECK(t.value(y) == 4);
}

TEST_CASE("bool conjunction and disjunction unit rules") {
  Store s;
  VarId b = s.new_var(Domain(0, 1), "b");
  VarId p = s.new_var(Domain(0, 1), "p");
  VarId q = s.new_var(Domain(0, 1), "q");
  REQUIRE(s.post_bool_and(b, {p, q}) == PostResult::Ok);
  REQUIRE(s.assign(p, 1) == PostResult::Ok);
  REQUIRE(s.assign(b, 0) == PostResult::Ok);
  CHECK(s.value(q) == 0);

  Store t;
  VarId b2 = t.new_var(Domain(0, 1));
  VarId p2 = t.new_var(Domain(0, 1));
  VarId q2 = t.new_var(Domain(0, 1));
  REQUIRE(t.post_bool_or(b2, {p2, q2}) == PostResult::Ok);
  REQUIRE(t.assign(b2, 1) == PostResult::Ok);
  REQUIRE(t.assign(p2, 0) == PostResult::Ok);
  CHECK(t.value(q2) == 1);

  Store u;
  VarId b3 = u.new_var(Domain(0, 1));
  VarId p3 = u.new_var(Domain(0, 1));
  VarId q3 = u.new_var(Domain(0, 1));
  REQUIRE(u.post_bool_or(b3, {p3, q3}) == PostResult::Ok);
  REQUIRE(u.assign(b3, 0) == PostResult::Ok);
  CHECK(u.value(p3) == 0);
  CHECK(u.value(q3) == 0);
}

TEST_CASE("pairwise disequality propagates the last value") {
  Store s;
  VarId a = s.new_var(Domain(0, 2), "a");
  VarId b = s.new_var(Domain(0, 2), "b");
  VarId c = s.new_var(Domain(0, 2), "c");
  REQUIRE(s.post_alldiff({a, b, c}) == PostResult::Ok);
  REQUIRE(s.assign(a, 0) == PostResult::Ok);
  REQUIRE(s.assign(b, 1) == PostResult::Ok);
  CHECK(s.value(c) == 2);
}

TEST_CASE("sum disequality skips over an unreachable constant") {
  Store s;
  VarId x = s.new_var(Domain(0, 10), "x");
  VarId y = s.new_var(Domain(0, 10), "y");
  // 2x + 2y is even, can never hit 7; the row must not prune anything
  REQUIRE(s.post_linear_neq({{2, x}, {2, y}}, 7) == PostResult::Ok);
  CHECK(s.min(x) == 0);
  CHECK(s.max(x) == 10);
  REQUIRE(s.assign(x, 3) == PostResult::Ok);
  REQUIRE(s.assign(y, 0) == PostResult::Ok);
}

TEST_CASE("sum disequality excludes the last open value") {
  Store s;
  VarId x = s.new_var(Domain(0, 10), "x");
  VarId y = s.new_var(Domain(0, 10), "y");
  REQUIRE(s.post_linear_neq({{1, x}, {1, y}}, 5) == PostResult::Ok);
  REQUIRE(s.assign(x, 2) == PostResult::Ok);
  CHECK_FALSE(s.domain(y).contains(3));
  REQUIRE(s.assign(y, 4) == PostResult::Ok);
}
