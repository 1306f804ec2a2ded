#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <regex>
#include <sstream>
#include <string>

#include "mimpv/corpus.hpp"
#include "mimpv/interp.hpp"
#include "mimpv/parser.hpp"
#include "mimpv/typecheck.hpp"
#include "mimpv/verify.hpp"

using namespace mimpv;
using namespace mimpv::lang;
using fd::Val;

namespace {

Unit load(const char* name) {
  const corpus::Entry* e = corpus::find(name);
  REQUIRE(e != nullptr);
  Unit u = parse_unit(e->source, e->file);
  typecheck(u, e->file);
  return u;
}

Unit parse_inline(const std::string& src) {
  Unit u = parse_unit(src, "<test>");
  typecheck(u, "<test>");
  return u;
}

}  // namespace

TEST_CASE("tritype is verified along exactly ten feasible paths") {
  Unit u = load("tritype");
  Verdict v = verify(u, u.programs[0], {});
  CHECK(v.kind == Verdict::Kind::Verified);
  CHECK(v.feasible_paths == 10);
}

TEST_CASE("the faulty tritype yields a degenerate-triangle witness") {
  Unit u = load("tritypeKO");
  Verdict v = verify(u, u.programs[0], {});
  REQUIRE(v.kind == Verdict::Kind::Counterexample);
  REQUIRE(v.cex.has_value());
  const Counterexample& c = *v.cex;
  CHECK(c.kind == CexKind::EnsuresViolation);
  Val i = c.inputs.at("i");
  Val j = c.inputs.at("j");
  Val k = c.inputs.at("k");
  // any witness of this bug is an isosceles-looking degenerate triangle
  CHECK(i == j);
  CHECK(i + j <= k);
  REQUIRE(c.result.has_value());
  CHECK(*c.result == 2);
  // and it genuinely breaks the contract when run
  auto req = eval_formula(*u.programs[0].contract.requires_f, c.inputs, {},
                          std::nullopt);
  CHECK(req == true);
  auto ens = eval_formula(*u.programs[0].contract.ensures_f, c.inputs, {},
                          c.result);
  CHECK(ens == false);
}

TEST_CASE("forced branches consume no choice points") {
  // the precondition fixes the whole initial array, so every branch of
  // the sort is decided by propagation alone
  Unit u = load("bubbleSortWithInit");
  InstanceParams inst;
  inst.array_len["tab"] = 6;
  Verdict v = verify(u, u.programs[0], inst);
  CHECK(v.kind == Verdict::Kind::Verified);
  CHECK(v.feasible_paths == 1);
  CHECK(v.nodes == 0);
}

TEST_CASE("binary search never iterates past the depth of the array") {
  Unit u = load("binarySearch");
  InstanceParams inst;
  inst.array_len["tab"] = 8;
  Verdict v = verify(u, u.programs[0], inst);
  CHECK(v.kind == Verdict::Kind::Verified);
  CHECK(v.max_loop_iters <= 4);  // log2(8) + 1
}

TEST_CASE("an unguarded array read is reported as an index violation") {
  Unit u = parse_inline(R"(
/*@ requires i >= 0;
  @ ensures \result >= 0 || \result <= 0;
  @*/
int peek(int[] t, int i) {
  return t[i];
}
)");
  InstanceParams inst;
  inst.array_len["t"] = 4;
  Verdict v = verify(u, u.programs[0], inst);
  REQUIRE(v.kind == Verdict::Kind::Counterexample);
  REQUIRE(v.cex.has_value());
  CHECK(v.cex->kind == CexKind::IndexViolation);
  CHECK(v.cex->detail == "t");
  CHECK(v.cex->inputs.at("i") >= 4);
}

TEST_CASE("a call whose precondition is not entailed is rejected") {
  Unit u = parse_inline(R"(
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
)");
  Verdict v = verify(u, u.programs[0], {});
  REQUIRE(v.kind == Verdict::Kind::Counterexample);
  REQUIRE(v.cex.has_value());
  CHECK(v.cex->kind == CexKind::PreconditionViolation);
  CHECK(v.cex->call_index == 0);
  CHECK(v.cex->detail == "pos");
  CHECK(v.cex->inputs.at("a") <= 0);
}

TEST_CASE("a guarded call is accepted and its ensures is assumed") {
  Unit u = parse_inline(R"(
/*@ requires a > 0;
  @ ensures \result == a;
  @*/
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
)");
  Verdict v = verify(u, u.programs[0], {});
  CHECK(v.kind == Verdict::Kind::Verified);
}

TEST_CASE("the unwinding limit turns into a resource verdict, not a wrong one") {
  Unit u = parse_inline(R"(
/*@ ensures \result == 5;
  @*/
int count() {
  int i = 0;
  while (i < 5) {
    i = i + 1;
  }
  return i;
}
)");
  InstanceParams inst;
  inst.max_unwind = 3;
  Verdict v = verify(u, u.programs[0], inst);
  CHECK(v.kind == Verdict::Kind::ResourceExceeded);
  CHECK(v.resource.find("unwinding") != std::string::npos);
  inst.max_unwind = 6;
  CHECK(verify(u, u.programs[0], inst).kind == Verdict::Kind::Verified);
}

TEST_CASE("a node budget of one starves the search") {
  Unit u = load("tritype");
  InstanceParams inst;
  inst.budget_nodes = 1;
  Verdict v = verify(u, u.programs[0], inst);
  CHECK(v.kind == Verdict::Kind::ResourceExceeded);
  CHECK(v.resource.find("node budget") != std::string::npos);
}

TEST_CASE("a missing array length is a configuration error") {
  Unit u = load("binarySearch");
  CHECK_THROWS_AS(verify(u, u.programs[0], {}), ConfigError);
}

TEST_CASE("witness traces follow the printable grammar") {
  const std::regex line_re(
      R"(^[A-Za-z_][A-Za-z0-9_]*_[0-9]+(\[[0-9]+\])?\[-?[0-9]+:-?[0-9]+\] : (-?[0-9]+|\[-?[0-9]+\.\.-?[0-9]+\])$)");
  for (const char* name : {"tritypeKO", "binarySearchKO"}) {
    Unit u = load(name);
    InstanceParams inst;
    if (std::string(name) == "binarySearchKO") inst.array_len["tab"] = 8;
    Verdict v = verify(u, u.programs[0], inst);
    REQUIRE(v.kind == Verdict::Kind::Counterexample);
    std::string text = format_trace(*v.cex);
    std::istringstream in(text);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "Counter-example found");
    int body = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      ++body;
      CHECK_MESSAGE(std::regex_match(line, line_re), "bad line: ", line);
    }
    CHECK(body > 0);
  }
}

TEST_CASE("search witnesses replay to the same result on the interpreter") {
  Unit u = load("binarySearchKO");
  InstanceParams inst;
  inst.array_len["tab"] = 8;
  Verdict v = verify(u, u.programs[0], inst);
  REQUIRE(v.kind == Verdict::Kind::Counterexample);
  const Counterexample& c = *v.cex;
  ConcreteInput in;
  in.scalars = c.inputs;
  in.arrays = c.input_arrays;
  InterpResult r = interpret(u, u.programs[0], in);
  REQUIRE(r.status == InterpResult::Status::Ok);
  CHECK(r.result == c.result);
  CHECK(r.decisions == c.decisions);
}
