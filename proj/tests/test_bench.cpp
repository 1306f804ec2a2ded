#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "mimpv/bench.hpp"
#include "mimpv/corpus.hpp"

using namespace mimpv;
using bench::Benchmark;
using bench::RunResult;

TEST_CASE("every table entry names a real corpus program") {
  CHECK(bench::all().size() == corpus::all().size());
  for (const Benchmark& b : bench::all()) {
    CHECK(corpus::find(b.name) != nullptr);
  }
}

TEST_CASE("lookup resolves canonical names and aliases alike") {
  const Benchmark* canon = bench::find("binarySearch");
  REQUIRE(canon != nullptr);
  CHECK(bench::find("bsearch") == canon);
  CHECK(bench::find("bubbleSort") == bench::find("bubbleSortWithInit"));
  CHECK(bench::find("no-such-benchmark") == nullptr);
}

TEST_CASE("single runs produce the expected verdicts") {
  RunResult ok = bench::run_one(*bench::find("tritype"), 0);
  CHECK(ok.verdict.kind == lang::Verdict::Kind::Verified);
  CHECK(ok.verdict.feasible_paths == 10);
  CHECK(ok.as_expected);
  CHECK(ok.size == -1);

  RunResult ko = bench::run_one(*bench::find("tritypeKO"), 0);
  CHECK(ko.verdict.kind == lang::Verdict::Kind::Counterexample);
  CHECK(ko.as_expected);
}

TEST_CASE("a sized run threads the size through to the instance") {
  RunResult r = bench::run_one(*bench::find("bsearch"), 8);
  CHECK(r.size == 8);
  CHECK(r.verdict.kind == lang::Verdict::Kind::Verified);
  CHECK(r.as_expected);
}

TEST_CASE("suite selection honours names and size overrides") {
  auto rs = bench::run_suite({"binarySearchKO"}, {8, 16});
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].size == 8);
  CHECK(rs[1].size == 16);
  for (const RunResult& r : rs) {
    CHECK(r.verdict.kind == lang::Verdict::Kind::Counterexample);
    CHECK(r.as_expected);
  }
}

TEST_CASE("result tables render in both formats") {
  auto rs = bench::run_suite({"tritype"}, {});
  std::ostringstream text;
  bench::print_results(text, rs, false);
  CHECK(text.str().find("tritype") != std::string::npos);
  CHECK(text.str().find("Verified") != std::string::npos);

  std::ostringstream tsv;
  bench::print_results(tsv, rs, true);
  std::string body = tsv.str().substr(tsv.str().find('\n') + 1);
  CHECK(body.find("tritype\t-\tVerified\t10\t") != std::string::npos);
}
