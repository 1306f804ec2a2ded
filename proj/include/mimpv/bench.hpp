// The standard benchmark table: each corpus program with the instance
// sizes it is normally run at, the verdict it should produce, and a
// wall-clock ceiling that turns a regression into a resource verdict
// instead of a hang.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mimpv/verify.hpp"

namespace mimpv::bench {

enum class Expect {
  Verified,
  Counterexample,
};

struct Benchmark {
  std::string name;                  // corpus entry
  std::vector<std::string> aliases;
  std::string function;              // verification target; "" = first
  std::string size_param;            // parameter the size applies to
  bool size_is_bound = false;        // size bounds a scalar instead of
                                     // sizing an array
  std::vector<int> sizes;            // empty: one run, no size
  Expect expect = Expect::Verified;
  std::vector<int> resource_ok;      // sizes where ResourceExceeded is
                                     // tolerated
  long long budget_ms = 0;
};

const std::vector<Benchmark>& all();
const Benchmark* find(const std::string& name_or_alias);

struct RunResult {
  std::string name;
  int size = -1;  // -1: the benchmark takes no size
  lang::Verdict verdict;
  long long ms = 0;
  bool as_expected = false;
};

// Run one instance. size is ignored for sizeless benchmarks.
RunResult run_one(const Benchmark& b, int size);

// Run the named benchmarks (all of them when names is empty) at the
// given sizes (the table defaults when sizes is empty).
std::vector<RunResult> run_suite(const std::vector<std::string>& names,
                                 const std::vector<int>& sizes);

// Render results as an aligned table or as tab-separated values.
void print_results(std::ostream& out, const std::vector<RunResult>& rs,
                   bool tsv);

}  // namespace mimpv::bench
