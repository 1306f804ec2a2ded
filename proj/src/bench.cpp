#include "mimpv/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <stdexcept>

#include "mimpv/corpus.hpp"
#include "mimpv/parser.hpp"
#include "mimpv/typecheck.hpp"

namespace mimpv::bench {

using lang::InstanceParams;
using lang::Verdict;

const std::vector<Benchmark>& all() {
  static const std::vector<Benchmark> table = {
      {"tritype", {}, "", "", false, {}, Expect::Verified, {}, 10'000},
      {"tritypeKO", {}, "", "", false, {}, Expect::Counterexample, {}, 10'000},
      {"binarySearch",
       {"bsearch"},
       "",
       "tab",
       false,
       {8, 16},
       Expect::Verified,
       {},
       120'000},
      {"binarySearchKO",
       {"bsearchKO"},
       "",
       "tab",
       false,
       {8, 16, 32, 64, 128},
       Expect::Counterexample,
       {},
       60'000},
      {"bubbleSortWithInit",
       {"bubble", "bubbleSort"},
       "",
       "tab",
       false,
       {8, 16, 32},
       Expect::Verified,
       {32},
       120'000},
      {"squareSum",
       {},
       "",
       "n",
       true,
       {8, 16},
       Expect::Verified,
       {},
       120'000},
      {"squareSumArray",
       {},
       "",
       "t",
       false,
       {6},
       Expect::Verified,
       {},
       300'000},
      {"selectionSort",
       {},
       "selectionSort",
       "t",
       false,
       {40},
       Expect::Verified,
       {},
       5'000},
      {"findMin", {}, "", "t", false, {6}, Expect::Verified, {}, 300'000},
  };
  return table;
}

const Benchmark* find(const std::string& name_or_alias) {
  for (const Benchmark& b : all()) {
    if (b.name == name_or_alias) return &b;
    for (const std::string& a : b.aliases)
      if (a == name_or_alias) return &b;
  }
  return nullptr;
}

RunResult run_one(const Benchmark& b, int size) {
  const corpus::Entry* e = corpus::find(b.name);
  if (!e) throw std::runtime_error("no corpus entry named " + b.name);
  lang::Unit u = lang::parse_unit(e->source, e->file);
  lang::typecheck(u, e->file);
  const lang::Program* p =
      b.function.empty() ? &u.programs[0] : u.find(b.function);
  if (!p) throw std::runtime_error("no function " + b.function);

  InstanceParams inst;
  inst.budget_ms = b.budget_ms;
  if (!b.size_param.empty()) {
    if (b.size_is_bound)
      inst.bounds[b.size_param] = {0, size};
    else
      inst.array_len[b.size_param] = size;
  }

  RunResult r;
  r.name = b.name;
  r.size = b.size_param.empty() ? -1 : size;
  auto t0 = std::chrono::steady_clock::now();
  r.verdict = lang::verify(u, *p, inst);
  r.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
             .count();

  switch (r.verdict.kind) {
    case Verdict::Kind::Verified:
      r.as_expected = b.expect == Expect::Verified;
      break;
    case Verdict::Kind::Counterexample:
      r.as_expected = b.expect == Expect::Counterexample;
      break;
    case Verdict::Kind::ResourceExceeded:
      r.as_expected = std::find(b.resource_ok.begin(), b.resource_ok.end(),
                                size) != b.resource_ok.end();
      break;
  }
  return r;
}

std::vector<RunResult> run_suite(const std::vector<std::string>& names,
                                 const std::vector<int>& sizes) {
  std::vector<const Benchmark*> picked;
  if (names.empty()) {
    for (const Benchmark& b : all()) picked.push_back(&b);
  } else {
    for (const std::string& n : names) {
      const Benchmark* b = find(n);
      if (!b) throw std::runtime_error("unknown benchmark " + n);
      picked.push_back(b);
    }
  }
  std::vector<RunResult> out;
  for (const Benchmark* b : picked) {
    std::vector<int> at = sizes.empty() ? b->sizes : sizes;
    if (b->size_param.empty() || at.empty()) {
      out.push_back(run_one(*b, 0));
    } else {
      for (int s : at) out.push_back(run_one(*b, s));
    }
  }
  return out;
}

void print_results(std::ostream& out, const std::vector<RunResult>& rs,
                   bool tsv) {
  auto row = [&](const std::string& name, const std::string& size,
                 const std::string& verdict, const std::string& paths,
                 const std::string& nodes, const std::string& ms,
                 const std::string& ok) {
    if (tsv) {
      out << name << '\t' << size << '\t' << verdict << '\t' << paths << '\t'
          << nodes << '\t' << ms << '\t' << ok << '\n';
      return;
    }
    auto pad = [&](const std::string& s, std::size_t w) {
      out << s;
      for (std::size_t i = s.size(); i < w; ++i) out << ' ';
    };
    pad(name, 20);
    pad(size, 6);
    pad(verdict, 18);
    pad(paths, 8);
    pad(nodes, 10);
    pad(ms, 8);
    out << ok << '\n';
  };
  row("benchmark", "size", "verdict", "paths", "nodes", "ms", "ok");
  for (const RunResult& r : rs) {
    row(r.name, r.size < 0 ? "-" : std::to_string(r.size),
        lang::verdict_name(r.verdict.kind),
        std::to_string(r.verdict.feasible_paths),
        std::to_string(r.verdict.nodes), std::to_string(r.ms),
        r.as_expected ? "yes" : "NO");
  }
}

}  // namespace mimpv::bench
