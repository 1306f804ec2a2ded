// Command line front end: verify one program, run the benchmark table,
// or cross-check a program against the exhaustive oracle.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mimpv/bench.hpp"
#include "mimpv/corpus.hpp"
#include "mimpv/oracle.hpp"
#include "mimpv/parser.hpp"
#include "mimpv/typecheck.hpp"
#include "mimpv/verify.hpp"

namespace {

using namespace mimpv;
using namespace mimpv::lang;
using fd::Val;

constexpr int kExitVerified = 0;
constexpr int kExitCounterexample = 1;
constexpr int kExitResource = 2;
constexpr int kExitUsage = 3;

struct Loaded {
  Unit unit;
  const Program* prog = nullptr;
};

// A program argument is a path when such a file exists, otherwise the
// name of a bundled corpus program (".mimp" optional).
Loaded load_program(const std::string& arg, const std::string& function) {
  std::string source, file;
  if (std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    if (!in) throw ConfigError("cannot read " + arg);
    std::ostringstream buf;
    buf << in.rdbuf();
    source = buf.str();
    file = arg;
  } else {
    std::string name = arg;
    if (name.size() > 5 && name.ends_with(".mimp"))
      name = name.substr(0, name.size() - 5);
    const corpus::Entry* e = corpus::find(name);
    if (!e) {
      const bench::Benchmark* b = bench::find(name);
      if (b) e = corpus::find(b->name);
    }
    if (!e)
      throw ConfigError("no file or bundled program named '" + arg + "'");
    source = e->source;
    file = e->file;
  }
  Loaded l;
  l.unit = parse_unit(source, file);
  typecheck(l.unit, file);
  l.prog = function.empty() ? &l.unit.programs[0] : l.unit.find(function);
  if (!l.prog) throw ConfigError("no function named '" + function + "'");
  return l;
}

std::pair<std::string, std::string> split_once(const std::string& s,
                                               const std::string& sep,
                                               const char* what) {
  auto pos = s.find(sep);
  if (pos == std::string::npos || pos == 0)
    throw ConfigError(std::string("expected NAME") + sep + "VALUE in " + what +
                      " argument '" + s + "'");
  return {s.substr(0, pos), s.substr(pos + sep.size())};
}

Val parse_val(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("bad number '") + s + "' in " + what +
                      " argument");
  }
}

void apply_lens(InstanceParams& inst, const std::vector<std::string>& lens) {
  for (const std::string& arg : lens) {
    auto [name, val] = split_once(arg, "=", "--len");
    inst.array_len[name] = static_cast<int>(parse_val(val, "--len"));
  }
}

void apply_bounds(InstanceParams& inst,
                  const std::vector<std::string>& bounds) {
  for (const std::string& arg : bounds) {
    auto [name, range] = split_once(arg, "=", "--bound");
    auto [lo, hi] = split_once(range, "..", "--bound");
    inst.bounds[name] = {parse_val(lo, "--bound"), parse_val(hi, "--bound")};
  }
}

void print_witness(const Counterexample& c, bool trace) {
  std::cout << "kind: " << cex_kind_name(c.kind);
  if (c.kind == CexKind::EnsuresViolation)
    std::cout << ", case " << c.violated_case;
  if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
  std::cout << "\n";
  if (trace) {
    std::cout << format_trace(c);
    return;
  }
  for (const auto& [name, v] : c.inputs)
    std::cout << name << " = " << v << "\n";
  for (const auto& [name, vs] : c.input_arrays) {
    std::cout << name << " = [";
    for (std::size_t i = 0; i < vs.size(); ++i)
      std::cout << (i ? ", " : "") << vs[i];
    std::cout << "]\n";
  }
  if (c.result) std::cout << "result = " << *c.result << "\n";
}

int run_verify(const Loaded& l, const InstanceParams& inst, bool trace,
               bool paths) {
  Verdict v = verify(l.unit, *l.prog, inst);
  std::cout << verdict_name(v.kind);
  if (v.kind == Verdict::Kind::ResourceExceeded)
    std::cout << " (" << v.resource << ")";
  std::cout << "\n";
  if (paths) std::cout << "feasible paths: " << v.feasible_paths << "\n";
  if (v.cex) print_witness(*v.cex, trace);
  switch (v.kind) {
    case Verdict::Kind::Verified:
      return kExitVerified;
    case Verdict::Kind::Counterexample:
      return kExitCounterexample;
    case Verdict::Kind::ResourceExceeded:
      return kExitResource;
  }
  return kExitUsage;
}

int run_bench(const std::vector<std::string>& names,
              const std::vector<int>& sizes, const std::string& format) {
  auto rs = bench::run_suite(names, sizes);
  bench::print_results(std::cout, rs, format == "tsv");
  for (const auto& r : rs)
    if (!r.as_expected) return 1;
  return 0;
}

int run_oracle(const Loaded& l, const OracleParams& params) {
  OracleReport r = oracle_check(l.unit, *l.prog, params);
  if (r.cap_exceeded) {
    std::cout << "box too large: " << r.combinations << " tuples\n";
    return kExitResource;
  }
  std::cout << "checked " << r.checked << " of " << r.combinations
            << " tuples\n";
  if (!r.violation) {
    std::cout << "no violation\n";
    return kExitVerified;
  }
  std::cout << "violation: " << r.violation->kind << "\n";
  for (const auto& [name, v] : r.violation->input.scalars)
    std::cout << name << " = " << v << "\n";
  for (const auto& [name, vs] : r.violation->input.arrays) {
    std::cout << name << " = [";
    for (std::size_t i = 0; i < vs.size(); ++i)
      std::cout << (i ? ", " : "") << vs[i];
    std::cout << "]\n";
  }
  if (r.violation->result)
    std::cout << "result = " << *r.violation->result << "\n";
  return kExitCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bounded verification of contracted array programs"};
  app.require_subcommand(1);

  std::string program, function, format = "text";
  std::vector<std::string> lens, bounds, names;
  std::vector<int> sizes;
  bool trace = false, paths = false;
  InstanceParams inst;
  OracleParams oparams;
  std::vector<Val> default_bound;

  CLI::App* cmd_verify =
      app.add_subcommand("verify", "explore one program against its contract");
  cmd_verify->add_option("program", program, "source file or bundled name")
      ->required();
  cmd_verify->add_option("--function", function, "verification target");
  cmd_verify->add_option("--len", lens, "array length, NAME=N");
  cmd_verify->add_option("--bound", bounds, "parameter bounds, NAME=LO..HI");
  cmd_verify->add_option("--max-unwind", inst.max_unwind,
                         "loop unwinding ceiling");
  cmd_verify->add_option("--budget-nodes", inst.budget_nodes,
                         "search node budget");
  cmd_verify->add_option("--budget-ms", inst.budget_ms, "wall clock budget");
  cmd_verify->add_flag("--trace", trace, "print the witness trace");
  cmd_verify->add_flag("--paths", paths, "print the feasible path count");

  CLI::App* cmd_bench =
      app.add_subcommand("bench", "run the benchmark table");
  cmd_bench->add_option("names", names, "benchmarks to run (default: all)");
  cmd_bench->add_option("--sizes", sizes, "override the instance sizes");
  cmd_bench->add_option("--format", format, "text or tsv")
      ->check(CLI::IsMember({"text", "tsv"}));

  CLI::App* cmd_oracle = app.add_subcommand(
      "oracle", "exhaustively execute a program over a small box");
  cmd_oracle->add_option("program", program, "source file or bundled name")
      ->required();
  cmd_oracle->add_option("--function", function, "check target");
  cmd_oracle->add_option("--len", lens, "array length, NAME=N");
  cmd_oracle->add_option("--bound", bounds, "parameter bounds, NAME=LO..HI");
  cmd_oracle->add_option("--default-bound", default_bound,
                         "bounds for unlisted parameters, LO HI")
      ->expected(2);
  cmd_oracle->add_option("--cap", oparams.cap, "largest box to enumerate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (cmd_verify->parsed()) {
      apply_lens(inst, lens);
      apply_bounds(inst, bounds);
      return run_verify(load_program(program, function), inst, trace, paths);
    }
    if (cmd_bench->parsed()) return run_bench(names, sizes, format);
    if (cmd_oracle->parsed()) {
      InstanceParams tmp;
      apply_lens(tmp, lens);
      apply_bounds(tmp, bounds);
      oparams.array_len = tmp.array_len;
      oparams.bounds = tmp.bounds;
      if (!default_bound.empty())
        oparams.default_bounds = {default_bound[0], default_bound[1]};
      return run_oracle(load_program(program, function), oparams);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
