#include "mimpv/oracle.hpp"

#include <climits>
#include <vector>

#include "mimpv/translate.hpp"

namespace mimpv::lang {

namespace {

using fd::Val;
using Wide = __int128;

// one odometer digit: either a scalar parameter or one array slot
struct Dim {
  const std::string* name;
  int slot;  // -1 for scalars
  Val lo, hi;
  Val cur;
};

}  // namespace

OracleReport oracle_check(const Unit& unit, const Program& prog,
                          const OracleParams& params) {
  std::vector<Dim> dims;
  for (const Param& p : prog.params) {
    Val lo = params.default_bounds.first;
    Val hi = params.default_bounds.second;
    if (auto it = params.bounds.find(p.name); it != params.bounds.end()) {
      lo = it->second.first;
      hi = it->second.second;
    }
    if (lo > hi)
      throw ConfigError("empty bound " + std::to_string(lo) + ".." +
                        std::to_string(hi) + " for parameter '" + p.name +
                        "'");
    if (p.type == Ty::Int) {
      dims.push_back({&p.name, -1, lo, hi, lo});
    } else {
      auto it = params.array_len.find(p.name);
      if (it == params.array_len.end())
        throw ConfigError("missing length for array parameter '" + p.name +
                          "'");
      if (it->second < 0)
        throw ConfigError("negative length for array parameter '" + p.name +
                          "'");
      for (int j = 0; j < it->second; ++j)
        dims.push_back({&p.name, j, lo, hi, lo});
    }
  }

  OracleReport report;
  Wide prod = 1;
  for (const Dim& d : dims) prod *= Wide(d.hi) - d.lo + 1;
  report.combinations =
      prod > LLONG_MAX ? LLONG_MAX : static_cast<long long>(prod);
  if (prod > params.cap) {
    report.cap_exceeded = true;
    return report;
  }

  ConcreteInput in;
  for (const Param& p : prog.params) {
    if (p.type == Ty::Int)
      in.scalars[p.name] = 0;
    else
      in.arrays[p.name].resize(
          static_cast<std::size_t>(params.array_len.at(p.name)));
  }

  for (bool more = true; more;) {
    for (const Dim& d : dims) {
      if (d.slot < 0)
        in.scalars[*d.name] = d.cur;
      else
        in.arrays[*d.name][static_cast<std::size_t>(d.slot)] = d.cur;
    }

    bool admitted = true;
    if (prog.contract.requires_f) {
      auto pre = eval_formula(*prog.contract.requires_f, in.scalars, in.arrays,
                              std::nullopt);
      admitted = pre.has_value() && *pre;
    }
    if (admitted) {
      ++report.checked;
      InterpResult r = interpret(unit, prog, in, params.step_limit);
      switch (r.status) {
        case InterpResult::Status::OutOfBounds:
          report.violation = {in, "index", std::nullopt};
          return report;
        case InterpResult::Status::Ok: {
          bool holds = true;
          if (prog.contract.ensures_f) {
            auto post = eval_formula(*prog.contract.ensures_f, in.scalars,
                                     r.final_arrays, r.result);
            holds = !post.has_value() || *post;
          }
          if (!holds) {
            report.violation = {in, "ensures", r.result};
            return report;
          }
          break;
        }
        default:
          break;  // domain escape or step limit: outside the checked box
      }
    }

    // advance the odometer, last dimension fastest
    more = false;
    for (std::size_t i = dims.size(); i-- > 0;) {
      if (dims[i].cur < dims[i].hi) {
        ++dims[i].cur;
        more = true;
        break;
      }
      dims[i].cur = dims[i].lo;
    }
  }
  return report;
}

}  // namespace mimpv::lang
