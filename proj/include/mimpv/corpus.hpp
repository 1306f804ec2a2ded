#pragma once

#include <string>
#include <vector>

namespace mimpv::corpus {

// One benchmark program, embedded in the binary so the tools run
// without locating the source tree. The on-disk copies under corpus/
// are kept byte-identical (a test enforces the sync).
struct Entry {
  const char* name;    // canonical benchmark name, e.g. "binarySearch"
  const char* file;    // basename under corpus/, e.g. "binarySearch.mimp"
  const char* source;  // full program text
};

const std::vector<Entry>& all();

// nullptr when the name is unknown. Accepts the canonical name only;
// command-line aliases are resolved by the bench layer.
const Entry* find(const std::string& name);

}  // namespace mimpv::corpus
