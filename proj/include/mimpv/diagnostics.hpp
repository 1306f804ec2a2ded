#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mimpv/ast.hpp"

namespace mimpv::lang {

struct Diagnostic {
  std::string file;
  SourcePos pos;
  std::string message;

  // "file:line:col: message"
  std::string to_string() const;
};

// Parse and lex failures abort with the first error.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, SourcePos pos, const std::string& message);

  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

// Scope, type and well-formedness violations found after parsing.
class CheckError : public std::runtime_error {
 public:
  CheckError(std::string file, SourcePos pos, const std::string& message);

  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

}  // namespace mimpv::lang
