#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mimpv/ast.hpp"
#include "mimpv/diagnostics.hpp"

namespace mimpv::lang {

enum class Tok {
  End,
  Ident,
  IntLit,
  // keywords
  KwInt, KwVoid, KwIf, KwElse, KwWhile, KwFor, KwReturn, KwTrue, KwFalse,
  KwLength,                       // `length` after `.`
  // contract keywords
  KwRequires, KwEnsures, KwResult, KwForall, KwAllDifferent,
  ContractOpen, ContractClose,    // /*@ ... @*/
  // punctuation
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Semi, Comma, Dot,
  Assign,                         // =
  Plus, Minus, Star, Slash,
  PlusPlus, MinusMinus,
  EqEq, NotEq, Lt, Le, Gt, Ge,
  AndAnd, OrOr, Bang,
  Implies,                        // ==>
};

const char* tok_name(Tok t);

struct Token {
  Tok kind = Tok::End;
  SourcePos pos;
  std::string text;               // identifier spelling
  std::int64_t int_value = 0;     // for IntLit
};

// Tokenizes a whole source buffer. Contract comments /*@ ... @*/ are lexed
// inline between ContractOpen/ContractClose; a leading `@` on each contract
// line is a continuation marker and is skipped. Ordinary // and /* */
// comments are discarded. Throws ParseError on malformed input.
std::vector<Token> lex(const std::string& source, const std::string& file);

}  // namespace mimpv::lang
