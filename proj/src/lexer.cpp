#include "mimpv/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace mimpv::lang {

std::string Diagnostic::to_string() const {
  return file + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col) +
         ": " + message;
}

ParseError::ParseError(std::string file, SourcePos pos,
                       const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(pos.line) + ":" +
                         std::to_string(pos.col) + ": " + message),
      diag_{std::move(file), pos, message} {}

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::IntLit: return "integer literal";
    case Tok::KwInt: return "'int'";
    case Tok::KwVoid: return "'void'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwWhile: return "'while'";
    case Tok::KwFor: return "'for'";
    case Tok::KwReturn: return "'return'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwLength: return "'length'";
    case Tok::KwRequires: return "'requires'";
    case Tok::KwEnsures: return "'ensures'";
    case Tok::KwResult: return "'\\result'";
    case Tok::KwForall: return "'\\forall'";
    case Tok::KwAllDifferent: return "'\\alldifferent'";
    case Tok::ContractOpen: return "'/*@'";
    case Tok::ContractClose: return "'@*/'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Assign: return "'='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::PlusPlus: return "'++'";
    case Tok::MinusMinus: return "'--'";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::Implies: return "'==>'";
  }
  return "?";
}

namespace {

const std::unordered_map<std::string, Tok>& keywords() {
  static const std::unordered_map<std::string, Tok> kw = {
      {"int", Tok::KwInt},         {"void", Tok::KwVoid},
      {"if", Tok::KwIf},           {"else", Tok::KwElse},
      {"while", Tok::KwWhile},     {"for", Tok::KwFor},
      {"return", Tok::KwReturn},   {"true", Tok::KwTrue},
      {"false", Tok::KwFalse},     {"length", Tok::KwLength},
      {"requires", Tok::KwRequires}, {"ensures", Tok::KwEnsures},
  };
  return kw;
}

class Lexer {
 public:
  Lexer(const std::string& src, std::string file)
      : src_(src), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments(out);
      if (at_end()) break;
      out.push_back(next_token());
    }
    if (in_contract_) error(pos(), "unterminated contract comment");
    Token end;
    end.kind = Tok::End;
    end.pos = pos();
    out.push_back(std::move(end));
    return out;
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char cur() const { return src_[i_]; }
  char peek(size_t k = 1) const {
    return i_ + k < src_.size() ? src_[i_ + k] : '\0';
  }
  SourcePos pos() const { return {line_, col_}; }

  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
      at_line_start_ = true;
    } else {
      ++col_;
    }
    ++i_;
  }

  [[noreturn]] void error(SourcePos p, const std::string& msg) {
    throw ParseError(file_, p, msg);
  }

  // Inside a contract comment a leading `@` on a line is decoration.
  void skip_space_and_comments(std::vector<Token>& out) {
    for (;;) {
      if (at_end()) return;
      char c = cur();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
        continue;
      }
      if (in_contract_ && c == '@') {
        if (peek() == '*' && peek(2) == '/') {
          Token t;
          t.kind = Tok::ContractClose;
          t.pos = pos();
          advance();
          advance();
          advance();
          in_contract_ = false;
          out.push_back(std::move(t));
          continue;
        }
        if (at_line_start_) {
          advance();  // continuation marker
          continue;
        }
        error(pos(), "unexpected '@' inside contract");
      }
      if (c == '/' && peek() == '/') {
        while (!at_end() && cur() != '\n') advance();
        continue;
      }
      if (c == '/' && peek() == '*') {
        if (peek(2) == '@') {
          if (in_contract_) error(pos(), "nested contract comment");
          Token t;
          t.kind = Tok::ContractOpen;
          t.pos = pos();
          advance();
          advance();
          advance();
          in_contract_ = true;
          out.push_back(std::move(t));
          continue;
        }
        SourcePos start = pos();
        advance();
        advance();
        while (!at_end() && !(cur() == '*' && peek() == '/')) advance();
        if (at_end()) error(start, "unterminated comment");
        advance();
        advance();
        continue;
      }
      if (in_contract_ && c == '*' && peek() == '/') {
        // `*/` closing a contract opened with /*@ but ended without @.
        Token t;
        t.kind = Tok::ContractClose;
        t.pos = pos();
        advance();
        advance();
        in_contract_ = false;
        out.push_back(std::move(t));
        continue;
      }
      at_line_start_ = false;
      return;
    }
  }

  Token next_token() {
    Token t;
    t.pos = pos();
    char c = cur();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = 0;
      SourcePos start = pos();
      while (!at_end() && std::isdigit(static_cast<unsigned char>(cur()))) {
        int d = cur() - '0';
        if (v > (INT64_MAX - d) / 10) error(start, "integer literal overflow");
        v = v * 10 + d;
        advance();
      }
      t.kind = Tok::IntLit;
      t.int_value = v;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(cur())) ||
                           cur() == '_')) {
        word.push_back(cur());
        advance();
      }
      auto it = keywords().find(word);
      if (it != keywords().end()) {
        t.kind = it->second;
      } else {
        t.kind = Tok::Ident;
        t.text = std::move(word);
      }
      return t;
    }
    if (c == '\\') {
      SourcePos start = pos();
      advance();
      std::string word;
      while (!at_end() && std::isalpha(static_cast<unsigned char>(cur()))) {
        word.push_back(cur());
        advance();
      }
      if (word == "result") { t.kind = Tok::KwResult; return t; }
      if (word == "forall") { t.kind = Tok::KwForall; return t; }
      if (word == "alldifferent") { t.kind = Tok::KwAllDifferent; return t; }
      error(start, "unknown contract keyword '\\" + word + "'");
    }
    auto two = [&](Tok k) {
      advance();
      advance();
      t.kind = k;
      return t;
    };
    switch (c) {
      case '(': advance(); t.kind = Tok::LParen; return t;
      case ')': advance(); t.kind = Tok::RParen; return t;
      case '{': advance(); t.kind = Tok::LBrace; return t;
      case '}': advance(); t.kind = Tok::RBrace; return t;
      case '[': advance(); t.kind = Tok::LBracket; return t;
      case ']': advance(); t.kind = Tok::RBracket; return t;
      case ';': advance(); t.kind = Tok::Semi; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case '.': advance(); t.kind = Tok::Dot; return t;
      case '+':
        if (peek() == '+') return two(Tok::PlusPlus);
        advance(); t.kind = Tok::Plus; return t;
      case '-':
        if (peek() == '-') return two(Tok::MinusMinus);
        advance(); t.kind = Tok::Minus; return t;
      case '*': advance(); t.kind = Tok::Star; return t;
      case '/': advance(); t.kind = Tok::Slash; return t;
      case '=':
        if (peek() == '=' && peek(2) == '>') {
          advance();
          return two(Tok::Implies);
        }
        if (peek() == '=') return two(Tok::EqEq);
        advance(); t.kind = Tok::Assign; return t;
      case '!':
        if (peek() == '=') return two(Tok::NotEq);
        advance(); t.kind = Tok::Bang; return t;
      case '<':
        if (peek() == '=') return two(Tok::Le);
        advance(); t.kind = Tok::Lt; return t;
      case '>':
        if (peek() == '=') return two(Tok::Ge);
        advance(); t.kind = Tok::Gt; return t;
      case '&':
        if (peek() == '&') return two(Tok::AndAnd);
        error(pos(), "expected '&&'");
      case '|':
        if (peek() == '|') return two(Tok::OrOr);
        error(pos(), "expected '||'");
      default:
        error(pos(), std::string("unexpected character '") + c + "'");
    }
  }

  const std::string& src_;
  std::string file_;
  size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  bool at_line_start_ = true;
  bool in_contract_ = false;
};

}  // namespace

std::vector<Token> lex(const std::string& source, const std::string& file) {
  return Lexer(source, file).run();
}

}  // namespace mimpv::lang
