#pragma once

#include <string>
#include <vector>

#include "schemaxray/diagnostics.hpp"

namespace sx::detail {

enum class TokenKind {
  Ident,
  Keyword,
  Number,     // integer or double; lexeme preserved
  String,     // value holds the unescaped contents
  Punct,      // operators and delimiters, lexeme holds the exact text
  EndOfFile,
};

struct Token {
  TokenKind kind = TokenKind::EndOfFile;
  std::string text;   // raw lexeme (for String: the unescaped value)
  int line = 1;
  int column = 1;
  int offset = 0;
  int length = 0;
  bool is_double = false;  // Number: contains a decimal point

  bool is(TokenKind k) const { return kind == k; }
  bool is_punct(const char* p) const { return kind == TokenKind::Punct && text == p; }
  bool is_keyword(const char* k) const { return kind == TokenKind::Keyword && text == k; }
};

// Tokenizes the whole source. Comments and whitespace are skipped.
// Throws SyntaxError on unterminated strings/comments or unknown characters.
std::vector<Token> tokenize(const std::string& source, const std::string& path);

bool is_reserved_unsupported(const std::string& word);

}  // namespace sx::detail
