#include "lexer.hpp"

#include <array>
#include <cctype>

namespace sx::detail {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool ident_char(char c) {
  return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

constexpr std::array kKeywords = {
    "const", "let", "var", "function", "if", "else", "while", "return",
    "new", "true", "false", "null",
    // Recognized but unsupported; the parser rejects or opaques them.
    "class", "for", "do", "switch", "try", "catch", "finally", "throw",
    "async", "await", "import", "export", "typeof", "delete", "in", "of",
};

// Multi-char operators first so maximal munch wins.
constexpr std::array kPuncts = {
    "===", "!==", "=>", "==", "!=", ">=", "<=", "&&", "||",
    "(", ")", "{", "}", "[", "]", ",", ";", ":", ".", ">", "<",
    "+", "-", "=",
};

}  // namespace

bool is_reserved_unsupported(const std::string& word) {
  static const std::array unsupported = {
      "class", "for", "do", "switch", "try", "catch", "finally", "throw",
      "async", "await", "import", "export", "typeof", "delete", "in", "of",
  };
  for (const char* w : unsupported)
    if (word == w) return true;
  return false;
}

std::vector<Token> tokenize(const std::string& source, const std::string& path) {
  std::vector<Token> out;
  int line = 1, column = 1;
  std::size_t i = 0;
  const std::size_t n = source.size();

  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count && i < n; ++k, ++i) {
      if (source[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };

  while (i < n) {
    char c = source[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < n && source[i + 1] == '/') {
      while (i < n && source[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < n && source[i + 1] == '*') {
      int start_line = line, start_col = column;
      advance(2);
      bool closed = false;
      while (i < n) {
        if (source[i] == '*' && i + 1 < n && source[i + 1] == '/') {
          advance(2);
          closed = true;
          break;
        }
        advance(1);
      }
      if (!closed) throw SyntaxError("unterminated block comment", path, start_line, start_col);
      continue;
    }

    Token tok;
    tok.line = line;
    tok.column = column;
    tok.offset = static_cast<int>(i);

    if (ident_start(c)) {
      std::size_t j = i;
      while (j < n && ident_char(source[j])) ++j;
      tok.text = source.substr(i, j - i);
      tok.kind = TokenKind::Ident;
      for (const char* kw : kKeywords) {
        if (tok.text == kw) {
          tok.kind = TokenKind::Keyword;
          break;
        }
      }
      tok.length = static_cast<int>(j - i);
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      bool dot = false;
      while (j < n && (std::isdigit(static_cast<unsigned char>(source[j])) ||
                       (!dot && source[j] == '.' && j + 1 < n &&
                        std::isdigit(static_cast<unsigned char>(source[j + 1]))))) {
        if (source[j] == '.') dot = true;
        ++j;
      }
      tok.kind = TokenKind::Number;
      tok.text = source.substr(i, j - i);
      tok.is_double = dot;
      tok.length = static_cast<int>(j - i);
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }

    if (c == '\'' || c == '"') {
      char quote = c;
      int start_line = line, start_col = column;
      std::size_t j = i + 1;
      std::string value;
      bool closed = false;
      while (j < n) {
        char d = source[j];
        if (d == '\\' && j + 1 < n) {
          char e = source[j + 1];
          switch (e) {
            case 'n': value.push_back('\n'); break;
            case 't': value.push_back('\t'); break;
            case 'r': value.push_back('\r'); break;
            case '\\': value.push_back('\\'); break;
            case '\'': value.push_back('\''); break;
            case '"': value.push_back('"'); break;
            default: value.push_back(e); break;
          }
          j += 2;
          continue;
        }
        if (d == quote) {
          closed = true;
          ++j;
          break;
        }
        if (d == '\n') break;
        value.push_back(d);
        ++j;
      }
      if (!closed) throw SyntaxError("unterminated string literal", path, start_line, start_col);
      tok.kind = TokenKind::String;
      tok.text = std::move(value);
      tok.length = static_cast<int>(j - i);
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }

    if (c == '`') throw SyntaxError("template literals are not supported", path, line, column);

    bool matched = false;
    for (const char* p : kPuncts) {
      std::size_t len = std::char_traits<char>::length(p);
      if (source.compare(i, len, p) == 0) {
        tok.kind = TokenKind::Punct;
        tok.text = p;
        tok.length = static_cast<int>(len);
        advance(len);
        out.push_back(std::move(tok));
        matched = true;
        break;
      }
    }
    if (matched) continue;

    throw SyntaxError(std::string("unexpected character '") + c + "'", path, line, column);
  }

  Token eof;
  eof.kind = TokenKind::EndOfFile;
  eof.line = line;
  eof.column = column;
  eof.offset = static_cast<int>(n);
  out.push_back(eof);
  return out;
}

}  // namespace sx::detail
