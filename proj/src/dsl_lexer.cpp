#include <cctype>
#include <limits>

#include "cdp/dsl.hpp"

namespace cdp::dsl {

std::vector<Token> lex(std::string_view src) {
  static const char* multi[] = {"<->", "..", "<=", ">=", "==", "!=", "/\\", "\\/", "->", "<-", "++"};
  static const std::string_view single = ";:,[](){}+-*<>=|";

  std::vector<Token> out;
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      const std::size_t l = line, cl = col;
      advance(2);
      while (i < src.size() && !(src[i] == '*' && i + 1 < src.size() && src[i + 1] == '/')) advance(1);
      if (i >= src.size()) throw ParseError(l, cl, "unterminated comment");
      advance(2);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) advance(1);
      t.kind = TokenKind::ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = 0;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        const int d = src[i] - '0';
        if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10)
          throw ParseError(t.line, t.column, "integer literal too large");
        v = v * 10 + d;
        advance(1);
      }
      t.kind = TokenKind::integer;
      t.value = v;
    } else if (c == '"') {
      advance(1);
      while (i < src.size() && src[i] != '"' && src[i] != '\n') advance(src[i] == '\\' ? 2 : 1);
      if (i >= src.size() || src[i] != '"') throw ParseError(t.line, t.column, "unterminated string");
      advance(1);
      t.kind = TokenKind::string;
    } else {
      std::size_t len = 0;
      for (const char* m : multi) {
        const std::string_view mv(m);
        if (src.substr(i, mv.size()) == mv) {
          len = mv.size();
          break;
        }
      }
      if (len == 0 && single.find(c) != std::string_view::npos) len = 1;
      if (len == 0) throw ParseError(t.line, t.column, std::string("unexpected character '") + c + "'");
      advance(len);
      t.kind = TokenKind::punct;
    }
    t.text = std::string(src.substr(start, i - start));
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = TokenKind::end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

}  // namespace cdp::dsl
