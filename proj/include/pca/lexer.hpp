#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pca/errors.hpp"
#include "pca/term.hpp"

namespace pca {

enum class TokenKind : uint8_t {
  name,          // unquoted atom: identifier, graphic token, ! or ;
  quoted,        // quoted atom; text holds the unescaped value
  variable,      // uppercase or _ start
  integer,       // int_value holds the value (covers 0'c, 0x.., 0o.., 0b..)
  real,          // float_value holds the value
  string,        // double-quoted; text holds the unescaped value
  open,          // (
  open_ct,       // ( immediately after a name or quoted atom (functional notation)
  close,         // )
  open_bracket,  // [
  close_bracket, // ]
  open_curly,    // {
  close_curly,   // }
  comma,
  bar,
  end,           // clause-terminating .
};

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  BigInt int_value;
  double float_value = 0.0;
  uint32_t line = 1;
  uint32_t column = 1;
  bool adjacent = false;  // no layout or comment between this and the previous token
};

namespace detail {

inline bool is_layout_char(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}
inline bool is_graphic_char(char c) {
  switch (c) {
    case '#': case '$': case '&': case '*': case '+': case '-': case '.':
    case '/': case ':': case '<': case '=': case '>': case '?': case '@':
    case '^': case '~': case '\\':
      return true;
    default:
      return false;
  }
}
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_alnum(char c) {
  return is_digit(c) || is_lower(c) || is_upper(c) || c == '_';
}
inline int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      bool saw_layout = skip_layout_and_comments();
      if (at_end()) break;
      Token t = next_token(!saw_layout && !out.empty());
      if (t.kind == TokenKind::open && t.adjacent && !out.empty()) {
        TokenKind prev = out.back().kind;
        if (prev == TokenKind::name || prev == TokenKind::quoted)
          t.kind = TokenKind::open_ct;
      }
      out.push_back(std::move(t));
    }
    return out;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek(size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  bool has(size_t ahead) const { return pos_ + ahead < src_.size(); }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  [[noreturn]] void fail_here(ErrorCode code, std::string msg) const {
    fail(code, std::move(msg), line_, col_);
  }
  [[noreturn]] void fail_at(ErrorCode code, std::string msg, uint32_t line,
                            uint32_t col) const {
    fail(code, std::move(msg), line, col);
  }

  // Returns true when any layout or comment was consumed.
  bool skip_layout_and_comments() {
    bool skipped = false;
    for (;;) {
      if (at_end()) return skipped;
      char c = peek();
      if (is_layout_char(c)) {
        advance();
        skipped = true;
      } else if (c == '%') {
        while (!at_end() && peek() != '\n') advance();
        skipped = true;
      } else if (c == '/' && peek(1) == '*') {
        uint32_t oline = line_, ocol = col_;
        advance();
        advance();
        for (;;) {
          if (at_end())
            fail_at(ErrorCode::unterminated_block_comment, "block comment never closed",
                    oline, ocol);
          if (peek() == '*' && peek(1) == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
        skipped = true;
      } else {
        return skipped;
      }
    }
  }

  Token next_token(bool adjacent) {
    Token t;
    t.line = line_;
    t.column = col_;
    t.adjacent = adjacent;
    char c = peek();

    if (is_digit(c)) {
      scan_number(t);
      return t;
    }
    if (is_lower(c)) {
      t.kind = TokenKind::name;
      t.text = scan_identifier();
      return t;
    }
    if (is_upper(c) || c == '_') {
      t.kind = TokenKind::variable;
      t.text = scan_identifier();
      return t;
    }
    if (c == '\'') {
      t.kind = TokenKind::quoted;
      t.text = scan_quoted('\'');
      return t;
    }
    if (c == '"') {
      t.kind = TokenKind::string;
      t.text = scan_quoted('"');
      return t;
    }
    if (is_graphic_char(c)) {
      scan_graphic(t);
      return t;
    }

    switch (c) {
      case '(': advance(); t.kind = TokenKind::open; t.text = "("; return t;
      case ')': advance(); t.kind = TokenKind::close; t.text = ")"; return t;
      case '[': advance(); t.kind = TokenKind::open_bracket; t.text = "["; return t;
      case ']': advance(); t.kind = TokenKind::close_bracket; t.text = "]"; return t;
      case '{': advance(); t.kind = TokenKind::open_curly; t.text = "{"; return t;
      case '}': advance(); t.kind = TokenKind::close_curly; t.text = "}"; return t;
      case ',': advance(); t.kind = TokenKind::comma; t.text = ","; return t;
      case '|': advance(); t.kind = TokenKind::bar; t.text = "|"; return t;
      case '!': advance(); t.kind = TokenKind::name; t.text = "!"; return t;
      case ';': advance(); t.kind = TokenKind::name; t.text = ";"; return t;
      default:
        fail_here(ErrorCode::invalid_character,
                  "unexpected character '" + std::string(1, c) + "'");
    }
  }

  std::string scan_identifier() {
    size_t start = pos_;
    while (!at_end() && is_alnum(peek())) advance();
    return std::string(src_.substr(start, pos_ - start));
  }

  void scan_graphic(Token& t) {
    // A lone '.' followed by layout, %, or end of input terminates a clause.
    if (peek() == '.') {
      char n = peek(1);
      if (!has(1) || is_layout_char(n) || n == '%') {
        advance();
        t.kind = TokenKind::end;
        t.text = ".";
        return;
      }
    }
    size_t start = pos_;
    while (!at_end() && is_graphic_char(peek())) {
      if (peek() == '/' && peek(1) == '*') break;  // comment opener wins
      advance();
    }
    t.kind = TokenKind::name;
    t.text = std::string(src_.substr(start, pos_ - start));
  }

  // Decodes one UTF-8 scalar, validating well-formedness.
  uint32_t scan_scalar() {
    uint32_t oline = line_, ocol = col_;
    unsigned char b0 = static_cast<unsigned char>(advance());
    if (b0 < 0x80) return b0;
    int extra;
    uint32_t cp;
    if ((b0 & 0xE0) == 0xC0) { extra = 1; cp = b0 & 0x1F; }
    else if ((b0 & 0xF0) == 0xE0) { extra = 2; cp = b0 & 0x0F; }
    else if ((b0 & 0xF8) == 0xF0) { extra = 3; cp = b0 & 0x07; }
    else fail_at(ErrorCode::invalid_character, "malformed UTF-8 sequence", oline, ocol);
    for (int k = 0; k < extra; ++k) {
      unsigned char b = static_cast<unsigned char>(peek());
      if (at_end() || (b & 0xC0) != 0x80)
        fail_at(ErrorCode::invalid_character, "malformed UTF-8 sequence", oline, ocol);
      advance();
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr uint32_t kMinByLen[4] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMinByLen[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      fail_at(ErrorCode::invalid_character, "malformed UTF-8 sequence", oline, ocol);
    return cp;
  }

  // After a backslash: decodes one escape. Returns the code point, or -1 for
  // a line splice (backslash-newline contributes no character).
  int64_t decode_escape() {
    uint32_t eline = line_, ecol = col_;
    if (at_end()) fail_at(ErrorCode::invalid_escape, "escape at end of input", eline, ecol);
    char c = advance();
    switch (c) {
      case 'a': return 7;
      case 'b': return 8;
      case 'f': return 12;
      case 'n': return 10;
      case 'r': return 13;
      case 't': return 9;
      case 'v': return 11;
      case '\\': return '\\';
      case '\'': return '\'';
      case '"': return '"';
      case '`': return '`';
      case '\n': return -1;
      case 'x': {
        uint64_t v = 0;
        bool any = false;
        while (!at_end() && hex_digit(peek()) >= 0) {
          v = v * 16 + static_cast<uint64_t>(hex_digit(advance()));
          if (v > 0x10FFFF) fail_at(ErrorCode::invalid_escape, "escape out of range", eline, ecol);
          any = true;
        }
        if (!any || at_end() || peek() != '\\')
          fail_at(ErrorCode::invalid_escape, "malformed \\x escape", eline, ecol);
        advance();
        return check_escape_scalar(v, eline, ecol);
      }
      default: {
        if (c >= '0' && c <= '7') {
          uint64_t v = static_cast<uint64_t>(c - '0');
          while (!at_end() && peek() >= '0' && peek() <= '7') {
            v = v * 8 + static_cast<uint64_t>(advance() - '0');
            if (v > 0x10FFFF) fail_at(ErrorCode::invalid_escape, "escape out of range", eline, ecol);
          }
          if (at_end() || peek() != '\\')
            fail_at(ErrorCode::invalid_escape, "malformed octal escape", eline, ecol);
          advance();
          return check_escape_scalar(v, eline, ecol);
        }
        fail_at(ErrorCode::invalid_escape,
                "unknown escape '\\" + std::string(1, c) + "'", eline, ecol);
      }
    }
  }

  int64_t check_escape_scalar(uint64_t v, uint32_t line, uint32_t col) {
    if (v == 0 || v > 0x10FFFF || (v >= 0xD800 && v <= 0xDFFF))
      fail_at(ErrorCode::invalid_escape, "escape out of range", line, col);
    return static_cast<int64_t>(v);
  }

  std::string scan_quoted(char quote) {
    uint32_t oline = line_, ocol = col_;
    advance();  // opening quote
    std::string out;
    for (;;) {
      if (at_end())
        fail_at(ErrorCode::unterminated_quoted_atom, "quoted token never closed", oline,
                ocol);
      char c = peek();
      if (c == quote) {
        advance();
        if (peek() == quote) {  // doubled quote
          advance();
          out.push_back(quote);
          continue;
        }
        return out;
      }
      if (c == '\\') {
        advance();
        int64_t cp = decode_escape();
        if (cp >= 0) append_utf8(out, static_cast<uint32_t>(cp));
        continue;
      }
      if (c == '\n')
        fail_at(ErrorCode::unterminated_quoted_atom,
                "newline in quoted token (use \\n or a \\ line splice)", oline, ocol);
      if (c == '\0')
        fail_here(ErrorCode::invalid_character, "NUL character in quoted token");
      if (static_cast<unsigned char>(c) < 0x80) {
        out.push_back(advance());
      } else {
        append_utf8(out, scan_scalar());
      }
    }
  }

  void scan_number(Token& t) {
    t.kind = TokenKind::integer;
    uint32_t nline = line_, ncol = col_;
    size_t start = pos_;

    if (peek() == '0' && peek(1) == '\'') {
      advance();
      advance();
      // character code literal
      if (at_end()) fail_at(ErrorCode::invalid_character, "malformed 0' literal", nline, ncol);
      if (peek() == '\'') {
        advance();
        if (peek() != '\'')
          fail_at(ErrorCode::invalid_character, "malformed 0' literal (use 0''')", nline, ncol);
        advance();
        t.int_value = 39;  // the quote character
      } else if (peek() == '\\') {
        advance();
        int64_t cp = decode_escape();
        if (cp < 0)
          fail_at(ErrorCode::invalid_escape, "line splice is not a character", nline, ncol);
        t.int_value = cp;
      } else {
        t.int_value = scan_scalar();
      }
      t.text = std::string(src_.substr(start, pos_ - start));
      return;
    }

    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'o' || peek(1) == 'b')) {
      char base_ch = peek(1);
      int base = base_ch == 'x' ? 16 : base_ch == 'o' ? 8 : 2;
      advance();
      advance();
      BigInt v = 0;
      bool any = false;
      for (;;) {
        int d = hex_digit(peek());
        if (d < 0 || d >= base) break;
        v = v * base + d;
        advance();
        any = true;
      }
      if (!any)
        fail_at(ErrorCode::invalid_character, "malformed radix-prefixed integer", nline, ncol);
      t.int_value = std::move(v);
      t.text = std::string(src_.substr(start, pos_ - start));
      return;
    }

    while (!at_end() && is_digit(peek())) advance();

    // fraction: '.' must be followed by a digit, otherwise the '.' belongs to
    // what follows (end token or graphic token)
    bool is_float = false;
    if (peek() == '.' && is_digit(peek(1))) {
      is_float = true;
      advance();
      while (!at_end() && is_digit(peek())) advance();
      if ((peek() == 'e' || peek() == 'E')) {
        size_t exp_digits = (peek(1) == '+' || peek(1) == '-') ? 2 : 1;
        if (is_digit(peek(exp_digits))) {
          advance();  // e
          if (peek() == '+' || peek() == '-') advance();
          while (!at_end() && is_digit(peek())) advance();
        }
      }
    }

    std::string lexeme(src_.substr(start, pos_ - start));
    t.text = lexeme;
    if (is_float) {
      t.kind = TokenKind::real;
      double value = 0.0;
      auto [p, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
      if (ec != std::errc() || p != lexeme.data() + lexeme.size())
        fail_at(ErrorCode::invalid_character, "float literal out of range", nline, ncol);
      t.float_value = value;
    } else {
      t.int_value = BigInt(lexeme);
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  uint32_t col_ = 1;
};

}  // namespace detail

/// Splits Prolog source into tokens. Comments and layout never reach the
/// output; every error carries the 1-based line/column it was detected at.
inline std::vector<Token> tokenize(std::string_view source) {
  return detail::Lexer(source).run();
}

}  // namespace pca
