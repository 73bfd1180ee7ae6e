#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pca/errors.hpp"
#include "pca/lexer.hpp"
#include "pca/optable.hpp"
#include "pca/term.hpp"

namespace pca {

struct Diagnostic {
  std::string message;
  uint32_t line = 0;
  uint32_t column = 0;
};

class TokenCursor {
 public:
  explicit TokenCursor(const std::vector<Token>& tokens) : tokens_(&tokens) {}

  bool at_end() const { return pos_ >= tokens_->size(); }
  const Token& peek(size_t ahead = 0) const {
    static const Token eof{};
    size_t i = pos_ + ahead;
    return i < tokens_->size() ? (*tokens_)[i] : eof;
  }
  const Token& next() { return (*tokens_)[pos_++]; }
  size_t position() const { return pos_; }

  // Position for diagnostics when the stream runs out.
  std::pair<uint32_t, uint32_t> here() const {
    if (pos_ < tokens_->size()) {
      const Token& t = (*tokens_)[pos_];
      return {t.line, t.column};
    }
    if (!tokens_->empty()) {
      const Token& t = tokens_->back();
      return {t.line, t.column};
    }
    return {1, 1};
  }

 private:
  const std::vector<Token>* tokens_;
  size_t pos_ = 0;
};

namespace detail {

inline bool can_start_term(const Token& t) {
  switch (t.kind) {
    case TokenKind::integer:
    case TokenKind::real:
    case TokenKind::variable:
    case TokenKind::string:
    case TokenKind::open:
    case TokenKind::open_ct:
    case TokenKind::open_bracket:
    case TokenKind::open_curly:
    case TokenKind::name:
    case TokenKind::quoted:
      return true;
    default:
      return false;
  }
}

class TermParser {
 public:
  TermParser(TokenCursor& cur, const OpTable& ops) : cur_(cur), ops_(ops) {}

  Term read_clause() {
    if (cur_.at_end()) {
      auto [l, c] = cur_.here();
      fail(ErrorCode::unexpected_token, "expected a term", l, c);
    }
    Term t = parse(1200).first;
    const Token& tok = cur_.peek();
    if (tok.kind != TokenKind::end)
      unexpected(tok, "expected an end token (.)");
    cur_.next();
    return t;
  }

  std::vector<std::string> take_var_names() { return std::move(var_names_); }

 private:
  [[noreturn]] void unexpected(const Token& t, std::string msg) {
    if (cur_.at_end()) {
      auto [l, c] = cur_.here();
      fail(ErrorCode::unexpected_token, msg + " (input ended)", l, c);
    }
    fail(ErrorCode::unexpected_token, msg, t.line, t.column);
  }

  Term make_var(const std::string& name) {
    if (name == "_") {
      uint32_t ord = static_cast<uint32_t>(var_names_.size());
      var_names_.push_back("_");
      return Term::var(ord);
    }
    auto it = var_map_.find(name);
    if (it != var_map_.end()) return Term::var(it->second);
    uint32_t ord = static_cast<uint32_t>(var_names_.size());
    var_map_.emplace(name, ord);
    var_names_.push_back(name);
    return Term::var(ord);
  }

  static Term codes_of(const std::string& utf8) {
    // the lexer already validated well-formedness
    std::vector<uint32_t> codes;
    for (size_t i = 0; i < utf8.size();) {
      unsigned char b = static_cast<unsigned char>(utf8[i]);
      int len = b < 0x80 ? 1 : (b & 0xE0) == 0xC0 ? 2 : (b & 0xF0) == 0xE0 ? 3 : 4;
      uint32_t cp = len == 1 ? b : b & (0x7F >> len);
      for (int k = 1; k < len; ++k)
        cp = (cp << 6) | (static_cast<unsigned char>(utf8[i + k]) & 0x3F);
      codes.push_back(cp);
      i += len;
    }
    Term list = Term::atom("[]");
    for (size_t i = codes.size(); i > 0; --i)
      list = Term::compound(".", {Term::integer(BigInt(codes[i - 1])), std::move(list)});
    return list;
  }

  // Parses a term of priority at most max_prec; returns the term and the
  // priority of its outermost operator (0 for non-operator terms).
  std::pair<Term, int> parse(int max_prec) {
    auto [left, left_prec] = parse_primary(max_prec);
    return parse_operators(std::move(left), left_prec, max_prec);
  }

  std::pair<Term, int> parse_operators(Term left, int left_prec, int max_prec) {
    for (;;) {
      const Token& tok = cur_.peek();
      if (tok.kind == TokenKind::comma) {
        // ',' acts as xfy 1000 and is not redefinable
        if (max_prec < 1000) break;
        if (left_prec > 999)
          fail(ErrorCode::operator_clash,
               "left operand of ',' has priority " + std::to_string(left_prec),
               tok.line, tok.column);
        cur_.next();
        Term right = parse(1000).first;
        left = Term::compound(",", {std::move(left), std::move(right)});
        left_prec = 1000;
        continue;
      }
      if (tok.kind != TokenKind::name && tok.kind != TokenKind::quoted) break;

      auto infix = ops_.infix_op(tok.text);
      auto postfix = ops_.postfix_op(tok.text);
      if (infix && infix->priority <= max_prec) {
        int left_max = infix->spec == OpSpec::yfx ? infix->priority : infix->priority - 1;
        int right_max = infix->spec == OpSpec::xfy ? infix->priority : infix->priority - 1;
        if (left_prec <= left_max) {
          cur_.next();
          Term right = parse(right_max).first;
          left = Term::compound(tok.text, {std::move(left), std::move(right)});
          left_prec = infix->priority;
          continue;
        }
        if (!postfix)
          fail(ErrorCode::operator_clash,
               "operator '" + tok.text + "' (priority " +
                   std::to_string(infix->priority) + ") cannot take a left operand of priority " +
                   std::to_string(left_prec),
               tok.line, tok.column);
      }
      if (postfix && postfix->priority <= max_prec) {
        int left_max =
            postfix->spec == OpSpec::yf ? postfix->priority : postfix->priority - 1;
        if (left_prec > left_max)
          fail(ErrorCode::operator_clash,
               "postfix operator '" + tok.text + "' cannot take an operand of priority " +
                   std::to_string(left_prec),
               tok.line, tok.column);
        cur_.next();
        left = Term::compound(tok.text, {std::move(left)});
        left_prec = postfix->priority;
        continue;
      }
      break;
    }
    return {std::move(left), left_prec};
  }

  std::pair<Term, int> parse_primary(int max_prec) {
    if (cur_.at_end()) {
      auto [l, c] = cur_.here();
      fail(ErrorCode::unexpected_token, "expected a term (input ended)", l, c);
    }
    const Token& tok = cur_.next();
    switch (tok.kind) {
      case TokenKind::integer:
        return {Term::integer(tok.int_value), 0};
      case TokenKind::real:
        return {Term::real(tok.float_value), 0};
      case TokenKind::variable:
        return {make_var(tok.text), 0};
      case TokenKind::string:
        return {codes_of(tok.text), 0};
      case TokenKind::open:
      case TokenKind::open_ct: {
        Term inner = parse(1200).first;
        expect(TokenKind::close, ")", tok);
        return {std::move(inner), 0};
      }
      case TokenKind::open_bracket:
        return {parse_list(tok), 0};
      case TokenKind::open_curly: {
        if (cur_.peek().kind == TokenKind::close_curly) {
          cur_.next();
          return {Term::atom("{}"), 0};
        }
        Term inner = parse(1200).first;
        expect(TokenKind::close_curly, "}", tok);
        return {Term::compound("{}", {std::move(inner)}), 0};
      }
      case TokenKind::name:
      case TokenKind::quoted:
        return parse_name(tok, max_prec);
      default:
        unexpected(tok, "expected a term");
    }
  }

  std::pair<Term, int> parse_name(const Token& tok, int max_prec) {
    // functional notation: name immediately followed by (
    if (cur_.peek().kind == TokenKind::open_ct) {
      cur_.next();
      std::vector<Term> args;
      args.push_back(parse(999).first);
      while (cur_.peek().kind == TokenKind::comma) {
        cur_.next();
        args.push_back(parse(999).first);
      }
      expect(TokenKind::close, ")", tok);
      return {Term::compound(tok.text, std::move(args)), 0};
    }

    // negative numeric literal: '-' directly attached to the number
    if (tok.kind == TokenKind::name && tok.text == "-") {
      const Token& num = cur_.peek();
      if (num.adjacent && num.kind == TokenKind::integer) {
        cur_.next();
        return {Term::integer(-num.int_value), 0};
      }
      if (num.adjacent && num.kind == TokenKind::real) {
        cur_.next();
        return {Term::real(-num.float_value), 0};
      }
    }

    if (auto prefix = ops_.prefix_op(tok.text);
        prefix && prefix->priority <= max_prec && can_start_term(cur_.peek())) {
      int operand_max = prefix->spec == OpSpec::fy ? prefix->priority : prefix->priority - 1;
      Term operand = parse(operand_max).first;
      return {Term::compound(tok.text, {std::move(operand)}), prefix->priority};
    }

    return {Term::atom(tok.text), 0};
  }

  Term parse_list(const Token& open) {
    if (cur_.peek().kind == TokenKind::close_bracket) {
      cur_.next();
      return Term::atom("[]");
    }
    std::vector<Term> elems;
    elems.push_back(parse(999).first);
    while (cur_.peek().kind == TokenKind::comma) {
      cur_.next();
      elems.push_back(parse(999).first);
    }
    Term tail = Term::atom("[]");
    if (cur_.peek().kind == TokenKind::bar) {
      cur_.next();
      tail = parse(999).first;
    }
    expect(TokenKind::close_bracket, "]", open);
    for (size_t i = elems.size(); i > 0; --i)
      tail = Term::compound(".", {std::move(elems[i - 1]), std::move(tail)});
    return tail;
  }

  void expect(TokenKind kind, const char* what, const Token& open) {
    const Token& tok = cur_.peek();
    if (tok.kind != kind) {
      if (cur_.at_end())
        fail(ErrorCode::unbalanced_delimiter,
             std::string("missing '") + what + "' for delimiter opened here", open.line,
             open.column);
      fail(ErrorCode::unbalanced_delimiter, std::string("expected '") + what + "'",
           tok.line, tok.column);
    }
    cur_.next();
  }

  TokenCursor& cur_;
  const OpTable& ops_;
  std::unordered_map<std::string, uint32_t> var_map_;
  std::vector<std::string> var_names_;
};

}  // namespace detail

/// Reads one term ending in an end token, advancing the cursor past it.
/// Variables are numbered by first occurrence; each `_` is fresh. When
/// `var_names` is given it receives the source name of each ordinal.
inline Term read_term(TokenCursor& cursor, const OpTable& ops,
                      std::vector<std::string>* var_names = nullptr) {
  detail::TermParser parser(cursor, ops);
  Term t = parser.read_clause();
  if (var_names) *var_names = parser.take_var_names();
  return t;
}

struct ReadResult {
  std::vector<Term> terms;
  OpTable ops;  // final table, after all op/3 directives
  std::vector<std::vector<std::string>> var_names;  // per clause, by ordinal
  std::vector<Diagnostic> warnings;
};

/// Reads a whole source file. op/3 directives take effect before the next
/// term is read and stay in the term stream. A malformed op/3 directive
/// leaves the table unchanged and is reported as a warning.
inline ReadResult read_program(std::string_view source) {
  std::vector<Token> tokens = tokenize(source);
  TokenCursor cursor(tokens);
  ReadResult result;
  result.ops = OpTable::standard();
  while (!cursor.at_end()) {
    const Token& first = cursor.peek();
    uint32_t line = first.line, column = first.column;
    std::vector<std::string> names;
    Term t = read_term(cursor, result.ops, &names);
    if (!replay_directive(result.ops, t))
      result.warnings.push_back(
          {"malformed op/3 directive ignored (operator table unchanged)", line, column});
    result.terms.push_back(std::move(t));
    result.var_names.push_back(std::move(names));
  }
  return result;
}

}  // namespace pca
