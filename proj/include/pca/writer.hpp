#pragma once

#include <charconv>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "pca/lexer.hpp"
#include "pca/optable.hpp"
#include "pca/term.hpp"

namespace pca {

/// Maps a variable ordinal to the name it prints as.
using VarNamer = std::function<std::string(uint32_t)>;

namespace detail {

inline bool all_graphic(std::string_view s) {
  for (char c : s)
    if (!is_graphic_char(c)) return false;
  return !s.empty();
}

inline bool plain_identifier(std::string_view s) {
  if (s.empty() || !is_lower(s[0])) return false;
  for (char c : s)
    if (!is_alnum(c)) return false;
  return true;
}

}  // namespace detail

inline bool atom_needs_quotes(std::string_view text) {
  if (text.empty()) return true;
  if (text == "[]" || text == "{}" || text == "!" || text == ";") return false;
  if (detail::plain_identifier(text)) return false;
  if (detail::all_graphic(text)) {
    // a lone '.' would read as an end token; '/*' would open a comment
    if (text == ".") return true;
    if (text.find("/*") != std::string_view::npos) return true;
    return false;
  }
  return true;
}

/// Atom in re-readable spelling: quoted and escaped exactly when the bare
/// spelling would not read back as the same atom.
inline std::string atom_text(std::string_view name) {
  if (!atom_needs_quotes(name)) return std::string(name);
  std::string out = "'";
  for (unsigned char c : name) {
    switch (c) {
      case '\'': out += "\\'"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\a': out += "\\a"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\v': out += "\\v"; break;
      default:
        if (c < 0x20 || c == 0x7F) {
          static const char* hex = "0123456789abcdef";
          out += "\\x";
          if (c >= 16) out += hex[c >> 4];
          out += hex[c & 15];
          out += '\\';
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '\'';
  return out;
}

/// Shortest decimal spelling that reads back as the same binary64 value;
/// always carries a decimal point so it cannot read as an integer.
inline std::string float_text(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, p);
  size_t epos = s.find('e');
  if (epos == std::string::npos) {
    if (s.find('.') == std::string::npos) s += ".0";
  } else if (s.find('.') == std::string::npos || s.find('.') > epos) {
    s.insert(epos, ".0");
  }
  return s;
}

inline std::string integer_text(const BigInt& v) { return v.str(); }

namespace detail {

// Accumulates lexemes, inserting a space wherever two adjacent lexemes would
// otherwise fuse into a different token sequence.
class SourceBuilder {
 public:
  void emit(std::string_view lexeme) {
    if (lexeme.empty()) return;
    if (needs_sep(lexeme)) out_ += ' ';
    out_.append(lexeme);
    last_ = std::string(lexeme);
    minus_guard_ = false;
  }

  // A bare '-' printed as a prefix operator (or atom) must not touch a
  // following digit, or the pair reads back as one negative literal.
  void guard_minus() { minus_guard_ = true; }

  // Opening parenthesis used for grouping. After a name it must be separated,
  // or it reads back as functional notation.
  void open_group() {
    if (!out_.empty()) {
      char p = out_.back();
      if (is_alnum(p) || is_graphic_char(p) || p == '\'') out_ += ' ';
    }
    out_ += '(';
    last_ = "(";
    minus_guard_ = false;
  }

  // Args '(' directly after a functor; ',' between args; closers.
  void punct(char c) {
    out_ += c;
    last_ = std::string(1, c);
    minus_guard_ = false;
  }

  void end_clause() {
    if (!out_.empty() && is_graphic_char(out_.back())) out_ += ' ';
    out_ += ".\n";
    last_.clear();
    minus_guard_ = false;
  }

  const std::string& str() const { return out_; }
  std::string take() { return std::move(out_); }

 private:
  bool needs_sep(std::string_view next) const {
    if (out_.empty()) return false;
    char p = out_.back();
    char n = next.front();
    if (is_alnum(p) && is_alnum(n)) return true;
    if (is_graphic_char(p) && is_graphic_char(n)) return true;
    if (minus_guard_ && is_digit(n)) return true;
    if (is_digit(p) && n == '\'') return true;  // 0'c lookalike
    if (p == '\'' && n == '\'') return true;    // quoted atoms would fuse
    return false;
  }

  std::string out_;
  std::string last_;
  bool minus_guard_ = false;
};

class TermWriter {
 public:
  TermWriter(const OpTable& ops, const VarNamer& vars) : ops_(ops), vars_(vars) {}

  void write(SourceBuilder& b, const Term& t, int max_prec) const {
    switch (t.kind()) {
      case TermKind::var:
        b.emit(vars_(t.var_ordinal()));
        return;
      case TermKind::integer:
        b.emit(integer_text(t.int_value()));
        return;
      case TermKind::real:
        b.emit(float_text(t.real_value()));
        return;
      case TermKind::atom: {
        int pri = ops_.max_priority(t.name());
        if (pri > 0 && pri > max_prec) {
          b.open_group();
          emit_atom(b, t.name());
          b.punct(')');
        } else {
          emit_atom(b, t.name(), /*guard=*/true);
        }
        return;
      }
      case TermKind::compound:
        write_compound(b, t, max_prec);
        return;
    }
  }

 private:
  // `guard`: the atom lands where the reader would fuse a bare '-' with an
  // adjacent numeric literal (prefix-operator and operand positions).
  void emit_atom(SourceBuilder& b, const std::string& name, bool guard = false) const {
    b.emit(atom_text(name));
    if (guard && name == "-") b.guard_minus();
  }

  void write_compound(SourceBuilder& b, const Term& t, int max_prec) const {
    if (t.is_callable(".", 2)) {
      write_list(b, t);
      return;
    }
    if (t.is_callable("{}", 1)) {
      b.punct('{');
      write(b, t.args()[0], 1200);
      b.punct('}');
      return;
    }
    if (t.arity() == 2) {
      if (auto op = ops_.infix_op(t.name())) {
        bool wrap = op->priority > max_prec;
        int lm = op->spec == OpSpec::yfx ? op->priority : op->priority - 1;
        int rm = op->spec == OpSpec::xfy ? op->priority : op->priority - 1;
        if (wrap) b.open_group();
        write(b, t.args()[0], lm);
        if (t.name() == ",")
          b.punct(',');
        else
          emit_atom(b, t.name());
        write(b, t.args()[1], rm);
        if (wrap) b.punct(')');
        return;
      }
    }
    if (t.arity() == 1) {
      if (auto op = ops_.prefix_op(t.name())) {
        bool wrap = op->priority > max_prec;
        int am = op->spec == OpSpec::fy ? op->priority : op->priority - 1;
        if (wrap) b.open_group();
        emit_atom(b, t.name(), /*guard=*/true);
        if (op->priority == 1200) b.punct(' ');  // directive style: ':- goal'
        write(b, t.args()[0], am);
        if (wrap) b.punct(')');
        return;
      }
      if (auto op = ops_.postfix_op(t.name())) {
        bool wrap = op->priority > max_prec;
        int am = op->spec == OpSpec::yf ? op->priority : op->priority - 1;
        if (wrap) b.open_group();
        write(b, t.args()[0], am);
        emit_atom(b, t.name());
        if (wrap) b.punct(')');
        return;
      }
    }
    // canonical functor(args) form
    const std::string& f = t.name();
    if (f == "[]" || f == "{}")
      b.emit("'" + f + "'");  // bare [] or {} cannot take an argument list
    else
      emit_atom(b, f);
    b.punct('(');
    bool first = true;
    for (const Term& a : t.args()) {
      if (!first) b.punct(',');
      first = false;
      write(b, a, 999);
    }
    b.punct(')');
  }

  void write_list(SourceBuilder& b, const Term& list) const {
    b.punct('[');
    const Term* cur = &list;
    bool first = true;
    for (;;) {
      if (!first) b.punct(',');
      first = false;
      write(b, cur->args()[0], 999);
      const Term& tail = cur->args()[1];
      if (tail.is_callable(".", 2)) {
        cur = &tail;
        continue;
      }
      if (!tail.is_atom("[]")) {
        b.punct('|');
        write(b, tail, 999);
      }
      break;
    }
    b.punct(']');
  }

  const OpTable& ops_;
  const VarNamer& vars_;
};

}  // namespace detail

/// Renders one term so that reading it back under the same operator table
/// gives a structurally equal term.
inline std::string write_term(const Term& t, const OpTable& ops, const VarNamer& vars) {
  detail::SourceBuilder b;
  detail::TermWriter(ops, vars).write(b, t, 1200);
  return b.take();
}

/// Per-clause variable naming for program output.
using ClauseVarNamer = std::function<std::string(size_t clause, uint32_t ordinal)>;

/// Prints clauses in order, each terminated by `.` and a newline. The
/// operator table is replayed across op/3 directives so that later clauses
/// print under the operators a reader of the output will have by then.
inline std::string write_program(const std::vector<Term>& terms, OpTable ops,
                                 const ClauseVarNamer& vars) {
  detail::SourceBuilder b;
  for (size_t i = 0; i < terms.size(); ++i) {
    VarNamer namer = [&vars, i](uint32_t ord) { return vars(i, ord); };
    detail::TermWriter(ops, namer).write(b, terms[i], 1200);
    b.end_clause();
    replay_directive(ops, terms[i]);
  }
  return b.take();
}

}  // namespace pca
