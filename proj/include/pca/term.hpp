#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pca {

using BigInt = boost::multiprecision::cpp_int;

enum class TermKind : uint8_t { var, atom, integer, real, compound };

/// A Prolog term value. Variables are 0-based ordinals, dense within one
/// top-level term in first-occurrence order. Zero-arity callables are atoms;
/// compounds always have at least one argument.
class Term {
 public:
  Term() : kind_(TermKind::atom), text_("[]") {}

  static Term var(uint32_t ordinal) {
    Term t;
    t.kind_ = TermKind::var;
    t.ordinal_ = ordinal;
    t.text_.clear();
    return t;
  }

  static Term atom(std::string text) {
    Term t;
    t.kind_ = TermKind::atom;
    t.text_ = std::move(text);
    return t;
  }

  static Term integer(BigInt value) {
    Term t;
    t.kind_ = TermKind::integer;
    t.text_.clear();
    t.int_ = std::move(value);
    return t;
  }

  static Term integer(long long value) { return integer(BigInt(value)); }

  static Term real(double value) {
    Term t;
    t.kind_ = TermKind::real;
    t.text_.clear();
    t.real_ = value;
    return t;
  }

  static Term compound(std::string functor, std::vector<Term> args) {
    Term t;
    t.kind_ = TermKind::compound;
    t.text_ = std::move(functor);
    t.args_ = std::move(args);
    return t;
  }

  TermKind kind() const { return kind_; }
  bool is_var() const { return kind_ == TermKind::var; }
  bool is_atom() const { return kind_ == TermKind::atom; }
  bool is_integer() const { return kind_ == TermKind::integer; }
  bool is_real() const { return kind_ == TermKind::real; }
  bool is_compound() const { return kind_ == TermKind::compound; }

  bool is_atom(std::string_view text) const {
    return kind_ == TermKind::atom && text_ == text;
  }
  bool is_callable(std::string_view name, size_t arity) const {
    return this->name() == name && this->arity() == arity &&
           (kind_ == TermKind::atom || kind_ == TermKind::compound);
  }

  uint32_t var_ordinal() const { return ordinal_; }

  /// Atom text or compound functor.
  const std::string& name() const { return text_; }

  const BigInt& int_value() const { return int_; }
  double real_value() const { return real_; }

  const std::vector<Term>& args() const { return args_; }
  size_t arity() const { return kind_ == TermKind::compound ? args_.size() : 0; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case TermKind::var:
        return a.ordinal_ == b.ordinal_;
      case TermKind::atom:
        return a.text_ == b.text_;
      case TermKind::integer:
        return a.int_ == b.int_;
      case TermKind::real:
        // bit-exact so that -0.0 and 0.0 stay distinct through round trips
        return std::bit_cast<uint64_t>(a.real_) == std::bit_cast<uint64_t>(b.real_);
      case TermKind::compound:
        return a.text_ == b.text_ && a.args_ == b.args_;
    }
    return false;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  TermKind kind_;
  uint32_t ordinal_ = 0;
  std::string text_;
  BigInt int_;
  double real_ = 0.0;
  std::vector<Term> args_;
};

/// Number of distinct variables in a term (ordinals are dense, so this is
/// max ordinal + 1).
inline uint32_t distinct_var_count(const Term& t) {
  switch (t.kind()) {
    case TermKind::var:
      return t.var_ordinal() + 1;
    case TermKind::compound: {
      uint32_t n = 0;
      for (const Term& a : t.args()) n = std::max(n, distinct_var_count(a));
      return n;
    }
    default:
      return 0;
  }
}

}  // namespace pca
