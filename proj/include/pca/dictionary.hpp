#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pca/errors.hpp"
#include "pca/normalizer.hpp"
#include "pca/term.hpp"
#include "pca/writer.hpp"

namespace pca {

/// Container modes. The value is stored in the header byte.
enum class Mode : uint8_t {
  pca0 = 0,  // variables renamed; their names are regenerated on decode
  pca2 = 2,  // variables keep their source names; names travel in the container
};

enum class Fixity : uint8_t { prefix = 0, infix = 1, postfix = 2 };

struct DictEntry {
  std::string text;    // re-readable token text of the entity
  uint32_t arity = 0;
  Fixity fixity = Fixity::prefix;

  friend bool operator==(const DictEntry&, const DictEntry&) = default;
};

/// Ordered entity dictionary, variables first. (text, arity) is unique across
/// entries; non-variable entities appear in first-occurrence order of a
/// depth-first left-to-right walk of the term stream.
class Dictionary {
 public:
  uint32_t size() const { return static_cast<uint32_t>(entries_.size()); }
  uint32_t nvar() const { return nvar_; }

  const DictEntry& entry_at(uint32_t index) const {
    if (index >= entries_.size())
      fail(ErrorCode::index_out_of_range,
           "dictionary index " + std::to_string(index) + " out of range (N=" +
               std::to_string(entries_.size()) + ")");
    return entries_[index];
  }

  uint32_t index_of(const std::string& text, uint32_t arity) const {
    auto it = lookup_.find({text, arity});
    if (it == lookup_.end())
      fail(ErrorCode::missing_entry, "no dictionary entry for " + text + "/" +
                                         std::to_string(arity));
    return it->second;
  }

  /// Variable index in the renaming mode: ordinal v lives at index v.
  uint32_t index_of_var(uint32_t ordinal) const {
    if (ordinal >= nvar_)
      fail(ErrorCode::missing_entry,
           "variable ordinal " + std::to_string(ordinal) + " beyond NVAR");
    return ordinal;
  }

  uint32_t amax() const {
    uint32_t m = 0;
    for (const DictEntry& e : entries_) m = std::max(m, e.arity);
    return m;
  }

  bool has_postfix() const {
    for (const DictEntry& e : entries_)
      if (e.fixity == Fixity::postfix) return true;
    return false;
  }

  const std::vector<DictEntry>& entries() const { return entries_; }

  /// Used by deserialization; keeps the lookup map consistent.
  void push_entry(DictEntry e, bool is_variable) {
    lookup_.emplace(std::make_pair(e.text, e.arity),
                    static_cast<uint32_t>(entries_.size()));
    entries_.push_back(std::move(e));
    if (is_variable) ++nvar_;
  }

  static Dictionary build(const NormalizedProgram& program, Mode mode) {
    Dictionary d;
    if (mode == Mode::pca0) {
      for (uint32_t v = 0; v < program.max_vars; ++v)
        d.push_entry({var_name(v), 0, Fixity::prefix}, true);
    } else {
      for (size_t i = 0; i < program.terms.size(); ++i)
        d.collect_var_names(program, i, program.terms[i]);
    }
    for (const Term& t : program.terms) d.collect_entities(t, program.ops);
    return d;
  }

 private:
  void add_if_new(std::string text, uint32_t arity, Fixity fixity) {
    auto key = std::make_pair(text, arity);
    if (lookup_.count(key)) return;
    lookup_.emplace(std::move(key), static_cast<uint32_t>(entries_.size()));
    entries_.push_back({std::move(text), arity, fixity});
  }

  void collect_var_names(const NormalizedProgram& program, size_t clause,
                         const Term& t) {
    if (t.is_var()) {
      const std::string& name = program.var_names[clause][t.var_ordinal()];
      auto key = std::make_pair(name, 0u);
      if (!lookup_.count(key)) {
        lookup_.emplace(key, static_cast<uint32_t>(entries_.size()));
        entries_.push_back({name, 0, Fixity::prefix});
        ++nvar_;
      }
      return;
    }
    for (const Term& a : t.args()) collect_var_names(program, clause, a);
  }

  void collect_entities(const Term& t, const OpTable& ops) {
    switch (t.kind()) {
      case TermKind::var:
        return;
      case TermKind::atom:
        add_if_new(atom_text(t.name()), 0, Fixity::prefix);
        return;
      case TermKind::integer:
        add_if_new(integer_text(t.int_value()), 0, Fixity::prefix);
        return;
      case TermKind::real:
        add_if_new(float_text(t.real_value()), 0, Fixity::prefix);
        return;
      case TermKind::compound: {
        uint32_t arity = static_cast<uint32_t>(t.arity());
        Fixity f = Fixity::prefix;
        if (arity == 2 && ops.infix_op(t.name()))
          f = Fixity::infix;
        else if (arity == 1 && ops.postfix_op(t.name()))
          f = Fixity::postfix;
        add_if_new(atom_text(t.name()), arity, f);
        for (const Term& a : t.args()) collect_entities(a, ops);
        return;
      }
    }
  }

  std::vector<DictEntry> entries_;
  std::map<std::pair<std::string, uint32_t>, uint32_t> lookup_;
  uint32_t nvar_ = 0;
};

}  // namespace pca
