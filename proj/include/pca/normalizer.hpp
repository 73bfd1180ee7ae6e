#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "pca/reader.hpp"
#include "pca/term.hpp"
#include "pca/writer.hpp"

namespace pca {

/// Canonical variable name for an ordinal: A..Z, then A1..A9, B1..B9, .. Z9,
/// then V260, V261, ... (collision-free: names below 260 carry at most one
/// digit).
inline std::string var_name(uint32_t ordinal) {
  if (ordinal < 26) return std::string(1, static_cast<char>('A' + ordinal));
  if (ordinal < 260) {
    uint32_t k = ordinal - 26;
    std::string s(1, static_cast<char>('A' + k / 9));
    s += static_cast<char>('1' + k % 9);
    return s;
  }
  return "V" + std::to_string(ordinal);
}

/// A term stream in normal form: clause-local variable ordinals are dense in
/// first-occurrence order. `var_names` keeps the source spelling of every
/// variable for the mode that preserves names; anonymous variables get a
/// clause-unique `_<n>` spelling.
struct NormalizedProgram {
  std::vector<Term> terms;
  OpTable ops;  // final table after all op/3 directives
  uint32_t max_vars = 0;
  std::vector<std::vector<std::string>> var_names;  // per clause, by ordinal

  friend bool operator==(const NormalizedProgram& a, const NormalizedProgram& b) {
    return a.terms == b.terms;
  }
};

inline NormalizedProgram normalize(const ReadResult& read) {
  NormalizedProgram p;
  p.terms = read.terms;
  p.ops = read.ops;
  p.var_names = read.var_names;
  for (size_t i = 0; i < p.terms.size(); ++i) {
    uint32_t k = distinct_var_count(p.terms[i]);
    p.max_vars = std::max(p.max_vars, k);
    if (i < p.var_names.size() && p.var_names[i].size() < k)
      p.var_names[i].resize(k, "_");
  }
  if (p.var_names.size() < p.terms.size()) p.var_names.resize(p.terms.size());

  // give each anonymous variable a name that is fresh within its clause
  for (auto& names : p.var_names) {
    std::unordered_set<std::string> used(names.begin(), names.end());
    uint32_t counter = 1;
    for (auto& name : names) {
      if (name != "_") continue;
      std::string fresh;
      do {
        fresh = "_" + std::to_string(counter++);
      } while (used.count(fresh) != 0);
      used.insert(fresh);
      name = fresh;
    }
  }
  return p;
}

inline NormalizedProgram normalize(std::string_view source) {
  return normalize(read_program(source));
}

/// Listing-style rendering with canonical variable names: one clause per
/// line, no decorative layout. This is the NF0 baseline all size ratios are
/// measured against.
inline std::string nf0_text(const NormalizedProgram& p) {
  return write_program(p.terms, OpTable::standard(),
                       [](size_t, uint32_t ord) { return var_name(ord); });
}

/// Rendering that keeps the recorded per-clause variable names.
inline std::string source_text(const NormalizedProgram& p) {
  return write_program(p.terms, OpTable::standard(),
                       [&p](size_t clause, uint32_t ord) {
                         if (clause < p.var_names.size() &&
                             ord < p.var_names[clause].size())
                           return p.var_names[clause][ord];
                         return var_name(ord);
                       });
}

}  // namespace pca
