#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>

#include "pca/term.hpp"

namespace pca {

enum class OpSpec : uint8_t { xfx, xfy, yfx, fy, fx, xf, yf };

inline bool spec_is_prefix(OpSpec s) { return s == OpSpec::fy || s == OpSpec::fx; }
inline bool spec_is_infix(OpSpec s) {
  return s == OpSpec::xfx || s == OpSpec::xfy || s == OpSpec::yfx;
}
inline bool spec_is_postfix(OpSpec s) { return s == OpSpec::xf || s == OpSpec::yf; }

inline std::optional<OpSpec> op_spec_from_name(std::string_view s) {
  if (s == "xfx") return OpSpec::xfx;
  if (s == "xfy") return OpSpec::xfy;
  if (s == "yfx") return OpSpec::yfx;
  if (s == "fy") return OpSpec::fy;
  if (s == "fx") return OpSpec::fx;
  if (s == "xf") return OpSpec::xf;
  if (s == "yf") return OpSpec::yf;
  return std::nullopt;
}

struct OpDef {
  std::string name;
  int priority = 0;  // 1..1200
  OpSpec spec = OpSpec::xfx;
};

/// Operator definitions in effect while reading or writing. A name holds at
/// most one prefix definition plus at most one infix-or-postfix definition.
class OpTable {
 public:
  std::optional<OpDef> prefix_op(const std::string& name) const {
    auto it = prefix_.find(name);
    if (it == prefix_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<OpDef> infix_op(const std::string& name) const {
    auto it = other_.find(name);
    if (it == other_.end() || !spec_is_infix(it->second.spec)) return std::nullopt;
    return it->second;
  }

  std::optional<OpDef> postfix_op(const std::string& name) const {
    auto it = other_.find(name);
    if (it == other_.end() || !spec_is_postfix(it->second.spec)) return std::nullopt;
    return it->second;
  }

  bool is_operator(const std::string& name) const {
    return prefix_.count(name) != 0 || other_.count(name) != 0;
  }

  /// Highest priority among this name's definitions; 0 when it has none.
  int max_priority(const std::string& name) const {
    int p = 0;
    if (auto it = prefix_.find(name); it != prefix_.end()) p = it->second.priority;
    if (auto it = other_.find(name); it != other_.end())
      p = std::max(p, it->second.priority);
    return p;
  }

  /// Adds or replaces a definition; priority 0 removes the matching slot.
  void define(int priority, OpSpec spec, const std::string& name) {
    auto& slot = spec_is_prefix(spec) ? prefix_ : other_;
    if (priority == 0) {
      slot.erase(name);
    } else {
      slot[name] = OpDef{name, priority, spec};
    }
  }

  /// The ISO core set plus the usual declaration prefixes.
  static OpTable standard() {
    OpTable t;
    auto def = [&t](int p, OpSpec s, std::initializer_list<const char*> names) {
      for (const char* n : names) t.define(p, s, n);
    };
    def(1200, OpSpec::xfx, {":-", "-->"});
    def(1200, OpSpec::fx, {":-", "?-"});
    def(1150, OpSpec::fx,
        {"dynamic", "discontiguous", "initialization", "meta_predicate", "multifile",
         "public"});
    def(1100, OpSpec::xfy, {";"});
    def(1050, OpSpec::xfy, {"->"});
    def(1000, OpSpec::xfy, {","});
    def(900, OpSpec::fy, {"\\+"});
    def(700, OpSpec::xfx,
        {"=", "\\=", "==", "\\==", "@<", "@>", "@=<", "@>=", "=..", "is", "=:=",
         "=\\=", "<", ">", "=<", ">="});
    def(500, OpSpec::yfx, {"+", "-", "/\\", "\\/", "xor"});
    def(400, OpSpec::yfx, {"*", "/", "//", "mod", "rem", "div", "<<", ">>"});
    def(200, OpSpec::xfx, {"**"});
    def(200, OpSpec::xfy, {"^"});
    def(200, OpSpec::fy, {"-", "+", "\\"});
    return t;
  }

 private:
  std::unordered_map<std::string, OpDef> prefix_;
  std::unordered_map<std::string, OpDef> other_;  // infix or postfix
};

namespace detail {

inline bool op_directive_names(const Term& t, std::vector<std::string>& out) {
  if (t.is_atom()) {
    if (t.name() == ",") return false;  // ',' is not redefinable
    out.push_back(t.name());
    return true;
  }
  // list of atoms
  const Term* cur = &t;
  while (cur->is_callable(".", 2)) {
    const Term& head = cur->args()[0];
    if (!head.is_atom() || head.name() == ",") return false;
    out.push_back(head.name());
    cur = &cur->args()[1];
  }
  return cur->is_atom("[]") && !out.empty();
}

}  // namespace detail

/// True when `goal` is a well-formed op(Priority, Spec, Name-or-names) term;
/// applies it to the table. Malformed goals leave the table untouched.
inline bool apply_op_goal(OpTable& ops, const Term& goal) {
  if (!goal.is_callable("op", 3)) return false;
  const Term& pri = goal.args()[0];
  const Term& spc = goal.args()[1];
  const Term& nam = goal.args()[2];
  if (!pri.is_integer() || pri.int_value() < 0 || pri.int_value() > 1200) return false;
  if (!spc.is_atom()) return false;
  auto spec = op_spec_from_name(spc.name());
  if (!spec) return false;
  std::vector<std::string> names;
  if (!detail::op_directive_names(nam, names)) return false;
  int priority = static_cast<int>(pri.int_value());
  for (const std::string& n : names) ops.define(priority, *spec, n);
  return true;
}

inline bool is_directive(const Term& t) { return t.is_callable(":-", 1); }

/// Replays a `:- op(...)` directive against the table, as both the reader and
/// the writer must do between clauses. Non-op directives are ignored.
/// Returns false only for an op/3 goal that is malformed.
inline bool replay_directive(OpTable& ops, const Term& t) {
  if (!is_directive(t)) return true;
  const Term& goal = t.args()[0];
  if (!goal.is_callable("op", 3)) return true;
  return apply_op_goal(ops, goal);
}

}  // namespace pca
