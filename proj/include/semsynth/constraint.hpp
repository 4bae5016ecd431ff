// Copyright 2026 The semsynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMSYNTH_CONSTRAINT_HPP_
#define SEMSYNTH_CONSTRAINT_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semsynth/expr.hpp"
#include "semsynth/grammar.hpp"
#include "semsynth/sexpr.hpp"

namespace semsynth {

enum class RuleKind : std::uint8_t { Plain, Guarded, Recursive };

inline const char* rule_kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::Plain:
      return "plain";
    case RuleKind::Guarded:
      return "guarded";
    case RuleKind::Recursive:
      return "recursive";
  }
  return "?";
}

// Semantic constraint of one production. Child positions are 1-based in
// expressions (y_j) and 0-based in `perm` and `flows`.
//
//   Plain:     one rule; guard is constant true.
//   Guarded:   `output` applies when the guard holds, `alt_output` otherwise.
//   Recursive: when the guard holds the rule feeds `rec_flow` to a call of
//              the whole term (output y_{n+1}) and returns `output`; when it
//              fails it returns `alt_output`.
//
// Flows are shared by both rules of a pair.
struct Constraint {
  std::size_t production = 0;
  RuleKind kind = RuleKind::Plain;
  std::vector<std::size_t> perm;
  std::vector<SlotExpr> flows;
  SlotExpr guard;
  SlotExpr output;
  SlotExpr alt_output;
  SlotExpr rec_flow;

  std::size_t rank() const { return flows.size(); }

  // Node count over every expression the constraint carries.
  std::size_t size() const {
    std::size_t s = output.size();
    for (const auto& f : flows) s += f.size();
    if (kind != RuleKind::Plain) s += guard.size() + alt_output.size();
    if (kind == RuleKind::Recursive) s += rec_flow.size();
    return s;
  }

  friend bool operator==(const Constraint& a, const Constraint& b) {
    if (a.production != b.production || a.kind != b.kind || a.perm != b.perm || a.flows != b.flows ||
        !(a.output == b.output)) {
      return false;
    }
    if (a.kind == RuleKind::Plain) return true;
    if (!(a.guard == b.guard) || !(a.alt_output == b.alt_output)) return false;
    return a.kind != RuleKind::Recursive || a.rec_flow == b.rec_flow;
  }
  friend bool operator!=(const Constraint& a, const Constraint& b) { return !(a == b); }
};

inline std::vector<std::size_t> identity_perm(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline SlotExpr true_slot() { return scalar_slot(ex::bool_const(true)); }

// Variables visible to the production's expressions: x0 and y_1..y_n, plus
// y_{n+1} (the self call) for recursive rules.
inline VarScope rule_scope(const Grammar& g, std::size_t prod, bool with_self) {
  const Production& p = g.production(prod);
  VarScope s;
  s.input = g.nonterminal(p.lhs).input;
  for (std::size_t c : p.rhs) s.outs.push_back(g.nonterminal(c).output);
  if (with_self) s.outs.push_back(g.nonterminal(p.lhs).output);
  return s;
}

// Checks typing and the scoping discipline: the flow of the k-th evaluated
// child reads x0 and outputs of children evaluated before it (or only x0 when
// sibling flow is disallowed); the guard, outputs and the self-call flow read
// x0 and y_1..y_n; the recursive output may also read y_{n+1}.
// Returns an empty string when well formed, otherwise a diagnostic.
inline std::string validate_constraint(const Constraint& c, const Grammar& g, bool allow_sibling_flow = true) {
  const Production& p = g.production(c.production);
  const std::size_t n = p.rank();
  if (c.flows.size() != n || c.perm.size() != n) return "flow/permutation arity differs from production rank";
  std::vector<std::size_t> sorted = c.perm;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != identity_perm(n)) return "perm is not a permutation";
  if (c.kind == RuleKind::Recursive && !p.recursive) return "recursive constraint for a non-recursive production";
  auto reads_only = [](const SlotExpr& s, const std::vector<bool>& ok) {
    for (std::size_t j = 1; j <= 64; ++j) {
      if (s.reads_out(j) && (j >= ok.size() || !ok[j])) return false;
    }
    return true;
  };
  std::vector<bool> visible(n + 2, false);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t child = c.perm[k];
    const SlotExpr& f = c.flows[child];
    if (!(f.type == g.nonterminal(p.rhs[child]).input)) return "flow " + std::to_string(child + 1) + " mistyped";
    std::vector<bool> ok = allow_sibling_flow ? visible : std::vector<bool>(n + 2, false);
    if (!reads_only(f, ok)) return "flow " + std::to_string(child + 1) + " reads a child not yet evaluated";
    visible[child + 1] = true;
  }
  const ValueType& out_t = g.nonterminal(p.lhs).output;
  if (!(c.output.type == out_t)) return "output mistyped";
  if (c.kind == RuleKind::Plain) return reads_only(c.output, visible) ? "" : "output reads an unknown child";
  if (!c.guard.type.is_bool()) return "guard is not boolean";
  if (!reads_only(c.guard, visible)) return "guard reads an unknown child";
  if (!(c.alt_output.type == out_t)) return "alternative output mistyped";
  if (!reads_only(c.alt_output, visible)) return "alternative output reads an unknown child";
  if (c.kind == RuleKind::Guarded) return reads_only(c.output, visible) ? "" : "output reads an unknown child";
  if (!(c.rec_flow.type == g.nonterminal(p.lhs).input)) return "self-call flow mistyped";
  if (!reads_only(c.rec_flow, visible)) return "self-call flow reads an unknown child";
  visible[n + 1] = true;
  return reads_only(c.output, visible) ? "" : "recursive output reads an unknown child";
}

// A learned or reference semantics: one constraint per production.
struct Semantics {
  std::string language;
  std::map<std::size_t, Constraint> rules;

  const Constraint* find(std::size_t prod) const {
    auto it = rules.find(prod);
    return it == rules.end() ? nullptr : &it->second;
  }
  bool covers(std::size_t prod) const { return rules.count(prod) != 0; }

  friend bool operator==(const Semantics& a, const Semantics& b) {
    return a.language == b.language && a.rules == b.rules;
  }
};

inline std::string sem_relation(const Grammar& g, std::size_t nt) { return "Sem_" + g.nonterminal(nt).name; }

namespace detail {

inline std::string head_term(const Production& p) {
  std::string s = "(" + p.op;
  for (std::size_t i = 0; i < p.rank(); ++i) s += " t" + std::to_string(i + 1);
  return s + ")";
}

inline std::string emit_block(const Grammar& g, const Constraint& c, const char* tag, const SlotExpr& out,
                              const std::string& guard, bool self_call) {
  const Production& p = g.production(c.production);
  const std::size_t n = p.rank();
  std::string s = "(rule";
  if (tag) s += std::string(" ") + tag;
  s += "\n  (head " + sem_relation(g, p.lhs) + " " + head_term(p) + " x0 y0)\n  (body";
  for (std::size_t child : c.perm) {
    std::string j = std::to_string(child + 1);
    s += "\n    (child " + sem_relation(g, p.rhs[child]) + " t" + j + " x" + j + " y" + j + ")";
  }
  if (self_call) {
    std::string j = std::to_string(n + 1);
    s += "\n    (child " + sem_relation(g, p.lhs) + " " + head_term(p) + " x" + j + " y" + j + ")";
  }
  for (std::size_t child : c.perm) {
    s += "\n    (flow " + std::to_string(child + 1) + " " + print_slot(c.flows[child]) + ")";
  }
  if (self_call) s += "\n    (flow " + std::to_string(n + 1) + " " + print_slot(c.rec_flow) + ")";
  s += "\n    (out " + print_slot(out) + ")\n    (guard " + guard + ")))\n";
  return s;
}

}  // namespace detail

// Serializes one constraint as one rule block, or two for guarded and
// recursive constraints.
inline std::string emit_constraint(const Grammar& g, const Constraint& c) {
  switch (c.kind) {
    case RuleKind::Plain:
      return detail::emit_block(g, c, nullptr, c.output, "true", false);
    case RuleKind::Guarded: {
      std::string p = print_slot(c.guard);
      return detail::emit_block(g, c, ":then", c.output, p, false) +
             detail::emit_block(g, c, ":else", c.alt_output, "(not " + p + ")", false);
    }
    case RuleKind::Recursive: {
      std::string p = print_slot(c.guard);
      return detail::emit_block(g, c, ":nonrec", c.alt_output, "(not " + p + ")", false) +
             detail::emit_block(g, c, ":rec", c.output, p, true);
    }
  }
  return "";
}

// Productions appear in grammar order.
inline std::string emit_chc(const Semantics& sem, const Grammar& g) {
  std::string s = "(semantics :language " + (sem.language.empty() ? std::string("unknown") : sem.language) +
                  " :format 1)\n";
  for (const auto& [prod, c] : sem.rules) s += "\n" + emit_constraint(g, c);
  return s;
}

namespace detail {

struct ParsedBlock {
  std::string tag;
  std::size_t production = 0;
  std::vector<std::size_t> perm;
  std::map<std::size_t, const SExpr*> flows;  // child position (1-based) -> expr
  const SExpr* out = nullptr;
  const SExpr* guard = nullptr;
  bool self_call = false;
  std::size_t line = 0;
};

[[noreturn]] inline void chc_fail(std::size_t line, const std::string& msg) {
  throw ParseError("parse error at line " + std::to_string(line) + ": " + msg);
}

inline ParsedBlock read_block(const SExpr& r, const Grammar& g) {
  ParsedBlock b;
  b.line = r.line;
  std::size_t at = 1;
  if (at < r.items.size() && r.items[at].is_keyword()) b.tag = r.items[at++].atom;
  if (r.items.size() != at + 2 || !r.items[at].has_head("head") || !r.items[at + 1].has_head("body")) {
    chc_fail(r.line, "expected (rule [tag] (head ...) (body ...))");
  }
  const SExpr& head = r.items[at];
  if (head.items.size() != 5 || !head.items[2].is_list() || head.items[2].items.empty()) {
    chc_fail(head.line, "expected (head Sem_A (op t1 ..) x0 y0)");
  }
  auto prod = g.find_production(head.items[2].items[0].atom);
  if (!prod) chc_fail(head.line, "unknown production " + head.items[2].items[0].atom);
  b.production = *prod;
  const Production& p = g.production(*prod);
  if (!head.items[1].is_symbol(sem_relation(g, p.lhs))) chc_fail(head.line, "head relation does not match " + p.op);
  const std::size_t n = p.rank();
  for (std::size_t i = 1; i < r.items[at + 1].items.size(); ++i) {
    const SExpr& item = r.items[at + 1].items[i];
    if (item.has_head("child")) {
      if (item.items.size() != 5) chc_fail(item.line, "expected (child Sem_A t xi yi)");
      if (item.items[2].is_list()) {
        b.self_call = true;
        continue;
      }
      std::int64_t j = 0;
      const std::string& tv = item.items[2].atom;
      if (tv.size() < 2 || tv[0] != 't' || !parse_int_atom(tv.substr(1), j) || j < 1 ||
          static_cast<std::size_t>(j) > n) {
        chc_fail(item.line, "bad child term variable " + tv);
      }
      b.perm.push_back(static_cast<std::size_t>(j - 1));
    } else if (item.has_head("flow")) {
      std::int64_t j = 0;
      if (item.items.size() != 3 || !item.items[1].is_atom || !parse_int_atom(item.items[1].atom, j) || j < 1 ||
          static_cast<std::size_t>(j) > n + 1) {
        chc_fail(item.line, "expected (flow <child> <expr>)");
      }
      b.flows[static_cast<std::size_t>(j)] = &item.items[2];
    } else if (item.has_head("out")) {
      if (item.items.size() != 2) chc_fail(item.line, "expected (out <expr>)");
      b.out = &item.items[1];
    } else if (item.has_head("guard")) {
      if (item.items.size() != 2) chc_fail(item.line, "expected (guard <expr>)");
      b.guard = &item.items[1];
    } else {
      chc_fail(item.line, "unknown body item " + print_sexpr(item));
    }
  }
  if (!b.out || !b.guard) chc_fail(r.line, "rule body lacks out or guard");
  return b;
}

}  // namespace detail

inline Semantics parse_chc(std::string_view text, const Grammar& g) {
  using detail::chc_fail;
  auto top = parse_sexprs(text);
  if (top.empty() || !top[0].has_head("semantics")) throw ParseError("parse error: missing (semantics ...) header");
  Semantics sem;
  const SExpr& hdr = top[0];
  for (std::size_t i = 1; i + 1 < hdr.items.size(); i += 2) {
    if (hdr.items[i].is_symbol(":language")) sem.language = hdr.items[i + 1].atom;
    if (hdr.items[i].is_symbol(":format") && !hdr.items[i + 1].is_symbol("1")) {
      chc_fail(hdr.line, "unsupported format " + hdr.items[i + 1].atom);
    }
  }
  std::map<std::size_t, std::vector<detail::ParsedBlock>> blocks;
  for (std::size_t i = 1; i < top.size(); ++i) {
    if (!top[i].has_head("rule")) chc_fail(top[i].line, "expected (rule ...)");
    auto b = detail::read_block(top[i], g);
    blocks[b.production].push_back(std::move(b));
  }
  for (auto& [prod, bs] : blocks) {
    const Production& p = g.production(prod);
    const std::size_t n = p.rank();
    const ValueType& out_t = g.nonterminal(p.lhs).output;
    Constraint c;
    c.production = prod;
    const detail::ParsedBlock* main = &bs[0];
    const detail::ParsedBlock* alt = nullptr;
    if (bs.size() == 1) {
      if (!bs[0].tag.empty()) chc_fail(bs[0].line, "lone tagged rule for " + p.op);
      c.kind = RuleKind::Plain;
    } else if (bs.size() == 2) {
      auto find = [&](const char* tag) -> const detail::ParsedBlock* {
        for (const auto& b : bs) {
          if (b.tag == tag) return &b;
        }
        return nullptr;
      };
      if (find(":then") && find(":else")) {
        c.kind = RuleKind::Guarded;
        main = find(":then");
        alt = find(":else");
      } else if (find(":rec") && find(":nonrec")) {
        c.kind = RuleKind::Recursive;
        main = find(":rec");
        alt = find(":nonrec");
      } else {
        chc_fail(bs[0].line, "rule pair for " + p.op + " needs :then/:else or :rec/:nonrec tags");
      }
    } else {
      chc_fail(bs[0].line, "too many rules for " + p.op);
    }
    c.perm = main->perm;
    if (c.perm.size() != n) chc_fail(main->line, "rule for " + p.op + " lists the wrong number of children");
    VarScope scope = rule_scope(g, prod, false);
    for (std::size_t j = 1; j <= n; ++j) {
      auto it = main->flows.find(j);
      if (it == main->flows.end()) chc_fail(main->line, "missing flow " + std::to_string(j));
      c.flows.push_back(parse_slot(*it->second, g.nonterminal(p.rhs[j - 1]).input, scope));
    }
    if (c.kind == RuleKind::Plain) {
      c.guard = true_slot();
      if (!main->guard->is_symbol("true")) chc_fail(main->line, "untagged rule must have guard true");
      c.output = parse_slot(*main->out, out_t, scope);
    } else {
      if (alt->perm != c.perm) chc_fail(alt->line, "paired rules disagree on evaluation order");
      c.guard = parse_slot(*main->guard, ValueType::boolean(), scope);
      const SExpr& ng = *alt->guard;
      if (!ng.has_head("not") || ng.items.size() != 2 ||
          !(parse_slot(ng.items[1], ValueType::boolean(), scope) == c.guard)) {
        chc_fail(alt->line, "paired rule guard must be the negation of " + print_slot(c.guard));
      }
      c.alt_output = parse_slot(*alt->out, out_t, scope);
      if (c.kind == RuleKind::Guarded) {
        c.output = parse_slot(*main->out, out_t, scope);
      } else {
        if (!main->self_call) chc_fail(main->line, "recursive rule lacks the self call");
        auto it = main->flows.find(n + 1);
        if (it == main->flows.end()) chc_fail(main->line, "recursive rule lacks the self-call flow");
        c.rec_flow = parse_slot(*it->second, g.nonterminal(p.lhs).input, scope);
        c.output = parse_slot(*main->out, out_t, rule_scope(g, prod, true));
      }
    }
    std::string err = validate_constraint(c, g);
    if (!err.empty()) chc_fail(main->line, "ill-formed rule for " + p.op + ": " + err);
    sem.rules.emplace(prod, std::move(c));
  }
  return sem;
}

}  // namespace semsynth

#endif  // SEMSYNTH_CONSTRAINT_HPP_
