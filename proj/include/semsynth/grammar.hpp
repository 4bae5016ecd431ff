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

#ifndef SEMSYNTH_GRAMMAR_HPP_
#define SEMSYNTH_GRAMMAR_HPP_

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semsynth/sexpr.hpp"
#include "semsynth/value.hpp"

namespace semsynth {

struct Nonterminal {
  std::string name;
  ValueType input;
  ValueType output;
};

struct Production {
  std::size_t id = 0;
  std::size_t lhs = 0;
  std::string op;
  std::vector<std::size_t> rhs;
  bool recursive = false;

  std::size_t rank() const { return rhs.size(); }
};

// A typed regular tree grammar. Every operator symbol names exactly one
// production, which makes term typing unambiguous.
class Grammar {
 public:
  const std::vector<Nonterminal>& nonterminals() const { return nts_; }
  const std::vector<Production>& productions() const { return prods_; }
  const Nonterminal& nonterminal(std::size_t i) const { return nts_.at(i); }
  const Production& production(std::size_t i) const { return prods_.at(i); }
  std::size_t start() const { return start_; }

  std::optional<std::size_t> find_nonterminal(std::string_view name) const {
    for (std::size_t i = 0; i < nts_.size(); ++i) {
      if (nts_[i].name == name) return i;
    }
    return std::nullopt;
  }
  std::optional<std::size_t> find_production(std::string_view op) const {
    auto it = op_index_.find(std::string(op));
    if (it == op_index_.end()) return std::nullopt;
    return it->second;
  }

  const Nonterminal& lhs_of(std::size_t prod) const { return nts_[prods_.at(prod).lhs]; }
  const std::vector<std::size_t>& productions_of(std::size_t nt) const { return by_lhs_.at(nt); }

  // Height of the shortest term rooted at the production (nullary = 1).
  std::size_t min_height(std::size_t prod) const { return prod_height_.at(prod); }
  std::size_t nonterminal_min_height(std::size_t nt) const { return nt_height_.at(nt); }

  friend Grammar load_grammar(std::string_view text);

 private:
  void finish() {
    by_lhs_.assign(nts_.size(), {});
    for (const auto& p : prods_) by_lhs_[p.lhs].push_back(p.id);
    constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
    nt_height_.assign(nts_.size(), kInf);
    prod_height_.assign(prods_.size(), kInf);
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& p : prods_) {
        std::size_t h = 1;
        for (std::size_t c : p.rhs) {
          if (nt_height_[c] == kInf) {
            h = kInf;
            break;
          }
          h = std::max(h, nt_height_[c] + 1);
        }
        if (h < prod_height_[p.id]) {
          prod_height_[p.id] = h;
          changed = true;
        }
        if (h < nt_height_[p.lhs]) {
          nt_height_[p.lhs] = h;
          changed = true;
        }
      }
    }
    for (std::size_t i = 0; i < nts_.size(); ++i) {
      if (nt_height_[i] == kInf) throw Error("unproductive nonterminal " + nts_[i].name);
    }
  }

  std::vector<Nonterminal> nts_;
  std::vector<Production> prods_;
  std::size_t start_ = 0;
  std::map<std::string, std::size_t> op_index_;
  std::vector<std::vector<std::size_t>> by_lhs_;
  std::vector<std::size_t> nt_height_;
  std::vector<std::size_t> prod_height_;
};

// Grammar text: (grammar (nt <name> :in <type> :out <type>)*
//                        (prod <lhs> <op> (<rhs>*) [:recursive])* (start <nt>))
inline Grammar load_grammar(std::string_view text) {
  SExpr root = parse_sexpr(text);
  if (!root.has_head("grammar")) throw ParseError("parse error: expected (grammar ...)");
  Grammar g;
  auto fail = [](const SExpr& at, const std::string& msg) -> void {
    throw ParseError("parse error at line " + std::to_string(at.line) + ": " + msg);
  };
  auto lookup_nt = [&g](const SExpr& name) {
    if (!name.is_atom) throw ParseError("parse error: nonterminal name must be a symbol");
    auto idx = g.find_nonterminal(name.atom);
    if (!idx) throw Error("undeclared nonterminal " + name.atom);
    return *idx;
  };
  // Nonterminal declarations first so productions may reference any of them.
  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const SExpr& d = root.items[i];
    if (!d.has_head("nt")) continue;
    if (d.items.size() != 6 || !d.items[1].is_atom || !d.items[2].is_symbol(":in") ||
        !d.items[4].is_symbol(":out")) {
      fail(d, "expected (nt <name> :in <type> :out <type>)");
    }
    if (g.find_nonterminal(d.items[1].atom)) throw Error("duplicate nonterminal " + d.items[1].atom);
    g.nts_.push_back({d.items[1].atom, parse_value_type(d.items[3]), parse_value_type(d.items[5])});
  }
  std::map<std::string, std::size_t> seen_rank;
  bool have_start = false;
  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const SExpr& d = root.items[i];
    if (d.has_head("nt")) continue;
    if (d.has_head("prod")) {
      if (d.items.size() < 4 || d.items.size() > 5 || !d.items[2].is_atom || !d.items[3].is_list()) {
        fail(d, "expected (prod <lhs> <op> (<rhs>*) [:recursive])");
      }
      Production p;
      p.id = g.prods_.size();
      p.lhs = lookup_nt(d.items[1]);
      p.op = d.items[2].atom;
      for (const SExpr& r : d.items[3].items) p.rhs.push_back(lookup_nt(r));
      if (d.items.size() == 5) {
        if (!d.items[4].is_symbol(":recursive")) fail(d, "unknown production flag " + print_sexpr(d.items[4]));
        p.recursive = true;
      }
      auto it = seen_rank.find(p.op);
      if (it != seen_rank.end()) {
        if (it->second != p.rank()) throw Error("rank mismatch for operator " + p.op);
        throw Error("ambiguous grammar: operator " + p.op + " names two productions");
      }
      seen_rank[p.op] = p.rank();
      g.op_index_[p.op] = p.id;
      g.prods_.push_back(std::move(p));
    } else if (d.has_head("start")) {
      if (d.items.size() != 2) fail(d, "expected (start <nt>)");
      g.start_ = lookup_nt(d.items[1]);
      have_start = true;
    } else {
      fail(d, "unknown grammar clause " + print_sexpr(d));
    }
  }
  if (g.nts_.empty()) throw Error("grammar declares no nonterminals");
  if (!have_start) throw Error("grammar has no start nonterminal");
  g.finish();
  return g;
}

inline std::string print_grammar(const Grammar& g) {
  std::string s = "(grammar\n";
  for (const auto& nt : g.nonterminals()) {
    s += "  (nt " + nt.name + " :in " + nt.input.to_string() + " :out " + nt.output.to_string() + ")\n";
  }
  for (const auto& p : g.productions()) {
    s += "  (prod " + g.nonterminal(p.lhs).name + " " + p.op + " (";
    for (std::size_t i = 0; i < p.rhs.size(); ++i) {
      if (i) s += ' ';
      s += g.nonterminal(p.rhs[i]).name;
    }
    s += ")";
    if (p.recursive) s += " :recursive";
    s += ")\n";
  }
  s += "  (start " + g.nonterminal(g.start()).name + "))\n";
  return s;
}

}  // namespace semsynth

#endif  // SEMSYNTH_GRAMMAR_HPP_
