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

#ifndef SEMSYNTH_TERM_HPP_
#define SEMSYNTH_TERM_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semsynth/grammar.hpp"
#include "semsynth/sexpr.hpp"

namespace semsynth {

class TermError : public Error {
 public:
  using Error::Error;
};

// Immutable ranked tree whose nodes name grammar productions by id. Copies
// share structure; equality and hashing are structural.
class Term {
 public:
  Term() = default;
  Term(std::size_t production, std::vector<Term> children) {
    auto n = std::make_shared<Node>();
    n->production = production;
    std::uint64_t h = 0xcbf29ce484222325ull ^ (production * 0x100000001b3ull);
    std::size_t size = 1;
    std::size_t height = 0;
    for (const Term& c : children) {
      h = (h ^ c.hash()) * 0x100000001b3ull + 0x9e3779b97f4a7c15ull;
      size += c.size();
      height = std::max(height, c.height());
    }
    n->hash = static_cast<std::size_t>(h);
    n->size = size;
    n->height = height + 1;
    n->children = std::move(children);
    node_ = std::move(n);
  }

  bool empty() const { return node_ == nullptr; }
  std::size_t production() const { return node_->production; }
  const std::vector<Term>& children() const { return node_->children; }
  const Term& child(std::size_t i) const { return node_->children.at(i); }
  std::size_t rank() const { return node_->children.size(); }
  std::size_t hash() const { return node_ ? node_->hash : 0; }
  // Node count.
  std::size_t size() const { return node_ ? node_->size : 0; }
  // Leaves have height 1.
  std::size_t height() const { return node_ ? node_->height : 0; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    if (a.node_->hash != b.node_->hash || a.node_->production != b.node_->production ||
        a.node_->size != b.node_->size) {
      return false;
    }
    return a.node_->children == b.node_->children;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    std::size_t production = 0;
    std::vector<Term> children;
    std::size_t hash = 0;
    std::size_t size = 0;
    std::size_t height = 0;
  };
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

inline std::string print_term(const Term& t, const Grammar& g) {
  std::string s = "(" + g.production(t.production()).op;
  for (const Term& c : t.children()) s += " " + print_term(c, g);
  return s + ")";
}

namespace detail {

inline Term term_from_sexpr(const SExpr& e, const Grammar& g, std::optional<std::size_t> expected) {
  const SExpr* head = nullptr;
  std::size_t nkids = 0;
  if (e.is_atom) {
    head = &e;  // bare nullary operator
  } else {
    if (e.items.empty() || !e.items[0].is_atom) {
      throw ParseError("parse error at line " + std::to_string(e.line) + ": expected (<op> <term>*)");
    }
    head = &e.items[0];
    nkids = e.items.size() - 1;
  }
  auto pid = g.find_production(head->atom);
  if (!pid) throw TermError("unknown symbol " + head->atom);
  const Production& p = g.production(*pid);
  if (nkids != p.rank()) {
    throw TermError("arity mismatch: " + p.op + " expects " + std::to_string(p.rank()) +
                    " children, got " + std::to_string(nkids));
  }
  if (expected && *expected != p.lhs) {
    throw TermError("type mismatch: " + p.op + " derives " + g.nonterminal(p.lhs).name + ", expected " +
                    g.nonterminal(*expected).name);
  }
  std::vector<Term> kids;
  kids.reserve(nkids);
  for (std::size_t i = 0; i < nkids; ++i) kids.push_back(term_from_sexpr(e.items[i + 1], g, p.rhs[i]));
  return Term(*pid, std::move(kids));
}

}  // namespace detail

// Parses a term rooted at any nonterminal, or at `expected` when given.
inline Term parse_term(std::string_view text, const Grammar& g,
                       std::optional<std::size_t> expected = std::nullopt) {
  return detail::term_from_sexpr(parse_sexpr(text), g, expected);
}

inline std::size_t term_nonterminal(const Term& t, const Grammar& g) {
  if (t.empty() || t.production() >= g.productions().size()) throw TermError("untypeable term");
  return g.production(t.production()).lhs;
}

// True when the term is well-typed under g (every child derives the declared
// rhs nonterminal).
inline bool well_typed(const Term& t, const Grammar& g) {
  if (t.empty() || t.production() >= g.productions().size()) return false;
  const Production& p = g.production(t.production());
  if (t.rank() != p.rank()) return false;
  for (std::size_t i = 0; i < t.rank(); ++i) {
    if (!well_typed(t.child(i), g) || g.production(t.child(i).production()).lhs != p.rhs[i]) return false;
  }
  return true;
}

// Visits every node, parents before children.
template <typename F>
void for_each_subterm(const Term& t, F&& f) {
  f(t);
  for (const Term& c : t.children()) for_each_subterm(c, f);
}

}  // namespace semsynth

#endif  // SEMSYNTH_TERM_HPP_
