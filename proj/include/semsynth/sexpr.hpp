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

#ifndef SEMSYNTH_SEXPR_HPP_
#define SEMSYNTH_SEXPR_HPP_

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "semsynth/value.hpp"

namespace semsynth {

class ParseError : public Error {
 public:
  using Error::Error;
};

// Minimal s-expression tree: an atom or a parenthesized list. Line numbers
// are kept for diagnostics only.
struct SExpr {
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1;

  bool is_list() const { return !is_atom; }
  bool is_symbol(std::string_view s) const { return is_atom && atom == s; }
  bool is_keyword() const { return is_atom && !atom.empty() && atom[0] == ':'; }
  // True for a list whose head atom equals `head`.
  bool has_head(std::string_view head) const {
    return is_list() && !items.empty() && items[0].is_symbol(head);
  }
};

namespace detail {

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

 private:
  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    SExpr node;
    node.line = line_;
    char c = text_[pos_];
    if (c == ')') fail("unexpected ')'");
    if (c == '(') {
      ++pos_;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) fail("unterminated list opened on line " + std::to_string(node.line));
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        node.items.push_back(read());
      }
      return node;
    }
    node.is_atom = true;
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
      ++pos_;
    }
    node.atom = std::string(text_.substr(start, pos_ - start));
    return node;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("parse error at line " + std::to_string(line_) + ": " + msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace detail

inline std::vector<SExpr> parse_sexprs(std::string_view text) {
  return detail::SExprReader(text).read_all();
}

// Parses exactly one top-level s-expression.
inline SExpr parse_sexpr(std::string_view text) {
  auto all = parse_sexprs(text);
  if (all.size() != 1) {
    throw ParseError("parse error: expected one s-expression, found " + std::to_string(all.size()));
  }
  return std::move(all[0]);
}

inline std::string print_sexpr(const SExpr& e) {
  if (e.is_atom) return e.atom;
  std::string s = "(";
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) s += ' ';
    s += print_sexpr(e.items[i]);
  }
  return s + ")";
}

inline ValueType parse_value_type(const SExpr& e) {
  if (e.is_symbol("int")) return ValueType::integer();
  if (e.is_symbol("bool")) return ValueType::boolean();
  if (e.has_head("tuple")) {
    std::vector<Scalar> elems;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      if (e.items[i].is_symbol("int")) {
        elems.push_back(Scalar::Int);
      } else if (e.items[i].is_symbol("bool")) {
        elems.push_back(Scalar::Bool);
      } else {
        throw ParseError("parse error at line " + std::to_string(e.line) +
                         ": tuple elements must be int or bool");
      }
    }
    return ValueType::tuple(std::move(elems));
  }
  throw ParseError("parse error at line " + std::to_string(e.line) + ": bad type " + print_sexpr(e));
}

// Parses an integer atom; returns false if the atom is not a decimal integer.
inline bool parse_int_atom(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
  }
  try {
    out = std::stoll(s);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace semsynth

#endif  // SEMSYNTH_SEXPR_HPP_
