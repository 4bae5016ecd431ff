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


#ifndef SEMSYNTH_ENUMERATE_HPP_
#define SEMSYNTH_ENUMERATE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "semsynth/deadline.hpp"
#include "semsynth/expr.hpp"
#include "semsynth/value.hpp"

namespace semsynth {

// Operators and constants available to the expression search.
struct ComponentGrammar {
  std::vector<ExprKind> int_ops;   // among Add, Sub, Mul, Div, Ite
  std::vector<ExprKind> bool_ops;  // among Lt, Le, EqE, Not, And, Or, Ite
  bool allow_sibling_flow = false;
  std::vector<std::int64_t> extra_consts;
  std::size_t max_expr_size = 9;

  bool has_int(ExprKind k) const { return std::find(int_ops.begin(), int_ops.end(), k) != int_ops.end(); }
  bool has_bool(ExprKind k) const { return std::find(bool_ops.begin(), bool_ops.end(), k) != bool_ops.end(); }

  void validate() const {
    if (max_expr_size < 1) throw Error("max_expr_size must be at least 1");
    for (ExprKind k : int_ops) {
      if (k != ExprKind::Add && k != ExprKind::Sub && k != ExprKind::Mul && k != ExprKind::Div &&
          k != ExprKind::Ite) {
        throw Error(std::string("operator ") + expr_op_name(k) + " is not an integer operator");
      }
    }
    for (ExprKind k : bool_ops) {
      if (k != ExprKind::Lt && k != ExprKind::Le && k != ExprKind::EqE && k != ExprKind::Not &&
          k != ExprKind::And && k != ExprKind::Or && k != ExprKind::Ite) {
        throw Error(std::string("operator ") + expr_op_name(k) + " is not a boolean operator");
      }
    }
  }
};

inline ComponentGrammar default_component_grammar() {
  ComponentGrammar cg;
  cg.int_ops = {ExprKind::Add, ExprKind::Sub, ExprKind::Mul};
  cg.bool_ops = {ExprKind::Lt, ExprKind::Le, ExprKind::EqE, ExprKind::Not, ExprKind::And, ExprKind::Or};
  return cg;
}

// Integer constants every search starts from, in tie-break order.
inline const std::vector<std::int64_t>& base_constants() {
  static const std::vector<std::int64_t> pool{0, 1, 2, -1};
  return pool;
}

inline ExprKind parse_op_name(const std::string& s) {
  static const std::pair<const char*, ExprKind> names[] = {
      {"+", ExprKind::Add},  {"add", ExprKind::Add}, {"-", ExprKind::Sub},   {"sub", ExprKind::Sub},
      {"*", ExprKind::Mul},  {"mul", ExprKind::Mul}, {"div", ExprKind::Div}, {"ite", ExprKind::Ite},
      {"<", ExprKind::Lt},   {"lt", ExprKind::Lt},   {"<=", ExprKind::Le},   {"le", ExprKind::Le},
      {"=", ExprKind::EqE},  {"eq", ExprKind::EqE},  {"not", ExprKind::Not}, {"and", ExprKind::And},
      {"or", ExprKind::Or}};
  for (const auto& [name, k] : names) {
    if (s == name) return k;
  }
  throw Error("unknown operator " + s);
}

// Overrides fields of `base` present in `j`: int_ops, bool_ops (names as
// printed in expressions), allow_sibling_flow, extra_consts, max_expr_size.
inline ComponentGrammar component_grammar_from_json(const nlohmann::json& j, ComponentGrammar base) {
  auto ops = [](const nlohmann::json& a) {
    std::vector<ExprKind> r;
    for (const auto& s : a) r.push_back(parse_op_name(s.get<std::string>()));
    return r;
  };
  if (j.contains("int_ops")) base.int_ops = ops(j["int_ops"]);
  if (j.contains("bool_ops")) base.bool_ops = ops(j["bool_ops"]);
  if (j.contains("allow_sibling_flow")) base.allow_sibling_flow = j["allow_sibling_flow"].get<bool>();
  if (j.contains("extra_consts")) base.extra_consts = j["extra_consts"].get<std::vector<std::int64_t>>();
  if (j.contains("max_expr_size")) base.max_expr_size = j["max_expr_size"].get<std::size_t>();
  base.validate();
  return base;
}

inline nlohmann::ordered_json component_grammar_to_json(const ComponentGrammar& cg) {
  nlohmann::ordered_json j;
  j["int_ops"] = nlohmann::ordered_json::array();
  for (ExprKind k : cg.int_ops) j["int_ops"].push_back(expr_op_name(k));
  j["bool_ops"] = nlohmann::ordered_json::array();
  for (ExprKind k : cg.bool_ops) j["bool_ops"].push_back(expr_op_name(k));
  j["allow_sibling_flow"] = cg.allow_sibling_flow;
  j["extra_consts"] = cg.extra_consts;
  j["max_expr_size"] = cg.max_expr_size;
  return j;
}

// A variable leaf with its raw cell on every valuation row (arith::kFault
// where the variable is unavailable).
struct Leaf {
  ExprPtr expr;
  std::vector<std::int64_t> cells;
};

struct BankOptions {
  bool allow_div = true;
  std::size_t max_entries = 200000;        // per scalar type
  std::size_t max_work = 400'000'000;      // cell evaluations
  const Deadline* deadline = nullptr;      // polled while growing
};

// Bottom-up expression bank. Expressions are produced level by level in
// nondecreasing size; within a level by constructor order and then operand
// positions. With at least one row, an expression whose behaviour vector
// repeats an earlier one is dropped (observational equivalence). Mirrors of
// commutative operators are never built: for equal-size operands the earlier
// non-constant one goes left, otherwise the larger one does.
class ExprBank {
 public:
  struct Entry {
    ExprPtr expr;
    std::size_t size;
    bool constant;
  };

  ExprBank(const ComponentGrammar& cg, std::vector<Leaf> leaves, std::vector<std::int64_t> int_consts,
           std::size_t rows, BankOptions opts = {})
      : cg_(cg), leaves_(std::move(leaves)), consts_(std::move(int_consts)), rows_(rows), opts_(opts),
        types_{TypeBank(this), TypeBank(this)} {
    for (const Leaf& l : leaves_) {
      if (l.cells.size() != rows_) throw Error("leaf row count differs from bank row count");
    }
  }

  ExprBank(const ExprBank&) = delete;
  ExprBank& operator=(const ExprBank&) = delete;

  std::size_t rows() const { return rows_; }
  std::size_t grown() const { return grown_; }
  // True once a budget stopped growth early; the bank is then incomplete.
  bool saturated() const { return saturated_; }

  // Builds every level up to and including `size`.
  void grow_to(std::size_t size) {
    size = std::min(size, cg_.max_expr_size);
    while (grown_ < size && !saturated_) {
      ++grown_;
      for (auto& tb : types_) tb.level_start.push_back(tb.entries.size());
      if (grown_ == 1) {
        build_leaves();
      } else {
        build_level(grown_);
      }
    }
  }

  std::size_t count(Scalar t) const { return bank(t).entries.size(); }
  const Entry& entry(Scalar t, std::size_t i) const { return bank(t).entries[i]; }
  const std::int64_t* vec(Scalar t, std::size_t i) const { return bank(t).cells.data() + i * rows_; }

  // First entry with exactly this behaviour, or -1.
  long find(Scalar t, const std::vector<std::int64_t>& target) const {
    const TypeBank& tb = bank(t);
    if (target.size() != rows_) return -1;
    if (rows_ == 0) return tb.entries.empty() ? -1 : 0;
    auto& mut = const_cast<TypeBank&>(tb);
    mut.cells.insert(mut.cells.end(), target.begin(), target.end());
    std::size_t probe = tb.entries.size();
    auto it = tb.index.find(probe);
    long r = it == tb.index.end() ? -1 : static_cast<long>(*it);
    mut.cells.resize(probe * rows_);
    return r;
  }

  // Entries in yield order across both types: (type, index).
  const std::vector<std::pair<Scalar, std::size_t>>& order() const { return order_; }

 private:
  struct TypeBank;
  struct VecHash {
    const TypeBank* tb;
    std::size_t operator()(std::size_t i) const;
  };
  struct VecEq {
    const TypeBank* tb;
    bool operator()(std::size_t a, std::size_t b) const;
  };
  struct TypeBank {
    explicit TypeBank(const ExprBank* owner)
        : owner(owner), index(16, VecHash{this}, VecEq{this}) {}
    TypeBank(const TypeBank& o) : owner(o.owner), index(16, VecHash{this}, VecEq{this}) {}
    const ExprBank* owner;
    std::vector<Entry> entries;
    std::vector<std::int64_t> cells;           // rows_ cells per entry, plus one scratch slot
    std::vector<std::size_t> level_start;      // level_start[s-1] = first index of size s
    std::unordered_set<std::size_t, VecHash, VecEq> index;
  };

  TypeBank& bank(Scalar t) { return types_[t == Scalar::Int ? 0 : 1]; }
  const TypeBank& bank(Scalar t) const { return types_[t == Scalar::Int ? 0 : 1]; }

  // [begin, end) of entries of size s.
  std::pair<std::size_t, std::size_t> level(const TypeBank& tb, std::size_t s) const {
    if (s < 1 || s > tb.level_start.size()) return {0, 0};
    std::size_t b = tb.level_start[s - 1];
    std::size_t e = s < tb.level_start.size() ? tb.level_start[s] : tb.entries.size();
    return {b, e};
  }

  std::int64_t* scratch(TypeBank& tb) {
    tb.cells.resize((tb.entries.size() + 1) * rows_);
    return tb.cells.data() + tb.entries.size() * rows_;
  }

  // Keeps the behaviour just written to the scratch slot unless it repeats.
  template <typename Make>
  void commit(Scalar t, std::size_t size, bool constant, Make make) {
    TypeBank& tb = bank(t);
    std::size_t i = tb.entries.size();
    if (rows_ > 0 && tb.index.count(i)) {
      tb.cells.resize(i * rows_);
      return;
    }
    if (tb.entries.size() >= opts_.max_entries) {
      tb.cells.resize(i * rows_);
      saturated_ = true;
      return;
    }
    tb.entries.push_back(Entry{make(), size, constant});
    if (rows_ > 0) tb.index.insert(i);
    order_.emplace_back(t, i);
  }

  bool spend(std::size_t n) {
    if (opts_.deadline && (++polls_ & 0xfff) == 0) opts_.deadline->check();
    work_ += n;
    if (work_ > opts_.max_work) saturated_ = true;
    return !saturated_;
  }

  void build_leaves() {
    for (std::int64_t c : consts_) {
      std::int64_t* out = scratch(bank(Scalar::Int));
      std::fill(out, out + rows_, c);
      commit(Scalar::Int, 1, true, [c] { return ex::int_const(c); });
    }
    for (bool b : {false, true}) {
      std::int64_t* out = scratch(bank(Scalar::Bool));
      std::fill(out, out + rows_, b ? 1 : 0);
      commit(Scalar::Bool, 1, true, [b] { return ex::bool_const(b); });
    }
    for (const Leaf& l : leaves_) {
      std::int64_t* out = scratch(bank(l.expr->type));
      std::copy(l.cells.begin(), l.cells.end(), out);
      commit(l.expr->type, 1, false, [&l] { return l.expr; });
    }
  }

  static bool commutative(ExprKind k) {
    return k == ExprKind::Add || k == ExprKind::Mul || k == ExprKind::EqE || k == ExprKind::And ||
           k == ExprKind::Or;
  }

  static bool canonical(const Entry& a, std::size_t ia, const Entry& b, std::size_t ib) {
    if (a.size != b.size) return a.size > b.size;
    if (a.constant != b.constant) return !a.constant;
    return ia <= ib;
  }

  void binary(ExprKind k, Scalar arg, Scalar res, std::size_t s) {
    if (s < 3) return;
    for (std::size_t ls = 1; ls + 2 <= s; ++ls) {
      std::size_t rs = s - 1 - ls;
      const TypeBank& ab = bank(arg);
      auto [a0, a1] = level(ab, ls);
      auto [b0, b1] = level(ab, rs);
      for (std::size_t a = a0; a < a1; ++a) {
        for (std::size_t b = b0; b < b1; ++b) {
          if (saturated_) return;
          if (commutative(k) && !canonical(ab.entries[a], a, ab.entries[b], b)) continue;
          if (!spend(rows_ + 1)) return;
          std::int64_t* out = scratch(bank(res));
          // Re-read operand rows after scratch() may have reallocated res.
          const std::int64_t* va = vec(arg, a);
          const std::int64_t* vb = vec(arg, b);
          for (std::size_t r = 0; r < rows_; ++r) out[r] = apply_binary(k, va[r], vb[r]);
          commit(res, s, false, [&] { return ex::make(k, res, {ab.entries[a].expr, ab.entries[b].expr}); });
        }
      }
    }
  }

  void ite(Scalar t, std::size_t s) {
    if (s < 4) return;
    const TypeBank& cb = bank(Scalar::Bool);
    const TypeBank& vb = bank(t);
    for (std::size_t sc = 1; sc + 3 <= s; ++sc) {
      for (std::size_t sa = 1; sc + sa + 2 <= s; ++sa) {
        std::size_t sb = s - 1 - sc - sa;
        auto [c0, c1] = level(cb, sc);
        auto [a0, a1] = level(vb, sa);
        auto [b0, b1] = level(vb, sb);
        for (std::size_t c = c0; c < c1; ++c) {
          for (std::size_t a = a0; a < a1; ++a) {
            for (std::size_t b = b0; b < b1; ++b) {
              if (saturated_ || !spend(rows_ + 1)) return;
              std::int64_t* out = scratch(bank(t));
              const std::int64_t* vc = vec(Scalar::Bool, c);
              const std::int64_t* va = vec(t, a);
              const std::int64_t* vv = vec(t, b);
              for (std::size_t r = 0; r < rows_; ++r) out[r] = apply_ite(vc[r], va[r], vv[r]);
              commit(t, s, false, [&] {
                return ex::make(ExprKind::Ite, t, {cb.entries[c].expr, vb.entries[a].expr, vb.entries[b].expr});
              });
            }
          }
        }
      }
    }
  }

  void build_level(std::size_t s) {
    if (cg_.has_bool(ExprKind::Not)) {
      const TypeBank& bb = bank(Scalar::Bool);
      auto [a0, a1] = level(bb, s - 1);
      for (std::size_t a = a0; a < a1 && !saturated_; ++a) {
        if (!spend(rows_ + 1)) break;
        std::int64_t* out = scratch(bank(Scalar::Bool));
        const std::int64_t* va = vec(Scalar::Bool, a);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = apply_not(va[r]);
        commit(Scalar::Bool, s, false, [&] { return ex::not_(bb.entries[a].expr); });
      }
    }
    for (ExprKind k : {ExprKind::Add, ExprKind::Sub, ExprKind::Mul, ExprKind::Div}) {
      if (!cg_.has_int(k) || (k == ExprKind::Div && !opts_.allow_div)) continue;
      binary(k, Scalar::Int, Scalar::Int, s);
    }
    for (ExprKind k : {ExprKind::Lt, ExprKind::Le, ExprKind::EqE}) {
      if (cg_.has_bool(k)) binary(k, Scalar::Int, Scalar::Bool, s);
    }
    for (ExprKind k : {ExprKind::And, ExprKind::Or}) {
      if (cg_.has_bool(k)) binary(k, Scalar::Bool, Scalar::Bool, s);
    }
    if (cg_.has_int(ExprKind::Ite)) ite(Scalar::Int, s);
    if (cg_.has_bool(ExprKind::Ite)) ite(Scalar::Bool, s);
  }

  const ComponentGrammar& cg_;
  std::vector<Leaf> leaves_;
  std::vector<std::int64_t> consts_;
  std::size_t rows_;
  BankOptions opts_;
  TypeBank types_[2];
  std::vector<std::pair<Scalar, std::size_t>> order_;
  std::size_t grown_ = 0;
  std::size_t work_ = 0;
  std::size_t polls_ = 0;
  bool saturated_ = false;
};

inline std::size_t ExprBank::VecHash::operator()(std::size_t i) const {
  const std::size_t rows = tb->owner->rows_;
  const std::int64_t* v = tb->cells.data() + i * rows;
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t r = 0; r < rows; ++r) {
    h ^= static_cast<std::uint64_t>(v[r]);
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

inline bool ExprBank::VecEq::operator()(std::size_t a, std::size_t b) const {
  const std::size_t rows = tb->owner->rows_;
  const std::int64_t* va = tb->cells.data() + a * rows;
  const std::int64_t* vb = tb->cells.data() + b * rows;
  return std::equal(va, va + rows, vb);
}

// The expression stream over `vars` (leaves with their row cells) up to
// cg.max_expr_size, in yield order. Constants are the base pool followed by
// cg.extra_consts.
inline std::vector<ExprPtr> enumerate_exprs(const ComponentGrammar& cg, const std::vector<Leaf>& vars,
                                            std::size_t rows, BankOptions opts = {}) {
  std::vector<std::int64_t> consts = base_constants();
  for (std::int64_t c : cg.extra_consts) {
    if (std::find(consts.begin(), consts.end(), c) == consts.end()) consts.push_back(c);
  }
  ExprBank bank(cg, vars, consts, rows, opts);
  bank.grow_to(cg.max_expr_size);
  std::vector<ExprPtr> out;
  for (const auto& [t, i] : bank.order()) out.push_back(bank.entry(t, i).expr);
  return out;
}

}  // namespace semsynth

#endif  // SEMSYNTH_ENUMERATE_HPP_
