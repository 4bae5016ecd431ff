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

#ifndef SEMSYNTH_EXPR_HPP_
#define SEMSYNTH_EXPR_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semsynth/sexpr.hpp"
#include "semsynth/value.hpp"

namespace semsynth {

// Constructor order doubles as the enumeration tie-break order.
enum class ExprKind : std::uint8_t {
  ConstInt,
  ConstBool,
  VarIn0,
  VarIn0Comp,
  VarOut,
  VarOutComp,
  Not,
  Add,
  Sub,
  Mul,
  Div,
  Lt,
  Le,
  EqE,
  And,
  Or,
  Ite,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Scalar-typed expression over the rule variables: x0 (the rule input) and
// y1..yn (child outputs; y(n+1) is the self call of a recursive rule).
struct Expr {
  ExprKind kind = ExprKind::ConstInt;
  Scalar type = Scalar::Int;
  std::int64_t value = 0;    // constants
  std::uint16_t var = 0;     // child position j for VarOut*
  std::uint16_t comp = 0;    // tuple component for *Comp
  std::vector<ExprPtr> args;
  std::size_t size = 1;

  bool is_var() const {
    return kind == ExprKind::VarIn0 || kind == ExprKind::VarIn0Comp || kind == ExprKind::VarOut ||
           kind == ExprKind::VarOutComp;
  }
};

namespace ex {

inline ExprPtr make(ExprKind k, Scalar t, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->type = t;
  for (const auto& a : args) e->size += a->size;
  e->args = std::move(args);
  return e;
}
inline ExprPtr int_const(std::int64_t n) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::ConstInt;
  e->value = n;
  return e;
}
inline ExprPtr bool_const(bool b) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::ConstBool;
  e->type = Scalar::Bool;
  e->value = b ? 1 : 0;
  return e;
}
inline ExprPtr constant(Scalar t, std::int64_t cell) { return t == Scalar::Bool ? bool_const(cell != 0) : int_const(cell); }
inline ExprPtr in0(Scalar t) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::VarIn0;
  e->type = t;
  return e;
}
inline ExprPtr in0_comp(std::size_t i, Scalar t) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::VarIn0Comp;
  e->type = t;
  e->comp = static_cast<std::uint16_t>(i);
  return e;
}
inline ExprPtr out(std::size_t j, Scalar t) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::VarOut;
  e->type = t;
  e->var = static_cast<std::uint16_t>(j);
  return e;
}
inline ExprPtr out_comp(std::size_t j, std::size_t i, Scalar t) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::VarOutComp;
  e->type = t;
  e->var = static_cast<std::uint16_t>(j);
  e->comp = static_cast<std::uint16_t>(i);
  return e;
}
inline ExprPtr not_(ExprPtr a) { return make(ExprKind::Not, Scalar::Bool, {std::move(a)}); }
inline ExprPtr add(ExprPtr a, ExprPtr b) { return make(ExprKind::Add, Scalar::Int, {std::move(a), std::move(b)}); }
inline ExprPtr sub(ExprPtr a, ExprPtr b) { return make(ExprKind::Sub, Scalar::Int, {std::move(a), std::move(b)}); }
inline ExprPtr mul(ExprPtr a, ExprPtr b) { return make(ExprKind::Mul, Scalar::Int, {std::move(a), std::move(b)}); }
inline ExprPtr div(ExprPtr a, ExprPtr b) { return make(ExprKind::Div, Scalar::Int, {std::move(a), std::move(b)}); }
inline ExprPtr lt(ExprPtr a, ExprPtr b) { return make(ExprKind::Lt, Scalar::Bool, {std::move(a), std::move(b)}); }
inline ExprPtr le(ExprPtr a, ExprPtr b) { return make(ExprKind::Le, Scalar::Bool, {std::move(a), std::move(b)}); }
inline ExprPtr eq(ExprPtr a, ExprPtr b) { return make(ExprKind::EqE, Scalar::Bool, {std::move(a), std::move(b)}); }
inline ExprPtr and_(ExprPtr a, ExprPtr b) { return make(ExprKind::And, Scalar::Bool, {std::move(a), std::move(b)}); }
inline ExprPtr or_(ExprPtr a, ExprPtr b) { return make(ExprKind::Or, Scalar::Bool, {std::move(a), std::move(b)}); }
inline ExprPtr ite(ExprPtr c, ExprPtr a, ExprPtr b) {
  Scalar t = a->type;
  return make(ExprKind::Ite, t, {std::move(c), std::move(a), std::move(b)});
}

}  // namespace ex

inline bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.type != b.type || a.value != b.value || a.var != b.var || a.comp != b.comp ||
      a.args.size() != b.args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!expr_equal(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

// True when e reads child output j (any component).
inline bool expr_reads_out(const Expr& e, std::size_t j) {
  if ((e.kind == ExprKind::VarOut || e.kind == ExprKind::VarOutComp) && e.var == j) return true;
  for (const auto& a : e.args) {
    if (expr_reads_out(*a, j)) return true;
  }
  return false;
}

// Largest child position read by e; 0 when none.
inline std::size_t expr_max_out(const Expr& e) {
  std::size_t m = (e.kind == ExprKind::VarOut || e.kind == ExprKind::VarOutComp) ? e.var : 0;
  for (const auto& a : e.args) m = std::max(m, expr_max_out(*a));
  return m;
}

inline const char* expr_op_name(ExprKind k) {
  switch (k) {
    case ExprKind::Not:
      return "not";
    case ExprKind::Add:
      return "+";
    case ExprKind::Sub:
      return "-";
    case ExprKind::Mul:
      return "*";
    case ExprKind::Div:
      return "div";
    case ExprKind::Lt:
      return "<";
    case ExprKind::Le:
      return "<=";
    case ExprKind::EqE:
      return "=";
    case ExprKind::And:
      return "and";
    case ExprKind::Or:
      return "or";
    case ExprKind::Ite:
      return "ite";
    default:
      return "";
  }
}

inline std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::ConstInt:
      return std::to_string(e.value);
    case ExprKind::ConstBool:
      return e.value ? "true" : "false";
    case ExprKind::VarIn0:
      return "x0";
    case ExprKind::VarIn0Comp:
      return "x0." + std::to_string(e.comp);
    case ExprKind::VarOut:
      return "y" + std::to_string(e.var);
    case ExprKind::VarOutComp:
      return "y" + std::to_string(e.var) + "." + std::to_string(e.comp);
    default:
      break;
  }
  std::string s = "(";
  s += expr_op_name(e.kind);
  for (const auto& a : e.args) s += " " + print_expr(*a);
  return s + ")";
}

// Evaluation context: raw cells of x0 and of each child output. A missing
// child output (not evaluated, or evaluation failed) reads as a fault.
struct ExprEnv {
  const Value* in = nullptr;
  const std::vector<const Value*>* outs = nullptr;  // index j-1 holds y_j

  const Value* out(std::size_t j) const {
    if (!outs || j == 0 || j > outs->size()) return nullptr;
    return (*outs)[j - 1];
  }
};

// Applies a binary operator to two raw cells (bools as 0/1). A faulted
// operand faults the result; And and Or have no short circuit.
inline std::int64_t apply_binary(ExprKind k, std::int64_t a, std::int64_t b) {
  using arith::kFault;
  if (a == kFault || b == kFault) return kFault;
  std::optional<std::int64_t> r;
  switch (k) {
    case ExprKind::Add:
      r = arith::add(a, b);
      break;
    case ExprKind::Sub:
      r = arith::sub(a, b);
      break;
    case ExprKind::Mul:
      r = arith::mul(a, b);
      break;
    case ExprKind::Div:
      r = arith::div(a, b);
      break;
    case ExprKind::Lt:
      return a < b;
    case ExprKind::Le:
      return a <= b;
    case ExprKind::EqE:
      return a == b;
    case ExprKind::And:
      return a & b;
    case ExprKind::Or:
      return a | b;
    default:
      return kFault;
  }
  return r ? *r : kFault;
}

inline std::int64_t apply_not(std::int64_t a) { return a == arith::kFault ? a : 1 - a; }

// Only the selected branch matters; the other may fault freely.
inline std::int64_t apply_ite(std::int64_t c, std::int64_t a, std::int64_t b) {
  if (c == arith::kFault) return c;
  return c ? a : b;
}

// Evaluates to a raw cell (bools as 0/1); arith::kFault on division by zero,
// overflow, or a read of an unavailable output.
inline std::int64_t eval_cell(const Expr& e, const ExprEnv& env) {
  using arith::kFault;
  switch (e.kind) {
    case ExprKind::ConstInt:
    case ExprKind::ConstBool:
      return e.value;
    case ExprKind::VarIn0:
      return env.in->cell(0);
    case ExprKind::VarIn0Comp:
      return env.in->cell(e.comp);
    case ExprKind::VarOut: {
      const Value* v = env.out(e.var);
      return v ? v->cell(0) : kFault;
    }
    case ExprKind::VarOutComp: {
      const Value* v = env.out(e.var);
      return v ? v->cell(e.comp) : kFault;
    }
    case ExprKind::Not:
      return apply_not(eval_cell(*e.args[0], env));
    case ExprKind::Ite: {
      std::int64_t c = eval_cell(*e.args[0], env);
      if (c == kFault) return kFault;
      return eval_cell(*e.args[c ? 1 : 2], env);
    }
    default:
      return apply_binary(e.kind, eval_cell(*e.args[0], env), eval_cell(*e.args[1], env));
  }
}

// The expression (or tuple of component expressions) filling one value slot:
// a child input, the rule output, or a guard.
struct SlotExpr {
  ValueType type;
  std::vector<ExprPtr> comps;  // one per scalar component

  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& c : comps) s += c->size;
    return s;
  }
  bool reads_out(std::size_t j) const {
    for (const auto& c : comps) {
      if (expr_reads_out(*c, j)) return true;
    }
    return false;
  }
  std::size_t max_out() const {
    std::size_t m = 0;
    for (const auto& c : comps) m = std::max(m, expr_max_out(*c));
    return m;
  }
  // nullopt on any fault.
  std::optional<Value> eval(const ExprEnv& env) const {
    std::array<std::int64_t, kMaxArity> cells{};
    for (std::size_t i = 0; i < comps.size(); ++i) {
      cells[i] = eval_cell(*comps[i], env);
      if (cells[i] == arith::kFault) return std::nullopt;
    }
    return Value::from_cells(type, cells.data());
  }

  friend bool operator==(const SlotExpr& a, const SlotExpr& b) {
    if (!(a.type == b.type) || a.comps.size() != b.comps.size()) return false;
    for (std::size_t i = 0; i < a.comps.size(); ++i) {
      if (!expr_equal(*a.comps[i], *b.comps[i])) return false;
    }
    return true;
  }
};

inline SlotExpr scalar_slot(ExprPtr e) {
  SlotExpr s;
  s.type = e->type == Scalar::Bool ? ValueType::boolean() : ValueType::integer();
  s.comps.push_back(std::move(e));
  return s;
}

// Slot holding x0 or y_j unchanged (j = 0 means x0).
inline SlotExpr identity_slot(const ValueType& t, std::size_t j) {
  SlotExpr s;
  s.type = t;
  if (!t.is_tuple()) {
    s.comps.push_back(j == 0 ? ex::in0(t.scalar()) : ex::out(j, t.scalar()));
    return s;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    s.comps.push_back(j == 0 ? ex::in0_comp(i, t.component(i)) : ex::out_comp(j, i, t.component(i)));
  }
  return s;
}

// Tuples whose components are exactly x0.0..x0.k or yj.0..yj.k print as the
// bare variable.
inline std::string print_slot(const SlotExpr& s) {
  if (!s.type.is_tuple()) return print_expr(*s.comps[0]);
  if (s == identity_slot(s.type, 0)) return "x0";
  if (s.comps[0]->kind == ExprKind::VarOutComp && s == identity_slot(s.type, s.comps[0]->var)) {
    return "y" + std::to_string(s.comps[0]->var);
  }
  std::string r = "(tuple";
  for (const auto& c : s.comps) r += " " + print_expr(*c);
  return r + ")";
}

// Types of the variables visible to an expression.
struct VarScope {
  ValueType input;
  std::vector<ValueType> outs;  // index j-1 holds the type of y_j
};

namespace detail {

[[noreturn]] inline void expr_fail(const SExpr& at, const std::string& msg) {
  throw ParseError("parse error at line " + std::to_string(at.line) + ": " + msg);
}

// Parses a variable atom "x0", "x0.i", "yj", "yj.i"; false if not a variable.
inline bool parse_var_atom(const std::string& s, bool& is_in, std::size_t& j, std::optional<std::size_t>& comp) {
  if (s.size() < 2 || (s[0] != 'x' && s[0] != 'y')) return false;
  std::size_t dot = s.find('.');
  std::string idx = s.substr(1, dot == std::string::npos ? std::string::npos : dot - 1);
  std::int64_t n = 0;
  if (!parse_int_atom(idx, n) || n < 0 || idx[0] == '-') return false;
  is_in = s[0] == 'x';
  if (is_in && n != 0) return false;
  j = static_cast<std::size_t>(n);
  if (dot != std::string::npos) {
    std::int64_t c = 0;
    std::string cs = s.substr(dot + 1);
    if (!parse_int_atom(cs, c) || c < 0 || cs[0] == '-') return false;
    comp = static_cast<std::size_t>(c);
  }
  return true;
}

}  // namespace detail

inline ExprPtr parse_expr(const SExpr& e, const VarScope& scope) {
  using detail::expr_fail;
  if (e.is_atom) {
    if (e.atom == "true") return ex::bool_const(true);
    if (e.atom == "false") return ex::bool_const(false);
    std::int64_t n = 0;
    if (parse_int_atom(e.atom, n)) return ex::int_const(n);
    bool is_in = false;
    std::size_t j = 0;
    std::optional<std::size_t> comp;
    if (!detail::parse_var_atom(e.atom, is_in, j, comp)) expr_fail(e, "unknown expression atom " + e.atom);
    if (!is_in && (j == 0 || j > scope.outs.size())) expr_fail(e, "variable out of scope: " + e.atom);
    const ValueType& t = is_in ? scope.input : scope.outs[j - 1];
    if (!comp) {
      if (t.is_tuple()) expr_fail(e, "tuple variable " + e.atom + " used as a scalar");
      return is_in ? ex::in0(t.scalar()) : ex::out(j, t.scalar());
    }
    if (!t.is_tuple() || *comp >= t.arity()) expr_fail(e, "bad tuple component " + e.atom);
    return is_in ? ex::in0_comp(*comp, t.component(*comp)) : ex::out_comp(j, *comp, t.component(*comp));
  }
  if (e.items.empty() || !e.items[0].is_atom) expr_fail(e, "expected (<op> <expr>*)");
  const std::string& op = e.items[0].atom;
  std::vector<ExprPtr> args;
  for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(parse_expr(e.items[i], scope));
  auto want = [&](std::size_t n) {
    if (args.size() != n) expr_fail(e, "operator " + op + " expects " + std::to_string(n) + " operands");
  };
  auto need = [&](std::size_t i, Scalar t) {
    if (args[i]->type != t) expr_fail(e, "type mismatch in operand " + std::to_string(i + 1) + " of " + op);
  };
  if (op == "not") {
    want(1);
    need(0, Scalar::Bool);
    return ex::not_(args[0]);
  }
  if (op == "ite") {
    want(3);
    need(0, Scalar::Bool);
    if (args[1]->type != args[2]->type) expr_fail(e, "ite branches differ in type");
    return ex::ite(args[0], args[1], args[2]);
  }
  want(2);
  struct Bin {
    const char* name;
    ExprKind kind;
    Scalar operand;
    Scalar result;
  };
  static const Bin kBins[] = {
      {"+", ExprKind::Add, Scalar::Int, Scalar::Int},     {"-", ExprKind::Sub, Scalar::Int, Scalar::Int},
      {"*", ExprKind::Mul, Scalar::Int, Scalar::Int},     {"div", ExprKind::Div, Scalar::Int, Scalar::Int},
      {"<", ExprKind::Lt, Scalar::Int, Scalar::Bool},     {"<=", ExprKind::Le, Scalar::Int, Scalar::Bool},
      {"=", ExprKind::EqE, Scalar::Int, Scalar::Bool},    {"and", ExprKind::And, Scalar::Bool, Scalar::Bool},
      {"or", ExprKind::Or, Scalar::Bool, Scalar::Bool},
  };
  for (const Bin& b : kBins) {
    if (op == b.name) {
      need(0, b.operand);
      need(1, b.operand);
      return ex::make(b.kind, b.result, {args[0], args[1]});
    }
  }
  expr_fail(e, "unknown operator " + op);
}

inline SlotExpr parse_slot(const SExpr& e, const ValueType& type, const VarScope& scope) {
  SlotExpr s;
  s.type = type;
  if (!type.is_tuple()) {
    s.comps.push_back(parse_expr(e, scope));
    if (s.comps[0]->type != type.scalar()) detail::expr_fail(e, "expected a " + type.to_string() + " expression");
    return s;
  }
  if (e.is_atom) {
    bool is_in = false;
    std::size_t j = 0;
    std::optional<std::size_t> comp;
    if (detail::parse_var_atom(e.atom, is_in, j, comp) && !comp) {
      if (!is_in && (j == 0 || j > scope.outs.size())) detail::expr_fail(e, "variable out of scope: " + e.atom);
      const ValueType& t = is_in ? scope.input : scope.outs[j - 1];
      if (!(t == type)) detail::expr_fail(e, "variable " + e.atom + " has type " + t.to_string());
      return identity_slot(type, is_in ? 0 : j);
    }
  }
  if (!e.has_head("tuple") || e.items.size() != type.arity() + 1) {
    detail::expr_fail(e, "expected (tuple ...) of type " + type.to_string());
  }
  for (std::size_t i = 0; i < type.arity(); ++i) {
    ExprPtr c = parse_expr(e.items[i + 1], scope);
    if (c->type != type.component(i)) detail::expr_fail(e, "tuple component " + std::to_string(i) + " mistyped");
    s.comps.push_back(std::move(c));
  }
  return s;
}

}  // namespace semsynth

#endif  // SEMSYNTH_EXPR_HPP_
