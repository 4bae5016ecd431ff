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


#ifndef SEMSYNTH_LANGUAGES_IMP_HPP_
#define SEMSYNTH_LANGUAGES_IMP_HPP_

#include <cstdint>
#include <memory>
#include <string>

#include "semsynth/languages/common.hpp"

namespace semsynth::lang {

// IMP over one variable (state: int) or two variables (state: a pair).
inline constexpr const char* kImp1Grammar = R"((grammar
  (nt E :in int :out int)
  (nt B :in int :out bool)
  (nt S :in int :out int)
  (prod E lit0 ())
  (prod E lit1 ())
  (prod E var_x ())
  (prod E plus (E E))
  (prod E minus (E E))
  (prod B false ())
  (prod B true ())
  (prod B not (B))
  (prod B and (B B))
  (prod B or (B B))
  (prod B lt (E E))
  (prod S assign_x (E))
  (prod S dec_x ())
  (prod S seq (S S))
  (prod S ite (B S S))
  (prod S while (B S) :recursive)
  (prod S do_while (S B) :recursive)
  (start S))
)";

inline constexpr const char* kImp2Grammar = R"((grammar
  (nt E :in (tuple int int) :out int)
  (nt B :in (tuple int int) :out bool)
  (nt S :in (tuple int int) :out (tuple int int))
  (prod E lit0 ())
  (prod E lit1 ())
  (prod E var_x ())
  (prod E var_y ())
  (prod E plus (E E))
  (prod E minus (E E))
  (prod B false ())
  (prod B true ())
  (prod B not (B))
  (prod B and (B B))
  (prod B or (B B))
  (prod B lt (E E))
  (prod S assign_x (E))
  (prod S assign_y (E))
  (prod S inc_x ())
  (prod S inc_y ())
  (prod S dec_x ())
  (prod S dec_y ())
  (prod S seq (S S))
  (prod S ite (B S S))
  (prod S while (B S) :recursive)
  (prod S do_while (S B) :recursive)
  (start S))
)";

inline constexpr const char* kImp1Golden = R"((semantics :language imp1 :format 1)
(rule (head Sem_E (lit0) x0 y0) (body (out 0) (guard true)))
(rule (head Sem_E (lit1) x0 y0) (body (out 1) (guard true)))
(rule (head Sem_E (var_x) x0 y0) (body (out x0) (guard true)))
(rule (head Sem_E (plus t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (+ y1 y2)) (guard true)))
(rule (head Sem_E (minus t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (- y1 y2)) (guard true)))
(rule (head Sem_B (false) x0 y0) (body (out false) (guard true)))
(rule (head Sem_B (true) x0 y0) (body (out true) (guard true)))
(rule (head Sem_B (not t1) x0 y0) (body (child Sem_B t1 x1 y1) (flow 1 x0) (out (not y1)) (guard true)))
(rule (head Sem_B (and t1 t2) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (and y1 y2)) (guard true)))
(rule (head Sem_B (or t1 t2) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (or y1 y2)) (guard true)))
(rule (head Sem_B (lt t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (< y1 y2)) (guard true)))
(rule (head Sem_S (assign_x t1) x0 y0) (body (child Sem_E t1 x1 y1) (flow 1 x0) (out y1) (guard true)))
(rule (head Sem_S (dec_x) x0 y0) (body (out (- x0 1)) (guard true)))
(rule (head Sem_S (seq t1 t2) x0 y0)
  (body (child Sem_S t1 x1 y1) (child Sem_S t2 x2 y2) (flow 1 x0) (flow 2 y1) (out y2) (guard true)))
(rule :then (head Sem_S (ite t1 t2 t3) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_S t2 x2 y2) (child Sem_S t3 x3 y3)
        (flow 1 x0) (flow 2 x0) (flow 3 x0) (out y2) (guard y1)))
(rule :else (head Sem_S (ite t1 t2 t3) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_S t2 x2 y2) (child Sem_S t3 x3 y3)
        (flow 1 x0) (flow 2 x0) (flow 3 x0) (out y3) (guard (not y1))))
(rule :nonrec (head Sem_S (while t1 t2) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_S t2 x2 y2) (flow 1 x0) (flow 2 x0) (out x0) (guard (not y1))))
(rule :rec (head Sem_S (while t1 t2) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_S t2 x2 y2) (child Sem_S (while t1 t2) x3 y3)
        (flow 1 x0) (flow 2 x0) (flow 3 y2) (out y3) (guard y1)))
(rule :nonrec (head Sem_S (do_while t1 t2) x0 y0)
  (body (child Sem_S t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 y1) (out y1) (guard (not y2))))
(rule :rec (head Sem_S (do_while t1 t2) x0 y0)
  (body (child Sem_S t1 x1 y1) (child Sem_B t2 x2 y2) (child Sem_S (do_while t1 t2) x3 y3)
        (flow 1 x0) (flow 2 y1) (flow 3 y1) (out y3) (guard y2)))
)";

inline constexpr const char* kImp2Golden = R"((semantics :language imp2 :format 1)
(rule (head Sem_E (lit0) x0 y0) (body (out 0) (guard true)))
(rule (head Sem_E (lit1) x0 y0) (body (out 1) (guard true)))
(rule (head Sem_E (var_x) x0 y0) (body (out x0.0) (guard true)))
(rule (head Sem_E (var_y) x0 y0) (body (out x0.1) (guard true)))
(rule (head Sem_E (plus t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (+ y1 y2)) (guard true)))
(rule (head Sem_E (minus t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (- y1 y2)) (guard true)))
(rule (head Sem_B (false) x0 y0) (body (out false) (guard true)))
(rule (head Sem_B (true) x0 y0) (body (out true) (guard true)))
(rule (head Sem_B (not t1) x0 y0) (body (child Sem_B t1 x1 y1) (flow 1 x0) (out (not y1)) (guard true)))
(rule (head Sem_B (and t1 t2) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (and y1 y2)) (guard true)))
(rule (head Sem_B (or t1 t2) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (or y1 y2)) (guard true)))
(rule (head Sem_B (lt t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (< y1 y2)) (guard true)))
(rule (head Sem_S (assign_x t1) x0 y0)
  (body (child Sem_E t1 x1 y1) (flow 1 x0) (out (tuple y1 x0.1)) (guard true)))
(rule (head Sem_S (assign_y t1) x0 y0)
  (body (child Sem_E t1 x1 y1) (flow 1 x0) (out (tuple x0.0 y1)) (guard true)))
(rule (head Sem_S (inc_x) x0 y0) (body (out (tuple (+ x0.0 1) x0.1)) (guard true)))
(rule (head Sem_S (inc_y) x0 y0) (body (out (tuple x0.0 (+ x0.1 1))) (guard true)))
(rule (head Sem_S (dec_x) x0 y0) (body (out (tuple (- x0.0 1) x0.1)) (guard true)))
(rule (head Sem_S (dec_y) x0 y0) (body (out (tuple x0.0 (- x0.1 1))) (guard true)))
(rule (head Sem_S (seq t1 t2) x0 y0)
  (body (child Sem_S t1 x1 y1) (child Sem_S t2 x2 y2) (flow 1 x0) (flow 2 y1) (out y2) (guard true)))
(rule :then (head Sem_S (ite t1 t2 t3) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_S t2 x2 y2) (child Sem_S t3 x3 y3)
        (flow 1 x0) (flow 2 x0) (flow 3 x0) (out y2) (guard y1)))
(rule :else (head Sem_S (ite t1 t2 t3) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_S t2 x2 y2) (child Sem_S t3 x3 y3)
        (flow 1 x0) (flow 2 x0) (flow 3 x0) (out y3) (guard (not y1))))
(rule :nonrec (head Sem_S (while t1 t2) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_S t2 x2 y2) (flow 1 x0) (flow 2 x0) (out x0) (guard (not y1))))
(rule :rec (head Sem_S (while t1 t2) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_S t2 x2 y2) (child Sem_S (while t1 t2) x3 y3)
        (flow 1 x0) (flow 2 x0) (flow 3 y2) (out y3) (guard y1)))
(rule :nonrec (head Sem_S (do_while t1 t2) x0 y0)
  (body (child Sem_S t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 y1) (out y1) (guard (not y2))))
(rule :rec (head Sem_S (do_while t1 t2) x0 y0)
  (body (child Sem_S t1 x1 y1) (child Sem_B t2 x2 y2) (child Sem_S (do_while t1 t2) x3 y3)
        (flow 1 x0) (flow 2 y1) (flow 3 y1) (out y3) (guard y2)))
)";

enum class ImpOp {
  Lit0, Lit1, VarX, VarY, Plus, Minus,
  False, True, Not, And, Or, Lt,
  AssignX, AssignY, IncX, IncY, DecX, DecY, Seq, Ite, While, DoWhile,
};

// Reference interpreter. Loop iterations spend fuel; `ite` runs only the
// taken branch; arithmetic overflow is Stuck.
class ImpInterpreter : public TableInterpreter<ImpOp> {
 public:
  ImpInterpreter(const Grammar& g, std::size_t vars)
      : TableInterpreter(g, {{"lit0", ImpOp::Lit0},     {"lit1", ImpOp::Lit1},       {"var_x", ImpOp::VarX},
                             {"var_y", ImpOp::VarY},    {"plus", ImpOp::Plus},       {"minus", ImpOp::Minus},
                             {"false", ImpOp::False},   {"true", ImpOp::True},       {"not", ImpOp::Not},
                             {"and", ImpOp::And},       {"or", ImpOp::Or},           {"lt", ImpOp::Lt},
                             {"assign_x", ImpOp::AssignX}, {"assign_y", ImpOp::AssignY}, {"inc_x", ImpOp::IncX},
                             {"inc_y", ImpOp::IncY},    {"dec_x", ImpOp::DecX},      {"dec_y", ImpOp::DecY},
                             {"seq", ImpOp::Seq},       {"ite", ImpOp::Ite},         {"while", ImpOp::While},
                             {"do_while", ImpOp::DoWhile}}),
        vars_(vars) {}

  InterpResult eval(const Term& t, const Value& in, Fuel& fuel) const override {
    switch (op(t)) {
      case ImpOp::Lit0:
        return InterpResult::ok(Value::integer(0));
      case ImpOp::Lit1:
        return InterpResult::ok(Value::integer(1));
      case ImpOp::VarX:
        return InterpResult::ok(Value::integer(get(in, 0)));
      case ImpOp::VarY:
        return InterpResult::ok(Value::integer(get(in, 1)));
      case ImpOp::Plus:
      case ImpOp::Minus: {
        InterpResult a = eval(t.child(0), in, fuel);
        if (!a.is_ok()) return a;
        InterpResult b = eval(t.child(1), in, fuel);
        if (!b.is_ok()) return b;
        return int_result(op(t) == ImpOp::Plus ? arith::add(a.value.as_int(), b.value.as_int())
                                               : arith::sub(a.value.as_int(), b.value.as_int()));
      }
      case ImpOp::False:
        return InterpResult::ok(Value::boolean(false));
      case ImpOp::True:
        return InterpResult::ok(Value::boolean(true));
      case ImpOp::Not: {
        InterpResult a = eval(t.child(0), in, fuel);
        if (!a.is_ok()) return a;
        return InterpResult::ok(Value::boolean(!a.value.as_bool()));
      }
      case ImpOp::And:
      case ImpOp::Or: {
        InterpResult a = eval(t.child(0), in, fuel);
        if (!a.is_ok()) return a;
        InterpResult b = eval(t.child(1), in, fuel);
        if (!b.is_ok()) return b;
        bool r = op(t) == ImpOp::And ? (a.value.as_bool() && b.value.as_bool())
                                     : (a.value.as_bool() || b.value.as_bool());
        return InterpResult::ok(Value::boolean(r));
      }
      case ImpOp::Lt: {
        InterpResult a = eval(t.child(0), in, fuel);
        if (!a.is_ok()) return a;
        InterpResult b = eval(t.child(1), in, fuel);
        if (!b.is_ok()) return b;
        return InterpResult::ok(Value::boolean(a.value.as_int() < b.value.as_int()));
      }
      case ImpOp::AssignX:
      case ImpOp::AssignY: {
        InterpResult e = eval(t.child(0), in, fuel);
        if (!e.is_ok()) return e;
        return InterpResult::ok(set(in, op(t) == ImpOp::AssignX ? 0 : 1, e.value.as_int()));
      }
      case ImpOp::IncX:
        return bump(in, 0, +1);
      case ImpOp::IncY:
        return bump(in, 1, +1);
      case ImpOp::DecX:
        return bump(in, 0, -1);
      case ImpOp::DecY:
        return bump(in, 1, -1);
      case ImpOp::Seq: {
        InterpResult a = eval(t.child(0), in, fuel);
        if (!a.is_ok()) return a;
        return eval(t.child(1), a.value, fuel);
      }
      case ImpOp::Ite: {
        InterpResult b = eval(t.child(0), in, fuel);
        if (!b.is_ok()) return b;
        return eval(t.child(b.value.as_bool() ? 1 : 2), in, fuel);
      }
      case ImpOp::While: {
        Value state = in;
        for (;;) {
          InterpResult b = eval(t.child(0), state, fuel);
          if (!b.is_ok()) return b;
          if (!b.value.as_bool()) return InterpResult::ok(state);
          if (!fuel.consume()) return InterpResult::nonterm();
          InterpResult s = eval(t.child(1), state, fuel);
          if (!s.is_ok()) return s;
          state = s.value;
        }
      }
      case ImpOp::DoWhile: {
        Value state = in;
        for (;;) {
          InterpResult s = eval(t.child(0), state, fuel);
          if (!s.is_ok()) return s;
          state = s.value;
          InterpResult b = eval(t.child(1), state, fuel);
          if (!b.is_ok()) return b;
          if (!b.value.as_bool()) return InterpResult::ok(state);
          if (!fuel.consume()) return InterpResult::nonterm();
        }
      }
    }
    return InterpResult::stuck();
  }

 private:
  std::int64_t get(const Value& state, std::size_t i) const { return vars_ == 1 ? state.as_int() : state.cell(i); }

  Value set(const Value& state, std::size_t i, std::int64_t v) const {
    if (vars_ == 1) return Value::integer(v);
    std::vector<Value> items{state.component(0), state.component(1)};
    items[i] = Value::integer(v);
    return Value::tuple(items);
  }

  InterpResult bump(const Value& state, std::size_t i, std::int64_t d) const {
    auto r = arith::add(get(state, i), d);
    if (!r) return InterpResult::stuck();
    return InterpResult::ok(set(state, i, *r));
  }

  std::size_t vars_;
};

inline LanguageBundle make_imp1() {
  LanguageBundle b;
  b.id = "imp1";
  b.description = "IMP with one variable: expressions, conditions, assignment, sequencing, ite, while, do_while";
  b.grammar = load_grammar(kImp1Grammar);
  b.interpreter = std::make_shared<ImpInterpreter>(b.grammar, 1);
  b.golden_chc = kImp1Golden;
  return b;
}

inline LanguageBundle make_imp2() {
  LanguageBundle b;
  b.id = "imp2";
  b.description = "IMP with two variables; the state is a pair";
  b.grammar = load_grammar(kImp2Grammar);
  b.interpreter = std::make_shared<ImpInterpreter>(b.grammar, 2);
  b.golden_chc = kImp2Golden;
  return b;
}

}  // namespace semsynth::lang

#endif  // SEMSYNTH_LANGUAGES_IMP_HPP_
