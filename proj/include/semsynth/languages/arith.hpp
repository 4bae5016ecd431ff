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


#ifndef SEMSYNTH_LANGUAGES_ARITH_HPP_
#define SEMSYNTH_LANGUAGES_ARITH_HPP_

#include <memory>
#include <string>

#include "semsynth/languages/common.hpp"

namespace semsynth::lang {

// IntArith: integer literals, three variables bound to the one input,
// conditional selection, +, *, and Boolean conditions.
inline constexpr const char* kIntArithGrammar = R"((grammar
  (nt E :in int :out int)
  (nt B :in int :out bool)
  (prod E lit0 ())
  (prod E lit1 ())
  (prod E lit2 ())
  (prod E lit3 ())
  (prod E x ())
  (prod E y ())
  (prod E z ())
  (prod E ite (B E E))
  (prod E plus (E E))
  (prod E times (E E))
  (prod B true ())
  (prod B false ())
  (prod B lt (E E))
  (prod B and (B B))
  (prod B or (B B))
  (prod B not (B))
  (start E))
)";

inline constexpr const char* kIntArithGolden = R"((semantics :language intarith :format 1)
(rule (head Sem_E (lit0) x0 y0) (body (out 0) (guard true)))
(rule (head Sem_E (lit1) x0 y0) (body (out 1) (guard true)))
(rule (head Sem_E (lit2) x0 y0) (body (out 2) (guard true)))
(rule (head Sem_E (lit3) x0 y0) (body (out 3) (guard true)))
(rule (head Sem_E (x) x0 y0) (body (out x0) (guard true)))
(rule (head Sem_E (y) x0 y0) (body (out x0) (guard true)))
(rule (head Sem_E (z) x0 y0) (body (out x0) (guard true)))
(rule :then (head Sem_E (ite t1 t2 t3) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_E t2 x2 y2) (child Sem_E t3 x3 y3)
        (flow 1 x0) (flow 2 x0) (flow 3 x0) (out y2) (guard y1)))
(rule :else (head Sem_E (ite t1 t2 t3) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_E t2 x2 y2) (child Sem_E t3 x3 y3)
        (flow 1 x0) (flow 2 x0) (flow 3 x0) (out y3) (guard (not y1))))
(rule (head Sem_E (plus t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (+ y1 y2)) (guard true)))
(rule (head Sem_E (times t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (* y1 y2)) (guard true)))
(rule (head Sem_B (true) x0 y0) (body (out true) (guard true)))
(rule (head Sem_B (false) x0 y0) (body (out false) (guard true)))
(rule (head Sem_B (lt t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (< y1 y2)) (guard true)))
(rule (head Sem_B (and t1 t2) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (and y1 y2)) (guard true)))
(rule (head Sem_B (or t1 t2) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (or y1 y2)) (guard true)))
(rule (head Sem_B (not t1) x0 y0) (body (child Sem_B t1 x1 y1) (flow 1 x0) (out (not y1)) (guard true)))
)";

// IteExpr: layered integer expressions (E over F over G) with truncating
// division and six comparisons.
inline constexpr const char* kIteExprGrammar = R"((grammar
  (nt G :in int :out int)
  (nt E :in int :out int)
  (nt F :in int :out int)
  (nt B :in int :out bool)
  (prod G lit0 ())
  (prod G lit1 ())
  (prod G lit2 ())
  (prod G lit3 ())
  (prod G lit4 ())
  (prod G lit5 ())
  (prod G lit6 ())
  (prod G lit7 ())
  (prod G lit8 ())
  (prod G x ())
  (prod G expr (E))
  (prod E ite (B E E))
  (prod E plus (E F))
  (prod E minus (E F))
  (prod E atom (F))
  (prod F times (F G))
  (prod F div (F G))
  (prod F num (G))
  (prod B lt (E E))
  (prod B le (E E))
  (prod B gt (E E))
  (prod B ge (E E))
  (prod B eq (E E))
  (prod B ne (E E))
  (start E))
)";

inline constexpr const char* kIteExprGolden = R"((semantics :language iteexpr :format 1)
(rule (head Sem_G (lit0) x0 y0) (body (out 0) (guard true)))
(rule (head Sem_G (lit1) x0 y0) (body (out 1) (guard true)))
(rule (head Sem_G (lit2) x0 y0) (body (out 2) (guard true)))
(rule (head Sem_G (lit3) x0 y0) (body (out 3) (guard true)))
(rule (head Sem_G (lit4) x0 y0) (body (out 4) (guard true)))
(rule (head Sem_G (lit5) x0 y0) (body (out 5) (guard true)))
(rule (head Sem_G (lit6) x0 y0) (body (out 6) (guard true)))
(rule (head Sem_G (lit7) x0 y0) (body (out 7) (guard true)))
(rule (head Sem_G (lit8) x0 y0) (body (out 8) (guard true)))
(rule (head Sem_G (x) x0 y0) (body (out x0) (guard true)))
(rule (head Sem_G (expr t1) x0 y0) (body (child Sem_E t1 x1 y1) (flow 1 x0) (out y1) (guard true)))
(rule :then (head Sem_E (ite t1 t2 t3) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_E t2 x2 y2) (child Sem_E t3 x3 y3)
        (flow 1 x0) (flow 2 x0) (flow 3 x0) (out y2) (guard y1)))
(rule :else (head Sem_E (ite t1 t2 t3) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_E t2 x2 y2) (child Sem_E t3 x3 y3)
        (flow 1 x0) (flow 2 x0) (flow 3 x0) (out y3) (guard (not y1))))
(rule (head Sem_E (plus t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_F t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (+ y1 y2)) (guard true)))
(rule (head Sem_E (minus t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_F t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (- y1 y2)) (guard true)))
(rule (head Sem_E (atom t1) x0 y0) (body (child Sem_F t1 x1 y1) (flow 1 x0) (out y1) (guard true)))
(rule (head Sem_F (times t1 t2) x0 y0)
  (body (child Sem_F t1 x1 y1) (child Sem_G t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (* y1 y2)) (guard true)))
(rule (head Sem_F (div t1 t2) x0 y0)
  (body (child Sem_F t1 x1 y1) (child Sem_G t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (div y1 y2)) (guard true)))
(rule (head Sem_F (num t1) x0 y0) (body (child Sem_G t1 x1 y1) (flow 1 x0) (out y1) (guard true)))
(rule (head Sem_B (lt t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (< y1 y2)) (guard true)))
(rule (head Sem_B (le t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (<= y1 y2)) (guard true)))
(rule (head Sem_B (gt t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (< y2 y1)) (guard true)))
(rule (head Sem_B (ge t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (<= y2 y1)) (guard true)))
(rule (head Sem_B (eq t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (= y1 y2)) (guard true)))
(rule (head Sem_B (ne t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (not (= y1 y2))) (guard true)))
)";

enum class ArithOp {
  Lit0, Lit1, Lit2, Lit3, Lit4, Lit5, Lit6, Lit7, Lit8, Var, Pass,
  Ite, Plus, Minus, Times, Div,
  True, False, Lt, Le, Gt, Ge, Eq, Ne, And, Or, Not,
};

// Shared interpreter for IntArith and IteExpr. `ite` runs only the taken
// branch; division truncates and a zero divisor is Stuck.
class ArithInterpreter : public TableInterpreter<ArithOp> {
 public:
  explicit ArithInterpreter(const Grammar& g)
      : TableInterpreter(g, {{"lit0", ArithOp::Lit0}, {"lit1", ArithOp::Lit1},   {"lit2", ArithOp::Lit2},
                             {"lit3", ArithOp::Lit3}, {"lit4", ArithOp::Lit4},   {"lit5", ArithOp::Lit5},
                             {"lit6", ArithOp::Lit6}, {"lit7", ArithOp::Lit7},   {"lit8", ArithOp::Lit8},
                             {"x", ArithOp::Var},     {"y", ArithOp::Var},       {"z", ArithOp::Var},
                             {"expr", ArithOp::Pass}, {"atom", ArithOp::Pass},   {"num", ArithOp::Pass},
                             {"ite", ArithOp::Ite},   {"plus", ArithOp::Plus},   {"minus", ArithOp::Minus},
                             {"times", ArithOp::Times}, {"div", ArithOp::Div},   {"true", ArithOp::True},
                             {"false", ArithOp::False}, {"lt", ArithOp::Lt},     {"le", ArithOp::Le},
                             {"gt", ArithOp::Gt},     {"ge", ArithOp::Ge},       {"eq", ArithOp::Eq},
                             {"ne", ArithOp::Ne},     {"and", ArithOp::And},     {"or", ArithOp::Or},
                             {"not", ArithOp::Not}}) {}

  InterpResult eval(const Term& t, const Value& in, Fuel& fuel) const override {
    const ArithOp o = op(t);
    switch (o) {
      case ArithOp::Lit0:
      case ArithOp::Lit1:
      case ArithOp::Lit2:
      case ArithOp::Lit3:
      case ArithOp::Lit4:
      case ArithOp::Lit5:
      case ArithOp::Lit6:
      case ArithOp::Lit7:
      case ArithOp::Lit8:
        return InterpResult::ok(Value::integer(static_cast<int>(o) - static_cast<int>(ArithOp::Lit0)));
      case ArithOp::Var:
        return InterpResult::ok(in);
      case ArithOp::Pass:
        return eval(t.child(0), in, fuel);
      case ArithOp::True:
        return InterpResult::ok(Value::boolean(true));
      case ArithOp::False:
        return InterpResult::ok(Value::boolean(false));
      case ArithOp::Not: {
        InterpResult a = eval(t.child(0), in, fuel);
        if (!a.is_ok()) return a;
        return InterpResult::ok(Value::boolean(!a.value.as_bool()));
      }
      case ArithOp::Ite: {
        InterpResult c = eval(t.child(0), in, fuel);
        if (!c.is_ok()) return c;
        return eval(t.child(c.value.as_bool() ? 1 : 2), in, fuel);
      }
      default:
        break;
    }
    InterpResult a = eval(t.child(0), in, fuel);
    if (!a.is_ok()) return a;
    InterpResult b = eval(t.child(1), in, fuel);
    if (!b.is_ok()) return b;
    if (o == ArithOp::And) return InterpResult::ok(Value::boolean(a.value.as_bool() && b.value.as_bool()));
    if (o == ArithOp::Or) return InterpResult::ok(Value::boolean(a.value.as_bool() || b.value.as_bool()));
    std::int64_t l = a.value.as_int();
    std::int64_t r = b.value.as_int();
    switch (o) {
      case ArithOp::Plus:
        return int_result(arith::add(l, r));
      case ArithOp::Minus:
        return int_result(arith::sub(l, r));
      case ArithOp::Times:
        return int_result(arith::mul(l, r));
      case ArithOp::Div:
        return int_result(arith::div(l, r));
      case ArithOp::Lt:
        return InterpResult::ok(Value::boolean(l < r));
      case ArithOp::Le:
        return InterpResult::ok(Value::boolean(l <= r));
      case ArithOp::Gt:
        return InterpResult::ok(Value::boolean(l > r));
      case ArithOp::Ge:
        return InterpResult::ok(Value::boolean(l >= r));
      case ArithOp::Eq:
        return InterpResult::ok(Value::boolean(l == r));
      case ArithOp::Ne:
        return InterpResult::ok(Value::boolean(l != r));
      default:
        return InterpResult::stuck();
    }
  }
};

inline LanguageBundle make_intarith() {
  LanguageBundle b;
  b.id = "intarith";
  b.description = "integer arithmetic with +, *, ite and Boolean conditions";
  b.grammar = load_grammar(kIntArithGrammar);
  b.interpreter = std::make_shared<ArithInterpreter>(b.grammar);
  b.golden_chc = kIntArithGolden;
  return b;
}

inline LanguageBundle make_iteexpr() {
  LanguageBundle b;
  b.id = "iteexpr";
  b.description = "layered integer expressions with division, ite and six comparisons";
  b.grammar = load_grammar(kIteExprGrammar);
  b.interpreter = std::make_shared<ArithInterpreter>(b.grammar);
  b.golden_chc = kIteExprGolden;
  return b;
}

}  // namespace semsynth::lang

#endif  // SEMSYNTH_LANGUAGES_ARITH_HPP_
