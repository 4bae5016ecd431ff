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


#ifndef SEMSYNTH_LANGUAGES_CURRENCY_HPP_
#define SEMSYNTH_LANGUAGES_CURRENCY_HPP_

#include <memory>

#include "semsynth/languages/common.hpp"

namespace semsynth::lang {

// Amounts in yen built from scalar quantities in three currencies
// (1 CNY = 21 JPY, 1 USD = 152 JPY).
inline constexpr const char* kCurrencyGrammar = R"((grammar
  (nt K :in int :out int)
  (nt S :in int :out int)
  (prod K k0 ())
  (prod K k1 ())
  (prod K k2 ())
  (prod K k4 ())
  (prod K k8 ())
  (prod K x ())
  (prod K kplus (K K))
  (prod S plus (S S))
  (prod S minus (S S))
  (prod S times (S K))
  (prod S jpy (K))
  (prod S cny (K))
  (prod S usd (K))
  (start S))
)";

inline constexpr const char* kCurrencyGolden = R"((semantics :language currency :format 1)
(rule (head Sem_K (k0) x0 y0) (body (out 0) (guard true)))
(rule (head Sem_K (k1) x0 y0) (body (out 1) (guard true)))
(rule (head Sem_K (k2) x0 y0) (body (out 2) (guard true)))
(rule (head Sem_K (k4) x0 y0) (body (out 4) (guard true)))
(rule (head Sem_K (k8) x0 y0) (body (out 8) (guard true)))
(rule (head Sem_K (x) x0 y0) (body (out x0) (guard true)))
(rule (head Sem_K (kplus t1 t2) x0 y0)
  (body (child Sem_K t1 x1 y1) (child Sem_K t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (+ y1 y2)) (guard true)))
(rule (head Sem_S (plus t1 t2) x0 y0)
  (body (child Sem_S t1 x1 y1) (child Sem_S t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (+ y1 y2)) (guard true)))
(rule (head Sem_S (minus t1 t2) x0 y0)
  (body (child Sem_S t1 x1 y1) (child Sem_S t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (- y1 y2)) (guard true)))
(rule (head Sem_S (times t1 t2) x0 y0)
  (body (child Sem_S t1 x1 y1) (child Sem_K t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (* y1 y2)) (guard true)))
(rule (head Sem_S (jpy t1) x0 y0) (body (child Sem_K t1 x1 y1) (flow 1 x0) (out y1) (guard true)))
(rule (head Sem_S (cny t1) x0 y0) (body (child Sem_K t1 x1 y1) (flow 1 x0) (out (* 21 y1)) (guard true)))
(rule (head Sem_S (usd t1) x0 y0) (body (child Sem_K t1 x1 y1) (flow 1 x0) (out (* 152 y1)) (guard true)))
)";

enum class CurrencyOp { K0, K1, K2, K4, K8, X, KPlus, Plus, Minus, Times, Jpy, Cny, Usd };

class CurrencyInterpreter : public TableInterpreter<CurrencyOp> {
 public:
  explicit CurrencyInterpreter(const Grammar& g)
      : TableInterpreter(g, {{"k0", CurrencyOp::K0},       {"k1", CurrencyOp::K1},       {"k2", CurrencyOp::K2},
                             {"k4", CurrencyOp::K4},       {"k8", CurrencyOp::K8},       {"x", CurrencyOp::X},
                             {"kplus", CurrencyOp::KPlus}, {"plus", CurrencyOp::Plus},   {"minus", CurrencyOp::Minus},
                             {"times", CurrencyOp::Times}, {"jpy", CurrencyOp::Jpy},     {"cny", CurrencyOp::Cny},
                             {"usd", CurrencyOp::Usd}}) {}

  InterpResult eval(const Term& t, const Value& in, Fuel& fuel) const override {
    switch (op(t)) {
      case CurrencyOp::K0:
        return InterpResult::ok(Value::integer(0));
      case CurrencyOp::K1:
        return InterpResult::ok(Value::integer(1));
      case CurrencyOp::K2:
        return InterpResult::ok(Value::integer(2));
      case CurrencyOp::K4:
        return InterpResult::ok(Value::integer(4));
      case CurrencyOp::K8:
        return InterpResult::ok(Value::integer(8));
      case CurrencyOp::X:
        return InterpResult::ok(in);
      case CurrencyOp::Jpy:
      case CurrencyOp::Cny:
      case CurrencyOp::Usd: {
        InterpResult k = eval(t.child(0), in, fuel);
        if (!k.is_ok()) return k;
        std::int64_t rate = op(t) == CurrencyOp::Jpy ? 1 : op(t) == CurrencyOp::Cny ? 21 : 152;
        return int_result(arith::mul(rate, k.value.as_int()));
      }
      default:
        break;
    }
    InterpResult a = eval(t.child(0), in, fuel);
    if (!a.is_ok()) return a;
    InterpResult b = eval(t.child(1), in, fuel);
    if (!b.is_ok()) return b;
    std::int64_t l = a.value.as_int();
    std::int64_t r = b.value.as_int();
    switch (op(t)) {
      case CurrencyOp::KPlus:
      case CurrencyOp::Plus:
        return int_result(arith::add(l, r));
      case CurrencyOp::Minus:
        return int_result(arith::sub(l, r));
      case CurrencyOp::Times:
        return int_result(arith::mul(l, r));
      default:
        return InterpResult::stuck();
    }
  }
};

inline LanguageBundle make_currency() {
  LanguageBundle b;
  b.id = "currency";
  b.description = "currency amounts with exchange-rate conversion to yen";
  b.grammar = load_grammar(kCurrencyGrammar);
  b.interpreter = std::make_shared<CurrencyInterpreter>(b.grammar);
  b.golden_chc = kCurrencyGolden;
  return b;
}

}  // namespace semsynth::lang

#endif  // SEMSYNTH_LANGUAGES_CURRENCY_HPP_
