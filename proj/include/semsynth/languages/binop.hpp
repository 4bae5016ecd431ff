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


#ifndef SEMSYNTH_LANGUAGES_BINOP_HPP_
#define SEMSYNTH_LANGUAGES_BINOP_HPP_

#include <memory>

#include "semsynth/languages/common.hpp"

namespace semsynth::lang {

// Bit strings built left to right, with popcount (`count`) and
// binary-to-decimal (`bin2dec`) readings. The single input is the bit `x`.
inline constexpr const char* kBinOpGrammar = R"((grammar
  (nt B :in bool :out bool)
  (nt N :in bool :out int)
  (nt M :in bool :out int)
  (nt S :in bool :out int)
  (prod B zero ())
  (prod B one ())
  (prod B x ())
  (prod N atom (B))
  (prod N concat (N B))
  (prod M atom_m (B))
  (prod M concat_m (M B))
  (prod S count (N))
  (prod S bin2dec (M))
  (start S))
)";

// A bit enters integer arithmetic through a case split on its value.
inline constexpr const char* kBinOpGolden = R"((semantics :language binop :format 1)
(rule (head Sem_B (zero) x0 y0) (body (out false) (guard true)))
(rule (head Sem_B (one) x0 y0) (body (out true) (guard true)))
(rule (head Sem_B (x) x0 y0) (body (out x0) (guard true)))
(rule :then (head Sem_N (atom t1) x0 y0) (body (child Sem_B t1 x1 y1) (flow 1 x0) (out 1) (guard y1)))
(rule :else (head Sem_N (atom t1) x0 y0) (body (child Sem_B t1 x1 y1) (flow 1 x0) (out 0) (guard (not y1))))
(rule :then (head Sem_N (concat t1 t2) x0 y0)
  (body (child Sem_N t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (+ y1 1)) (guard y2)))
(rule :else (head Sem_N (concat t1 t2) x0 y0)
  (body (child Sem_N t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out y1) (guard (not y2))))
(rule :then (head Sem_M (atom_m t1) x0 y0) (body (child Sem_B t1 x1 y1) (flow 1 x0) (out 1) (guard y1)))
(rule :else (head Sem_M (atom_m t1) x0 y0) (body (child Sem_B t1 x1 y1) (flow 1 x0) (out 0) (guard (not y1))))
(rule :then (head Sem_M (concat_m t1 t2) x0 y0)
  (body (child Sem_M t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (+ (* 2 y1) 1)) (guard y2)))
(rule :else (head Sem_M (concat_m t1 t2) x0 y0)
  (body (child Sem_M t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (* 2 y1)) (guard (not y2))))
(rule (head Sem_S (count t1) x0 y0) (body (child Sem_N t1 x1 y1) (flow 1 x0) (out y1) (guard true)))
(rule (head Sem_S (bin2dec t1) x0 y0) (body (child Sem_M t1 x1 y1) (flow 1 x0) (out y1) (guard true)))
)";

enum class BinOpOp { Zero, One, X, Atom, Concat, AtomM, ConcatM, Pass };

class BinOpInterpreter : public TableInterpreter<BinOpOp> {
 public:
  explicit BinOpInterpreter(const Grammar& g)
      : TableInterpreter(g, {{"zero", BinOpOp::Zero},
                             {"one", BinOpOp::One},
                             {"x", BinOpOp::X},
                             {"atom", BinOpOp::Atom},
                             {"concat", BinOpOp::Concat},
                             {"atom_m", BinOpOp::AtomM},
                             {"concat_m", BinOpOp::ConcatM},
                             {"count", BinOpOp::Pass},
                             {"bin2dec", BinOpOp::Pass}}) {}

  InterpResult eval(const Term& t, const Value& in, Fuel& fuel) const override {
    switch (op(t)) {
      case BinOpOp::Zero:
        return InterpResult::ok(Value::boolean(false));
      case BinOpOp::One:
        return InterpResult::ok(Value::boolean(true));
      case BinOpOp::X:
        return InterpResult::ok(in);
      case BinOpOp::Pass:
        return eval(t.child(0), in, fuel);
      case BinOpOp::Atom:
      case BinOpOp::AtomM: {
        InterpResult b = eval(t.child(0), in, fuel);
        if (!b.is_ok()) return b;
        return InterpResult::ok(Value::integer(b.value.as_bool() ? 1 : 0));
      }
      case BinOpOp::Concat:
      case BinOpOp::ConcatM: {
        InterpResult n = eval(t.child(0), in, fuel);
        if (!n.is_ok()) return n;
        InterpResult b = eval(t.child(1), in, fuel);
        if (!b.is_ok()) return b;
        std::int64_t bit = b.value.as_bool() ? 1 : 0;
        if (op(t) == BinOpOp::Concat) return int_result(arith::add(n.value.as_int(), bit));
        auto twice = arith::mul(2, n.value.as_int());
        return int_result(twice ? arith::add(*twice, bit) : std::nullopt);
      }
    }
    return InterpResult::stuck();
  }
};

inline LanguageBundle make_binop() {
  LanguageBundle b;
  b.id = "binop";
  b.description = "bit strings with popcount and binary-to-decimal conversion";
  b.grammar = load_grammar(kBinOpGrammar);
  b.interpreter = std::make_shared<BinOpInterpreter>(b.grammar);
  b.golden_chc = kBinOpGolden;
  return b;
}

}  // namespace semsynth::lang

#endif  // SEMSYNTH_LANGUAGES_BINOP_HPP_
