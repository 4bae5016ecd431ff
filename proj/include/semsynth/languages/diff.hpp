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


#ifndef SEMSYNTH_LANGUAGES_DIFF_HPP_
#define SEMSYNTH_LANGUAGES_DIFF_HPP_

#include <memory>
#include <vector>

#include "semsynth/languages/common.hpp"

namespace semsynth::lang {

// Finite differencing over integer functions. An expression evaluates to a
// triple (r, s, t); literal, variable and combination rules are fixed by the
// reference semantics below and the interpreter mirrors them exactly.
inline constexpr const char* kDiffGrammar = R"((grammar
  (nt E :in int :out (tuple int int int))
  (prod E lit0 ())
  (prod E lit1 ())
  (prod E lit2 ())
  (prod E x ())
  (prod E plus (E E))
  (prod E times (E E))
  (start E))
)";

inline constexpr const char* kDiffGolden = R"((semantics :language diff :format 1)
(rule (head Sem_E (lit0) x0 y0) (body (out (tuple 0 0 0)) (guard true)))
(rule (head Sem_E (lit1) x0 y0) (body (out (tuple 1 1 0)) (guard true)))
(rule (head Sem_E (lit2) x0 y0) (body (out (tuple 2 2 0)) (guard true)))
(rule (head Sem_E (x) x0 y0) (body (out (tuple x0 (+ x0 1) 0)) (guard true)))
(rule (head Sem_E (plus t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0)
        (out (tuple (+ y1.0 y2.0) (+ y1.1 y2.1) (+ y1.2 y2.2))) (guard true)))
(rule (head Sem_E (times t1 t2) x0 y0)
  (body (child Sem_E t1 x1 y1) (child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0)
        (out (tuple (* y1.0 y2.0) (* y1.1 y2.1) (+ (* y1.0 y2.2) (* y2.0 y1.1)))) (guard true)))
)";

enum class DiffOp { Lit0, Lit1, Lit2, X, Plus, Times };

class DiffInterpreter : public TableInterpreter<DiffOp> {
 public:
  explicit DiffInterpreter(const Grammar& g)
      : TableInterpreter(g, {{"lit0", DiffOp::Lit0},
                             {"lit1", DiffOp::Lit1},
                             {"lit2", DiffOp::Lit2},
                             {"x", DiffOp::X},
                             {"plus", DiffOp::Plus},
                             {"times", DiffOp::Times}}) {}

  InterpResult eval(const Term& t, const Value& in, Fuel& fuel) const override {
    switch (op(t)) {
      case DiffOp::Lit0:
        return triple(0, 0, 0);
      case DiffOp::Lit1:
        return triple(1, 1, 0);
      case DiffOp::Lit2:
        return triple(2, 2, 0);
      case DiffOp::X: {
        auto next = arith::add(in.as_int(), 1);
        if (!next) return InterpResult::stuck();
        return triple(in.as_int(), *next, 0);
      }
      default:
        break;
    }
    InterpResult a = eval(t.child(0), in, fuel);
    if (!a.is_ok()) return a;
    InterpResult b = eval(t.child(1), in, fuel);
    if (!b.is_ok()) return b;
    std::int64_t r1 = a.value.cell(0), s1 = a.value.cell(1), t1 = a.value.cell(2);
    std::int64_t r2 = b.value.cell(0), s2 = b.value.cell(1), t2 = b.value.cell(2);
    if (op(t) == DiffOp::Plus) {
      auto r = arith::add(r1, r2), s = arith::add(s1, s2), d = arith::add(t1, t2);
      if (!r || !s || !d) return InterpResult::stuck();
      return triple(*r, *s, *d);
    }
    auto r = arith::mul(r1, r2), s = arith::mul(s1, s2);
    auto p = arith::mul(r1, t2), q = arith::mul(r2, s1);
    if (!r || !s || !p || !q) return InterpResult::stuck();
    auto d = arith::add(*p, *q);
    if (!d) return InterpResult::stuck();
    return triple(*r, *s, *d);
  }

 private:
  static InterpResult triple(std::int64_t r, std::int64_t s, std::int64_t t) {
    return InterpResult::ok(Value::tuple({Value::integer(r), Value::integer(s), Value::integer(t)}));
  }
};

inline LanguageBundle make_diff() {
  LanguageBundle b;
  b.id = "diff";
  b.description = "finite differences of integer expressions; values are triples";
  b.grammar = load_grammar(kDiffGrammar);
  b.interpreter = std::make_shared<DiffInterpreter>(b.grammar);
  b.golden_chc = kDiffGolden;
  return b;
}

}  // namespace semsynth::lang

#endif  // SEMSYNTH_LANGUAGES_DIFF_HPP_
