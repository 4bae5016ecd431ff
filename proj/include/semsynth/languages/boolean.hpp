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


#ifndef SEMSYNTH_LANGUAGES_BOOLEAN_HPP_
#define SEMSYNTH_LANGUAGES_BOOLEAN_HPP_

#include <memory>
#include <string>

#include "semsynth/languages/common.hpp"

namespace semsynth::lang {

// Boolean formula languages over a tuple of k Boolean variables: cubes
// (conjunctions of variables), CNF and DNF.

inline constexpr const char* kCube3Grammar = R"((grammar
  (nt V :in (tuple bool bool bool) :out bool)
  (nt B :in (tuple bool bool bool) :out bool)
  (prod V v0 ())
  (prod V v1 ())
  (prod V v2 ())
  (prod B var (V))
  (prod B and (B B))
  (start B))
)";

inline constexpr const char* kCube3Golden = R"((semantics :language cube3 :format 1)
(rule (head Sem_V (v0) x0 y0) (body (out x0.0) (guard true)))
(rule (head Sem_V (v1) x0 y0) (body (out x0.1) (guard true)))
(rule (head Sem_V (v2) x0 y0) (body (out x0.2) (guard true)))
(rule (head Sem_B (var t1) x0 y0) (body (child Sem_V t1 x1 y1) (flow 1 x0) (out y1) (guard true)))
(rule (head Sem_B (and t1 t2) x0 y0)
  (body (child Sem_B t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (and y1 y2)) (guard true)))
)";

inline constexpr const char* kCnf2Grammar = R"((grammar
  (nt V :in (tuple bool bool) :out bool)
  (nt C :in (tuple bool bool) :out bool)
  (nt B :in (tuple bool bool) :out bool)
  (prod V v0 ())
  (prod V v1 ())
  (prod C var (V))
  (prod C nvar (V))
  (prod C or (V C))
  (prod B clause (C))
  (prod B and (C B))
  (start B))
)";

inline constexpr const char* kCnf2Golden = R"((semantics :language cnf2 :format 1)
(rule (head Sem_V (v0) x0 y0) (body (out x0.0) (guard true)))
(rule (head Sem_V (v1) x0 y0) (body (out x0.1) (guard true)))
(rule (head Sem_C (var t1) x0 y0) (body (child Sem_V t1 x1 y1) (flow 1 x0) (out y1) (guard true)))
(rule (head Sem_C (nvar t1) x0 y0) (body (child Sem_V t1 x1 y1) (flow 1 x0) (out (not y1)) (guard true)))
(rule (head Sem_C (or t1 t2) x0 y0)
  (body (child Sem_V t1 x1 y1) (child Sem_C t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (or y1 y2)) (guard true)))
(rule (head Sem_B (clause t1) x0 y0) (body (child Sem_C t1 x1 y1) (flow 1 x0) (out y1) (guard true)))
(rule (head Sem_B (and t1 t2) x0 y0)
  (body (child Sem_C t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (and y1 y2)) (guard true)))
)";

inline constexpr const char* kDnf2Grammar = R"((grammar
  (nt V :in (tuple bool bool) :out bool)
  (nt C :in (tuple bool bool) :out bool)
  (nt B :in (tuple bool bool) :out bool)
  (prod V v0 ())
  (prod V v1 ())
  (prod C var (V))
  (prod C nvar (V))
  (prod C and (V C))
  (prod B conj (C))
  (prod B or (C B))
  (start B))
)";

inline constexpr const char* kDnf2Golden = R"((semantics :language dnf2 :format 1)
(rule (head Sem_V (v0) x0 y0) (body (out x0.0) (guard true)))
(rule (head Sem_V (v1) x0 y0) (body (out x0.1) (guard true)))
(rule (head Sem_C (var t1) x0 y0) (body (child Sem_V t1 x1 y1) (flow 1 x0) (out y1) (guard true)))
(rule (head Sem_C (nvar t1) x0 y0) (body (child Sem_V t1 x1 y1) (flow 1 x0) (out (not y1)) (guard true)))
(rule (head Sem_C (and t1 t2) x0 y0)
  (body (child Sem_V t1 x1 y1) (child Sem_C t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (and y1 y2)) (guard true)))
(rule (head Sem_B (conj t1) x0 y0) (body (child Sem_C t1 x1 y1) (flow 1 x0) (out y1) (guard true)))
(rule (head Sem_B (or t1 t2) x0 y0)
  (body (child Sem_C t1 x1 y1) (child Sem_B t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (or y1 y2)) (guard true)))
)";

enum class BoolOp { V0, V1, V2, Var, NVar, And, Or, Pass };

class BoolFormulaInterpreter : public TableInterpreter<BoolOp> {
 public:
  explicit BoolFormulaInterpreter(const Grammar& g)
      : TableInterpreter(g, {{"v0", BoolOp::V0},
                             {"v1", BoolOp::V1},
                             {"v2", BoolOp::V2},
                             {"var", BoolOp::Var},
                             {"nvar", BoolOp::NVar},
                             {"and", BoolOp::And},
                             {"or", BoolOp::Or},
                             {"clause", BoolOp::Pass},
                             {"conj", BoolOp::Pass}}) {}

  InterpResult eval(const Term& t, const Value& in, Fuel& fuel) const override {
    switch (op(t)) {
      case BoolOp::V0:
        return InterpResult::ok(in.component(0));
      case BoolOp::V1:
        return InterpResult::ok(in.component(1));
      case BoolOp::V2:
        return InterpResult::ok(in.component(2));
      case BoolOp::Var:
      case BoolOp::Pass:
        return eval(t.child(0), in, fuel);
      case BoolOp::NVar: {
        InterpResult r = eval(t.child(0), in, fuel);
        if (!r.is_ok()) return r;
        return InterpResult::ok(Value::boolean(!r.value.as_bool()));
      }
      case BoolOp::And:
      case BoolOp::Or: {
        InterpResult a = eval(t.child(0), in, fuel);
        if (!a.is_ok()) return a;
        InterpResult b = eval(t.child(1), in, fuel);
        if (!b.is_ok()) return b;
        bool r = op(t) == BoolOp::And ? (a.value.as_bool() && b.value.as_bool())
                                      : (a.value.as_bool() || b.value.as_bool());
        return InterpResult::ok(Value::boolean(r));
      }
    }
    return InterpResult::stuck();
  }
};

inline LanguageBundle make_bool_language(const char* id, const char* description, const char* grammar,
                                         const char* golden) {
  LanguageBundle b;
  b.id = id;
  b.description = description;
  b.grammar = load_grammar(grammar);
  b.interpreter = std::make_shared<BoolFormulaInterpreter>(b.grammar);
  b.golden_chc = golden;
  return b;
}

inline LanguageBundle make_cube3() {
  return make_bool_language("cube3", "conjunctions of three Boolean variables", kCube3Grammar, kCube3Golden);
}
inline LanguageBundle make_cnf2() {
  return make_bool_language("cnf2", "CNF formulas over two Boolean variables", kCnf2Grammar, kCnf2Golden);
}
inline LanguageBundle make_dnf2() {
  return make_bool_language("dnf2", "DNF formulas over two Boolean variables", kDnf2Grammar, kDnf2Golden);
}

}  // namespace semsynth::lang

#endif  // SEMSYNTH_LANGUAGES_BOOLEAN_HPP_
