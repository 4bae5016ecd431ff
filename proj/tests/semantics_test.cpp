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


#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "semsynth/semsynth.hpp"
#include "support/oracles.hpp"

namespace semsynth {
namespace {

Constraint rule_from_text(const LanguageBundle& b, const std::string& rule) {
  Semantics s = parse_chc("(semantics :language " + b.id + " :format 1)\n" + rule, b.grammar);
  EXPECT_EQ(s.rules.size(), 1u);
  return s.rules.begin()->second;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

TEST(EvalExpr, ArithmeticIteAndDivisionFault) {
  Value in = Value::integer(5);
  Value one = Value::integer(1);
  std::vector<const Value*> outs{&one, &one};
  ExprEnv env{&in, &outs};
  EXPECT_EQ(scalar_slot(ex::add(ex::out(1, Scalar::Int), ex::out(2, Scalar::Int))).eval(env), Value::integer(2));
  EXPECT_EQ(scalar_slot(ex::ite(ex::bool_const(true), ex::in0(Scalar::Int), ex::int_const(0))).eval(env),
            Value::integer(5));
  EXPECT_FALSE(scalar_slot(ex::div(ex::int_const(1), ex::sub(ex::in0(Scalar::Int), ex::in0(Scalar::Int)))).eval(env));
  // The branch not taken may fault.
  EXPECT_EQ(scalar_slot(ex::ite(ex::bool_const(false), ex::div(ex::int_const(1), ex::int_const(0)), ex::int_const(3)))
                .eval(env),
            Value::integer(3));
}

TEST(EvalExpr, MatchesReferenceEvaluatorOnRandomExpressions) {
  Rng rng(21);
  for (int i = 0; i < 5000; ++i) {
    std::vector<std::size_t> outs{1, 2};
    ExprPtr e = testing::random_int_expr(rng, outs, 3);
    Value in = Value::integer(rng.range(-8, 8));
    Value y1 = Value::integer(rng.range(-8, 8)), y2 = Value::integer(rng.range(-8, 8));
    std::vector<const Value*> ptrs{&y1, &y2};
    ExprEnv env{&in, &ptrs};
    auto got = scalar_slot(e).eval(env);
    auto want = testing::ref_eval(*e, in, {y1, y2});
    ASSERT_EQ(got.has_value(), want.has_value()) << print_expr(*e);
    if (got) EXPECT_EQ(got->as_int(), *want) << print_expr(*e);
  }
}

TEST(CheckConsistent, SumOfTwoChildrenFlowingX0) {
  LanguageBundle b = load_language("intarith");
  const Grammar& g = b.grammar;
  Constraint f = rule_from_text(b,
                                "(rule (head Sem_E (plus t1 t2) x0 y0) (body (child Sem_E t1 x1 y1) "
                                "(child Sem_E t2 x2 y2) (flow 1 x0) (flow 2 x0) (out (+ y1 y2)) (guard true)))");
  Example root{Value::integer(0), parse_term("(plus (x) (lit1))", g), Value::integer(1)};
  std::vector<Summary> sums{{parse_term("(x)", g), {{Value::integer(0), Value::integer(0)}}},
                            {parse_term("(lit1)", g), {{Value::integer(0), Value::integer(1)}}}};
  EXPECT_TRUE(check_consistent(f, root, summary_lookup(sums)).consistent());
}

TEST(CheckConsistent, WrongConstantIsInconsistent) {
  LanguageBundle b = load_language("imp1");
  Constraint c = rule_from_text(b, "(rule (head Sem_E (lit0) x0 y0) (body (out 1) (guard true)))");
  Verdict v = check_consistent(c, Example{Value::integer(0), parse_term("(lit0)", b.grammar), Value::integer(0)},
                               summary_lookup({}));
  EXPECT_EQ(v.kind, Verdict::Kind::Inconsistent);
  ASSERT_TRUE(v.produced);
  EXPECT_EQ(*v.produced, Value::integer(1));
}

TEST(CheckConsistent, SequenceMissesSecondChildInput) {
  LanguageBundle b = load_language("imp1");
  const Grammar& g = b.grammar;
  Constraint seq = rule_from_text(b,
                                  "(rule (head Sem_S (seq t1 t2) x0 y0) (body (child Sem_S t1 x1 y1) "
                                  "(child Sem_S t2 x2 y2) (flow 1 x0) (flow 2 y1) (out y2) (guard true)))");
  Term t = parse_term("(seq (assign_x (lit1)) (assign_x (lit0)))", g);
  Value y1 = interpret(b, t.child(0), Value::integer(0)).value;
  ASSERT_EQ(y1, Value::integer(1));
  std::vector<Summary> sums{{t.child(0), {{Value::integer(0), y1}}},
                            {t.child(1), {{Value::integer(0), Value::integer(0)}}}};
  Verdict v = check_consistent(seq, Example{Value::integer(0), t, Value::integer(0)}, summary_lookup(sums));
  ASSERT_TRUE(v.miss());
  EXPECT_EQ(v.child, 2u);
  EXPECT_EQ(v.missing, Value::integer(1));
}

TEST(CheckConsistent, DivergingChildIsBottomUnlessRead) {
  LanguageBundle b = load_language("imp1");
  const Grammar& g = b.grammar;
  Term t = parse_term("(seq (while (true) (dec_x)) (assign_x (lit0)))", g);
  SummaryStore store;
  ChildOracle oracle(b, store, 100);
  Constraint ignores = rule_from_text(b,
                                      "(rule (head Sem_S (seq t1 t2) x0 y0) (body (child Sem_S t1 x1 y1) "
                                      "(child Sem_S t2 x2 y2) (flow 1 x0) (flow 2 x0) (out y2) (guard true)))");
  Constraint reads = rule_from_text(b,
                                    "(rule (head Sem_S (seq t1 t2) x0 y0) (body (child Sem_S t1 x1 y1) "
                                    "(child Sem_S t2 x2 y2) (flow 1 x0) (flow 2 y1) (out y2) (guard true)))");
  Example e{Value::integer(3), t, Value::integer(0)};
  EXPECT_TRUE(complete_summaries(ignores, {e}, oracle).consistent());
  EXPECT_EQ(complete_summaries(reads, {e}, oracle).kind, CompletionResult::Kind::Inconsistent);
}

TEST(CheckConsistent, AgreesWithImplicationOracle) {
  Grammar g = load_grammar(testing::kOracleGrammar);
  Rng rng(1234);
  std::size_t misses = 0, holds = 0, fails = 0;
  for (int i = 0; i < 1000; ++i) {
    testing::Eq3Instance inst = testing::random_eq3_instance(g, rng);
    std::string bad = testing::eq3_disagreement(inst, g);
    ASSERT_TRUE(bad.empty()) << bad;
    Verdict v = check_consistent(inst.c, inst.ex, summary_lookup(inst.summaries));
    misses += v.miss();
    holds += v.consistent();
    fails += v.kind == Verdict::Kind::Inconsistent;
  }
  // Every verdict class is exercised.
  EXPECT_GT(misses, 50u);
  EXPECT_GT(holds, 50u);
  EXPECT_GT(fails, 50u);
}

TEST(CompleteSummaries, PropagatesDataFlowThroughSequence) {
  LanguageBundle b = load_language("imp1");
  const Grammar& g = b.grammar;
  Constraint seq = rule_from_text(b,
                                  "(rule (head Sem_S (seq t1 t2) x0 y0) (body (child Sem_S t1 x1 y1) "
                                  "(child Sem_S t2 x2 y2) (flow 1 x0) (flow 2 y1) (out y2) (guard true)))");
  Term t = parse_term("(seq (assign_x (plus (var_x) (lit1))) (assign_x (plus (var_x) (var_x))))", g);
  SummaryStore store;
  // The child triples gathered at the root's own input.
  store.record(*make_example(b, t.child(0), Value::integer(2), 1000));
  store.record(*make_example(b, t.child(1), Value::integer(2), 1000));
  ChildOracle oracle(b, store, 1000);
  CompletionResult r = complete_summaries(seq, {*make_example(b, t, Value::integer(2), 1000)}, oracle);
  EXPECT_TRUE(r.consistent());
  EXPECT_EQ(r.resolved, 1u);
  Summary s = store.summary(t.child(1));
  EXPECT_EQ(s.entries.size(), 2u);
  EXPECT_EQ(s.entries.at(Value::integer(3)), Value::integer(6));
}

TEST(CompleteSummaries, NullaryLeavesStoreUntouched) {
  LanguageBundle b = load_language("imp1");
  Constraint c = rule_from_text(b, "(rule (head Sem_E (lit0) x0 y0) (body (out 0) (guard true)))");
  SummaryStore store;
  ChildOracle oracle(b, store, 1000);
  std::vector<Example> ex{*make_example(b, parse_term("(lit0)", b.grammar), Value::integer(4), 1000)};
  CompletionResult r = complete_summaries(c, ex, oracle);
  EXPECT_TRUE(r.consistent());
  EXPECT_EQ(store.entries(), 0u);
  EXPECT_TRUE(r.derived.empty());
}

TEST(CompleteSummaries, DivergingSelfFlowIsRejected) {
  LanguageBundle b = load_language("imp1");
  const Grammar& g = b.grammar;
  // Always recurse on x0 + 1: the chase never closes.
  Constraint c = rule_from_text(b,
                                "(rule :nonrec (head Sem_S (while t1 t2) x0 y0) (body (child Sem_B t1 x1 y1) "
                                "(child Sem_S t2 x2 y2) (flow 1 x0) (flow 2 x0) (out x0) (guard (not true))))\n"
                                "(rule :rec (head Sem_S (while t1 t2) x0 y0) (body (child Sem_B t1 x1 y1) "
                                "(child Sem_S t2 x2 y2) (child Sem_S (while t1 t2) x3 y3) (flow 1 x0) (flow 2 x0) "
                                "(flow 3 (+ x0 1)) (out y3) (guard true)))");
  // Returns 0 on every non-negative input, so each step of the chain agrees.
  Term t = parse_term("(while (lt (lit0) (var_x)) (assign_x (lit0)))", g);
  SummaryStore store;
  ChildOracle oracle(b, store, 1000);
  CompletionResult r = complete_summaries(c, {*make_example(b, t, Value::integer(0), 1000)}, oracle);
  EXPECT_EQ(r.kind, CompletionResult::Kind::CandidateRejected);
  EXPECT_GT(r.resolved, kChaseCap);
}

TEST(CompleteSummaries, SelfCycleIsRejected) {
  LanguageBundle b = load_language("imp1");
  Constraint c = rule_from_text(b,
                                "(rule :nonrec (head Sem_S (while t1 t2) x0 y0) (body (child Sem_B t1 x1 y1) "
                                "(child Sem_S t2 x2 y2) (flow 1 x0) (flow 2 x0) (out x0) (guard (not true))))\n"
                                "(rule :rec (head Sem_S (while t1 t2) x0 y0) (body (child Sem_B t1 x1 y1) "
                                "(child Sem_S t2 x2 y2) (child Sem_S (while t1 t2) x3 y3) (flow 1 x0) (flow 2 x0) "
                                "(flow 3 x0) (out y3) (guard true)))");
  SummaryStore store;
  ChildOracle oracle(b, store, 1000);
  Term t = parse_term("(while (false) (dec_x))", b.grammar);
  EXPECT_EQ(complete_summaries(c, {*make_example(b, t, Value::integer(5), 1000)}, oracle).kind,
            CompletionResult::Kind::CandidateRejected);
}

TEST(EvalSemantics, GoldenLoopAndLimit) {
  LanguageBundle b = load_language("imp1");
  const Grammar& g = b.grammar;
  Semantics gold = parse_chc(b.golden_chc, g);
  Term loop = parse_term("(while (lt (lit0) (var_x)) (assign_x (minus (var_x) (lit1))))", g);
  EXPECT_EQ(eval_semantics(gold, g, loop, Value::integer(3)), InterpResult::ok(Value::integer(0)));
  EXPECT_EQ(eval_semantics(gold, g, loop, Value::integer(3), 0).status, Status::Nontermination);
  EXPECT_EQ(eval_semantics(gold, g, loop, Value::integer(3), 3), InterpResult::ok(Value::integer(0)));
  EXPECT_EQ(eval_semantics(gold, g, parse_term("(lit0)", g), Value::integer(-7)), InterpResult::ok(Value::integer(0)));
}

TEST(EvalSemantics, IteExprDivisionByZeroIsStuck) {
  LanguageBundle b = load_language("iteexpr");
  Semantics gold = parse_chc(b.golden_chc, b.grammar);
  Term t = parse_term("(atom (div (num (lit3)) (x)))", b.grammar);
  EXPECT_EQ(eval_semantics(gold, b.grammar, t, Value::integer(0)).status, Status::Stuck);
}

// Differential check of every reference semantics against its interpreter.
TEST(EvalSemantics, GoldenAgreesWithInterpreter) {
  for (const std::string& id : language_ids()) {
    LanguageBundle b = load_language(id);
    const Grammar& g = b.grammar;
    Semantics gold = parse_chc(b.golden_chc, g);
    FuzzConfig cfg;
    Rng rng = Rng::stream(99, 0);
    std::size_t ok = 0;
    for (int i = 0; i < 10000; ++i) {
      std::size_t nt = rng.below(g.nonterminals().size());
      Term t = gen_term_for(g, nt, cfg, rng);
      Value in = gen_input(g.nonterminal(nt).input, cfg, rng);
      InterpResult want = interpret(b, t, in, cfg.recursion_limit);
      InterpResult got = eval_semantics(gold, g, t, in, cfg.recursion_limit);
      ASSERT_EQ(want.is_ok(), got.is_ok()) << id << " " << print_term(t, g) << " on " << in.to_string();
      if (want.is_ok()) {
        ASSERT_EQ(want.value, got.value) << id << " " << print_term(t, g) << " on " << in.to_string();
        ++ok;
      }
    }
    EXPECT_GT(ok, 5000u) << id;
  }
}

TEST(EmitChc, CubeHasFiveBlocksAndLoopsHaveSelfChild) {
  LanguageBundle cube = load_language("cube3");
  std::string text = emit_chc(parse_chc(cube.golden_chc, cube.grammar), cube.grammar);
  EXPECT_EQ(count_of(text, "(rule"), 5u);

  LanguageBundle imp = load_language("imp1");
  Semantics gold = parse_chc(imp.golden_chc, imp.grammar);
  Semantics only_while;
  only_while.language = "imp1";
  only_while.rules[*imp.grammar.find_production("while")] = gold.rules.at(*imp.grammar.find_production("while"));
  std::string loop = emit_chc(only_while, imp.grammar);
  EXPECT_EQ(count_of(loop, "(rule :nonrec"), 1u);
  EXPECT_EQ(count_of(loop, "(rule :rec"), 1u);
  EXPECT_EQ(count_of(loop, "(child Sem_S (while t1 t2) x3 y3)"), 1u);
}

TEST(EmitChc, EmptySemanticsIsHeaderOnly) {
  LanguageBundle b = load_language("imp1");
  Semantics empty;
  empty.language = "imp1";
  EXPECT_EQ(emit_chc(empty, b.grammar), "(semantics :language imp1 :format 1)\n");
  EXPECT_TRUE(parse_chc(emit_chc(empty, b.grammar), b.grammar).rules.empty());
}

TEST(EmitChc, RoundTripsEveryGoldenSemantics) {
  for (const std::string& id : language_ids()) {
    LanguageBundle b = load_language(id);
    Semantics s = parse_chc(b.golden_chc, b.grammar);
    EXPECT_EQ(s.rules.size(), b.grammar.productions().size()) << id;
    std::string text = emit_chc(s, b.grammar);
    Semantics back = parse_chc(text, b.grammar);
    ASSERT_EQ(back.rules.size(), s.rules.size());
    for (const auto& [prod, rule] : s.rules) EXPECT_TRUE(back.rules.at(prod) == rule) << id << " " << prod;
    EXPECT_EQ(emit_chc(back, b.grammar), text);
    for (const auto& [prod, rule] : s.rules) {
      EXPECT_EQ(validate_constraint(rule, b.grammar), "") << id << " " << prod;
    }
  }
}

TEST(EmitChc, ParseErrors) {
  LanguageBundle b = load_language("imp1");
  EXPECT_THROW(parse_chc("(rule)", b.grammar), ParseError);
  EXPECT_THROW(parse_chc("(semantics :language imp1 :format 2)", b.grammar), ParseError);
  EXPECT_ANY_THROW(parse_chc("(semantics :language imp1 :format 1)\n(rule (head Sem_E (frob) x0 y0) (body (out 0) "
                             "(guard true)))",
                             b.grammar));
  EXPECT_ANY_THROW(parse_chc("(semantics :language imp1 :format 1)\n(rule (head Sem_E (lit0) x0 y0) (body (out y4) "
                             "(guard true)))",
                             b.grammar));
}

}  // namespace
}  // namespace semsynth
