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

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "semsynth/semsynth.hpp"

namespace semsynth {
namespace {

TEST(Arith, OverflowAndDivisionByZeroFault) {
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  EXPECT_EQ(arith::add(2, 3), 5);
  EXPECT_FALSE(arith::add(kMax, 1));
  EXPECT_FALSE(arith::sub(-kMax, 1));  // would land on the fault marker
  EXPECT_FALSE(arith::mul(kMax, 2));
  EXPECT_FALSE(arith::div(1, 0));
  EXPECT_EQ(arith::div(-7, 2), -3);
  EXPECT_EQ(arith::div(7, -2), -3);
}

TEST(Value, JsonRoundTripPerType) {
  ValueType pair = ValueType::tuple({Scalar::Int, Scalar::Bool});
  Value v = Value::tuple({Value::integer(-4), Value::boolean(true)});
  EXPECT_TRUE(v.matches(pair));
  EXPECT_FALSE(v.matches(ValueType::integer()));
  EXPECT_EQ(value_to_json(v).dump(), "[-4,true]");
  EXPECT_EQ(value_from_json(value_to_json(v), pair), v);
  EXPECT_EQ(value_from_json(nlohmann::json::parse("7"), ValueType::integer()), Value::integer(7));
  EXPECT_THROW(value_from_json(nlohmann::json::parse("true"), ValueType::integer()), Error);
  EXPECT_THROW(value_from_json(nlohmann::json::parse("[1]"), pair), Error);
}

TEST(Value, BoolAndIntWithSameCellDiffer) {
  EXPECT_NE(Value::integer(1), Value::boolean(true));
  EXPECT_EQ(zero_value(ValueType::tuple({Scalar::Int, Scalar::Int})),
            Value::tuple({Value::integer(0), Value::integer(0)}));
}

TEST(SExpr, PrintParseRoundTrip) {
  const std::string text = "(rule (head Sem_S (seq t1 t2) x0 y0) (out -3))";
  EXPECT_EQ(print_sexpr(parse_sexpr(text)), text);
  EXPECT_THROW(parse_sexpr("(a (b)"), ParseError);
  EXPECT_THROW(parse_sexpr("a b"), ParseError);
  EXPECT_THROW(parse_sexpr(")"), ParseError);
}

TEST(Grammar, ImpOneHasSeventeenProductions) {
  Grammar g = load_language("imp1").grammar;
  ASSERT_EQ(g.nonterminals().size(), 3u);
  EXPECT_EQ(g.nonterminal(0).name, "E");
  EXPECT_EQ(g.nonterminal(1).name, "B");
  EXPECT_EQ(g.nonterminal(2).name, "S");
  EXPECT_EQ(g.productions().size(), 17u);
  EXPECT_TRUE(g.production(*g.find_production("while")).recursive);
  EXPECT_TRUE(g.production(*g.find_production("do_while")).recursive);
  EXPECT_FALSE(g.production(*g.find_production("seq")).recursive);
}

TEST(Grammar, CubeProductionsInFileOrder) {
  Grammar g = load_language("cube3").grammar;
  std::vector<std::string> ops;
  for (const Production& p : g.productions()) ops.push_back(p.op);
  EXPECT_EQ(ops, (std::vector<std::string>{"v0", "v1", "v2", "var", "and"}));
}

TEST(Grammar, PrintedGrammarReloadsIdentically) {
  for (const std::string& id : language_ids()) {
    Grammar g = load_language(id).grammar;
    EXPECT_EQ(print_grammar(load_grammar(print_grammar(g))), print_grammar(g)) << id;
  }
}

void expect_load_error(const std::string& text, const std::string& needle) {
  try {
    load_grammar(text);
    ADD_FAILURE() << "accepted: " << text;
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(Grammar, LoadErrors) {
  expect_load_error("(grammar (nt E :in int :out int) (prod E f (Q)) (start E))", "undeclared nonterminal");
  expect_load_error("(grammar (nt E :in int :out int) (prod E f (E)) (start E))", "unproductive nonterminal");
  expect_load_error("(grammar (nt E :in int :out int) (prod E a ()) (prod E f (E)) (prod E f (E E)) (start E))",
                    "rank mismatch");
  expect_load_error(
      "(grammar (nt E :in int :out int) (nt F :in int :out int) (prod E a ()) (prod F a ()) (start E))",
      "ambiguous grammar");
  expect_load_error("(grammar (nt E :in int :out int) (prod E a ()))", "no start");
  expect_load_error("(grammar (nt E :in int :out int) (prod E a () :weird) (start E))", "unknown production flag");
  expect_load_error("(grammar (nt E :in int :out int) (prod E a ()) (start E)", "parse error");
}

TEST(Term, ParseExamples) {
  Grammar g = load_language("imp1").grammar;
  const std::string seq = "(seq (assign_x (lit0)) (assign_x (plus (var_x) (lit1))))";
  Term t = parse_term(seq, g);
  EXPECT_EQ(g.production(t.production()).op, "seq");
  EXPECT_EQ(t.size(), 7u);
  EXPECT_EQ(print_term(t, g), seq);

  Term loop = parse_term("(while (lt (lit0) (var_x)) (dec_x))", g);
  EXPECT_EQ(g.nonterminal(term_nonterminal(loop, g)).name, "S");
  EXPECT_EQ(g.nonterminal(term_nonterminal(parse_term("(lit0)", g), g)).name, "E");
  EXPECT_EQ(g.nonterminal(term_nonterminal(parse_term("(lt (var_x) (lit1))", g), g)).name, "B");
}

TEST(Term, ParseErrors) {
  Grammar g = load_language("imp1").grammar;
  EXPECT_THROW(parse_term("(plus (lit0))", g), TermError);
  EXPECT_THROW(parse_term("(frob)", g), TermError);
  EXPECT_THROW(parse_term("(assign_x (true))", g), TermError);
  EXPECT_THROW(parse_term("(seq (dec_x)", g), ParseError);
  EXPECT_THROW(term_nonterminal(Term(), g), TermError);
}

TEST(Term, NullaryBareAtomParses) {
  Grammar g = load_language("imp1").grammar;
  EXPECT_EQ(parse_term("lit1", g), parse_term("(lit1)", g));
}

TEST(Term, RandomTermsRoundTrip) {
  for (const std::string& id : language_ids()) {
    Grammar g = load_language(id).grammar;
    FuzzConfig cfg;
    cfg.max_term_depth = 5;
    Rng rng(17);
    for (std::size_t i = 0; i < 300; ++i) {
      Term t = gen_term_for(g, i % g.nonterminals().size(), cfg, rng);
      ASSERT_TRUE(well_typed(t, g));
      std::string text = print_term(t, g);
      EXPECT_EQ(parse_term(text, g), t) << id << ": " << text;
      EXPECT_EQ(print_term(parse_term(text, g), g), text);
    }
  }
}

TEST(Rng, StreamsAreDeterministicAndDistinct) {
  Rng a = Rng::stream(5, 1), b = Rng::stream(5, 1), c = Rng::stream(5, 2);
  bool differs = false;
  for (int i = 0; i < 16; ++i) {
    std::uint64_t x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
  Rng r(3);
  for (int i = 0; i < 1000; ++i) {
    std::int64_t v = r.range(-8, 8);
    EXPECT_GE(v, -8);
    EXPECT_LE(v, 8);
    double u = r.unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(SummaryStore, LookupIsPureAndFunctional) {
  LanguageBundle b = load_language("imp1");
  Term t = parse_term("(assign_x (plus (var_x) (lit1)))", b.grammar);
  SummaryStore store;
  EXPECT_EQ(store.lookup(t, Value::integer(3)), nullptr);
  const InterpResult& r = store.resolve(b, t, Value::integer(3), 1000);
  EXPECT_EQ(r, InterpResult::ok(Value::integer(4)));
  EXPECT_EQ(*store.lookup(t, Value::integer(3)), r);
  EXPECT_EQ(*store.lookup(t, Value::integer(3)), r);
  store.resolve(b, t, Value::integer(3), 1000);
  EXPECT_EQ(store.interpreter_calls(), 1u);
  EXPECT_THROW(store.record(t, Value::integer(3), InterpResult::ok(Value::integer(9))), Error);
  Summary s = store.summary(t);
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries.at(Value::integer(3)), Value::integer(4));
}

}  // namespace
}  // namespace semsynth
