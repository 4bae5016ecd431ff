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

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "semsynth/semsynth.hpp"

namespace semsynth {
namespace {

RunResult run(const std::string& lang, std::uint64_t seed, bool multi = true) {
  RunConfig cfg;
  cfg.language = lang;
  cfg.fuzz.seed = seed;
  cfg.multi_output = multi;
  return sem_synth(load_language(lang), cfg);
}

// Report with the wall-clock fields removed.
nlohmann::json timeless(const std::string& report) {
  nlohmann::json j = nlohmann::json::parse(report);
  for (auto& p : j["productions"]) {
    p.erase("synth_ms");
    p.erase("check_ms");
    p.erase("total_ms");
  }
  return j;
}

TEST(Driver, ProductionOrderPutsLeavesFirstAndLoopsLast) {
  LanguageBundle b = load_language("imp1");
  const Grammar& g = b.grammar;
  std::vector<std::size_t> order = production_order(g);
  ASSERT_EQ(order.size(), g.productions().size());
  for (std::size_t i = 1; i < order.size(); ++i) {
    const Production& a = g.production(order[i - 1]);
    const Production& c = g.production(order[i]);
    EXPECT_TRUE(a.recursive <= c.recursive);
    if (a.recursive == c.recursive) {
      EXPECT_LE(a.rank(), c.rank());
      if (a.rank() == c.rank()) EXPECT_LT(order[i - 1], order[i]);
    }
  }
  EXPECT_EQ(g.production(order.back()).op, "do_while");
}

TEST(Driver, VerifyStreamsAreDistinctPerRound) {
  Rng a = verify_stream(1, 3, 0);
  Rng b = verify_stream(1, 3, 1);
  Rng c = verify_stream(1, 3, 0);
  std::uint64_t x = a.next();
  EXPECT_NE(x, b.next());
  EXPECT_EQ(x, c.next());
}

TEST(Driver, CubeSolvesAndMatchesGolden) {
  RunResult r = run("cube3", 1);
  ASSERT_TRUE(r.report.all_solved());
  EXPECT_EQ(r.stats.soundness_violations, 0u);
  LanguageBundle b = load_language("cube3");
  Semantics gold = parse_chc(b.golden_chc, b.grammar);
  FuzzConfig cfg;
  cfg.max_term_depth = 5;
  Rng rng = Rng::stream(77, 0);
  for (int i = 0; i < 2000; ++i) {
    Term t = gen_term_for(b.grammar, b.grammar.start(), cfg, rng);
    Value in = gen_input(b.grammar.nonterminal(b.grammar.start()).input, cfg, rng);
    InterpResult want = eval_semantics(gold, b.grammar, t, in, 1000);
    InterpResult got = eval_semantics(r.semantics, b.grammar, t, in, 1000);
    ASSERT_EQ(got.status, want.status) << print_term(t, b.grammar);
    if (want.is_ok()) ASSERT_EQ(got.value, want.value) << print_term(t, b.grammar);
  }
}

TEST(Driver, RunsAreDeterministic) {
  LanguageBundle b = load_language("iteexpr");
  RunResult a = run("iteexpr", 2);
  RunResult c = run("iteexpr", 2);
  EXPECT_EQ(emit_chc(a.semantics, b.grammar), emit_chc(c.semantics, b.grammar));
  EXPECT_EQ(timeless(write_report(a.report)), timeless(write_report(c.report)));
  EXPECT_EQ(a.stats.candidates, c.stats.candidates);
  EXPECT_EQ(a.examples, c.examples);
}

TEST(Driver, ReportSchema) {
  RunResult r = run("binop", 1);
  nlohmann::json j = nlohmann::json::parse(write_report(r.report));
  std::vector<std::string> top;
  for (auto it = j.begin(); it != j.end(); ++it) top.push_back(it.key());
  // nlohmann::json sorts keys; the writer's own order is checked below.
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["language"], "binop");
  EXPECT_EQ(j["seed"], 1);
  EXPECT_EQ(j["status"], "solved");
  EXPECT_EQ(top.size(), 6u);
  std::string text = write_report(r.report);
  EXPECT_LT(text.find("schema_version"), text.find("\"language\""));
  EXPECT_LT(text.find("\"status\""), text.find("\"productions\""));
  LanguageBundle b = load_language("binop");
  ASSERT_EQ(j["productions"].size(), b.grammar.productions().size());
  for (const auto& p : j["productions"]) {
    for (const char* k : {"production", "lhs", "kind", "status", "iterations", "examples", "constraint_size",
                          "multi_output", "synth_ms", "check_ms", "total_ms"}) {
      EXPECT_TRUE(p.contains(k)) << k;
    }
    EXPECT_EQ(p.size(), 11u);
    EXPECT_GE(p["iterations"].get<int>(), 1);
  }
}

class SevenInterpreter : public Interpreter {
 public:
  InterpResult eval(const Term&, const Value&, Fuel&) const override { return InterpResult::ok(Value::integer(7)); }
};

TEST(Driver, SingleLeafConstantOutsideBasePool) {
  LanguageBundle b;
  b.id = "seven";
  b.grammar = load_grammar("(grammar (nt E :in int :out int) (prod E seven ()) (start E))");
  b.interpreter = std::make_shared<SevenInterpreter>();
  RunConfig cfg;
  cfg.language = "seven";
  RunResult r = sem_synth(b, cfg);
  ASSERT_TRUE(r.report.all_solved());
  const Constraint& c = *r.semantics.find(0);
  for (std::int64_t x : {-5, 0, 3, 1000}) {
    InterpResult got = eval_semantics(r.semantics, b.grammar, parse_term("(seven)", b.grammar), Value::integer(x), 10);
    ASSERT_TRUE(got.is_ok());
    EXPECT_EQ(got.value, Value::integer(7)) << print_slot(c.output);
  }
}

TEST(Driver, ConfigFromJson) {
  RunConfig base;
  auto j = nlohmann::json::parse(R"({"language":"imp2","seed":9,"samples_per_check":50,"multi_output":false,
      "per_production_timeout_ms":1500,"max_iterations":7,"recursion_limit":200})");
  RunConfig c = run_config_from_json(j, base);
  EXPECT_EQ(c.language, "imp2");
  EXPECT_EQ(c.fuzz.seed, 9u);
  EXPECT_EQ(c.fuzz.samples_per_check, 50u);
  EXPECT_FALSE(c.multi_output);
  EXPECT_EQ(c.per_production_timeout.count(), 1500);
  EXPECT_EQ(c.max_iterations, 7u);
  EXPECT_EQ(c.fuzz.recursion_limit, 200u);
  EXPECT_EQ(c.global_timeout, base.global_timeout);
  EXPECT_THROW(run_config_from_json(nlohmann::json::parse(R"({"max_iterations":0})"), base), Error);
  EXPECT_THROW(run_config_from_json(nlohmann::json::parse(R"({"per_production_timeout_ms":0})"), base), Error);
}

TEST(Driver, TinyTimeoutReportsTimeout) {
  RunConfig cfg;
  cfg.language = "imp1";
  cfg.per_production_timeout = std::chrono::milliseconds(1);
  RunResult r = sem_synth(load_language("imp1"), cfg);
  EXPECT_FALSE(r.report.all_solved());
  std::size_t timeouts = 0;
  for (const ProductionReport& p : r.report.productions) {
    if (p.status == ProductionStatus::Timeout) ++timeouts;
    if (p.status != ProductionStatus::Solved) EXPECT_FALSE(r.semantics.covers(p.production));
  }
  EXPECT_GT(timeouts, 0u);
  EXPECT_EQ(r.stats.soundness_violations, 0u);
}

TEST(Driver, TraceSeesEveryCandidate) {
  RunConfig cfg;
  cfg.language = "cube3";
  std::size_t candidates = 0, cexs = 0;
  cfg.trace = [&](const std::string& line) {
    if (line.rfind("candidate ", 0) == 0) ++candidates;
    if (line.rfind("counterexample ", 0) == 0) ++cexs;
  };
  RunResult r = sem_synth(load_language("cube3"), cfg);
  EXPECT_EQ(candidates, r.stats.candidates);
  EXPECT_EQ(cexs, r.stats.counterexamples);
}

TEST(Driver, LearnedLoopsAgreeWithGolden) {
  LanguageBundle b = load_language("imp1");
  const Grammar& g = b.grammar;
  RunResult r = run("imp1", 3);
  ASSERT_TRUE(r.report.all_solved());
  Semantics gold = parse_chc(b.golden_chc, g);
  FuzzConfig cfg;
  cfg.max_term_depth = 5;
  std::size_t ok = 0;
  for (const char* op : {"while", "do_while"}) {
    std::size_t prod = *g.find_production(op);
    Rng rng = Rng::stream(31, prod);
    for (int i = 0; i < 500; ++i) {
      Term t = gen_term(g, prod, cfg, rng);
      Value in = gen_input(g.nonterminal(g.production(prod).lhs).input, cfg, rng);
      InterpResult want = eval_semantics(gold, g, t, in, 1000);
      InterpResult got = eval_semantics(r.semantics, g, t, in, 1000);
      ASSERT_EQ(got.status, want.status) << print_term(t, g) << " @ " << in.as_int();
      if (!want.is_ok()) continue;
      ++ok;
      ASSERT_EQ(got.value, want.value) << print_term(t, g) << " @ " << in.as_int();
    }
  }
  EXPECT_GT(ok, 300u);
}

}  // namespace
}  // namespace semsynth
