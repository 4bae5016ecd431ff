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


#ifndef SEMSYNTH_DRIVER_HPP_
#define SEMSYNTH_DRIVER_HPP_

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "semsynth/consistency.hpp"
#include "semsynth/constraint.hpp"
#include "semsynth/deadline.hpp"
#include "semsynth/enumerate.hpp"
#include "semsynth/example.hpp"
#include "semsynth/interp.hpp"
#include "semsynth/synth.hpp"
#include "semsynth/verify.hpp"

namespace semsynth {

// A broken runtime invariant; the run stops.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Expression operators per bundled language. Only the imperative languages
// thread one child's output into a sibling's input.
inline ComponentGrammar language_component_grammar(const std::string& id) {
  ComponentGrammar cg = default_component_grammar();
  if (id == "iteexpr") cg.int_ops.push_back(ExprKind::Div);
  if (id == "imp1" || id == "imp2") cg.allow_sibling_flow = true;
  return cg;
}

struct RunConfig {
  std::string language;
  FuzzConfig fuzz;
  std::optional<ComponentGrammar> grammar;  // replaces the language default
  bool multi_output = true;
  std::chrono::milliseconds per_production_timeout{600'000};
  std::chrono::milliseconds global_timeout{3'600'000};
  // CEGIS rounds per production before giving up with no_solution.
  std::size_t max_iterations = 500;
  // Size bounds tried in turn, each across the whole permutation schedule.
  std::vector<std::size_t> size_ladder{9, 13};
  // Flow candidates per slot tried in turn.
  std::vector<std::size_t> flow_caps{1, 3};
  // Receives one line per candidate and counterexample when set.
  std::function<void(const std::string&)> trace;

  void validate() const {
    fuzz.validate();
    if (per_production_timeout.count() <= 0 || global_timeout.count() <= 0) throw Error("timeouts must be positive");
    if (max_iterations < 1) throw Error("max_iterations must be at least 1");
    if (size_ladder.empty() || flow_caps.empty()) throw Error("size ladder and flow caps must be nonempty");
    if (grammar) grammar->validate();
  }
};

// Reads a RunConfig from JSON over `base`. Keys: language, seed,
// input_bound, max_term_depth, samples_per_check, recursion_limit,
// learned_weight, multi_output, per_production_timeout_ms,
// global_timeout_ms, max_iterations, grammar (component grammar overrides).
inline RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base) {
  if (j.contains("language")) base.language = j["language"].get<std::string>();
  if (j.contains("seed")) base.fuzz.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("input_bound")) base.fuzz.input_bound = j["input_bound"].get<std::int64_t>();
  if (j.contains("max_term_depth")) base.fuzz.max_term_depth = j["max_term_depth"].get<std::size_t>();
  if (j.contains("samples_per_check")) base.fuzz.samples_per_check = j["samples_per_check"].get<std::size_t>();
  if (j.contains("recursion_limit")) base.fuzz.recursion_limit = j["recursion_limit"].get<std::size_t>();
  if (j.contains("learned_weight")) base.fuzz.learned_weight = j["learned_weight"].get<double>();
  if (j.contains("multi_output")) base.multi_output = j["multi_output"].get<bool>();
  if (j.contains("per_production_timeout_ms")) {
    base.per_production_timeout = std::chrono::milliseconds(j["per_production_timeout_ms"].get<std::int64_t>());
  }
  if (j.contains("global_timeout_ms")) {
    base.global_timeout = std::chrono::milliseconds(j["global_timeout_ms"].get<std::int64_t>());
  }
  if (j.contains("max_iterations")) base.max_iterations = j["max_iterations"].get<std::size_t>();
  if (j.contains("grammar")) {
    ComponentGrammar start = base.grammar ? *base.grammar : language_component_grammar(base.language);
    base.grammar = component_grammar_from_json(j["grammar"], start);
  }
  base.validate();
  return base;
}

enum class ProductionStatus { Solved, Timeout, NoSolution };

inline const char* production_status_name(ProductionStatus s) {
  switch (s) {
    case ProductionStatus::Solved:
      return "solved";
    case ProductionStatus::Timeout:
      return "timeout";
    case ProductionStatus::NoSolution:
      return "no_solution";
  }
  return "?";
}

struct ProductionReport {
  std::size_t production = 0;
  std::string op;
  std::string lhs;
  std::string kind;  // rule shape of the accepted constraint, empty otherwise
  ProductionStatus status = ProductionStatus::NoSolution;
  std::size_t iterations = 0;
  std::size_t examples = 0;
  std::size_t constraint_size = 0;
  bool multi_output = false;  // accepted constraint came from per-component synthesis
  double synth_ms = 0;
  double check_ms = 0;
  double total_ms = 0;
};

struct RunReport {
  std::string language;
  std::uint64_t seed = 0;
  bool multi_output = true;
  std::vector<ProductionReport> productions;

  bool all_solved() const {
    return std::all_of(productions.begin(), productions.end(),
                       [](const ProductionReport& p) { return p.status == ProductionStatus::Solved; });
  }
};

inline constexpr int kReportSchemaVersion = 1;

// Deterministic JSON: fixed key order; only the *_ms fields vary between
// identical runs.
inline std::string write_report(const RunReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["language"] = r.language;
  j["seed"] = r.seed;
  j["multi_output"] = r.multi_output;
  j["status"] = r.all_solved() ? "solved" : "partial";
  j["productions"] = nlohmann::ordered_json::array();
  for (const ProductionReport& p : r.productions) {
    nlohmann::ordered_json e;
    e["production"] = p.op;
    e["lhs"] = p.lhs;
    e["kind"] = p.kind;
    e["status"] = production_status_name(p.status);
    e["iterations"] = p.iterations;
    e["examples"] = p.examples;
    e["constraint_size"] = p.constraint_size;
    e["multi_output"] = p.multi_output;
    e["synth_ms"] = static_cast<std::int64_t>(p.synth_ms);
    e["check_ms"] = static_cast<std::int64_t>(p.check_ms);
    e["total_ms"] = static_cast<std::int64_t>(p.total_ms);
    j["productions"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

// Per-component synthesis outcome kept for inspection.
struct MergeRecord {
  std::size_t production = 0;
  std::vector<PartialConstraint> partials;
  Constraint merged;
};

struct RunStats {
  std::size_t candidates = 0;
  std::size_t counterexamples = 0;
  std::size_t derived_examples = 0;
  // Examples an accepted rule fails to reproduce at the end of the run.
  std::size_t soundness_violations = 0;
};

struct RunResult {
  Semantics semantics;
  RunReport report;
  std::map<std::size_t, std::vector<Example>> examples;
  std::vector<MergeRecord> merges;
  RunStats stats;
};

// Processing order: nullary productions, then by ascending rank, with
// recursive productions last; ties keep grammar order.
inline std::vector<std::size_t> production_order(const Grammar& g) {
  std::vector<std::size_t> order(g.productions().size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Production& pa = g.production(a);
    const Production& pb = g.production(b);
    if (pa.recursive != pb.recursive) return !pa.recursive;
    return pa.rank() < pb.rank();
  });
  return order;
}

// Verifier stream for one CEGIS round.
inline Rng verify_stream(std::uint64_t seed, std::size_t production, std::size_t iteration) {
  return Rng::stream(seed, (static_cast<std::uint64_t>(production) << 32) | iteration);
}

namespace detail {

struct Candidate {
  Constraint constraint;
  std::vector<Example> derived;
  std::optional<MergeRecord> merge;
};

// Escalation: size bound, then permutation, then flow cap; within one step
// the plain form (per-component first when enabled), then the guarded form.
// Recursive productions use only the recursive form.
inline std::optional<Candidate> synthesize_candidate(const LanguageBundle& b, const RunConfig& cfg,
                                                     const ComponentGrammar& cg, std::size_t prod,
                                                     const std::vector<Example>& examples, ChildOracle& oracle,
                                                     const Deadline& deadline) {
  const Production& p = b.grammar.production(prod);
  const ValueType& out_t = b.grammar.nonterminal(p.lhs).output;
  // Without sibling flow every order yields the same rows.
  auto perms = cg.allow_sibling_flow ? permute_schedule(p.rank()) : std::vector<std::vector<std::size_t>>{identity_perm(p.rank())};
  for (std::size_t size : cfg.size_ladder) {
    for (const auto& perm : perms) {
      for (std::size_t cap : cfg.flow_caps) {
        SynthesisProblem prob;
        prob.production = prod;
        prob.examples = &examples;
        prob.oracle = &oracle;
        prob.cg = cg;
        prob.cg.max_expr_size = size;
        prob.perm = perm;
        prob.flow_cap = cap;
        prob.deadline = &deadline;
        if (p.recursive) {
          SynthResult r = synth_recursive(prob, b);
          if (r.constraint) return Candidate{*r.constraint, std::move(r.derived), std::nullopt};
          continue;
        }
        if (cfg.multi_output && out_t.is_tuple() && out_t.arity() >= 2) {
          MultiOutputResult m = synth_multi_output(prob, b, out_t.arity());
          if (m.constraint) {
            return Candidate{*m.constraint, {}, MergeRecord{prod, std::move(m.partials), *m.constraint}};
          }
        }
        SynthResult r = synth_constraint(prob, b);
        if (r.constraint) return Candidate{*r.constraint, std::move(r.derived), std::nullopt};
        r = synth_guarded(prob, b);
        if (r.constraint) return Candidate{*r.constraint, std::move(r.derived), std::nullopt};
      }
    }
  }
  return std::nullopt;
}

inline double elapsed_ms(Deadline::Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Deadline::Clock::now() - since).count();
}

struct PairHash {
  std::size_t operator()(const std::pair<Term, Value>& k) const { return k.first.hash() * 31 + k.second.hash(); }
};

}  // namespace detail

// The CEGIS loop over every production. Summaries live in one store for the
// whole run; already-learned productions stand in for the interpreter on
// fully covered child terms.
inline RunResult sem_synth(const LanguageBundle& b, const RunConfig& cfg) {
  cfg.validate();
  const Grammar& g = b.grammar;
  const ComponentGrammar cg = cfg.grammar ? *cfg.grammar : language_component_grammar(b.id);
  RunResult res;
  res.semantics.language = b.id;
  res.report.language = b.id;
  res.report.seed = cfg.fuzz.seed;
  res.report.multi_output = cfg.multi_output;
  SummaryStore store;
  ChildOracle oracle(b, store, cfg.fuzz.recursion_limit, &res.semantics);
  const Deadline global = Deadline::after(cfg.global_timeout);

  for (std::size_t prod : production_order(g)) {
    const Production& p = g.production(prod);
    ProductionReport pr;
    pr.production = prod;
    pr.op = p.op;
    pr.lhs = g.nonterminal(p.lhs).name;
    const auto started = Deadline::Clock::now();
    const Deadline deadline = global.min(Deadline::after(cfg.per_production_timeout));
    std::vector<Example>& examples = res.examples[prod];
    std::unordered_set<std::pair<Term, Value>, detail::PairHash> known;
    auto add_example = [&](const Example& e) { return known.emplace(e.term, e.input).second && (examples.push_back(e), true); };
    std::vector<Constraint> history;
    std::vector<bool> learned(g.productions().size(), false);
    for (const auto& [q, rule] : res.semantics.rules) learned[q] = true;
    try {
      for (std::size_t iter = 1;; ++iter) {
        deadline.check();
        if (iter > cfg.max_iterations) break;
        pr.iterations = iter;
        auto t0 = Deadline::Clock::now();
        auto cand = detail::synthesize_candidate(b, cfg, cg, prod, examples, oracle, deadline);
        pr.synth_ms += detail::elapsed_ms(t0);
        if (!cand) {
          if (cfg.trace) cfg.trace("search exhausted for " + p.op + " with " + std::to_string(examples.size()) + " examples");
          break;
        }
        ++res.stats.candidates;
        for (const Constraint& h : history) {
          if (h == cand->constraint) {
            throw InvariantViolation("candidate repeated for production " + p.op + ":\n" +
                                     emit_constraint(g, cand->constraint));
          }
        }
        history.push_back(cand->constraint);
        if (cfg.trace) cfg.trace("candidate " + p.op + " #" + std::to_string(iter) + "\n" + emit_constraint(g, cand->constraint));
        for (const Example& d : cand->derived) {
          if (add_example(d)) ++res.stats.derived_examples;
        }
        auto t1 = Deadline::Clock::now();
        Rng rng = verify_stream(cfg.fuzz.seed, prod, iter);
        VerifyResult vr = verify(cand->constraint, b, cfg.fuzz, rng, learned);
        pr.check_ms += detail::elapsed_ms(t1);
        if (!vr.cex) {
          pr.status = ProductionStatus::Solved;
          pr.kind = rule_kind_name(cand->constraint.kind);
          pr.constraint_size = cand->constraint.size();
          pr.multi_output = cand->merge.has_value();
          if (cand->merge) res.merges.push_back(std::move(*cand->merge));
          res.semantics.rules[prod] = cand->constraint;
          oracle.set_learned(&res.semantics);
          break;
        }
        ++res.stats.counterexamples;
        const CexBundle& cex = *vr.cex;
        if (cfg.trace) cfg.trace("counterexample " + example_to_string(cex.root, g));
        std::string bad = check_cex_invariants(cex, cand->constraint, b, cfg.fuzz.recursion_limit);
        if (!bad.empty()) throw InvariantViolation("counterexample for " + p.op + ": " + bad);
        for (const Example& e : cex.children) store.record(e);
        for (const FailedCall& f : cex.failed) store.record(f.term, f.input, InterpResult{f.status, Value()});
        if (!add_example(cex.root)) {
          throw InvariantViolation("counterexample for " + p.op + " repeats an example");
        }
        if (complete_summaries(cand->constraint, {cex.root}, oracle).consistent()) {
          throw InvariantViolation("candidate for " + p.op + " survives its own counterexample");
        }
      }
    } catch (const TimeoutError&) {
      pr.status = ProductionStatus::Timeout;
    }
    pr.examples = examples.size();
    pr.total_ms = detail::elapsed_ms(started);
    res.report.productions.push_back(pr);
  }

  // Every accepted rule must still reproduce every example of its production,
  // with child outputs taken from interpreter facts alone.
  ChildOracle facts(b, store, cfg.fuzz.recursion_limit);
  for (const auto& [prod, rule] : res.semantics.rules) {
    for (const Example& e : res.examples[prod]) {
      if (!complete_summaries(rule, {e}, facts).consistent()) ++res.stats.soundness_violations;
    }
  }
  return res;
}

}  // namespace semsynth

#endif  // SEMSYNTH_DRIVER_HPP_
