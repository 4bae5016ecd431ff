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

#ifndef SEMSYNTH_CONSISTENCY_HPP_
#define SEMSYNTH_CONSISTENCY_HPP_

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "semsynth/constraint.hpp"
#include "semsynth/example.hpp"
#include "semsynth/interp.hpp"

namespace semsynth {

// ---------------------------------------------------------------------------
// Executing a semantics.
//
// Children are evaluated on demand: a rule evaluates exactly the children its
// guard, its selected output and (for the recursive rule) its self-call flow
// read, transitively through flows, in evaluation order. A child that is never
// read cannot make the rule fail. The bundled interpreters are lazy in the
// same way (an `ite` runs only the taken branch), so non-Ok outcomes line up.
// ---------------------------------------------------------------------------

namespace detail {

class SemanticsEvaluator {
 public:
  SemanticsEvaluator(const Semantics& sem, const Grammar& g) : sem_(sem), g_(g) {}

  InterpResult eval(const Term& t, const Value& in, Fuel& fuel) const {
    const Constraint* c = sem_.find(t.production());
    if (!c) throw Error("semantics has no rule for " + g_.production(t.production()).op);
    Frame f(*c, t, in);
    switch (c->kind) {
      case RuleKind::Plain:
        return slot(f, c->output, fuel);
      case RuleKind::Guarded: {
        InterpResult gr = slot(f, c->guard, fuel);
        if (!gr.is_ok()) return gr;
        return slot(f, gr.value.as_bool() ? c->output : c->alt_output, fuel);
      }
      case RuleKind::Recursive: {
        InterpResult gr = slot(f, c->guard, fuel);
        if (!gr.is_ok()) return gr;
        if (!gr.value.as_bool()) return slot(f, c->alt_output, fuel);
        if (!fuel.consume()) return InterpResult::nonterm();
        InterpResult xr = slot(f, c->rec_flow, fuel);
        if (!xr.is_ok()) return xr;
        InterpResult yr = eval(t, xr.value, fuel);
        if (!yr.is_ok()) return yr;
        f.outs[t.rank()] = yr.value;
        f.done[t.rank()] = true;
        return slot(f, c->output, fuel);
      }
    }
    return InterpResult::stuck();
  }

 private:
  struct Frame {
    Frame(const Constraint& c, const Term& t, const Value& in)
        : c(c), t(t), in(in), outs(t.rank() + 1), done(t.rank() + 1, false), failed(t.rank() + 1) {}
    const Constraint& c;
    const Term& t;
    const Value& in;
    std::vector<Value> outs;
    std::vector<bool> done;
    std::vector<std::optional<Status>> failed;
  };

  // Marks in `need` the children (0-based) that reading `s` forces.
  void needed(const Frame& f, const SlotExpr& s, std::vector<bool>& need) const {
    for (std::size_t j = 1; j <= f.t.rank(); ++j) {
      if (!need[j - 1] && s.reads_out(j)) {
        need[j - 1] = true;
        needed(f, f.c.flows[j - 1], need);
      }
    }
  }

  InterpResult slot(Frame& f, const SlotExpr& s, Fuel& fuel) const {
    const std::size_t n = f.t.rank();
    std::vector<bool> need(n, false);
    needed(f, s, need);
    for (std::size_t child : f.c.perm) {
      if (!need[child] || f.done[child]) continue;
      if (f.failed[child]) return {*f.failed[child], Value()};
      InterpResult x = bare(f, f.c.flows[child]);
      if (!x.is_ok()) return x;
      InterpResult y = eval(f.t.child(child), x.value, fuel);
      if (!y.is_ok()) {
        f.failed[child] = y.status;
        return y;
      }
      f.outs[child] = y.value;
      f.done[child] = true;
    }
    return bare(f, s);
  }

  // Evaluates with every read child already available.
  InterpResult bare(const Frame& f, const SlotExpr& s) const {
    std::vector<const Value*> ptrs(f.outs.size(), nullptr);
    for (std::size_t j = 0; j < f.outs.size(); ++j) {
      if (f.done[j]) ptrs[j] = &f.outs[j];
    }
    ExprEnv env{&f.in, &ptrs};
    auto v = s.eval(env);
    return v ? InterpResult::ok(*v) : InterpResult::stuck();
  }

  const Semantics& sem_;
  const Grammar& g_;
};

}  // namespace detail

inline InterpResult eval_semantics(const Semantics& sem, const Grammar& g, const Term& t, const Value& in,
                                   std::size_t limit = 1000) {
  Fuel fuel(limit);
  return detail::SemanticsEvaluator(sem, g).eval(t, in, fuel);
}

// True when every production occurring in t has a rule in sem.
inline bool semantics_covers(const Semantics& sem, const Term& t) {
  if (!sem.covers(t.production())) return false;
  for (const Term& c : t.children()) {
    if (!semantics_covers(sem, c)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Consistency of a constraint with one example.
// ---------------------------------------------------------------------------

// Child-output source during a consistency check. Returns nullptr when the
// pair is not summarized (a miss); a non-Ok result marks a poisoned input.
using ChildLookup = std::function<const InterpResult*(const Term&, const Value&)>;

struct Verdict {
  enum class Kind { Consistent, Inconsistent, SummaryMiss };
  Kind kind = Kind::Consistent;
  // SummaryMiss: 1-based child position (rank + 1 for the self call), the
  // term looked up and the missing input.
  std::size_t child = 0;
  Term term;
  Value missing;
  // Inconsistent: produced output (absent when evaluation faulted) and the
  // forward valuation as text.
  std::optional<Value> produced;
  std::string witness;
  // Consistent via the recursive rule: the self-call input and output.
  std::optional<Value> self_input;
  std::optional<Value> self_output;

  bool consistent() const { return kind == Kind::Consistent; }
  bool miss() const { return kind == Kind::SummaryMiss; }
};

namespace detail {

inline std::string witness_text(const Value& in, const std::vector<std::optional<Value>>& xs,
                                const std::vector<std::optional<Value>>& ys) {
  std::string s = "x0=" + in.to_string();
  for (std::size_t j = 0; j < ys.size(); ++j) {
    s += " x" + std::to_string(j + 1) + "=" + (xs[j] ? xs[j]->to_string() : "_");
    s += " y" + std::to_string(j + 1) + "=" + (ys[j] ? ys[j]->to_string() : "_");
  }
  return s;
}

}  // namespace detail

// Forward evaluation of c on ex in evaluation order. Each child input comes
// from its flow and each child output from `lookup`. A child whose lookup is
// non-Ok (or whose flow reads such a child) is unavailable; that is fatal only
// when the guard or the selected output reads it. A flow that faults on its
// own is Inconsistent.
inline Verdict check_consistent(const Constraint& c, const Example& ex, const ChildLookup& lookup) {
  const std::size_t n = ex.term.rank();
  std::vector<std::optional<Value>> xs(n + 1), ys(n + 1);
  std::vector<bool> bottom(n + 1, false);
  std::vector<const Value*> ptrs(n + 1, nullptr);
  ExprEnv env{&ex.input, &ptrs};
  Verdict v;
  auto inconsistent = [&](std::optional<Value> produced) {
    v.kind = Verdict::Kind::Inconsistent;
    v.produced = std::move(produced);
    v.witness = detail::witness_text(ex.input, xs, ys);
    return v;
  };
  auto reads_bottom = [&](const SlotExpr& s) {
    for (std::size_t j = 1; j <= n + 1; ++j) {
      if (bottom[j - 1] && s.reads_out(j)) return true;
    }
    return false;
  };
  for (std::size_t child : c.perm) {
    const SlotExpr& f = c.flows[child];
    if (reads_bottom(f)) {
      bottom[child] = true;
      continue;
    }
    auto x = f.eval(env);
    if (!x) return inconsistent(std::nullopt);
    xs[child] = *x;
    const InterpResult* r = lookup(ex.term.child(child), *x);
    if (!r) {
      v.kind = Verdict::Kind::SummaryMiss;
      v.child = child + 1;
      v.term = ex.term.child(child);
      v.missing = *x;
      return v;
    }
    if (!r->is_ok()) {
      bottom[child] = true;
      continue;
    }
    ys[child] = r->value;
    ptrs[child] = &*ys[child];
  }
  const SlotExpr* out = &c.output;
  if (c.kind != RuleKind::Plain) {
    auto gv = c.guard.eval(env);
    if (!gv) return inconsistent(std::nullopt);
    bool holds = gv->as_bool();
    if (!holds) out = &c.alt_output;
    if (holds && c.kind == RuleKind::Recursive) {
      auto xr = c.rec_flow.eval(env);
      if (!xr) return inconsistent(std::nullopt);
      xs[n] = *xr;
      const InterpResult* r = lookup(ex.term, *xr);
      if (!r) {
        v.kind = Verdict::Kind::SummaryMiss;
        v.child = n + 1;
        v.term = ex.term;
        v.missing = *xr;
        return v;
      }
      if (!r->is_ok()) return inconsistent(std::nullopt);
      ys[n] = r->value;
      ptrs[n] = &*ys[n];
      v.self_input = *xr;
      v.self_output = r->value;
    }
  }
  auto produced = out->eval(env);
  if (!produced || *produced != ex.output) {
    v.self_input.reset();
    v.self_output.reset();
    return inconsistent(produced);
  }
  v.kind = Verdict::Kind::Consistent;
  return v;
}

// Lookup over explicit summaries (term -> entries); never consults an
// interpreter.
inline ChildLookup summary_lookup(const std::vector<Summary>& summaries) {
  auto table = std::make_shared<std::vector<std::pair<Summary, std::vector<InterpResult>>>>();
  for (const Summary& s : summaries) {
    std::vector<InterpResult> rs;
    for (const auto& [in, out] : s.entries) rs.push_back(InterpResult::ok(out));
    table->emplace_back(s, std::move(rs));
  }
  return [table](const Term& t, const Value& in) -> const InterpResult* {
    for (const auto& [s, rs] : *table) {
      if (s.term != t) continue;
      std::size_t k = 0;
      for (const auto& [key, out] : s.entries) {
        if (key == in) return &rs[k];
        ++k;
      }
    }
    return nullptr;
  };
}

// ---------------------------------------------------------------------------
// Summary completion.
// ---------------------------------------------------------------------------

// Where child outputs come from while completing summaries: the store first,
// then an already-learned semantics for fully covered terms, then the
// interpreter (whose answer is recorded in the store).
class ChildOracle {
 public:
  ChildOracle(const LanguageBundle& b, SummaryStore& store, std::size_t limit, const Semantics* learned = nullptr)
      : b_(b), store_(store), limit_(limit), learned_(learned) {}

  // Store lookup; terms covered by the learned semantics never miss.
  const InterpResult* lookup(const Term& t, const Value& in) {
    if (const InterpResult* r = store_.lookup(t, in)) return r;
    if (learned_ && semantics_covers(*learned_, t)) return &resolve(t, in);
    return nullptr;
  }

  const InterpResult& resolve(const Term& t, const Value& in) {
    if (const InterpResult* r = store_.lookup(t, in)) return *r;
    if (learned_ && semantics_covers(*learned_, t)) {
      auto key = std::make_pair(t, in);
      auto it = learned_cache_.find(key);
      if (it != learned_cache_.end()) return it->second;
      return learned_cache_.emplace(key, eval_semantics(*learned_, b_.grammar, t, in, limit_)).first->second;
    }
    return store_.resolve(b_, t, in, limit_);
  }

  // Lookup that resolves misses on the spot (never reports a miss).
  ChildLookup resolving() {
    return [this](const Term& t, const Value& in) -> const InterpResult* { return &resolve(t, in); };
  }

  SummaryStore& store() { return store_; }
  const LanguageBundle& bundle() const { return b_; }
  std::size_t limit() const { return limit_; }
  void set_learned(const Semantics* learned) {
    learned_ = learned;
    learned_cache_.clear();
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<Term, Value>& k) const { return k.first.hash() * 31 + k.second.hash(); }
  };
  const LanguageBundle& b_;
  SummaryStore& store_;
  std::size_t limit_;
  const Semantics* learned_;
  std::unordered_map<std::pair<Term, Value>, InterpResult, KeyHash> learned_cache_;
};

struct CompletionResult {
  enum class Kind { Consistent, Inconsistent, CandidateRejected };
  Kind kind = Kind::Consistent;
  std::optional<Example> failing;  // Inconsistent: the example that failed
  Verdict verdict;                 // Inconsistent: its verdict
  std::vector<Example> derived;    // self-call triples reached by the chase
  std::size_t resolved = 0;        // summary misses filled via the oracle

  bool consistent() const { return kind == Kind::Consistent; }
};

// Default bound on summary misses resolved for one triple.
inline constexpr std::size_t kChaseCap = 64;

// Checks c against every example, filling summary misses through the oracle
// until no miss remains. For a recursive rule, a consistent recursive step
// yields the self-call triple <x_{n+1}, t, y_{n+1}>, which must itself be
// consistent; those triples are chased too. The candidate is rejected when a
// chain revisits an input, when it runs longer than the oracle's recursion
// limit (the interpreter finished within that many steps), or when one
// triple needs more than `cap` misses resolved.
inline CompletionResult complete_summaries(const Constraint& c, const std::vector<Example>& examples,
                                           ChildOracle& oracle, std::size_t cap = kChaseCap) {
  CompletionResult res;
  for (const Example& root : examples) {
    std::deque<Example> queue{root};
    std::unordered_set<Value, ValueHash> seen{root.input};
    std::size_t steps = 0;
    while (!queue.empty()) {
      Example ex = std::move(queue.front());
      queue.pop_front();
      for (std::size_t misses = 0;;) {
        Verdict v = check_consistent(c, ex, [&](const Term& t, const Value& in) { return oracle.lookup(t, in); });
        if (v.miss()) {
          if (++misses > cap) {
            res.kind = CompletionResult::Kind::CandidateRejected;
            return res;
          }
          oracle.resolve(v.term, v.missing);
          ++res.resolved;
          continue;
        }
        if (!v.consistent()) {
          res.kind = CompletionResult::Kind::Inconsistent;
          res.failing = ex;
          res.verdict = std::move(v);
          return res;
        }
        if (v.self_input) {
          // The chain from one root is linear, so a repeated input is a cycle:
          // the rule diverges where the interpreter terminated.
          if (!seen.insert(*v.self_input).second || ++steps > oracle.limit()) {
            res.kind = CompletionResult::Kind::CandidateRejected;
            return res;
          }
          Example d{*v.self_input, ex.term, *v.self_output};
          res.derived.push_back(d);
          queue.push_back(std::move(d));
        }
        break;
      }
    }
  }
  return res;
}

}  // namespace semsynth

#endif  // SEMSYNTH_CONSISTENCY_HPP_
