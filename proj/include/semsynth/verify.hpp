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


#ifndef SEMSYNTH_VERIFY_HPP_
#define SEMSYNTH_VERIFY_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "semsynth/consistency.hpp"
#include "semsynth/constraint.hpp"
#include "semsynth/example.hpp"
#include "semsynth/interp.hpp"
#include "semsynth/rng.hpp"

namespace semsynth {

// A child call whose interpreter run was not Ok.
struct FailedCall {
  Term term;
  Value input;
  Status status = Status::Stuck;
};

// A failing root triple plus the child triples observed while checking it.
// `children` never contains the root's own term. `failed` lists the child
// calls that did not finish; they are facts too, but not examples.
struct CexBundle {
  Example root;
  std::vector<Example> children;
  std::vector<FailedCall> failed;
};

struct VerifyResult {
  std::optional<CexBundle> cex;
  std::size_t samples = 0;     // pairs drawn
  std::size_t ok_samples = 0;  // pairs whose interpreter run was Ok
  std::size_t failing_sample = 0;

  // No sampled pair terminated, so nothing was actually checked.
  bool coverage_warning() const { return ok_samples == 0; }
};

namespace detail {

// Interpreter-backed lookup that remembers every pair it ran, in order.
class RecordingLookup {
 public:
  RecordingLookup(const LanguageBundle& b, std::size_t limit) : b_(b), limit_(limit) {}

  const InterpResult* operator()(const Term& t, const Value& in) {
    auto key = std::make_pair(t, in);
    auto it = memo_.find(key);
    if (it != memo_.end()) return &it->second;
    auto r = memo_.emplace(key, interpret(b_, t, in, limit_)).first;
    order_.push_back(key);
    return &r->second;
  }

  // Bundle for `at`, with every pair run so far whose term differs from
  // `root`, in first-run order.
  CexBundle bundle(const Example& at, const Term& root) const {
    CexBundle out{at, {}, {}};
    for (const auto& key : order_) {
      if (key.first == root) continue;
      const InterpResult& r = memo_.at(key);
      if (r.is_ok()) {
        out.children.push_back(Example{key.second, key.first, r.value});
      } else {
        out.failed.push_back(FailedCall{key.first, key.second, r.status});
      }
    }
    return out;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<Term, Value>& k) const { return k.first.hash() * 31 + k.second.hash(); }
  };
  const LanguageBundle& b_;
  std::size_t limit_;
  std::unordered_map<std::pair<Term, Value>, InterpResult, KeyHash> memo_;
  std::vector<std::pair<Term, Value>> order_;
};

}  // namespace detail

// Checks one sampled root pair. Children run through the interpreter; a
// recursive rule is followed call by call, each step checked against the
// interpreter's result for the self call. Returns the bundle for the first
// step that disagrees, or for the root when the chain of self calls cycles
// or outruns the recursion limit.
inline std::optional<CexBundle> check_sample(const Constraint& c, const LanguageBundle& b, const Example& root,
                                             std::size_t limit) {
  detail::RecordingLookup lookup(b, limit);
  ChildLookup fn = [&lookup](const Term& t, const Value& in) { return lookup(t, in); };
  Example cur = root;
  std::unordered_set<Value, ValueHash> seen{root.input};
  for (std::size_t depth = 0;; ++depth) {
    Verdict v = check_consistent(c, cur, fn);
    if (!v.consistent()) return lookup.bundle(cur, root.term);
    if (!v.self_input) return std::nullopt;
    if (!seen.insert(*v.self_input).second || depth + 1 > limit) {
      return lookup.bundle(root, root.term);
    }
    cur = Example{*v.self_input, root.term, *v.self_output};
  }
}

// Fuzzes candidate `c` for its production: cfg.samples_per_check random
// (term, input) pairs, the first with the zero input. Pairs whose interpreter
// run is not Ok are discarded. `learned[q]` biases child generation towards
// productions whose semantics is already known.
inline VerifyResult verify(const Constraint& c, const LanguageBundle& b, const FuzzConfig& cfg, Rng& rng,
                           const std::vector<bool>& learned = {}) {
  VerifyResult res;
  const Grammar& g = b.grammar;
  const ValueType& in_t = g.nonterminal(g.production(c.production).lhs).input;
  for (std::size_t s = 0; s < cfg.samples_per_check; ++s) {
    Term t = gen_term(g, c.production, cfg, rng, learned);
    Value in = s == 0 ? zero_value(in_t) : gen_input(in_t, cfg, rng);
    ++res.samples;
    InterpResult r = interpret(b, t, in, cfg.recursion_limit);
    if (!r.is_ok()) continue;
    ++res.ok_samples;
    if (auto cex = check_sample(c, b, Example{in, t, r.value}, cfg.recursion_limit)) {
      res.cex = std::move(cex);
      res.failing_sample = s;
      return res;
    }
  }
  return res;
}

// Validates a bundle against candidate `c`: every triple agrees with the
// interpreter, exactly one triple has the root's term, and the candidate
// cannot be completed consistently on the root. Empty when valid.
inline std::string check_cex_invariants(const CexBundle& bundle, const Constraint& c, const LanguageBundle& b,
                                        std::size_t limit) {
  std::size_t with_root_term = 1;
  auto agrees = [&](const Example& e) {
    InterpResult r = interpret(b, e.term, e.input, limit);
    return r.is_ok() && r.value == e.output;
  };
  if (!agrees(bundle.root)) return "root triple disagrees with the interpreter";
  if (bundle.root.term.production() != c.production) return "root triple has the wrong production";
  for (const Example& e : bundle.children) {
    if (!agrees(e)) return "child triple disagrees with the interpreter";
    if (e.term == bundle.root.term) ++with_root_term;
  }
  if (with_root_term != 1) return "bundle holds more than one triple for the root term";
  SummaryStore store;
  for (const Example& e : bundle.children) store.record(e);
  for (const FailedCall& f : bundle.failed) {
    InterpResult r = interpret(b, f.term, f.input, limit);
    if (r.status != f.status) return "failed call disagrees with the interpreter";
    store.record(f.term, f.input, r);
  }
  ChildOracle oracle(b, store, limit);
  if (complete_summaries(c, {bundle.root}, oracle).consistent()) return "candidate is consistent with its counterexample";
  return "";
}

}  // namespace semsynth

#endif  // SEMSYNTH_VERIFY_HPP_
