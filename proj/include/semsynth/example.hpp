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

#ifndef SEMSYNTH_EXAMPLE_HPP_
#define SEMSYNTH_EXAMPLE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "semsynth/interp.hpp"
#include "semsynth/term.hpp"
#include "semsynth/value.hpp"

namespace semsynth {

// An interpreter-consistent triple <input, term, output>.
struct Example {
  Value input;
  Term term;
  Value output;

  friend bool operator==(const Example& a, const Example& b) {
    return a.input == b.input && a.output == b.output && a.term == b.term;
  }
};

inline std::string example_to_string(const Example& e, const Grammar& g) {
  return "<" + e.input.to_string() + ", " + print_term(e.term, g) + ", " + e.output.to_string() + ">";
}

inline nlohmann::ordered_json example_to_json(const Example& e, const Grammar& g) {
  nlohmann::ordered_json j;
  j["in"] = value_to_json(e.input);
  j["term"] = print_term(e.term, g);
  j["out"] = value_to_json(e.output);
  return j;
}

// Runs the interpreter; nullopt when the run is not Ok (the pair is skipped).
inline std::optional<Example> make_example(const LanguageBundle& b, const Term& t, const Value& in,
                                           std::size_t limit) {
  const Nonterminal& nt = b.grammar.nonterminal(term_nonterminal(t, b.grammar));
  if (!in.matches(nt.input)) throw Error("input " + in.to_string() + " does not match " + nt.input.to_string());
  InterpResult r = interpret(b, t, in, limit);
  if (!r.is_ok()) return std::nullopt;
  if (!r.value.matches(nt.output)) {
    throw Error("interpreter produced " + r.value.to_string() + " for output type " + nt.output.to_string());
  }
  return Example{in, t, r.value};
}

// Finite input-to-output table for one term.
struct Summary {
  Term term;
  std::map<Value, Value> entries;
};

// Memo of interpreter outcomes keyed by (term, input). Ok outcomes are the
// summary entries; non-Ok outcomes mark poisoned inputs. Terms are keyed
// structurally, so equal subterms share one table.
class SummaryStore {
 public:
  using Table = std::unordered_map<Value, InterpResult, ValueHash>;

  const InterpResult* lookup(const Term& t, const Value& in) const {
    auto it = tables_.find(t);
    if (it == tables_.end()) return nullptr;
    auto e = it->second.find(in);
    return e == it->second.end() ? nullptr : &e->second;
  }

  void record(const Term& t, const Value& in, const InterpResult& r) {
    auto [it, inserted] = tables_[t].emplace(in, r);
    if (!inserted && !(it->second == r)) throw Error("summary store: conflicting outcomes for one input");
    if (inserted) ++entries_;
  }

  void record(const Example& e) { record(e.term, e.input, InterpResult::ok(e.output)); }

  // Looks the pair up, calling the interpreter on a miss.
  const InterpResult& resolve(const LanguageBundle& b, const Term& t, const Value& in, std::size_t limit) {
    Table& table = tables_[t];
    auto it = table.find(in);
    if (it != table.end()) return it->second;
    ++interpreter_calls_;
    ++entries_;
    return table.emplace(in, interpret(b, t, in, limit)).first->second;
  }

  Summary summary(const Term& t) const {
    Summary s{t, {}};
    auto it = tables_.find(t);
    if (it == tables_.end()) return s;
    for (const auto& [in, r] : it->second) {
      if (r.is_ok()) s.entries.emplace(in, r.value);
    }
    return s;
  }

  std::size_t entries() const { return entries_; }
  std::size_t interpreter_calls() const { return interpreter_calls_; }

 private:
  std::unordered_map<Term, Table, TermHash> tables_;
  std::size_t entries_ = 0;
  std::size_t interpreter_calls_ = 0;
};

}  // namespace semsynth

#endif  // SEMSYNTH_EXAMPLE_HPP_
