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

#ifndef SEMSYNTH_INTERP_HPP_
#define SEMSYNTH_INTERP_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semsynth/grammar.hpp"
#include "semsynth/rng.hpp"
#include "semsynth/term.hpp"
#include "semsynth/value.hpp"

namespace semsynth {

enum class Status : std::uint8_t { Ok, Nontermination, Stuck };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Ok:
      return "ok";
    case Status::Nontermination:
      return "nontermination";
    case Status::Stuck:
      return "stuck";
  }
  return "?";
}

struct InterpResult {
  Status status = Status::Stuck;
  Value value;

  static InterpResult ok(Value v) { return {Status::Ok, v}; }
  static InterpResult nonterm() { return {Status::Nontermination, Value()}; }
  static InterpResult stuck() { return {Status::Stuck, Value()}; }
  bool is_ok() const { return status == Status::Ok; }

  friend bool operator==(const InterpResult& a, const InterpResult& b) {
    return a.status == b.status && (a.status != Status::Ok || a.value == b.value);
  }
};

// Budget of recursive rule applications (loop iterations) shared by one
// whole evaluation, nested loops included.
class Fuel {
 public:
  explicit Fuel(std::size_t limit) : left_(limit) {}
  // Spends one unit; false once the budget is gone.
  bool consume() {
    if (left_ == 0) return false;
    --left_;
    return true;
  }
  std::size_t left() const { return left_; }

 private:
  std::size_t left_;
};

// Closed-box evaluator for every nonterminal of one grammar.
class Interpreter {
 public:
  virtual ~Interpreter() = default;
  virtual InterpResult eval(const Term& t, const Value& in, Fuel& fuel) const = 0;
};

struct LanguageBundle {
  std::string id;
  std::string description;
  Grammar grammar;
  std::shared_ptr<const Interpreter> interpreter;
  std::string golden_chc;  // empty when no reference semantics ships
};

inline InterpResult interpret(const LanguageBundle& b, const Term& t, const Value& in,
                              std::size_t limit = 1000) {
  Fuel fuel(limit);
  return b.interpreter->eval(t, in, fuel);
}

struct FuzzConfig {
  std::uint64_t seed = 1;
  std::int64_t input_bound = 8;
  std::size_t max_term_depth = 4;
  std::size_t samples_per_check = 2000;
  std::size_t recursion_limit = 1000;
  // Share of draws restricted to productions whose semantics are learned.
  double learned_weight = 0.7;

  void validate() const {
    if (recursion_limit < 1) throw Error("recursion_limit must be at least 1");
    if (samples_per_check < 1) throw Error("samples_per_check must be at least 1");
    if (max_term_depth < 1) throw Error("max_term_depth must be at least 1");
    if (input_bound < 0) throw Error("input_bound must be non-negative");
    if (learned_weight < 0.0 || learned_weight > 1.0) throw Error("learned_weight must lie in [0, 1]");
  }
};

inline Value gen_input(const ValueType& ty, const FuzzConfig& cfg, Rng& rng) {
  auto scalar = [&](Scalar s) {
    if (s == Scalar::Bool) return Value::boolean(rng.coin());
    return Value::integer(rng.range(-cfg.input_bound, cfg.input_bound));
  };
  if (!ty.is_tuple()) return scalar(ty.scalar());
  std::vector<Value> items;
  for (std::size_t i = 0; i < ty.arity(); ++i) items.push_back(scalar(ty.component(i)));
  return Value::tuple(items);
}

namespace detail {

inline Term gen_subterm(const Grammar& g, std::size_t prod, std::size_t depth, const FuzzConfig& cfg,
                        const std::vector<bool>& learned, Rng& rng);

// Picks a production for nonterminal `nt` at `depth` (root is depth 0).
inline std::size_t pick_production(const Grammar& g, std::size_t nt, std::size_t depth, const FuzzConfig& cfg,
                                   const std::vector<bool>& learned, Rng& rng) {
  const auto& all = g.productions_of(nt);
  // Productions whose shortest term still fits under the depth cap.
  std::size_t budget = cfg.max_term_depth >= depth ? cfg.max_term_depth - depth + 1 : 0;
  std::vector<std::size_t> fits;
  for (std::size_t p : all) {
    if (g.min_height(p) <= budget) fits.push_back(p);
  }
  if (fits.empty()) {
    std::size_t best = g.nonterminal_min_height(nt);
    for (std::size_t p : all) {
      if (g.min_height(p) == best) fits.push_back(p);
    }
  }
  std::vector<std::size_t> known;
  for (std::size_t p : fits) {
    if (p < learned.size() && learned[p]) known.push_back(p);
  }
  if (!known.empty() && rng.unit() < cfg.learned_weight) return known[rng.below(known.size())];
  return fits[rng.below(fits.size())];
}

inline Term gen_subterm(const Grammar& g, std::size_t prod, std::size_t depth, const FuzzConfig& cfg,
                        const std::vector<bool>& learned, Rng& rng) {
  const Production& p = g.production(prod);
  std::vector<Term> kids;
  kids.reserve(p.rank());
  for (std::size_t nt : p.rhs) {
    std::size_t c = pick_production(g, nt, depth + 1, cfg, learned, rng);
    kids.push_back(gen_subterm(g, c, depth + 1, cfg, learned, rng));
  }
  return Term(prod, std::move(kids));
}

}  // namespace detail

// Random term rooted at `prod`. `learned[q]` marks productions whose
// semantics is already known; draws favour them.
inline Term gen_term(const Grammar& g, std::size_t prod, const FuzzConfig& cfg, Rng& rng,
                     const std::vector<bool>& learned = {}) {
  return detail::gen_subterm(g, prod, 0, cfg, learned, rng);
}

inline Term gen_term_for(const Grammar& g, std::size_t nt, const FuzzConfig& cfg, Rng& rng,
                         const std::vector<bool>& learned = {}) {
  std::size_t p = detail::pick_production(g, nt, 0, cfg, learned, rng);
  return gen_term(g, p, cfg, rng, learned);
}

}  // namespace semsynth

#endif  // SEMSYNTH_INTERP_HPP_
