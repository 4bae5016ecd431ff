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


#ifndef SEMSYNTH_SYNTH_HPP_
#define SEMSYNTH_SYNTH_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semsynth/consistency.hpp"
#include "semsynth/constraint.hpp"
#include "semsynth/deadline.hpp"
#include "semsynth/enumerate.hpp"
#include "semsynth/example.hpp"

namespace semsynth {

// A child-input vector that one candidate must not reproduce on one example.
// Unreached children (their flow read an unavailable output) are nullopt.
struct BlockRecord {
  std::size_t example = 0;
  std::vector<std::optional<Value>> inputs;

  friend bool operator==(const BlockRecord& a, const BlockRecord& b) {
    return a.example == b.example && a.inputs == b.inputs;
  }
};

struct SynthesisProblem {
  std::size_t production = 0;
  const std::vector<Example>* examples = nullptr;
  ChildOracle* oracle = nullptr;
  ComponentGrammar cg;
  std::vector<std::size_t> perm;
  std::vector<BlockRecord> blocked;
  // Set for a per-component partial: only this output component is matched
  // and the result's output slot is that scalar component.
  std::optional<std::size_t> component;
  // Distinct child-input behaviours tried per flow slot.
  std::size_t flow_cap = 3;
  // Full candidates offered to the summary-completion check.
  std::size_t max_offers = 256;
  // Searches rerun with self-call triples learned from rejected offers.
  std::size_t refine_rounds = 8;
  BankOptions bank;
  const Deadline* deadline = nullptr;
};

struct SynthResult {
  std::optional<Constraint> constraint;
  // Self-call triples from summary completion, including those that refuted
  // earlier offers.
  std::vector<Example> derived;
  std::size_t offers = 0;

  bool solved() const { return constraint.has_value(); }
};

// Every evaluation order of the children: identity first, then the rest in
// lexicographic order.
inline std::vector<std::vector<std::size_t>> permute_schedule(std::size_t rank) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> p = identity_perm(rank);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

namespace detail {

using Bits = std::vector<std::uint64_t>;

inline Bits make_bits(std::size_t n) { return Bits((n + 63) / 64, 0); }
inline void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }
inline bool get_bit(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1; }
inline bool subset(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] & ~b[i]) return false;
  }
  return true;
}
inline bool empty_bits(const Bits& b) {
  return std::all_of(b.begin(), b.end(), [](std::uint64_t w) { return w == 0; });
}

// Forward valuation of one example under a flow prefix. y[j-1] holds y_j;
// the last slot is the self call. nullopt marks an unavailable value.
struct Row {
  const Example* ex = nullptr;
  std::vector<std::optional<Value>> x;
  std::vector<std::optional<Value>> y;
};

// Distinct first matches of one output component, by first occurrence.
struct MaskList {
  std::size_t scanned = 0;
  std::vector<std::pair<Bits, std::size_t>> masks;
  std::map<Bits, std::size_t> seen;

  long first_covering(const Bits& need) const {
    for (const auto& [m, idx] : masks) {
      if (subset(need, m)) return static_cast<long>(idx);
    }
    return -1;
  }
};

class Search {
 public:
  Search(const SynthesisProblem& prob, const Grammar& g)
      : prob_(prob), g_(g), prod_(g.production(prob.production)), n_(prod_.rank()),
        in_t_(g.nonterminal(prod_.lhs).input), out_t_(g.nonterminal(prod_.lhs).output) {
    if (prob.perm.size() != n_) throw Error("permutation arity differs from production rank");
    for (std::size_t c = 0; c < n_; ++c) child_t_.push_back(&g.nonterminal(prod_.rhs[c]));
    if (prob.component) {
      comps_ = {*prob.component};
    } else {
      for (std::size_t i = 0; i < out_t_.arity(); ++i) comps_.push_back(i);
    }
    opts_ = prob.bank;
    opts_.deadline = prob.deadline;
    const auto& ex = *prob.examples;
    rows_.resize(ex.size());
    for (std::size_t r = 0; r < ex.size(); ++r) {
      rows_[r].ex = &ex[r];
      rows_[r].x.assign(n_, std::nullopt);
      rows_[r].y.assign(n_ + 1, std::nullopt);
    }
  }

  enum class Form { Plain, Guarded, Recursive };

  SynthResult run(Form form) {
    form_ = form;
    try {
      flows_.assign(n_, SlotExpr{});
      slot(0);
    } catch (const StopSearch&) {
    }
    result_.offers = offers_;
    return std::move(result_);
  }

  // Interpreter-consistent triples outside the rows that refuted an offer.
  const std::vector<Example>& refuting() const { return refuting_; }

 private:
  struct StopSearch {};

  void poll() const {
    if (prob_.deadline) prob_.deadline->check();
  }

  Scalar comp_type(std::size_t i) const { return out_t_.component(i); }

  // Leaves for x0 and for y_j (j in `outs`), as raw cells over `rows`.
  std::vector<Leaf> leaves(const std::vector<std::size_t>& outs, const std::vector<const Row*>& rows) const {
    std::vector<Leaf> ls;
    auto add = [&](ExprPtr e, auto cell) {
      Leaf l{std::move(e), {}};
      l.cells.reserve(rows.size());
      for (const Row* r : rows) l.cells.push_back(cell(*r));
      ls.push_back(std::move(l));
    };
    auto var = [&](const ValueType& t, std::size_t j) {
      auto value = [j](const Row& r) -> const Value* {
        if (j == 0) return &r.ex->input;
        const auto& y = r.y[j - 1];
        return y ? &*y : nullptr;
      };
      if (!t.is_tuple()) {
        add(j == 0 ? ex::in0(t.scalar()) : ex::out(j, t.scalar()), [value](const Row& r) {
          const Value* v = value(r);
          return v ? v->cell(0) : arith::kFault;
        });
        return;
      }
      for (std::size_t i = 0; i < t.arity(); ++i) {
        add(j == 0 ? ex::in0_comp(i, t.component(i)) : ex::out_comp(j, i, t.component(i)), [value, i](const Row& r) {
          const Value* v = value(r);
          return v ? v->cell(i) : arith::kFault;
        });
      }
    };
    var(in_t_, 0);
    for (std::size_t j : outs) var(var_type(j), j);
    return ls;
  }

  const ValueType& var_type(std::size_t j) const {
    if (j == 0) return in_t_;
    if (j == n_ + 1) return out_t_;
    return child_t_[j - 1]->output;
  }

  std::vector<const Row*> all_rows() const {
    std::vector<const Row*> rs;
    for (const Row& r : rows_) rs.push_back(&r);
    return rs;
  }

  // Output constants: the base pool, configured extras, then up to four of
  // the most frequent output cells and four of the most frequent exact
  // ratios between an output cell and an integer variable cell.
  std::vector<std::int64_t> output_constants(const std::vector<Leaf>& ls, const std::vector<const Row*>& rows) const {
    std::vector<std::int64_t> consts = base_constants();
    auto push = [&](std::int64_t c) {
      if (std::find(consts.begin(), consts.end(), c) == consts.end()) consts.push_back(c);
    };
    for (std::int64_t c : prob_.cg.extra_consts) push(c);
    std::map<std::int64_t, std::size_t> outs, ratios;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t i : comps_) {
        if (comp_type(i) != Scalar::Int) continue;
        std::int64_t o = rows[r]->ex->output.cell(i);
        ++outs[o];
        for (const Leaf& l : ls) {
          std::int64_t v = l.cells[r];
          if (l.expr->type != Scalar::Int || v == 0 || v == arith::kFault || v == -1) continue;
          if (o % v == 0) ++ratios[o / v];
        }
      }
    }
    auto top = [&](const std::map<std::int64_t, std::size_t>& freq) {
      std::vector<std::pair<std::int64_t, std::size_t>> v(freq.begin(), freq.end());
      std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        std::int64_t ma = a.first < 0 ? -a.first : a.first, mb = b.first < 0 ? -b.first : b.first;
        return ma != mb ? ma < mb : a.first < b.first;
      });
      std::size_t taken = 0;
      for (const auto& [c, f] : v) {
        if (taken == 4) break;
        if (std::find(consts.begin(), consts.end(), c) != consts.end()) continue;
        consts.push_back(c);
        ++taken;
      }
    };
    top(outs);
    top(ratios);
    return consts;
  }

  // Candidate expressions for a value of type `t` over x0 and y_j (j in
  // `outs`): whole variables of type t first, then expressions from a small
  // bank (no division, no harvested constants). Tuple types vary one
  // component of the first whole variable at a time.
  std::vector<SlotExpr> flow_candidates(const ValueType& t, const std::vector<std::size_t>& outs,
                                        const std::vector<const Row*>& rows) const {
    std::vector<SlotExpr> cands;
    std::vector<std::size_t> vars{0};
    vars.insert(vars.end(), outs.begin(), outs.end());
    for (std::size_t j : vars) {
      if (var_type(j) == t) cands.push_back(identity_slot(t, j));
    }
    BankOptions o = opts_;
    o.allow_div = false;
    ComponentGrammar cg = prob_.cg;
    cg.max_expr_size = std::min<std::size_t>(cg.max_expr_size, t.is_tuple() ? 3 : 5);
    std::vector<std::int64_t> consts = base_constants();
    for (std::int64_t c : prob_.cg.extra_consts) {
      if (std::find(consts.begin(), consts.end(), c) == consts.end()) consts.push_back(c);
    }
    ExprBank bank(cg, leaves(outs, rows), consts, rows.size(), o);
    bank.grow_to(cg.max_expr_size);
    if (!t.is_tuple()) {
      for (std::size_t i = 0; i < bank.count(t.scalar()); ++i) cands.push_back(scalar_slot(bank.entry(t.scalar(), i).expr));
      return cands;
    }
    SlotExpr base;
    if (!cands.empty()) {
      base = cands.front();
    } else {
      base.type = t;
      for (std::size_t i = 0; i < t.arity(); ++i) base.comps.push_back(bank.entry(t.component(i), 0).expr);
    }
    for (const auto& [s, i] : bank.order()) {
      for (std::size_t c = 0; c < t.arity(); ++c) {
        if (t.component(c) != s) continue;
        SlotExpr v = base;
        v.comps[c] = bank.entry(s, i).expr;
        cands.push_back(std::move(v));
      }
    }
    return cands;
  }

  // Evaluates a slot on a row: nullopt value when it reads an unavailable
  // output; `fault` set when it faults on available inputs.
  std::optional<Value> eval_on(const SlotExpr& s, const Row& r, bool& fault) const {
    for (std::size_t j = 1; j <= n_ + 1; ++j) {
      if (s.reads_out(j) && !r.y[j - 1]) return std::nullopt;
    }
    std::vector<const Value*> ptrs(n_ + 1, nullptr);
    for (std::size_t j = 0; j <= n_; ++j) {
      if (r.y[j]) ptrs[j] = &*r.y[j];
    }
    ExprEnv env{&r.ex->input, &ptrs};
    auto v = s.eval(env);
    if (!v) fault = true;
    return v;
  }

  const InterpResult& resolve(const Term& t, const Value& in) { return prob_.oracle->resolve(t, in); }

  // Depth-first search over flows in evaluation order.
  void slot(std::size_t k) {
    poll();
    if (k == n_) {
      for (const BlockRecord& b : prob_.blocked) {
        if (b.example < rows_.size() && rows_[b.example].x == b.inputs) return;
      }
      finish();
      return;
    }
    const std::size_t child = prob_.perm[k];
    std::vector<std::size_t> outs;
    if (prob_.cg.allow_sibling_flow) {
      for (std::size_t q = 0; q < k; ++q) outs.push_back(prob_.perm[q] + 1);
    }
    auto rows = all_rows();
    std::vector<std::vector<std::optional<Value>>> tried;
    std::size_t distinct = 0;
    for (const SlotExpr& f : flow_candidates(child_t_[child]->input, outs, rows)) {
      if (distinct >= prob_.flow_cap) break;
      bool fault = false;
      std::vector<std::optional<Value>> xs;
      for (const Row& r : rows_) {
        xs.push_back(eval_on(f, r, fault));
        if (fault) break;
      }
      if (fault || std::find(tried.begin(), tried.end(), xs) != tried.end()) continue;
      tried.push_back(xs);
      ++distinct;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        rows_[r].x[child] = xs[r];
        rows_[r].y[child].reset();
        if (!xs[r]) continue;
        const InterpResult& y = resolve(rows_[r].ex->term.child(child), *xs[r]);
        if (y.is_ok()) rows_[r].y[child] = y.value;
      }
      flows_[child] = f;
      slot(k + 1);
      for (Row& r : rows_) {
        r.x[child].reset();
        r.y[child].reset();
      }
    }
  }

  void finish() {
    switch (form_) {
      case Form::Plain:
        plain();
        break;
      case Form::Guarded:
        guarded();
        break;
      case Form::Recursive:
        recursive();
        break;
    }
  }

  std::vector<std::size_t> child_outs() const {
    std::vector<std::size_t> outs;
    for (std::size_t j = 1; j <= n_; ++j) outs.push_back(j);
    return outs;
  }

  std::vector<std::int64_t> target(std::size_t comp, const std::vector<const Row*>& rows) const {
    std::vector<std::int64_t> t;
    for (const Row* r : rows) t.push_back(r->ex->output.cell(comp));
    return t;
  }

  SlotExpr output_slot(const std::vector<ExprPtr>& es) const {
    if (prob_.component) return scalar_slot(es[0]);
    if (!out_t_.is_tuple()) return scalar_slot(es[0]);
    SlotExpr s;
    s.type = out_t_;
    s.comps = es;
    return s;
  }

  Constraint base_constraint(RuleKind kind) const {
    Constraint c;
    c.production = prob_.production;
    c.kind = kind;
    c.perm = prob_.perm;
    c.flows = flows_;
    c.guard = true_slot();
    return c;
  }

  // First expression per component whose behaviour equals `rows`' outputs.
  std::optional<std::vector<ExprPtr>> match_exact(ExprBank& bank, const std::vector<const Row*>& rows) const {
    std::vector<ExprPtr> found(comps_.size());
    std::vector<std::vector<std::int64_t>> targets;
    for (std::size_t i : comps_) targets.push_back(target(i, rows));
    std::size_t missing = comps_.size();
    for (std::size_t s = 1; s <= prob_.cg.max_expr_size && missing > 0; ++s) {
      bank.grow_to(s);
      for (std::size_t q = 0; q < comps_.size(); ++q) {
        if (found[q]) continue;
        long idx = bank.find(comp_type(comps_[q]), targets[q]);
        if (idx >= 0) {
          found[q] = bank.entry(comp_type(comps_[q]), static_cast<std::size_t>(idx)).expr;
          --missing;
        }
      }
      if (bank.grown() < s) break;
    }
    if (missing > 0) return std::nullopt;
    return found;
  }

  void plain() {
    auto rows = all_rows();
    auto ls = leaves(child_outs(), rows);
    ExprBank bank(prob_.cg, ls, output_constants(ls, rows), rows.size(), opts_);
    auto es = match_exact(bank, rows);
    if (!es) return;
    Constraint c = base_constraint(RuleKind::Plain);
    c.output = output_slot(*es);
    offer(std::move(c));
  }

  // Refreshes each component's distinct match masks with new bank entries.
  void extend_masks(const ExprBank& bank, std::vector<MaskList>& lists) const {
    for (std::size_t q = 0; q < comps_.size(); ++q) {
      Scalar t = comp_type(comps_[q]);
      MaskList& ml = lists[q];
      for (; ml.scanned < bank.count(t); ++ml.scanned) {
        const std::int64_t* v = bank.vec(t, ml.scanned);
        Bits m = make_bits(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
          if (v[r] == rows_[r].ex->output.cell(comps_[q])) set_bit(m, r);
        }
        if (ml.seen.emplace(m, ml.scanned).second) ml.masks.emplace_back(std::move(m), ml.scanned);
      }
    }
  }

  // Per-component expressions covering the rows in `need`.
  std::optional<std::vector<ExprPtr>> cover(const ExprBank& bank, const std::vector<MaskList>& lists,
                                            const Bits& need) const {
    std::vector<ExprPtr> es;
    for (std::size_t q = 0; q < comps_.size(); ++q) {
      long idx = lists[q].first_covering(need);
      if (idx < 0) return std::nullopt;
      es.push_back(bank.entry(comp_type(comps_[q]), static_cast<std::size_t>(idx)).expr);
    }
    return es;
  }

  // Splits rows by a guard behaviour; false when the guard faults anywhere.
  bool split(const std::int64_t* g, Bits& yes, Bits& no) const {
    yes = make_bits(rows_.size());
    no = make_bits(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (g[r] == arith::kFault) return false;
      set_bit(g[r] ? yes : no, r);
    }
    return true;
  }

  void guarded() {
    if (rows_.empty()) return;
    auto rows = all_rows();
    auto ls = leaves(child_outs(), rows);
    ExprBank bank(prob_.cg, ls, output_constants(ls, rows), rows.size(), opts_);
    std::vector<MaskList> lists(comps_.size());
    for (std::size_t s = 1; s <= prob_.cg.max_expr_size; ++s) {
      bank.grow_to(s);
      extend_masks(bank, lists);
      for (std::size_t gi = 0; gi < bank.count(Scalar::Bool); ++gi) {
        poll();
        Bits yes, no;
        if (!split(bank.vec(Scalar::Bool, gi), yes, no) || empty_bits(yes) || empty_bits(no)) continue;
        auto then_es = cover(bank, lists, yes);
        if (!then_es) continue;
        auto else_es = cover(bank, lists, no);
        if (!else_es) continue;
        Constraint c = base_constraint(RuleKind::Guarded);
        c.guard = scalar_slot(bank.entry(Scalar::Bool, gi).expr);
        c.output = output_slot(*then_es);
        c.alt_output = output_slot(*else_es);
        offer(std::move(c));
      }
      if (bank.grown() < s) break;
    }
  }

  // One recursive-output bank per distinct self-call flow, over every row;
  // rows where the flow or the self call fails read y_{n+1} as a fault and
  // may not take the recursive branch.
  struct SelfFlow {
    SlotExpr flow;
    Bits valid;
    std::vector<Row> rows;
    std::unique_ptr<ExprBank> bank;
    std::vector<MaskList> lists;
  };

  // Output bank over the rows extended with the self call's output.
  void attach_bank(SelfFlow& sf) {
    std::vector<const Row*> ptrs;
    for (const Row& row : sf.rows) ptrs.push_back(&row);
    auto outs = child_outs();
    outs.push_back(n_ + 1);
    auto ls = leaves(outs, ptrs);
    sf.bank = std::make_unique<ExprBank>(prob_.cg, ls, output_constants(ls, ptrs), ptrs.size(), opts_);
    sf.lists.resize(comps_.size());
  }

  std::vector<SelfFlow> self_flows() {
    std::vector<SelfFlow> out;
    auto rows = all_rows();
    std::vector<std::vector<std::optional<Value>>> tried;
    std::optional<SelfFlow> idle;  // kept only when no flow has a valid row
    for (const SlotExpr& f : flow_candidates(in_t_, child_outs(), rows)) {
      if (out.size() >= prob_.flow_cap) break;
      SelfFlow sf;
      sf.flow = f;
      sf.valid = make_bits(rows_.size());
      std::vector<std::optional<Value>> xs;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        bool fault = false;
        auto x = eval_on(f, rows_[r], fault);
        xs.push_back(x);
        Row row = rows_[r];
        if (x) {
          // A self call on the row's own input never returns.
          const InterpResult& y = resolve(rows_[r].ex->term, *x);
          if (y.is_ok() && !(*x == rows_[r].ex->input)) {
            row.y[n_] = y.value;
            set_bit(sf.valid, r);
          }
        }
        sf.rows.push_back(std::move(row));
      }
      if (std::find(tried.begin(), tried.end(), xs) != tried.end()) continue;
      tried.push_back(std::move(xs));
      if (empty_bits(sf.valid)) {
        if (!idle) idle = std::move(sf);
        continue;
      }
      attach_bank(sf);
      out.push_back(std::move(sf));
    }
    if (out.empty() && idle) {
      attach_bank(*idle);
      out.push_back(std::move(*idle));
    }
    return out;
  }

  void recursive() {
    auto rows = all_rows();
    auto ls = leaves(child_outs(), rows);
    ExprBank bank(prob_.cg, ls, output_constants(ls, rows), rows.size(), opts_);
    std::vector<MaskList> lists(comps_.size());
    std::vector<SelfFlow> selfs = self_flows();
    for (std::size_t s = 1; s <= prob_.cg.max_expr_size; ++s) {
      bank.grow_to(s);
      extend_masks(bank, lists);
      for (SelfFlow& sf : selfs) {
        sf.bank->grow_to(s);
        extend_masks(*sf.bank, sf.lists);
      }
      for (std::size_t gi = 0; gi < bank.count(Scalar::Bool); ++gi) {
        poll();
        Bits yes, no;
        if (!split(bank.vec(Scalar::Bool, gi), yes, no)) continue;
        auto nonrec = cover(bank, lists, no);
        if (!nonrec) continue;
        Constraint c = base_constraint(RuleKind::Recursive);
        c.guard = scalar_slot(bank.entry(Scalar::Bool, gi).expr);
        c.alt_output = output_slot(*nonrec);
        if (empty_bits(yes)) {
          // Vacuous recursive rule: the smallest well-typed choices.
          c.rec_flow = identity_slot(in_t_, 0);
          std::vector<ExprPtr> zero;
          for (std::size_t i : comps_) zero.push_back(bank.entry(comp_type(i), 0).expr);
          c.output = output_slot(zero);
          offer(std::move(c));
          continue;
        }
        for (SelfFlow& sf : selfs) {
          if (!subset(yes, sf.valid)) continue;
          auto rec = cover(*sf.bank, sf.lists, yes);
          if (!rec) continue;
          Constraint cand = c;
          cand.rec_flow = sf.flow;
          cand.output = output_slot(*rec);
          offer(std::move(cand));
        }
      }
      if (bank.grown() < s) break;
    }
  }

  void offer(Constraint c) {
    for (const Constraint& o : offered_) {
      if (o == c) return;
    }
    if (++offers_ > prob_.max_offers) throw StopSearch{};
    offered_.push_back(c);
    if (prob_.component) {
      // Partials are exact on the rows; they never carry a self call.
      result_.constraint = std::move(c);
      throw StopSearch{};
    }
    CompletionResult done = complete_summaries(c, *prob_.examples, *prob_.oracle);
    if (done.kind == CompletionResult::Kind::Inconsistent) note_refuting(*done.failing);
    if (!done.consistent()) return;
    result_.constraint = std::move(c);
    result_.derived = std::move(done.derived);
    throw StopSearch{};
  }

  void note_refuting(const Example& e) {
    auto same = [&](const Example& o) { return o.input == e.input && o.term == e.term; };
    if (std::any_of(prob_.examples->begin(), prob_.examples->end(), same)) return;
    if (std::any_of(refuting_.begin(), refuting_.end(), same)) return;
    refuting_.push_back(e);
  }

  const SynthesisProblem& prob_;
  const Grammar& g_;
  const Production& prod_;
  const std::size_t n_;
  const ValueType in_t_;
  const ValueType out_t_;
  std::vector<const Nonterminal*> child_t_;
  std::vector<std::size_t> comps_;
  BankOptions opts_;
  std::vector<Row> rows_;
  std::vector<SlotExpr> flows_;
  Form form_ = Form::Plain;
  std::vector<Constraint> offered_;
  std::size_t offers_ = 0;
  std::vector<Example> refuting_;
  SynthResult result_;
};

// Runs the search; when it fails after learning refuting triples, retries
// with them as extra rows. Appended rows keep block indices valid.
inline SynthResult refine(const SynthesisProblem& prob, const Grammar& g, Search::Form form) {
  std::vector<Example> rows = *prob.examples;
  std::vector<Example> learned;
  SynthesisProblem local = prob;
  local.examples = &rows;
  std::size_t offers = 0;
  for (std::size_t round = 0;; ++round) {
    Search s(local, g);
    SynthResult r = s.run(form);
    offers += r.offers;
    if (r.constraint || s.refuting().empty() || round >= prob.refine_rounds) {
      r.offers = offers;
      if (r.constraint) r.derived.insert(r.derived.begin(), learned.begin(), learned.end());
      return r;
    }
    rows.insert(rows.end(), s.refuting().begin(), s.refuting().end());
    learned.insert(learned.end(), s.refuting().begin(), s.refuting().end());
  }
}

}  // namespace detail

// Single-rule constraint (guard true) consistent with every example, or
// nothing within the size bound.
inline SynthResult synth_constraint(const SynthesisProblem& prob, const LanguageBundle& b) {
  return detail::refine(prob, b.grammar, detail::Search::Form::Plain);
}

// Two-rule constraint split by a synthesized guard.
inline SynthResult synth_guarded(const SynthesisProblem& prob, const LanguageBundle& b) {
  return detail::refine(prob, b.grammar, detail::Search::Form::Guarded);
}

// Recursive pair: the non-recursive rule where the guard fails, otherwise a
// self call on the whole term whose output the recursive rule may read.
inline SynthResult synth_recursive(const SynthesisProblem& prob, const LanguageBundle& b) {
  if (!b.grammar.production(prob.production).recursive) throw Error("production is not recursive");
  return detail::refine(prob, b.grammar, detail::Search::Form::Recursive);
}

// ---------------------------------------------------------------------------
// Per-component synthesis for tuple outputs.
// ---------------------------------------------------------------------------

// A constraint fixing flows and one output component; `rule.output` is that
// component's scalar slot.
struct PartialConstraint {
  Constraint rule;
  std::size_t component = 0;
};

struct Agreement {
  enum class Kind { Agree, Mismatch, SummaryGap };
  Kind kind = Kind::Agree;
  std::size_t example = 0;
  std::size_t slot = 0;                             // Mismatch: 1-based child position
  std::vector<std::optional<Value>> inputs;         // Mismatch: that child's input per partial
  std::vector<std::vector<std::optional<Value>>> vectors;  // Mismatch: all child inputs per partial
  Term gap_term;                                    // SummaryGap: the missing pair
  Value gap_input;

  bool agree() const { return kind == Kind::Agree; }
};

// Forward-evaluates every partial's flows on every example using `lookup`
// only, and reports the first (example, child in evaluation order) where two
// partials feed different inputs.
inline Agreement check_dataflow_agreement(const std::vector<PartialConstraint>& partials,
                                          const std::vector<Example>& examples, const ChildLookup& lookup) {
  Agreement a;
  if (partials.size() < 2) return a;
  const std::vector<std::size_t>& perm = partials[0].rule.perm;
  for (const auto& p : partials) {
    if (p.rule.perm != perm || p.rule.production != partials[0].rule.production) {
      throw Error("partials must share production and evaluation order");
    }
  }
  for (std::size_t e = 0; e < examples.size(); ++e) {
    const Example& ex = examples[e];
    const std::size_t n = ex.term.rank();
    std::vector<std::vector<std::optional<Value>>> xs(partials.size(), std::vector<std::optional<Value>>(n));
    for (std::size_t q = 0; q < partials.size(); ++q) {
      const Constraint& c = partials[q].rule;
      std::vector<std::optional<Value>> ys(n + 1);
      std::vector<const Value*> ptrs(n + 1, nullptr);
      ExprEnv env{&ex.input, &ptrs};
      for (std::size_t child : perm) {
        const SlotExpr& f = c.flows[child];
        bool blocked = false;
        for (std::size_t j = 1; j <= n; ++j) {
          if (f.reads_out(j) && !ptrs[j - 1]) blocked = true;
        }
        if (blocked) continue;
        auto x = f.eval(env);
        if (!x) continue;
        xs[q][child] = *x;
        const InterpResult* r = lookup(ex.term.child(child), *x);
        if (!r) {
          a.kind = Agreement::Kind::SummaryGap;
          a.example = e;
          a.gap_term = ex.term.child(child);
          a.gap_input = *x;
          return a;
        }
        if (r->is_ok()) {
          ys[child] = r->value;
          ptrs[child] = &*ys[child];
        }
      }
    }
    for (std::size_t child : perm) {
      for (std::size_t q = 1; q < partials.size(); ++q) {
        if (xs[q][child] == xs[0][child]) continue;
        a.kind = Agreement::Kind::Mismatch;
        a.example = e;
        a.slot = child + 1;
        for (std::size_t p = 0; p < partials.size(); ++p) a.inputs.push_back(xs[p][child]);
        a.vectors = xs;
        return a;
      }
    }
  }
  return a;
}

// True when the partial's output reads y_slot directly or through flows.
inline bool output_depends_on(const Constraint& c, std::size_t slot) {
  std::vector<bool> seen(c.rank() + 1, false);
  std::vector<std::size_t> todo;
  for (std::size_t j = 1; j <= c.rank(); ++j) {
    if (c.output.reads_out(j)) todo.push_back(j);
  }
  while (!todo.empty()) {
    std::size_t j = todo.back();
    todo.pop_back();
    if (seen[j]) continue;
    seen[j] = true;
    if (j == slot) return true;
    for (std::size_t k = 1; k <= c.rank(); ++k) {
      if (c.flows[j - 1].reads_out(k)) todo.push_back(k);
    }
  }
  return false;
}

struct MultiOutputResult {
  std::optional<Constraint> constraint;
  std::vector<PartialConstraint> partials;
  std::vector<Example> added;  // examples added to close summary gaps
  std::size_t rounds = 0;
  std::size_t blocks = 0;
};

inline constexpr std::size_t kMultiOutputRetries = 256;

// Synthesizes one partial per output component, reconciles their flows and
// merges them: the first partial's flows with every partial's component.
inline MultiOutputResult synth_multi_output(const SynthesisProblem& prob, const LanguageBundle& b,
                                            std::size_t components, std::size_t retries = kMultiOutputRetries) {
  MultiOutputResult res;
  const Production& p = b.grammar.production(prob.production);
  const ValueType& out_t = b.grammar.nonterminal(p.lhs).output;
  if (!out_t.is_tuple() || out_t.arity() != components || components < 2) {
    throw Error("multi-output synthesis needs a tuple output with at least two components");
  }
  std::vector<SynthesisProblem> probs(components, prob);
  std::vector<PartialConstraint> partials(components);
  auto solve = [&](std::size_t i) {
    probs[i].component = i;
    SynthResult r = synth_constraint(probs[i], b);
    if (!r.constraint) return false;
    partials[i] = PartialConstraint{*r.constraint, i};
    return true;
  };
  for (std::size_t i = 0; i < components; ++i) {
    if (!solve(i)) return res;
  }
  for (; res.rounds < retries; ++res.rounds) {
    Agreement a = check_dataflow_agreement(
        partials, *prob.examples, [&](const Term& t, const Value& in) { return prob.oracle->lookup(t, in); });
    if (a.kind == Agreement::Kind::SummaryGap) {
      // Fill the gap from the interpreter and re-check the same partials.
      prob.oracle->resolve(a.gap_term, a.gap_input);
      continue;
    }
    if (a.kind == Agreement::Kind::Agree) {
      Constraint merged = partials[0].rule;
      merged.output.type = out_t;
      merged.output.comps.clear();
      for (const auto& pc : partials) merged.output.comps.push_back(pc.rule.output.comps[0]);
      CompletionResult done = complete_summaries(merged, *prob.examples, *prob.oracle);
      if (!done.consistent()) return res;
      res.constraint = std::move(merged);
      res.partials = partials;
      return res;
    }
    // Blame a partial indifferent to the disputed child, else the last one
    // that disagrees with the first.
    std::optional<std::size_t> blamed;
    for (std::size_t q = 0; q < components && !blamed; ++q) {
      if (!output_depends_on(partials[q].rule, a.slot)) blamed = q;
    }
    if (!blamed) {
      for (std::size_t q = components; q-- > 1;) {
        if (a.inputs[q] != a.inputs[0]) {
          blamed = q;
          break;
        }
      }
    }
    BlockRecord rec{a.example, a.vectors[*blamed]};
    probs[*blamed].blocked.push_back(rec);
    ++res.blocks;
    if (!solve(*blamed)) return res;
  }
  return res;
}

}  // namespace semsynth

#endif  // SEMSYNTH_SYNTH_HPP_
