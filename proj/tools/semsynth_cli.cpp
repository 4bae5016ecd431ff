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

// Command-line front end: fuzz, eval, verify, synthesize, list-langs.
// Exit codes: 0 success (all solved), 2 partial synthesis, 1 error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "semsynth/semsynth.hpp"

namespace {

using namespace semsynth;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

// Accepts "600s", "1500ms", "10m" or bare seconds.
std::chrono::milliseconds parse_duration(const std::string& s) {
  std::size_t pos = 0;
  long long n = std::stoll(s, &pos);
  std::string unit = s.substr(pos);
  if (n <= 0) throw Error("duration must be positive: " + s);
  if (unit.empty() || unit == "s") return std::chrono::seconds(n);
  if (unit == "ms") return std::chrono::milliseconds(n);
  if (unit == "m") return std::chrono::minutes(n);
  throw Error("bad duration: " + s);
}

int cmd_list() {
  for (const std::string& id : language_ids()) {
    LanguageBundle b = load_language(id);
    std::cout << id << "\t" << b.grammar.productions().size() << " productions\t" << b.description << "\n";
  }
  return 0;
}

int cmd_fuzz(const std::string& lang, std::uint64_t seed, std::size_t samples, const FuzzConfig& base) {
  LanguageBundle b = load_language(lang);
  FuzzConfig cfg = base;
  cfg.seed = seed;
  cfg.validate();
  Rng rng = Rng::stream(seed, 0);
  const Grammar& g = b.grammar;
  for (std::size_t i = 0; i < samples; ++i) {
    std::size_t nt = rng.below(g.nonterminals().size());
    Term t = gen_term_for(g, nt, cfg, rng);
    Value in = gen_input(g.nonterminal(nt).input, cfg, rng);
    if (auto e = make_example(b, t, in, cfg.recursion_limit)) std::cout << example_to_json(*e, g).dump() << "\n";
  }
  return 0;
}

int cmd_eval(const std::string& sem_path, const std::string& lang_opt, const std::string& term_text,
             const std::string& in_text, std::size_t limit) {
  std::string text = read_file(sem_path);
  std::string lang = lang_opt;
  if (lang.empty()) {
    auto top = parse_sexprs(text);
    for (std::size_t i = 1; !top.empty() && i + 1 < top[0].items.size(); ++i) {
      if (top[0].items[i].is_symbol(":language")) lang = top[0].items[i + 1].atom;
    }
  }
  if (lang.empty()) throw Error("no language given and none recorded in " + sem_path);
  LanguageBundle b = load_language(lang);
  Semantics sem = parse_chc(text, b.grammar);
  Term t = parse_term(term_text, b.grammar);
  const Nonterminal& nt = b.grammar.nonterminal(term_nonterminal(t, b.grammar));
  Value in = value_from_json(nlohmann::json::parse(in_text), nt.input);
  if (!semantics_covers(sem, t)) throw Error("semantics lacks a rule for some production in the term");
  InterpResult r = eval_semantics(sem, b.grammar, t, in, limit);
  nlohmann::ordered_json j;
  j["status"] = status_name(r.status);
  if (r.is_ok()) j["out"] = value_to_json(r.value);
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_verify(const std::string& sem_path, const std::string& lang, std::size_t samples, std::uint64_t seed,
               const FuzzConfig& base) {
  LanguageBundle b = load_language(lang);
  Semantics sem = parse_chc(read_file(sem_path), b.grammar);
  FuzzConfig cfg = base;
  cfg.seed = seed;
  cfg.samples_per_check = samples;
  cfg.validate();
  std::vector<bool> learned(b.grammar.productions().size(), false);
  for (const auto& [prod, rule] : sem.rules) learned[prod] = true;
  nlohmann::ordered_json j;
  j["status"] = "pass";
  j["rules"] = sem.rules.size();
  for (const auto& [prod, rule] : sem.rules) {
    Rng rng = Rng::stream(seed, prod);
    VerifyResult vr = verify(rule, b, cfg, rng, learned);
    if (!vr.cex) continue;
    j["status"] = "fail";
    j["production"] = b.grammar.production(prod).op;
    j["sample"] = vr.failing_sample;
    j["counterexample"] = example_to_json(vr.cex->root, b.grammar);
    break;
  }
  std::cout << j.dump() << "\n";
  return j["status"] == "pass" ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantics synthesis from a closed-box interpreter"};
  app.require_subcommand(1);

  std::string lang;
  std::uint64_t seed = 1;
  FuzzConfig fuzz;

  auto* list = app.add_subcommand("list-langs", "List bundled languages");

  std::size_t fuzz_samples = 10;
  auto* fz = app.add_subcommand("fuzz", "Print random interpreter examples as JSON lines");
  fz->add_option("--lang", lang, "Language id")->required();
  fz->add_option("--seed", seed, "Random seed");
  fz->add_option("--samples", fuzz_samples, "Pairs to draw (non-terminating ones are skipped)");
  fz->add_option("--depth", fuzz.max_term_depth, "Maximum term depth");
  fz->add_option("--bound", fuzz.input_bound, "Input magnitude bound");

  std::string sem_path, term_text, in_text;
  auto* ev = app.add_subcommand("eval", "Evaluate a term under a semantics file");
  ev->add_option("--sem", sem_path, "Semantics file")->required();
  ev->add_option("--lang", lang, "Language id (defaults to the file's header)");
  ev->add_option("--term", term_text, "Term as an s-expression")->required();
  ev->add_option("--in", in_text, "Input value as JSON")->required();
  ev->add_option("--limit", fuzz.recursion_limit, "Recursion limit");

  std::size_t verify_samples = 1000;
  auto* vf = app.add_subcommand("verify", "Fuzz a semantics file against the interpreter");
  vf->add_option("--sem", sem_path, "Semantics file")->required();
  vf->add_option("--lang", lang, "Language id")->required();
  vf->add_option("--samples", verify_samples, "Samples per rule");
  vf->add_option("--seed", seed, "Random seed");

  bool no_multi = false;
  bool trace = false;
  std::string per_prod, chc_out, report_out, config_path;
  auto* sy = app.add_subcommand("synthesize", "Learn the semantics of a bundled language");
  auto* lang_opt = sy->add_option("--lang", lang, "Language id");
  auto* seed_opt = sy->add_option("--seed", seed, "Random seed");
  sy->add_flag("--no-multi-output", no_multi, "Disable per-component synthesis of tuple outputs");
  sy->add_option("--timeout-per-prod", per_prod, "Per-production timeout, e.g. 600s");
  sy->add_option("--emit-chc", chc_out, "Write the learned rules here");
  sy->add_option("--report", report_out, "Write the JSON report here");
  sy->add_option("--config", config_path, "RunConfig JSON; flags override it");
  sy->add_flag("--trace", trace, "Log candidates and counterexamples to stderr");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) return cmd_list();
    if (fz->parsed()) return cmd_fuzz(lang, seed, fuzz_samples, fuzz);
    if (ev->parsed()) return cmd_eval(sem_path, lang, term_text, in_text, fuzz.recursion_limit);
    if (vf->parsed()) return cmd_verify(sem_path, lang, verify_samples, seed, fuzz);

    RunConfig cfg;
    if (!config_path.empty()) cfg = run_config_from_json(nlohmann::json::parse(read_file(config_path)), cfg);
    if (lang_opt->count() > 0) cfg.language = lang;
    if (seed_opt->count() > 0) cfg.fuzz.seed = seed;
    if (no_multi) cfg.multi_output = false;
    if (!per_prod.empty()) cfg.per_production_timeout = parse_duration(per_prod);
    if (cfg.language.empty()) throw Error("--lang is required");
    if (trace) cfg.trace = [](const std::string& line) { std::cerr << line << "\n"; };
    LanguageBundle b = load_language(cfg.language);
    RunResult r = sem_synth(b, cfg);
    std::string chc = emit_chc(r.semantics, b.grammar);
    std::string report = write_report(r.report);
    if (!chc_out.empty()) write_file(chc_out, chc);
    if (!report_out.empty()) write_file(report_out, report);
    if (chc_out.empty()) std::cout << chc;
    if (report_out.empty()) std::cout << report;
    return r.report.all_solved() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
