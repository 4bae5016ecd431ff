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


#ifndef SEMSYNTH_LANGUAGES_REGISTRY_HPP_
#define SEMSYNTH_LANGUAGES_REGISTRY_HPP_

#include <string>
#include <vector>

#include "semsynth/languages/arith.hpp"
#include "semsynth/languages/binop.hpp"
#include "semsynth/languages/boolean.hpp"
#include "semsynth/languages/currency.hpp"
#include "semsynth/languages/diff.hpp"
#include "semsynth/languages/imp.hpp"

namespace semsynth {

inline std::vector<std::string> language_ids() {
  return {"cube3", "cnf2", "dnf2", "intarith", "iteexpr", "binop", "currency", "diff", "imp1", "imp2"};
}

inline LanguageBundle load_language(const std::string& id) {
  if (id == "cube3") return lang::make_cube3();
  if (id == "cnf2") return lang::make_cnf2();
  if (id == "dnf2") return lang::make_dnf2();
  if (id == "intarith") return lang::make_intarith();
  if (id == "iteexpr") return lang::make_iteexpr();
  if (id == "binop") return lang::make_binop();
  if (id == "currency") return lang::make_currency();
  if (id == "diff") return lang::make_diff();
  if (id == "imp1") return lang::make_imp1();
  if (id == "imp2") return lang::make_imp2();
  throw Error("unknown language " + id);
}

}  // namespace semsynth

#endif  // SEMSYNTH_LANGUAGES_REGISTRY_HPP_
