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


#ifndef SEMSYNTH_LANGUAGES_COMMON_HPP_
#define SEMSYNTH_LANGUAGES_COMMON_HPP_

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "semsynth/grammar.hpp"
#include "semsynth/interp.hpp"

namespace semsynth::lang {

// Interpreter that dispatches on an enum resolved once per production id.
template <typename Op>
class TableInterpreter : public Interpreter {
 protected:
  TableInterpreter(const Grammar& g, std::initializer_list<std::pair<const char*, Op>> names)
      : ops_(g.productions().size()), mapped_(g.productions().size(), false) {
    for (const auto& [name, op] : names) {
      auto id = g.find_production(name);
      if (!id) continue;  // operator absent from this grammar variant
      ops_[*id] = op;
      mapped_[*id] = true;
    }
    for (std::size_t i = 0; i < mapped_.size(); ++i) {
      if (!mapped_[i]) throw Error("interpreter has no case for operator " + g.production(i).op);
    }
  }

  Op op(const Term& t) const { return ops_[t.production()]; }

 private:
  std::vector<Op> ops_;
  std::vector<bool> mapped_;
};

// Wraps an optional arithmetic result.
inline InterpResult int_result(std::optional<std::int64_t> r) {
  return r ? InterpResult::ok(Value::integer(*r)) : InterpResult::stuck();
}

}  // namespace semsynth::lang

#endif  // SEMSYNTH_LANGUAGES_COMMON_HPP_
