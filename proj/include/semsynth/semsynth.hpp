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


#ifndef SEMSYNTH_SEMSYNTH_HPP_
#define SEMSYNTH_SEMSYNTH_HPP_

#include "semsynth/consistency.hpp"
#include "semsynth/constraint.hpp"
#include "semsynth/deadline.hpp"
#include "semsynth/driver.hpp"
#include "semsynth/enumerate.hpp"
#include "semsynth/example.hpp"
#include "semsynth/expr.hpp"
#include "semsynth/grammar.hpp"
#include "semsynth/interp.hpp"
#include "semsynth/languages/registry.hpp"
#include "semsynth/rng.hpp"
#include "semsynth/sexpr.hpp"
#include "semsynth/synth.hpp"
#include "semsynth/term.hpp"
#include "semsynth/value.hpp"
#include "semsynth/verify.hpp"

#endif  // SEMSYNTH_SEMSYNTH_HPP_
