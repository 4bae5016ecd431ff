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


#ifndef SEMSYNTH_DEADLINE_HPP_
#define SEMSYNTH_DEADLINE_HPP_

#include <algorithm>
#include <chrono>
#include <optional>

#include "semsynth/value.hpp"

namespace semsynth {

class TimeoutError : public Error {
 public:
  TimeoutError() : Error("time budget exhausted") {}
};

// Wall-clock cutoff polled by long searches. Expiry is the only source of
// nondeterminism in a run, and it only ever turns a result into a timeout.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(Clock::time_point at) : at_(at) {}
  static Deadline after(std::chrono::milliseconds d) { return Deadline(Clock::now() + d); }

  // The earlier of two deadlines.
  Deadline min(const Deadline& o) const {
    if (!at_) return o;
    if (!o.at_) return *this;
    return Deadline(std::min(*at_, *o.at_));
  }

  bool expired() const { return at_ && Clock::now() >= *at_; }
  void check() const {
    if (expired()) throw TimeoutError();
  }

 private:
  std::optional<Clock::time_point> at_;
};

}  // namespace semsynth

#endif  // SEMSYNTH_DEADLINE_HPP_
