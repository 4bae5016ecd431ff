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

#ifndef SEMSYNTH_VALUE_HPP_
#define SEMSYNTH_VALUE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace semsynth {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scalar : std::uint8_t { Int, Bool };

inline const char* scalar_name(Scalar s) { return s == Scalar::Int ? "int" : "bool"; }

// Tuples hold at most this many scalar components.
inline constexpr std::size_t kMaxArity = 8;

class ValueType {
 public:
  ValueType() : ValueType(Scalar::Int) {}

  static ValueType integer() { return ValueType(Scalar::Int); }
  static ValueType boolean() { return ValueType(Scalar::Bool); }
  static ValueType tuple(std::vector<Scalar> elems) {
    if (elems.empty()) throw Error("tuple type needs at least one element");
    if (elems.size() > kMaxArity) throw Error("tuple type exceeds maximum arity");
    ValueType t;
    t.tuple_ = true;
    t.elems_ = std::move(elems);
    return t;
  }

  bool is_tuple() const { return tuple_; }
  bool is_int() const { return !tuple_ && elems_[0] == Scalar::Int; }
  bool is_bool() const { return !tuple_ && elems_[0] == Scalar::Bool; }
  // Number of scalar components; 1 for scalar types.
  std::size_t arity() const { return elems_.size(); }
  Scalar component(std::size_t i) const { return elems_.at(i); }
  Scalar scalar() const { return elems_[0]; }

  std::string to_string() const {
    if (!tuple_) return scalar_name(elems_[0]);
    std::string s = "(tuple";
    for (Scalar e : elems_) {
      s += ' ';
      s += scalar_name(e);
    }
    return s + ")";
  }

  friend bool operator==(const ValueType& a, const ValueType& b) {
    return a.tuple_ == b.tuple_ && a.elems_ == b.elems_;
  }

 private:
  explicit ValueType(Scalar s) : elems_{s} {}

  bool tuple_ = false;
  std::vector<Scalar> elems_;
};

// Overflow-checked integer arithmetic. The most negative int64 is reserved as
// a fault marker, so any result equal to it also counts as overflow.
namespace arith {

inline constexpr std::int64_t kFault = std::numeric_limits<std::int64_t>::min();

inline std::optional<std::int64_t> add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r) || r == kFault) return std::nullopt;
  return r;
}
inline std::optional<std::int64_t> sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r) || r == kFault) return std::nullopt;
  return r;
}
inline std::optional<std::int64_t> mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r) || r == kFault) return std::nullopt;
  return r;
}
// Truncating division; zero divisor faults.
inline std::optional<std::int64_t> div(std::int64_t a, std::int64_t b) {
  if (b == 0 || a == kFault) return std::nullopt;
  return a / b;
}

}  // namespace arith

class Value {
 public:
  Value() = default;

  static Value integer(std::int64_t n) {
    Value v;
    v.data_[0] = n;
    return v;
  }
  static Value boolean(bool b) {
    Value v;
    v.data_[0] = b ? 1 : 0;
    v.bool_mask_ = 1;
    return v;
  }
  static Value tuple(const std::vector<Value>& items) {
    if (items.empty()) throw Error("tuple value needs at least one element");
    if (items.size() > kMaxArity) throw Error("tuple value exceeds maximum arity");
    Value v;
    v.tuple_ = true;
    v.arity_ = static_cast<std::uint8_t>(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].is_tuple()) throw Error("nested tuple value");
      v.data_[i] = items[i].data_[0];
      if (items[i].bool_mask_) v.bool_mask_ |= static_cast<std::uint8_t>(1u << i);
    }
    return v;
  }
  // Builds a value of `type` from raw scalar cells (bools as 0/1).
  static Value from_cells(const ValueType& type, const std::int64_t* cells) {
    if (!type.is_tuple()) {
      return type.scalar() == Scalar::Int ? integer(cells[0]) : boolean(cells[0] != 0);
    }
    Value v;
    v.tuple_ = true;
    v.arity_ = static_cast<std::uint8_t>(type.arity());
    for (std::size_t i = 0; i < type.arity(); ++i) {
      if (type.component(i) == Scalar::Bool) {
        v.data_[i] = cells[i] != 0 ? 1 : 0;
        v.bool_mask_ |= static_cast<std::uint8_t>(1u << i);
      } else {
        v.data_[i] = cells[i];
      }
    }
    return v;
  }

  bool is_tuple() const { return tuple_; }
  bool is_int() const { return !tuple_ && bool_mask_ == 0; }
  bool is_bool() const { return !tuple_ && bool_mask_ == 1; }
  std::size_t arity() const { return arity_; }

  std::int64_t as_int() const {
    if (!is_int()) throw Error("value is not an int: " + to_string());
    return data_[0];
  }
  bool as_bool() const {
    if (!is_bool()) throw Error("value is not a bool: " + to_string());
    return data_[0] != 0;
  }
  Value component(std::size_t i) const {
    if (i >= arity_) throw Error("tuple component out of range");
    return (bool_mask_ >> i) & 1u ? boolean(data_[i] != 0) : integer(data_[i]);
  }
  // Raw scalar cell i (bools as 0/1); scalars have one cell.
  std::int64_t cell(std::size_t i) const { return data_[i]; }
  Scalar kind(std::size_t i) const { return (bool_mask_ >> i) & 1u ? Scalar::Bool : Scalar::Int; }

  bool matches(const ValueType& t) const {
    if (t.is_tuple() != tuple_ || t.arity() != arity_) return false;
    for (std::size_t i = 0; i < arity_; ++i) {
      if (t.component(i) != kind(i)) return false;
    }
    return true;
  }

  std::string to_string() const {
    if (!tuple_) return scalar_string(0);
    std::string s = "(tuple";
    for (std::size_t i = 0; i < arity_; ++i) s += " " + scalar_string(i);
    return s + ")";
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ (static_cast<std::uint64_t>(tuple_) << 9) ^
                      (static_cast<std::uint64_t>(bool_mask_) << 1) ^ arity_;
    for (std::size_t i = 0; i < arity_; ++i) {
      h ^= static_cast<std::uint64_t>(data_[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  friend bool operator==(const Value& a, const Value& b) {
    if (a.tuple_ != b.tuple_ || a.arity_ != b.arity_ || a.bool_mask_ != b.bool_mask_) return false;
    for (std::size_t i = 0; i < a.arity_; ++i) {
      if (a.data_[i] != b.data_[i]) return false;
    }
    return true;
  }
  friend bool operator<(const Value& a, const Value& b) {
    if (a.tuple_ != b.tuple_) return a.tuple_ < b.tuple_;
    if (a.arity_ != b.arity_) return a.arity_ < b.arity_;
    if (a.bool_mask_ != b.bool_mask_) return a.bool_mask_ < b.bool_mask_;
    for (std::size_t i = 0; i < a.arity_; ++i) {
      if (a.data_[i] != b.data_[i]) return a.data_[i] < b.data_[i];
    }
    return false;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

 private:
  std::string scalar_string(std::size_t i) const {
    if ((bool_mask_ >> i) & 1u) return data_[i] != 0 ? "true" : "false";
    return std::to_string(data_[i]);
  }

  bool tuple_ = false;
  std::uint8_t arity_ = 1;
  std::uint8_t bool_mask_ = 0;
  std::array<std::int64_t, kMaxArity> data_{};
};

struct ValueHash {
  std::size_t operator()(const Value& v) const { return v.hash(); }
};

// The all-zero / all-false value of a type.
inline Value zero_value(const ValueType& t) {
  std::array<std::int64_t, kMaxArity> cells{};
  return Value::from_cells(t, cells.data());
}

inline nlohmann::json value_to_json(const Value& v) {
  auto scalar = [](const Value& s) -> nlohmann::json {
    if (s.is_bool()) return s.as_bool();
    return s.as_int();
  };
  if (!v.is_tuple()) return scalar(v);
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < v.arity(); ++i) arr.push_back(scalar(v.component(i)));
  return arr;
}

inline Value value_from_json(const nlohmann::json& j, const ValueType& t) {
  auto scalar = [](const nlohmann::json& s, Scalar k) {
    if (k == Scalar::Bool) {
      if (!s.is_boolean()) throw Error("expected a JSON boolean, got " + s.dump());
      return Value::boolean(s.get<bool>());
    }
    if (!s.is_number_integer()) throw Error("expected a JSON integer, got " + s.dump());
    return Value::integer(s.get<std::int64_t>());
  };
  if (!t.is_tuple()) return scalar(j, t.scalar());
  if (!j.is_array() || j.size() != t.arity()) {
    throw Error("expected a JSON array of " + std::to_string(t.arity()) + " elements");
  }
  std::vector<Value> items;
  for (std::size_t i = 0; i < t.arity(); ++i) items.push_back(scalar(j[i], t.component(i)));
  return Value::tuple(items);
}

}  // namespace semsynth

#endif  // SEMSYNTH_VALUE_HPP_
