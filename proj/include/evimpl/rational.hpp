// Copyright 2026 The evimpl Authors
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

#ifndef EVIMPL_RATIONAL_HPP_
#define EVIMPL_RATIONAL_HPP_

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace evimpl {

using Rational = mpq_class;

// Accepts "p", "p/q" and a leading minus sign. Throws Error(kParse) otherwise.
Rational parse_rational(std::string_view text);

// Always "p/q" with q > 0, so integers print as "n/1".
std::string to_string(const Rational& r);

// A nonnegative evidence cost, or "inf" for an article that does not exist
// at the state.
class Cost {
 public:
  Cost() : value_(0) {}
  explicit Cost(Rational v) : value_(std::move(v)) { value_->canonicalize(); }
  static Cost infinite() {
    Cost c;
    c.value_.reset();
    return c;
  }

  bool is_finite() const { return value_.has_value(); }
  const Rational& value() const;  // precondition: finite

  friend bool operator==(const Cost& a, const Cost& b);
  friend std::strong_ordering operator<=>(const Cost& a, const Cost& b);

 private:
  std::optional<Rational> value_;
};

Cost parse_cost(std::string_view text);
std::string to_string(const Cost& c);

// A value in the extended rationals, used for cost differences where one
// side may be infinite.
struct ExtRational {
  enum class Kind { kNegInf, kFinite, kPosInf };
  Kind kind = Kind::kFinite;
  Rational value;

  static ExtRational finite(Rational v) { return {Kind::kFinite, std::move(v)}; }
  static ExtRational pos_inf() { return {Kind::kPosInf, Rational(0)}; }
  static ExtRational neg_inf() { return {Kind::kNegInf, Rational(0)}; }
  bool is_finite() const { return kind == Kind::kFinite; }

  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend std::strong_ordering operator<=>(const ExtRational& a,
                                          const ExtRational& b);
};

// a - b for costs. Both infinite is a caller bug and throws.
ExtRational difference(const Cost& a, const Cost& b);
ExtRational difference(const ExtRational& a, const ExtRational& b);
std::string to_string(const ExtRational& x);

}  // namespace evimpl

#endif  // EVIMPL_RATIONAL_HPP_
