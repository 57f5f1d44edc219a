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

#ifndef EVIMPL_LP_HPP_
#define EVIMPL_LP_HPP_

#include <vector>

#include "evimpl/rational.hpp"

namespace evimpl {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LinearConstraint {
  std::vector<Rational> coeffs;
  Relation relation = Relation::kLessEqual;
  Rational rhs;
};

struct LpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kInfeasible;
  std::vector<Rational> x;
  Rational value;
};

// Maximizes objective . x subject to the constraints and x >= 0, exactly.
// Two-phase tableau simplex with Bland's rule, so it always terminates.
LpResult maximize(const std::vector<Rational>& objective,
                  const std::vector<LinearConstraint>& constraints);

// Rank of a rational matrix (rows may be copied and reduced freely).
std::size_t matrix_rank(std::vector<std::vector<Rational>> rows);

}  // namespace evimpl

#endif  // EVIMPL_LP_HPP_
