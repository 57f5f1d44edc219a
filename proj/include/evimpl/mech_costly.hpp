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

#ifndef EVIMPL_MECH_COSTLY_HPP_
#define EVIMPL_MECH_COSTLY_HPP_

#include "evimpl/mech_hard.hpp"

namespace evimpl {

struct RobustParams {
  Rational refutation;     // T1
  Rational unsupported;    // T2
  Rational disagreement;   // T3
  Rational evidence_size;  // T4
  Rational epsilon;
  Rational cost_bound;
  std::size_t num_states = 0;
  std::size_t num_agents = 0;
};

// Constructive solution of the penalty inequalities for cost bound C.
RobustParams solve_robust_params(const Rational& cost_bound, std::size_t num_states,
                                 std::size_t num_agents, const Rational& epsilon);

struct RobustInequalities {
  bool refutation_beats_cost;        // T1 > C n / eps
  bool refutation_dominates;         // T1 >= 1 + T2 + (I-1) T3 + T4
  bool unsupported_dominates;        // T2 >= 1 + (I-1) T3
  bool disagreement_at_least_one;    // T3 >= 1
  bool evidence_size_beats_cost;     // T4 > C n / (1 - eps)
  bool all() const {
    return refutation_beats_cost && refutation_dominates && unsupported_dominates &&
           disagreement_at_least_one && evidence_size_beats_cost;
  }
};
RobustInequalities check_robust_params(const RobustParams& p);

// Direct rules with the robust magnitudes. Reads only the cost bound from
// the environment; the game engine charges the actual costs.
MechanismPtr synthesize_theorem3(const Environment& env, const Rational& epsilon = Rational(1, 2));

}  // namespace evimpl

#endif  // EVIMPL_MECH_COSTLY_HPP_
