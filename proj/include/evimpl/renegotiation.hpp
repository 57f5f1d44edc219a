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

#ifndef EVIMPL_RENEGOTIATION_HPP_
#define EVIMPL_RENEGOTIATION_HPP_

#include <optional>
#include <vector>

#include "evimpl/mechanism.hpp"

namespace evimpl {

enum class PairVerdict {
  kOneAgentBothWays,   // a single agent refutes each state at the other
  kBothOneWay,         // both refute one state at the other, neither the reverse
  kCrossRefutation,    // failure: different agents refute the two directions
  kOneWaySingle,       // failure: nonrefutable one way, single refuter the other
  kUnseparated,        // failure: nobody refutes anything in either direction
};

bool pair_passes(PairVerdict v);

struct PairReport {
  StateIndex first = 0;
  StateIndex second = 0;
  PairVerdict verdict = PairVerdict::kUnseparated;
  // Orientation (s, s'): the condition or failure is about s' claimed at s.
  StateIndex at = 0;
  StateIndex claimed = 0;
  // For failures: the agent who should value f(claimed) in the adversarial
  // construction, and the other one.
  std::optional<AgentIndex> favors_claimed;
};

struct RenegotiationReport {
  std::vector<PairReport> pairs;  // one per unordered pair with distinct outcomes
  bool passes() const;
};

// Agent k holds at `at` an article excluding `claimed`.
bool refutes(const Environment& env, AgentIndex k, StateIndex claimed, StateIndex at);

RenegotiationReport check_rp_conditions(const Environment& env);

// Outcome is the first claim; an agent that cannot support its own claim
// pays 1 to the other agent, and an agent whose claim the other's article
// excludes pays 2 to the other agent.
MechanismPtr synthesize_rp_mechanism(const Environment& env, Gate gate = Gate::kEnforce);

// State-independent values from the necessity construction for a failing
// pair: the favored agent values f(claimed) at 1 - eta and f(at) at 0, the
// other agent the reverse, and every other outcome is split evenly.
// Returns v[agent][outcome].
std::vector<std::vector<Rational>> build_adversarial_profile(const Environment& env,
                                                             const PairReport& pair,
                                                             const Rational& eta = Rational(1, 10));

}  // namespace evimpl

#endif  // EVIMPL_RENEGOTIATION_HPP_
