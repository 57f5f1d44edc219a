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

#ifndef EVIMPL_CORE_MODEL_HPP_
#define EVIMPL_CORE_MODEL_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "evimpl/environment.hpp"

namespace evimpl {

// Article `article` is held by `agent` at `state` but does not contain it.
struct TruthViolation {
  AgentIndex agent;
  StateIndex state;
  ArticleIndex article;
  auto operator<=>(const TruthViolation&) const = default;
};

// Article `article` of `agent` contains `state` and is held somewhere, yet
// is missing from the endowment at `state`.
struct AvailabilityViolation {
  AgentIndex agent;
  ArticleIndex article;
  StateIndex state;
  auto operator<=>(const AvailabilityViolation&) const = default;
};

struct ValidationReport {
  std::vector<TruthViolation> truth;
  std::vector<AvailabilityViolation> availability;
  std::vector<std::pair<AgentIndex, StateIndex>> empty_endowments;

  bool axioms_hold() const { return truth.empty() && availability.empty(); }
};

ValidationReport validate_structure(const Environment& env);

// Intersection of everything agent i holds at s. Throws EmptyEndowment or
// NotHardEvidence.
StateSet tightest_evidence(const Environment& env, AgentIndex i, StateIndex s);

struct NormalityReport {
  bool normal = true;
  std::optional<std::pair<AgentIndex, StateIndex>> witness;
};
NormalityReport is_normal(const Environment& env);

// Classes of states with identical endowments for every agent, ordered by
// least member.
std::vector<StateSet> equivalent_states(const Environment& env);
bool equivalent(const Environment& env, StateIndex s, StateIndex t);

struct MeasurabilityReport {
  bool measurable = true;
  std::optional<std::pair<StateIndex, StateIndex>> violation;
};
MeasurabilityReport is_measurable(const Environment& env);

// Throws NotHardEvidence when some article is opaque.
void require_hard(const Environment& env);

// Per agent, per state tightest evidence. Requires hard, nonempty endowments.
using TightTable = std::vector<std::vector<StateSet>>;
TightTable tightest_table(const Environment& env);

}  // namespace evimpl

#endif  // EVIMPL_CORE_MODEL_HPP_
