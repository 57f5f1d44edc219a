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

#ifndef EVIMPL_COST_VARIATION_HPP_
#define EVIMPL_COST_VARIATION_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "evimpl/mechanism.hpp"

namespace evimpl {

// [agent][state] -> article.
using Selection = std::vector<std::vector<ArticleIndex>>;

struct CheapestSets {
  std::vector<std::vector<std::vector<ArticleIndex>>> sets;  // [agent][state], sorted
  std::vector<std::vector<Rational>> min_cost;               // [agent][state]
  Selection designated;                                      // lowest index in each set

  bool is_cheapest(AgentIndex i, StateIndex s, ArticleIndex a) const;
};

// Throws NoFiniteCost when some agent has no available article at a state.
CheapestSets cheapest_sets(const Environment& env);

// Strict cost reversal: presenting `article` is relatively cheaper at `at`
// than at `claimed`, measured against the selected cheapest article for
// `claimed`. The article must be affordable at `at`.
bool reverses(const Environment& env, const Selection& sel, AgentIndex i,
              StateIndex claimed, StateIndex at, ArticleIndex article);

// Agent i, whose true state is `at`, can credibly contest the claim `claimed`.
bool can_challenge(const Environment& env, const Selection& sel, AgentIndex i,
                   StateIndex claimed, StateIndex at);

struct Challenge {
  StateIndex claimed = 0;
  AgentIndex agent = 0;
  StateIndex at = 0;
  ArticleIndex article = 0;
  Rational reward;
};

// Slack-maximizing challenge article and the midpoint reward. Throws
// PreconditionViolated when no challenge exists.
Challenge select_challenge(const Environment& env, const Selection& sel, AgentIndex i,
                           StateIndex claimed, StateIndex at);

// Both defining inequalities of a challenge, checked exactly.
bool challenge_is_sound(const Environment& env, const Selection& sel, const Challenge& c);

enum class SearchVerdict { kHolds, kFails, kIncomplete };

struct SelectionAttempt {
  std::vector<ArticleIndex> articles;  // per agent
  StateIndex violated_at = 0;
};

struct MonotonicityReport {
  SearchVerdict verdict = SearchVerdict::kHolds;
  std::optional<Selection> witness;
  std::optional<std::pair<StateIndex, StateIndex>> violation;  // (claimed, other)
  // For the failing state: every candidate selection and the first state
  // where it breaks.
  std::vector<SelectionAttempt> attempts;
  std::size_t combinations_checked = 0;
};

// Some selection of cheapest articles makes every outcome-relevant pair of
// states challengeable. The condition for a pair only involves the selection
// at the claimed state, so the search runs state by state; `cap` bounds the
// candidates tried per state.
MonotonicityReport is_evidence_monotonic_cp(const Environment& env,
                                            std::size_t cap = 1'000'000);

// Some selection of cheapest articles at each claimed state contains, for
// every outcome-relevant other state, an article that is not cheapest there.
MonotonicityReport is_evidence_monotonic_star(const Environment& env,
                                              std::size_t cap = 1'000'000);

// With `lie` challengeable at `truth` by exactly one agent i, no other agent
// j can challenge `truth` at `lie` using its selected article for `lie`.
// Throws PreconditionViolated when the challenger is not unique.
bool lemma2_check(const Environment& env, const Selection& sel, StateIndex truth,
                  StateIndex lie);

MechanismPtr synthesize_theorem4(const Environment& env);
MechanismPtr synthesize_theorem4_multiagent(const Environment& env);

struct EmStarParams {
  std::optional<Rational> cost_gap;  // none when every available article is cheapest
  std::size_t max_cheapest = 1;
  Rational reward_cap;
  std::size_t num_agents = 2;
  Rational reward() const;  // min(gap, cap) / (2I)
};
EmStarParams em_star_params(const Environment& env, const Rational& reward_cap);
MechanismPtr synthesize_em_star(const Environment& env, const Rational& reward_cap);

}  // namespace evimpl

#endif  // EVIMPL_COST_VARIATION_HPP_
