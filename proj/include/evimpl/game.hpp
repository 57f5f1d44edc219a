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

#ifndef EVIMPL_GAME_HPP_
#define EVIMPL_GAME_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evimpl/environment.hpp"
#include "evimpl/mechanism.hpp"

namespace evimpl {

inline constexpr std::size_t kDefaultProfileCap = 1'000'000;

// Per agent, per outcome, per state values in [0,1).
class UtilityProfile {
 public:
  UtilityProfile(std::size_t agents, std::size_t outcomes, std::size_t states);
  // v[agent][outcome], the same at every state.
  static UtilityProfile state_independent(std::size_t states,
                                          const std::vector<std::vector<Rational>>& v);

  void set(AgentIndex i, OutcomeIndex a, StateIndex s, Rational value);
  const Rational& at(AgentIndex i, OutcomeIndex a, StateIndex s) const {
    return values_[i][a][s];
  }
  std::size_t num_agents() const { return values_.size(); }
  std::size_t num_outcomes() const { return values_.empty() ? 0 : values_[0].size(); }
  std::size_t num_states() const {
    return values_.empty() || values_[0].empty() ? 0 : values_[0][0].size();
  }

 private:
  std::vector<std::vector<std::vector<Rational>>> values_;
};

// Everything about the induced game at one true state that does not depend
// on the utility profile. Profiles are indexed in mixed radix with the last
// agent varying fastest.
struct GameSkeleton {
  StateIndex truth = 0;
  std::vector<std::vector<Message>> messages;       // feasible, per agent
  std::vector<std::vector<Rational>> message_cost;  // charged cost, per agent
  std::vector<Lottery> lotteries;                   // distinct outcomes
  std::vector<std::uint32_t> lottery_of;            // per profile
  std::vector<std::vector<Rational>> transfer_table;
  std::vector<std::uint32_t> transfers_of;          // per profile
  std::vector<std::size_t> strides;

  std::size_t num_agents() const { return messages.size(); }
  std::size_t num_profiles() const { return lottery_of.size(); }
  std::vector<std::size_t> decode(std::size_t profile) const;
  std::size_t encode(const std::vector<std::size_t>& choice) const;
  std::size_t deviate(std::size_t profile, AgentIndex i, std::size_t message) const;
  std::vector<Message> profile_messages(std::size_t profile) const;
  const std::vector<Rational>& transfers(std::size_t profile) const {
    return transfer_table[transfers_of[profile]];
  }
  const Lottery& outcome(std::size_t profile) const { return lotteries[lottery_of[profile]]; }
};

// Feasible messages: any claim (and round claims), any article available at
// the truth. Throws DomainMismatch or SizeLimit.
GameSkeleton build_skeleton(const Mechanism& mech, const Environment& env, StateIndex truth,
                            std::size_t profile_cap = kDefaultProfileCap);

// Exact normal-form game; payoff[player][profile].
struct InducedGame {
  std::vector<std::size_t> num_strategies;
  std::vector<std::size_t> strides;
  std::vector<std::vector<Rational>> payoff;

  std::size_t num_players() const { return num_strategies.size(); }
  std::size_t num_profiles() const { return payoff.empty() ? 0 : payoff[0].size(); }
  std::size_t index(const std::vector<std::size_t>& choice) const;
  std::vector<std::size_t> decode(std::size_t profile) const;
};

InducedGame make_game(std::vector<std::size_t> num_strategies,
                      std::vector<std::vector<Rational>> payoff);
InducedGame induce(const GameSkeleton& skeleton, const UtilityProfile& v);
InducedGame induce(const Mechanism& mech, const Environment& env, const UtilityProfile& v,
                   StateIndex truth, std::size_t profile_cap = kDefaultProfileCap);

// Profiles at which no player has a strictly better unilateral deviation,
// in increasing index order.
std::vector<std::size_t> pure_nash(const InducedGame& game,
                                   std::size_t profile_cap = kDefaultProfileCap);

struct MixedEquilibrium {
  std::vector<Rational> row;     // probability per row strategy
  std::vector<Rational> column;  // probability per column strategy
  bool degenerate = false;       // indifference system has a continuum of solutions
  std::vector<std::size_t> row_support() const;
  std::vector<std::size_t> column_support() const;
};

struct MixedResult {
  std::vector<MixedEquilibrium> equilibria;
  bool exhaustive = true;  // false: supports were capped (bounded-support search)
  std::size_t max_support = 0;
  bool degenerate = false;
  std::vector<std::size_t> surviving_rows;
  std::vector<std::size_t> surviving_columns;
};

// Support enumeration over supports of size <= max_support after iterated
// removal of strictly dominated pure strategies.
MixedResult mixed_nash_2p(const InducedGame& game, std::size_t max_support,
                          std::size_t pair_cap = 10'000'000);

// Exact Nash check of a mixed profile in a two-player game.
bool is_nash_2p(const InducedGame& game, const std::vector<Rational>& row,
                const std::vector<Rational>& column);

}  // namespace evimpl

#endif  // EVIMPL_GAME_HPP_
