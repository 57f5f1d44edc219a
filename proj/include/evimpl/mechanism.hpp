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

#ifndef EVIMPL_MECHANISM_HPP_
#define EVIMPL_MECHANISM_HPP_

#include <compare>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evimpl/environment.hpp"
#include "evimpl/rational.hpp"

namespace evimpl {

// One agent's report: a state claim, an article from the agent's universe
// and, for the multi-round mechanism only, the later-round state claims.
struct Message {
  StateIndex claim = 0;
  ArticleIndex article = 0;
  std::vector<StateIndex> rounds;

  auto operator<=>(const Message&) const = default;
};

// Finite distribution over outcomes with exact weights; entries sorted by
// outcome, all weights positive.
class Lottery {
 public:
  Lottery() = default;
  static Lottery certain(OutcomeIndex a);
  static Lottery uniform(std::size_t outcomes);

  // Adds weight p (possibly scaling an existing entry). p must be >= 0.
  void add(OutcomeIndex a, const Rational& p);
  void add(const Lottery& other, const Rational& scale);

  const std::vector<std::pair<OutcomeIndex, Rational>>& entries() const { return entries_; }
  bool is_certain(OutcomeIndex a) const;
  Rational probability(OutcomeIndex a) const;
  // sup over utilities in [0,1) of the expected-utility difference.
  Rational total_variation(const Lottery& other) const;

  bool operator==(const Lottery&) const = default;

 private:
  std::vector<std::pair<OutcomeIndex, Rational>> entries_;
};

struct TransferComponent {
  std::string name;
  std::vector<Rational> values;
};

struct Evaluation {
  Lottery outcome;
  std::vector<Rational> transfers;
  std::vector<TransferComponent> components;
};

struct MechanismInfo {
  std::string variant;
  std::vector<std::pair<std::string, std::string>> parameters;
  bool charges_costs = false;
  bool requires_cheapest_evidence = false;
  std::size_t extra_rounds = 0;
};

class Mechanism {
 public:
  virtual ~Mechanism() = default;
  Mechanism(const Mechanism&) = delete;
  Mechanism& operator=(const Mechanism&) = delete;

  const MechanismInfo& info() const { return info_; }
  std::size_t num_agents() const { return universe_sizes_.size(); }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_articles(AgentIndex i) const { return universe_sizes_.at(i); }

  // Throws MessageOutOfDomain for malformed profiles.
  Evaluation evaluate(std::span<const Message> profile) const;

  // The profile that should be the equilibrium at `truth`: every agent
  // claims the truth with its designated article.
  std::vector<Message> truthful_profile(StateIndex truth) const;

  // True when `env` has the shape this mechanism was built for.
  bool matches(const Environment& env) const;

  // Every message of agent i: any claim, any article of its universe and any
  // round claims.
  std::vector<Message> message_domain(AgentIndex i) const;

 protected:
  Mechanism(const Environment& env, MechanismInfo info);
  virtual Evaluation evaluate_checked(std::span<const Message> profile) const = 0;
  virtual ArticleIndex designated_article(AgentIndex i, StateIndex s) const = 0;

  MechanismInfo info_;

 private:
  std::size_t num_states_;
  std::vector<std::size_t> universe_sizes_;
};

using MechanismPtr = std::unique_ptr<Mechanism>;

// Calls `visit` on every profile of the full message product, last agent
// varying fastest. Throws SizeLimit beyond `cap` profiles.
void for_each_profile(const Mechanism& mech,
                      const std::function<void(std::span<const Message>)>& visit,
                      std::size_t cap = 10'000'000);

// Gate for the synthesis preconditions. kSkip builds the rules anyway, for
// negative controls on environments outside the synthesis preconditions.
enum class Gate { kEnforce, kSkip };

}  // namespace evimpl

#endif  // EVIMPL_MECHANISM_HPP_
