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

#ifndef EVIMPL_ENVIRONMENT_HPP_
#define EVIMPL_ENVIRONMENT_HPP_

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evimpl/rational.hpp"

namespace evimpl {

using StateIndex = std::size_t;
using AgentIndex = std::size_t;  // 0-based; files and reports use 1-based
using ArticleIndex = std::size_t;
using OutcomeIndex = std::size_t;

inline constexpr std::size_t kMaxStates = 64;

class StateSet {
 public:
  constexpr StateSet() = default;
  constexpr explicit StateSet(std::uint64_t bits) : bits_(bits) {}
  static constexpr StateSet singleton(StateIndex s) {
    return StateSet(std::uint64_t{1} << s);
  }
  static constexpr StateSet full(std::size_t n) {
    return StateSet(n >= 64 ? ~std::uint64_t{0}
                            : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(StateIndex s) const { return (bits_ >> s) & 1U; }
  constexpr bool subset_of(StateSet o) const {
    return (bits_ & ~o.bits_) == 0;
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    return static_cast<std::size_t>(std::popcount(bits_));
  }
  std::vector<StateIndex> members() const;

  constexpr StateSet operator&(StateSet o) const { return StateSet(bits_ & o.bits_); }
  constexpr StateSet operator|(StateSet o) const { return StateSet(bits_ | o.bits_); }
  constexpr StateSet without(StateSet o) const { return StateSet(bits_ & ~o.bits_); }
  constexpr StateSet with(StateIndex s) const { return *this | singleton(s); }

  constexpr auto operator<=>(const StateSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

// An item of evidence. Hard articles are subsets of the state space; opaque
// articles carry only a label and matter through their costs.
struct Article {
  std::optional<StateSet> members;
  std::string label;

  bool is_hard() const { return members.has_value(); }
  bool operator==(const Article&) const = default;
};

class EnvironmentBuilder;

class Environment {
 public:
  std::size_t num_states() const { return states_.size(); }
  std::size_t num_agents() const { return articles_.size(); }
  std::size_t num_outcomes() const { return outcomes_.size(); }
  const std::vector<std::string>& state_labels() const { return states_; }
  const std::vector<std::string>& outcome_labels() const { return outcomes_; }
  const std::string& state_label(StateIndex s) const { return states_.at(s); }
  const std::string& outcome_label(OutcomeIndex a) const { return outcomes_.at(a); }
  StateSet all_states() const { return StateSet::full(num_states()); }

  // Throws Error(kParse) for unknown labels.
  StateIndex state_index(std::string_view label) const;
  OutcomeIndex outcome_index(std::string_view label) const;

  // Agent i's article universe: everything it holds at some state, in
  // canonical order (hard by bitmask, then opaque by label).
  const std::vector<Article>& articles(AgentIndex i) const { return articles_.at(i); }
  const Article& article(AgentIndex i, ArticleIndex a) const { return articles_.at(i).at(a); }
  std::optional<ArticleIndex> find_article(AgentIndex i, std::string_view label) const;

  // Sorted article indices available to agent i at state s.
  const std::vector<ArticleIndex>& endowment(AgentIndex i, StateIndex s) const {
    return endowment_.at(i).at(s);
  }
  bool holds(AgentIndex i, StateIndex s, ArticleIndex a) const;

  OutcomeIndex scf(StateIndex s) const { return scf_.at(s); }

  bool all_hard() const;

  // Cost of presenting article a at state s. Without an explicit table every
  // held article is free and every other one is unavailable.
  bool has_cost_table() const { return has_cost_table_; }
  const Cost& cost(AgentIndex i, ArticleIndex a, StateIndex s) const {
    return costs_.at(i).at(a).at(s);
  }
  const std::optional<Rational>& cost_bound() const { return cost_bound_; }

  std::string set_label(StateSet set) const;

  // The same evidence and scf with the cost table and bound dropped.
  Environment without_costs() const;

  friend bool operator==(const Environment&, const Environment&) = default;

 private:
  friend class EnvironmentBuilder;
  Environment() = default;

  std::vector<std::string> states_;
  std::vector<std::string> outcomes_;
  std::vector<std::vector<Article>> articles_;
  std::vector<std::vector<std::vector<ArticleIndex>>> endowment_;
  std::vector<OutcomeIndex> scf_;
  bool has_cost_table_ = false;
  std::vector<std::vector<std::vector<Cost>>> costs_;
  std::optional<Rational> cost_bound_;
};

class EnvironmentBuilder {
 public:
  EnvironmentBuilder(std::vector<std::string> states, std::size_t agents,
                     std::vector<std::string> outcomes);

  std::size_t num_states() const { return states_.size(); }

  // Both return the (provisional) index; adding the same article twice is a
  // no-op.
  ArticleIndex add_hard_article(AgentIndex i, StateSet members);
  ArticleIndex add_opaque_article(AgentIndex i, std::string label);
  void endow(AgentIndex i, StateIndex s, ArticleIndex a);
  void endow_hard(AgentIndex i, StateIndex s, StateSet members) {
    endow(i, s, add_hard_article(i, members));
  }
  void set_scf(StateIndex s, OutcomeIndex a);
  void set_cost(AgentIndex i, ArticleIndex a, StateIndex s, Cost c);
  void set_cost_bound(Rational c);
  void enable_cost_table() { has_cost_table_ = true; }

  // Canonicalizes article order, fills default costs and checks every cross
  // reference. Throws Error(kParse) on inconsistent input.
  Environment build() const;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> outcomes_;
  std::vector<std::vector<Article>> articles_;
  std::vector<std::vector<std::vector<bool>>> held_;  // [i][a][s]
  std::vector<std::optional<OutcomeIndex>> scf_;
  bool has_cost_table_ = false;
  std::vector<std::vector<std::vector<std::optional<Cost>>>> costs_;
  std::optional<Rational> cost_bound_;
};

}  // namespace evimpl

#endif  // EVIMPL_ENVIRONMENT_HPP_
