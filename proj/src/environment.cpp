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

#include "evimpl/environment.hpp"

#include <algorithm>
#include <numeric>

#include "evimpl/error.hpp"

namespace evimpl {

std::vector<StateIndex> StateSet::members() const {
  std::vector<StateIndex> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(static_cast<StateIndex>(std::countr_zero(b)));
  }
  return out;
}

StateIndex Environment::state_index(std::string_view label) const {
  auto it = std::find(states_.begin(), states_.end(), label);
  if (it == states_.end()) {
    throw Error(ErrorCode::kParse, "unknown state \"" + std::string(label) + "\"");
  }
  return static_cast<StateIndex>(it - states_.begin());
}

OutcomeIndex Environment::outcome_index(std::string_view label) const {
  auto it = std::find(outcomes_.begin(), outcomes_.end(), label);
  if (it == outcomes_.end()) {
    throw Error(ErrorCode::kParse, "unknown outcome \"" + std::string(label) + "\"");
  }
  return static_cast<OutcomeIndex>(it - outcomes_.begin());
}

std::optional<ArticleIndex> Environment::find_article(AgentIndex i,
                                                      std::string_view label) const {
  const auto& arts = articles_.at(i);
  for (ArticleIndex a = 0; a < arts.size(); ++a) {
    if (arts[a].label == label) return a;
  }
  return std::nullopt;
}

bool Environment::holds(AgentIndex i, StateIndex s, ArticleIndex a) const {
  const auto& e = endowment(i, s);
  return std::binary_search(e.begin(), e.end(), a);
}

bool Environment::all_hard() const {
  for (const auto& arts : articles_) {
    for (const auto& art : arts) {
      if (!art.is_hard()) return false;
    }
  }
  return true;
}

namespace {

std::string label_of(const std::vector<std::string>& states, StateSet set) {
  std::string out = "{";
  bool first = true;
  for (StateIndex s : set.members()) {
    if (!first) out += ",";
    out += states.at(s);
    first = false;
  }
  return out + "}";
}

}  // namespace

std::string Environment::set_label(StateSet set) const {
  return label_of(states_, set);
}

Environment Environment::without_costs() const {
  Environment e = *this;
  e.has_cost_table_ = false;
  e.cost_bound_.reset();
  for (AgentIndex i = 0; i < num_agents(); ++i) {
    for (ArticleIndex a = 0; a < e.articles_[i].size(); ++a) {
      for (StateIndex s = 0; s < num_states(); ++s) {
        e.costs_[i][a][s] = holds(i, s, a) ? Cost(Rational(0)) : Cost::infinite();
      }
    }
  }
  return e;
}

EnvironmentBuilder::EnvironmentBuilder(std::vector<std::string> states,
                                       std::size_t agents,
                                       std::vector<std::string> outcomes)
    : states_(std::move(states)),
      outcomes_(std::move(outcomes)),
      articles_(agents),
      held_(agents),
      scf_(states_.size()),
      costs_(agents) {
  if (states_.empty()) throw Error(ErrorCode::kParse, "empty state space");
  if (states_.size() > kMaxStates) {
    throw Error(ErrorCode::kParse, "more than 64 states");
  }
  if (agents < 2) throw Error(ErrorCode::kParse, "need at least 2 agents");
  if (outcomes_.empty()) throw Error(ErrorCode::kParse, "empty outcome list");
  auto check_unique = [](std::vector<std::string> v, const char* what) {
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) {
      throw Error(ErrorCode::kParse, std::string("duplicate ") + what + " label");
    }
  };
  check_unique(states_, "state");
  check_unique(outcomes_, "outcome");
}

ArticleIndex EnvironmentBuilder::add_hard_article(AgentIndex i, StateSet members) {
  if (members.empty()) {
    throw Error(ErrorCode::kParse, "empty article for agent " + std::to_string(i + 1));
  }
  if (!members.subset_of(StateSet::full(states_.size()))) {
    throw Error(ErrorCode::kParse, "article outside the state space");
  }
  auto& arts = articles_.at(i);
  for (ArticleIndex a = 0; a < arts.size(); ++a) {
    if (arts[a].members == members) return a;
  }
  std::string label = label_of(states_, members);
  for (const auto& art : arts) {
    if (art.label == label) {
      throw Error(ErrorCode::kParse, "label clash for article " + label);
    }
  }
  arts.push_back(Article{members, std::move(label)});
  held_[i].emplace_back(states_.size(), false);
  costs_[i].emplace_back(states_.size());
  return arts.size() - 1;
}

ArticleIndex EnvironmentBuilder::add_opaque_article(AgentIndex i, std::string label) {
  if (label.empty()) throw Error(ErrorCode::kParse, "empty article label");
  auto& arts = articles_.at(i);
  for (ArticleIndex a = 0; a < arts.size(); ++a) {
    if (arts[a].label == label) {
      if (arts[a].is_hard()) {
        throw Error(ErrorCode::kParse, "label clash for article " + label);
      }
      return a;
    }
  }
  arts.push_back(Article{std::nullopt, std::move(label)});
  held_[i].emplace_back(states_.size(), false);
  costs_[i].emplace_back(states_.size());
  return arts.size() - 1;
}

void EnvironmentBuilder::endow(AgentIndex i, StateIndex s, ArticleIndex a) {
  held_.at(i).at(a).at(s) = true;
}

void EnvironmentBuilder::set_scf(StateIndex s, OutcomeIndex a) {
  if (a >= outcomes_.size()) throw Error(ErrorCode::kParse, "scf outcome out of range");
  scf_.at(s) = a;
}

void EnvironmentBuilder::set_cost(AgentIndex i, ArticleIndex a, StateIndex s, Cost c) {
  has_cost_table_ = true;
  costs_.at(i).at(a).at(s) = std::move(c);
}

void EnvironmentBuilder::set_cost_bound(Rational c) {
  if (c <= 0) throw Error(ErrorCode::kParse, "cost_bound must be positive");
  cost_bound_ = std::move(c);
}

Environment EnvironmentBuilder::build() const {
  const std::size_t n = states_.size();
  Environment env;
  env.states_ = states_;
  env.outcomes_ = outcomes_;
  for (StateIndex s = 0; s < n; ++s) {
    if (!scf_[s]) {
      throw Error(ErrorCode::kParse, "scf has no outcome for state " + states_[s]);
    }
    env.scf_.push_back(*scf_[s]);
  }
  env.has_cost_table_ = has_cost_table_;
  env.cost_bound_ = cost_bound_;

  for (AgentIndex i = 0; i < articles_.size(); ++i) {
    const auto& arts = articles_[i];
    std::vector<ArticleIndex> order(arts.size());
    std::iota(order.begin(), order.end(), ArticleIndex{0});
    std::sort(order.begin(), order.end(), [&](ArticleIndex x, ArticleIndex y) {
      const Article& ax = arts[x];
      const Article& ay = arts[y];
      if (ax.is_hard() != ay.is_hard()) return ax.is_hard();
      if (ax.is_hard()) return ax.members->bits() < ay.members->bits();
      return ax.label < ay.label;
    });

    std::vector<Article> sorted;
    std::vector<std::vector<ArticleIndex>> endow(n);
    std::vector<std::vector<Cost>> costs;
    for (ArticleIndex pos = 0; pos < order.size(); ++pos) {
      ArticleIndex old = order[pos];
      sorted.push_back(arts[old]);
      std::vector<Cost> row;
      for (StateIndex s = 0; s < n; ++s) {
        bool held = held_[i][old][s];
        if (held) endow[s].push_back(pos);
        const auto& given = costs_[i][old][s];
        if (!given) {
          row.push_back(held ? Cost(Rational(0)) : Cost::infinite());
          continue;
        }
        if (given->is_finite() != held) {
          throw Error(ErrorCode::kParse,
                      "cost of article " + arts[old].label + " for agent " +
                          std::to_string(i + 1) + " at " + states_[s] +
                          (held ? " must be finite (article is held)"
                                : " must be inf (article is not held)"));
        }
        row.push_back(*given);
      }
      costs.push_back(std::move(row));
    }
    env.articles_.push_back(std::move(sorted));
    env.endowment_.push_back(std::move(endow));
    env.costs_.push_back(std::move(costs));
  }
  return env;
}

}  // namespace evimpl
