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

#include "evimpl/mechanism.hpp"

#include <algorithm>

#include "evimpl/error.hpp"

namespace evimpl {

Lottery Lottery::certain(OutcomeIndex a) {
  Lottery l;
  l.entries_.emplace_back(a, Rational(1));
  return l;
}

Lottery Lottery::uniform(std::size_t outcomes) {
  Lottery l;
  for (OutcomeIndex a = 0; a < outcomes; ++a) {
    l.entries_.emplace_back(a, Rational(1, outcomes));
  }
  return l;
}

void Lottery::add(OutcomeIndex a, const Rational& p) {
  if (p == 0) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), a,
                             [](const auto& e, OutcomeIndex x) { return e.first < x; });
  if (it != entries_.end() && it->first == a) {
    it->second += p;
  } else {
    entries_.insert(it, {a, p});
  }
}

void Lottery::add(const Lottery& other, const Rational& scale) {
  for (const auto& [a, p] : other.entries_) add(a, p * scale);
}

bool Lottery::is_certain(OutcomeIndex a) const {
  return entries_.size() == 1 && entries_[0].first == a && entries_[0].second == 1;
}

Rational Lottery::probability(OutcomeIndex a) const {
  for (const auto& [b, p] : entries_) {
    if (b == a) return p;
  }
  return 0;
}

Rational Lottery::total_variation(const Lottery& other) const {
  Rational up = 0;
  for (const auto& [a, p] : entries_) {
    Rational d = p - other.probability(a);
    if (d > 0) up += d;
  }
  return up;
}

Mechanism::Mechanism(const Environment& env, MechanismInfo info)
    : info_(std::move(info)), num_states_(env.num_states()) {
  for (AgentIndex i = 0; i < env.num_agents(); ++i) {
    universe_sizes_.push_back(env.articles(i).size());
  }
}

bool Mechanism::matches(const Environment& env) const {
  if (env.num_states() != num_states_ || env.num_agents() != num_agents()) return false;
  for (AgentIndex i = 0; i < num_agents(); ++i) {
    if (env.articles(i).size() != universe_sizes_[i]) return false;
  }
  return true;
}

Evaluation Mechanism::evaluate(std::span<const Message> profile) const {
  if (profile.size() != num_agents()) {
    throw Error(ErrorCode::kMessageOutOfDomain,
                "profile has " + std::to_string(profile.size()) + " messages for " +
                    std::to_string(num_agents()) + " agents");
  }
  for (AgentIndex i = 0; i < profile.size(); ++i) {
    const Message& m = profile[i];
    bool ok = m.claim < num_states_ && m.article < universe_sizes_[i] &&
              m.rounds.size() == info_.extra_rounds;
    for (StateIndex r : m.rounds) ok = ok && r < num_states_;
    if (!ok) {
      throw Error(ErrorCode::kMessageOutOfDomain,
                  "message of agent " + std::to_string(i + 1) + " is outside its domain");
    }
  }
  return evaluate_checked(profile);
}

std::vector<Message> Mechanism::truthful_profile(StateIndex truth) const {
  std::vector<Message> out;
  for (AgentIndex i = 0; i < num_agents(); ++i) {
    out.push_back(Message{truth, designated_article(i, truth),
                          std::vector<StateIndex>(info_.extra_rounds, truth)});
  }
  return out;
}

std::vector<Message> Mechanism::message_domain(AgentIndex i) const {
  const std::size_t rounds = info_.extra_rounds;
  std::size_t tuples = 1;
  for (std::size_t r = 0; r < rounds; ++r) tuples *= num_states_;
  std::vector<Message> out;
  for (StateIndex c = 0; c < num_states_; ++c) {
    for (ArticleIndex a = 0; a < universe_sizes_.at(i); ++a) {
      for (std::size_t t = 0; t < tuples; ++t) {
        Message m{c, a, std::vector<StateIndex>(rounds)};
        std::size_t code = t;
        for (std::size_t r = rounds; r-- > 0;) {
          m.rounds[r] = code % num_states_;
          code /= num_states_;
        }
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

void for_each_profile(const Mechanism& mech,
                      const std::function<void(std::span<const Message>)>& visit,
                      std::size_t cap) {
  const std::size_t agents = mech.num_agents();
  std::vector<std::vector<Message>> domains;
  std::size_t total = 1;
  for (AgentIndex i = 0; i < agents; ++i) {
    domains.push_back(mech.message_domain(i));
    total *= domains.back().size();
    if (total > cap) throw Error(ErrorCode::kSizeLimit, "message product exceeds the cap");
  }
  std::vector<std::size_t> choice(agents, 0);
  std::vector<Message> profile(agents);
  for (std::size_t p = 0; p < total; ++p) {
    for (AgentIndex i = 0; i < agents; ++i) profile[i] = domains[i][choice[i]];
    visit(profile);
    for (std::size_t i = agents; i-- > 0;) {
      if (++choice[i] < domains[i].size()) break;
      choice[i] = 0;
    }
  }
}

}  // namespace evimpl
