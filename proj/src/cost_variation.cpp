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

#include "evimpl/cost_variation.hpp"

#include <algorithm>
#include <functional>

#include "evimpl/error.hpp"

namespace evimpl {

bool CheapestSets::is_cheapest(AgentIndex i, StateIndex s, ArticleIndex a) const {
  const auto& set = sets.at(i).at(s);
  return std::binary_search(set.begin(), set.end(), a);
}

CheapestSets cheapest_sets(const Environment& env) {
  CheapestSets out;
  for (AgentIndex i = 0; i < env.num_agents(); ++i) {
    std::vector<std::vector<ArticleIndex>> per_state;
    std::vector<Rational> mins;
    std::vector<ArticleIndex> designated;
    for (StateIndex s = 0; s < env.num_states(); ++s) {
      std::optional<Rational> best;
      std::vector<ArticleIndex> argmin;
      for (ArticleIndex a = 0; a < env.articles(i).size(); ++a) {
        const Cost& c = env.cost(i, a, s);
        if (!c.is_finite()) continue;
        if (!best || c.value() < *best) {
          best = c.value();
          argmin.clear();
        }
        if (c.value() == *best) argmin.push_back(a);
      }
      if (!best) {
        throw Error(ErrorCode::kNoFiniteCost, "agent " + std::to_string(i + 1) +
                                                  " has no available article at " +
                                                  env.state_label(s));
      }
      designated.push_back(argmin.front());
      per_state.push_back(std::move(argmin));
      mins.push_back(*best);
    }
    out.sets.push_back(std::move(per_state));
    out.min_cost.push_back(std::move(mins));
    out.designated.push_back(std::move(designated));
  }
  return out;
}

namespace {

struct ReversalGap {
  ExtRational at_challenge;  // c(E, at) - c(E*, at)
  ExtRational at_claim;      // c(E, claimed) - c(E*, claimed)
};

std::optional<ReversalGap> reversal_gap(const Environment& env, ArticleIndex selected,
                                        AgentIndex i, StateIndex claimed, StateIndex at,
                                        ArticleIndex article) {
  if (!env.cost(i, article, at).is_finite()) return std::nullopt;
  return ReversalGap{difference(env.cost(i, article, at), env.cost(i, selected, at)),
                     difference(env.cost(i, article, claimed), env.cost(i, selected, claimed))};
}

bool reverses_with(const Environment& env, ArticleIndex selected, AgentIndex i,
                   StateIndex claimed, StateIndex at, ArticleIndex article) {
  auto gap = reversal_gap(env, selected, i, claimed, at, article);
  return gap && gap->at_challenge < gap->at_claim;
}

bool challengeable_with(const Environment& env, ArticleIndex selected, AgentIndex i,
                        StateIndex claimed, StateIndex at) {
  for (ArticleIndex a = 0; a < env.articles(i).size(); ++a) {
    if (reverses_with(env, selected, i, claimed, at, a)) return true;
  }
  return false;
}

}  // namespace

bool reverses(const Environment& env, const Selection& sel, AgentIndex i, StateIndex claimed,
              StateIndex at, ArticleIndex article) {
  return reverses_with(env, sel.at(i).at(claimed), i, claimed, at, article);
}

bool can_challenge(const Environment& env, const Selection& sel, AgentIndex i,
                   StateIndex claimed, StateIndex at) {
  return challengeable_with(env, sel.at(i).at(claimed), i, claimed, at);
}

Challenge select_challenge(const Environment& env, const Selection& sel, AgentIndex i,
                           StateIndex claimed, StateIndex at) {
  const ArticleIndex selected = sel.at(i).at(claimed);
  std::optional<ArticleIndex> best;
  ExtRational best_slack;
  ReversalGap best_gap;
  for (ArticleIndex a = 0; a < env.articles(i).size(); ++a) {
    auto gap = reversal_gap(env, selected, i, claimed, at, a);
    if (!gap || !(gap->at_challenge < gap->at_claim)) continue;
    ExtRational slack = difference(gap->at_claim, gap->at_challenge);
    if (!best || slack > best_slack) {
      best = a;
      best_slack = slack;
      best_gap = *gap;
    }
  }
  if (!best) {
    throw Error(ErrorCode::kPreconditionViolated,
                "agent " + std::to_string(i + 1) + " cannot challenge " +
                    env.state_label(claimed) + " at " + env.state_label(at));
  }
  const ExtRational& low = best_gap.at_challenge;
  const ExtRational& high = best_gap.at_claim;
  Rational reward;
  if (low.is_finite() && high.is_finite()) {
    reward = (low.value + high.value) / 2;
  } else if (high.is_finite()) {
    reward = high.value - 1;
  } else if (low.is_finite()) {
    reward = low.value + 1;
  } else {
    reward = 0;
  }
  Challenge c{claimed, i, at, *best, reward};
  if (!challenge_is_sound(env, sel, c)) {
    throw std::logic_error("selected challenge fails its own inequalities");
  }
  return c;
}

bool challenge_is_sound(const Environment& env, const Selection& sel, const Challenge& c) {
  const Cost& selected_at_claim = env.cost(c.agent, sel.at(c.agent).at(c.claimed), c.claimed);
  const Cost& selected_at_challenge = env.cost(c.agent, sel.at(c.agent).at(c.claimed), c.at);
  const Cost& art_at_claim = env.cost(c.agent, c.article, c.claimed);
  const Cost& art_at_challenge = env.cost(c.agent, c.article, c.at);
  if (!selected_at_claim.is_finite() || !art_at_challenge.is_finite()) return false;
  // c(E*, claimed) <= c(E, claimed) - t
  bool unprofitable_at_claim =
      !art_at_claim.is_finite() ||
      selected_at_claim.value() <= art_at_claim.value() - c.reward;
  // c(E*, at) > c(E, at) - t
  bool profitable_at_challenge =
      !selected_at_challenge.is_finite() ||
      selected_at_challenge.value() > art_at_challenge.value() - c.reward;
  return unprofitable_at_claim && profitable_at_challenge;
}

namespace {

// Runs the per-state selection search. `works(s, choice, other)` tells
// whether the per-agent choice at claimed state s handles the other state.
MonotonicityReport search_selections(
    const Environment& env, const CheapestSets& cheap, std::size_t cap,
    const std::function<bool(StateIndex, const std::vector<ArticleIndex>&, StateIndex)>& works) {
  const std::size_t agents = env.num_agents();
  MonotonicityReport report;
  Selection witness = cheap.designated;
  bool incomplete = false;
  for (StateIndex s = 0; s < env.num_states(); ++s) {
    std::vector<std::size_t> odometer(agents, 0);
    std::vector<SelectionAttempt> attempts;
    bool found = false;
    bool exhausted = false;
    std::size_t tried = 0;
    while (!found && !exhausted) {
      if (tried == cap) break;
      ++tried;
      std::vector<ArticleIndex> choice;
      for (AgentIndex i = 0; i < agents; ++i) choice.push_back(cheap.sets[i][s][odometer[i]]);
      std::optional<StateIndex> broken;
      for (StateIndex t = 0; t < env.num_states() && !broken; ++t) {
        if (env.scf(t) != env.scf(s) && !works(s, choice, t)) broken = t;
      }
      if (!broken) {
        found = true;
        for (AgentIndex i = 0; i < agents; ++i) witness[i][s] = choice[i];
      } else {
        attempts.push_back({choice, *broken});
      }
      exhausted = true;
      for (std::size_t pos = agents; pos-- > 0;) {
        if (++odometer[pos] < cheap.sets[pos][s].size()) {
          exhausted = false;
          break;
        }
        odometer[pos] = 0;
      }
    }
    report.combinations_checked += tried;
    if (found) continue;
    if (!exhausted) {
      incomplete = true;
      continue;
    }
    report.verdict = SearchVerdict::kFails;
    StateIndex first = attempts.front().violated_at;
    for (const auto& a : attempts) first = std::min(first, a.violated_at);
    report.violation = std::make_pair(s, first);
    report.attempts = std::move(attempts);
    return report;
  }
  if (incomplete) {
    report.verdict = SearchVerdict::kIncomplete;
    return report;
  }
  report.witness = std::move(witness);
  return report;
}

}  // namespace

MonotonicityReport is_evidence_monotonic_cp(const Environment& env, std::size_t cap) {
  CheapestSets cheap = cheapest_sets(env);
  return search_selections(env, cheap, cap,
                           [&](StateIndex s, const std::vector<ArticleIndex>& choice,
                               StateIndex t) {
                             for (AgentIndex i = 0; i < env.num_agents(); ++i) {
                               if (challengeable_with(env, choice[i], i, s, t)) return true;
                             }
                             return false;
                           });
}

MonotonicityReport is_evidence_monotonic_star(const Environment& env, std::size_t cap) {
  CheapestSets cheap = cheapest_sets(env);
  return search_selections(env, cheap, cap,
                           [&](StateIndex, const std::vector<ArticleIndex>& choice,
                               StateIndex t) {
                             for (AgentIndex i = 0; i < env.num_agents(); ++i) {
                               if (!cheap.is_cheapest(i, t, choice[i])) return true;
                             }
                             return false;
                           });
}

bool lemma2_check(const Environment& env, const Selection& sel, StateIndex truth,
                  StateIndex lie) {
  std::vector<AgentIndex> challengers;
  for (AgentIndex i = 0; i < env.num_agents(); ++i) {
    if (can_challenge(env, sel, i, lie, truth)) challengers.push_back(i);
  }
  if (challengers.size() != 1) {
    throw Error(ErrorCode::kPreconditionViolated,
                std::to_string(challengers.size()) + " agents can challenge " +
                    env.state_label(lie) + " at " + env.state_label(truth));
  }
  for (AgentIndex j = 0; j < env.num_agents(); ++j) {
    if (j == challengers.front()) continue;
    if (reverses(env, sel, j, truth, lie, sel[j][lie])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Challenge mechanisms.

namespace {

using ChallengeTable = std::vector<std::vector<std::vector<std::optional<Challenge>>>>;

ChallengeTable challenge_table(const Environment& env, const Selection& sel) {
  ChallengeTable table(env.num_agents());
  for (AgentIndex i = 0; i < env.num_agents(); ++i) {
    table[i].resize(env.num_states());
    for (StateIndex s = 0; s < env.num_states(); ++s) {
      for (StateIndex at = 0; at < env.num_states(); ++at) {
        if (can_challenge(env, sel, i, s, at)) {
          table[i][s].push_back(select_challenge(env, sel, i, s, at));
        } else {
          table[i][s].push_back(std::nullopt);
        }
      }
    }
  }
  return table;
}

Selection monotonic_selection(const Environment& env) {
  MonotonicityReport r = is_evidence_monotonic_cp(env);
  if (r.verdict == SearchVerdict::kHolds) return *r.witness;
  if (r.verdict == SearchVerdict::kIncomplete) {
    throw Error(ErrorCode::kSizeLimit, "selection search hit its cap");
  }
  throw Error(ErrorCode::kNotEvidenceMonotonic,
              "no selection lets " + env.state_label(r.violation->second) + " challenge " +
                  env.state_label(r.violation->first));
}

class ChallengeMechanismBase : public Mechanism {
 public:
  ChallengeMechanismBase(const Environment& env, MechanismInfo info)
      : Mechanism(env, std::move(info)),
        selection_(monotonic_selection(env)),
        table_(challenge_table(env, selection_)) {
    for (StateIndex s = 0; s < env.num_states(); ++s) scf_.push_back(env.scf(s));
  }

 protected:
  ArticleIndex designated_article(AgentIndex i, StateIndex s) const override {
    return selection_.at(i).at(s);
  }
  const std::optional<Challenge>& challenge(AgentIndex i, StateIndex claimed,
                                            StateIndex at) const {
    return table_[i][claimed][at];
  }
  // Agent i presents the selected challenge article against `claimed`.
  bool valid_challenge(AgentIndex i, StateIndex claimed, const Message& m) const {
    const auto& c = challenge(i, claimed, m.claim);
    return c && c->article == m.article;
  }

  Selection selection_;
  ChallengeTable table_;
  std::vector<OutcomeIndex> scf_;
};

class TwoAgentChallengeMechanism : public ChallengeMechanismBase {
 public:
  using ChallengeMechanismBase::ChallengeMechanismBase;

 protected:
  Evaluation evaluate_checked(std::span<const Message> m) const override {
    const StateIndex s1 = m[0].claim;
    const StateIndex s2 = m[1].claim;
    const bool second_can = challenge(1, s1, s2).has_value();
    const bool second_valid = valid_challenge(1, s1, m[1]);
    const bool first_valid = valid_challenge(0, s2, m[0]);
    const bool first_honored = !second_can && first_valid;

    std::vector<Rational> challenged(2, 0), disagreement(2, 0), reward(2, 0);
    if (second_valid) {
      challenged[0] = -1;
      reward[1] = challenge(1, s1, s2)->reward;
    } else if (first_honored) {
      reward[0] = challenge(0, s2, s1)->reward;
    }
    const bool valid[2] = {first_valid, second_valid};
    for (AgentIndex i = 0; i < 2; ++i) {
      const AgentIndex j = 1 - i;
      bool differs = m[i].claim != m[j].claim || m[i].article != selection_[i][m[j].claim];
      if (differs && !valid[i]) disagreement[i] = -1;
    }

    Evaluation out;
    out.outcome = Lottery::certain(first_honored ? scf_[s2] : scf_[s1]);
    for (AgentIndex i = 0; i < 2; ++i) {
      out.transfers.push_back(challenged[i] + disagreement[i] + reward[i]);
    }
    out.components = {{"challenged", std::move(challenged)},
                      {"disagreement", std::move(disagreement)},
                      {"challenge_reward", std::move(reward)}};
    return out;
  }
};

class MultiAgentChallengeMechanism : public ChallengeMechanismBase {
 public:
  using ChallengeMechanismBase::ChallengeMechanismBase;

 protected:
  Evaluation evaluate_checked(std::span<const Message> m) const override {
    const std::size_t n = m.size();
    const StateIndex s1 = m[0].claim;
    std::vector<AgentIndex> challengers;
    for (AgentIndex i = 1; i < n; ++i) {
      if (valid_challenge(i, s1, m[i])) challengers.push_back(i);
    }
    std::optional<StateIndex> common = m[1].claim;
    for (AgentIndex i = 2; i < n && common; ++i) {
      if (m[i].claim != *common) common.reset();
    }
    const bool first_valid = common && valid_challenge(0, *common, m[0]);
    const bool first_honored = challengers.empty() && first_valid;

    std::vector<Rational> challenged(n, 0), disagreement(n, 0), reward(n, 0);
    challenged[0] = -Rational(challengers.size());
    for (AgentIndex i : challengers) reward[i] = challenge(i, s1, m[i].claim)->reward;
    if (first_honored) reward[0] = challenge(0, *common, s1)->reward;

    if (common && !first_valid &&
        (s1 != *common || m[0].article != selection_[0][*common])) {
      disagreement[0] = -1;
    }
    for (AgentIndex i = 1; i < n; ++i) {
      bool differs = challengers.empty()
                         ? (m[i].claim != s1 || m[i].article != selection_[i][s1])
                         : m[i].claim != m[challengers.front()].claim;
      if (differs) disagreement[i] = -1;
    }

    Evaluation out;
    out.outcome = Lottery::certain(first_honored ? scf_[*common] : scf_[s1]);
    for (AgentIndex i = 0; i < n; ++i) {
      out.transfers.push_back(challenged[i] + disagreement[i] + reward[i]);
    }
    out.components = {{"challenged", std::move(challenged)},
                      {"disagreement", std::move(disagreement)},
                      {"challenge_reward", std::move(reward)}};
    return out;
  }
};

class CheapestSetMechanism : public Mechanism {
 public:
  CheapestSetMechanism(const Environment& env, EmStarParams params, MechanismInfo info)
      : Mechanism(env, std::move(info)),
        params_(std::move(params)),
        cheap_(cheapest_sets(env)),
        reward_(params_.reward()) {
    for (StateIndex s = 0; s < env.num_states(); ++s) scf_.push_back(env.scf(s));
  }

 protected:
  ArticleIndex designated_article(AgentIndex i, StateIndex s) const override {
    return cheap_.designated.at(i).at(s);
  }

  Evaluation evaluate_checked(std::span<const Message> m) const override {
    const std::size_t n = m.size();
    const Rational big_fine(2 * params_.max_cheapest * n);
    std::vector<Rational> costly(n, 0), mismatch(n, 0), set_change(n, 0), reward(n, 0);
    for (AgentIndex i = 0; i < n; ++i) {
      bool others_costly = false;
      bool set_differs = false;
      for (AgentIndex j = 0; j < n; ++j) {
        set_differs = set_differs || cheap_.sets[i][m[i].claim] != cheap_.sets[i][m[j].claim];
        if (j == i) continue;
        others_costly = others_costly || !cheap_.is_cheapest(j, m[i].claim, m[j].article);
        if (m[i].claim != m[j].claim) {
          mismatch[i] -= Rational(2 * cheap_.sets[j][m[i].claim].size());
        }
        if (!cheap_.is_cheapest(i, m[j].claim, m[i].article)) reward[i] += reward_;
      }
      if (others_costly) costly[i] = -big_fine;
      if (set_differs) set_change[i] = -1;
    }
    Evaluation out;
    out.outcome = Lottery::certain(scf_[m[0].claim]);
    for (AgentIndex i = 0; i < n; ++i) {
      out.transfers.push_back(costly[i] + mismatch[i] + set_change[i] + reward[i]);
    }
    out.components = {{"others_not_cheapest", std::move(costly)},
                      {"claim_mismatch", std::move(mismatch)},
                      {"cheapest_set_mismatch", std::move(set_change)},
                      {"non_cheapest_reward", std::move(reward)}};
    return out;
  }

 private:
  EmStarParams params_;
  CheapestSets cheap_;
  Rational reward_;
  std::vector<OutcomeIndex> scf_;
};

MechanismInfo challenge_info(std::string variant) {
  MechanismInfo info;
  info.variant = std::move(variant);
  info.charges_costs = true;
  info.requires_cheapest_evidence = true;
  return info;
}

}  // namespace

MechanismPtr synthesize_theorem4(const Environment& env) {
  if (env.num_agents() != 2) {
    throw Error(ErrorCode::kTooManyAgents, "two-agent challenge mechanism; use theorem4multi");
  }
  return std::make_unique<TwoAgentChallengeMechanism>(env, challenge_info("theorem4"));
}

MechanismPtr synthesize_theorem4_multiagent(const Environment& env) {
  return std::make_unique<MultiAgentChallengeMechanism>(env, challenge_info("theorem4multi"));
}

Rational EmStarParams::reward() const {
  Rational base = cost_gap ? std::min(*cost_gap, reward_cap) : reward_cap;
  return base / Rational(2 * num_agents);
}

EmStarParams em_star_params(const Environment& env, const Rational& reward_cap) {
  if (reward_cap <= 0) throw Error(ErrorCode::kBadEpsilon, "reward bound must be positive");
  CheapestSets cheap = cheapest_sets(env);
  EmStarParams p;
  p.reward_cap = reward_cap;
  p.num_agents = env.num_agents();
  for (AgentIndex i = 0; i < env.num_agents(); ++i) {
    for (StateIndex s = 0; s < env.num_states(); ++s) {
      p.max_cheapest = std::max(p.max_cheapest, cheap.sets[i][s].size());
      for (ArticleIndex a = 0; a < env.articles(i).size(); ++a) {
        const Cost& c = env.cost(i, a, s);
        if (!c.is_finite() || cheap.is_cheapest(i, s, a)) continue;
        Rational gap = c.value() - cheap.min_cost[i][s];
        if (!p.cost_gap || gap < *p.cost_gap) p.cost_gap = gap;
      }
    }
  }
  return p;
}

MechanismPtr synthesize_em_star(const Environment& env, const Rational& reward_cap) {
  EmStarParams p = em_star_params(env, reward_cap);
  MonotonicityReport r = is_evidence_monotonic_star(env);
  if (r.verdict != SearchVerdict::kHolds) {
    throw Error(ErrorCode::kNotEMStar,
                r.violation ? env.state_label(r.violation->first) + " vs " +
                                  env.state_label(r.violation->second)
                            : std::string("selection search hit its cap"));
  }
  MechanismInfo info;
  info.variant = "emstar:" + to_string(reward_cap);
  info.charges_costs = true;
  info.requires_cheapest_evidence = true;
  info.parameters = {{"reward_cap", to_string(p.reward_cap)},
                     {"cost_gap", p.cost_gap ? to_string(*p.cost_gap) : "inf"},
                     {"max_cheapest", std::to_string(p.max_cheapest)},
                     {"reward", to_string(p.reward())}};
  return std::make_unique<CheapestSetMechanism>(env, std::move(p), std::move(info));
}

}  // namespace evimpl
