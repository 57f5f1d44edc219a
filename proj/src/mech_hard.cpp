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

#include "evimpl/mech_hard.hpp"

#include <algorithm>

#include "evimpl/error.hpp"

namespace evimpl {

Penalties standard_penalties(std::size_t agents) {
  return {Rational(2 * agents + 1), Rational(agents), Rational(1), Rational(1)};
}

void require_direct_preconditions(const Environment& env) {
  require_hard(env);
  ValidationReport v = validate_structure(env);
  if (!v.axioms_hold()) {
    throw Error(ErrorCode::kPreconditionViolated, "evidence axioms fail");
  }
  NormalityReport n = is_normal(env);
  if (!n.normal) {
    throw Error(ErrorCode::kNotNormal,
                "agent " + std::to_string(n.witness->first + 1) + " at " +
                    env.state_label(n.witness->second));
  }
  MeasurabilityReport m = is_measurable(env);
  if (!m.measurable) {
    throw Error(ErrorCode::kNotMeasurable,
                env.state_label(m.violation->first) + " ~ " +
                    env.state_label(m.violation->second) + " but outcomes differ");
  }
}

DirectEvidenceMechanism::DirectEvidenceMechanism(const Environment& env,
                                                 Penalties penalties, bool balanced,
                                                 MechanismInfo info)
    : Mechanism(env, std::move(info)),
      penalties_(std::move(penalties)),
      balanced_(balanced),
      num_states_(env.num_states()),
      tight_(tightest_table(env)) {
  for (StateIndex s = 0; s < env.num_states(); ++s) scf_.push_back(env.scf(s));
  for (AgentIndex i = 0; i < env.num_agents(); ++i) {
    std::vector<StateSet> masks;
    for (const Article& art : env.articles(i)) masks.push_back(*art.members);
    masks_.push_back(std::move(masks));
    std::vector<std::optional<ArticleIndex>> designated;
    for (StateIndex s = 0; s < env.num_states(); ++s) {
      std::optional<ArticleIndex> pick;
      for (ArticleIndex a : env.endowment(i, s)) {
        if (masks_[i][a] == tight_[i][s]) pick = a;
      }
      if (!pick && !env.endowment(i, s).empty()) pick = env.endowment(i, s).front();
      designated.push_back(pick);
    }
    tight_article_.push_back(std::move(designated));
  }
}

ArticleIndex DirectEvidenceMechanism::designated_article(AgentIndex i, StateIndex s) const {
  return tight_article_.at(i).at(s).value();
}

Evaluation DirectEvidenceMechanism::evaluate_checked(std::span<const Message> profile) const {
  return evaluate_direct(profile);
}

Evaluation DirectEvidenceMechanism::evaluate_direct(std::span<const Message> m) const {
  const std::size_t n = m.size();
  const Penalties& p = penalties_;
  std::vector<Rational> refutation(n, 0), unsupported(n, 0), disagreement(n, 0), size(n, 0);

  auto evidence = [&](AgentIndex i) { return masks_[i][m[i].article]; };
  // supports[j][k]: agent j's article fits inside its tightest set at k's claim.
  std::vector<std::vector<bool>> supports(n, std::vector<bool>(n));
  bool any_unsupported = false;
  for (AgentIndex j = 0; j < n; ++j) {
    for (AgentIndex k = 0; k < n; ++k) {
      supports[j][k] = evidence(j).subset_of(tight_[j][m[k].claim]);
      any_unsupported = any_unsupported || !supports[j][k];
    }
  }

  for (AgentIndex i = 0; i < n; ++i) {
    for (AgentIndex j = 0; j < n; ++j) {
      if (j == i) continue;
      bool i_refuted = !evidence(j).contains(m[i].claim);
      bool j_refuted = !evidence(i).contains(m[j].claim);
      if (!i_refuted && j_refuted) refutation[i] += p.refutation;
      if (i_refuted && !j_refuted) refutation[i] -= p.refutation;
    }
  }

  for (AgentIndex i = 0; i < n; ++i) {
    bool unsupported_claim = false;
    for (AgentIndex j = 0; j < n; ++j) unsupported_claim = unsupported_claim || !supports[j][i];
    if (!unsupported_claim) continue;
    unsupported[i] -= p.unsupported_claim;
    if (!balanced_) continue;
    std::vector<AgentIndex> recipients;
    for (AgentIndex j = 0; j < n; ++j) {
      if (j != i && supports[j][i]) recipients.push_back(j);
    }
    if (recipients.empty()) {
      for (AgentIndex j = 0; j < n; ++j) {
        if (j != i) recipients.push_back(j);
      }
    }
    Rational share = p.unsupported_claim / Rational(recipients.size());
    for (AgentIndex j : recipients) unsupported[j] += share;
  }

  for (AgentIndex i = 0; i < n; ++i) {
    for (AgentIndex j = 0; j < n; ++j) {
      if (j == i || tight_[i][m[i].claim] == tight_[i][m[j].claim]) continue;
      disagreement[i] -= p.disagreement;
      if (!balanced_) continue;
      Rational share = p.disagreement / Rational(n - 1);
      for (AgentIndex k = 0; k < n; ++k) {
        if (k != i) disagreement[k] += share;
      }
    }
  }

  if (any_unsupported) {
    Rational collected = 0;
    for (AgentIndex i = 0; i < n; ++i) {
      Rational fine = p.evidence_size * Rational(evidence(i).size()) / Rational(num_states_);
      size[i] -= fine;
      collected += fine;
    }
    if (balanced_) {
      std::vector<AgentIndex> claimants;
      for (AgentIndex k = 0; k < n; ++k) {
        bool unsupported_k = false;
        for (AgentIndex j = 0; j < n; ++j) unsupported_k = unsupported_k || !supports[j][k];
        if (unsupported_k) claimants.push_back(k);
      }
      Rational share = collected / Rational(claimants.size());
      for (AgentIndex k : claimants) size[k] += share;
    }
  }

  Evaluation out;
  out.outcome = Lottery::certain(scf_[m[0].claim]);
  for (AgentIndex i = 0; i < n; ++i) {
    out.transfers.push_back(refutation[i] + unsupported[i] + disagreement[i] + size[i]);
  }
  out.components = {{"refutation", std::move(refutation)},
                    {"unsupported_claim", std::move(unsupported)},
                    {"disagreement", std::move(disagreement)},
                    {"evidence_size", std::move(size)}};
  return out;
}

namespace {

std::vector<std::pair<std::string, std::string>> penalty_parameters(const Penalties& p) {
  return {{"refutation", to_string(p.refutation)},
          {"unsupported_claim", to_string(p.unsupported_claim)},
          {"disagreement", to_string(p.disagreement)},
          {"evidence_size", to_string(p.evidence_size)}};
}

}  // namespace

MechanismPtr synthesize_theorem1(const Environment& env, Gate gate) {
  if (gate == Gate::kEnforce) {
    require_direct_preconditions(env);
  } else {
    require_hard(env);
  }
  MechanismInfo info;
  info.variant = "theorem1";
  info.parameters = penalty_parameters(standard_penalties(env.num_agents()));
  return std::make_unique<DirectEvidenceMechanism>(env, standard_penalties(env.num_agents()),
                                                   false, std::move(info));
}

MechanismPtr synthesize_budget_balanced(const Environment& env) {
  if (env.num_agents() < 3) {
    throw Error(ErrorCode::kTooFewAgents, "budget balance needs at least 3 agents");
  }
  require_direct_preconditions(env);
  MechanismInfo info;
  info.variant = "balanced";
  info.parameters = penalty_parameters(standard_penalties(env.num_agents()));
  return std::make_unique<DirectEvidenceMechanism>(env, standard_penalties(env.num_agents()),
                                                   true, std::move(info));
}

// ---------------------------------------------------------------------------
// K-round augmentation with small transfers.

namespace {

Rational direct_bound(const Penalties& p, std::size_t agents) {
  Rational others(agents - 1);
  return others * p.refutation + p.unsupported_claim + others * p.disagreement +
         p.evidence_size;
}

class KRoundMechanism : public Mechanism {
 public:
  KRoundMechanism(const Environment& env, SmallTransferParams params, MechanismInfo info)
      : Mechanism(env, std::move(info)),
        params_(std::move(params)),
        direct_(env, standard_penalties(env.num_agents()), false, MechanismInfo{}),
        filler_(Lottery::uniform(env.num_outcomes())) {
    for (StateIndex s = 0; s < env.num_states(); ++s) scf_.push_back(env.scf(s));
    auto classes = equivalent_states(env);
    class_of_.resize(env.num_states());
    for (std::size_t c = 0; c < classes.size(); ++c) {
      for (StateIndex s : classes[c].members()) class_of_[s] = c;
    }
    for (AgentIndex i = 0; i < env.num_agents(); ++i) {
      std::vector<ArticleIndex> row;
      for (StateIndex s = 0; s < env.num_states(); ++s) {
        row.push_back(direct_.truthful_profile(s)[i].article);
      }
      designated_.push_back(std::move(row));
    }
  }

 protected:
  ArticleIndex designated_article(AgentIndex i, StateIndex s) const override {
    return designated_.at(i).at(s);
  }

  Evaluation evaluate_checked(std::span<const Message> m) const override {
    const std::size_t n = m.size();
    const std::size_t K = params_.rounds;
    Evaluation direct = direct_.evaluate_direct(m);

    // rounds[r] holds the claim of round r + 1; round 1 is rounds[0].
    auto claim = [&](AgentIndex i, std::size_t round) { return m[i].rounds[round - 1]; };

    Evaluation out;
    out.outcome.add(direct.outcome, params_.epsilon);
    const Rational round_weight = (1 - params_.epsilon) / Rational(K);
    for (std::size_t k = 2; k <= K + 1; ++k) {
      std::optional<StateIndex> majority;
      for (AgentIndex i = 0; i < n && !majority; ++i) {
        std::size_t votes = 0;
        for (AgentIndex j = 0; j < n; ++j) votes += claim(j, k) == claim(i, k) ? 1 : 0;
        if (votes + 1 >= n) majority = claim(i, k);
      }
      if (majority) {
        out.outcome.add(scf_[*majority], round_weight);
      } else {
        out.outcome.add(filler_, round_weight);
      }
    }

    std::vector<Rational> consistency(n, 0), first_deviation(n, 0), lone(n, 0);
    for (AgentIndex i = 0; i < n; ++i) {
      if (class_of_[claim(i, 1)] != class_of_[m[(i + 1) % n].claim]) {
        consistency[i] -= params_.alpha;
      }
    }

    bool unanimous = true;
    for (AgentIndex j = 1; j < n; ++j) unanimous = unanimous && claim(j, 1) == claim(0, 1);
    if (unanimous) {
      const StateIndex agreed = claim(0, 1);
      bool found = false;
      for (std::size_t k = 2; k <= K + 1 && !found; ++k) {
        for (AgentIndex i = 0; i < n && !found; ++i) {
          if (claim(i, k) != agreed) {
            first_deviation[i] -= params_.beta;
            found = true;
          }
        }
      }
    }

    for (std::size_t k = 2; k <= K + 1; ++k) {
      for (AgentIndex i = 0; i < n; ++i) {
        const AgentIndex other = i == 0 ? 1 : 0;
        const StateIndex rest = claim(other, k);
        if (claim(i, k) == rest) continue;
        bool rest_agree = true;
        for (AgentIndex j = 0; j < n; ++j) {
          if (j != i) rest_agree = rest_agree && claim(j, k) == rest;
        }
        if (rest_agree) lone[i] -= params_.gamma;
      }
    }

    for (AgentIndex i = 0; i < n; ++i) {
      out.transfers.push_back(params_.epsilon * direct.transfers[i] + consistency[i] +
                              first_deviation[i] + lone[i]);
    }
    for (auto& c : direct.components) {
      for (auto& v : c.values) v *= params_.epsilon;
      out.components.push_back(std::move(c));
    }
    out.components.push_back({"consistency", std::move(consistency)});
    out.components.push_back({"first_deviation", std::move(first_deviation)});
    out.components.push_back({"lone_deviation", std::move(lone)});
    return out;
  }

 private:
  SmallTransferParams params_;
  DirectEvidenceMechanism direct_;
  Lottery filler_;
  std::vector<OutcomeIndex> scf_;
  std::vector<std::size_t> class_of_;
  std::vector<std::vector<ArticleIndex>> designated_;
};

}  // namespace

bool small_transfer_params_valid(const SmallTransferParams& p) {
  if (p.rounds == 0) return false;
  const Rational K(p.rounds);
  return p.gamma > 0 && p.beta > 1 / K + p.gamma && p.alpha > p.beta &&
         p.alpha + p.beta + K * p.gamma < p.delta_bar && p.epsilon > 0 && p.epsilon < 1 &&
         p.transfer_bound() < p.delta_bar;
}

SmallTransferParams solve_small_transfer_params(const Rational& delta_bar, std::size_t agents,
                                                const SmallTransferOptions& options) {
  if (delta_bar <= 0) throw Error(ErrorCode::kInfeasibleBound, "delta_bar must be positive");
  if (agents < 3) throw Error(ErrorCode::kTooFewAgents, "K-round mechanism needs 3 agents");
  SmallTransferParams p;
  p.delta_bar = delta_bar;
  p.delta = delta_bar / 2;
  p.direct_bound = direct_bound(standard_penalties(agents), agents);
  std::size_t first = options.fixed_rounds.value_or(1);
  std::size_t last = options.fixed_rounds.value_or(options.max_rounds);
  for (std::size_t k = first; k <= last; ++k) {
    const Rational K(k);
    p.rounds = k;
    p.gamma = p.delta / (3 * K);
    p.beta = 1 / K + delta_bar / (3 * K);
    p.alpha = p.delta / 3;
    if (!(p.gamma > 0 && p.beta > 1 / K + p.gamma && p.alpha > p.beta &&
          p.alpha + p.beta + K * p.gamma < delta_bar)) {
      continue;
    }
    Rational slack = delta_bar - (p.alpha + p.beta + K * p.gamma);
    p.epsilon = std::min(Rational(1, 2), Rational(slack / (2 * p.direct_bound)));
    return p;
  }
  throw Error(ErrorCode::kInfeasibleBound,
              "no round count in [" + std::to_string(first) + ", " + std::to_string(last) +
                  "] meets the parameter inequalities for bound " + to_string(delta_bar));
}

MechanismPtr synthesize_small_transfers(const Environment& env, const Rational& delta_bar,
                                        const SmallTransferOptions& options) {
  if (env.num_agents() < 3) {
    throw Error(ErrorCode::kTooFewAgents, "K-round mechanism needs at least 3 agents");
  }
  require_direct_preconditions(env);
  SmallTransferParams p = solve_small_transfer_params(delta_bar, env.num_agents(), options);
  MechanismInfo info;
  info.variant = "small:" + to_string(delta_bar);
  info.extra_rounds = p.rounds + 1;
  info.parameters = {{"rounds", std::to_string(p.rounds)},
                     {"epsilon", to_string(p.epsilon)},
                     {"alpha", to_string(p.alpha)},
                     {"beta", to_string(p.beta)},
                     {"gamma", to_string(p.gamma)},
                     {"delta", to_string(p.delta)},
                     {"delta_bar", to_string(p.delta_bar)},
                     {"transfer_bound", to_string(p.transfer_bound())}};
  return std::make_unique<KRoundMechanism>(env, std::move(p), std::move(info));
}

}  // namespace evimpl
