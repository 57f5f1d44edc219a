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

#include "evimpl/renegotiation.hpp"

#include "evimpl/core_model.hpp"
#include "evimpl/error.hpp"

namespace evimpl {

bool pair_passes(PairVerdict v) {
  return v == PairVerdict::kOneAgentBothWays || v == PairVerdict::kBothOneWay;
}

bool RenegotiationReport::passes() const {
  for (const auto& p : pairs) {
    if (!pair_passes(p.verdict)) return false;
  }
  return true;
}

bool refutes(const Environment& env, AgentIndex k, StateIndex claimed, StateIndex at) {
  for (ArticleIndex a : env.endowment(k, at)) {
    if (!env.article(k, a).members->contains(claimed)) return true;
  }
  return false;
}

namespace {

void require_bilateral(const Environment& env) {
  if (env.num_agents() != 2) {
    throw Error(ErrorCode::kNotTwoAgents, "renegotiation analysis covers two agents");
  }
  require_hard(env);
}

PairReport judge(const Environment& env, StateIndex s, StateIndex t) {
  bool forward[2];   // agent refutes t at s
  bool backward[2];  // agent refutes s at t
  for (AgentIndex k = 0; k < 2; ++k) {
    forward[k] = refutes(env, k, t, s);
    backward[k] = refutes(env, k, s, t);
  }
  const int nf = forward[0] + forward[1];
  const int nb = backward[0] + backward[1];
  PairReport r;
  r.first = s;
  r.second = t;
  r.at = s;
  r.claimed = t;
  if ((forward[0] && backward[0]) || (forward[1] && backward[1])) {
    r.verdict = PairVerdict::kOneAgentBothWays;
    return r;
  }
  if (nf == 2 && nb == 0) {
    r.verdict = PairVerdict::kBothOneWay;
    return r;
  }
  if (nb == 2 && nf == 0) {
    r.verdict = PairVerdict::kBothOneWay;
    r.at = t;
    r.claimed = s;
    return r;
  }
  if (nf == 1 && nb == 1) {
    r.verdict = PairVerdict::kCrossRefutation;
    r.favors_claimed = forward[0] ? 0 : 1;
    return r;
  }
  if (nf + nb == 0) {
    r.verdict = PairVerdict::kUnseparated;
    r.favors_claimed = 0;
    return r;
  }
  // One direction has no refuter and the other exactly one. Orient so the
  // claimed state is the nonrefutable one; the agent who cannot refute the
  // reverse direction is the one who favors the claim.
  r.verdict = PairVerdict::kOneWaySingle;
  if (nf == 0) {
    r.favors_claimed = backward[0] ? 1 : 0;
  } else {
    r.at = t;
    r.claimed = s;
    r.favors_claimed = forward[0] ? 1 : 0;
  }
  return r;
}

class RenegotiationProofMechanism : public Mechanism {
 public:
  RenegotiationProofMechanism(const Environment& env, MechanismInfo info)
      : Mechanism(env, std::move(info)), tight_(tightest_table(env)) {
    for (StateIndex s = 0; s < env.num_states(); ++s) scf_.push_back(env.scf(s));
    for (AgentIndex i = 0; i < 2; ++i) {
      std::vector<StateSet> masks;
      for (const Article& art : env.articles(i)) masks.push_back(*art.members);
      masks_.push_back(std::move(masks));
      std::vector<ArticleIndex> row;
      for (StateIndex s = 0; s < env.num_states(); ++s) {
        ArticleIndex pick = env.endowment(i, s).front();
        for (ArticleIndex a : env.endowment(i, s)) {
          if (masks_[i][a] == tight_[i][s]) pick = a;
        }
        row.push_back(pick);
      }
      designated_.push_back(std::move(row));
    }
  }

 protected:
  ArticleIndex designated_article(AgentIndex i, StateIndex s) const override {
    return designated_.at(i).at(s);
  }

  Evaluation evaluate_checked(std::span<const Message> m) const override {
    std::vector<Rational> unsupported(2, 0), refuted(2, 0);
    for (AgentIndex i = 0; i < 2; ++i) {
      const AgentIndex j = 1 - i;
      if (!masks_[i][m[i].article].subset_of(tight_[i][m[i].claim])) {
        unsupported[i] -= 1;
        unsupported[j] += 1;
      }
      if (!masks_[j][m[j].article].contains(m[i].claim)) {
        refuted[i] -= 2;
        refuted[j] += 2;
      }
    }
    Evaluation out;
    out.outcome = Lottery::certain(scf_[m[0].claim]);
    for (AgentIndex i = 0; i < 2; ++i) out.transfers.push_back(unsupported[i] + refuted[i]);
    out.components = {{"unsupported_claim", std::move(unsupported)},
                      {"refuted_claim", std::move(refuted)}};
    return out;
  }

 private:
  TightTable tight_;
  std::vector<OutcomeIndex> scf_;
  std::vector<std::vector<StateSet>> masks_;
  std::vector<std::vector<ArticleIndex>> designated_;
};

}  // namespace

RenegotiationReport check_rp_conditions(const Environment& env) {
  require_bilateral(env);
  RenegotiationReport report;
  for (StateIndex s = 0; s < env.num_states(); ++s) {
    for (StateIndex t = s + 1; t < env.num_states(); ++t) {
      if (env.scf(s) != env.scf(t)) report.pairs.push_back(judge(env, s, t));
    }
  }
  return report;
}

MechanismPtr synthesize_rp_mechanism(const Environment& env, Gate gate) {
  require_bilateral(env);
  if (gate == Gate::kEnforce) {
    NormalityReport n = is_normal(env);
    if (!n.normal) {
      throw Error(ErrorCode::kNotNormal, "agent " + std::to_string(n.witness->first + 1) +
                                             " at " + env.state_label(n.witness->second));
    }
    RenegotiationReport r = check_rp_conditions(env);
    for (const auto& p : r.pairs) {
      if (!pair_passes(p.verdict)) {
        throw Error(ErrorCode::kConditionsFail, "pair " + env.state_label(p.first) + ", " +
                                                    env.state_label(p.second));
      }
    }
  }
  MechanismInfo info;
  info.variant = "rp";
  return std::make_unique<RenegotiationProofMechanism>(env, std::move(info));
}

std::vector<std::vector<Rational>> build_adversarial_profile(const Environment& env,
                                                             const PairReport& pair,
                                                             const Rational& eta) {
  if (pair_passes(pair.verdict) || !pair.favors_claimed) {
    throw Error(ErrorCode::kPreconditionViolated, "pair does not fail the conditions");
  }
  if (eta <= 0 || eta >= 1) {
    throw Error(ErrorCode::kPreconditionViolated, "eta must lie in (0,1)");
  }
  const Rational top = 1 - eta;
  const OutcomeIndex claimed = env.scf(pair.claimed);
  const OutcomeIndex at = env.scf(pair.at);
  const AgentIndex fav = *pair.favors_claimed;
  std::vector<std::vector<Rational>> v(2, std::vector<Rational>(env.num_outcomes(), top / 2));
  v[fav][claimed] = top;
  v[fav][at] = 0;
  v[1 - fav][claimed] = 0;
  v[1 - fav][at] = top;
  return v;
}

}  // namespace evimpl
