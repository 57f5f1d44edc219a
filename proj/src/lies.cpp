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

#include "evimpl/lies.hpp"

#include <algorithm>

#include "evimpl/core_model.hpp"
#include "evimpl/error.hpp"

namespace evimpl {

StateSet refutable_lies(const Environment& env, AgentIndex i, StateIndex truth) {
  require_hard(env);
  StateSet out;
  for (ArticleIndex a : env.endowment(i, truth)) {
    out = out | env.all_states().without(*env.article(i, a).members);
  }
  return out.without(StateSet::singleton(truth));
}

LiePartition classify(const Environment& env, StateIndex truth) {
  require_hard(env);
  const std::size_t agents = env.num_agents();
  LiePartition p;
  p.truth = truth;
  StateSet any_refutable;
  for (AgentIndex i = 0; i < agents; ++i) {
    p.refutable.push_back(refutable_lies(env, i, truth));
    any_refutable = any_refutable | p.refutable.back();
  }
  for (AgentIndex i = 0; i < agents; ++i) {
    StateSet others;
    for (AgentIndex j = 0; j < agents; ++j) {
      if (j != i) others = others | p.refutable[j];
    }
    p.other_refutable.push_back(others);
    p.self_refutable.push_back(p.refutable[i].without(others));
  }
  p.nonrefutable = env.all_states().without(any_refutable).without(
      StateSet::singleton(truth));
  for (StateIndex s : p.nonrefutable.members()) {
    if (equivalent(env, s, truth)) p.unseparated = p.unseparated.with(s);
  }
  return p;
}

bool check_observation_1(const Environment& env, StateIndex truth,
                         StateIndex lie, AgentIndex i) {
  if (lie == truth || refutable_lies(env, i, truth).contains(lie)) {
    throw Error(ErrorCode::kPreconditionViolated,
                env.state_label(lie) + " is not an unrefutable lie for agent " +
                    std::to_string(i + 1));
  }
  const auto& at_truth = env.endowment(i, truth);
  const auto& at_lie = env.endowment(i, lie);
  return std::includes(at_lie.begin(), at_lie.end(), at_truth.begin(), at_truth.end());
}

RefutingEvidence check_observation_2(const Environment& env, StateIndex truth,
                                     StateIndex lie) {
  LiePartition p = classify(env, truth);
  if (!p.nonrefutable.contains(lie) || p.unseparated.contains(lie)) {
    throw Error(ErrorCode::kPreconditionViolated,
                env.state_label(lie) + " is not a separated nonrefutable lie at " +
                    env.state_label(truth));
  }
  for (AgentIndex j = 0; j < env.num_agents(); ++j) {
    for (ArticleIndex a : env.endowment(j, lie)) {
      if (!env.article(j, a).members->contains(truth)) return {j, a};
    }
  }
  throw Error(ErrorCode::kWitnessMissing,
              "no article at " + env.state_label(lie) + " excludes " +
                  env.state_label(truth));
}

}  // namespace evimpl
