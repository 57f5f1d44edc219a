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

#include "evimpl/mech_costly.hpp"

#include <algorithm>

#include "evimpl/error.hpp"

namespace evimpl {

RobustParams solve_robust_params(const Rational& cost_bound, std::size_t num_states,
                                 std::size_t num_agents, const Rational& epsilon) {
  if (epsilon <= 0 || epsilon >= 1) {
    throw Error(ErrorCode::kBadEpsilon, "epsilon must lie in (0,1), got " + to_string(epsilon));
  }
  if (cost_bound <= 0) throw Error(ErrorCode::kPreconditionViolated, "cost bound must be positive");
  if (num_states < 1 || num_agents < 2) {
    throw Error(ErrorCode::kPreconditionViolated, "need at least one state and two agents");
  }
  RobustParams p;
  p.epsilon = epsilon;
  p.cost_bound = cost_bound;
  p.num_states = num_states;
  p.num_agents = num_agents;
  const Rational scaled = cost_bound * Rational(num_states);
  const Rational others(num_agents - 1);
  p.evidence_size = scaled / (1 - epsilon) + epsilon;
  p.disagreement = 1;
  p.unsupported = 1 + others * p.disagreement;
  p.refutation = std::max(Rational(1 + p.unsupported + others * p.disagreement + p.evidence_size),
                          Rational(scaled / epsilon + 1));
  if (!check_robust_params(p).all()) {
    throw std::logic_error("robust parameter recipe violated its own inequalities");
  }
  return p;
}

RobustInequalities check_robust_params(const RobustParams& p) {
  const Rational scaled = p.cost_bound * Rational(p.num_states);
  const Rational others(p.num_agents - 1);
  return {p.refutation > scaled / p.epsilon,
          p.refutation >= 1 + p.unsupported + others * p.disagreement + p.evidence_size,
          p.unsupported >= 1 + others * p.disagreement,
          p.disagreement >= 1,
          p.evidence_size > scaled / (1 - p.epsilon)};
}

MechanismPtr synthesize_theorem3(const Environment& env, const Rational& epsilon) {
  if (!env.cost_bound()) {
    throw Error(ErrorCode::kMissingCostBound, "environment has no cost_bound");
  }
  const Rational& bound = *env.cost_bound();
  for (AgentIndex i = 0; i < env.num_agents(); ++i) {
    for (ArticleIndex a = 0; a < env.articles(i).size(); ++a) {
      for (StateIndex s = 0; s < env.num_states(); ++s) {
        const Cost& c = env.cost(i, a, s);
        if (c.is_finite() && c.value() >= bound) {
          throw Error(ErrorCode::kCostExceedsBound,
                      "agent " + std::to_string(i + 1) + " article " +
                          env.article(i, a).label + " at " + env.state_label(s));
        }
      }
    }
  }
  require_direct_preconditions(env);
  RobustParams p = solve_robust_params(bound, env.num_states(), env.num_agents(), epsilon);
  MechanismInfo info;
  info.variant = "theorem3";
  info.charges_costs = true;
  info.parameters = {{"epsilon", to_string(p.epsilon)},
                     {"cost_bound", to_string(p.cost_bound)},
                     {"refutation", to_string(p.refutation)},
                     {"unsupported_claim", to_string(p.unsupported)},
                     {"disagreement", to_string(p.disagreement)},
                     {"evidence_size", to_string(p.evidence_size)}};
  Penalties pen{p.refutation, p.unsupported, p.disagreement, p.evidence_size};
  return std::make_unique<DirectEvidenceMechanism>(env, std::move(pen), false, std::move(info));
}

}  // namespace evimpl
