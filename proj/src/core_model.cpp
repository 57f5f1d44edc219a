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

#include "evimpl/core_model.hpp"

#include "evimpl/error.hpp"

namespace evimpl {

ValidationReport validate_structure(const Environment& env) {
  ValidationReport report;
  for (AgentIndex i = 0; i < env.num_agents(); ++i) {
    for (StateIndex s = 0; s < env.num_states(); ++s) {
      if (env.endowment(i, s).empty()) report.empty_endowments.emplace_back(i, s);
      for (ArticleIndex a : env.endowment(i, s)) {
        const Article& art = env.article(i, a);
        if (art.is_hard() && !art.members->contains(s)) {
          report.truth.push_back({i, s, a});
        }
      }
    }
    for (ArticleIndex a = 0; a < env.articles(i).size(); ++a) {
      const Article& art = env.article(i, a);
      if (!art.is_hard()) continue;
      bool held_somewhere = false;
      for (StateIndex s = 0; s < env.num_states(); ++s) {
        held_somewhere = held_somewhere || env.holds(i, s, a);
      }
      if (!held_somewhere) continue;
      for (StateIndex s : art.members->members()) {
        if (!env.holds(i, s, a)) report.availability.push_back({i, a, s});
      }
    }
  }
  return report;
}

void require_hard(const Environment& env) {
  if (!env.all_hard()) {
    throw Error(ErrorCode::kNotHardEvidence,
                "operation needs subset-valued (hard) articles only");
  }
}

StateSet tightest_evidence(const Environment& env, AgentIndex i, StateIndex s) {
  const auto& held = env.endowment(i, s);
  if (held.empty()) {
    throw Error(ErrorCode::kEmptyEndowment,
                "agent " + std::to_string(i + 1) + " holds nothing at " +
                    env.state_label(s));
  }
  StateSet out = env.all_states();
  for (ArticleIndex a : held) {
    const Article& art = env.article(i, a);
    if (!art.is_hard()) {
      throw Error(ErrorCode::kNotHardEvidence, "opaque article " + art.label);
    }
    out = out & *art.members;
  }
  return out;
}

TightTable tightest_table(const Environment& env) {
  TightTable table(env.num_agents());
  for (AgentIndex i = 0; i < env.num_agents(); ++i) {
    for (StateIndex s = 0; s < env.num_states(); ++s) {
      table[i].push_back(tightest_evidence(env, i, s));
    }
  }
  return table;
}

NormalityReport is_normal(const Environment& env) {
  for (AgentIndex i = 0; i < env.num_agents(); ++i) {
    for (StateIndex s = 0; s < env.num_states(); ++s) {
      StateSet tight = tightest_evidence(env, i, s);
      bool present = false;
      for (ArticleIndex a : env.endowment(i, s)) {
        present = present || *env.article(i, a).members == tight;
      }
      if (!present) return {false, std::make_pair(i, s)};
    }
  }
  return {};
}

bool equivalent(const Environment& env, StateIndex s, StateIndex t) {
  for (AgentIndex i = 0; i < env.num_agents(); ++i) {
    if (env.endowment(i, s) != env.endowment(i, t)) return false;
  }
  return true;
}

std::vector<StateSet> equivalent_states(const Environment& env) {
  std::vector<StateSet> classes;
  StateSet assigned;
  for (StateIndex s = 0; s < env.num_states(); ++s) {
    if (assigned.contains(s)) continue;
    StateSet cls = StateSet::singleton(s);
    for (StateIndex t = s + 1; t < env.num_states(); ++t) {
      if (!assigned.contains(t) && equivalent(env, s, t)) cls = cls.with(t);
    }
    assigned = assigned | cls;
    classes.push_back(cls);
  }
  return classes;
}

MeasurabilityReport is_measurable(const Environment& env) {
  for (StateIndex s = 0; s < env.num_states(); ++s) {
    for (StateIndex t = s + 1; t < env.num_states(); ++t) {
      if (env.scf(s) != env.scf(t) && equivalent(env, s, t)) {
        return {false, std::make_pair(s, t)};
      }
    }
  }
  return {};
}

}  // namespace evimpl
