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

#include <gtest/gtest.h>

#include <json.hpp>

#include "evimpl/core_model.hpp"
#include "evimpl/corpus.hpp"
#include "evimpl/error.hpp"
#include "evimpl/io.hpp"
#include "evimpl/lies.hpp"

namespace evimpl {
namespace {

StateSet set_of(std::initializer_list<StateIndex> states) {
  StateSet out;
  for (StateIndex s : states) out = out.with(s);
  return out;
}

std::vector<Fixture> hard_fixtures() {
  std::vector<Fixture> out;
  for (auto& f : corpus()) {
    if (f.env.all_hard()) out.push_back(std::move(f));
  }
  return out;
}

TEST(RefutableLies, EnvA) {
  Environment env = env_a();
  EXPECT_EQ(refutable_lies(env, 0, 1), set_of({0}));
  EXPECT_EQ(refutable_lies(env, 0, 0), StateSet());
  EXPECT_EQ(refutable_lies(env, 1, 0), StateSet());
  EXPECT_EQ(refutable_lies(env, 1, 1), StateSet());
}

TEST(Classify, EnvAAtS2) {
  LiePartition p = classify(env_a(), 1);
  EXPECT_EQ(p.self_refutable[0], set_of({0}));
  EXPECT_EQ(p.other_refutable[0], StateSet());
  EXPECT_EQ(p.other_refutable[1], set_of({0}));
  EXPECT_EQ(p.self_refutable[1], StateSet());
  EXPECT_EQ(p.nonrefutable, StateSet());
}

TEST(Classify, EnvAAtS1) {
  LiePartition p = classify(env_a(), 0);
  EXPECT_EQ(p.nonrefutable, set_of({1}));
  for (AgentIndex i = 0; i < 2; ++i) EXPECT_EQ(p.refutable[i], StateSet());
}

TEST(Classify, SingleStateHasNoLies) {
  EnvironmentBuilder b({"only"}, 2, {"a"});
  b.endow_hard(0, 0, StateSet::full(1));
  b.endow_hard(1, 0, StateSet::full(1));
  b.set_scf(0, 0);
  LiePartition p = classify(b.build(), 0);
  EXPECT_EQ(p.nonrefutable, StateSet());
  for (AgentIndex i = 0; i < 2; ++i) {
    EXPECT_EQ(p.other_refutable[i], StateSet());
    EXPECT_EQ(p.self_refutable[i], StateSet());
  }
}

TEST(Classify, EquivalentStatesLandInNonrefutable) {
  LiePartition p = classify(env_b(), 0);
  EXPECT_EQ(p.unseparated, set_of({1}));
  EXPECT_TRUE(p.unseparated.subset_of(p.nonrefutable));
}

TEST(Classify, PartitionPropertyOnCorpus) {
  for (const Fixture& f : hard_fixtures()) {
    const Environment& env = f.env;
    for (StateIndex t = 0; t < env.num_states(); ++t) {
      LiePartition p = classify(env, t);
      for (AgentIndex i = 0; i < env.num_agents(); ++i) {
        StateSet truth = StateSet::singleton(t);
        StateSet parts[] = {truth, p.other_refutable[i], p.self_refutable[i], p.nonrefutable};
        StateSet all;
        std::size_t count = 0;
        for (StateSet part : parts) {
          all = all | part;
          count += part.size();
        }
        EXPECT_EQ(all, env.all_states()) << f.name;
        EXPECT_EQ(count, env.num_states()) << f.name << " parts overlap";
        EXPECT_TRUE(p.self_refutable[i].subset_of(p.refutable[i]));
        EXPECT_EQ(p.nonrefutable & p.refutable[i], StateSet());
      }
    }
  }
}

TEST(UnrefutedLies, EnvAExamples) {
  EXPECT_TRUE(check_observation_1(env_a(), 0, 1, 0));
  EXPECT_TRUE(check_observation_1(env_a(), 0, 1, 1));
}

TEST(UnrefutedLies, RefutableLieIsRejected) {
  try {
    check_observation_1(env_a(), 1, 0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPreconditionViolated);
  }
}

TEST(UnrefutedLies, HoldsOnEveryAdmissibleTriple) {
  std::size_t checked = 0;
  for (const Fixture& f : hard_fixtures()) {
    const Environment& env = f.env;
    for (StateIndex t = 0; t < env.num_states(); ++t) {
      for (AgentIndex i = 0; i < env.num_agents(); ++i) {
        StateSet rl = refutable_lies(env, i, t);
        for (StateIndex lie = 0; lie < env.num_states(); ++lie) {
          if (lie == t || rl.contains(lie)) continue;
          EXPECT_TRUE(check_observation_1(env, t, lie, i)) << f.name;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(RefutingWitness, EnvAWitness) {
  Environment env = env_a();
  RefutingEvidence w = check_observation_2(env, 0, 1);
  EXPECT_EQ(w.agent, 0u);
  EXPECT_EQ(env.article(0, w.article).members, set_of({1}));
}

TEST(RefutingWitness, UnseparatedLieIsRejected) {
  try {
    check_observation_2(env_b(), 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPreconditionViolated);
  }
}

TEST(RefutingWitness, WitnessForEveryNonrefutableLie) {
  std::size_t checked = 0;
  for (const Fixture& f : hard_fixtures()) {
    const Environment& env = f.env;
    for (StateIndex t = 0; t < env.num_states(); ++t) {
      LiePartition p = classify(env, t);
      for (StateIndex lie : p.nonrefutable.without(p.unseparated).members()) {
        RefutingEvidence w = check_observation_2(env, t, lie);
        EXPECT_TRUE(env.holds(w.agent, lie, w.article)) << f.name;
        EXPECT_FALSE(env.article(w.agent, w.article).members->contains(t)) << f.name;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Classify, RelabelingStatesPermutesThePartition) {
  for (const Fixture& f : hard_fixtures()) {
    auto j = nlohmann::ordered_json::parse(serialize_environment(f.env));
    auto states = j["states"];
    std::reverse(states.begin(), states.end());
    j["states"] = states;
    Environment flipped = parse_environment(j.dump());
    const std::size_t n = f.env.num_states();
    auto flip = [n](StateSet s) {
      StateSet out;
      for (StateIndex x : s.members()) out = out.with(n - 1 - x);
      return out;
    };
    for (StateIndex t = 0; t < n; ++t) {
      LiePartition a = classify(f.env, t);
      LiePartition b = classify(flipped, n - 1 - t);
      EXPECT_EQ(flip(a.nonrefutable), b.nonrefutable) << f.name;
      for (AgentIndex i = 0; i < f.env.num_agents(); ++i) {
        EXPECT_EQ(flip(a.other_refutable[i]), b.other_refutable[i]) << f.name;
        EXPECT_EQ(flip(a.self_refutable[i]), b.self_refutable[i]) << f.name;
      }
    }
  }
}

}  // namespace
}  // namespace evimpl
