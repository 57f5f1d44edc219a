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

#include "evimpl/corpus.hpp"
#include "evimpl/cost_variation.hpp"
#include "evimpl/error.hpp"

namespace evimpl {
namespace {

std::vector<ArticleIndex> articles_named(const Environment& env, AgentIndex i,
                                         std::initializer_list<const char*> labels) {
  std::vector<ArticleIndex> out;
  for (const char* l : labels) out.push_back(env.find_article(i, l).value());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Fixture> costly_fixtures() {
  std::vector<Fixture> out;
  for (auto& f : corpus()) {
    if (f.env.has_cost_table()) out.push_back(std::move(f));
  }
  return out;
}

TEST(CheapestSets, EnvC) {
  Environment env = env_c();
  CheapestSets c = cheapest_sets(env);
  EXPECT_EQ(c.sets[0][0], articles_named(env, 0, {"{s1,s2,s3,s4}"}));
  EXPECT_EQ(c.sets[0][1], articles_named(env, 0, {"{s2,s4}", "{s1,s2,s3,s4}"}));
  EXPECT_EQ(c.sets[0][3], articles_named(env, 0, {"{s2,s4}", "{s3,s4}", "{s1,s2,s3,s4}"}));
  EXPECT_FALSE(c.is_cheapest(0, 3, *env.find_article(0, "{s4}")));
  EXPECT_EQ(c.min_cost[0][3], 0);
  EXPECT_EQ(c.designated[0][3], *env.find_article(0, "{s2,s4}"));
}

TEST(Monotonicity, EnvCFailsWithEveryCandidateListed) {
  Environment env = env_c();
  MonotonicityReport r = is_evidence_monotonic_cp(env);
  ASSERT_EQ(r.verdict, SearchVerdict::kFails);
  EXPECT_EQ(r.violation, std::make_pair(StateIndex{3}, StateIndex{0}));
  // Three cheapest choices for agent 1 at s4, one for agent 2.
  EXPECT_EQ(r.attempts.size(), 3u);
  try {
    synthesize_theorem4(env);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotEvidenceMonotonic);
  }
}

TEST(Monotonicity, EnvEHoldsBothWays) {
  Environment env = env_e();
  MonotonicityReport cp = is_evidence_monotonic_cp(env);
  MonotonicityReport star = is_evidence_monotonic_star(env);
  EXPECT_EQ(cp.verdict, SearchVerdict::kHolds);
  EXPECT_EQ(star.verdict, SearchVerdict::kHolds);
  ASSERT_TRUE(star.witness);
  const ArticleIndex a = *env.find_article(0, "a");
  const ArticleIndex b = *env.find_article(0, "b");
  EXPECT_EQ((*star.witness)[0], (std::vector<ArticleIndex>{a, b}));
}

TEST(Monotonicity, CapMakesTheSearchIncomplete) {
  Environment env = env_c();
  EXPECT_EQ(is_evidence_monotonic_cp(env, 1).verdict, SearchVerdict::kIncomplete);
}

TEST(Monotonicity, StarImpliesChallengeable) {
  std::size_t star = 0;
  for (const Fixture& f : costly_fixtures()) {
    if (is_evidence_monotonic_star(f.env).verdict != SearchVerdict::kHolds) continue;
    ++star;
    EXPECT_EQ(is_evidence_monotonic_cp(f.env).verdict, SearchVerdict::kHolds) << f.name;
  }
  EXPECT_GT(star, 0u);
}

TEST(Challenges, SelectedChallengesAreSound) {
  std::size_t checked = 0;
  for (const Fixture& f : costly_fixtures()) {
    MonotonicityReport r = is_evidence_monotonic_cp(f.env);
    if (r.verdict != SearchVerdict::kHolds) continue;
    const Selection& sel = *r.witness;
    for (AgentIndex i = 0; i < f.env.num_agents(); ++i) {
      for (StateIndex s = 0; s < f.env.num_states(); ++s) {
        for (StateIndex t = 0; t < f.env.num_states(); ++t) {
          if (!can_challenge(f.env, sel, i, s, t)) continue;
          Challenge c = select_challenge(f.env, sel, i, s, t);
          EXPECT_TRUE(challenge_is_sound(f.env, sel, c)) << f.name;
          EXPECT_TRUE(reverses(f.env, sel, i, s, t, c.article)) << f.name;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Challenges, EnvEReward) {
  Environment env = env_e();
  Selection sel = *is_evidence_monotonic_cp(env).witness;
  Challenge c = select_challenge(env, sel, 1, 1, 0);
  EXPECT_EQ(c.article, *env.find_article(1, "a"));
  EXPECT_EQ(c.reward, 0);
  EXPECT_THROW(select_challenge(env, sel, 1, 0, 0), Error);
}

// Whenever a single agent can challenge a lie at the truth, no other agent
// gains by switching its designated article for the lie to the truth.
TEST(SingleChallenger, HoldsAcrossMonotonicFixtures) {
  std::size_t checked = 0;
  for (const Fixture& f : costly_fixtures()) {
    MonotonicityReport r = is_evidence_monotonic_cp(f.env);
    if (r.verdict != SearchVerdict::kHolds) continue;
    for (StateIndex truth = 0; truth < f.env.num_states(); ++truth) {
      for (StateIndex lie = 0; lie < f.env.num_states(); ++lie) {
        std::size_t challengers = 0;
        for (AgentIndex i = 0; i < f.env.num_agents(); ++i) {
          challengers += can_challenge(f.env, *r.witness, i, lie, truth) ? 1 : 0;
        }
        if (challengers != 1) {
          EXPECT_THROW(lemma2_check(f.env, *r.witness, truth, lie), Error);
          continue;
        }
        EXPECT_TRUE(lemma2_check(f.env, *r.witness, truth, lie)) << f.name;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(ChallengeMechanism, TwoAgentMechanismOnEnvE) {
  Environment env = env_e();
  auto mech = synthesize_theorem4(env);
  EXPECT_TRUE(mech->info().requires_cheapest_evidence);
  for (StateIndex s = 0; s < 2; ++s) {
    Evaluation e = mech->evaluate(mech->truthful_profile(s));
    EXPECT_TRUE(e.outcome.is_certain(s));
    EXPECT_EQ(e.transfers, (std::vector<Rational>{0, 0}));
  }
  const ArticleIndex a = *env.find_article(0, "a");
  const ArticleIndex b = *env.find_article(0, "b");
  // Agent 1 claims s2; agent 2 answers with a valid challenge at s1.
  std::vector<Message> m{{1, b, {}}, {0, a, {}}};
  Evaluation e = mech->evaluate(m);
  EXPECT_EQ(e.components[0].values, (std::vector<Rational>{-1, 0}));
  EXPECT_EQ(e.transfers, (std::vector<Rational>{-1, 0}));
  EXPECT_TRUE(e.outcome.is_certain(1));
}

TEST(ChallengeMechanism, AgentCountGate) {
  try {
    synthesize_theorem4(env_3agents());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManyAgents);
  }
}

TEST(ChallengeMechanism, ZeroOnTruthAcrossCorpus) {
  for (const Fixture& f : costly_fixtures()) {
    if (is_evidence_monotonic_cp(f.env).verdict != SearchVerdict::kHolds) continue;
    auto two = f.env.num_agents() == 2 ? synthesize_theorem4(f.env) : nullptr;
    auto multi = synthesize_theorem4_multiagent(f.env);
    for (StateIndex s = 0; s < f.env.num_states(); ++s) {
      for (const Mechanism* mech : {two.get(), multi.get()}) {
        if (!mech) continue;
        Evaluation e = mech->evaluate(mech->truthful_profile(s));
        EXPECT_TRUE(e.outcome.is_certain(f.env.scf(s))) << f.name;
        for (const Rational& t : e.transfers) EXPECT_EQ(t, 0) << f.name;
      }
    }
  }
}

TEST(EmStar, ParamsAndRewardOnEnvE) {
  Environment env = env_e();
  EmStarParams p = em_star_params(env, 1);
  EXPECT_EQ(p.cost_gap, Rational(1, 2));
  EXPECT_EQ(p.max_cheapest, 1u);
  EXPECT_EQ(p.reward(), Rational(1, 8));
  EXPECT_EQ(em_star_params(env, Rational(1, 10)).reward(), Rational(1, 40));
  auto mech = synthesize_em_star(env, 1);
  EXPECT_EQ(mech->info().variant, "emstar:1/1");
  for (StateIndex s = 0; s < 2; ++s) {
    Evaluation e = mech->evaluate(mech->truthful_profile(s));
    EXPECT_EQ(e.transfers, (std::vector<Rational>{0, 0}));
  }
}

TEST(EmStar, RewardsNonCheapestEvidenceOfOthers) {
  Environment env = env_e();
  auto mech = synthesize_em_star(env, 1);
  const ArticleIndex a = *env.find_article(0, "a");
  // Truth s1, both claim s1, agent 2 presents the article that is cheap at s2.
  std::vector<Message> m{{0, a, {}}, {0, *env.find_article(1, "b"), {}}};
  Evaluation e = mech->evaluate(m);
  EXPECT_EQ(e.components[0].values, (std::vector<Rational>{-4, 0}));
  EXPECT_EQ(e.components[3].values, (std::vector<Rational>{0, Rational(1, 8)}));
}

TEST(EmStar, RefusedWhenCheapestSetsCoincide) {
  try {
    synthesize_em_star(env_c(), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotEMStar);
  }
}

}  // namespace
}  // namespace evimpl
