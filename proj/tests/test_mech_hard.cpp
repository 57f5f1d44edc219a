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

#include "evimpl/core_model.hpp"
#include "evimpl/corpus.hpp"
#include "evimpl/error.hpp"
#include "evimpl/mech_hard.hpp"

namespace evimpl {
namespace {

StateSet set_of(std::initializer_list<StateIndex> states) {
  StateSet out;
  for (StateIndex s : states) out = out.with(s);
  return out;
}

ArticleIndex art(const Environment& env, AgentIndex i, StateSet members) {
  return env.find_article(i, env.set_label(members)).value();
}

const std::vector<Rational>& component(const Evaluation& e, const std::string& name) {
  for (const auto& c : e.components) {
    if (c.name == name) return c.values;
  }
  throw std::out_of_range(name);
}

std::vector<Rational> q(std::initializer_list<Rational> values) { return values; }

std::vector<Fixture> direct_fixtures() {
  std::vector<Fixture> out;
  for (auto& f : corpus()) {
    if (!f.env.all_hard() || !is_normal(f.env).normal || !is_measurable(f.env).measurable) {
      continue;
    }
    out.push_back(std::move(f));
  }
  return out;
}

TEST(Penalties, StandardMagnitudes) {
  Penalties p = standard_penalties(2);
  EXPECT_EQ(p.refutation, 5);
  EXPECT_EQ(p.unsupported_claim, 2);
  EXPECT_EQ(p.disagreement, 1);
  EXPECT_EQ(p.evidence_size, 1);
}

TEST(DirectMechanism, TruthfulTightProfileOnEnvA) {
  Environment env = env_a();
  auto mech = synthesize_theorem1(env);
  std::vector<Message> m{{1, art(env, 0, set_of({1}))}, {1, art(env, 1, StateSet::full(2))}};
  Evaluation e = mech->evaluate(m);
  EXPECT_TRUE(e.outcome.is_certain(1));
  EXPECT_EQ(e.transfers, q({0, 0}));
  EXPECT_EQ(mech->truthful_profile(1), m);
}

TEST(DirectMechanism, RefuterEarnsTwoIPlusOne) {
  Environment env = env_a();
  auto mech = synthesize_theorem1(env);
  // Agent 1 proves s2 while agent 2 claims s1.
  std::vector<Message> m{{1, art(env, 0, set_of({1}))}, {0, art(env, 1, StateSet::full(2))}};
  Evaluation e = mech->evaluate(m);
  EXPECT_EQ(component(e, "refutation"), q({5, -5}));
  EXPECT_TRUE(e.outcome.is_certain(1));
}

TEST(DirectMechanism, ArticleOutsideTheUniverseIsOutOfDomain) {
  Environment env = env_a();
  auto mech = synthesize_theorem1(env);
  // Agent 2 has a single article, so index 1 names nothing.
  std::vector<Message> m{{0, art(env, 0, StateSet::full(2))}, {1, 1}};
  try {
    mech->evaluate(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMessageOutOfDomain);
  }
  std::vector<Message> short_profile{{0, 0}};
  EXPECT_THROW(mech->evaluate(short_profile), Error);
}

TEST(DirectMechanism, UnsupportedClaimTriggersEvidenceSizeFine) {
  Environment env = env_a();
  auto mech = synthesize_theorem1(env);
  std::vector<Message> m{{1, art(env, 0, StateSet::full(2))}, {1, art(env, 1, StateSet::full(2))}};
  Evaluation e = mech->evaluate(m);
  EXPECT_EQ(component(e, "evidence_size"), q({-1, -1}));
  EXPECT_EQ(component(e, "unsupported_claim"), q({-2, -2}));
}

TEST(DirectMechanism, RefusesNonMeasurableAndNonNormal) {
  try {
    synthesize_theorem1(env_b());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotMeasurable);
  }
  EXPECT_NO_THROW(synthesize_theorem1(env_b(), Gate::kSkip));
  EXPECT_THROW(synthesize_theorem1(env_e()), Error);
}

TEST(DirectMechanism, ZeroOnTruthAcrossCorpus) {
  for (const Fixture& f : direct_fixtures()) {
    auto mech = synthesize_theorem1(f.env);
    for (StateIndex s = 0; s < f.env.num_states(); ++s) {
      Evaluation e = mech->evaluate(mech->truthful_profile(s));
      EXPECT_TRUE(e.outcome.is_certain(f.env.scf(s))) << f.name;
      for (const Rational& t : e.transfers) EXPECT_EQ(t, 0) << f.name;
    }
  }
}

TEST(DirectMechanism, RefutationTransfersAreAntisymmetric) {
  for (const Fixture& f : direct_fixtures()) {
    auto mech = synthesize_theorem1(f.env);
    for_each_profile(*mech, [&](std::span<const Message> m) {
      Evaluation e = mech->evaluate(m);
      Rational total = 0;
      for (const Rational& x : component(e, "refutation")) total += x;
      ASSERT_EQ(total, 0) << f.name;
    });
  }
}

// Presenting a subset of one's article, same claim, never lowers one's own
// transfer.
TEST(DirectMechanism, PresentingMoreNeverHurts) {
  std::size_t checked = 0;
  for (const Fixture& f : direct_fixtures()) {
    const Environment& env = f.env;
    auto mech = synthesize_theorem1(env);
    for_each_profile(*mech, [&](std::span<const Message> m) {
      Evaluation base = mech->evaluate(m);
      std::vector<Message> alt(m.begin(), m.end());
      for (AgentIndex i = 0; i < m.size(); ++i) {
        const StateSet current = *env.article(i, m[i].article).members;
        for (ArticleIndex a = 0; a < env.articles(i).size(); ++a) {
          if (a == m[i].article || !env.article(i, a).members->subset_of(current)) continue;
          alt[i].article = a;
          ASSERT_GE(mech->evaluate(alt).transfers[i], base.transfers[i]) << f.name;
          ++checked;
        }
        alt[i] = m[i];
      }
    });
  }
  EXPECT_GT(checked, 0u);
}

TEST(BudgetBalanced, NeedsThreeAgents) {
  try {
    synthesize_budget_balanced(env_a());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewAgents);
  }
}

TEST(BudgetBalanced, TransfersSumToZeroEverywhere) {
  std::size_t fixtures = 0;
  for (const Fixture& f : direct_fixtures()) {
    if (f.env.num_agents() < 3) continue;
    ++fixtures;
    auto mech = synthesize_budget_balanced(f.env);
    for_each_profile(*mech, [&](std::span<const Message> m) {
      Rational total = 0;
      for (const Rational& x : mech->evaluate(m).transfers) total += x;
      ASSERT_EQ(total, 0) << f.name;
    });
    for (StateIndex s = 0; s < f.env.num_states(); ++s) {
      for (const Rational& x : mech->evaluate(mech->truthful_profile(s)).transfers) {
        EXPECT_EQ(x, 0);
      }
    }
  }
  EXPECT_GT(fixtures, 1u);
}

TEST(BudgetBalanced, UnsupportedFineGoesToSupporters) {
  Environment env = env_3agents();
  auto mech = synthesize_budget_balanced(env);
  const StateSet full = StateSet::full(2);
  // Everyone claims s1 with the full set; agent 2's tightest at s1 is {s1},
  // so agent 2 supports nobody and every claim is unsupported.
  std::vector<Message> m{{0, art(env, 0, full)}, {0, art(env, 1, full)}, {0, art(env, 2, full)}};
  Evaluation e = mech->evaluate(m);
  // Agent 1's fine goes to agent 3 alone, agent 2's is split between 1 and
  // 3, agent 3's goes to agent 1.
  EXPECT_EQ(component(e, "unsupported_claim"), q({Rational(3, 2), -3, Rational(3, 2)}));
}

TEST(SmallTransfers, RecipeAtOneTenth) {
  SmallTransferParams p = solve_small_transfer_params(Rational(1, 10), 3);
  EXPECT_EQ(p.rounds, 63u);
  EXPECT_EQ(p.delta, Rational(1, 20));
  EXPECT_EQ(p.alpha, Rational(1, 60));
  EXPECT_EQ(p.gamma, Rational(1, 3780));
  EXPECT_EQ(p.beta, Rational(1, 63) + Rational(1, 1890));
  EXPECT_TRUE(small_transfer_params_valid(p));
  EXPECT_LT(p.transfer_bound(), p.delta_bar);

  SmallTransferParams fewer = p;
  fewer.rounds = 62;
  fewer.gamma = p.delta / (3 * Rational(62));
  fewer.beta = Rational(1, 62) + p.delta_bar / (3 * Rational(62));
  EXPECT_FALSE(small_transfer_params_valid(fewer));
}

TEST(SmallTransfers, TruncationNeedsALargerBound) {
  SmallTransferOptions three;
  three.fixed_rounds = 3;
  try {
    solve_small_transfer_params(Rational(1, 10), 3, three);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleBound);
  }
  EXPECT_THROW(solve_small_transfer_params(6, 3, three), Error);
  EXPECT_TRUE(small_transfer_params_valid(solve_small_transfer_params(7, 3, three)));
  EXPECT_THROW(solve_small_transfer_params(Rational(1, 10), 2), Error);
}

class TruncatedSmall : public ::testing::Test {
 protected:
  void SetUp() override {
    SmallTransferOptions o;
    o.fixed_rounds = 3;
    mech = synthesize_small_transfers(env, 7, o);
    params = solve_small_transfer_params(7, 3, o);
  }
  Environment env = env_3agents();
  MechanismPtr mech;
  SmallTransferParams params;
};

TEST_F(TruncatedSmall, LotteriesAreDistributionsAndTransfersBounded) {
  Rational largest = 0;
  for_each_profile(*mech, [&](std::span<const Message> m) {
    Evaluation e = mech->evaluate(m);
    Rational mass = 0;
    for (const auto& [a, p] : e.outcome.entries()) {
      ASSERT_GT(p, 0);
      mass += p;
    }
    ASSERT_EQ(mass, 1);
    for (const Rational& t : e.transfers) largest = std::max(largest, Rational(abs(t)));
  });
  EXPECT_LE(largest, params.transfer_bound());
  EXPECT_LT(largest, params.delta_bar);
}

TEST_F(TruncatedSmall, ZeroOnTruth) {
  for (StateIndex s = 0; s < 2; ++s) {
    Evaluation e = mech->evaluate(mech->truthful_profile(s));
    EXPECT_TRUE(e.outcome.is_certain(env.scf(s)));
    EXPECT_EQ(e.transfers, q({0, 0, 0}));
  }
}

TEST_F(TruncatedSmall, ConsistencyWrapsAroundTheAgents) {
  auto m = mech->truthful_profile(0);
  // Agent 1 now claims s2 in the direct round, so agent 3 (whose successor is
  // agent 1) is inconsistent in round 1.
  m[0].claim = 1;
  Evaluation e = mech->evaluate(m);
  EXPECT_EQ(component(e, "consistency"), q({0, 0, -params.alpha}));
}

TEST_F(TruncatedSmall, FirstDeviationIsLowestRoundThenLowestAgent) {
  auto m = mech->truthful_profile(0);
  m[2].rounds[1] = 1;  // agent 3 deviates in round 2
  m[1].rounds[1] = 1;  // agent 2 deviates in round 2 as well
  m[0].rounds[2] = 1;  // agent 1 deviates later
  Evaluation e = mech->evaluate(m);
  EXPECT_EQ(component(e, "first_deviation"), q({0, -params.beta, 0}));
}

TEST_F(TruncatedSmall, LoneDeviationIsFinedPerRound) {
  auto m = mech->truthful_profile(0);
  m[1].rounds[1] = 1;
  m[1].rounds[3] = 1;
  Evaluation e = mech->evaluate(m);
  EXPECT_EQ(component(e, "lone_deviation"), q({0, -2 * params.gamma, 0}));
  // Two of three still agree in every round, so the outcome stays put.
  EXPECT_TRUE(e.outcome.is_certain(env.scf(0)));
}

TEST_F(TruncatedSmall, OutcomeWeightsFollowTheRounds) {
  auto m = mech->truthful_profile(0);
  for (AgentIndex i = 0; i < 2; ++i) m[i].rounds[3] = 1;  // round 4 majority is s2
  Evaluation e = mech->evaluate(m);
  const Rational round = (1 - params.epsilon) / 3;
  EXPECT_EQ(e.outcome.probability(env.scf(1)), round);
  EXPECT_EQ(e.outcome.probability(env.scf(0)), 1 - round);
}

}  // namespace
}  // namespace evimpl
