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

#include <map>

#include "evimpl/corpus.hpp"
#include "evimpl/cost_variation.hpp"
#include "evimpl/mech_costly.hpp"
#include "evimpl/mech_hard.hpp"
#include "evimpl/renegotiation.hpp"
#include "evimpl/verify.hpp"

namespace evimpl {
namespace {

std::vector<StateIndex> all_states(const Environment& env) {
  std::vector<StateIndex> out;
  for (StateIndex s = 0; s < env.num_states(); ++s) out.push_back(s);
  return out;
}

TEST(Sampling, UniformBelowStaysInRangeAndCoversIt) {
  std::mt19937_64 rng(3);
  std::map<std::uint64_t, int> seen;
  for (int k = 0; k < 2000; ++k) {
    std::uint64_t x = uniform_below(rng, 7);
    ASSERT_LT(x, 7u);
    ++seen[x];
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_EQ(uniform_below(rng, 1), 0u);
  EXPECT_THROW(uniform_below(rng, 0), std::invalid_argument);
}

TEST(Sampling, UtilitiesAreSmallFractionsBelowOne) {
  std::mt19937_64 rng(5);
  UtilityProfile v = sample_utility_profile(rng, 3, 4, 2);
  for (AgentIndex i = 0; i < 3; ++i) {
    for (OutcomeIndex a = 0; a < 4; ++a) {
      for (StateIndex s = 0; s < 2; ++s) {
        const Rational& x = v.at(i, a, s);
        EXPECT_GE(x, 0);
        EXPECT_LT(x, 1);
        EXPECT_LE(x.get_den(), 128);
      }
    }
  }
  std::mt19937_64 again(5);
  UtilityProfile w = sample_utility_profile(again, 3, 4, 2);
  EXPECT_EQ(v.at(2, 3, 1), w.at(2, 3, 1));
}

TEST(Acceptability, TruthIsAcceptableALieIsNot) {
  Environment env = env_a();
  auto mech = synthesize_theorem1(env);
  GameSkeleton g = build_skeleton(*mech, env, 1);
  auto truth = mech->truthful_profile(1);
  std::size_t truthful = g.num_profiles();
  for (std::size_t p = 0; p < g.num_profiles(); ++p) {
    if (g.profile_messages(p) == truth) truthful = p;
  }
  ASSERT_LT(truthful, g.num_profiles());
  EXPECT_TRUE(acceptable_profile(g, env, *mech, truthful));
  std::size_t acceptable = 0;
  for (std::size_t p = 0; p < g.num_profiles(); ++p) {
    acceptable += acceptable_profile(g, env, *mech, p) ? 1 : 0;
  }
  EXPECT_EQ(acceptable, 1u);
}

TEST(Certificate, CoversEveryUnacceptableProfileOnEnvA) {
  Environment env = env_a();
  auto mech = synthesize_theorem1(env);
  for (StateIndex s = 0; s < 2; ++s) {
    GameSkeleton g = build_skeleton(*mech, env, s);
    MarginCertificate c = margin_certificate(g, env, *mech);
    EXPECT_TRUE(c.complete());
    EXPECT_TRUE(c.truthful_robust);
    EXPECT_EQ(c.entries.size(), g.num_profiles() - 1);
    for (const auto& e : c.entries) {
      EXPECT_GT(e.gain, 0);
      EXPECT_GE(e.gain, e.swing);
      const std::size_t moved = g.deviate(e.profile, e.agent, e.deviation);
      const Rational before = g.transfers(e.profile)[e.agent] - g.message_cost[e.agent][g.decode(e.profile)[e.agent]];
      const Rational after = g.transfers(moved)[e.agent] - g.message_cost[e.agent][e.deviation];
      EXPECT_EQ(after - before, e.gain);
      EXPECT_EQ(e.swing, g.outcome(e.profile).total_variation(g.outcome(moved)));
    }
  }
}

TEST(Certificate, PenaltyFreeMechanismIsNotCertified) {
  Environment env = env_a();
  DirectEvidenceMechanism mech(env, Penalties{0, 0, 0, 0}, false, MechanismInfo{"zero"});
  GameSkeleton g = build_skeleton(mech, env, 1);
  MarginCertificate c = margin_certificate(g, env, mech);
  EXPECT_FALSE(c.complete());
}

TEST(Verify, DirectMechanismOnEnvAIsCertified) {
  Environment env = env_a();
  auto mech = synthesize_theorem1(env);
  VerificationReport r = verify_implementation(*mech, env, all_states(env));
  EXPECT_EQ(r.verdict, Verdict::kCertifiedAllV);
  ASSERT_EQ(r.states.size(), 2u);
  for (const auto& s : r.states) {
    EXPECT_EQ(s.utility_profiles, 21u);
    // One equilibrium per utility profile: the truthful one.
    EXPECT_EQ(s.pure_equilibria, s.utility_profiles);
    EXPECT_TRUE(s.mixed_checked);
    EXPECT_TRUE(s.mixed_exhaustive);
    EXPECT_FALSE(s.witness);
  }
}

TEST(Verify, SameSeedSameReport) {
  Environment env = env_e();
  auto mech = synthesize_em_star(env, 1);
  VerifyConfig c;
  c.seed = 99;
  c.samples = 5;
  auto a = verify_implementation(*mech, env, all_states(env), c);
  auto b = verify_implementation(*mech, env, all_states(env), c);
  ASSERT_EQ(a.states.size(), b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    EXPECT_EQ(a.states[k].pure_equilibria, b.states[k].pure_equilibria);
    EXPECT_EQ(a.states[k].mixed_equilibria, b.states[k].mixed_equilibria);
    EXPECT_EQ(a.states[k].verdict, b.states[k].verdict);
  }
  EXPECT_EQ(a.states[0].utility_profiles, 6u);
}

TEST(Verify, IndistinguishableStatesFail) {
  Environment env = env_b();
  auto mech = synthesize_theorem1(env, Gate::kSkip);
  VerificationReport r = verify_implementation(*mech, env, all_states(env));
  EXPECT_EQ(r.verdict, Verdict::kFails);
  ASSERT_TRUE(r.identical_games);
  EXPECT_EQ(r.identical_games->first, 0u);
  EXPECT_EQ(r.identical_games->second, 1u);
}

TEST(Verify, RenegotiationMechanismFailsOutsideItsConditions) {
  Environment env = env_a();
  auto mech = synthesize_rp_mechanism(env, Gate::kSkip);
  VerificationReport r = verify_implementation(*mech, env, all_states(env));
  EXPECT_EQ(r.verdict, Verdict::kFails);
  const StateReport& bad = r.states[1];
  EXPECT_EQ(bad.verdict, Verdict::kFails);
  ASSERT_TRUE(bad.witness);
  GameSkeleton g = build_skeleton(*mech, env, 1);
  EXPECT_FALSE(acceptable_profile(g, env, *mech, bad.witness->bad_profile));
}

TEST(Verify, RenegotiationMechanismWhereConditionsHold) {
  for (Environment env : {env_rp_both(), env_d_modified()}) {
    auto mech = synthesize_rp_mechanism(env);
    EXPECT_TRUE(implements(verify_implementation(*mech, env, all_states(env)).verdict));
  }
}

TEST(Verify, PenaltyFreeMechanismFails) {
  Environment env = env_a();
  DirectEvidenceMechanism mech(env, Penalties{0, 0, 0, 0}, false, MechanismInfo{"zero"});
  VerificationReport r = verify_implementation(mech, env, all_states(env));
  EXPECT_EQ(r.verdict, Verdict::kFails);
}

TEST(Verify, CostlyVariantsAreCertified) {
  Environment costly = env_costly();
  EXPECT_EQ(verify_implementation(*synthesize_theorem3(costly), costly, all_states(costly)).verdict,
            Verdict::kCertifiedAllV);
  Environment e = env_e();
  EXPECT_EQ(verify_implementation(*synthesize_theorem4(e), e, all_states(e)).verdict,
            Verdict::kCertifiedAllV);
}

TEST(Verify, ProfileCapGivesInconclusive) {
  Environment env = env_a();
  auto mech = synthesize_theorem1(env);
  VerifyConfig c;
  c.profile_cap = 2;
  VerificationReport r = verify_implementation(*mech, env, all_states(env), c);
  EXPECT_EQ(r.verdict, Verdict::kInconclusive);
  EXPECT_EQ(exit_code(r.verdict), 2);
}

TEST(Verify, ThreeAgentGamesArePureOnly) {
  Environment env = env_3agents();
  auto mech = synthesize_budget_balanced(env);
  VerificationReport r = verify_implementation(*mech, env, all_states(env));
  EXPECT_TRUE(implements(r.verdict));
  for (const auto& s : r.states) {
    EXPECT_FALSE(s.mixed_checked);
    EXPECT_FALSE(s.notes.empty());
  }
}

TEST(Verdicts, NamesAndExitCodes) {
  EXPECT_EQ(verdict_name(Verdict::kCertifiedAllV), "CERTIFIED_ALL_V");
  EXPECT_EQ(exit_code(Verdict::kImplements), 0);
  EXPECT_EQ(exit_code(Verdict::kFails), 1);
  EXPECT_FALSE(implements(Verdict::kInconclusive));
}

}  // namespace
}  // namespace evimpl
