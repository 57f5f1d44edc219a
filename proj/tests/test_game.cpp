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

#include <random>

#include "evimpl/corpus.hpp"
#include "evimpl/error.hpp"
#include "evimpl/game.hpp"
#include "evimpl/mech_costly.hpp"
#include "evimpl/mech_hard.hpp"
#include "evimpl/verify.hpp"

namespace evimpl {
namespace {

using Row = std::vector<Rational>;

// Row player's payoffs first, then the column player's, both row-major.
InducedGame bimatrix(std::size_t rows, std::size_t cols, Row first, Row second) {
  return make_game({rows, cols}, {std::move(first), std::move(second)});
}

Rational sevenths(std::uint64_t n) {
  Rational r(static_cast<long>(n), 7);
  r.canonicalize();
  return r;
}

Rational expected(const InducedGame& g, std::size_t player, const Row& row, const Row& col) {
  Rational total = 0;
  for (std::size_t a = 0; a < row.size(); ++a) {
    for (std::size_t b = 0; b < col.size(); ++b) {
      total += row[a] * col[b] * g.payoff[player][g.index({a, b})];
    }
  }
  return total;
}

// Independent best-response test against every pure deviation.
bool no_profitable_deviation(const InducedGame& g, const Row& row, const Row& col) {
  const Rational r = expected(g, 0, row, col);
  const Rational c = expected(g, 1, row, col);
  for (std::size_t a = 0; a < row.size(); ++a) {
    Row pure(row.size(), 0);
    pure[a] = 1;
    if (expected(g, 0, pure, col) > r) return false;
  }
  for (std::size_t b = 0; b < col.size(); ++b) {
    Row pure(col.size(), 0);
    pure[b] = 1;
    if (expected(g, 1, row, pure) > c) return false;
  }
  return true;
}

TEST(PureNash, PrisonersDilemma) {
  // Strategy 0 cooperates, 1 defects.
  InducedGame g = bimatrix(2, 2, {3, 0, 5, 1}, {3, 5, 0, 1});
  EXPECT_EQ(pure_nash(g), (std::vector<std::size_t>{g.index({1, 1})}));
  MixedResult m = mixed_nash_2p(g, 2);
  EXPECT_TRUE(m.exhaustive);
  ASSERT_EQ(m.equilibria.size(), 1u);
  EXPECT_EQ(m.equilibria[0].row, (Row{0, 1}));
  EXPECT_EQ(m.surviving_rows, (std::vector<std::size_t>{1}));
}

TEST(MixedNash, MatchingPennies) {
  InducedGame g = bimatrix(2, 2, {1, -1, -1, 1}, {-1, 1, 1, -1});
  EXPECT_TRUE(pure_nash(g).empty());
  MixedResult m = mixed_nash_2p(g, 2);
  EXPECT_TRUE(m.exhaustive);
  ASSERT_EQ(m.equilibria.size(), 1u);
  EXPECT_EQ(m.equilibria[0].row, (Row{Rational(1, 2), Rational(1, 2)}));
  EXPECT_EQ(m.equilibria[0].column, (Row{Rational(1, 2), Rational(1, 2)}));
  EXPECT_FALSE(m.equilibria[0].degenerate);
  EXPECT_TRUE(is_nash_2p(g, m.equilibria[0].row, m.equilibria[0].column));
  EXPECT_FALSE(is_nash_2p(g, {1, 0}, {Rational(1, 2), Rational(1, 2)}));
}

TEST(MixedNash, SupportBoundIsReported) {
  InducedGame g = bimatrix(2, 2, {1, -1, -1, 1}, {-1, 1, 1, -1});
  MixedResult m = mixed_nash_2p(g, 1);
  EXPECT_FALSE(m.exhaustive);
  EXPECT_TRUE(m.equilibria.empty());
  EXPECT_THROW(mixed_nash_2p(g, 0), Error);
  EXPECT_THROW(mixed_nash_2p(g, 2, 1), Error);
}

TEST(MixedNash, ConstantGameIsDegenerate) {
  InducedGame g = bimatrix(2, 2, {1, 1, 1, 1}, {0, 0, 0, 0});
  EXPECT_EQ(pure_nash(g).size(), 4u);
  MixedResult m = mixed_nash_2p(g, 2);
  EXPECT_TRUE(m.degenerate);
  for (const auto& eq : m.equilibria) EXPECT_TRUE(no_profitable_deviation(g, eq.row, eq.column));
}

TEST(MixedNash, TwoByTwoClosedForm) {
  std::mt19937_64 rng(7);
  std::size_t interior = 0;
  for (int round = 0; round < 200; ++round) {
    Row a, b;
    for (int k = 0; k < 4; ++k) a.push_back(Rational(static_cast<long>(uniform_below(rng, 9))));
    for (int k = 0; k < 4; ++k) b.push_back(Rational(static_cast<long>(uniform_below(rng, 9))));
    InducedGame g = bimatrix(2, 2, a, b);
    MixedResult m = mixed_nash_2p(g, 2);
    for (const auto& eq : m.equilibria) {
      ASSERT_TRUE(no_profitable_deviation(g, eq.row, eq.column));
    }
    // Every pure equilibrium shows up with singleton supports.
    for (std::size_t p : pure_nash(g)) {
      auto choice = g.decode(p);
      bool seen = false;
      for (const auto& eq : m.equilibria) {
        seen = seen || (eq.row[choice[0]] == 1 && eq.column[choice[1]] == 1);
      }
      ASSERT_TRUE(seen);
    }
    // Generic interior equilibrium: the row mix makes the column player
    // indifferent.
    const Rational den = b[0] - b[1] - b[2] + b[3];
    const Rational cden = a[0] - a[1] - a[2] + a[3];
    if (den == 0 || cden == 0) continue;
    const Rational p = (b[3] - b[2]) / den;
    const Rational q = (a[3] - a[1]) / cden;
    if (p <= 0 || p >= 1 || q <= 0 || q >= 1) continue;
    ++interior;
    bool found = false;
    for (const auto& eq : m.equilibria) {
      found = found || (eq.row == Row{p, 1 - p} && eq.column == Row{q, 1 - q});
    }
    EXPECT_TRUE(found);
  }
  EXPECT_GT(interior, 10u);
}

TEST(MixedNash, RandomGamesAgreeWithDirectCheck) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 60; ++round) {
    const std::size_t rows = 2 + uniform_below(rng, 3);
    const std::size_t cols = 2 + uniform_below(rng, 3);
    Row a, b;
    for (std::size_t k = 0; k < rows * cols; ++k) {
      a.push_back(sevenths(uniform_below(rng, 20)));
      b.push_back(sevenths(uniform_below(rng, 20)));
    }
    InducedGame g = bimatrix(rows, cols, a, b);
    MixedResult m = mixed_nash_2p(g, 4);
    ASSERT_TRUE(m.exhaustive);
    // Finite games always have an equilibrium.
    ASSERT_FALSE(m.equilibria.empty());
    for (const auto& eq : m.equilibria) {
      Rational rs = 0, cs = 0;
      for (const auto& x : eq.row) rs += x;
      for (const auto& x : eq.column) cs += x;
      ASSERT_EQ(rs, 1);
      ASSERT_EQ(cs, 1);
      ASSERT_TRUE(no_profitable_deviation(g, eq.row, eq.column));
    }
  }
}

TEST(PureNash, ThreePlayerCoordination) {
  // Everyone gets 1 when all three match, 0 otherwise.
  Row u(8, 0);
  u[0] = 1;
  u[7] = 1;
  InducedGame g = make_game({2, 2, 2}, {u, u, u});
  EXPECT_EQ(pure_nash(g), (std::vector<std::size_t>{0, 7}));
  EXPECT_THROW(mixed_nash_2p(g, 2), Error);
}

TEST(Skeleton, FeasibleMessagesFollowTheEndowment) {
  Environment env = env_a();
  auto mech = synthesize_theorem1(env);
  GameSkeleton at_s1 = build_skeleton(*mech, env, 0);
  GameSkeleton at_s2 = build_skeleton(*mech, env, 1);
  // Agent 1 holds one article at s1 and two at s2; each goes with two claims.
  EXPECT_EQ(at_s1.messages[0].size(), 2u);
  EXPECT_EQ(at_s2.messages[0].size(), 4u);
  EXPECT_EQ(at_s2.messages[1].size(), 2u);
  EXPECT_EQ(at_s2.num_profiles(), 8u);
  for (std::size_t p = 0; p < at_s2.num_profiles(); ++p) {
    EXPECT_EQ(at_s2.encode(at_s2.decode(p)), p);
    Evaluation e = mech->evaluate(at_s2.profile_messages(p));
    EXPECT_EQ(e.transfers, at_s2.transfers(p));
    EXPECT_EQ(e.outcome, at_s2.outcome(p));
  }
  EXPECT_THROW(build_skeleton(*mech, env, 2), Error);
  EXPECT_THROW(build_skeleton(*mech, env, 1, 3), Error);
  EXPECT_THROW(build_skeleton(*mech, env_3agents(), 0), Error);
}

TEST(Skeleton, InducedPayoffsAddValueTransferAndCost) {
  Environment env = env_costly();
  auto mech = synthesize_theorem3(env);
  GameSkeleton g = build_skeleton(*mech, env, 1);
  UtilityProfile v = UtilityProfile::state_independent(2, {{Rational(1, 3), Rational(2, 3)},
                                                           {Rational(1, 4), 0}});
  InducedGame game = induce(g, v);
  for (std::size_t p = 0; p < g.num_profiles(); ++p) {
    auto choice = g.decode(p);
    for (AgentIndex i = 0; i < 2; ++i) {
      Rational value = 0;
      for (const auto& [a, prob] : g.outcome(p).entries()) value += prob * v.at(i, a, 1);
      const Message& m = g.messages[i][choice[i]];
      const Rational cost = env.cost(i, m.article, 1).value();
      EXPECT_EQ(g.message_cost[i][choice[i]], cost);
      EXPECT_EQ(game.payoff[i][game.index(choice)], value + g.transfers(p)[i] - cost);
    }
  }
}

TEST(Skeleton, IndistinguishableStatesGiveIdenticalGames) {
  Environment env = env_b();
  auto mech = synthesize_theorem1(env, Gate::kSkip);
  GameSkeleton a = build_skeleton(*mech, env, 0);
  GameSkeleton b = build_skeleton(*mech, env, 1);
  EXPECT_TRUE(same_game(a, b));
  Environment distinct = env_a();
  auto other = synthesize_theorem1(distinct);
  EXPECT_FALSE(same_game(build_skeleton(*other, distinct, 0), build_skeleton(*other, distinct, 1)));
}

}  // namespace
}  // namespace evimpl
