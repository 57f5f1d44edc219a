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

#include "evimpl/game.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "evimpl/error.hpp"
#include "evimpl/lp.hpp"

namespace evimpl {

UtilityProfile::UtilityProfile(std::size_t agents, std::size_t outcomes, std::size_t states)
    : values_(agents, std::vector<std::vector<Rational>>(
                          outcomes, std::vector<Rational>(states, 0))) {}

UtilityProfile UtilityProfile::state_independent(std::size_t states,
                                                 const std::vector<std::vector<Rational>>& v) {
  UtilityProfile u(v.size(), v.empty() ? 0 : v[0].size(), states);
  for (AgentIndex i = 0; i < v.size(); ++i) {
    for (OutcomeIndex a = 0; a < v[i].size(); ++a) {
      for (StateIndex s = 0; s < states; ++s) u.set(i, a, s, v[i][a]);
    }
  }
  return u;
}

void UtilityProfile::set(AgentIndex i, OutcomeIndex a, StateIndex s, Rational value) {
  if (value < 0 || value >= 1) {
    throw Error(ErrorCode::kPreconditionViolated,
                "utility " + to_string(value) + " outside [0,1)");
  }
  values_.at(i).at(a).at(s) = std::move(value);
}

namespace {

std::vector<std::size_t> strides_for(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> strides(sizes.size(), 1);
  for (std::size_t i = sizes.size(); i-- > 1;) strides[i - 1] = strides[i] * sizes[i];
  return strides;
}

std::size_t checked_product(const std::vector<std::size_t>& sizes, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t n : sizes) {
    if (n == 0) return 0;
    if (total > cap / n) {
      throw Error(ErrorCode::kSizeLimit, "more than " + std::to_string(cap) + " profiles");
    }
    total *= n;
  }
  if (total > cap) {
    throw Error(ErrorCode::kSizeLimit, "more than " + std::to_string(cap) + " profiles");
  }
  return total;
}

std::vector<std::size_t> decode_with(const std::vector<std::size_t>& strides,
                                     const std::vector<std::size_t>& sizes, std::size_t p) {
  std::vector<std::size_t> out(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) out[i] = (p / strides[i]) % sizes[i];
  return out;
}

}  // namespace

std::vector<std::size_t> GameSkeleton::decode(std::size_t profile) const {
  std::vector<std::size_t> sizes;
  for (const auto& m : messages) sizes.push_back(m.size());
  return decode_with(strides, sizes, profile);
}

std::size_t GameSkeleton::encode(const std::vector<std::size_t>& choice) const {
  std::size_t p = 0;
  for (std::size_t i = 0; i < choice.size(); ++i) p += choice[i] * strides[i];
  return p;
}

std::size_t GameSkeleton::deviate(std::size_t profile, AgentIndex i, std::size_t message) const {
  std::size_t current = (profile / strides[i]) % messages[i].size();
  return profile - current * strides[i] + message * strides[i];
}

std::vector<Message> GameSkeleton::profile_messages(std::size_t profile) const {
  auto choice = decode(profile);
  std::vector<Message> out;
  for (std::size_t i = 0; i < choice.size(); ++i) out.push_back(messages[i][choice[i]]);
  return out;
}

GameSkeleton build_skeleton(const Mechanism& mech, const Environment& env, StateIndex truth,
                            std::size_t profile_cap) {
  if (!mech.matches(env) || truth >= env.num_states()) {
    throw Error(ErrorCode::kDomainMismatch, "mechanism was built for a different environment");
  }
  const std::size_t agents = env.num_agents();
  const std::size_t rounds = mech.info().extra_rounds;
  GameSkeleton g;
  g.truth = truth;
  std::vector<std::size_t> sizes;
  for (AgentIndex i = 0; i < agents; ++i) {
    std::vector<Message> msgs;
    std::vector<Rational> costs;
    std::size_t tuples = 1;
    for (std::size_t r = 0; r < rounds; ++r) {
      if (tuples > profile_cap / env.num_states()) {
        throw Error(ErrorCode::kSizeLimit, "round claims exceed the profile cap");
      }
      tuples *= env.num_states();
    }
    for (StateIndex claim = 0; claim < env.num_states(); ++claim) {
      for (ArticleIndex a : env.endowment(i, truth)) {
        for (std::size_t t = 0; t < tuples; ++t) {
          Message m{claim, a, std::vector<StateIndex>(rounds)};
          std::size_t code = t;
          for (std::size_t r = rounds; r-- > 0;) {
            m.rounds[r] = code % env.num_states();
            code /= env.num_states();
          }
          msgs.push_back(std::move(m));
          costs.push_back(mech.info().charges_costs ? env.cost(i, a, truth).value()
                                                    : Rational(0));
        }
      }
    }
    sizes.push_back(msgs.size());
    g.messages.push_back(std::move(msgs));
    g.message_cost.push_back(std::move(costs));
  }
  const std::size_t total = checked_product(sizes, profile_cap);
  g.strides = strides_for(sizes);
  g.lottery_of.resize(total);
  g.transfers_of.resize(total);

  std::map<std::vector<std::pair<OutcomeIndex, Rational>>, std::uint32_t> lottery_ids;
  std::map<std::vector<Rational>, std::uint32_t> transfer_ids;
  std::vector<std::size_t> choice(agents, 0);
  std::vector<Message> profile(agents);
  for (std::size_t p = 0; p < total; ++p) {
    for (AgentIndex i = 0; i < agents; ++i) profile[i] = g.messages[i][choice[i]];
    Evaluation e = mech.evaluate(profile);
    auto [lit, lnew] = lottery_ids.try_emplace(e.outcome.entries(),
                                               static_cast<std::uint32_t>(g.lotteries.size()));
    if (lnew) g.lotteries.push_back(e.outcome);
    g.lottery_of[p] = lit->second;
    auto [tit, tnew] = transfer_ids.try_emplace(
        e.transfers, static_cast<std::uint32_t>(g.transfer_table.size()));
    if (tnew) g.transfer_table.push_back(e.transfers);
    g.transfers_of[p] = tit->second;
    for (std::size_t i = agents; i-- > 0;) {
      if (++choice[i] < sizes[i]) break;
      choice[i] = 0;
    }
  }
  return g;
}

std::size_t InducedGame::index(const std::vector<std::size_t>& choice) const {
  std::size_t p = 0;
  for (std::size_t i = 0; i < choice.size(); ++i) p += choice[i] * strides[i];
  return p;
}

std::vector<std::size_t> InducedGame::decode(std::size_t profile) const {
  return decode_with(strides, num_strategies, profile);
}

InducedGame make_game(std::vector<std::size_t> num_strategies,
                      std::vector<std::vector<Rational>> payoff) {
  InducedGame g;
  g.strides = strides_for(num_strategies);
  std::size_t total = 1;
  for (std::size_t n : num_strategies) total *= n;
  if (payoff.size() != num_strategies.size()) {
    throw std::invalid_argument("one payoff vector per player expected");
  }
  for (const auto& p : payoff) {
    if (p.size() != total) throw std::invalid_argument("payoff vector has the wrong size");
  }
  g.num_strategies = std::move(num_strategies);
  g.payoff = std::move(payoff);
  return g;
}

InducedGame induce(const GameSkeleton& s, const UtilityProfile& v) {
  const std::size_t agents = s.num_agents();
  if (v.num_agents() != agents) {
    throw Error(ErrorCode::kDomainMismatch, "utility profile has the wrong agent count");
  }
  // Expected value of each distinct lottery, per agent.
  std::vector<std::vector<Rational>> expected(agents);
  for (AgentIndex i = 0; i < agents; ++i) {
    for (const Lottery& l : s.lotteries) {
      Rational total = 0;
      for (const auto& [a, p] : l.entries()) total += p * v.at(i, a, s.truth);
      expected[i].push_back(total);
    }
  }
  InducedGame g;
  for (const auto& m : s.messages) g.num_strategies.push_back(m.size());
  g.strides = s.strides;
  g.payoff.assign(agents, std::vector<Rational>(s.num_profiles()));
  for (AgentIndex i = 0; i < agents; ++i) {
    const std::size_t stride = s.strides[i];
    const std::size_t n = s.messages[i].size();
    for (std::size_t p = 0; p < s.num_profiles(); ++p) {
      g.payoff[i][p] = expected[i][s.lottery_of[p]] + s.transfer_table[s.transfers_of[p]][i] -
                       s.message_cost[i][(p / stride) % n];
    }
  }
  return g;
}

InducedGame induce(const Mechanism& mech, const Environment& env, const UtilityProfile& v,
                   StateIndex truth, std::size_t profile_cap) {
  return induce(build_skeleton(mech, env, truth, profile_cap), v);
}

std::vector<std::size_t> pure_nash(const InducedGame& game, std::size_t profile_cap) {
  const std::size_t total = game.num_profiles();
  if (total > profile_cap) {
    throw Error(ErrorCode::kSizeLimit, "more than " + std::to_string(profile_cap) + " profiles");
  }
  std::vector<std::uint8_t> best_count(total, 0);
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const std::size_t stride = game.strides[i];
    const std::size_t n = game.num_strategies[i];
    const auto& u = game.payoff[i];
    for (std::size_t base = 0; base < total; ++base) {
      if ((base / stride) % n != 0) continue;
      const Rational* best = &u[base];
      for (std::size_t k = 1; k < n; ++k) {
        if (u[base + k * stride] > *best) best = &u[base + k * stride];
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (u[base + k * stride] == *best) ++best_count[base + k * stride];
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < total; ++p) {
    if (best_count[p] == game.num_players()) out.push_back(p);
  }
  return out;
}

std::vector<std::size_t> MixedEquilibrium::row_support() const {
  std::vector<std::size_t> s;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (row[k] > 0) s.push_back(k);
  }
  return s;
}

std::vector<std::size_t> MixedEquilibrium::column_support() const {
  std::vector<std::size_t> s;
  for (std::size_t k = 0; k < column.size(); ++k) {
    if (column[k] > 0) s.push_back(k);
  }
  return s;
}

namespace {

// View of a two-player game as "own strategy x opponent strategy" payoffs
// for one player, so both players' problems share one code path.
struct PlayerView {
  const InducedGame* game;
  std::size_t player;
  std::size_t own_count() const { return game->num_strategies[player]; }
  std::size_t other_count() const { return game->num_strategies[1 - player]; }
  const Rational& u(std::size_t own, std::size_t other) const {
    std::size_t p = player == 0 ? own * game->strides[0] + other
                                : other * game->strides[0] + own;
    return game->payoff[player][p];
  }
  // `a` is strictly worse than some other alive strategy against every
  // opponent strategy in `against`.
  bool dominated(std::size_t a, const std::vector<std::size_t>& alive,
                 const std::vector<std::size_t>& against) const {
    for (std::size_t b : alive) {
      if (b == a) continue;
      bool better = true;
      for (std::size_t o : against) {
        if (!(u(b, o) > u(a, o))) {
          better = false;
          break;
        }
      }
      if (better) return true;
    }
    return false;
  }
};

void for_each_subset(const std::vector<std::size_t>& items, std::size_t max_size,
                     const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!pick.empty()) visit(pick);
    if (pick.size() == max_size) return;
    for (std::size_t k = start; k < items.size(); ++k) {
      pick.push_back(items[k]);
      rec(k + 1);
      pick.pop_back();
    }
  };
  rec(0);
}

// Opponent mixture over `other_support` making every strategy in
// `own_support` a best response among all own strategies, with strictly
// positive weights. Returns the full-length mixture and a degeneracy flag.
std::optional<std::pair<std::vector<Rational>, bool>> indifference_mix(
    const PlayerView& view, const std::vector<std::size_t>& own_support,
    const std::vector<std::size_t>& other_support) {
  const std::size_t k = other_support.size();
  const std::size_t t_var = k;
  std::vector<LinearConstraint> cons;
  const std::size_t a0 = own_support.front();
  {
    LinearConstraint sum{std::vector<Rational>(k + 1, 0), Relation::kEqual, 1};
    for (std::size_t j = 0; j < k; ++j) sum.coeffs[j] = 1;
    cons.push_back(std::move(sum));
  }
  std::vector<std::vector<Rational>> equality_rows;
  for (std::size_t a = 0; a < view.own_count(); ++a) {
    if (a == a0) continue;
    bool in_support = std::find(own_support.begin(), own_support.end(), a) != own_support.end();
    LinearConstraint c{std::vector<Rational>(k + 1, 0),
                       in_support ? Relation::kEqual : Relation::kLessEqual, 0};
    for (std::size_t j = 0; j < k; ++j) {
      c.coeffs[j] = view.u(a, other_support[j]) - view.u(a0, other_support[j]);
    }
    if (in_support) {
      equality_rows.emplace_back(c.coeffs.begin(), c.coeffs.begin() + static_cast<std::ptrdiff_t>(k));
    }
    cons.push_back(std::move(c));
  }
  for (std::size_t j = 0; j < k; ++j) {
    LinearConstraint c{std::vector<Rational>(k + 1, 0), Relation::kLessEqual, 0};
    c.coeffs[t_var] = 1;
    c.coeffs[j] = -1;
    cons.push_back(std::move(c));
  }
  std::vector<Rational> objective(k + 1, 0);
  objective[t_var] = 1;
  LpResult r = maximize(objective, cons);
  if (r.status != LpResult::Status::kOptimal || r.value <= 0) return std::nullopt;
  std::vector<Rational> mix(view.other_count(), 0);
  for (std::size_t j = 0; j < k; ++j) mix[other_support[j]] = r.x[j];
  equality_rows.emplace_back(k, Rational(1));
  bool degenerate = matrix_rank(equality_rows) < k;
  return std::make_pair(std::move(mix), degenerate);
}

}  // namespace

MixedResult mixed_nash_2p(const InducedGame& game, std::size_t max_support,
                          std::size_t pair_cap) {
  if (game.num_players() != 2) {
    throw Error(ErrorCode::kPreconditionViolated, "support enumeration needs two players");
  }
  if (max_support == 0) throw Error(ErrorCode::kPreconditionViolated, "max_support must be >= 1");
  PlayerView rows{&game, 0};
  PlayerView cols{&game, 1};
  std::vector<std::size_t> alive_rows(rows.own_count());
  std::vector<std::size_t> alive_cols(cols.own_count());
  for (std::size_t k = 0; k < alive_rows.size(); ++k) alive_rows[k] = k;
  for (std::size_t k = 0; k < alive_cols.size(); ++k) alive_cols[k] = k;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::size_t> keep_rows, keep_cols;
    for (std::size_t a : alive_rows) {
      if (!rows.dominated(a, alive_rows, alive_cols)) keep_rows.push_back(a);
    }
    for (std::size_t b : alive_cols) {
      if (!cols.dominated(b, alive_cols, alive_rows)) keep_cols.push_back(b);
    }
    changed = keep_rows.size() != alive_rows.size() || keep_cols.size() != alive_cols.size();
    alive_rows = std::move(keep_rows);
    alive_cols = std::move(keep_cols);
  }

  MixedResult result;
  result.max_support = max_support;
  result.exhaustive = alive_rows.size() <= max_support && alive_cols.size() <= max_support;
  result.surviving_rows = alive_rows;
  result.surviving_columns = alive_cols;
  std::size_t pairs = 0;
  for_each_subset(alive_cols, max_support, [&](const std::vector<std::size_t>& col_support) {
    std::vector<std::size_t> candidates;
    for (std::size_t a : alive_rows) {
      if (!rows.dominated(a, alive_rows, col_support)) candidates.push_back(a);
    }
    for_each_subset(candidates, max_support, [&](const std::vector<std::size_t>& row_support) {
      if (++pairs > pair_cap) {
        throw Error(ErrorCode::kSizeLimit, "support pair cap reached");
      }
      for (std::size_t b : col_support) {
        if (cols.dominated(b, alive_cols, row_support)) return;
      }
      auto column_mix = indifference_mix(rows, row_support, col_support);
      if (!column_mix) return;
      auto row_mix = indifference_mix(cols, col_support, row_support);
      if (!row_mix) return;
      MixedEquilibrium eq{std::move(row_mix->first), std::move(column_mix->first),
                          row_mix->second || column_mix->second};
      if (!is_nash_2p(game, eq.row, eq.column)) {
        throw std::logic_error("support enumeration produced a non-equilibrium");
      }
      result.degenerate = result.degenerate || eq.degenerate;
      result.equilibria.push_back(std::move(eq));
    });
  });
  return result;
}

bool is_nash_2p(const InducedGame& game, const std::vector<Rational>& row,
                const std::vector<Rational>& column) {
  for (std::size_t player = 0; player < 2; ++player) {
    PlayerView view{&game, player};
    const auto& own = player == 0 ? row : column;
    const auto& other = player == 0 ? column : row;
    std::vector<Rational> value(view.own_count(), 0);
    for (std::size_t a = 0; a < view.own_count(); ++a) {
      for (std::size_t b = 0; b < view.other_count(); ++b) {
        if (other[b] != 0) value[a] += other[b] * view.u(a, b);
      }
    }
    Rational best = *std::max_element(value.begin(), value.end());
    for (std::size_t a = 0; a < view.own_count(); ++a) {
      if (own[a] > 0 && value[a] != best) return false;
    }
  }
  return true;
}

}  // namespace evimpl
