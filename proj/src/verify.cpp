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

#include "evimpl/verify.hpp"

#include <map>

#include "evimpl/core_model.hpp"
#include "evimpl/cost_variation.hpp"
#include "evimpl/error.hpp"
#include "evimpl/renegotiation.hpp"

namespace evimpl {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kImplements: return "IMPLEMENTS";
    case Verdict::kCertifiedAllV: return "CERTIFIED_ALL_V";
    case Verdict::kFails: return "FAILS";
    case Verdict::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::kImplements:
    case Verdict::kCertifiedAllV: return 0;
    case Verdict::kFails: return 1;
    case Verdict::kInconclusive: return 2;
  }
  return 2;
}

bool implements(Verdict v) { return v == Verdict::kImplements || v == Verdict::kCertifiedAllV; }

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

UtilityProfile sample_utility_profile(std::mt19937_64& rng, std::size_t agents,
                                      std::size_t outcomes, std::size_t states) {
  UtilityProfile v(agents, outcomes, states);
  for (AgentIndex i = 0; i < agents; ++i) {
    for (OutcomeIndex a = 0; a < outcomes; ++a) {
      for (StateIndex s = 0; s < states; ++s) {
        auto q = static_cast<long>(uniform_below(rng, 128) + 1);
        auto p = static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(q)));
        Rational r(p, q);
        r.canonicalize();
        v.set(i, a, s, r);
      }
    }
  }
  return v;
}

namespace {

class Acceptability {
 public:
  Acceptability(const GameSkeleton& g, const Environment& env, const Mechanism& mech)
      : g_(g), target_(env.scf(g.truth)) {
    ok_message_.resize(g.num_agents());
    std::optional<CheapestSets> cheap;
    if (mech.info().requires_cheapest_evidence) cheap = cheapest_sets(env);
    for (AgentIndex i = 0; i < g.num_agents(); ++i) {
      for (const Message& m : g.messages[i]) {
        ok_message_[i].push_back(!cheap || cheap->is_cheapest(i, g.truth, m.article));
      }
    }
    for (const Lottery& l : g.lotteries) ok_lottery_.push_back(l.is_certain(target_));
    for (const auto& t : g.transfer_table) {
      bool zero = true;
      for (const Rational& x : t) zero = zero && x == 0;
      ok_transfer_.push_back(zero);
    }
  }

  bool operator()(std::size_t p) const {
    if (!ok_lottery_[g_.lottery_of[p]] || !ok_transfer_[g_.transfers_of[p]]) return false;
    for (AgentIndex i = 0; i < g_.num_agents(); ++i) {
      if (!ok_message_[i][(p / g_.strides[i]) % g_.messages[i].size()]) return false;
    }
    return true;
  }

 private:
  const GameSkeleton& g_;
  OutcomeIndex target_;
  std::vector<std::vector<bool>> ok_message_;
  std::vector<bool> ok_lottery_;
  std::vector<bool> ok_transfer_;
};

class SwingTable {
 public:
  explicit SwingTable(const GameSkeleton& g) : g_(g) {}
  const Rational& operator()(std::uint32_t a, std::uint32_t b) {
    auto key = std::minmax(a, b);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(key, g_.lotteries[a].total_variation(g_.lotteries[b])).first;
    }
    return it->second;
  }

 private:
  const GameSkeleton& g_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Rational> cache_;
};

std::size_t message_index(const GameSkeleton& g, AgentIndex i, const Message& m) {
  for (std::size_t k = 0; k < g.messages[i].size(); ++k) {
    if (g.messages[i][k] == m) return k;
  }
  throw std::logic_error("truthful message is not feasible");
}

}  // namespace

bool acceptable_profile(const GameSkeleton& g, const Environment& env, const Mechanism& mech,
                        std::size_t profile) {
  return Acceptability(g, env, mech)(profile);
}

MarginCertificate margin_certificate(const GameSkeleton& g, const Environment& env,
                                     const Mechanism& mech) {
  Acceptability acceptable(g, env, mech);
  SwingTable swing(g);
  MarginCertificate cert;
  auto net = [&](std::size_t p, AgentIndex i, std::size_t k) {
    return g.transfers(p)[i] - g.message_cost[i][k];
  };
  for (std::size_t p = 0; p < g.num_profiles(); ++p) {
    if (acceptable(p)) continue;
    std::optional<CertificateEntry> found;
    for (AgentIndex i = 0; i < g.num_agents() && !found; ++i) {
      const std::size_t current = (p / g.strides[i]) % g.messages[i].size();
      const Rational base = net(p, i, current);
      for (std::size_t k = 0; k < g.messages[i].size(); ++k) {
        if (k == current) continue;
        const std::size_t q = g.deviate(p, i, k);
        Rational gain = net(q, i, k) - base;
        if (gain <= 0) continue;
        const Rational& loss = swing(g.lottery_of[p], g.lottery_of[q]);
        if (gain >= loss) {
          found = CertificateEntry{p, i, k, gain, loss};
          break;
        }
      }
    }
    if (!found) {
      cert.uncovered = p;
      break;
    }
    cert.entries.push_back(std::move(*found));
  }

  const auto truthful = mech.truthful_profile(g.truth);
  std::vector<std::size_t> choice;
  for (AgentIndex i = 0; i < g.num_agents(); ++i) {
    choice.push_back(message_index(g, i, truthful[i]));
  }
  const std::size_t t = g.encode(choice);
  cert.truthful_robust = true;
  for (AgentIndex i = 0; i < g.num_agents() && cert.truthful_robust; ++i) {
    const Rational base = net(t, i, choice[i]);
    for (std::size_t k = 0; k < g.messages[i].size(); ++k) {
      if (k == choice[i]) continue;
      const std::size_t q = g.deviate(t, i, k);
      if (net(q, i, k) - base + swing(g.lottery_of[t], g.lottery_of[q]) > 0) {
        cert.truthful_robust = false;
        break;
      }
    }
  }
  return cert;
}

bool same_game(const GameSkeleton& a, const GameSkeleton& b) {
  if (a.messages != b.messages || a.message_cost != b.message_cost ||
      a.num_profiles() != b.num_profiles()) {
    return false;
  }
  for (std::size_t p = 0; p < a.num_profiles(); ++p) {
    if (!(a.outcome(p) == b.outcome(p)) || a.transfers(p) != b.transfers(p)) return false;
  }
  return true;
}

namespace {

struct NamedUtility {
  std::string name;
  UtilityProfile v;
};

std::vector<NamedUtility> utilities_for(const Mechanism& mech, const Environment& env,
                                        StateIndex s, const VerifyConfig& config) {
  std::vector<NamedUtility> out;
  const std::size_t agents = env.num_agents();
  const std::size_t outcomes = env.num_outcomes();
  const std::size_t states = env.num_states();
  out.push_back({"constant", UtilityProfile(agents, outcomes, states)});
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(s)};
  std::mt19937_64 rng(seq);
  for (std::size_t k = 0; k < config.samples; ++k) {
    out.push_back({"sample:" + std::to_string(k),
                   sample_utility_profile(rng, agents, outcomes, states)});
  }
  if (mech.info().variant == "rp" && agents == 2 && env.all_hard()) {
    for (const PairReport& pair : check_rp_conditions(env).pairs) {
      if (pair_passes(pair.verdict)) continue;
      out.push_back({"adversarial:" + env.state_label(pair.at) + "," +
                         env.state_label(pair.claimed),
                     UtilityProfile::state_independent(
                         states, build_adversarial_profile(env, pair, config.eta))});
    }
  }
  return out;
}

StateReport verify_state(const Mechanism& mech, const Environment& env,
                         const GameSkeleton& g, const VerifyConfig& config) {
  StateReport r;
  r.state = g.truth;
  Acceptability acceptable(g, env, mech);
  bool inconclusive = false;
  const bool two_players = g.num_agents() == 2;
  r.mixed_checked = two_players && config.mixed;
  if (!two_players && config.mixed) {
    r.notes.push_back("mixed equilibria are only enumerated for two agents; pure only");
  }

  for (const NamedUtility& u : utilities_for(mech, env, g.truth, config)) {
    ++r.utility_profiles;
    InducedGame game = induce(g, u.v);
    auto pure = pure_nash(game, config.profile_cap);
    r.pure_equilibria += pure.size();
    for (std::size_t p : pure) {
      if (!acceptable(p)) {
        EquilibriumWitness w{u.name, {}, p};
        for (std::size_t c : g.decode(p)) w.strategies.push_back({{c, Rational(1)}});
        r.witness = std::move(w);
        break;
      }
    }
    if (r.witness) break;
    bool found = !pure.empty();
    if (r.mixed_checked) {
      try {
        MixedResult mixed = mixed_nash_2p(game, config.max_support);
        r.mixed_equilibria += mixed.equilibria.size();
        r.mixed_exhaustive = r.mixed_exhaustive && mixed.exhaustive;
        r.degenerate = r.degenerate || mixed.degenerate;
        found = found || !mixed.equilibria.empty();
        for (const MixedEquilibrium& eq : mixed.equilibria) {
          for (std::size_t a : eq.row_support()) {
            for (std::size_t b : eq.column_support()) {
              std::size_t p = a * g.strides[0] + b * g.strides[1];
              if (acceptable(p)) continue;
              EquilibriumWitness w{u.name, {{}, {}}, p};
              for (std::size_t k : eq.row_support()) w.strategies[0].push_back({k, eq.row[k]});
              for (std::size_t k : eq.column_support()) {
                w.strategies[1].push_back({k, eq.column[k]});
              }
              r.witness = std::move(w);
              break;
            }
            if (r.witness) break;
          }
          if (r.witness) break;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSizeLimit) throw;
        inconclusive = true;
        r.notes.push_back("mixed search for utility " + u.name + ": " + e.what());
      }
    }
    if (r.witness) break;
    if (!found) {
      inconclusive = true;
      r.notes.push_back("no equilibrium found for utility " + u.name);
    }
  }

  if (r.witness) {
    r.verdict = Verdict::kFails;
  } else if (inconclusive) {
    r.verdict = Verdict::kInconclusive;
  } else {
    r.verdict = Verdict::kImplements;
    if (config.certify) {
      r.certificate = margin_certificate(g, env, mech);
      if (r.certificate->complete() && r.certificate->truthful_robust) {
        r.verdict = Verdict::kCertifiedAllV;
      }
    }
  }
  if (r.mixed_checked && !r.mixed_exhaustive) {
    r.notes.push_back("mixed search bounded to supports of size " +
                      std::to_string(config.max_support));
  }
  return r;
}

}  // namespace

VerificationReport verify_implementation(const Mechanism& mech, const Environment& env,
                                         const std::vector<StateIndex>& states,
                                         const VerifyConfig& config) {
  VerificationReport report;
  report.variant = mech.info().variant;
  report.seed = config.seed;
  report.samples = config.samples;
  std::vector<std::optional<GameSkeleton>> skeletons;
  for (StateIndex s : states) {
    try {
      skeletons.push_back(build_skeleton(mech, env, s, config.profile_cap));
      report.states.push_back(verify_state(mech, env, *skeletons.back(), config));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSizeLimit) throw;
      skeletons.emplace_back();
      StateReport r;
      r.state = s;
      r.verdict = Verdict::kInconclusive;
      r.notes.push_back(e.what());
      report.states.push_back(std::move(r));
    }
  }
  for (std::size_t x = 0; x < states.size() && !report.identical_games; ++x) {
    for (std::size_t y = x + 1; y < states.size(); ++y) {
      if (!skeletons[x] || !skeletons[y]) continue;
      if (env.scf(states[x]) == env.scf(states[y])) continue;
      if (!equivalent(env, states[x], states[y])) continue;
      if (same_game(*skeletons[x], *skeletons[y])) {
        report.identical_games = CrossStateWitness{states[x], states[y]};
        break;
      }
    }
  }

  bool any_fail = report.identical_games.has_value();
  bool any_inconclusive = false;
  bool all_certified = !report.states.empty();
  for (const StateReport& r : report.states) {
    any_fail = any_fail || r.verdict == Verdict::kFails;
    any_inconclusive = any_inconclusive || r.verdict == Verdict::kInconclusive;
    all_certified = all_certified && r.verdict == Verdict::kCertifiedAllV;
  }
  if (any_fail) {
    report.verdict = Verdict::kFails;
  } else if (any_inconclusive) {
    report.verdict = Verdict::kInconclusive;
  } else {
    report.verdict = all_certified ? Verdict::kCertifiedAllV : Verdict::kImplements;
  }
  return report;
}

}  // namespace evimpl
