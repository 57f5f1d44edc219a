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

#ifndef EVIMPL_MECH_HARD_HPP_
#define EVIMPL_MECH_HARD_HPP_

#include <optional>

#include "evimpl/core_model.hpp"
#include "evimpl/mechanism.hpp"

namespace evimpl {

// Magnitudes of the four direct-mechanism rules: reward/fine per refutation,
// fine for an unsupported claim, fine per disagreeing tightest set, and the
// scale of the evidence-size fine (fine = evidence_size * |E_i| / |S|).
struct Penalties {
  Rational refutation;
  Rational unsupported_claim;
  Rational disagreement;
  Rational evidence_size;
};

// Penalties for I agents with unit outcome stakes: 2I+1, I, 1, 1.
Penalties standard_penalties(std::size_t agents);

// Outcome is the first agent's claim; transfers follow the four rules.
// With `balanced`, every fine is handed to other agents so transfers sum
// to zero.
class DirectEvidenceMechanism : public Mechanism {
 public:
  DirectEvidenceMechanism(const Environment& env, Penalties penalties,
                          bool balanced, MechanismInfo info);

  const Penalties& penalties() const { return penalties_; }
  // Rules applied to (claim, article) only; rounds are ignored.
  Evaluation evaluate_direct(std::span<const Message> profile) const;

 protected:
  Evaluation evaluate_checked(std::span<const Message> profile) const override;
  ArticleIndex designated_article(AgentIndex i, StateIndex s) const override;

 private:
  Penalties penalties_;
  bool balanced_;
  std::size_t num_states_;
  std::vector<OutcomeIndex> scf_;
  TightTable tight_;
  std::vector<std::vector<StateSet>> masks_;  // [agent][article]
  std::vector<std::vector<std::optional<ArticleIndex>>> tight_article_;
};

MechanismPtr synthesize_theorem1(const Environment& env, Gate gate = Gate::kEnforce);
MechanismPtr synthesize_budget_balanced(const Environment& env);

struct SmallTransferParams {
  std::size_t rounds = 0;  // K
  Rational epsilon;        // weight of the direct mechanism
  Rational alpha;          // consistency fine
  Rational beta;           // first-deviation fine
  Rational gamma;          // lone-deviation fine per round
  Rational delta;
  Rational delta_bar;      // transfer bound
  Rational direct_bound;   // largest |transfer| of the unscaled direct rules
  Rational transfer_bound() const { return epsilon * direct_bound + alpha + beta + rounds * gamma; }
};

struct SmallTransferOptions {
  std::optional<std::size_t> fixed_rounds;
  std::size_t max_rounds = 1'000'000;
};

// Smallest K meeting gamma > 0, beta > 1/K + gamma, alpha > beta and
// alpha + beta + K gamma < delta_bar, with delta = delta_bar / 2. Epsilon is
// then chosen so the scaled direct transfers fit in the remaining slack.
SmallTransferParams solve_small_transfer_params(const Rational& delta_bar,
                                                std::size_t agents,
                                                const SmallTransferOptions& options = {});
bool small_transfer_params_valid(const SmallTransferParams& p);

MechanismPtr synthesize_small_transfers(const Environment& env, const Rational& delta_bar,
                                        const SmallTransferOptions& options = {});

// Common precondition check for the hard-evidence synthesizers.
void require_direct_preconditions(const Environment& env);

}  // namespace evimpl

#endif  // EVIMPL_MECH_HARD_HPP_
