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

#ifndef EVIMPL_VERIFY_HPP_
#define EVIMPL_VERIFY_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "evimpl/environment.hpp"
#include "evimpl/game.hpp"
#include "evimpl/mechanism.hpp"

namespace evimpl {

enum class Verdict { kImplements, kCertifiedAllV, kFails, kInconclusive };

std::string verdict_name(Verdict v);
int exit_code(Verdict v);
bool implements(Verdict v);

struct VerifyConfig {
  std::size_t samples = 20;
  std::uint64_t seed = 1;
  std::size_t max_support = 3;
  std::size_t profile_cap = kDefaultProfileCap;
  bool mixed = true;    // two-agent games only
  bool certify = true;  // attempt the all-utilities certificate
  Rational eta = Rational(1, 10);
};

// Uniform integer in [0, bound) from a 64-bit engine, by rejection.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

// Each entry p/q with q uniform in 1..128 and p uniform in 0..q-1.
UtilityProfile sample_utility_profile(std::mt19937_64& rng, std::size_t agents,
                                      std::size_t outcomes, std::size_t states);

// A profile yields the target outcome for sure, with zero transfers and, when
// the mechanism asks for it, cheapest evidence.
bool acceptable_profile(const GameSkeleton& g, const Environment& env, const Mechanism& mech,
                        std::size_t profile);

struct CertificateEntry {
  std::size_t profile = 0;
  AgentIndex agent = 0;
  std::size_t deviation = 0;   // the agent's new message index
  Rational gain;               // change in transfer minus cost
  Rational swing;              // largest possible outcome-value loss
};

struct MarginCertificate {
  std::vector<CertificateEntry> entries;  // one per unacceptable profile
  std::optional<std::size_t> uncovered;   // first unacceptable profile without one
  bool truthful_robust = false;           // truth is an equilibrium for every v
  bool complete() const { return !uncovered.has_value(); }
};

MarginCertificate margin_certificate(const GameSkeleton& g, const Environment& env,
                                     const Mechanism& mech);

struct EquilibriumWitness {
  std::string utility;  // "constant", "sample:<k>" or "adversarial:<s>,<s'>"
  // Per agent: message index and probability.
  std::vector<std::vector<std::pair<std::size_t, Rational>>> strategies;
  std::size_t bad_profile = 0;  // a support profile that is not acceptable
};

struct StateReport {
  StateIndex state = 0;
  Verdict verdict = Verdict::kImplements;
  std::size_t utility_profiles = 0;
  std::size_t pure_equilibria = 0;
  std::size_t mixed_equilibria = 0;
  bool mixed_checked = false;
  bool mixed_exhaustive = true;
  bool degenerate = false;
  std::optional<EquilibriumWitness> witness;
  std::optional<MarginCertificate> certificate;
  std::vector<std::string> notes;
};

struct CrossStateWitness {
  StateIndex first = 0;
  StateIndex second = 0;
};

struct VerificationReport {
  std::string variant;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<StateReport> states;
  std::optional<CrossStateWitness> identical_games;
  Verdict verdict = Verdict::kImplements;
};

// True when the two skeletons describe the same game up to the truth label.
bool same_game(const GameSkeleton& a, const GameSkeleton& b);

VerificationReport verify_implementation(const Mechanism& mech, const Environment& env,
                                         const std::vector<StateIndex>& states,
                                         const VerifyConfig& config = {});

}  // namespace evimpl

#endif  // EVIMPL_VERIFY_HPP_
