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

#ifndef EVIMPL_CORPUS_HPP_
#define EVIMPL_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "evimpl/environment.hpp"

namespace evimpl {

inline constexpr std::uint64_t kCorpusSeed = 20260;
inline constexpr std::size_t kRandomFixtures = 50;

// Two states; agent 1 can prove s2 at s2, agent 2 holds only the full set.
Environment env_a();
// Same evidence for everyone everywhere, two distinct outcomes.
Environment env_b();
// Four states, agent 1 with a nested costly structure; {s4} costs 1/10.
Environment env_c();
// Buyer/seller: only the buyer can prove the high state.
Environment env_d();
// As env_d, plus the buyer can prove the low state.
Environment env_d_modified();
// Two opaque articles whose costs swap between the two states.
Environment env_e();
// Three agents with hard evidence.
Environment env_3agents();
// env_a with a cost table where agent 1's proof of s2 costs 1/5.
Environment env_costly();
// Both agents can refute s2 at s1 and nobody can refute s1 at s2.
Environment env_rp_both();

// Random axiom-valid hard-evidence environment with a measurable scf.
// `normalize` closes every endowment under intersection.
Environment random_environment(std::uint64_t seed, bool normalize);
bool random_fixture_is_normalized(std::size_t index);

// Random two-agent environment with opaque articles and a cost table drawn
// from {0, 1/4, 1/2, 3/4, inf}; every agent can afford something everywhere.
Environment random_costly_environment(std::uint64_t seed);

struct Fixture {
  std::string name;
  Environment env;
};

std::vector<Fixture> named_fixtures();
std::vector<Fixture> random_fixtures(std::size_t count = kRandomFixtures,
                                     std::uint64_t seed = kCorpusSeed);
std::vector<Fixture> random_costly_fixtures(std::size_t count = 20,
                                            std::uint64_t seed = kCorpusSeed);
std::vector<Fixture> corpus();

// Writes <name>.json for every corpus fixture; returns the paths written.
std::vector<std::filesystem::path> write_corpus(const std::filesystem::path& dir);

}  // namespace evimpl

#endif  // EVIMPL_CORPUS_HPP_
