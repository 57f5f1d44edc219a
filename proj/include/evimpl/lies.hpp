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

#ifndef EVIMPL_LIES_HPP_
#define EVIMPL_LIES_HPP_

#include <string>
#include <vector>

#include "evimpl/environment.hpp"

namespace evimpl {

struct LiePartition {
  StateIndex truth = 0;
  std::vector<StateSet> refutable;        // per agent
  std::vector<StateSet> other_refutable;  // per agent
  std::vector<StateSet> self_refutable;   // per agent
  StateSet nonrefutable;
  // States equivalent to the truth; they land in the nonrefutable set.
  StateSet unseparated;
};

// States other than s* that some article agent i holds at s* excludes.
StateSet refutable_lies(const Environment& env, AgentIndex i, StateIndex truth);

LiePartition classify(const Environment& env, StateIndex truth);

// Every article agent i holds at s* is also held at s'. Precondition: s' is
// not refutable by i at s*.
bool check_observation_1(const Environment& env, StateIndex truth,
                         StateIndex lie, AgentIndex i);

struct RefutingEvidence {
  AgentIndex agent;
  ArticleIndex article;
};

// Some agent holds, at the nonrefutable lie s', an article excluding s*.
RefutingEvidence check_observation_2(const Environment& env, StateIndex truth,
                                     StateIndex lie);

}  // namespace evimpl

#endif  // EVIMPL_LIES_HPP_
