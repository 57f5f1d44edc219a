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

#ifndef EVIMPL_CLI_HPP_
#define EVIMPL_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "evimpl/environment.hpp"
#include "evimpl/mechanism.hpp"

namespace evimpl {

inline constexpr int kExitUsage = 64;
inline constexpr int kExitParse = 65;

struct VariantOptions {
  Rational epsilon = Rational(1, 2);
  std::optional<std::size_t> rounds;  // small-transfer K override
  Gate gate = Gate::kEnforce;
};

// Tags: theorem1, balanced, small:<dbar>, theorem3, theorem4, theorem4multi,
// emstar:<cap>, rp.
MechanismPtr build_variant(const std::string& tag, const Environment& env,
                           const VariantOptions& options = {});

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evimpl

#endif  // EVIMPL_CLI_HPP_
