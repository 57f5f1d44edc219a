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

#ifndef EVIMPL_ERROR_HPP_
#define EVIMPL_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace evimpl {

enum class ErrorCode {
  kParse,
  kUsage,
  kEmptyEndowment,
  kPreconditionViolated,
  kWitnessMissing,
  kNotMeasurable,
  kNotNormal,
  kNotHardEvidence,
  kTooFewAgents,
  kTooManyAgents,
  kNotTwoAgents,
  kInfeasibleBound,
  kBadEpsilon,
  kCostExceedsBound,
  kMissingCostBound,
  kMissingCosts,
  kNoFiniteCost,
  kNotEvidenceMonotonic,
  kNotEMStar,
  kConditionsFail,
  kDomainMismatch,
  kMessageOutOfDomain,
  kSizeLimit,
  kIo,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace evimpl

#endif  // EVIMPL_ERROR_HPP_
