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

#include "evimpl/rational.hpp"

#include <cctype>

#include "evimpl/error.hpp"

namespace evimpl {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kUsage: return "UsageError";
    case ErrorCode::kEmptyEndowment: return "EmptyEndowment";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kWitnessMissing: return "WitnessMissing";
    case ErrorCode::kNotMeasurable: return "NotMeasurable";
    case ErrorCode::kNotNormal: return "NotNormal";
    case ErrorCode::kNotHardEvidence: return "NotHardEvidence";
    case ErrorCode::kTooFewAgents: return "TooFewAgents";
    case ErrorCode::kTooManyAgents: return "TooManyAgents";
    case ErrorCode::kNotTwoAgents: return "NotTwoAgents";
    case ErrorCode::kInfeasibleBound: return "InfeasibleBound";
    case ErrorCode::kBadEpsilon: return "BadEpsilon";
    case ErrorCode::kCostExceedsBound: return "CostExceedsBound";
    case ErrorCode::kMissingCostBound: return "MissingCostBound";
    case ErrorCode::kMissingCosts: return "MissingCosts";
    case ErrorCode::kNoFiniteCost: return "NoFiniteCost";
    case ErrorCode::kNotEvidenceMonotonic: return "NotEvidenceMonotonic";
    case ErrorCode::kNotEMStar: return "NotEMStar";
    case ErrorCode::kConditionsFail: return "ConditionsFail";
    case ErrorCode::kDomainMismatch: return "DomainMismatch";
    case ErrorCode::kMessageOutOfDomain: return "MessageOutOfDomain";
    case ErrorCode::kSizeLimit: return "SizeLimit";
    case ErrorCode::kIo: return "IoError";
  }
  return "Error";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  std::string_view num = body;
  std::string_view den = "1";
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    num = body.substr(0, slash);
    den = body.substr(slash + 1);
  }
  if (!all_digits(num) || !all_digits(den)) {
    throw Error(ErrorCode::kParse,
                "not a rational \"" + std::string(text) + "\" (expected p/q)");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) {
    throw Error(ErrorCode::kParse,
                "zero denominator in \"" + std::string(text) + "\"");
  }
  Rational r(n, d);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

const Rational& Cost::value() const {
  if (!value_) throw std::logic_error("value() of an infinite cost");
  return *value_;
}

bool operator==(const Cost& a, const Cost& b) {
  if (a.is_finite() != b.is_finite()) return false;
  return !a.is_finite() || a.value() == b.value();
}

std::strong_ordering operator<=>(const Cost& a, const Cost& b) {
  if (!a.is_finite() || !b.is_finite()) {
    if (a.is_finite() == b.is_finite()) return std::strong_ordering::equal;
    return a.is_finite() ? std::strong_ordering::less
                         : std::strong_ordering::greater;
  }
  int c = cmp(a.value(), b.value());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater
                        : std::strong_ordering::equal);
}

Cost parse_cost(std::string_view text) {
  if (text == "inf") return Cost::infinite();
  Rational r = parse_rational(text);
  if (r < 0) {
    throw Error(ErrorCode::kParse, "negative cost \"" + std::string(text) + "\"");
  }
  return Cost(r);
}

std::string to_string(const Cost& c) {
  return c.is_finite() ? to_string(c.value()) : "inf";
}

bool operator==(const ExtRational& a, const ExtRational& b) {
  return a.kind == b.kind && (a.kind != ExtRational::Kind::kFinite ||
                              a.value == b.value);
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  if (a.kind != b.kind) return a.kind <=> b.kind;
  if (a.kind != ExtRational::Kind::kFinite) return std::strong_ordering::equal;
  int c = cmp(a.value, b.value);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater
                        : std::strong_ordering::equal);
}

ExtRational difference(const Cost& a, const Cost& b) {
  if (!a.is_finite() && !b.is_finite()) {
    throw std::logic_error("inf - inf in cost difference");
  }
  if (!a.is_finite()) return ExtRational::pos_inf();
  if (!b.is_finite()) return ExtRational::neg_inf();
  return ExtRational::finite(a.value() - b.value());
}

ExtRational difference(const ExtRational& a, const ExtRational& b) {
  using K = ExtRational::Kind;
  if (a.kind != K::kFinite && a.kind == b.kind) {
    throw std::logic_error("inf - inf in extended difference");
  }
  if (a.kind == K::kPosInf || b.kind == K::kNegInf) return ExtRational::pos_inf();
  if (a.kind == K::kNegInf || b.kind == K::kPosInf) return ExtRational::neg_inf();
  return ExtRational::finite(a.value - b.value);
}

std::string to_string(const ExtRational& x) {
  switch (x.kind) {
    case ExtRational::Kind::kNegInf: return "-inf";
    case ExtRational::Kind::kPosInf: return "inf";
    default: return to_string(x.value);
  }
}

}  // namespace evimpl
