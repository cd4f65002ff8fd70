// Copyright 2026 The tvchain Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tvchain/error.hpp"

#include <sstream>

namespace tvchain {

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kRowNotStochastic: return "RowNotStochastic";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kSpaceMismatch: return "SpaceMismatch";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kNotInvariant: return "NotInvariant";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kNotIrreducible: return "NotIrreducible";
    case ErrorCode::kSearchExhausted: return "SearchExhausted";
    case ErrorCode::kSupportTooLarge: return "SupportTooLarge";
    case ErrorCode::kLpInfeasible: return "LPInfeasible";
    case ErrorCode::kMarginalMismatch: return "MarginalMismatch";
    case ErrorCode::kUnsupportedEndpoint: return "UnsupportedEndpoint";
    case ErrorCode::kUnrealizableParams: return "UnrealizableParams";
    case ErrorCode::kTruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kAuditViolation: return "AuditViolation";
  }
  return "Unknown";
}

namespace {

std::string RowMessage(std::size_t row, double sum) {
  std::ostringstream os;
  os.precision(17);
  os << "row " << row << " sums to " << sum;
  return os.str();
}

}  // namespace

RowNotStochastic::RowNotStochastic(std::size_t row, double sum)
    : Error(ErrorCode::kRowNotStochastic, RowMessage(row, sum)),
      row_(row),
      sum_(sum) {}

NumericalFailure::NumericalFailure(const std::string& context, double residual)
    : Error(ErrorCode::kNumericalFailure,
            context + ": residual " + std::to_string(residual)),
      residual_(residual) {}

SearchExhausted::SearchExhausted(std::size_t m_max)
    : Error(ErrorCode::kSearchExhausted,
            "no small set found with m <= " + std::to_string(m_max)),
      m_max_(m_max) {}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(ErrorCode::kParseError,
            line == 0 ? message
                      : "line " + std::to_string(line) + ": " + message),
      line_(line) {}

}  // namespace tvchain
