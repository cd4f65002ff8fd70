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

#ifndef TVCHAIN_ERROR_HPP_
#define TVCHAIN_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tvchain {

enum class ErrorCode {
  kInvalidArgument,
  kRowNotStochastic,
  kIndexOutOfRange,
  kSpaceMismatch,
  kNumericalFailure,
  kNotInvariant,
  kPreconditionViolated,
  kNotIrreducible,
  kSearchExhausted,
  kSupportTooLarge,
  kLpInfeasible,
  kMarginalMismatch,
  kUnsupportedEndpoint,
  kUnrealizableParams,
  kTruncationTooSmall,
  kParseError,
  kAuditViolation,
};

const char* ToString(ErrorCode code);

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class RowNotStochastic : public Error {
 public:
  RowNotStochastic(std::size_t row, double sum);

  std::size_t row() const noexcept { return row_; }
  double sum() const noexcept { return sum_; }

 private:
  std::size_t row_;
  double sum_;
};

class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& context, double residual);

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class SearchExhausted : public Error {
 public:
  explicit SearchExhausted(std::size_t m_max);

  std::size_t m_max() const noexcept { return m_max_; }

 private:
  std::size_t m_max_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);

  // 1-based line of the offending input; 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tvchain

#endif  // TVCHAIN_ERROR_HPP_
