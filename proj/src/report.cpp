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

#include "tvchain/report.hpp"

#include <array>
#include <utility>

#include "tvchain/error.hpp"

namespace tvchain {
namespace {

constexpr std::array<std::pair<Condition, std::string_view>, 22> kNames{{
    {Condition::kP1, "P1"},
    {Condition::kP2, "P2"},
    {Condition::kP3, "P3"},
    {Condition::kP2Tilde, "P2~"},
    {Condition::kA1, "A1"},
    {Condition::kA2, "A2"},
    {Condition::kA3, "A3"},
    {Condition::kA3Prime, "A3'"},
    {Condition::kB1, "B1"},
    {Condition::kB2, "B2"},
    {Condition::kB3, "B3"},
    {Condition::kC1, "C1"},
    {Condition::kC1Hat, "C1^"},
    {Condition::kC1Ring, "C1o"},
    {Condition::kC1Prime, "C1'"},
    {Condition::kC2, "C2"},
    {Condition::kC2Prime, "C2'"},
    {Condition::kC3, "C3"},
    {Condition::kC3Prime, "C3'"},
    {Condition::kG1, "G1"},
    {Condition::kG2, "G2"},
    {Condition::kG3, "G3"},
}};

}  // namespace

std::string_view ToString(Condition condition) {
  for (const auto& [c, name] : kNames) {
    if (c == condition) return name;
  }
  return "?";
}

std::optional<Condition> ConditionFromString(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

Index IndexFromInt(int index) {
  if (index < 1 || index > 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "condition index must be 1, 2 or 3");
  }
  return static_cast<Index>(index);
}

std::string_view ToString(Method method) {
  switch (method) {
    case Method::kStructural: return "structural";
    case Method::kDefinitional: return "definitional";
    case Method::kBothAgree: return "both-agree";
  }
  return "?";
}

nlohmann::json ToJson(const ConditionReport& report) {
  return {{"condition", std::string(ToString(report.condition))},
          {"holds", report.holds},
          {"method", std::string(ToString(report.method))},
          {"summary", report.summary},
          {"witness", report.witness}};
}

}  // namespace tvchain
