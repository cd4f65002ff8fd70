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

#ifndef TVCHAIN_REPORT_HPP_
#define TVCHAIN_REPORT_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace tvchain {

// Convergence properties and the assumption families whose index-i members
// are equivalent to property P_i.
enum class Condition {
  kP1, kP2, kP3, kP2Tilde,
  kA1, kA2, kA3, kA3Prime,
  kB1, kB2, kB3,
  kC1, kC1Hat, kC1Ring, kC1Prime, kC2, kC2Prime, kC3, kC3Prime,
  kG1, kG2, kG3,
};

std::string_view ToString(Condition condition);
std::optional<Condition> ConditionFromString(std::string_view name);

// Index 1: convergence from every state; 2: μ-a.e. convergence plus limits
// below 1 everywhere; 3: μ-a.e. convergence.
enum class Index { k1 = 1, k2 = 2, k3 = 3 };

// Throws kInvalidArgument outside 1..3.
Index IndexFromInt(int index);

enum class Method {
  kStructural,    // decided from class/period structure or an equivalence
  kDefinitional,  // decided by evaluating the defining quantities
  kBothAgree,     // both routes ran and returned the same boolean
};

std::string_view ToString(Method method);

struct ConditionReport {
  Condition condition;
  bool holds = false;
  Method method = Method::kStructural;
  std::string summary;
  nlohmann::json witness = nlohmann::json::object();
};

nlohmann::json ToJson(const ConditionReport& report);

}  // namespace tvchain

#endif  // TVCHAIN_REPORT_HPP_
