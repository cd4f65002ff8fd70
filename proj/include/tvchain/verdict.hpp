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

// Exact P-property deciders and the audit that every condition of one index
// returns the same verdict.

#ifndef TVCHAIN_VERDICT_HPP_
#define TVCHAIN_VERDICT_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvchain/chain.hpp"
#include "tvchain/error.hpp"
#include "tvchain/report.hpp"

namespace tvchain {

struct PReports {
  ConditionReport p1;
  ConditionReport p2;
  ConditionReport p3;
  ConditionReport p2_tilde;  // P3 and uniqueness of the ipm
};

// Limits are the exact skeleton limits. Throws kNotInvariant.
PReports decide_P(const Kernel& kernel, const Distribution& mu);

struct UniquenessResult {
  std::size_t ipm_count = 0;
  // False when P1 or P2 holds although several ipms exist.
  bool consistent = true;
  std::optional<std::pair<Distribution, Distribution>> contradiction;
};

UniquenessResult uniqueness_check(const Kernel& kernel, const Distribution& mu);

struct AuditViolationEntry {
  Condition lhs;
  Condition rhs;
  std::string relation;  // "<=>" or "=>"
  std::string fingerprint;
};

struct IndexAudit {
  Index index = Index::k1;
  std::vector<Condition> conditions;
  // implication[a][b]: holds(a) => holds(b) was observed true.
  std::vector<std::vector<bool>> implication;
};

struct EquivalenceAudit {
  std::string fingerprint;
  std::vector<ConditionReport> reports;
  std::vector<IndexAudit> indices;
  std::vector<AuditViolationEntry> violations;
  std::size_t ipm_count = 0;

  const ConditionReport& report(Condition condition) const;
  bool clean() const { return violations.empty(); }
};

// Stable hex digest of the kernel's labels and probabilities.
std::string fingerprint(const Kernel& kernel);

// Runs every condition checker and asserts the index-wise equivalences, the
// one-directional chains (C1' => C̊1 => G1 => A1, P1 => Ĉ1 => C1 => A1,
// C2' => C2 => G2 => A2, P3 => A3' => A3, C3' => C3 => G3 => A3,
// A1 => B1, A2 => B2, A3' => B3, P1 => P2 => P3) and ipm uniqueness under
// P2. Throws kNotInvariant.
EquivalenceAudit cross_check(const Kernel& kernel, const Distribution& mu);

class AuditViolation : public Error {
 public:
  explicit AuditViolation(EquivalenceAudit audit);
  const EquivalenceAudit& audit() const { return audit_; }

 private:
  EquivalenceAudit audit_;
};

// Throws AuditViolation unless the audit is clean.
void require_clean(const EquivalenceAudit& audit);

nlohmann::json ToJson(const EquivalenceAudit& audit);

}  // namespace tvchain

#endif  // TVCHAIN_VERDICT_HPP_
