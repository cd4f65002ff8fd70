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

#include "tvchain/verdict.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>

#include "tvchain/coupling.hpp"
#include "tvchain/equivalence.hpp"
#include "tvchain/structure.hpp"

namespace tvchain {
namespace {

constexpr double kLimitTolerance = 1e-7;
constexpr std::size_t kListedLimitStates = 16;

nlohmann::json LimitsJson(const Kernel& kernel, const std::vector<double>& lim) {
  nlohmann::json out = nlohmann::json::object();
  for (StateId x = 0; x < lim.size(); ++x) out[kernel.space().label(x)] = lim[x];
  return out;
}

}  // namespace

PReports decide_P(const Kernel& kernel, const Distribution& mu) {
  require_invariant(kernel, mu);
  const SkeletonLimits limits = skeleton_limits(kernel);
  const std::size_t n = kernel.size();
  std::vector<double> lim(n);
  for (StateId x = 0; x < n; ++x) lim[x] = tv_distance(limits.rho[x], mu);

  std::optional<StateId> not_zero, charged_not_zero, at_one;
  for (StateId x = 0; x < n; ++x) {
    if (lim[x] > kLimitTolerance) {
      if (!not_zero) not_zero = x;
      if (mu.charges(x) && !charged_not_zero) charged_not_zero = x;
    }
    if (lim[x] >= 1.0 - kLimitTolerance && !at_one) at_one = x;
  }
  nlohmann::json base;
  base["skeleton_step"] = limits.step;
  if (n <= kListedLimitStates) base["limits"] = LimitsJson(kernel, lim);
  auto failing = [&](nlohmann::json w, std::optional<StateId> x) {
    if (x) {
      w["state"] = kernel.space().label(*x);
      w["limit"] = lim[*x];
    }
    return w;
  };
  const auto& label = [&](StateId x) { return kernel.space().label(x); };

  PReports out;
  out.p3 = {Condition::kP3, !charged_not_zero, Method::kStructural, "",
            failing(base, charged_not_zero)};
  out.p3.summary = out.p3.holds
                       ? "P_n(x, .) -> μ for μ-almost every x"
                       : "lim d(P_n(" + label(*charged_not_zero) + ", .), μ) = " +
                             std::to_string(lim[*charged_not_zero]);
  out.p2 = {Condition::kP2, out.p3.holds && !at_one, Method::kStructural, "",
            failing(base, at_one ? at_one : charged_not_zero)};
  out.p2.summary = !out.p3.holds ? "P3 fails"
                   : at_one ? "lim d(P_n(" + label(*at_one) + ", .), μ) = 1"
                            : "μ-a.e. convergence and every limit below 1";
  out.p1 = {Condition::kP1, !not_zero, Method::kStructural, "",
            failing(base, not_zero)};
  out.p1.summary = out.p1.holds
                       ? "P_n(x, .) -> μ for every x"
                       : "lim d(P_n(" + label(*not_zero) + ", .), μ) = " +
                             std::to_string(lim[*not_zero]);
  const std::size_t ipms = invariant_measures(kernel).size();
  nlohmann::json tw;
  tw["ipm_count"] = ipms;
  out.p2_tilde = {Condition::kP2Tilde, out.p3.holds && ipms == 1,
                  Method::kStructural, "", tw};
  out.p2_tilde.summary = !out.p3.holds ? "P3 fails"
                         : ipms == 1   ? "P3 with a unique ipm"
                                       : std::to_string(ipms) + " extremal ipms";
  return out;
}

UniquenessResult uniqueness_check(const Kernel& kernel, const Distribution& mu) {
  const std::vector<Distribution> ipms = invariant_measures(kernel);
  UniquenessResult out;
  out.ipm_count = ipms.size();
  const PReports p = decide_P(kernel, mu);
  if ((p.p1.holds || p.p2.holds) && ipms.size() != 1) {
    out.consistent = false;
    out.contradiction.emplace(ipms[0], ipms[1]);
  }
  return out;
}

const ConditionReport& EquivalenceAudit::report(Condition condition) const {
  for (const ConditionReport& r : reports) {
    if (r.condition == condition) return r;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "audit has no report for " + std::string(ToString(condition)));
}

std::string fingerprint(const Kernel& kernel) {
  // FNV-1a over labels and the bit patterns of every entry.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (StateId x = 0; x < kernel.size(); ++x) {
    for (char c : kernel.space().label(x)) mix(static_cast<unsigned char>(c));
    mix(0xffULL);
    for (const Entry& e : kernel.row(x)) {
      mix(e.state);
      mix(std::bit_cast<std::uint64_t>(e.probability));
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

EquivalenceAudit cross_check(const Kernel& kernel, const Distribution& mu) {
  require_invariant(kernel, mu);
  EquivalenceAudit audit;
  audit.fingerprint = fingerprint(kernel);
  audit.ipm_count = invariant_measures(kernel).size();

  const PReports p = decide_P(kernel, mu);
  auto& reports = audit.reports;
  reports = {p.p1, p.p2, p.p3, p.p2_tilde};
  reports.push_back(check_A(kernel, mu, AVariant::k1));
  reports.push_back(check_A(kernel, mu, AVariant::k2));
  reports.push_back(check_A(kernel, mu, AVariant::k3));
  reports.push_back(check_A(kernel, mu, AVariant::k3Prime));
  for (Index i : {Index::k1, Index::k2, Index::k3}) {
    reports.push_back(check_B(kernel, mu, i));
  }
  for (Index i : {Index::k1, Index::k2, Index::k3}) {
    for (ConditionReport& r : check_C_family(kernel, mu, i)) {
      reports.push_back(std::move(r));
    }
  }
  for (Index i : {Index::k1, Index::k2, Index::k3}) {
    reports.push_back(check_G(kernel, mu, i));
  }

  auto holds = [&audit](Condition c) { return audit.report(c).holds; };
  using C = Condition;
  const std::vector<std::pair<Index, std::vector<Condition>>> groups = {
      {Index::k1, {C::kA1, C::kB1, C::kC1, C::kC1Hat, C::kC1Ring, C::kC1Prime,
                   C::kG1, C::kP1}},
      {Index::k2, {C::kA2, C::kB2, C::kC2, C::kC2Prime, C::kG2, C::kP2}},
      {Index::k3, {C::kA3, C::kA3Prime, C::kB3, C::kC3, C::kC3Prime, C::kG3,
                   C::kP3}},
  };
  for (const auto& [index, conditions] : groups) {
    IndexAudit ia;
    ia.index = index;
    ia.conditions = conditions;
    const std::size_t k = conditions.size();
    ia.implication.assign(k, std::vector<bool>(k, true));
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        ia.implication[a][b] = !holds(conditions[a]) || holds(conditions[b]);
        if (a < b && holds(conditions[a]) != holds(conditions[b])) {
          audit.violations.push_back(
              {conditions[a], conditions[b], "<=>", audit.fingerprint});
        }
      }
    }
    audit.indices.push_back(std::move(ia));
  }
  const std::vector<std::pair<Condition, Condition>> chains = {
      {C::kC1Prime, C::kC1Ring}, {C::kC1Ring, C::kG1},  {C::kG1, C::kA1},
      {C::kP1, C::kC1Hat},       {C::kC1Hat, C::kC1},   {C::kC1, C::kA1},
      {C::kC2Prime, C::kC2},     {C::kC2, C::kG2},      {C::kG2, C::kA2},
      {C::kP3, C::kA3Prime},     {C::kA3Prime, C::kA3}, {C::kC3Prime, C::kC3},
      {C::kC3, C::kG3},          {C::kG3, C::kA3},      {C::kA1, C::kB1},
      {C::kA2, C::kB2},          {C::kA3Prime, C::kB3}, {C::kP1, C::kP2},
      {C::kP2, C::kP3},          {C::kP2, C::kP2Tilde}, {C::kP2Tilde, C::kP3},
  };
  for (const auto& [lhs, rhs] : chains) {
    if (holds(lhs) && !holds(rhs)) {
      audit.violations.push_back({lhs, rhs, "=>", audit.fingerprint});
    }
  }
  if (holds(C::kP2) && audit.ipm_count != 1) {
    audit.violations.push_back(
        {C::kP2, C::kP2Tilde, "unique ipm", audit.fingerprint});
  }
  return audit;
}

namespace {

std::string DescribeViolations(const EquivalenceAudit& audit) {
  std::string out = "audit violation on chain " + audit.fingerprint + ":";
  for (const AuditViolationEntry& v : audit.violations) {
    out += " " + std::string(ToString(v.lhs)) + " " + v.relation + " " +
           std::string(ToString(v.rhs)) + ";";
  }
  return out;
}

}  // namespace

AuditViolation::AuditViolation(EquivalenceAudit audit)
    : Error(ErrorCode::kAuditViolation, DescribeViolations(audit)),
      audit_(std::move(audit)) {}

void require_clean(const EquivalenceAudit& audit) {
  if (!audit.clean()) throw AuditViolation(audit);
}

nlohmann::json ToJson(const EquivalenceAudit& audit) {
  nlohmann::json out;
  out["fingerprint"] = audit.fingerprint;
  out["ipm_count"] = audit.ipm_count;
  out["clean"] = audit.clean();
  nlohmann::json reports = nlohmann::json::array();
  for (const ConditionReport& r : audit.reports) reports.push_back(ToJson(r));
  out["reports"] = std::move(reports);
  nlohmann::json indices = nlohmann::json::array();
  for (const IndexAudit& ia : audit.indices) {
    nlohmann::json names = nlohmann::json::array();
    for (Condition c : ia.conditions) names.push_back(ToString(c));
    indices.push_back({{"index", static_cast<int>(ia.index)},
                       {"conditions", std::move(names)},
                       {"implication", ia.implication}});
  }
  out["indices"] = std::move(indices);
  nlohmann::json violations = nlohmann::json::array();
  for (const AuditViolationEntry& v : audit.violations) {
    violations.push_back({{"lhs", ToString(v.lhs)},
                          {"rhs", ToString(v.rhs)},
                          {"relation", v.relation},
                          {"fingerprint", v.fingerprint}});
  }
  out["violations"] = std::move(violations);
  return out;
}

}  // namespace tvchain
