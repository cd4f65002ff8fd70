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

// G-conditions: generalized couplings with absolutely continuous marginals.

#include <string>

#include "switching_analysis.hpp"
#include "tvchain/coupling.hpp"
#include "tvchain/equivalence.hpp"
#include "tvchain/error.hpp"

namespace tvchain {
namespace {

constexpr std::size_t kConfirmStates = 16;
constexpr std::size_t kListedWitnessStates = 8;

nlohmann::json LabelPair(const Kernel& kernel, StateId x, StateId y) {
  return nlohmann::json::array(
      {kernel.space().label(x), kernel.space().label(y)});
}

// ζ = δ_z ⊗ δ_z at the first k where both k-step laws charge z.
ConditionReport DecideG2G3(const Kernel& kernel, const Distribution& mu,
                           Condition condition, bool mu_only) {
  const PairReachability table = pair_reachability(kernel);
  ConditionReport report;
  report.condition = condition;
  report.holds = true;
  report.method = Method::kStructural;
  nlohmann::json w;
  std::vector<StatePair> pairs;
  for (StateId x = 0; x < kernel.size(); ++x) {
    for (StateId y = x; y < kernel.size(); ++y) {
      if (mu_only && !(mu.charges(x) && mu.charges(y))) continue;
      pairs.emplace_back(x, y);
      if (x != y && !table.at(x, y)) {
        report.holds = false;
        w["counterexample"] = LabelPair(kernel, x, y);
        report.summary = "no generalized coupling of P_k(" +
                         kernel.space().label(x) + ", .) and P_k(" +
                         kernel.space().label(y) + ", .) charges the diagonal";
        report.witness = std::move(w);
        return report;
      }
    }
  }
  if (kernel.size() <= kConfirmStates) {
    bool confirmed = true;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& [x, y] : pairs) {
      const std::size_t k = x == y ? 0 : *table.at(x, y);
      const auto z = x == y ? std::optional<StateId>(x)
                            : common_state(kernel, x, y, k);
      if (!z) {
        confirmed = false;
        continue;
      }
      JointDistribution zeta(kernel.size(), kernel.size());
      zeta.add(*z, *z, 1.0);
      if (!in_tilde_C(zeta, n_step(kernel, x, k), n_step(kernel, y, k))) {
        confirmed = false;
      }
      if (kernel.size() <= kListedWitnessStates) {
        list.push_back({{"pair", LabelPair(kernel, x, y)},
                        {"k", k},
                        {"atom", kernel.space().label(*z)}});
      }
    }
    if (confirmed) report.method = Method::kBothAgree;
    if (kernel.size() <= kListedWitnessStates) w["witnesses"] = std::move(list);
  }
  report.summary = "point-mass couplings on a common state witness every pair";
  report.witness = std::move(w);
  return report;
}

// The switching coupling of every pair, read as an element of Č(P_x, P_y):
// its second marginal is P_y itself and ξ_k(Δ) -> 1 iff the pair meets
// surely.
ConditionReport DecideG1(const Kernel& kernel, const Distribution& mu) {
  const internal::SwitchingAnalysis analysis =
      internal::AnalyzeSwitching(kernel, mu);
  ConditionReport report;
  report.condition = Condition::kG1;
  report.holds = true;
  nlohmann::json w;
  w["N"] = analysis.params.N;
  w["p"] = analysis.params.p;
  for (StateId x = 0; x < kernel.size() && report.holds; ++x) {
    for (StateId y = 0; y < kernel.size(); ++y) {
      if (!analysis.meeting.surely(x, y)) {
        report.holds = false;
        w["counterexample"] = LabelPair(kernel, x, y);
        break;
      }
    }
  }
  const SkeletonLimits limits = skeleton_limits(kernel);
  bool a1 = true;
  for (StateId x = 1; x < kernel.size(); ++x) {
    if (!asymptotically_equivalent_exact(limits, 0, x)) a1 = false;
  }
  report.method = a1 == report.holds ? Method::kBothAgree : Method::kStructural;
  report.summary = report.holds
                       ? "switching coupling gives ξ_k(Δ) -> 1 for every pair"
                       : "some pair is never coupled surely";
  report.witness = std::move(w);
  return report;
}

}  // namespace

ConditionReport check_G(const Kernel& kernel, const Distribution& mu,
                        Index index) {
  require_invariant(kernel, mu);
  switch (index) {
    case Index::k1:
      return DecideG1(kernel, mu);
    case Index::k2:
      return DecideG2G3(kernel, mu, Condition::kG2, false);
    case Index::k3:
      return DecideG2G3(kernel, mu, Condition::kG3, true);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown index");
}

}  // namespace tvchain
