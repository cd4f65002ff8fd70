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

#include "tvchain/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "tvchain/error.hpp"
#include "tvchain/structure.hpp"

namespace tvchain {

double tv_distance(const Distribution& nu1, const Distribution& nu2) {
  if (nu1.size() != nu2.size()) {
    throw Error(ErrorCode::kSpaceMismatch, "tv_distance on different spaces");
  }
  double total = 0.0;
  for (StateId i = 0; i < nu1.size(); ++i) total += std::abs(nu1[i] - nu2[i]);
  return std::clamp(0.5 * total, 0.0, 1.0);
}

SkeletonLimits skeleton_limits(const Kernel& kernel) {
  const ClassDecomposition dec = decompose(kernel);
  SkeletonLimits out;
  out.step = period_lcm(dec);
  const Kernel s = out.step == 1 ? kernel : skeleton(kernel, out.step);
  const ClassDecomposition sdec = decompose(s);
  const auto absorption = absorption_probabilities(s, sdec);
  // Recurrent classes of the skeleton are aperiodic, so each one contributes
  // its own ipm weighted by the absorption probability.
  const std::vector<Distribution> pis = invariant_measures(s);
  const std::size_t n = kernel.size();
  out.rho.reserve(n);
  for (StateId x = 0; x < n; ++x) {
    std::vector<double> mass(n, 0.0);
    for (std::size_t r = 0; r < pis.size(); ++r) {
      const double w = absorption[x][r];
      if (w == 0.0) continue;
      for (StateId z = 0; z < n; ++z) mass[z] += w * pis[r][z];
    }
    double total = 0.0;
    for (double m : mass) total += m;
    for (double& m : mass) m /= total;
    out.rho.emplace_back(std::move(mass), kernel.tolerance());
  }
  return out;
}

TVCurve tv_curve(const Kernel& kernel, StateId x, const Distribution& mu,
                 std::size_t n_max) {
  if (n_max == 0) throw Error(ErrorCode::kInvalidArgument, "n_max must be >= 1");
  if (x >= kernel.size()) throw Error(ErrorCode::kIndexOutOfRange, "tv_curve x");
  require_invariant(kernel, mu);
  TVCurve curve;
  curve.x = x;
  curve.values.reserve(n_max + 1);
  Distribution cur = Distribution::PointMass(kernel.size(), x, kernel.tolerance());
  curve.values.push_back(tv_distance(cur, mu));
  for (std::size_t n = 1; n <= n_max; ++n) {
    cur = push_forward(kernel, cur);
    curve.values.push_back(tv_distance(cur, mu));
  }
  curve.limit = tv_distance(skeleton_limits(kernel).rho[x], mu);
  return curve;
}

PairReachability pair_reachability(const Kernel& kernel) {
  const std::size_t n = kernel.size();
  std::vector<std::vector<StateId>> succ(n), pred(n);
  for (StateId x = 0; x < n; ++x) {
    succ[x] = kernel.successors(x);
    for (StateId y : succ[x]) pred[y].push_back(x);
  }
  // dist0(x, y): least n >= 0 with a common state at time n, by backward BFS
  // from the diagonal of the product graph.
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist0(n * n, kNever);
  std::deque<std::size_t> queue;
  for (StateId z = 0; z < n; ++z) {
    dist0[z * n + z] = 0;
    queue.push_back(z * n + z);
  }
  while (!queue.empty()) {
    const std::size_t cell = queue.front();
    queue.pop_front();
    const StateId a = cell / n, b = cell % n;
    for (StateId x : pred[a]) {
      for (StateId y : pred[b]) {
        std::size_t& d = dist0[x * n + y];
        if (d == kNever) {
          d = dist0[cell] + 1;
          queue.push_back(x * n + y);
        }
      }
    }
  }
  std::vector<std::optional<std::size_t>> table(n * n);
  for (StateId x = 0; x < n; ++x) {
    for (StateId y = 0; y < n; ++y) {
      std::size_t best = kNever;
      for (StateId a : succ[x]) {
        for (StateId b : succ[y]) best = std::min(best, dist0[a * n + b]);
      }
      if (best != kNever) table[x * n + y] = best + 1;
    }
  }
  return PairReachability(n, std::move(table));
}

std::optional<StateId> common_state(const Kernel& kernel, StateId x, StateId y,
                                    std::size_t n) {
  const Distribution px = n_step(kernel, x, n);
  const Distribution py = n_step(kernel, y, n);
  for (StateId z = 0; z < kernel.size(); ++z) {
    if (px.charges(z) && py.charges(z)) return z;
  }
  return std::nullopt;
}

AsymEquivResult asymptotically_equivalent(const Kernel& kernel, StateId x,
                                          StateId y,
                                          const std::vector<double>& epsilons,
                                          std::size_t n_cap) {
  for (double eps : epsilons) {
    if (!(eps > 0.0 && eps < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1)");
    }
  }
  if (x >= kernel.size() || y >= kernel.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "asymptotic equivalence pair");
  }
  AsymEquivResult out;
  out.n_cap = n_cap == 0 ? 4 * kernel.size() * kernel.size() : n_cap;
  out.witnesses.assign(epsilons.size(), std::nullopt);
  const double tol = kernel.tolerance();
  std::size_t open = epsilons.size();
  Distribution px = Distribution::PointMass(kernel.size(), x, tol);
  Distribution py = Distribution::PointMass(kernel.size(), y, tol);
  for (std::size_t n = 1; n <= out.n_cap && open > 0; ++n) {
    px = push_forward(kernel, px);
    py = push_forward(kernel, py);
    StateSet a;
    for (StateId z = 0; z < kernel.size(); ++z) {
      if (px.charges(z) && py.charges(z)) a.push_back(z);
    }
    const double mx = px.measure(a);
    const double my = py.measure(a);
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
      if (out.witnesses[k]) continue;
      const double need = 1.0 - epsilons[k] - tol;
      if (mx >= need && my >= need) {
        out.witnesses[k] = AsymEquivWitness{n, a, epsilons[k], mx, my};
        --open;
      }
    }
  }
  out.holds_up_to_cap = open == 0;
  return out;
}

bool asymptotically_equivalent_exact(const SkeletonLimits& limits, StateId x,
                                     StateId y) {
  return limits.rho.at(x).support() == limits.rho.at(y).support();
}

namespace {

nlohmann::json LabelPair(const Kernel& kernel, StateId x, StateId y) {
  return nlohmann::json::array(
      {kernel.space().label(x), kernel.space().label(y)});
}

// Largest ε for which a pair with mismatched limit supports cannot have a
// witness: half the smallest mass either limit puts outside the other's
// support.
double SeparatingEpsilon(const SkeletonLimits& limits, StateId x, StateId y) {
  const Distribution& rx = limits.rho[x];
  const Distribution& ry = limits.rho[y];
  double smallest = 1.0;
  for (StateId z = 0; z < rx.size(); ++z) {
    if (rx.charges(z) != ry.charges(z)) {
      smallest = std::min(smallest, std::max(rx[z], ry[z]));
    }
  }
  return std::clamp(0.5 * smallest, 1e-6, 0.5);
}

std::vector<StateId> RelevantStates(const Kernel& kernel,
                                    const Distribution& mu, bool mu_only) {
  std::vector<StateId> out;
  for (StateId x = 0; x < kernel.size(); ++x) {
    if (!mu_only || mu.charges(x)) out.push_back(x);
  }
  return out;
}

constexpr std::size_t kWitnessSearchStates = 10;

ConditionReport AsymptoticReport(const Kernel& kernel, const Distribution& mu,
                                 Condition condition, bool mu_only) {
  const SkeletonLimits limits = skeleton_limits(kernel);
  const std::vector<StateId> states = RelevantStates(kernel, mu, mu_only);
  ConditionReport report;
  report.condition = condition;
  report.holds = true;
  std::optional<std::pair<StateId, StateId>> bad;
  for (std::size_t i = 0; i < states.size() && !bad; ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      if (!asymptotically_equivalent_exact(limits, states[i], states[j])) {
        bad.emplace(states[i], states[j]);
        break;
      }
    }
  }
  nlohmann::json w;
  w["skeleton_step"] = limits.step;
  if (bad) {
    report.holds = false;
    const auto [x, y] = *bad;
    const double eps = SeparatingEpsilon(limits, x, y);
    const AsymEquivResult search = asymptotically_equivalent(kernel, x, y, {eps});
    w["counterexample"] = LabelPair(kernel, x, y);
    w["epsilon"] = eps;
    w["n_cap"] = search.n_cap;
    report.method = search.holds_up_to_cap ? Method::kStructural
                                           : Method::kBothAgree;
    report.summary = "states " + kernel.space().label(x) + " and " +
                     kernel.space().label(y) +
                     " are not asymptotically equivalent";
  } else {
    report.method = Method::kStructural;
    if (kernel.size() <= kWitnessSearchStates) {
      bool all_found = true;
      nlohmann::json witnesses = nlohmann::json::array();
      for (std::size_t i = 0; i < states.size() && all_found; ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
          const AsymEquivResult r =
              asymptotically_equivalent(kernel, states[i], states[j], {0.01});
          if (!r.holds_up_to_cap) {
            all_found = false;
            break;
          }
          const AsymEquivWitness& wit = *r.witnesses.front();
          nlohmann::json set = nlohmann::json::array();
          for (StateId s : wit.A) set.push_back(kernel.space().label(s));
          witnesses.push_back({{"pair", LabelPair(kernel, states[i], states[j])},
                               {"n", wit.n},
                               {"A", set},
                               {"epsilon", wit.epsilon}});
        }
      }
      if (all_found) {
        report.method = Method::kBothAgree;
        w["witnesses"] = std::move(witnesses);
      }
    }
    report.summary = mu_only ? "μ-charged states are pairwise asymptotically "
                               "equivalent"
                             : "all states are pairwise asymptotically "
                               "equivalent";
  }
  report.witness = std::move(w);
  return report;
}

constexpr std::size_t kCommonStateCheckStates = 16;

ConditionReport ReachabilityReport(const Kernel& kernel, const Distribution& mu,
                                   Condition condition, bool mu_only) {
  const PairReachability table = pair_reachability(kernel);
  const std::vector<StateId> states = RelevantStates(kernel, mu, mu_only);
  ConditionReport report;
  report.condition = condition;
  report.holds = true;
  report.method = Method::kStructural;
  nlohmann::json w;
  std::size_t max_n = 0;
  for (StateId x : states) {
    for (StateId y : states) {
      const auto entry = table.at(x, y);
      if (!entry) {
        report.holds = false;
        w["counterexample"] = LabelPair(kernel, x, y);
        report.summary = "P_n(" + kernel.space().label(x) + ", .) and P_n(" +
                         kernel.space().label(y) +
                         ", .) are singular for every n";
        report.witness = std::move(w);
        return report;
      }
      max_n = std::max(max_n, *entry);
    }
  }
  if (kernel.size() <= kCommonStateCheckStates) {
    bool confirmed = true;
    for (StateId x : states) {
      for (StateId y : states) {
        if (y < x) continue;
        if (!common_state(kernel, x, y, *table.at(x, y))) confirmed = false;
      }
    }
    // Path products below tolerance can hide the common state numerically;
    // the graph answer stands on its own then.
    if (confirmed) report.method = Method::kBothAgree;
  }
  w["max_n"] = max_n;
  report.summary = "every relevant pair has non-singular n-step laws by n = " +
                   std::to_string(max_n);
  report.witness = std::move(w);
  return report;
}

}  // namespace

ConditionReport check_A(const Kernel& kernel, const Distribution& mu,
                        AVariant variant) {
  require_invariant(kernel, mu);
  switch (variant) {
    case AVariant::k1:
      return AsymptoticReport(kernel, mu, Condition::kA1, false);
    case AVariant::k2:
      return ReachabilityReport(kernel, mu, Condition::kA2, false);
    case AVariant::k3:
      return ReachabilityReport(kernel, mu, Condition::kA3, true);
    case AVariant::k3Prime:
      return AsymptoticReport(kernel, mu, Condition::kA3Prime, true);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown A variant");
}

}  // namespace tvchain
