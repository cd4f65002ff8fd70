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

// Total variation, TV curves with exact limits, pair reachability, and the
// A- and G-condition checkers.

#ifndef TVCHAIN_EQUIVALENCE_HPP_
#define TVCHAIN_EQUIVALENCE_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "tvchain/chain.hpp"
#include "tvchain/report.hpp"

namespace tvchain {

// (1/2) sum_i |ν1(i) - ν2(i)|. Throws kSpaceMismatch.
double tv_distance(const Distribution& nu1, const Distribution& nu2);

struct TVCurve {
  StateId x = 0;
  std::vector<double> values;  // d(P_n(x, .), μ) for n = 0..n_max
  double limit = 0.0;
};

// Limit of P_{kL}(x, .) as k -> infinity for every x, where L is the lcm of
// the recurrent periods. Every residue subsequence of d(P_n(x,.), ν) for an
// invariant ν shares the limit d(rho[x], ν).
struct SkeletonLimits {
  std::size_t step = 1;
  std::vector<Distribution> rho;
};

SkeletonLimits skeleton_limits(const Kernel& kernel);

// Throws kNotInvariant, kInvalidArgument when n_max == 0.
TVCurve tv_curve(const Kernel& kernel, StateId x, const Distribution& mu,
                 std::size_t n_max);

// Least n >= 1 with supp P_n(x, .) and supp P_n(y, .) intersecting.
class PairReachability {
 public:
  PairReachability(std::size_t n, std::vector<std::optional<std::size_t>> table)
      : n_(n), table_(std::move(table)) {}

  std::size_t size() const { return n_; }
  std::optional<std::size_t> at(StateId x, StateId y) const {
    return table_[x * n_ + y];
  }

 private:
  std::size_t n_;
  std::vector<std::optional<std::size_t>> table_;
};

PairReachability pair_reachability(const Kernel& kernel);

// A state both n-step laws charge, for a pair whose entry is n.
std::optional<StateId> common_state(const Kernel& kernel, StateId x, StateId y,
                                    std::size_t n);

struct AsymEquivWitness {
  std::size_t n = 0;
  StateSet A;
  double epsilon = 0.0;
  double mass_x = 0.0;
  double mass_y = 0.0;
};

struct AsymEquivResult {
  // True when every epsilon found a witness with n <= n_cap.
  bool holds_up_to_cap = false;
  std::size_t n_cap = 0;
  std::vector<std::optional<AsymEquivWitness>> witnesses;  // per epsilon
};

// Cap-bounded search, per ε, for the least n with P_n(x, A) >= 1 - ε and
// P_n(y, A) >= 1 - ε, A = supp P_n(x,.) ∩ supp P_n(y,.). n_cap = 0 means
// 4 |E|^2. Throws kInvalidArgument for ε outside (0, 1).
AsymEquivResult asymptotically_equivalent(const Kernel& kernel, StateId x,
                                          StateId y,
                                          const std::vector<double>& epsilons,
                                          std::size_t n_cap = 0);

// Exact decision on a finite chain: supports of the skeleton limits agree.
bool asymptotically_equivalent_exact(const SkeletonLimits& limits, StateId x,
                                     StateId y);

enum class AVariant { k1, k2, k3, k3Prime };

ConditionReport check_A(const Kernel& kernel, const Distribution& mu,
                        AVariant variant);

ConditionReport check_G(const Kernel& kernel, const Distribution& mu,
                        Index index);

}  // namespace tvchain

#endif  // TVCHAIN_EQUIVALENCE_HPP_
