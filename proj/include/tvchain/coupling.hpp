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

// Constructive couplings: maximal and product couplings, the LP oracle for
// the coupling equality, the switching product kernel, gluing and skeleton
// interpolation, coupled path simulation, and the C-condition checkers.

#ifndef TVCHAIN_COUPLING_HPP_
#define TVCHAIN_COUPLING_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tvchain/chain.hpp"
#include "tvchain/report.hpp"
#include "tvchain/rng.hpp"

namespace tvchain {

using StatePair = std::pair<StateId, StateId>;

// Sparse measure on E1 x E2.
class JointDistribution {
 public:
  JointDistribution(std::size_t n1, std::size_t n2) : n1_(n1), n2_(n2) {}

  std::size_t size1() const { return n1_; }
  std::size_t size2() const { return n2_; }

  // Adds mass at (i, j); non-positive mass is ignored.
  void add(StateId i, StateId j, double mass);
  double at(StateId i, StateId j) const;
  const std::map<StatePair, double>& entries() const { return mass_; }

  std::vector<double> marginal1() const;
  std::vector<double> marginal2() const;
  double total() const;
  double diagonal_mass() const;

 private:
  std::size_t n1_;
  std::size_t n2_;
  std::map<StatePair, double> mass_;
};

// Diagonal min(ν1, ν2); residuals spread as their normalized product.
JointDistribution maximal_coupling(const Distribution& nu1,
                                   const Distribution& nu2);
JointDistribution product_coupling(const Distribution& nu1,
                                   const Distribution& nu2);

// Membership in the generalized coupling sets: C~ needs ξ^1 << ν1 and
// ξ^2 << ν2, Č additionally ξ^2 ~ ν2. ξ must be a probability measure.
bool in_tilde_C(const JointDistribution& xi, const Distribution& nu1,
                const Distribution& nu2);
bool in_check_C(const JointDistribution& xi, const Distribution& nu1,
                const Distribution& nu2);

inline constexpr std::size_t kMaxLpSupport = 64;

struct LpCouplingResult {
  double off_diagonal_mass = 0.0;  // min over couplings of ξ(Δᶜ)
  JointDistribution coupling;
};

// Transportation LP minimizing off-diagonal mass with exact marginals. Throws
// kSupportTooLarge above kMaxLpSupport combined support states and
// kLpInfeasible if the solver fails.
LpCouplingResult optimal_coupling_lp(const Distribution& nu1,
                                     const Distribution& nu2);

// Pairs over E x E, dense bitmap.
class PairSet {
 public:
  explicit PairSet(std::size_t n) : n_(n), bits_(n * n, false) {}

  std::size_t state_count() const { return n_; }
  bool contains(StateId x, StateId y) const { return bits_[x * n_ + y]; }
  void insert(StateId x, StateId y) { bits_[x * n_ + y] = true; }
  std::size_t count() const;
  std::vector<StatePair> pairs() const;

 private:
  std::size_t n_;
  std::vector<bool> bits_;
};

// {(x, y) : d(P_N(x, .), P_N(y, .)) <= 1 - p}.
PairSet coupling_set_C(const Kernel& kernel, std::size_t N, double p);

enum class RowMode { kMaximal, kIndependent, kDiagonal };

// Kernel S on E x E for the N-skeleton: maximal coupling of the N-step rows
// on C, product coupling off C, diagonal pairs stay on the diagonal.
struct ProductKernel {
  std::size_t n = 0;
  std::size_t step = 1;
  PairSet C{0};
  std::vector<JointDistribution> rows;
  std::vector<RowMode> modes;

  const JointDistribution& row(StateId x, StateId y) const {
    return rows[x * n + y];
  }
  RowMode mode(StateId x, StateId y) const { return modes[x * n + y]; }
};

ProductKernel switching_kernel(const Kernel& kernel, const PairSet& C,
                               std::size_t N);

struct SwitchingParams {
  std::size_t N = 1;
  double p = 0.5;
};

// First N in 1..2|E| (p = 1/2, halved down to tolerance) whose C_{N,p} has
// positive μ⊗μ-mass off the diagonal; (1, 1/2) if none does.
SwitchingParams choose_switching_params(const Kernel& kernel,
                                        const Distribution& mu);

// Meeting behaviour of the switching product chain, decided on its graph.
struct MeetingAnalysis {
  std::size_t n = 0;
  std::vector<bool> can_meet;     // Δ reachable from the pair
  std::vector<bool> meets_surely; // every reachable pair can still reach Δ

  bool can(StateId x, StateId y) const { return can_meet[x * n + y]; }
  bool surely(StateId x, StateId y) const { return meets_surely[x * n + y]; }
};

MeetingAnalysis analyze_meeting(const ProductKernel& product);

// Exact probability that the switching chain from (x, y) reaches Δ.
double meeting_probability(const ProductKernel& product, StateId x, StateId y);

// Measure on E1 x E2 x E3.
struct ThreeWayJoint {
  std::map<std::array<StateId, 3>, double> mass;

  JointDistribution project12(std::size_t n1, std::size_t n2) const;
  JointDistribution project23(std::size_t n2, std::size_t n3) const;
};

// mass(a, b, c) = ρ1(a, b) ρ3(b, c) / m(b). Throws kMarginalMismatch when the
// second marginal of ρ1 and the first of ρ3 differ by more than tolerance.
ThreeWayJoint glue(const JointDistribution& rho1, const JointDistribution& rho3,
                   double tolerance = kDefaultTolerance);

// Path a = X_0, ..., X_N = b drawn from the chain's law conditioned on the
// endpoints, one step at a time through glue(). Throws kUnsupportedEndpoint
// when P_N(a, b) = 0.
std::vector<StateId> sample_bridge(const Kernel& kernel, StateId a, StateId b,
                                   std::size_t N, Rng& rng);

// Fills the gaps of a skeleton pair path (times 0, N, 2N, ...) with
// conditionally independent bridges; once the pair is on the diagonal both
// coordinates share one bridge. Throws kUnsupportedEndpoint if a transition
// of `segment` is not supported by `product`, kInvalidArgument if N < 2.
std::vector<StatePair> interpolate_skeleton_coupling(
    const Kernel& kernel, const ProductKernel& product,
    const std::vector<StatePair>& segment, Rng& rng);

struct CouplingTrace {
  std::vector<StatePair> path;  // times 0..horizon
  // First k after which the coordinates agree through the horizon.
  std::optional<std::size_t> meet_time;
  std::uint64_t seed = 0;
};

CouplingTrace simulate_coupling(const Kernel& kernel, StateId x, StateId y,
                                SwitchingParams params, std::uint64_t seed,
                                std::size_t horizon);
// Reuses a prebuilt switching kernel; `product.step` is N.
CouplingTrace simulate_coupling(const Kernel& kernel,
                                const ProductKernel& product, StateId x,
                                StateId y, std::uint64_t seed,
                                std::size_t horizon);

// C_i of the given index.
ConditionReport check_C(const Kernel& kernel, const Distribution& mu,
                        Index index);

// Every C-variant of the index: {C1, C1hat, C1ring, C1'}, {C2, C2'} or
// {C3, C3'}.
std::vector<ConditionReport> check_C_family(const Kernel& kernel,
                                            const Distribution& mu,
                                            Index index);

}  // namespace tvchain

#endif  // TVCHAIN_COUPLING_HPP_
