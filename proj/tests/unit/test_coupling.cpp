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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "../oracles.hpp"
#include "tvchain/coupling.hpp"
#include "tvchain/equivalence.hpp"
#include "tvchain/error.hpp"
#include "tvchain/harness.hpp"
#include "tvchain/simplex.hpp"
#include "tvchain/structure.hpp"

namespace tvchain {
namespace {

Kernel Peri() { return validate_kernel(2, std::vector<Transition>{{0, 1, 1.0}, {1, 0, 1.0}}); }

Kernel Identity(std::size_t n) {
  std::vector<Transition> raw;
  for (StateId x = 0; x < n; ++x) raw.push_back({x, x, 1.0});
  return validate_kernel(n, raw);
}

GeneratedChain AperiodicChain(std::size_t n, std::uint64_t seed) {
  GeneratorParams params;
  params.n_states = n;
  params.seed = seed;
  return random_chain(params);
}

void ExpectMarginals(const JointDistribution& xi, const Distribution& a,
                     const Distribution& b, double tol) {
  const auto m1 = xi.marginal1(), m2 = xi.marginal2();
  for (StateId i = 0; i < a.size(); ++i) EXPECT_NEAR(m1[i], a[i], tol);
  for (StateId j = 0; j < b.size(); ++j) EXPECT_NEAR(m2[j], b[j], tol);
}

TEST(Simplex, SmallProgram) {
  // min -x - y s.t. x + y + s = 4, x + 3y + t = 6.
  LinearProgram lp{{{1, 1, 1, 0}, {1, 3, 0, 1}}, {4, 6}, {-1, -1, 0, 0}};
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, -4.0, 1e-12);
  LinearProgram bad{{{1, 1}}, {-1}, {0, 0}};
  EXPECT_EQ(solve_lp(bad).status, LpStatus::kInfeasible);
}

TEST(MaximalCoupling, Examples) {
  const Distribution nu({0.2, 0.3, 0.5});
  const JointDistribution same = maximal_coupling(nu, nu);
  EXPECT_NEAR(same.diagonal_mass(), 1.0, 1e-15);
  const JointDistribution apart =
      maximal_coupling(Distribution::PointMass(2, 0), Distribution::PointMass(2, 1));
  EXPECT_DOUBLE_EQ(apart.at(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(apart.diagonal_mass(), 0.0);
  const JointDistribution half =
      maximal_coupling(Distribution({0.75, 0.25}), Distribution({0.25, 0.75}));
  EXPECT_DOUBLE_EQ(half.diagonal_mass(), 0.5);
  EXPECT_DOUBLE_EQ(half.at(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(half.at(1, 0), 0.0);
}

TEST(OptimalCouplingLp, Examples) {
  EXPECT_NEAR(optimal_coupling_lp(Distribution({0.75, 0.25}), Distribution({0.25, 0.75}))
                  .off_diagonal_mass,
              0.5, 1e-12);
  const Distribution nu({0.1, 0.9});
  EXPECT_NEAR(optimal_coupling_lp(nu, nu).off_diagonal_mass, 0.0, 1e-12);
  EXPECT_NEAR(optimal_coupling_lp(Distribution::PointMass(2, 0), Distribution::PointMass(2, 1))
                  .off_diagonal_mass,
              1.0, 1e-12);
  EXPECT_THROW(optimal_coupling_lp(Distribution::Uniform(70), Distribution::Uniform(70)), Error);
}

// Coupling equality at oracle scale.
TEST(CouplingEquality, MaximalMatchesLpAndTv) {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.Below(14);
    const Distribution a = oracle::RandomMeasure(rng, n, 1 + rng.Below(std::min<std::size_t>(n, 12)));
    const Distribution b = oracle::RandomMeasure(rng, n, 1 + rng.Below(std::min<std::size_t>(n, 12)));
    const JointDistribution xi = maximal_coupling(a, b);
    const LpCouplingResult lp = optimal_coupling_lp(a, b);
    const double tv = oracle::HalfL1(oracle::AsVector(a), oracle::AsVector(b));
    EXPECT_NEAR(xi.diagonal_mass(), 1.0 - tv, 1e-9);
    EXPECT_NEAR(lp.off_diagonal_mass, tv, 1e-9);
    ExpectMarginals(xi, a, b, 1e-9);
    ExpectMarginals(lp.coupling, a, b, 1e-9);
    // Off-diagonal part lives on supp a x supp b.
    for (const auto& [cell, m] : xi.entries()) {
      EXPECT_GT(a[cell.first], 0.0);
      EXPECT_GT(b[cell.second], 0.0);
    }
  }
}

TEST(ProductCoupling, Independence) {
  const Distribution a({0.3, 0.7}), b({0.6, 0.4});
  const JointDistribution xi = product_coupling(a, b);
  EXPECT_DOUBLE_EQ(xi.at(1, 0), 0.42);
  ExpectMarginals(xi, a, b, 1e-15);
}

TEST(GeneralizedCouplings, Membership) {
  const Distribution a({0.5, 0.5, 0.0}), b({0.0, 0.5, 0.5});
  JointDistribution on_one(3, 3);
  on_one.add(1, 1, 1.0);
  EXPECT_TRUE(in_tilde_C(on_one, a, b));
  EXPECT_FALSE(in_check_C(on_one, a, b));
  JointDistribution spread(3, 3);
  spread.add(1, 1, 0.5);
  spread.add(0, 2, 0.5);
  EXPECT_TRUE(in_check_C(spread, a, b));
  JointDistribution outside(3, 3);
  outside.add(2, 2, 1.0);
  EXPECT_FALSE(in_tilde_C(outside, a, b));
}

TEST(CouplingSet, Examples) {
  const PairSet peri = coupling_set_C(Peri(), 1, 0.5);
  EXPECT_EQ(peri.count(), 2u);
  EXPECT_TRUE(peri.contains(0, 0));
  EXPECT_FALSE(peri.contains(0, 1));
  const GeneratedChain g = AperiodicChain(5, 4);
  EXPECT_EQ(coupling_set_C(g.kernel, 1, 1e-9).count(), 25u);
  const Fixture simple = fixture("simple", 20);
  EXPECT_TRUE(coupling_set_C(simple.kernel, 1, 0.5).contains(0, 1));
}

TEST(SwitchingKernel, RowsAndMarginals) {
  for (const auto& g : oracle::RandomChains(30, 6, 42)) {
    const Kernel& k = g.kernel;
    for (std::size_t N : {1u, 2u}) {
      const PairSet C = coupling_set_C(k, N, 0.5);
      const ProductKernel s = switching_kernel(k, C, N);
      for (StateId x = 0; x < k.size(); ++x) {
        for (StateId y = 0; y < k.size(); ++y) {
          const Distribution px = n_step(k, x, N), py = n_step(k, y, N);
          const JointDistribution& row = s.row(x, y);
          if (x == y) {
            EXPECT_NEAR(row.diagonal_mass(), 1.0, 1e-12);
            EXPECT_EQ(s.mode(x, y), RowMode::kDiagonal);
          } else if (C.contains(x, y)) {
            EXPECT_NEAR(row.diagonal_mass(), 1.0 - tv_distance(px, py), 1e-9);
          } else {
            for (const auto& [cell, m] : row.entries()) {
              EXPECT_NEAR(m, px[cell.first] * py[cell.second], 1e-12);
            }
          }
          ExpectMarginals(row, px, py, 1e-9);
        }
      }
    }
  }
}

TEST(SwitchingKernel, PeriNeverMeets) {
  const ProductKernel s = switching_kernel(Peri(), coupling_set_C(Peri(), 1, 0.5), 1);
  EXPECT_EQ(s.mode(0, 1), RowMode::kIndependent);
  EXPECT_FALSE(analyze_meeting(s).can(0, 1));
  EXPECT_DOUBLE_EQ(meeting_probability(s, 0, 1), 0.0);
}

TEST(Glue, Examples) {
  JointDistribution coins(2, 2);
  for (StateId i = 0; i < 2; ++i) {
    for (StateId j = 0; j < 2; ++j) coins.add(i, j, 0.25);
  }
  const ThreeWayJoint uniform = glue(coins, coins);
  EXPECT_EQ(uniform.mass.size(), 8u);
  for (const auto& [cell, m] : uniform.mass) EXPECT_DOUBLE_EQ(m, 0.125);

  JointDistribution a(2, 2), b(2, 2);
  a.add(1, 0, 1.0);
  b.add(0, 1, 1.0);
  const ThreeWayJoint point = glue(a, b);
  ASSERT_EQ(point.mass.size(), 1u);
  EXPECT_DOUBLE_EQ((point.mass.at({1, 0, 1})), 1.0);

  JointDistribution diag(2, 2);
  diag.add(0, 0, 0.5);
  diag.add(1, 1, 0.5);
  const ThreeWayJoint d = glue(diag, diag);
  EXPECT_DOUBLE_EQ((d.mass.at({0, 0, 0})), 0.5);
  EXPECT_DOUBLE_EQ((d.mass.at({1, 1, 1})), 0.5);

  EXPECT_THROW(glue(a, diag), Error);
}

TEST(Glue, ProjectionsRecoverInputs) {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.Below(5);
    const Distribution mid = oracle::RandomMeasure(rng, n, 1 + rng.Below(n));
    JointDistribution r1(n, n), r3(n, n);
    for (StateId b = 0; b < n; ++b) {
      if (mid[b] == 0.0) continue;
      const Distribution left = oracle::RandomMeasure(rng, n, 1 + rng.Below(n));
      const Distribution right = oracle::RandomMeasure(rng, n, 1 + rng.Below(n));
      for (StateId a = 0; a < n; ++a) r1.add(a, b, mid[b] * left[a]);
      for (StateId c = 0; c < n; ++c) r3.add(b, c, mid[b] * right[c]);
    }
    const ThreeWayJoint joint = glue(r1, r3);
    const JointDistribution p12 = joint.project12(n, n), p23 = joint.project23(n, n);
    for (StateId i = 0; i < n; ++i) {
      for (StateId j = 0; j < n; ++j) {
        EXPECT_NEAR(p12.at(i, j), r1.at(i, j), 1e-15);
        EXPECT_NEAR(p23.at(i, j), r3.at(i, j), 1e-15);
      }
    }
  }
}

TEST(Interpolation, DeterministicAndConstantBridges) {
  Rng rng(44);
  const ProductKernel peri = switching_kernel(Peri(), coupling_set_C(Peri(), 2, 0.5), 2);
  const auto path = interpolate_skeleton_coupling(Peri(), peri, {{0, 1}, {0, 1}}, rng);
  ASSERT_EQ(path.size(), 3u);
  EXPECT_EQ(path[1], (StatePair{1, 0}));
  const Kernel id = Identity(3);
  const ProductKernel ids = switching_kernel(id, coupling_set_C(id, 2, 0.5), 2);
  const auto flat = interpolate_skeleton_coupling(id, ids, {{2, 1}, {2, 1}}, rng);
  for (const StatePair& p : flat) EXPECT_EQ(p, (StatePair{2, 1}));
  EXPECT_THROW(interpolate_skeleton_coupling(id, ids, {{2, 1}, {0, 1}}, rng), Error);
  EXPECT_THROW(sample_bridge(id, 0, 1, 2, rng), Error);
}

// First-coordinate path law of the N = 2 coupling equals the chain's own law.
TEST(Interpolation, MarginalPathLawMonteCarlo) {
  const GeneratedChain g = AperiodicChain(3, 45);
  const Kernel& k = g.kernel;
  const ProductKernel s = switching_kernel(k, coupling_set_C(k, 2, 0.5), 2);
  constexpr std::size_t kSeeds = 100000;
  std::map<std::pair<StateId, StateId>, std::size_t> counts;
  for (std::size_t seed = 0; seed < kSeeds; ++seed) {
    const CouplingTrace t = simulate_coupling(k, s, 0, 1, seed, 2);
    ++counts[{t.path[1].first, t.path[2].first}];
  }
  for (StateId a = 0; a < 3; ++a) {
    for (StateId b = 0; b < 3; ++b) {
      const double p = k.probability(0, a) * k.probability(a, b);
      const double sigma = std::sqrt(p * (1.0 - p) / kSeeds);
      const double freq = static_cast<double>(counts[{a, b}]) / kSeeds;
      EXPECT_LE(std::abs(freq - p), 3.0 * sigma + 1e-12) << a << "," << b;
    }
  }
}

TEST(SimulateCoupling, Examples) {
  const GeneratedChain g = AperiodicChain(5, 46);
  const CouplingTrace same = simulate_coupling(g.kernel, 2, 2, {1, 0.5}, 9, 20);
  EXPECT_EQ(same.meet_time, std::size_t{0});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const CouplingTrace t = simulate_coupling(Peri(), 0, 1, {1, 0.5}, seed, 1000);
    EXPECT_FALSE(t.meet_time);
  }
  const CouplingTrace a = simulate_coupling(g.kernel, 0, 4, {1, 0.5}, 77, 40);
  const CouplingTrace b = simulate_coupling(g.kernel, 0, 4, {1, 0.5}, 77, 40);
  EXPECT_EQ(a.path, b.path);
}

TEST(SimulateCoupling, PathsSupportedAndAbsorbed) {
  for (const auto& g : oracle::RandomChains(20, 6, 47)) {
    const Kernel& k = g.kernel;
    for (std::size_t N : {1u, 2u, 3u}) {
      const ProductKernel s = switching_kernel(k, coupling_set_C(k, N, 0.5), N);
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const StateId x = seed % k.size(), y = (seed * 7 + 1) % k.size();
        const CouplingTrace t = simulate_coupling(k, s, x, y, seed, 30);
        ASSERT_EQ(t.path.size(), 31u);
        for (std::size_t i = 0; i + 1 < t.path.size(); ++i) {
          EXPECT_GT(k.probability(t.path[i].first, t.path[i + 1].first), 0.0);
          EXPECT_GT(k.probability(t.path[i].second, t.path[i + 1].second), 0.0);
        }
        if (t.meet_time) {
          for (std::size_t i = *t.meet_time; i < t.path.size(); ++i) {
            EXPECT_EQ(t.path[i].first, t.path[i].second);
          }
        }
      }
    }
  }
}

// d(P_n(x,.), P_n(y,.)) <= P(no meeting by n) + 3σ at 10^5 seeds.
TEST(SimulateCoupling, CouplingInequality) {
  const GeneratedChain g = AperiodicChain(5, 48);
  const Kernel& k = g.kernel;
  const SwitchingParams params = choose_switching_params(k, g.ipm);
  const ProductKernel s =
      switching_kernel(k, coupling_set_C(k, params.N, params.p), params.N);
  constexpr std::size_t kSeeds = 100000, kHorizon = 40;
  std::vector<std::size_t> unmet(kHorizon + 1, 0);
  for (std::size_t seed = 0; seed < kSeeds; ++seed) {
    const CouplingTrace t = simulate_coupling(k, s, 0, 4, seed, kHorizon);
    const std::size_t tau = t.meet_time.value_or(kHorizon + 1);
    for (std::size_t n = 0; n < std::min(tau, kHorizon + 1); ++n) ++unmet[n];
  }
  for (std::size_t n = 0; n <= kHorizon; ++n) {
    const double d = tv_distance(n_step(k, 0, n), n_step(k, 4, n));
    const double sigma = std::sqrt(d * (1.0 - d) / kSeeds);
    EXPECT_LE(d, static_cast<double>(unmet[n]) / kSeeds + 3.0 * sigma + 1e-12) << n;
  }
  EXPECT_EQ(unmet[kHorizon], 0u);
}

TEST(ChooseParams, OffDiagonalCharge) {
  const GeneratedChain g = AperiodicChain(5, 49);
  const SwitchingParams p = choose_switching_params(g.kernel, g.ipm);
  const PairSet C = coupling_set_C(g.kernel, p.N, p.p);
  double off = 0.0;
  for (const auto& [x, y] : C.pairs()) {
    if (x != y) off += g.ipm[x] * g.ipm[y];
  }
  EXPECT_GT(off, 0.0);
  const SwitchingParams peri = choose_switching_params(Peri(), Distribution::Uniform(2));
  EXPECT_EQ(peri.N, 1u);
  EXPECT_DOUBLE_EQ(peri.p, 0.5);
}

TEST(CheckC, Examples) {
  const Fixture simple = fixture("simple", 6);
  const ConditionReport c1 = check_C(simple.kernel, simple.ipm, Index::k1);
  EXPECT_TRUE(c1.holds);
  const auto& ms = c1.witness["m"];
  bool saw_pair = false;
  for (const auto& entry : c1.witness["witnesses"]) {
    if (entry["pair"] != nlohmann::json::array({"0", "1"})) continue;
    saw_pair = true;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (entry["k_m"][i].is_null()) continue;
      const std::size_t k = entry["k_m"][i].get<std::size_t>();
      const double d = tv_distance(n_step(simple.kernel, 0, k), n_step(simple.kernel, 1, k));
      // d = 2^-k for k < N; the lumped boundary mass closes the gap at N.
      if (k < simple.truncation) EXPECT_NEAR(d, std::ldexp(1.0, -static_cast<int>(k)), 1e-12);
      EXPECT_LE(d, 1.0 / ms[i].get<double>());
    }
  }
  EXPECT_TRUE(saw_pair) << c1.witness.dump();
  EXPECT_FALSE(check_C(Peri(), Distribution::Uniform(2), Index::k2).holds);
  const Fixture st = fixture("standard", 30);
  EXPECT_TRUE(check_C(st.kernel, st.ipm, Index::k2).holds);
}

TEST(CheckC, FamiliesAgreeWithinIndex) {
  for (const auto& g : oracle::RandomChains(80, 7, 50)) {
    for (Index i : {Index::k1, Index::k2, Index::k3}) {
      const auto family = check_C_family(g.kernel, g.ipm, i);
      for (const ConditionReport& r : family) EXPECT_EQ(r.holds, family[0].holds);
    }
  }
}

}  // namespace
}  // namespace tvchain
