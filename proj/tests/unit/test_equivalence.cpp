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
#include <vector>

#include "../oracles.hpp"
#include "tvchain/equivalence.hpp"
#include "tvchain/error.hpp"
#include "tvchain/harness.hpp"
#include "tvchain/structure.hpp"

namespace tvchain {
namespace {

Kernel Peri() { return validate_kernel(2, std::vector<Transition>{{0, 1, 1.0}, {1, 0, 1.0}}); }

Kernel Identity(std::size_t n) {
  std::vector<Transition> raw;
  for (StateId x = 0; x < n; ++x) raw.push_back({x, x, 1.0});
  return validate_kernel(n, raw);
}

// Least n in 1..|E|^2 + 1 with intersecting supports, from boolean matrix
// powers.
std::optional<std::size_t> FirstCommonStep(const oracle::Matrix& p, StateId x, StateId y) {
  const auto n = static_cast<std::size_t>(p.rows());
  oracle::Matrix cur = p;
  for (std::size_t step = 1; step <= n * n + 1; ++step) {
    for (std::size_t z = 0; z < n; ++z) {
      if (cur(x, z) > 0.0 && cur(y, z) > 0.0) return step;
    }
    cur = (cur * p).unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
  }
  return std::nullopt;
}

TEST(TvDistance, Examples) {
  EXPECT_DOUBLE_EQ(tv_distance(Distribution::PointMass(2, 0), Distribution::Uniform(2)), 0.5);
  const Distribution nu({0.3, 0.7});
  EXPECT_DOUBLE_EQ(tv_distance(nu, nu), 0.0);
  EXPECT_DOUBLE_EQ(tv_distance(Distribution({0.75, 0.25}), Distribution({0.25, 0.75})), 0.5);
  try {
    tv_distance(nu, Distribution::Uniform(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSpaceMismatch);
  }
}

TEST(TvDistance, SubsetSupremumAndMetric) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.Below(10);
    const Distribution a = oracle::RandomMeasure(rng, n, 1 + rng.Below(n));
    const Distribution b = oracle::RandomMeasure(rng, n, 1 + rng.Below(n));
    const Distribution c = oracle::RandomMeasure(rng, n, 1 + rng.Below(n));
    const double ab = tv_distance(a, b);
    EXPECT_NEAR(ab, oracle::TvBySubsets(oracle::AsVector(a), oracle::AsVector(b)), 1e-12);
    EXPECT_DOUBLE_EQ(ab, tv_distance(b, a));
    EXPECT_LE(ab, tv_distance(a, c) + tv_distance(c, b) + 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(TvCurve, Examples) {
  const TVCurve peri = tv_curve(Peri(), 0, Distribution::Uniform(2), 50);
  for (double v : peri.values) EXPECT_DOUBLE_EQ(v, 0.5);
  EXPECT_DOUBLE_EQ(peri.limit, 0.5);
  const Fixture st = fixture("standard", 60, Boundary::kAbsorb);
  EXPECT_NEAR(tv_curve(st.kernel, 3, st.ipm, 10).limit, 0.875, 1e-6);
  GeneratorParams params;
  params.n_states = 6;
  params.seed = 8;
  const GeneratedChain g = random_chain(params);
  EXPECT_NEAR(tv_curve(g.kernel, 2, g.ipm, 10).limit, 0.0, 1e-12);
}

TEST(TvCurve, StandardFixtureWithinOneMinusHalfPowers) {
  const Fixture st = fixture("standard", 60);
  for (StateId x = 1; x <= 20; ++x) {
    const TVCurve c = tv_curve(st.kernel, x, st.ipm, kStandardHorizon);
    EXPECT_NEAR(c.values.back(), 1.0 - std::ldexp(1.0, -static_cast<int>(x)), 1e-6);
  }
}

TEST(TvCurve, MonotoneAndLimitMatchesPowers) {
  for (const auto& g : oracle::RandomChains(120, 6, 32)) {
    const oracle::Matrix p = oracle::Dense(g.kernel);
    const auto limits = oracle::LimitsByPowers(p, oracle::AsVector(g.ipm));
    for (StateId x = 0; x < g.kernel.size(); ++x) {
      const TVCurve c = tv_curve(g.kernel, x, g.ipm, 60);
      for (std::size_t n = 0; n + 1 < c.values.size(); ++n) {
        EXPECT_LE(c.values[n + 1], c.values[n] + 1e-9);
      }
      EXPECT_NEAR(c.limit, limits[x], 1e-6);
      EXPECT_LE(c.limit, c.values.back() + 1e-9);
    }
  }
}

TEST(PairReachability, Examples) {
  const PairReachability peri = pair_reachability(Peri());
  EXPECT_FALSE(peri.at(0, 1));
  EXPECT_EQ(peri.at(0, 0), std::size_t{1});
  const PairReachability id = pair_reachability(Identity(2));
  EXPECT_EQ(id.at(0, 0), std::size_t{1});
  EXPECT_FALSE(id.at(0, 1));
}

TEST(PairReachability, MatchesBooleanPowers) {
  for (const auto& g : oracle::RandomChains(100, 7, 33)) {
    const oracle::Matrix p = oracle::Dense(g.kernel);
    const PairReachability table = pair_reachability(g.kernel);
    for (StateId x = 0; x < g.kernel.size(); ++x) {
      for (StateId y = 0; y < g.kernel.size(); ++y) {
        const auto expected = FirstCommonStep(p, x, y);
        EXPECT_EQ(table.at(x, y), expected) << x << "," << y;
        if (expected) {
          const auto z = common_state(g.kernel, x, y, *expected);
          ASSERT_TRUE(z);
          const oracle::Matrix pn = oracle::Power(p, *expected);
          EXPECT_GT(pn(x, *z), 0.0);
          EXPECT_GT(pn(y, *z), 0.0);
        }
      }
    }
  }
}

TEST(AsymptoticEquivalence, SimpleWitness) {
  const Fixture simple = fixture("simple", 40);
  const AsymEquivResult r = asymptotically_equivalent(simple.kernel, 0, 1, {0.0625});
  EXPECT_TRUE(r.holds_up_to_cap);
  ASSERT_TRUE(r.witnesses[0]);
  EXPECT_EQ(r.witnesses[0]->n, 4u);
  EXPECT_EQ(r.witnesses[0]->A, (StateSet{1}));
  EXPECT_NEAR(r.witnesses[0]->mass_x, 0.9375, 1e-12);
  EXPECT_DOUBLE_EQ(r.witnesses[0]->mass_y, 1.0);
}

TEST(AsymptoticEquivalence, ReflexiveAndPeri) {
  const Fixture simple = fixture("simple", 20);
  const AsymEquivResult self = asymptotically_equivalent(simple.kernel, 3, 3, {0.5});
  ASSERT_TRUE(self.witnesses[0]);
  EXPECT_EQ(self.witnesses[0]->n, 1u);
  EXPECT_EQ(self.witnesses[0]->A, n_step(simple.kernel, 3, 1).support());
  const AsymEquivResult peri = asymptotically_equivalent(Peri(), 0, 1, {0.4, 0.1}, 500);
  EXPECT_FALSE(peri.holds_up_to_cap);
  EXPECT_FALSE(peri.witnesses[0]);
  EXPECT_FALSE(peri.witnesses[1]);
  EXPECT_THROW(asymptotically_equivalent(Peri(), 0, 1, {1.5}), Error);
}

// A witness at n persists at n + 1 (re-verified from the n-step laws), and
// the exact relation is an equivalence relation.
TEST(AsymptoticEquivalence, MonotoneWitnessesAndEquivalenceRelation) {
  for (const auto& g : oracle::RandomChains(60, 6, 34)) {
    const Kernel& k = g.kernel;
    const SkeletonLimits limits = skeleton_limits(k);
    const std::size_t n = k.size();
    for (StateId x = 0; x < n; ++x) {
      EXPECT_TRUE(asymptotically_equivalent_exact(limits, x, x));
      for (StateId y = 0; y < n; ++y) {
        const bool xy = asymptotically_equivalent_exact(limits, x, y);
        EXPECT_EQ(xy, asymptotically_equivalent_exact(limits, y, x));
        for (StateId z = 0; z < n; ++z) {
          if (xy && asymptotically_equivalent_exact(limits, y, z)) {
            EXPECT_TRUE(asymptotically_equivalent_exact(limits, x, z));
          }
        }
        const AsymEquivResult r = asymptotically_equivalent(k, x, y, {0.05});
        if (!r.witnesses[0]) continue;
        EXPECT_TRUE(xy);
        const std::size_t m = r.witnesses[0]->n + 1;
        const Distribution px = n_step(k, x, m), py = n_step(k, y, m);
        double ax = 0.0, ay = 0.0;
        for (StateId s = 0; s < n; ++s) {
          if (px.charges(s) && py.charges(s)) ax += px[s], ay += py[s];
        }
        EXPECT_GE(ax, 0.95 - 1e-9);
        EXPECT_GE(ay, 0.95 - 1e-9);
      }
    }
  }
}

TEST(CheckA, Examples) {
  const ConditionReport a3 = check_A(Peri(), Distribution::Uniform(2), AVariant::k3);
  EXPECT_FALSE(a3.holds);
  EXPECT_NE(a3.witness.dump().find("\"0\""), std::string::npos) << a3.witness.dump();
  const Fixture st = fixture("standard", 30);
  EXPECT_TRUE(check_A(st.kernel, st.ipm, AVariant::k2).holds);
  // A1 holds on the finite truncation; the failure is the untruncated one.
  const Fixture simple = fixture("simple", 30);
  EXPECT_TRUE(check_A(simple.kernel, simple.ipm, AVariant::k1).holds);
}

TEST(CheckG, Examples) {
  const Fixture st = fixture("standard", 30);
  const ConditionReport g2 = check_G(st.kernel, st.ipm, Index::k2);
  EXPECT_TRUE(g2.holds);
  EXPECT_FALSE(check_G(Peri(), Distribution::Uniform(2), Index::k3).holds);
  const Fixture simple = fixture("simple", 20);
  EXPECT_TRUE(check_G(simple.kernel, simple.ipm, Index::k1).holds);
}

TEST(CheckG, AgreesWithA) {
  for (const auto& g : oracle::RandomChains(120, 8, 35)) {
    EXPECT_EQ(check_G(g.kernel, g.ipm, Index::k2).holds,
              check_A(g.kernel, g.ipm, AVariant::k2).holds);
    EXPECT_EQ(check_G(g.kernel, g.ipm, Index::k3).holds,
              check_A(g.kernel, g.ipm, AVariant::k3).holds);
  }
}

// d(μ, P_n(x,.)) <= Σ_y μ(y) d(P_n(y,.), P_n(x,.)).
TEST(DirectBound, RandomChains) {
  for (const auto& g : oracle::RandomChains(80, 8, 36)) {
    for (std::size_t n = 0; n <= 12; ++n) {
      for (StateId x = 0; x < g.kernel.size(); ++x) {
        double rhs = 0.0;
        for (StateId y = 0; y < g.kernel.size(); ++y) {
          rhs += g.ipm[y] * tv_distance(n_step(g.kernel, y, n), n_step(g.kernel, x, n));
        }
        EXPECT_LE(tv_distance(g.ipm, n_step(g.kernel, x, n)), rhs + 1e-9);
      }
    }
  }
}

}  // namespace
}  // namespace tvchain
