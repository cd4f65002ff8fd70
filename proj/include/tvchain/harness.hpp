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

// Instance sources: the seeded random chain generator and the three
// counterexample fixtures with their expected verdicts.

#ifndef TVCHAIN_HARNESS_HPP_
#define TVCHAIN_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tvchain/chain.hpp"
#include "tvchain/rng.hpp"

namespace tvchain {

struct GeneratorParams {
  std::size_t n_states = 5;
  std::size_t n_recurrent_classes = 1;
  std::vector<std::size_t> periods{1};  // one per recurrent class
  double transient_fraction = 0.0;
  double sparsity = 0.0;  // in [0, 1): fraction of optional edges dropped
  std::uint64_t seed = 0;
};

struct GeneratedChain {
  Kernel kernel;
  Distribution ipm;
};

// Recurrent classes are cycles of blocks (hub state per block, so the period
// is exact) and transient states drain toward them. The returned ipm is a
// seed-determined convex mix of the extremal ipms; some mixes put all weight
// on one class. Throws kUnrealizableParams.
GeneratedChain random_chain(const GeneratorParams& params);

// Mixed class/period structure with 1..max_states states.
GeneratorParams random_params(Rng& rng, std::size_t max_states);

enum class Boundary { kReflect, kAbsorb };

struct Expectation {
  std::string id;
  std::string qualifier;  // e.g. "horizon n <= 39"; empty when exact
  nlohmann::json value;
};

struct Fixture {
  std::string name;
  std::size_t truncation = 0;
  Kernel kernel;
  Distribution ipm;
  std::vector<Expectation> expected;
  std::vector<std::string> notes;
};

// "peri" (truncation ignored), "simple" and "standard" on states 0..N.
// "simple" lumps the tail 2^{-N} of row 0 onto N. "standard" either reflects
// the up-step at N back to N (kReflect) or makes N absorbing (kAbsorb).
// Throws kTruncationTooSmall for N < 3, kInvalidArgument for unknown names.
Fixture fixture(std::string_view name, std::size_t truncation,
                Boundary boundary = Boundary::kReflect);

inline constexpr std::size_t kStandardHorizon = 2000;

struct ExpectationResult {
  std::string id;
  bool pass = false;
  std::string detail;
};

// Evaluates every expectation of the fixture with the library's deciders.
std::vector<ExpectationResult> evaluate_expectations(const Fixture& fixture);

nlohmann::json ToJson(const Expectation& expectation);

}  // namespace tvchain

#endif  // TVCHAIN_HARNESS_HPP_
