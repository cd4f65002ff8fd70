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

#ifndef TVCHAIN_RNG_HPP_
#define TVCHAIN_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>

namespace tvchain {

// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t MixSeed(std::uint64_t value);

// Seedable, splittable generator. The engine and the conversions below are
// fully specified, so a (seed, parameters) pair reproduces the same stream on
// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(MixSeed(seed)) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer on [0, n). Requires n > 0.
  std::uint64_t Below(std::uint64_t n);

  // Index drawn with probability proportional to weights[i].
  std::size_t Categorical(std::span<const double> weights);

  // Child generator for stream `stream`; does not advance this generator.
  Rng Split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace tvchain

#endif  // TVCHAIN_RNG_HPP_
