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

// Switching-coupling construction shared by the C- and G-condition checkers.

#ifndef TVCHAIN_SRC_SWITCHING_ANALYSIS_HPP_
#define TVCHAIN_SRC_SWITCHING_ANALYSIS_HPP_

#include <optional>
#include <vector>

#include "tvchain/coupling.hpp"

namespace tvchain::internal {

struct SwitchingAnalysis {
  SwitchingParams params;
  ProductKernel product;
  MeetingAnalysis meeting;
  // Exact meeting probability per pair (x * n + y); empty when the solve is
  // too ill-conditioned to trust.
  std::optional<std::vector<double>> probability;
};

SwitchingAnalysis AnalyzeSwitching(const Kernel& kernel, const Distribution& mu);

// Meeting probabilities cross-checked against the graph verdicts: true when
// every pair in `pairs` that must meet surely has probability 1 and every
// pair that cannot meet surely has probability below 1 (or, with
// `positive_only`, the same with "meets with positive probability").
bool ProbabilitiesAgree(const SwitchingAnalysis& analysis,
                        const std::vector<StatePair>& pairs, bool positive_only);

}  // namespace tvchain::internal

#endif  // TVCHAIN_SRC_SWITCHING_ANALYSIS_HPP_
