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

#ifndef TVCHAIN_SIMPLEX_HPP_
#define TVCHAIN_SIMPLEX_HPP_

#include <vector>

namespace tvchain {

// Dense standard-form linear program: minimize c^T x s.t. A x = b, x >= 0.
struct LinearProgram {
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<double> c;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Two-phase tableau simplex with Bland's rule. Redundant equality rows are
// tolerated.
LpSolution solve_lp(const LinearProgram& lp, double tolerance = 1e-12);

}  // namespace tvchain

#endif  // TVCHAIN_SIMPLEX_HPP_
