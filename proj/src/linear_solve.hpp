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

#ifndef TVCHAIN_SRC_LINEAR_SOLVE_HPP_
#define TVCHAIN_SRC_LINEAR_SOLVE_HPP_

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tvchain/chain.hpp"

namespace tvchain::internal {

using SparseRows = std::vector<std::vector<std::pair<std::size_t, double>>>;

// Solves (I - Q) X = rhs where Q is substochastic with an escape path from
// every row. Throws NumericalFailure if the residual exceeds `tolerance`.
Eigen::MatrixXd SolveEscapeSystem(const SparseRows& q, const Eigen::MatrixXd& rhs,
                                  double tolerance, const char* context);

// marks[v] iff v can reach a seed state, walking edges of weight above
// `edge_threshold` out of states where `open` is set.
std::vector<bool> ReverseReach(const SparseRows& rows,
                               const std::vector<bool>& seed,
                               const std::vector<bool>& open,
                               double edge_threshold);

// Probability of ever entering `target` (time 0 included), per state of a
// chain given by full sparse rows. Graph questions use edges with weight above
// `edge_threshold`: states that cannot reach the target get 0, states that
// cannot reach such a state before the target get exactly 1, and only the
// remaining states go through the linear solve.
std::vector<double> ReachProbability(const SparseRows& rows,
                                     const std::vector<bool>& target,
                                     double edge_threshold, double tolerance,
                                     const char* context);

// Full rows of the kernel in SparseRows form.
SparseRows KernelRows(const Kernel& kernel);

// Q = P restricted to `unknowns` (sorted), re-indexed by position.
SparseRows RestrictRows(const Kernel& kernel, const StateSet& unknowns);

}  // namespace tvchain::internal

#endif  // TVCHAIN_SRC_LINEAR_SOLVE_HPP_
