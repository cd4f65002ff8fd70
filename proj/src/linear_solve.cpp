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

#include "linear_solve.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "tvchain/error.hpp"

namespace tvchain::internal {

Eigen::MatrixXd SolveEscapeSystem(const SparseRows& q, const Eigen::MatrixXd& rhs,
                                  double tolerance, const char* context) {
  const auto n = static_cast<Eigen::Index>(q.size());
  if (n == 0) return Eigen::MatrixXd(0, rhs.cols());
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index i = 0; i < n; ++i) {
    triplets.emplace_back(i, i, 1.0);
    for (const auto& [j, p] : q[i]) {
      triplets.emplace_back(i, static_cast<Eigen::Index>(j), -p);
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) {
    throw NumericalFailure(std::string(context) + " (singular system)",
                           INFINITY);
  }
  Eigen::MatrixXd x = lu.solve(rhs);
  const double residual = (m * x - rhs).cwiseAbs().maxCoeff();
  if (!(residual <= tolerance)) throw NumericalFailure(context, residual);
  return x;
}

std::vector<bool> ReverseReach(const SparseRows& rows,
                               const std::vector<bool>& seed,
                               const std::vector<bool>& open,
                               double edge_threshold) {
  const std::size_t n = rows.size();
  std::vector<std::vector<std::size_t>> pred(n);
  for (std::size_t u = 0; u < n; ++u) {
    if (!open[u]) continue;
    for (const auto& [v, p] : rows[u]) {
      if (p > edge_threshold) pred[v].push_back(u);
    }
  }
  std::vector<bool> marks = seed;
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    if (seed[v]) queue.push_back(v);
  }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t u : pred[v]) {
      if (!marks[u]) {
        marks[u] = true;
        queue.push_back(u);
      }
    }
  }
  return marks;
}

std::vector<double> ReachProbability(const SparseRows& rows,
                                     const std::vector<bool>& target,
                                     double edge_threshold, double tolerance,
                                     const char* context) {
  const std::size_t n = rows.size();
  std::vector<bool> outside(n);
  for (std::size_t v = 0; v < n; ++v) outside[v] = !target[v];
  const std::vector<bool> reaches =
      ReverseReach(rows, target, outside, edge_threshold);
  std::vector<bool> zero(n);
  for (std::size_t v = 0; v < n; ++v) zero[v] = !reaches[v];
  const std::vector<bool> may_fail =
      ReverseReach(rows, zero, outside, edge_threshold);

  std::vector<double> h(n, 0.0);
  std::vector<std::size_t> unknowns;
  std::vector<std::size_t> position(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    if (target[v] || !may_fail[v]) {
      h[v] = 1.0;
    } else if (!zero[v]) {
      position[v] = unknowns.size();
      unknowns.push_back(v);
    }
  }
  if (unknowns.empty()) return h;
  SparseRows q(unknowns.size());
  Eigen::MatrixXd rhs =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(unknowns.size()), 1);
  for (std::size_t i = 0; i < unknowns.size(); ++i) {
    for (const auto& [v, p] : rows[unknowns[i]]) {
      if (position[v] != n) {
        q[i].emplace_back(position[v], p);
      } else {
        rhs(static_cast<Eigen::Index>(i), 0) += p * h[v];
      }
    }
  }
  const Eigen::MatrixXd x = SolveEscapeSystem(q, rhs, tolerance, context);
  for (std::size_t i = 0; i < unknowns.size(); ++i) {
    h[unknowns[i]] = std::clamp(x(static_cast<Eigen::Index>(i), 0), 0.0, 1.0);
  }
  return h;
}

SparseRows KernelRows(const Kernel& kernel) {
  SparseRows rows(kernel.size());
  for (StateId x = 0; x < kernel.size(); ++x) {
    for (const Entry& e : kernel.row(x)) {
      rows[x].emplace_back(e.state, e.probability);
    }
  }
  return rows;
}

SparseRows RestrictRows(const Kernel& kernel, const StateSet& unknowns) {
  SparseRows rows(unknowns.size());
  for (std::size_t i = 0; i < unknowns.size(); ++i) {
    for (const Entry& e : kernel.row(unknowns[i])) {
      auto it = std::lower_bound(unknowns.begin(), unknowns.end(), e.state);
      if (it == unknowns.end() || *it != e.state) continue;
      rows[i].emplace_back(static_cast<std::size_t>(it - unknowns.begin()),
                           e.probability);
    }
  }
  return rows;
}

}  // namespace tvchain::internal
