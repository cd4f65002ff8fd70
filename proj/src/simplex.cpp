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

#include "tvchain/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "tvchain/error.hpp"

namespace tvchain {
namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), cells_((rows + 1) * (cols + 1), 0.0), basis_(rows) {}

  std::size_t rows() const { return basis_.size(); }
  double& at(std::size_t r, std::size_t c) { return cells_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  // Objective row lives after the constraint rows.
  double& cost(std::size_t c) { return at(rows(), c); }
  std::vector<std::size_t>& basis() { return basis_; }

  void Pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    for (std::size_t r = 0; r <= rows(); ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  void DropRow(std::size_t r) {
    const std::size_t width = cols_ + 1;
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(r * width),
                 cells_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  // Bland's rule over columns [0, limit). Returns false when unbounded.
  bool Optimize(std::size_t limit, double tol) {
    while (true) {
      std::size_t enter = limit;
      for (std::size_t c = 0; c < limit; ++c) {
        if (cost(c) < -tol) {
          enter = c;
          break;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = rows();
      double best = 0.0;
      for (std::size_t r = 0; r < rows(); ++r) {
        const double a = at(r, enter);
        if (a <= tol) continue;
        const double ratio = rhs(r) / a;
        if (leave == rows() || ratio < best - tol ||
            (std::abs(ratio - best) <= tol && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows()) return false;
      Pivot(leave, enter);
    }
  }

 private:
  std::size_t cols_;
  std::vector<double> cells_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, double tolerance) {
  const std::size_t m = lp.A.size();
  const std::size_t n = lp.c.size();
  if (lp.b.size() != m) {
    throw Error(ErrorCode::kInvalidArgument, "LP: b has the wrong length");
  }
  for (const auto& row : lp.A) {
    if (row.size() != n) {
      throw Error(ErrorCode::kInvalidArgument, "LP: ragged constraint matrix");
    }
  }
  // Columns: n structural variables, then m artificials.
  Tableau t(m, n + m);
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = lp.b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = sign * lp.A[r][c];
    t.at(r, n + r) = 1.0;
    t.rhs(r) = sign * lp.b[r];
    t.basis()[r] = n + r;
  }
  // Phase 1 cost: sum of artificials, expressed in the non-basic columns.
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) t.cost(c) -= t.at(r, c);
    t.cost(n + m) -= t.rhs(r);
  }
  LpSolution out;
  t.Optimize(n + m, tolerance);
  const double scale = 1.0 + std::abs(t.cost(n + m));
  if (-t.cost(n + m) > 1e-9 * scale) {
    out.status = LpStatus::kInfeasible;
    return out;
  }
  // Drive artificials out of the basis; rows where that fails are redundant.
  for (std::size_t r = 0; r < t.rows();) {
    if (t.basis()[r] < n) {
      ++r;
      continue;
    }
    std::size_t pc = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (std::abs(t.at(r, c)) > 1e-9) {
        pc = c;
        break;
      }
    }
    if (pc == n) {
      t.DropRow(r);
    } else {
      t.Pivot(r, pc);
      ++r;
    }
  }
  // Phase 2 objective row.
  for (std::size_t c = 0; c <= n + m; ++c) t.cost(c) = 0.0;
  for (std::size_t c = 0; c < n; ++c) t.cost(c) = lp.c[c];
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const double cb = lp.c[t.basis()[r]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= n + m; ++c) t.cost(c) -= cb * t.at(r, c);
  }
  if (!t.Optimize(n, tolerance)) {
    out.status = LpStatus::kUnbounded;
    return out;
  }
  out.status = LpStatus::kOptimal;
  out.x.assign(n, 0.0);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    out.x[t.basis()[r]] = std::max(0.0, t.rhs(r));
  }
  out.objective = 0.0;
  for (std::size_t c = 0; c < n; ++c) out.objective += lp.c[c] * out.x[c];
  return out;
}

}  // namespace tvchain
