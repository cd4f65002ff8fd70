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

#include "tvchain/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "tvchain/error.hpp"
#include "tvchain/graph.hpp"

namespace tvchain {

StateSet MakeStateSet(std::vector<StateId> states) {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  return states;
}

StateSpace::StateSpace(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "state space must be non-empty");
  }
  for (StateId i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate state label '" + labels_[i] + "'");
    }
  }
}

StateSpace StateSpace::Indexed(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return StateSpace(std::move(labels));
}

std::optional<StateId> StateSpace::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Distribution::Distribution(std::vector<double> mass, double tolerance)
    : mass_(std::move(mass)), tolerance_(tolerance) {
  if (mass_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "distribution must be non-empty");
  }
  double total = 0.0;
  for (double& m : mass_) {
    if (!std::isfinite(m) || m < -tolerance_) {
      throw Error(ErrorCode::kInvalidArgument,
                  "distribution entries must be non-negative");
    }
    if (m < 0.0) m = 0.0;
    total += m;
  }
  if (std::abs(total - 1.0) > tolerance_) {
    std::ostringstream os;
    os.precision(17);
    os << "distribution sums to " << total;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

Distribution Distribution::PointMass(std::size_t n, StateId x,
                                     double tolerance) {
  if (x >= n) throw Error(ErrorCode::kIndexOutOfRange, "point mass index");
  std::vector<double> mass(n, 0.0);
  mass[x] = 1.0;
  return Distribution(std::move(mass), tolerance);
}

Distribution Distribution::Uniform(std::size_t n, double tolerance) {
  return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)),
                      tolerance);
}

Distribution Distribution::UniformOn(std::size_t n, const StateSet& states,
                                     double tolerance) {
  if (states.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "uniform on an empty set");
  }
  std::vector<double> mass(n, 0.0);
  for (StateId s : states) {
    if (s >= n) throw Error(ErrorCode::kIndexOutOfRange, "uniform support");
    mass[s] = 1.0 / static_cast<double>(states.size());
  }
  return Distribution(std::move(mass), tolerance);
}

StateSet Distribution::support() const {
  StateSet out;
  for (StateId i = 0; i < mass_.size(); ++i) {
    if (charges(i)) out.push_back(i);
  }
  return out;
}

double Distribution::measure(const StateSet& states) const {
  double total = 0.0;
  for (StateId s : states) total += mass_.at(s);
  return total;
}

Distribution Kernel::row_distribution(StateId x) const {
  std::vector<double> mass(size(), 0.0);
  for (const Entry& e : row(x)) mass[e.state] = e.probability;
  return Distribution(std::move(mass), tolerance_);
}

double Kernel::probability(StateId x, StateId y) const {
  const auto& r = rows_.at(x);
  auto it = std::lower_bound(
      r.begin(), r.end(), y,
      [](const Entry& e, StateId id) { return e.state < id; });
  return (it != r.end() && it->state == y) ? it->probability : 0.0;
}

std::vector<StateId> Kernel::successors(StateId x) const {
  std::vector<StateId> out;
  for (const Entry& e : row(x)) {
    if (e.probability > tolerance_) out.push_back(e.state);
  }
  return out;
}

double Kernel::row_mass(StateId x, const StateSet& states) const {
  double total = 0.0;
  for (const Entry& e : row(x)) {
    if (std::binary_search(states.begin(), states.end(), e.state)) {
      total += e.probability;
    }
  }
  return total;
}

bool Kernel::operator==(const Kernel& other) const {
  if (!(space_ == other.space_) || rows_.size() != other.rows_.size()) {
    return false;
  }
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    const auto& a = rows_[x];
    const auto& b = other.rows_[x];
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k].state != b[k].state || a[k].probability != b[k].probability) {
        return false;
      }
    }
  }
  return true;
}

Kernel validate_kernel(StateSpace space, std::span<const Transition> raw,
                       double tolerance) {
  const std::size_t n = space.size();
  std::vector<std::vector<Entry>> rows(n);
  for (const Transition& t : raw) {
    if (t.from >= n || t.to >= n) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "transition (" + std::to_string(t.from) + ", " +
                      std::to_string(t.to) + ") outside a space of size " +
                      std::to_string(n));
    }
    if (!std::isfinite(t.probability) || t.probability < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "negative or non-finite probability in row " +
                      std::to_string(t.from));
    }
    if (t.probability == 0.0) continue;
    rows[t.from].push_back({t.to, t.probability});
  }
  for (StateId x = 0; x < n; ++x) {
    auto& r = rows[x];
    std::sort(r.begin(), r.end(),
              [](const Entry& a, const Entry& b) { return a.state < b.state; });
    std::vector<Entry> merged;
    for (const Entry& e : r) {
      if (!merged.empty() && merged.back().state == e.state) {
        merged.back().probability += e.probability;
      } else {
        merged.push_back(e);
      }
    }
    double sum = 0.0;
    for (const Entry& e : merged) sum += e.probability;
    if (std::abs(sum - 1.0) > tolerance) throw RowNotStochastic(x, sum);
    r = std::move(merged);
  }
  return Kernel(std::move(space), std::move(rows), tolerance);
}

Kernel validate_kernel(std::size_t n, std::span<const Transition> raw,
                       double tolerance) {
  return validate_kernel(StateSpace::Indexed(n), raw, tolerance);
}

namespace {

std::vector<double> Step(const Kernel& kernel, const std::vector<double>& cur) {
  std::vector<double> next(cur.size(), 0.0);
  for (StateId i = 0; i < cur.size(); ++i) {
    if (cur[i] == 0.0) continue;
    for (const Entry& e : kernel.row(i)) next[e.state] += cur[i] * e.probability;
  }
  return next;
}

}  // namespace

Distribution n_step(const Kernel& kernel, StateId x, std::size_t n) {
  if (x >= kernel.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "n_step start state");
  }
  std::vector<double> cur(kernel.size(), 0.0);
  cur[x] = 1.0;
  for (std::size_t k = 0; k < n; ++k) cur = Step(kernel, cur);
  return Distribution(std::move(cur), kernel.tolerance());
}

Distribution push_forward(const Kernel& kernel, const Distribution& nu) {
  if (nu.size() != kernel.size()) {
    throw Error(ErrorCode::kSpaceMismatch,
                "distribution and kernel sizes differ");
  }
  std::vector<double> cur(nu.mass().begin(), nu.mass().end());
  return Distribution(Step(kernel, cur), nu.tolerance());
}

double invariance_residual(const Kernel& kernel, const Distribution& nu) {
  const Distribution pushed = push_forward(kernel, nu);
  double residual = 0.0;
  for (StateId i = 0; i < nu.size(); ++i) {
    residual += std::abs(pushed[i] - nu[i]);
  }
  return residual;
}

bool is_invariant(const Kernel& kernel, const Distribution& nu) {
  return nu.size() == kernel.size() &&
         invariance_residual(kernel, nu) <= kernel.tolerance();
}

void require_invariant(const Kernel& kernel, const Distribution& nu) {
  const double residual = invariance_residual(kernel, nu);
  if (residual > kernel.tolerance()) {
    throw Error(ErrorCode::kNotInvariant,
                "measure is not invariant (||μP - μ||_1 = " +
                    std::to_string(residual) + ")");
  }
}

std::vector<Distribution> invariant_measures(const Kernel& kernel) {
  const Components scc = strongly_connected_components(kernel);
  std::vector<Distribution> out;
  for (const StateSet& members : scc.members) {
    bool closed = true;
    for (StateId x : members) {
      for (StateId y : kernel.successors(x)) {
        if (scc.component_of[y] != scc.component_of[members.front()]) {
          closed = false;
        }
      }
    }
    if (!closed) continue;

    // (P_R^T - I) μ = 0 with a normalization row appended.
    const auto s = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(s + 1, s);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(s + 1);
    for (Eigen::Index i = 0; i < s; ++i) {
      a(i, i) -= 1.0;
      a(s, i) = 1.0;
      for (const Entry& e : kernel.row(members[i])) {
        auto it = std::lower_bound(members.begin(), members.end(), e.state);
        if (it == members.end() || *it != e.state) continue;
        a(it - members.begin(), i) += e.probability;
      }
    }
    b(s) = 1.0;
    const Eigen::VectorXd solution = a.colPivHouseholderQr().solve(b);
    std::vector<double> mass(kernel.size(), 0.0);
    double total = 0.0;
    for (Eigen::Index i = 0; i < s; ++i) {
      mass[members[i]] = std::max(0.0, solution(i));
      total += mass[members[i]];
    }
    for (double& m : mass) m /= total;
    Distribution mu(std::move(mass), kernel.tolerance());
    const double residual = invariance_residual(kernel, mu);
    if (!(residual <= kernel.tolerance())) {
      throw NumericalFailure("invariant measure solve", residual);
    }
    out.push_back(std::move(mu));
  }
  return out;
}

InvariantSet absorbing_closure(const Kernel& kernel, const StateSet& seed) {
  StateSet current = MakeStateSet(seed);
  for (StateId x : current) {
    if (x >= kernel.size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "absorbing_closure seed");
    }
  }
  while (true) {
    StateSet next;
    for (StateId x : current) {
      if (kernel.row_mass(x, current) >= 1.0 - kernel.tolerance()) {
        next.push_back(x);
      }
    }
    if (next.size() == current.size()) return InvariantSet{std::move(next)};
    current = std::move(next);
  }
}

Kernel restrict_to(const Kernel& kernel, const InvariantSet& set) {
  const StateSet members = MakeStateSet(set.members);
  if (members.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "restriction to an empty set");
  }
  std::vector<std::string> labels;
  labels.reserve(members.size());
  for (StateId x : members) {
    if (x >= kernel.size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "restriction member");
    }
    labels.push_back(kernel.space().label(x));
  }
  std::vector<Transition> raw;
  for (std::size_t i = 0; i < members.size(); ++i) {
    double inside = 0.0;
    for (const Entry& e : kernel.row(members[i])) {
      auto it = std::lower_bound(members.begin(), members.end(), e.state);
      if (it == members.end() || *it != e.state) continue;
      raw.push_back({i, static_cast<StateId>(it - members.begin()),
                     e.probability});
      inside += e.probability;
    }
    if (1.0 - inside > kernel.tolerance()) {
      throw Error(ErrorCode::kNotInvariant,
                  "state " + kernel.space().label(members[i]) +
                      " leaks mass outside the set");
    }
  }
  return validate_kernel(StateSpace(std::move(labels)), raw,
                         kernel.tolerance());
}

Kernel skeleton(const Kernel& kernel, std::size_t h) {
  if (h == 0) throw Error(ErrorCode::kInvalidArgument, "skeleton step h >= 1");
  std::vector<Transition> raw;
  for (StateId x = 0; x < kernel.size(); ++x) {
    const Distribution row = n_step(kernel, x, h);
    for (StateId y = 0; y < row.size(); ++y) {
      if (row[y] > 0.0) raw.push_back({x, y, row[y]});
    }
  }
  return validate_kernel(kernel.space(), raw, kernel.tolerance());
}

}  // namespace tvchain
