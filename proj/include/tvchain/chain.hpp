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

// Finite state spaces, distributions and Markov kernels: the chain-core layer
// every other module builds on.

#ifndef TVCHAIN_CHAIN_HPP_
#define TVCHAIN_CHAIN_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tvchain {

using StateId = std::size_t;

// Sorted, duplicate-free list of state ids.
using StateSet = std::vector<StateId>;

inline constexpr double kDefaultTolerance = 1e-9;

// Sorts and deduplicates `states`.
StateSet MakeStateSet(std::vector<StateId> states);

class StateSpace {
 public:
  // Throws kInvalidArgument on an empty or duplicated label list.
  explicit StateSpace(std::vector<std::string> labels);

  // Labels "0", "1", ..., "n-1".
  static StateSpace Indexed(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(StateId id) const { return labels_.at(id); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<StateId> find(std::string_view label) const;

  bool operator==(const StateSpace& other) const {
    return labels_ == other.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, StateId> index_;
};

// Probability vector over state ids. Entries are non-negative and sum to one
// within `tolerance`; support means mass > tolerance.
class Distribution {
 public:
  explicit Distribution(std::vector<double> mass,
                        double tolerance = kDefaultTolerance);

  static Distribution PointMass(std::size_t n, StateId x,
                                double tolerance = kDefaultTolerance);
  static Distribution Uniform(std::size_t n,
                              double tolerance = kDefaultTolerance);
  // Uniform on `states` (non-empty) inside a space of size n.
  static Distribution UniformOn(std::size_t n, const StateSet& states,
                                double tolerance = kDefaultTolerance);

  std::size_t size() const { return mass_.size(); }
  double operator[](StateId i) const { return mass_[i]; }
  std::span<const double> mass() const { return mass_; }
  double tolerance() const { return tolerance_; }

  bool charges(StateId i) const { return mass_[i] > tolerance_; }
  StateSet support() const;
  double measure(const StateSet& states) const;

 private:
  std::vector<double> mass_;
  double tolerance_;
};

struct Transition {
  StateId from;
  StateId to;
  double probability;
};

struct Entry {
  StateId state;
  double probability;
};

// Row-stochastic transition matrix with sparse rows. Immutable.
class Kernel {
 public:
  const StateSpace& space() const { return space_; }
  std::size_t size() const { return rows_.size(); }
  double tolerance() const { return tolerance_; }

  // Entries sorted by state with positive probability.
  std::span<const Entry> row(StateId x) const { return rows_.at(x); }
  Distribution row_distribution(StateId x) const;
  double probability(StateId x, StateId y) const;

  // Whether x -> y is an edge of the positive-probability digraph.
  bool has_edge(StateId x, StateId y) const {
    return probability(x, y) > tolerance_;
  }

  // Successors with probability > tolerance.
  std::vector<StateId> successors(StateId x) const;

  // Mass of P(x, .) on `states`.
  double row_mass(StateId x, const StateSet& states) const;

  bool operator==(const Kernel& other) const;

 private:
  friend Kernel validate_kernel(StateSpace, std::span<const Transition>,
                                double);
  Kernel(StateSpace space, std::vector<std::vector<Entry>> rows,
         double tolerance)
      : space_(std::move(space)), rows_(std::move(rows)),
        tolerance_(tolerance) {}

  StateSpace space_;
  std::vector<std::vector<Entry>> rows_;
  double tolerance_;
};

// Builds a kernel from raw (from, to, probability) triples. Duplicate pairs
// are summed; zero entries dropped. Throws RowNotStochastic when a row sum
// misses 1 by more than `tolerance`, kIndexOutOfRange for bad ids and
// kInvalidArgument for negative or non-finite probabilities.
Kernel validate_kernel(StateSpace space, std::span<const Transition> raw,
                       double tolerance = kDefaultTolerance);
Kernel validate_kernel(std::size_t n, std::span<const Transition> raw,
                       double tolerance = kDefaultTolerance);

// P_n(x, .) by repeated sparse row-vector products; n = 0 gives δ_x.
Distribution n_step(const Kernel& kernel, StateId x, std::size_t n);

// νP. Throws kSpaceMismatch if sizes differ.
Distribution push_forward(const Kernel& kernel, const Distribution& nu);

// ||νP - ν||_1.
double invariance_residual(const Kernel& kernel, const Distribution& nu);
bool is_invariant(const Kernel& kernel, const Distribution& nu);
// Throws kNotInvariant (or kSpaceMismatch) unless νP = ν within tolerance.
void require_invariant(const Kernel& kernel, const Distribution& nu);

// Extremal invariant probability measures, one per recurrent class, in the
// order of the recurrent classes of decompose(). Throws NumericalFailure if a
// class solve leaves a residual above tolerance.
std::vector<Distribution> invariant_measures(const Kernel& kernel);

// Set with P(x, members) = 1 for every member.
struct InvariantSet {
  StateSet members;
};

// Largest invariant subset of `seed`: the fixpoint of
// E_{i+1} = {x in E_i : P(x, E_i) = 1}. May be empty.
InvariantSet absorbing_closure(const Kernel& kernel, const StateSet& seed);

// Kernel on the members of `set`, relabeled 0..|set|-1 in member order and
// keeping the original labels. Throws kNotInvariant if a row leaks more than
// tolerance, kInvalidArgument if the set is empty.
Kernel restrict_to(const Kernel& kernel, const InvariantSet& set);

// Kernel with rows P_h(x, .). Requires h >= 1.
Kernel skeleton(const Kernel& kernel, std::size_t h);

}  // namespace tvchain

#endif  // TVCHAIN_CHAIN_HPP_
