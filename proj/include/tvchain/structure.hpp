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

// Class structure, periods, hitting and infinite-visit probabilities, and the
// aperiodicity / irreducibility / Harris deciders behind the B-conditions.

#ifndef TVCHAIN_STRUCTURE_HPP_
#define TVCHAIN_STRUCTURE_HPP_

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "tvchain/chain.hpp"
#include "tvchain/report.hpp"

namespace tvchain {

struct ClassDecomposition {
  // Communicating classes ordered by smallest member.
  std::vector<StateSet> classes;
  std::vector<std::size_t> class_of;
  // A class is recurrent iff it is closed.
  std::vector<bool> recurrent;
  // gcd of cycle lengths for recurrent classes; 0 for transient ones.
  std::vector<std::size_t> period;
  // For recurrent class c, period[c] cells with P(x, cell[i+1 mod d]) = 1
  // for x in cell[i]; cell 0 holds the smallest member. Empty if transient.
  std::vector<std::vector<StateSet>> cyclic_classes;

  // Indices into `classes` of the recurrent classes, in order.
  std::vector<std::size_t> recurrent_classes() const;
  std::vector<StateId> transient_states() const;
};

ClassDecomposition decompose(const Kernel& kernel);

// lcm of the periods of all recurrent classes.
std::size_t period_lcm(const ClassDecomposition& decomposition);

// absorption[x][r]: probability that the chain from x ends up in the r-th
// recurrent class (order of recurrent_classes()).
std::vector<std::vector<double>> absorption_probabilities(
    const Kernel& kernel, const ClassDecomposition& decomposition);

// L(x, A) = P_x(X_n in A for some n >= 1), the minimal non-negative solution
// of the first-step equations. For x in A this is the return probability.
std::vector<double> hitting_prob_L(const Kernel& kernel, const StateSet& target);

// Q(x, A) = P_x(X_n in A infinitely often).
std::vector<double> q_infinite(const Kernel& kernel, const StateSet& target);
std::vector<double> q_infinite(const Kernel& kernel,
                               const ClassDecomposition& decomposition,
                               const std::vector<std::vector<double>>& absorption,
                               const StateSet& target);

struct PeriodicityWitness {
  std::size_t d = 0;
  std::vector<StateSet> cells;  // E_1, ..., E_d
};

struct AperiodicityVerdict {
  bool aperiodic = true;
  std::optional<PeriodicityWitness> witness;
};

// Periodic iff some recurrent class with positive μ-mass has period >= 2; the
// witness is that class's cyclic decomposition. Throws kNotInvariant.
AperiodicityVerdict is_aperiodic(const Kernel& kernel, const Distribution& mu);

struct IrreducibilityVerdict {
  bool irreducible = false;
  std::optional<StateId> phi_atom;  // φ = δ_z
};

// Irreducible iff one state is reachable in >= 1 steps from every state. The
// structural answer is re-checked against L(x, {z}) > 0.
IrreducibilityVerdict is_irreducible(const Kernel& kernel);

struct WeakIrreducibilityVerdict {
  bool holds = false;
  std::optional<StateId> phi_atom;
  StateSet e0;  // invariant, full μ-measure (set whenever holds)
};

WeakIrreducibilityVerdict is_weakly_irreducible(const Kernel& kernel,
                                                const Distribution& mu);

struct HarrisVerdict {
  bool harris = false;
  std::optional<StateId> phi_atom;
};

// Exactly one recurrent class; cross-checked with Q(x, {z}) = 1 for all x.
HarrisVerdict is_harris(const Kernel& kernel);

ConditionReport check_B(const Kernel& kernel, const Distribution& mu,
                        Index index);

// C with P_m(x, .) >= ν for x in C. ν is a multiple of a point mass.
struct SmallSet {
  StateSet C;
  std::vector<double> nu;
  std::size_t m = 0;
  // ν(C) > 0; the normalization ν(E \ C) = 0 is not part of the contract.
  bool nu_charges_C = false;
};

struct SmallSetOptions {
  // 0 means 2 * |E|.
  std::size_t m_max = 0;
};

// Scans m = 1..m_max and anchors z; C = {x : P_m(x, {z}) >= β} with ν = β δ_z
// for β over the observed values of column z. Takes the first m with a
// candidate of positive ipm mass and, within it, the largest β (ties: larger
// C, then lexicographically smaller C). Throws kNotIrreducible or
// SearchExhausted.
SmallSet find_small_set(const Kernel& kernel, SmallSetOptions options = {});

// Re-verifies P_m(x, {z}) >= ν({z}) - tol for every x in C and state z.
bool verify_small_set(const Kernel& kernel, const SmallSet& small_set);

struct MaximalIrreducibilityResult {
  bool pass = false;
  std::optional<std::pair<StateId, StateId>> counterexample;  // (x, z)
};

// φ-irreducible implies μ-irreducible: checks L(x, {z}) > 0 for every x and
// every z charged by μ. Throws kPreconditionViolated if the chain is not
// φ-irreducible, kNotInvariant if μ is not invariant.
MaximalIrreducibilityResult check_maximal_irreducibility(
    const Kernel& kernel, const Distribution& phi, const Distribution& mu);

struct RecurrenceLemmaResult {
  bool pass = false;
  std::size_t sets_checked = 0;
  bool exhaustive = false;
  // Offending (x, B) when pass is false.
  std::optional<std::pair<StateId, StateSet>> counterexample;
};

// Checks the conclusions of the recurrence lemma for every B inside supp μ
// (all subsets when |supp μ| <= 12, singletons otherwise). Throws
// kPreconditionViolated when the A-condition of `index` fails.
RecurrenceLemmaResult recurrence_lemma_check(const Kernel& kernel,
                                             const Distribution& mu,
                                             Index index);

}  // namespace tvchain

#endif  // TVCHAIN_STRUCTURE_HPP_
