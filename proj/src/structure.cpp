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

#include "tvchain/structure.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <tuple>

#include "linear_solve.hpp"
#include "tvchain/equivalence.hpp"
#include "tvchain/error.hpp"
#include "tvchain/graph.hpp"

namespace tvchain {

std::vector<std::size_t> ClassDecomposition::recurrent_classes() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (recurrent[c]) out.push_back(c);
  }
  return out;
}

std::vector<StateId> ClassDecomposition::transient_states() const {
  std::vector<StateId> out;
  for (StateId x = 0; x < class_of.size(); ++x) {
    if (!recurrent[class_of[x]]) out.push_back(x);
  }
  return out;
}

ClassDecomposition decompose(const Kernel& kernel) {
  Components scc = strongly_connected_components(kernel);
  ClassDecomposition out;
  out.classes = std::move(scc.members);
  out.class_of = std::move(scc.component_of);
  const std::size_t count = out.classes.size();
  out.recurrent.assign(count, true);
  out.period.assign(count, 0);
  out.cyclic_classes.assign(count, {});
  for (StateId x = 0; x < kernel.size(); ++x) {
    for (StateId y : kernel.successors(x)) {
      if (out.class_of[y] != out.class_of[x]) {
        out.recurrent[out.class_of[x]] = false;
      }
    }
  }
  std::vector<long> level(kernel.size(), -1);
  for (std::size_t c = 0; c < count; ++c) {
    if (!out.recurrent[c]) continue;
    const StateSet& members = out.classes[c];
    // BFS levels from the smallest member; the period is the gcd of
    // level[u] + 1 - level[v] over edges u -> v.
    std::deque<StateId> queue{members.front()};
    level[members.front()] = 0;
    std::size_t g = 0;
    while (!queue.empty()) {
      const StateId u = queue.front();
      queue.pop_front();
      for (StateId v : kernel.successors(u)) {
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        } else {
          g = std::gcd(g, static_cast<std::size_t>(
                              std::labs(level[u] + 1 - level[v])));
        }
      }
    }
    const std::size_t d = g == 0 ? 1 : g;
    out.period[c] = d;
    out.cyclic_classes[c].assign(d, {});
    for (StateId x : members) {
      out.cyclic_classes[c][static_cast<std::size_t>(level[x]) % d].push_back(x);
    }
  }
  return out;
}

std::size_t period_lcm(const ClassDecomposition& decomposition) {
  std::size_t l = 1;
  for (std::size_t c : decomposition.recurrent_classes()) {
    l = std::lcm(l, decomposition.period[c]);
  }
  return l;
}

std::vector<std::vector<double>> absorption_probabilities(
    const Kernel& kernel, const ClassDecomposition& decomposition) {
  const std::vector<std::size_t> rec = decomposition.recurrent_classes();
  const std::size_t n = kernel.size();
  std::vector<std::vector<double>> out(n, std::vector<double>(rec.size(), 0.0));
  const internal::SparseRows rows = internal::KernelRows(kernel);
  for (std::size_t r = 0; r < rec.size(); ++r) {
    std::vector<bool> target(n, false);
    for (StateId x : decomposition.classes[rec[r]]) target[x] = true;
    const std::vector<double> h =
        internal::ReachProbability(rows, target, kernel.tolerance(),
                                   kernel.tolerance(), "absorption probabilities");
    for (StateId x = 0; x < n; ++x) out[x][r] = h[x];
  }
  return out;
}

namespace {

void RequireTarget(const Kernel& kernel, const StateSet& target) {
  if (target.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "target set must be non-empty");
  }
  for (StateId a : target) {
    if (a >= kernel.size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "target state");
    }
  }
}

}  // namespace

std::vector<double> hitting_prob_L(const Kernel& kernel,
                                   const StateSet& target_in) {
  const StateSet target = MakeStateSet(target_in);
  RequireTarget(kernel, target);
  const std::size_t n = kernel.size();
  std::vector<bool> in_target(n, false);
  for (StateId a : target) in_target[a] = true;

  // g(j) = P_j(hit A at some n >= 0); L is one step of g.
  const std::vector<double> g = internal::ReachProbability(
      internal::KernelRows(kernel), in_target, kernel.tolerance(),
      kernel.tolerance(), "hitting probabilities");
  std::vector<double> out(n, 0.0);
  for (StateId x = 0; x < n; ++x) {
    double v = 0.0;
    for (const Entry& e : kernel.row(x)) v += e.probability * g[e.state];
    out[x] = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

std::vector<double> q_infinite(const Kernel& kernel,
                               const ClassDecomposition& decomposition,
                               const std::vector<std::vector<double>>& absorption,
                               const StateSet& target_in) {
  const StateSet target = MakeStateSet(target_in);
  RequireTarget(kernel, target);
  const std::vector<std::size_t> rec = decomposition.recurrent_classes();
  std::vector<bool> hit(rec.size(), false);
  for (std::size_t r = 0; r < rec.size(); ++r) {
    for (StateId a : target) {
      if (decomposition.class_of[a] == rec[r]) hit[r] = true;
    }
  }
  std::vector<double> out(kernel.size(), 0.0);
  for (StateId x = 0; x < kernel.size(); ++x) {
    double v = 0.0;
    for (std::size_t r = 0; r < rec.size(); ++r) {
      if (hit[r]) v += absorption[x][r];
    }
    out[x] = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

std::vector<double> q_infinite(const Kernel& kernel, const StateSet& target) {
  const ClassDecomposition dec = decompose(kernel);
  return q_infinite(kernel, dec, absorption_probabilities(kernel, dec), target);
}

AperiodicityVerdict is_aperiodic(const Kernel& kernel, const Distribution& mu) {
  require_invariant(kernel, mu);
  const ClassDecomposition dec = decompose(kernel);
  for (std::size_t c : dec.recurrent_classes()) {
    if (dec.period[c] < 2 || !(mu.measure(dec.classes[c]) > mu.tolerance())) {
      continue;
    }
    return {false, PeriodicityWitness{dec.period[c], dec.cyclic_classes[c]}};
  }
  return {true, std::nullopt};
}

IrreducibilityVerdict is_irreducible(const Kernel& kernel) {
  const ClassDecomposition dec = decompose(kernel);
  const std::vector<std::size_t> rec = dec.recurrent_classes();
  if (rec.size() != 1) return {false, std::nullopt};
  const StateId z = dec.classes[rec.front()].front();
  const std::vector<double> l = hitting_prob_L(kernel, {z});
  for (StateId x = 0; x < kernel.size(); ++x) {
    if (!(l[x] > kernel.tolerance())) {
      throw NumericalFailure("irreducibility cross-check L(x,{z})", l[x]);
    }
  }
  return {true, z};
}

WeakIrreducibilityVerdict is_weakly_irreducible(const Kernel& kernel,
                                                const Distribution& mu) {
  require_invariant(kernel, mu);
  const InvariantSet e0 = absorbing_closure(kernel, mu.support());
  WeakIrreducibilityVerdict out;
  if (e0.members.empty() || mu.measure(e0.members) < 1.0 - mu.tolerance()) {
    return out;
  }
  const IrreducibilityVerdict inner = is_irreducible(restrict_to(kernel, e0));
  if (!inner.irreducible) return out;
  out.holds = true;
  out.phi_atom = e0.members[*inner.phi_atom];
  out.e0 = e0.members;
  return out;
}

HarrisVerdict is_harris(const Kernel& kernel) {
  const ClassDecomposition dec = decompose(kernel);
  const std::vector<std::size_t> rec = dec.recurrent_classes();
  if (rec.size() != 1) return {false, std::nullopt};
  const StateId z = dec.classes[rec.front()].front();
  const std::vector<double> q =
      q_infinite(kernel, dec, absorption_probabilities(kernel, dec), {z});
  for (StateId x = 0; x < kernel.size(); ++x) {
    if (q[x] < 1.0 - kernel.tolerance()) {
      throw NumericalFailure("Harris cross-check Q(x,{z})", 1.0 - q[x]);
    }
  }
  return {true, z};
}

ConditionReport check_B(const Kernel& kernel, const Distribution& mu,
                        Index index) {
  const AperiodicityVerdict aper = is_aperiodic(kernel, mu);
  const auto& space = kernel.space();
  ConditionReport report;
  report.method = Method::kBothAgree;
  nlohmann::json w;
  w["aperiodic"] = aper.aperiodic;
  if (aper.witness) {
    nlohmann::json cells = nlohmann::json::array();
    for (const StateSet& cell : aper.witness->cells) {
      nlohmann::json labels = nlohmann::json::array();
      for (StateId s : cell) labels.push_back(space.label(s));
      cells.push_back(labels);
    }
    w["period"] = aper.witness->d;
    w["cyclic_sets"] = cells;
  }
  bool second = false;
  std::optional<StateId> atom;
  switch (index) {
    case Index::k1: {
      report.condition = Condition::kB1;
      const HarrisVerdict h = is_harris(kernel);
      second = h.harris;
      atom = h.phi_atom;
      w["harris"] = second;
      break;
    }
    case Index::k2: {
      report.condition = Condition::kB2;
      const IrreducibilityVerdict v = is_irreducible(kernel);
      second = v.irreducible;
      atom = v.phi_atom;
      w["irreducible"] = second;
      break;
    }
    case Index::k3: {
      report.condition = Condition::kB3;
      const WeakIrreducibilityVerdict v = is_weakly_irreducible(kernel, mu);
      second = v.holds;
      atom = v.phi_atom;
      w["weakly_irreducible"] = second;
      if (v.holds) {
        nlohmann::json e0 = nlohmann::json::array();
        for (StateId s : v.e0) e0.push_back(space.label(s));
        w["E0"] = e0;
      }
      break;
    }
  }
  if (atom) w["phi_atom"] = space.label(*atom);
  report.holds = aper.aperiodic && second;
  report.witness = std::move(w);
  report.summary = std::string(aper.aperiodic ? "aperiodic" : "periodic") +
                   (second ? "; recurrence part holds" : "; recurrence part fails");
  return report;
}

SmallSet find_small_set(const Kernel& kernel, SmallSetOptions options) {
  if (!is_irreducible(kernel).irreducible) {
    throw Error(ErrorCode::kNotIrreducible,
                "small-set search requires an irreducible kernel");
  }
  const std::size_t n = kernel.size();
  const std::size_t m_max = options.m_max == 0 ? 2 * n : options.m_max;
  const Distribution mu = invariant_measures(kernel).front();
  const double tol = kernel.tolerance();

  // power[x] = P_m(x, .)
  std::vector<std::vector<double>> power(n, std::vector<double>(n, 0.0));
  for (StateId x = 0; x < n; ++x) power[x][x] = 1.0;
  for (std::size_t m = 1; m <= m_max; ++m) {
    std::vector<std::vector<double>> next(n, std::vector<double>(n, 0.0));
    for (StateId x = 0; x < n; ++x) {
      for (StateId k = 0; k < n; ++k) {
        if (power[x][k] == 0.0) continue;
        for (const Entry& e : kernel.row(k)) {
          next[x][e.state] += power[x][k] * e.probability;
        }
      }
    }
    power = std::move(next);

    std::optional<std::tuple<double, StateSet, StateId>> best;
    auto better = [](double beta, const StateSet& c,
                     const std::tuple<double, StateSet, StateId>& cur) {
      const auto& [b0, c0, z0] = cur;
      if (beta != b0) return beta > b0;
      if (c.size() != c0.size()) return c.size() > c0.size();
      return c < c0;
    };
    for (StateId z = 0; z < n; ++z) {
      std::vector<double> betas;
      for (StateId x = 0; x < n; ++x) {
        if (power[x][z] > tol) betas.push_back(power[x][z]);
      }
      std::sort(betas.begin(), betas.end());
      betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
      for (double beta : betas) {
        StateSet c;
        for (StateId x = 0; x < n; ++x) {
          if (power[x][z] >= beta) c.push_back(x);
        }
        if (!(mu.measure(c) > tol)) continue;
        if (!best || better(beta, c, *best)) best.emplace(beta, c, z);
      }
    }
    if (best) {
      auto& [beta, c, z] = *best;
      SmallSet out;
      out.nu.assign(n, 0.0);
      out.nu[z] = beta;
      out.nu_charges_C = std::binary_search(c.begin(), c.end(), z);
      out.C = std::move(c);
      out.m = m;
      return out;
    }
  }
  throw SearchExhausted(m_max);
}

bool verify_small_set(const Kernel& kernel, const SmallSet& small_set) {
  if (small_set.C.empty() || small_set.nu.size() != kernel.size()) return false;
  double total = 0.0;
  for (double v : small_set.nu) {
    if (v < 0.0) return false;
    total += v;
  }
  if (!(total > 0.0)) return false;
  for (StateId x : small_set.C) {
    const Distribution row = n_step(kernel, x, small_set.m);
    for (StateId z = 0; z < kernel.size(); ++z) {
      if (row[z] < small_set.nu[z] - kernel.tolerance()) return false;
    }
  }
  return true;
}

MaximalIrreducibilityResult check_maximal_irreducibility(
    const Kernel& kernel, const Distribution& phi, const Distribution& mu) {
  require_invariant(kernel, mu);
  if (phi.size() != kernel.size()) {
    throw Error(ErrorCode::kSpaceMismatch, "φ has the wrong size");
  }
  const StateSet phi_support = phi.support();
  if (phi_support.empty()) {
    throw Error(ErrorCode::kPreconditionViolated, "φ is trivial");
  }
  const double tol = kernel.tolerance();
  for (StateId z : phi_support) {
    const std::vector<double> l = hitting_prob_L(kernel, {z});
    for (StateId x = 0; x < kernel.size(); ++x) {
      if (!(l[x] > tol)) {
        throw Error(ErrorCode::kPreconditionViolated,
                    "kernel is not φ-irreducible: L(" + kernel.space().label(x) +
                        ", {" + kernel.space().label(z) + "}) = 0");
      }
    }
  }
  for (StateId z : mu.support()) {
    const std::vector<double> l = hitting_prob_L(kernel, {z});
    for (StateId x = 0; x < kernel.size(); ++x) {
      if (!(l[x] > tol)) return {false, std::make_pair(x, z)};
    }
  }
  return {true, std::nullopt};
}

RecurrenceLemmaResult recurrence_lemma_check(const Kernel& kernel,
                                             const Distribution& mu,
                                             Index index) {
  const AVariant variant = index == Index::k1   ? AVariant::k1
                           : index == Index::k2 ? AVariant::k2
                                                : AVariant::k3;
  if (!check_A(kernel, mu, variant).holds) {
    throw Error(ErrorCode::kPreconditionViolated,
                "recurrence lemma needs A" +
                    std::to_string(static_cast<int>(index)));
  }
  const ClassDecomposition dec = decompose(kernel);
  const auto absorption = absorption_probabilities(kernel, dec);
  const StateSet support = mu.support();
  const double tol = kernel.tolerance();

  RecurrenceLemmaResult out;
  out.exhaustive = support.size() <= 12;
  std::vector<StateSet> sets;
  if (out.exhaustive) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << support.size());
         ++mask) {
      StateSet b;
      for (std::size_t i = 0; i < support.size(); ++i) {
        if (mask & (std::size_t{1} << i)) b.push_back(support[i]);
      }
      sets.push_back(std::move(b));
    }
  } else {
    for (StateId s : support) sets.push_back({s});
  }
  for (const StateSet& b : sets) {
    ++out.sets_checked;
    const std::vector<double> q = q_infinite(kernel, dec, absorption, b);
    for (StateId x = 0; x < kernel.size(); ++x) {
      const bool must_be_one = index == Index::k1 || mu.charges(x);
      const bool bad = must_be_one ? q[x] < 1.0 - tol
                                   : (index == Index::k2 && !(q[x] > tol));
      if (bad) {
        out.counterexample = std::make_pair(x, b);
        return out;
      }
    }
  }
  out.pass = true;
  return out;
}

}  // namespace tvchain
