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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tvchain/coupling.hpp"
#include "tvchain/equivalence.hpp"
#include "tvchain/harness.hpp"
#include "tvchain/structure.hpp"
#include "tvchain/verdict.hpp"

namespace {

using namespace tvchain;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string Fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

// The chains audited by `tvchain verify --instances 500 --max-states 8 --seed 7`.
const std::vector<GeneratedChain>& AuditChains() {
  static const std::vector<GeneratedChain> chains = oracle::RandomChains(500, 8, 7);
  return chains;
}

Outcome TheoremAudit() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::size_t violations = 0;
  for (const GeneratedChain& g : AuditChains()) {
    const EquivalenceAudit audit = cross_check(g.kernel, g.ipm);
    violations += audit.violations.size();
    if (!audit.clean()) o.Fail("violation on " + audit.fingerprint);
    if (audit.report(Condition::kA3Prime).holds != audit.report(Condition::kA3).holds) {
      o.Fail("A3' and A3 disagree on " + audit.fingerprint);
    }
  }
  const double t = Seconds(start);
  if (t > 60.0) o.Fail(Fmt("runtime %.1f s exceeds 60 s", t));
  if (o.pass) o.detail = Fmt("500 chains, 0 violations, %.2f s", t);
  return o;
}

Outcome CouplingEquality() {
  Outcome o;
  Rng rng(2);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.Below(14);
    const std::size_t cap = std::min<std::size_t>(n, 12);
    const Distribution a = oracle::RandomMeasure(rng, n, 1 + rng.Below(cap));
    const Distribution b = oracle::RandomMeasure(rng, n, 1 + rng.Below(cap));
    const double tv = oracle::TvBySubsets(oracle::AsVector(a), oracle::AsVector(b));
    const double diag = maximal_coupling(a, b).diagonal_mass();
    const double lp = optimal_coupling_lp(a, b).off_diagonal_mass;
    worst = std::max({worst, std::abs(diag - (1.0 - tv)), std::abs(lp - tv)});
  }
  if (worst > 1e-9) o.Fail(Fmt("max deviation %.3g", worst));
  o.detail = Fmt("200 pairs, max deviation %.3g", worst);
  return o;
}

Outcome Peri() {
  Outcome o;
  const Fixture f = fixture("peri", 0);
  const oracle::Matrix p = oracle::Dense(f.kernel);
  const TVCurve curve = tv_curve(f.kernel, 0, f.ipm, 100);
  for (std::size_t n = 0; n <= 100; ++n) {
    const double expected = oracle::HalfL1(oracle::Row(oracle::Power(p, n), 0),
                                           oracle::AsVector(f.ipm));
    if (std::abs(expected - 0.5) > 1e-12) o.Fail("oracle curve is not 1/2");
    if (std::abs(curve.values[n] - 0.5) > 1e-12) o.Fail("d(P_n(0,.), mu) != 1/2");
  }
  const AperiodicityVerdict a = is_aperiodic(f.kernel, f.ipm);
  if (a.aperiodic || !a.witness || a.witness->d != 2 ||
      a.witness->cells != std::vector<StateSet>{{0}, {1}}) {
    o.Fail("period witness is not d = 2, ({0}, {1})");
  }
  const EquivalenceAudit audit = cross_check(f.kernel, f.ipm);
  for (Condition c : {Condition::kA3, Condition::kA3Prime, Condition::kB3, Condition::kC3,
                      Condition::kC3Prime, Condition::kG3, Condition::kP3}) {
    if (audit.report(c).holds) o.Fail(std::string(ToString(c)) + " holds");
  }
  if (o.pass) o.detail = "curve 0.5 for n <= 100, d = 2, index 3 all false";
  return o;
}

Outcome Standard() {
  Outcome o;
  const Fixture reflect = fixture("standard", 60);
  const Fixture absorb = fixture("standard", 60, Boundary::kAbsorb);
  double worst_h = 0.0, worst_lim = 0.0;
  for (StateId x = 1; x <= 20; ++x) {
    const double expected = 1.0 - std::ldexp(1.0, -static_cast<int>(x));
    const TVCurve h = tv_curve(reflect.kernel, x, reflect.ipm, kStandardHorizon);
    worst_h = std::max(worst_h, std::abs(h.values.back() - expected));
    worst_lim = std::max(worst_lim, std::abs(tv_curve(absorb.kernel, x, absorb.ipm, 1).limit - expected));
  }
  if (worst_h > 1e-6) o.Fail(Fmt("horizon value off by %.3g", worst_h));
  if (worst_lim > 1e-6) o.Fail(Fmt("absorbing limit off by %.3g", worst_lim));
  for (const ExpectationResult& r : evaluate_expectations(reflect)) {
    if (!r.pass) o.Fail(r.id + ": " + r.detail);
  }
  for (const ExpectationResult& r : evaluate_expectations(absorb)) {
    if (!r.pass) o.Fail(r.id + ": " + r.detail);
  }
  if (o.pass) {
    o.detail = Fmt("|d - (1 - 2^-x)| <= %.2g at n = 2000, %.2g in the limit; P2/P1 patterns, "
                   "G2 witness ok",
                   worst_h, worst_lim);
  }
  return o;
}

Outcome Simple() {
  Outcome o;
  const Fixture f = fixture("simple", 40);
  if (!decide_P(f.kernel, f.ipm).p1.holds) o.Fail("P1 fails");
  const oracle::Matrix p = oracle::Dense(f.kernel);
  oracle::Matrix pn = p;
  for (std::size_t n = 1; n <= 30; ++n, pn *= p) {
    const Distribution a = n_step(f.kernel, 0, n), b = n_step(f.kernel, 1, n);
    if (a.support() == b.support()) o.Fail("supports agree at n = " + std::to_string(n));
    if (!(pn(0, 2) > 0.0) || pn(1, 1) != 1.0) o.Fail("oracle supports");
    const double eps = std::ldexp(1.0, -static_cast<int>(n));
    const AsymEquivResult r = asymptotically_equivalent(f.kernel, 0, 1, {eps}, n);
    if (!r.witnesses[0] || r.witnesses[0]->n != n || r.witnesses[0]->A != StateSet{1}) {
      o.Fail("no witness (n, {1}) at n = " + std::to_string(n));
      continue;
    }
    if (std::abs(r.witnesses[0]->mass_x - (1.0 - eps)) > 1e-12 ||
        std::abs(pn(0, 1) - (1.0 - eps)) > 1e-12 ||
        std::abs(r.witnesses[0]->mass_y - 1.0) > 1e-12) {
      o.Fail("witness masses at n = " + std::to_string(n));
    }
  }
  if (o.pass) o.detail = "P1; supports differ and (n, {1}) witnesses exact for n <= 30";
  return o;
}

// Q(x, B) from long-run mass on the recurrent classes meeting B.
std::vector<double> OracleQ(const oracle::Matrix& far,
                            const std::vector<std::vector<bool>>& reach, const StateSet& B) {
  const std::size_t n = reach.size();
  std::vector<bool> target(n, false);
  for (StateId z : B) {
    if (!oracle::Recurrent(reach, z)) continue;
    for (StateId w = 0; w < n; ++w) target[w] = target[w] || reach[z][w];
  }
  std::vector<double> q(n, 0.0);
  for (StateId x = 0; x < n; ++x) {
    for (StateId w = 0; w < n; ++w) {
      if (target[w]) q[x] += far(x, w);
    }
  }
  return q;
}

Outcome RecurrenceLemma() {
  Outcome o;
  Rng root(6);
  std::size_t a2 = 0, a1 = 0, subsets = 0;
  for (std::uint64_t i = 0; a2 < 100 && i < 100000; ++i) {
    Rng rng = root.Split(i);
    const GeneratedChain g = random_chain(random_params(rng, 8));
    if (!check_A(g.kernel, g.ipm, AVariant::k2).holds) continue;
    ++a2;
    const bool is_a1 = check_A(g.kernel, g.ipm, AVariant::k1).holds;
    a1 += is_a1;
    if (!recurrence_lemma_check(g.kernel, g.ipm, Index::k2).pass) o.Fail("lemma check (A2)");
    if (is_a1 && !recurrence_lemma_check(g.kernel, g.ipm, Index::k1).pass) {
      o.Fail("lemma check (A1)");
    }
    const oracle::Matrix p = oracle::Dense(g.kernel);
    const auto reach = oracle::Reach(p);
    const oracle::Matrix far = oracle::Power(p, std::size_t{1} << 20);
    const StateSet support = g.ipm.support();
    for (std::uint32_t mask = 1; mask < (1u << support.size()); ++mask) {
      StateSet B;
      for (std::size_t j = 0; j < support.size(); ++j) {
        if (mask & (1u << j)) B.push_back(support[j]);
      }
      ++subsets;
      const auto q = OracleQ(far, reach, B);
      for (StateId x = 0; x < g.kernel.size(); ++x) {
        if (g.ipm.charges(x) && q[x] < 1.0 - 1e-6) o.Fail("Q < 1 on supp mu");
        if (!(q[x] > 0.0)) o.Fail("Q = 0 somewhere");
        if (is_a1 && q[x] < 1.0 - 1e-6) o.Fail("Q < 1 under A1");
      }
    }
  }
  if (a2 < 100) o.Fail("fewer than 100 A2 instances");
  if (o.pass) {
    o.detail = std::to_string(a2) + " A2 instances (" + std::to_string(a1) + " A1), " +
               std::to_string(subsets) + " sets B";
  }
  return o;
}

Outcome MaximalIrreducibility() {
  Outcome o;
  Rng root(7);
  std::size_t found = 0;
  for (std::uint64_t i = 0; found < 100 && i < 100000; ++i) {
    Rng rng = root.Split(i);
    const GeneratedChain g = random_chain(random_params(rng, 8));
    const oracle::Matrix p = oracle::Dense(g.kernel);
    if (!oracle::IrreducibleByDefinition(p)) continue;
    ++found;
    const IrreducibilityVerdict v = is_irreducible(g.kernel);
    if (!v.irreducible || !v.phi_atom) {
      o.Fail("decider misses irreducibility");
      continue;
    }
    const Distribution phi = Distribution::PointMass(g.kernel.size(), *v.phi_atom);
    if (!check_maximal_irreducibility(g.kernel, phi, g.ipm).pass) o.Fail("check failed");
    const auto reach = oracle::Reach(p);
    for (StateId x = 0; x < g.kernel.size(); ++x) {
      for (StateId z : g.ipm.support()) {
        if (!reach[x][z]) o.Fail("L(x, {z}) = 0 for a mu-charged z");
      }
    }
  }
  if (found < 100) o.Fail("fewer than 100 irreducible instances");
  if (o.pass) o.detail = "100 irreducible instances with point-mass phi";
  return o;
}

Outcome CouplingSimulation() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  Rng root(8);
  std::size_t found = 0;
  double lowest = 1.0;
  for (std::uint64_t i = 0; found < 20 && i < 100000; ++i) {
    Rng rng = root.Split(i);
    const GeneratedChain g = random_chain(random_params(rng, 8));
    const Kernel& k = g.kernel;
    if (k.size() < 2 || !check_B(k, g.ipm, Index::k1).holds) continue;
    ++found;
    const StateId x = rng.Below(k.size());
    const StateId y = (x + 1 + rng.Below(k.size() - 1)) % k.size();
    const SwitchingParams params = choose_switching_params(k, g.ipm);
    const ProductKernel s = switching_kernel(k, coupling_set_C(k, params.N, params.p), params.N);
    const std::size_t horizon = 50 * k.size();
    constexpr std::size_t kTraces = 10000;
    std::vector<std::size_t> unmet(horizon + 1, 0);
    for (std::size_t t = 0; t < kTraces; ++t) {
      const CouplingTrace trace = simulate_coupling(k, s, x, y, rng.Split(t).NextU64(), horizon);
      const std::size_t tau = trace.meet_time.value_or(horizon + 1);
      for (std::size_t n = 0; n < std::min(tau, horizon + 1); ++n) ++unmet[n];
    }
    const double met = 1.0 - static_cast<double>(unmet[horizon]) / kTraces;
    lowest = std::min(lowest, met);
    if (met <= 0.99) o.Fail(Fmt("meeting frequency %.4f", met));
    const oracle::Matrix p = oracle::Dense(k);
    oracle::Matrix pn = oracle::Matrix::Identity(p.rows(), p.cols());
    for (std::size_t n = 0; n <= horizon; ++n, pn *= p) {
      const double d = oracle::HalfL1(pn.row(x), pn.row(y));
      const double sigma = std::sqrt(d * (1.0 - d) / kTraces);
      if (d > static_cast<double>(unmet[n]) / kTraces + 3.0 * sigma + 1e-12) {
        o.Fail(Fmt("coupling inequality fails at n = %.0f (d = %.4g)", n, d));
      }
    }
  }
  const double t = Seconds(start);
  if (found < 20) o.Fail("fewer than 20 B1 instances");
  if (t > 120.0) o.Fail(Fmt("runtime %.1f s exceeds 120 s", t));
  if (o.pass) o.detail = Fmt("20 B1 instances, min meeting frequency %.4f, %.2f s", lowest, t);
  return o;
}

Outcome MonotoneAndDirectBound() {
  Outcome o;
  double worst = -1.0;
  for (const GeneratedChain& g : AuditChains()) {
    const Kernel& k = g.kernel;
    const std::size_t n_max = 4 * k.size() * k.size();
    std::vector<Distribution> rows;
    for (StateId x = 0; x < k.size(); ++x) rows.push_back(Distribution::PointMass(k.size(), x));
    std::vector<double> prev(k.size(), 2.0);
    for (std::size_t n = 0; n <= n_max; ++n) {
      for (StateId x = 0; x < k.size(); ++x) {
        const double d = tv_distance(g.ipm, rows[x]);
        worst = std::max(worst, d - prev[x]);
        if (d > prev[x] + 1e-9) o.Fail("TV curve increases");
        prev[x] = d;
        double rhs = 0.0;
        for (StateId y = 0; y < k.size(); ++y) rhs += g.ipm[y] * tv_distance(rows[y], rows[x]);
        if (d > rhs + 1e-9) o.Fail("direct bound fails");
      }
      for (auto& r : rows) r = push_forward(k, r);
    }
  }
  if (o.pass) o.detail = Fmt("500 chains, n <= 4|E|^2, largest increase %.2g", worst);
  return o;
}

Outcome OracleAgreement() {
  Outcome o;
  std::size_t checked = 0;
  for (const GeneratedChain& g : oracle::RandomChains(300, 5, 10)) {
    ++checked;
    const oracle::Matrix p = oracle::Dense(g.kernel);
    const oracle::Vector mu = oracle::AsVector(g.ipm);
    const std::size_t d = oracle::PeriodBySubsets(p, mu);
    const AperiodicityVerdict a = is_aperiodic(g.kernel, g.ipm);
    if (a.aperiodic != (d == 1)) o.Fail("aperiodicity");
    if (!a.aperiodic && d % a.witness->d != 0) o.Fail("period witness");
    if (is_irreducible(g.kernel).irreducible != oracle::IrreducibleByDefinition(p)) {
      o.Fail("irreducibility");
    }
    if (is_harris(g.kernel).harris != oracle::HarrisByDefinition(p)) o.Fail("Harris");
    const auto limits = oracle::LimitsByPowers(p, mu);
    for (StateId x = 0; x < g.kernel.size(); ++x) {
      if (std::abs(tv_curve(g.kernel, x, g.ipm, 1).limit - limits[x]) > 1e-6) {
        o.Fail("P-limit");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " chains with <= 5 states";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"theorem audit", TheoremAudit},
      {"coupling equality", CouplingEquality},
      {"example peri", Peri},
      {"example standard", Standard},
      {"example simple", Simple},
      {"recurrence lemma", RecurrenceLemma},
      {"maximal irreducibility", MaximalIrreducibility},
      {"coupling simulation under B1", CouplingSimulation},
      {"monotonicity and direct bound", MonotoneAndDirectBound},
      {"oracle agreement", OracleAgreement},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.Fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
