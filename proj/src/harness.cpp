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

#include "tvchain/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tvchain/coupling.hpp"
#include "tvchain/equivalence.hpp"
#include "tvchain/error.hpp"
#include "tvchain/structure.hpp"
#include "tvchain/verdict.hpp"

namespace tvchain {
namespace {

// Splits `total` items into `parts` non-empty groups at random.
std::vector<std::size_t> RandomComposition(std::size_t total, std::size_t parts,
                                           Rng& rng) {
  std::vector<std::size_t> sizes(parts, 1);
  for (std::size_t i = parts; i < total; ++i) ++sizes[rng.Below(parts)];
  return sizes;
}

}  // namespace

GeneratedChain random_chain(const GeneratorParams& params) {
  const std::size_t n = params.n_states;
  const std::size_t k = params.n_recurrent_classes;
  if (n == 0 || k == 0 || params.periods.size() != k) {
    throw Error(ErrorCode::kUnrealizableParams,
                "need n_states >= 1, at least one class and one period per class");
  }
  if (!(params.transient_fraction >= 0.0 && params.transient_fraction < 1.0) ||
      !(params.sparsity >= 0.0 && params.sparsity < 1.0)) {
    throw Error(ErrorCode::kUnrealizableParams,
                "transient_fraction and sparsity must lie in [0, 1)");
  }
  const auto n_transient = static_cast<std::size_t>(
      std::floor(params.transient_fraction * static_cast<double>(n)));
  const std::size_t n_recurrent = n - n_transient;
  std::size_t needed = 0;
  for (std::size_t d : params.periods) {
    if (d == 0) throw Error(ErrorCode::kUnrealizableParams, "period must be >= 1");
    needed += d;
  }
  if (needed > n_recurrent) {
    throw Error(ErrorCode::kUnrealizableParams,
                "classes need " + std::to_string(needed) + " recurrent states, only " +
                    std::to_string(n_recurrent) + " available");
  }

  Rng rng(params.seed);
  std::vector<std::vector<double>> weight(n, std::vector<double>(n, 0.0));
  auto edge = [&](std::size_t u, std::size_t v) {
    if (weight[u][v] == 0.0) weight[u][v] = rng.Uniform(0.2, 1.0);
  };
  auto optional_edge = [&](std::size_t u, std::size_t v) {
    if (rng.Uniform() >= params.sparsity) edge(u, v);
  };

  // Recurrent states occupy ids [0, n_recurrent) before shuffling.
  std::vector<std::size_t> extra(k);
  for (std::size_t c = 0; c < k; ++c) extra[c] = params.periods[c];
  {
    const std::vector<std::size_t> spread =
        RandomComposition(n_recurrent - needed + k, k, rng);
    for (std::size_t c = 0; c < k; ++c) extra[c] += spread[c] - 1;
  }
  std::size_t next_id = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t d = params.periods[c];
    const std::vector<std::size_t> block_sizes = RandomComposition(extra[c], d, rng);
    std::vector<std::vector<std::size_t>> blocks(d);
    for (std::size_t b = 0; b < d; ++b) {
      for (std::size_t i = 0; i < block_sizes[b]; ++i) blocks[b].push_back(next_id++);
    }
    // Hub of each block feeds the whole next block; everything feeds the
    // next hub. All cycles then have length divisible by d, and the hub
    // cycle has length exactly d.
    for (std::size_t b = 0; b < d; ++b) {
      const auto& here = blocks[b];
      const auto& next = blocks[(b + 1) % d];
      for (std::size_t v : next) edge(here.front(), v);
      for (std::size_t u : here) {
        edge(u, next.front());
        for (std::size_t v : next) optional_edge(u, v);
      }
    }
  }
  // Transient states drain toward recurrent or earlier transient states.
  for (std::size_t t = n_recurrent; t < n; ++t) {
    edge(t, rng.Below(t));
    for (std::size_t v = 0; v < t; ++v) {
      if (rng.Uniform() < 0.3) optional_edge(t, v);
    }
    if (rng.Uniform() < 0.3) edge(t, t);
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.Below(i)]);
  std::vector<Transition> raw;
  for (std::size_t u = 0; u < n; ++u) {
    double total = 0.0;
    for (double w : weight[u]) total += w;
    for (std::size_t v = 0; v < n; ++v) {
      if (weight[u][v] > 0.0) raw.push_back({perm[u], perm[v], weight[u][v] / total});
    }
  }
  Kernel kernel = validate_kernel(n, raw);

  const std::vector<Distribution> extremal = invariant_measures(kernel);
  std::vector<double> mix(extremal.size(), 0.0);
  if (extremal.size() == 1 || rng.Uniform() < 0.3) {
    mix[rng.Below(extremal.size())] = 1.0;
  } else {
    double total = 0.0;
    for (double& m : mix) total += (m = rng.Uniform(0.1, 1.0));
    for (double& m : mix) m /= total;
  }
  std::vector<double> mass(n, 0.0);
  for (std::size_t r = 0; r < extremal.size(); ++r) {
    for (StateId x = 0; x < n; ++x) mass[x] += mix[r] * extremal[r][x];
  }
  return {std::move(kernel), Distribution(std::move(mass))};
}

GeneratorParams random_params(Rng& rng, std::size_t max_states) {
  if (max_states == 0) throw Error(ErrorCode::kInvalidArgument, "max_states >= 1");
  GeneratorParams p;
  p.n_states = 1 + rng.Below(max_states);
  p.transient_fraction = rng.Uniform() < 0.5 ? 0.0 : rng.Uniform(0.0, 0.5);
  p.sparsity = rng.Uniform(0.0, 0.6);
  p.seed = rng.NextU64();
  const std::size_t recurrent =
      p.n_states - static_cast<std::size_t>(std::floor(
                       p.transient_fraction * static_cast<double>(p.n_states)));
  p.n_recurrent_classes = 1 + rng.Below(std::min<std::size_t>(3, recurrent));
  p.periods.clear();
  for (std::size_t c = 0; c < p.n_recurrent_classes; ++c) {
    p.periods.push_back(rng.Uniform() < 0.6 ? 1 : 2 + rng.Below(2));
  }
  // Shrink periods (largest first), then drop classes, until they fit.
  while (std::accumulate(p.periods.begin(), p.periods.end(), std::size_t{0}) >
         recurrent) {
    auto it = std::max_element(p.periods.begin(), p.periods.end());
    if (*it > 1) {
      --*it;
    } else {
      p.periods.pop_back();
    }
  }
  p.n_recurrent_classes = p.periods.size();
  return p;
}

namespace {

Expectation Expect(std::string id, std::string qualifier, nlohmann::json value) {
  return {std::move(id), std::move(qualifier), std::move(value)};
}

Fixture Peri() {
  const std::vector<Transition> raw{{0, 1, 1.0}, {1, 0, 1.0}};
  Fixture f{"peri", 2, validate_kernel(2, raw), Distribution({0.5, 0.5}), {}, {}};
  f.expected = {
      Expect("tv_curve_constant", "n <= 100",
             {{"x", 0}, {"value", 0.5}, {"n_max", 100}, {"tolerance", 1e-12}}),
      Expect("P3", "", false),
      Expect("limits_below_one", "", {{"limit", 0.5}}),
      Expect("period", "", {{"d", 2}, {"cells", {{"0"}, {"1"}}}}),
      Expect("index3_all_false", "", true),
  };
  f.notes = {"exact two-state chain; truncation is ignored"};
  return f;
}

// Supports are exact in this fixture: the smallest entry is 2^-(N-1), and
// a tolerance far below it keeps every positive mass visible.
constexpr double kSimpleTolerance = 1e-13;

Fixture Simple(std::size_t N) {
  std::vector<Transition> raw;
  for (std::size_t x = 1; x < N; ++x) raw.push_back({0, x, std::ldexp(1.0, -static_cast<int>(x))});
  raw.push_back({0, N, std::ldexp(1.0, -static_cast<int>(N - 1))});
  raw.push_back({1, 1, 1.0});
  for (std::size_t x = 2; x <= N; ++x) raw.push_back({x, x - 1, 1.0});
  Kernel kernel = validate_kernel(N + 1, raw, kSimpleTolerance);
  Fixture f{"simple", N, std::move(kernel),
            Distribution::PointMass(N + 1, 1, kSimpleTolerance), {}, {}};
  const std::size_t n_max = std::min<std::size_t>(30, N - 1);
  f.expected = {
      Expect("P1", "", true),
      Expect("non_equivalence", "n <= " + std::to_string(n_max),
             {{"x", 0}, {"y", 1}, {"n_max", n_max}}),
      Expect("asymptotic_witness", "n <= " + std::to_string(n_max),
             {{"x", 0}, {"y", 1}, {"A", {"1"}}, {"n_max", n_max}, {"tolerance", 1e-12}}),
      Expect("unique_ipm", "", {{"count", 1}, {"atom", "1"}}),
  };
  f.notes = {"row 0 puts the tail mass 2^-(N-1) on state N",
             "P_n(0, .) is exact for n < N - 1"};
  return f;
}

Fixture Standard(std::size_t N, Boundary boundary) {
  std::vector<Transition> raw{{0, 0, 1.0}};
  for (std::size_t x = 1; x < N; ++x) {
    raw.push_back({x, x - 1, 1.0 / 3.0});
    raw.push_back({x, x + 1, 2.0 / 3.0});
  }
  if (boundary == Boundary::kReflect) {
    raw.push_back({N, N - 1, 1.0 / 3.0});
    raw.push_back({N, N, 2.0 / 3.0});
  } else {
    raw.push_back({N, N, 1.0});
  }
  Fixture f{"standard", N, validate_kernel(N + 1, raw),
            Distribution::PointMass(N + 1, 0), {}, {}};
  const std::size_t x_max = std::min<std::size_t>(20, N / 2);
  if (boundary == Boundary::kReflect) {
    f.expected = {
        Expect("unique_ipm", "", {{"count", 1}, {"atom", "0"}}),
        Expect("horizon_tv", "n = " + std::to_string(kStandardHorizon),
               {{"horizon", kStandardHorizon}, {"x_max", x_max}, {"tolerance", 1e-6}}),
        Expect("P2_pattern", "", true),
        Expect("P1_pattern", "n = " + std::to_string(kStandardHorizon),
               {{"horizon", kStandardHorizon}, {"holds", false}}),
        Expect("irreducible", "", {{"phi_atom", "0"}}),
        Expect("harris", "finite truncation only", true),
        Expect("G2_witness", "k = max(x, y)", {{"atom", "0"}}),
    };
    f.notes = {"up-step at N reflected to N",
               "the truncation is P1 in the limit; the untruncated chain is "
               "P2 but not P1 and not Harris",
               "P1 failure is asserted at the finite horizon only"};
  } else {
    f.expected = {
        Expect("hitting_L", "", {{"x_max", x_max}, {"tolerance", 1e-6}}),
        Expect("q_infinite", "", {{"x_max", x_max}, {"tolerance", 1e-6}}),
        Expect("structural_limit", "", {{"x_max", x_max}, {"tolerance", 1e-6}}),
        Expect("ipm_count", "", 2),
    };
    f.notes = {"state N absorbing", "gambler's-ruin values differ from the "
               "untruncated ones by O(2^-N)"};
  }
  return f;
}

}  // namespace

Fixture fixture(std::string_view name, std::size_t truncation,
                Boundary boundary) {
  if (name == "peri") return Peri();
  if (name != "simple" && name != "standard") {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown fixture '" + std::string(name) + "'");
  }
  if (truncation < 3) {
    throw Error(ErrorCode::kTruncationTooSmall,
                "truncation must be >= 3, got " + std::to_string(truncation));
  }
  return name == "simple" ? Simple(truncation) : Standard(truncation, boundary);
}

namespace {

std::string Fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExpectationResult Evaluate(const Fixture& f, const Expectation& e) {
  const Kernel& k = f.kernel;
  const auto& v = e.value;
  ExpectationResult r{e.id, false, ""};
  auto label_of = [&](const std::string& s) {
    const auto id = k.space().find(s);
    if (!id) throw Error(ErrorCode::kInvalidArgument, "unknown label " + s);
    return *id;
  };

  if (e.id == "tv_curve_constant") {
    const TVCurve c = tv_curve(k, v["x"].get<StateId>(), f.ipm, v["n_max"].get<std::size_t>());
    double worst = 0.0;
    for (double d : c.values) worst = std::max(worst, std::abs(d - v["value"].get<double>()));
    r.pass = worst <= v["tolerance"].get<double>();
    r.detail = "max deviation " + Fmt(worst);
  } else if (e.id == "P3" || e.id == "P1" || e.id == "P2_pattern") {
    const PReports p = decide_P(k, f.ipm);
    const ConditionReport& rep = e.id == "P3" ? p.p3 : e.id == "P1" ? p.p1 : p.p2;
    r.pass = rep.holds == v.get<bool>();
    r.detail = rep.summary;
  } else if (e.id == "limits_below_one") {
    const SkeletonLimits lim = skeleton_limits(k);
    r.pass = true;
    for (StateId x = 0; x < k.size(); ++x) {
      const double d = tv_distance(lim.rho[x], f.ipm);
      if (std::abs(d - v["limit"].get<double>()) > 1e-12) r.pass = false;
      r.detail += k.space().label(x) + ": " + Fmt(d) + " ";
    }
  } else if (e.id == "period") {
    const AperiodicityVerdict a = is_aperiodic(k, f.ipm);
    r.pass = !a.aperiodic && a.witness->d == v["d"].get<std::size_t>();
    if (r.pass) {
      nlohmann::json cells = nlohmann::json::array();
      for (const StateSet& cell : a.witness->cells) {
        nlohmann::json labels = nlohmann::json::array();
        for (StateId s : cell) labels.push_back(k.space().label(s));
        cells.push_back(labels);
      }
      r.pass = cells == v["cells"];
      r.detail = cells.dump();
    }
  } else if (e.id == "index3_all_false") {
    const EquivalenceAudit audit = cross_check(k, f.ipm);
    r.pass = audit.clean();
    for (Condition c : audit.indices[2].conditions) {
      if (audit.report(c).holds) {
        r.pass = false;
        r.detail += std::string(ToString(c)) + " holds; ";
      }
    }
  } else if (e.id == "non_equivalence") {
    const StateId x = v["x"].get<StateId>(), y = v["y"].get<StateId>();
    Distribution px = Distribution::PointMass(k.size(), x, k.tolerance());
    Distribution py = Distribution::PointMass(k.size(), y, k.tolerance());
    r.pass = true;
    for (std::size_t n = 1; n <= v["n_max"].get<std::size_t>(); ++n) {
      px = push_forward(k, px);
      py = push_forward(k, py);
      if (px.support() == py.support()) {
        r.pass = false;
        r.detail = "supports agree at n = " + std::to_string(n);
      }
    }
  } else if (e.id == "asymptotic_witness") {
    const StateId x = v["x"].get<StateId>(), y = v["y"].get<StateId>();
    StateSet expected_a;
    for (const auto& s : v["A"]) expected_a.push_back(label_of(s.get<std::string>()));
    Distribution px = Distribution::PointMass(k.size(), x, k.tolerance());
    Distribution py = Distribution::PointMass(k.size(), y, k.tolerance());
    r.pass = true;
    const double tol = v["tolerance"].get<double>();
    for (std::size_t n = 1; n <= v["n_max"].get<std::size_t>(); ++n) {
      px = push_forward(k, px);
      py = push_forward(k, py);
      StateSet a;
      for (StateId z = 0; z < k.size(); ++z) {
        if (px.charges(z) && py.charges(z)) a.push_back(z);
      }
      const double bound = 1.0 - std::ldexp(1.0, -static_cast<int>(n));
      if (a != expected_a || std::abs(px.measure(a) - bound) > tol ||
          py.measure(a) < bound - tol) {
        r.pass = false;
        r.detail = "witness breaks at n = " + std::to_string(n);
      }
    }
  } else if (e.id == "unique_ipm" || e.id == "ipm_count") {
    const std::vector<Distribution> ipms = invariant_measures(k);
    if (e.id == "ipm_count") {
      r.pass = ipms.size() == v.get<std::size_t>();
    } else {
      const StateId atom = label_of(v["atom"].get<std::string>());
      r.pass = ipms.size() == v["count"].get<std::size_t>() &&
               std::abs(ipms.front()[atom] - 1.0) <= 1e-12;
    }
    r.detail = std::to_string(ipms.size()) + " extremal ipms";
  } else if (e.id == "horizon_tv" || e.id == "P1_pattern") {
    const std::size_t h = v["horizon"].get<std::size_t>();
    // All rows at time h at once: d(P_h(x, .), δ_0) = 1 - P_h(x, {0}).
    std::vector<double> g(k.size(), 0.0);
    g[0] = 1.0;
    for (std::size_t j = 0; j < h; ++j) {
      std::vector<double> next(k.size(), 0.0);
      for (StateId x = 0; x < k.size(); ++x) {
        for (const Entry& en : k.row(x)) next[x] += en.probability * g[en.state];
      }
      g = std::move(next);
    }
    if (e.id == "horizon_tv") {
      double worst = 0.0;
      for (std::size_t x = 0; x <= v["x_max"].get<std::size_t>(); ++x) {
        const double d = 1.0 - g[x];
        worst = std::max(worst, std::abs(d - (1.0 - std::ldexp(1.0, -static_cast<int>(x)))));
      }
      r.pass = worst <= v["tolerance"].get<double>();
      r.detail = "max deviation " + Fmt(worst);
    } else {
      double sup = 0.0;
      for (StateId x = 0; x < k.size(); ++x) sup = std::max(sup, 1.0 - g[x]);
      // P1 would need sup_x d(P_h(x, .), μ) near 0; the walk keeps it near 1.
      const bool p1_pattern = sup < 0.5;
      r.pass = p1_pattern == v["holds"].get<bool>();
      r.detail = "sup_x d(P_h(x, .), μ) = " + Fmt(sup);
    }
  } else if (e.id == "irreducible") {
    const IrreducibilityVerdict iv = is_irreducible(k);
    r.pass = iv.irreducible &&
             k.space().label(*iv.phi_atom) == v["phi_atom"].get<std::string>();
  } else if (e.id == "harris") {
    r.pass = is_harris(k).harris == v.get<bool>();
  } else if (e.id == "G2_witness") {
    const StateId atom = label_of(v["atom"].get<std::string>());
    JointDistribution zeta(k.size(), k.size());
    zeta.add(atom, atom, 1.0);
    // Supports of P_j(x, .) by boolean steps; the masses can be far below
    // any tolerance, so each support is carried by a uniform measure.
    std::vector<std::vector<Distribution>> rows;
    std::vector<std::vector<char>> cur(k.size(), std::vector<char>(k.size(), 0));
    for (StateId x = 0; x < k.size(); ++x) cur[x][x] = 1;
    for (std::size_t j = 0; j < k.size(); ++j) {
      std::vector<Distribution> level;
      for (StateId x = 0; x < k.size(); ++x) {
        StateSet support;
        for (StateId z = 0; z < k.size(); ++z) {
          if (cur[x][z]) support.push_back(z);
        }
        level.push_back(Distribution::UniformOn(k.size(), support));
      }
      rows.push_back(std::move(level));
      for (auto& from : cur) {
        std::vector<char> next(k.size(), 0);
        for (StateId z = 0; z < k.size(); ++z) {
          if (!from[z]) continue;
          for (StateId to : k.successors(z)) next[to] = 1;
        }
        from = std::move(next);
      }
    }
    r.pass = zeta.diagonal_mass() == 1.0;
    for (StateId x = 0; x < k.size() && r.pass; ++x) {
      for (StateId y = 0; y < k.size(); ++y) {
        const std::size_t j = std::max(x, y);
        if (!in_tilde_C(zeta, rows[j][x], rows[j][y])) {
          r.pass = false;
          r.detail = "fails for pair " + std::to_string(x) + ", " + std::to_string(y);
          break;
        }
      }
    }
  } else if (e.id == "hitting_L" || e.id == "q_infinite" || e.id == "structural_limit") {
    std::vector<double> got;
    if (e.id == "hitting_L") {
      got = hitting_prob_L(k, {0});
    } else if (e.id == "q_infinite") {
      got = q_infinite(k, {0});
    } else {
      const SkeletonLimits lim = skeleton_limits(k);
      for (StateId x = 0; x < k.size(); ++x) got.push_back(1.0 - tv_distance(lim.rho[x], f.ipm));
    }
    double worst = 0.0;
    for (std::size_t x = 1; x <= v["x_max"].get<std::size_t>(); ++x) {
      worst = std::max(worst, std::abs(got[x] - std::ldexp(1.0, -static_cast<int>(x))));
    }
    r.pass = worst <= v["tolerance"].get<double>();
    r.detail = "max deviation from 2^-x: " + Fmt(worst);
  } else {
    r.detail = "unknown expectation id";
  }
  return r;
}

}  // namespace

std::vector<ExpectationResult> evaluate_expectations(const Fixture& fixture) {
  std::vector<ExpectationResult> out;
  for (const Expectation& e : fixture.expected) out.push_back(Evaluate(fixture, e));
  return out;
}

nlohmann::json ToJson(const Expectation& expectation) {
  nlohmann::json out{{"id", expectation.id}, {"value", expectation.value}};
  if (!expectation.qualifier.empty()) out["qualifier"] = expectation.qualifier;
  return out;
}

}  // namespace tvchain
