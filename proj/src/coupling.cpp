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

#include "tvchain/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "linear_solve.hpp"
#include "switching_analysis.hpp"
#include "tvchain/equivalence.hpp"
#include "tvchain/error.hpp"
#include "tvchain/simplex.hpp"

namespace tvchain {

void JointDistribution::add(StateId i, StateId j, double mass) {
  if (!(mass > 0.0)) return;
  if (i >= n1_ || j >= n2_) {
    throw Error(ErrorCode::kIndexOutOfRange, "joint distribution cell");
  }
  mass_[{i, j}] += mass;
}

double JointDistribution::at(StateId i, StateId j) const {
  auto it = mass_.find({i, j});
  return it == mass_.end() ? 0.0 : it->second;
}

std::vector<double> JointDistribution::marginal1() const {
  std::vector<double> out(n1_, 0.0);
  for (const auto& [cell, m] : mass_) out[cell.first] += m;
  return out;
}

std::vector<double> JointDistribution::marginal2() const {
  std::vector<double> out(n2_, 0.0);
  for (const auto& [cell, m] : mass_) out[cell.second] += m;
  return out;
}

double JointDistribution::total() const {
  double t = 0.0;
  for (const auto& [cell, m] : mass_) t += m;
  return t;
}

double JointDistribution::diagonal_mass() const {
  double t = 0.0;
  for (const auto& [cell, m] : mass_) {
    if (cell.first == cell.second) t += m;
  }
  return t;
}

namespace {

void RequireSameSpace(const Distribution& nu1, const Distribution& nu2) {
  if (nu1.size() != nu2.size()) {
    throw Error(ErrorCode::kSpaceMismatch, "coupling of measures on different spaces");
  }
}

}  // namespace

JointDistribution maximal_coupling(const Distribution& nu1,
                                   const Distribution& nu2) {
  RequireSameSpace(nu1, nu2);
  const std::size_t n = nu1.size();
  JointDistribution out(n, n);
  std::vector<double> r1(n), r2(n);
  double d1 = 0.0, d2 = 0.0;
  for (StateId i = 0; i < n; ++i) {
    const double m = std::min(nu1[i], nu2[i]);
    out.add(i, i, m);
    r1[i] = nu1[i] - m;
    r2[i] = nu2[i] - m;
    d1 += r1[i];
    d2 += r2[i];
  }
  if (d1 > 0.0 && d2 > 0.0) {
    // Each residual row i spreads r1(i) in proportion to r2.
    for (StateId i = 0; i < n; ++i) {
      if (r1[i] <= 0.0) continue;
      for (StateId j = 0; j < n; ++j) {
        if (r2[j] > 0.0) out.add(i, j, r1[i] * r2[j] / d2);
      }
    }
  }
  return out;
}

JointDistribution product_coupling(const Distribution& nu1,
                                   const Distribution& nu2) {
  JointDistribution out(nu1.size(), nu2.size());
  for (StateId i = 0; i < nu1.size(); ++i) {
    if (nu1[i] <= 0.0) continue;
    for (StateId j = 0; j < nu2.size(); ++j) {
      out.add(i, j, nu1[i] * nu2[j]);
    }
  }
  return out;
}

namespace {

bool IsProbability(const JointDistribution& xi, double tol) {
  return std::abs(xi.total() - 1.0) <= tol;
}

}  // namespace

bool in_tilde_C(const JointDistribution& xi, const Distribution& nu1,
                const Distribution& nu2) {
  if (xi.size1() != nu1.size() || xi.size2() != nu2.size()) return false;
  const double tol = std::max(nu1.tolerance(), nu2.tolerance());
  if (!IsProbability(xi, tol)) return false;
  const std::vector<double> m1 = xi.marginal1();
  const std::vector<double> m2 = xi.marginal2();
  for (StateId i = 0; i < m1.size(); ++i) {
    if (m1[i] > tol && !nu1.charges(i)) return false;
  }
  for (StateId j = 0; j < m2.size(); ++j) {
    if (m2[j] > tol && !nu2.charges(j)) return false;
  }
  return true;
}

bool in_check_C(const JointDistribution& xi, const Distribution& nu1,
                const Distribution& nu2) {
  if (!in_tilde_C(xi, nu1, nu2)) return false;
  const double tol = std::max(nu1.tolerance(), nu2.tolerance());
  const std::vector<double> m2 = xi.marginal2();
  for (StateId j = 0; j < m2.size(); ++j) {
    if (nu2.charges(j) && !(m2[j] > tol)) return false;
  }
  return true;
}

LpCouplingResult optimal_coupling_lp(const Distribution& nu1,
                                     const Distribution& nu2) {
  RequireSameSpace(nu1, nu2);
  std::vector<StateId> s1, s2;
  std::size_t combined = 0;
  double t1 = 0.0, t2 = 0.0;
  for (StateId i = 0; i < nu1.size(); ++i) {
    if (nu1[i] > 0.0) s1.push_back(i), t1 += nu1[i];
    if (nu2[i] > 0.0) s2.push_back(i), t2 += nu2[i];
    if (nu1[i] > 0.0 || nu2[i] > 0.0) ++combined;
  }
  if (combined > kMaxLpSupport) {
    throw Error(ErrorCode::kSupportTooLarge,
                "LP oracle supports at most " + std::to_string(kMaxLpSupport) +
                    " states, got " + std::to_string(combined));
  }
  // Variables x(a, b) for a in supp ν1, b in supp ν2; the second marginal is
  // rescaled so both sides carry the same total.
  const std::size_t k1 = s1.size(), k2 = s2.size();
  LinearProgram lp;
  lp.c.assign(k1 * k2, 0.0);
  for (std::size_t a = 0; a < k1; ++a) {
    for (std::size_t b = 0; b < k2; ++b) {
      lp.c[a * k2 + b] = s1[a] == s2[b] ? 0.0 : 1.0;
    }
  }
  for (std::size_t a = 0; a < k1; ++a) {
    std::vector<double> row(k1 * k2, 0.0);
    for (std::size_t b = 0; b < k2; ++b) row[a * k2 + b] = 1.0;
    lp.A.push_back(std::move(row));
    lp.b.push_back(nu1[s1[a]]);
  }
  for (std::size_t b = 0; b < k2; ++b) {
    std::vector<double> row(k1 * k2, 0.0);
    for (std::size_t a = 0; a < k1; ++a) row[a * k2 + b] = 1.0;
    lp.A.push_back(std::move(row));
    lp.b.push_back(nu2[s2[b]] * t1 / t2);
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kLpInfeasible, "coupling LP did not reach an optimum");
  }
  LpCouplingResult out{sol.objective, JointDistribution(nu1.size(), nu2.size())};
  for (std::size_t a = 0; a < k1; ++a) {
    for (std::size_t b = 0; b < k2; ++b) {
      out.coupling.add(s1[a], s2[b], sol.x[a * k2 + b]);
    }
  }
  return out;
}

std::size_t PairSet::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<StatePair> PairSet::pairs() const {
  std::vector<StatePair> out;
  for (StateId x = 0; x < n_; ++x) {
    for (StateId y = 0; y < n_; ++y) {
      if (contains(x, y)) out.emplace_back(x, y);
    }
  }
  return out;
}

namespace {

std::vector<Distribution> StepRows(const Kernel& kernel, std::size_t N) {
  std::vector<Distribution> rows;
  rows.reserve(kernel.size());
  for (StateId x = 0; x < kernel.size(); ++x) rows.push_back(n_step(kernel, x, N));
  return rows;
}

}  // namespace

PairSet coupling_set_C(const Kernel& kernel, std::size_t N, double p) {
  if (N == 0) throw Error(ErrorCode::kInvalidArgument, "C_{N,p} needs N >= 1");
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "C_{N,p} needs p in (0, 1)");
  }
  const std::size_t n = kernel.size();
  const std::vector<Distribution> rows = StepRows(kernel, N);
  PairSet out(n);
  for (StateId x = 0; x < n; ++x) {
    for (StateId y = 0; y < n; ++y) {
      if (tv_distance(rows[x], rows[y]) <= 1.0 - p + kernel.tolerance()) {
        out.insert(x, y);
      }
    }
  }
  return out;
}

ProductKernel switching_kernel(const Kernel& kernel, const PairSet& C,
                               std::size_t N) {
  if (N == 0) throw Error(ErrorCode::kInvalidArgument, "switching kernel needs N >= 1");
  const std::size_t n = kernel.size();
  if (C.state_count() != n) {
    throw Error(ErrorCode::kSpaceMismatch, "pair set and kernel sizes differ");
  }
  const std::vector<Distribution> rows = StepRows(kernel, N);
  ProductKernel out;
  out.n = n;
  out.step = N;
  out.C = C;
  out.rows.reserve(n * n);
  out.modes.reserve(n * n);
  const double tol = kernel.tolerance();
  for (StateId x = 0; x < n; ++x) {
    for (StateId y = 0; y < n; ++y) {
      if (x == y) {
        JointDistribution row(n, n);
        for (StateId z = 0; z < n; ++z) row.add(z, z, rows[x][z]);
        out.rows.push_back(std::move(row));
        out.modes.push_back(RowMode::kDiagonal);
      } else if (C.contains(x, y)) {
        out.rows.push_back(maximal_coupling(rows[x], rows[y]));
        out.modes.push_back(RowMode::kMaximal);
      } else {
        out.rows.push_back(product_coupling(rows[x], rows[y]));
        out.modes.push_back(RowMode::kIndependent);
      }
      const JointDistribution& row = out.rows.back();
      const std::vector<double> m1 = row.marginal1();
      const std::vector<double> m2 = row.marginal2();
      double err = 0.0;
      for (StateId z = 0; z < n; ++z) {
        err = std::max({err, std::abs(m1[z] - rows[x][z]),
                        std::abs(m2[z] - rows[y][z])});
      }
      if (err > tol) throw NumericalFailure("switching kernel marginals", err);
    }
  }
  return out;
}

SwitchingParams choose_switching_params(const Kernel& kernel,
                                        const Distribution& mu) {
  require_invariant(kernel, mu);
  const std::size_t n = kernel.size();
  const double tol = kernel.tolerance();
  const StateSet charged = mu.support();
  for (std::size_t N = 1; N <= 2 * n; ++N) {
    const std::vector<Distribution> rows = StepRows(kernel, N);
    double best = 1.0;
    for (StateId x : charged) {
      for (StateId y : charged) {
        if (x != y) best = std::min(best, tv_distance(rows[x], rows[y]));
      }
    }
    // Largest p = 2^-k with d <= 1 - p for the closest charged pair.
    for (double p = 0.5; p >= tol; p *= 0.5) {
      if (best <= 1.0 - p + tol) return {N, p};
    }
  }
  return {};
}

MeetingAnalysis analyze_meeting(const ProductKernel& product) {
  const std::size_t n = product.n;
  internal::SparseRows rows(n * n);
  for (std::size_t cell = 0; cell < n * n; ++cell) {
    for (const auto& [pair, m] : product.rows[cell].entries()) {
      rows[cell].emplace_back(pair.first * n + pair.second, m);
    }
  }
  std::vector<bool> diagonal(n * n, false);
  for (StateId z = 0; z < n; ++z) diagonal[z * n + z] = true;
  const std::vector<bool> open(n * n, true);
  MeetingAnalysis out;
  out.n = n;
  out.can_meet = internal::ReverseReach(rows, diagonal, open, 0.0);
  std::vector<bool> stuck(n * n);
  for (std::size_t c = 0; c < n * n; ++c) stuck[c] = !out.can_meet[c];
  const std::vector<bool> may_fail = internal::ReverseReach(rows, stuck, open, 0.0);
  out.meets_surely.resize(n * n);
  for (std::size_t c = 0; c < n * n; ++c) out.meets_surely[c] = !may_fail[c];
  return out;
}

namespace {

std::vector<double> MeetingProbabilities(const ProductKernel& product,
                                         double tolerance) {
  const std::size_t n = product.n;
  internal::SparseRows rows(n * n);
  for (std::size_t cell = 0; cell < n * n; ++cell) {
    for (const auto& [pair, m] : product.rows[cell].entries()) {
      rows[cell].emplace_back(pair.first * n + pair.second, m);
    }
  }
  std::vector<bool> diagonal(n * n, false);
  for (StateId z = 0; z < n; ++z) diagonal[z * n + z] = true;
  return internal::ReachProbability(rows, diagonal, 0.0, tolerance,
                                    "meeting probabilities");
}

}  // namespace

double meeting_probability(const ProductKernel& product, StateId x, StateId y) {
  if (x >= product.n || y >= product.n) {
    throw Error(ErrorCode::kIndexOutOfRange, "meeting probability pair");
  }
  return MeetingProbabilities(product, kDefaultTolerance)[x * product.n + y];
}

JointDistribution ThreeWayJoint::project12(std::size_t n1, std::size_t n2) const {
  JointDistribution out(n1, n2);
  for (const auto& [cell, m] : mass) out.add(cell[0], cell[1], m);
  return out;
}

JointDistribution ThreeWayJoint::project23(std::size_t n2, std::size_t n3) const {
  JointDistribution out(n2, n3);
  for (const auto& [cell, m] : mass) out.add(cell[1], cell[2], m);
  return out;
}

ThreeWayJoint glue(const JointDistribution& rho1, const JointDistribution& rho3,
                   double tolerance) {
  if (rho1.size2() != rho3.size1()) {
    throw Error(ErrorCode::kMarginalMismatch, "glued spaces differ");
  }
  const std::vector<double> m1 = rho1.marginal2();
  const std::vector<double> m3 = rho3.marginal1();
  for (StateId b = 0; b < m1.size(); ++b) {
    if (std::abs(m1[b] - m3[b]) > tolerance) {
      throw Error(ErrorCode::kMarginalMismatch,
                  "middle marginals differ at state " + std::to_string(b));
    }
  }
  std::vector<std::vector<std::pair<StateId, double>>> by_middle(m3.size());
  for (const auto& [cell, m] : rho3.entries()) {
    by_middle[cell.first].emplace_back(cell.second, m);
  }
  ThreeWayJoint out;
  for (const auto& [cell, m] : rho1.entries()) {
    const StateId b = cell.second;
    if (!(m3[b] > 0.0)) continue;
    for (const auto& [c, m_bc] : by_middle[b]) {
      out.mass[{cell.first, b, c}] += m * m_bc / m3[b];
    }
  }
  return out;
}

std::vector<StateId> sample_bridge(const Kernel& kernel, StateId a, StateId b,
                                   std::size_t N, Rng& rng) {
  const std::size_t n = kernel.size();
  if (a >= n || b >= n) throw Error(ErrorCode::kIndexOutOfRange, "bridge endpoint");
  // h[j][v] = P_j(v, {b}).
  std::vector<std::vector<double>> h(N + 1, std::vector<double>(n, 0.0));
  h[0][b] = 1.0;
  for (std::size_t j = 1; j <= N; ++j) {
    for (StateId v = 0; v < n; ++v) {
      double s = 0.0;
      for (const Entry& e : kernel.row(v)) s += e.probability * h[j - 1][e.state];
      h[j][v] = s;
    }
  }
  if (!(h[N][a] > 0.0)) {
    throw Error(ErrorCode::kUnsupportedEndpoint,
                "P_N(" + kernel.space().label(a) + ", " + kernel.space().label(b) +
                    ") = 0");
  }
  std::vector<StateId> path{a};
  StateId u = a;
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t left = N - k - 1;
    // Glue the one-step law (X_k = u, X_{k+1}) with the law of
    // (X_{k+1}, 1{X_N = b}), then condition on the second coordinate.
    JointDistribution step(n, n);
    JointDistribution ahead(n, 2);
    for (const Entry& e : kernel.row(u)) {
      step.add(u, e.state, e.probability);
      ahead.add(e.state, 0, e.probability * h[left][e.state]);
      ahead.add(e.state, 1, e.probability * (1.0 - h[left][e.state]));
    }
    const ThreeWayJoint joint = glue(step, ahead, 1e-9);
    std::vector<StateId> next;
    std::vector<double> weights;
    for (const auto& [cell, m] : joint.mass) {
      if (cell[2] == 0) {
        next.push_back(cell[1]);
        weights.push_back(m);
      }
    }
    u = next[rng.Categorical(weights)];
    path.push_back(u);
  }
  path.back() = b;
  return path;
}

std::vector<StatePair> interpolate_skeleton_coupling(
    const Kernel& kernel, const ProductKernel& product,
    const std::vector<StatePair>& segment, Rng& rng) {
  const std::size_t N = product.step;
  if (N < 2) throw Error(ErrorCode::kInvalidArgument, "interpolation needs N >= 2");
  if (segment.empty()) return {};
  std::vector<StatePair> out{segment.front()};
  for (std::size_t k = 0; k + 1 < segment.size(); ++k) {
    const auto [x0, y0] = segment[k];
    const auto [x1, y1] = segment[k + 1];
    if (!(product.row(x0, y0).at(x1, y1) > 0.0)) {
      throw Error(ErrorCode::kUnsupportedEndpoint,
                  "skeleton transition not supported by the product kernel");
    }
    std::vector<StateId> bx = sample_bridge(kernel, x0, x1, N, rng);
    std::vector<StateId> by =
        x0 == y0 ? bx : sample_bridge(kernel, y0, y1, N, rng);
    for (std::size_t j = 1; j <= N; ++j) out.emplace_back(bx[j], by[j]);
  }
  return out;
}

namespace {

struct CumulativeRow {
  std::vector<StatePair> cells;
  std::vector<double> cumulative;
};

class RowSampler {
 public:
  explicit RowSampler(const ProductKernel& product)
      : product_(product), cache_(product.n * product.n) {}

  StatePair Sample(StatePair from, Rng& rng) {
    CumulativeRow& row = cache_[from.first * product_.n + from.second];
    if (row.cells.empty()) {
      double acc = 0.0;
      for (const auto& [cell, m] : product_.row(from.first, from.second).entries()) {
        acc += m;
        row.cells.push_back(cell);
        row.cumulative.push_back(acc);
      }
    }
    const double u = rng.Uniform() * row.cumulative.back();
    auto it = std::upper_bound(row.cumulative.begin(), row.cumulative.end(), u);
    if (it == row.cumulative.end()) --it;
    return row.cells[static_cast<std::size_t>(it - row.cumulative.begin())];
  }

 private:
  const ProductKernel& product_;
  std::vector<CumulativeRow> cache_;
};

}  // namespace

CouplingTrace simulate_coupling(const Kernel& kernel,
                                const ProductKernel& product, StateId x,
                                StateId y, std::uint64_t seed,
                                std::size_t horizon) {
  if (horizon == 0) throw Error(ErrorCode::kInvalidArgument, "horizon must be >= 1");
  if (x >= product.n || y >= product.n) {
    throw Error(ErrorCode::kIndexOutOfRange, "coupling start pair");
  }
  Rng rng(seed);
  RowSampler sampler(product);
  const std::size_t N = product.step;
  const std::size_t skeleton_steps = (horizon + N - 1) / N;
  std::vector<StatePair> skeleton_path{{x, y}};
  for (std::size_t k = 0; k < skeleton_steps; ++k) {
    skeleton_path.push_back(sampler.Sample(skeleton_path.back(), rng));
  }
  CouplingTrace trace;
  trace.seed = seed;
  trace.path = N == 1 ? std::move(skeleton_path)
                      : interpolate_skeleton_coupling(kernel, product,
                                                      skeleton_path, rng);
  trace.path.resize(horizon + 1);
  std::size_t k = trace.path.size();
  while (k > 0 && trace.path[k - 1].first == trace.path[k - 1].second) --k;
  if (k < trace.path.size()) trace.meet_time = k;
  return trace;
}

CouplingTrace simulate_coupling(const Kernel& kernel, StateId x, StateId y,
                                SwitchingParams params, std::uint64_t seed,
                                std::size_t horizon) {
  const ProductKernel product = switching_kernel(
      kernel, coupling_set_C(kernel, params.N, params.p), params.N);
  return simulate_coupling(kernel, product, x, y, seed, horizon);
}

namespace internal {

SwitchingAnalysis AnalyzeSwitching(const Kernel& kernel, const Distribution& mu) {
  SwitchingAnalysis out;
  out.params = choose_switching_params(kernel, mu);
  out.product = switching_kernel(
      kernel, coupling_set_C(kernel, out.params.N, out.params.p), out.params.N);
  out.meeting = analyze_meeting(out.product);
  try {
    out.probability = MeetingProbabilities(out.product, kernel.tolerance());
  } catch (const NumericalFailure&) {
    out.probability.reset();
  }
  return out;
}

bool ProbabilitiesAgree(const SwitchingAnalysis& analysis,
                        const std::vector<StatePair>& pairs, bool positive_only) {
  if (!analysis.probability) return false;
  const std::size_t n = analysis.meeting.n;
  for (const auto& [x, y] : pairs) {
    const double p = (*analysis.probability)[x * n + y];
    if (positive_only) {
      if (analysis.meeting.can(x, y) != (p > 0.0)) return false;
    } else if (analysis.meeting.surely(x, y) != (p >= 1.0 - 1e-6)) {
      return false;
    }
  }
  return true;
}

}  // namespace internal

namespace {

nlohmann::json LabelPair(const Kernel& kernel, StateId x, StateId y) {
  return nlohmann::json::array(
      {kernel.space().label(x), kernel.space().label(y)});
}

std::vector<StatePair> RelevantPairs(const Kernel& kernel,
                                     const Distribution& mu, bool mu_only) {
  std::vector<StatePair> out;
  for (StateId x = 0; x < kernel.size(); ++x) {
    for (StateId y = 0; y < kernel.size(); ++y) {
      if (!mu_only || (mu.charges(x) && mu.charges(y))) out.emplace_back(x, y);
    }
  }
  return out;
}

constexpr std::size_t kListedWitnessStates = 8;
constexpr std::size_t kConfirmStates = 16;
constexpr std::size_t kC1WitnessCap = 2000;
constexpr double kLimitTolerance = 1e-7;

// C1 and its sequence reading: limits of d(P_n(x,.), P_n(y,.)) are
// d(ρ_x, ρ_y); the maximal coupling at the first k with d <= 1/m is ζ[m].
std::pair<ConditionReport, ConditionReport> DecideC1(const Kernel& kernel) {
  const std::size_t n = kernel.size();
  const SkeletonLimits limits = skeleton_limits(kernel);
  ConditionReport c1;
  c1.condition = Condition::kC1;
  c1.holds = true;
  nlohmann::json w;
  for (StateId x = 0; x < n && c1.holds; ++x) {
    for (StateId y = x + 1; y < n; ++y) {
      const double d = tv_distance(limits.rho[x], limits.rho[y]);
      if (d > kLimitTolerance) {
        c1.holds = false;
        w["counterexample"] = LabelPair(kernel, x, y);
        w["limit_distance"] = d;
        c1.summary = "d(P_n(" + kernel.space().label(x) + ", .), P_n(" +
                     kernel.space().label(y) + ", .)) tends to " +
                     std::to_string(d);
        break;
      }
    }
  }
  c1.method = Method::kStructural;
  if (c1.holds) {
    const std::vector<double> ms{2.0, 10.0, 100.0};
    const std::size_t cap = std::min(4 * n * n, kC1WitnessCap);
    // k_m[pair][m], filled by walking all rows forward together.
    std::vector<std::vector<std::optional<std::size_t>>> k_m(
        n * n, std::vector<std::optional<std::size_t>>(ms.size()));
    std::size_t open = n * (n - 1) / 2 * ms.size();
    std::vector<Distribution> rows;
    for (StateId x = 0; x < n; ++x) {
      rows.push_back(Distribution::PointMass(n, x, kernel.tolerance()));
    }
    for (std::size_t k = 0; k <= cap && open > 0; ++k) {
      if (k > 0) {
        for (auto& r : rows) r = push_forward(kernel, r);
      }
      for (StateId x = 0; x < n; ++x) {
        for (StateId y = x + 1; y < n; ++y) {
          auto& slots = k_m[x * n + y];
          if (slots.back()) continue;
          const double d = tv_distance(rows[x], rows[y]);
          for (std::size_t i = 0; i < ms.size(); ++i) {
            if (!slots[i] && d <= 1.0 / ms[i] + kernel.tolerance()) {
              slots[i] = k;
              --open;
            }
          }
        }
      }
    }
    std::size_t worst = 0;
    nlohmann::json list = nlohmann::json::array();
    for (StateId x = 0; x < n; ++x) {
      for (StateId y = x + 1; y < n; ++y) {
        nlohmann::json ks = nlohmann::json::array();
        for (const auto& k : k_m[x * n + y]) {
          if (k) worst = std::max(worst, *k);
          ks.push_back(k ? nlohmann::json(*k) : nlohmann::json(nullptr));
        }
        if (n <= kListedWitnessStates) {
          list.push_back({{"pair", LabelPair(kernel, x, y)}, {"k_m", ks}});
        }
      }
    }
    w["m"] = ms;
    if (n <= kListedWitnessStates) w["witnesses"] = std::move(list);
    if (open == 0) {
      c1.method = Method::kBothAgree;
      w["max_k"] = worst;
      c1.summary = "maximal couplings reach diagonal mass 0.99 by k = " +
                   std::to_string(worst);
    } else {
      w["search_cap"] = cap;
      c1.summary = "all pairs share the same limit law; witness search "
                   "unresolved within " + std::to_string(cap) + " steps";
    }
  }
  c1.witness = w;
  ConditionReport hat = c1;
  hat.condition = Condition::kC1Hat;
  return {std::move(c1), std::move(hat)};
}

// C2 / C3: a coupling of P_k(x,.), P_k(y,.) with positive diagonal mass.
ConditionReport DecideC2C3(const Kernel& kernel, const Distribution& mu,
                           Condition condition, bool mu_only) {
  const PairReachability table = pair_reachability(kernel);
  const std::vector<StatePair> pairs = RelevantPairs(kernel, mu, mu_only);
  ConditionReport report;
  report.condition = condition;
  report.holds = true;
  report.method = Method::kStructural;
  nlohmann::json w;
  for (const auto& [x, y] : pairs) {
    if (x == y || table.at(x, y)) continue;
    report.holds = false;
    w["counterexample"] = LabelPair(kernel, x, y);
    report.summary = "every coupling of P_k(" + kernel.space().label(x) +
                     ", .) and P_k(" + kernel.space().label(y) +
                     ", .) has zero diagonal mass";
    report.witness = std::move(w);
    return report;
  }
  if (kernel.size() <= kConfirmStates) {
    bool confirmed = true;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& [x, y] : pairs) {
      if (y < x) continue;
      const std::size_t k = x == y ? 0 : *table.at(x, y);
      const double diag =
          maximal_coupling(n_step(kernel, x, k), n_step(kernel, y, k))
              .diagonal_mass();
      if (!(diag > 0.0)) confirmed = false;
      if (kernel.size() <= kListedWitnessStates) {
        list.push_back({{"pair", LabelPair(kernel, x, y)},
                        {"k", k},
                        {"diagonal_mass", diag}});
      }
    }
    if (confirmed) report.method = Method::kBothAgree;
    if (kernel.size() <= kListedWitnessStates) w["witnesses"] = std::move(list);
  }
  report.summary = "maximal couplings at the first common-support step have "
                   "positive diagonal mass";
  report.witness = std::move(w);
  return report;
}

nlohmann::json SwitchingJson(const internal::SwitchingAnalysis& analysis) {
  nlohmann::json w;
  w["N"] = analysis.params.N;
  w["p"] = analysis.params.p;
  w["pairs_in_C"] = analysis.product.C.count();
  return w;
}

// Path couplings built from the switching chain: `surely` pairs must meet
// with probability one, `positively` pairs with positive probability.
ConditionReport DecideFromSwitching(const Kernel& kernel,
                                    const internal::SwitchingAnalysis& analysis,
                                    Condition condition,
                                    const std::vector<StatePair>& surely,
                                    const std::vector<StatePair>& positively) {
  ConditionReport report;
  report.condition = condition;
  nlohmann::json w = SwitchingJson(analysis);
  report.holds = true;
  for (const auto& [x, y] : positively) {
    if (!analysis.meeting.can(x, y)) {
      report.holds = false;
      w["counterexample"] = LabelPair(kernel, x, y);
      w["failure"] = "never meets";
      break;
    }
  }
  if (report.holds) {
    for (const auto& [x, y] : surely) {
      if (!analysis.meeting.surely(x, y)) {
        report.holds = false;
        w["counterexample"] = LabelPair(kernel, x, y);
        w["failure"] = "meets with probability below one";
        break;
      }
    }
  }
  const bool agree = internal::ProbabilitiesAgree(analysis, surely, false) &&
                     internal::ProbabilitiesAgree(analysis, positively, true);
  report.method = agree ? Method::kBothAgree : Method::kStructural;
  if (analysis.probability && !surely.empty()) {
    double lowest = 1.0;
    for (const auto& [x, y] : surely) {
      lowest = std::min(lowest, (*analysis.probability)[x * analysis.meeting.n + y]);
    }
    w["min_meeting_probability"] = lowest;
  }
  report.summary = report.holds
                       ? "switching coupling meets as required"
                       : "switching coupling fails at pair " +
                             w["counterexample"][0].get<std::string>() + ", " +
                             w["counterexample"][1].get<std::string>();
  report.witness = std::move(w);
  return report;
}

}  // namespace

std::vector<ConditionReport> check_C_family(const Kernel& kernel,
                                            const Distribution& mu,
                                            Index index) {
  require_invariant(kernel, mu);
  const std::vector<StatePair> all = RelevantPairs(kernel, mu, false);
  const std::vector<StatePair> charged = RelevantPairs(kernel, mu, true);
  std::vector<ConditionReport> out;
  switch (index) {
    case Index::k1: {
      auto [c1, hat] = DecideC1(kernel);
      const internal::SwitchingAnalysis analysis =
          internal::AnalyzeSwitching(kernel, mu);
      ConditionReport prime =
          DecideFromSwitching(kernel, analysis, Condition::kC1Prime, all, {});
      ConditionReport ring = prime;
      ring.condition = Condition::kC1Ring;
      out = {std::move(c1), std::move(hat), std::move(ring), std::move(prime)};
      break;
    }
    case Index::k2: {
      const internal::SwitchingAnalysis analysis =
          internal::AnalyzeSwitching(kernel, mu);
      out.push_back(DecideC2C3(kernel, mu, Condition::kC2, false));
      out.push_back(
          DecideFromSwitching(kernel, analysis, Condition::kC2Prime, charged, all));
      break;
    }
    case Index::k3: {
      const internal::SwitchingAnalysis analysis =
          internal::AnalyzeSwitching(kernel, mu);
      out.push_back(DecideC2C3(kernel, mu, Condition::kC3, true));
      out.push_back(
          DecideFromSwitching(kernel, analysis, Condition::kC3Prime, charged, {}));
      break;
    }
  }
  return out;
}

ConditionReport check_C(const Kernel& kernel, const Distribution& mu,
                        Index index) {
  require_invariant(kernel, mu);
  switch (index) {
    case Index::k1:
      return DecideC1(kernel).first;
    case Index::k2:
      return DecideC2C3(kernel, mu, Condition::kC2, false);
    case Index::k3:
      return DecideC2C3(kernel, mu, Condition::kC3, true);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown index");
}

}  // namespace tvchain
