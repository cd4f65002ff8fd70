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

#include "tvchain/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "tvchain/chain_file.hpp"
#include "tvchain/coupling.hpp"
#include "tvchain/equivalence.hpp"
#include "tvchain/error.hpp"
#include "tvchain/harness.hpp"
#include "tvchain/structure.hpp"
#include "tvchain/verdict.hpp"

namespace tvchain {
namespace {

struct CommonFlags {
  std::uint64_t seed = 0;
  double tolerance = kDefaultTolerance;
  bool json = false;
};

struct LoadedChain {
  Kernel kernel;
  Distribution mu;
  bool mu_from_file;
};

// The ipm of the file, else the equal-weight mix of the extremal ipms.
LoadedChain Load(const std::string& path, double tolerance) {
  const ChainSpecFile spec = read_chain_file(path);
  Kernel kernel = to_kernel(spec, tolerance);
  if (auto mu = to_ipm(spec, kernel)) {
    return {std::move(kernel), std::move(*mu), true};
  }
  const std::vector<Distribution> ipms = invariant_measures(kernel);
  std::vector<double> mass(kernel.size(), 0.0);
  for (const Distribution& pi : ipms) {
    for (StateId x = 0; x < kernel.size(); ++x) {
      mass[x] += pi[x] / static_cast<double>(ipms.size());
    }
  }
  Distribution mu(std::move(mass), tolerance);
  return {std::move(kernel), std::move(mu), false};
}

StateId FindState(const Kernel& kernel, const std::string& label) {
  const auto id = kernel.space().find(label);
  if (!id) throw Error(ErrorCode::kInvalidArgument, "unknown state '" + label + "'");
  return *id;
}

std::string SetText(const Kernel& kernel, const StateSet& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ", ";
    out += kernel.space().label(set[i]);
  }
  return out + "}";
}

std::string MeasureText(const Kernel& kernel, const Distribution& mu) {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (StateId x = 0; x < mu.size(); ++x) {
    if (!mu.charges(x)) continue;
    os << (first ? "" : " ") << kernel.space().label(x) << ":" << mu[x];
    first = false;
  }
  return os.str();
}

int Analyze(const std::string& path, const CommonFlags& flags, std::ostream& out) {
  const LoadedChain chain = Load(path, flags.tolerance);
  const Kernel& k = chain.kernel;
  const ClassDecomposition dec = decompose(k);
  const std::vector<Distribution> ipms = invariant_measures(k);
  const EquivalenceAudit audit = cross_check(k, chain.mu);

  if (flags.json) {
    nlohmann::json j;
    nlohmann::json classes = nlohmann::json::array();
    for (std::size_t c = 0; c < dec.classes.size(); ++c) {
      nlohmann::json members = nlohmann::json::array();
      for (StateId x : dec.classes[c]) members.push_back(k.space().label(x));
      classes.push_back({{"members", members},
                         {"recurrent", static_cast<bool>(dec.recurrent[c])},
                         {"period", dec.period[c]}});
    }
    j["classes"] = classes;
    nlohmann::json list = nlohmann::json::array();
    for (const Distribution& pi : ipms) {
      nlohmann::json m = nlohmann::json::object();
      for (StateId x : pi.support()) m[k.space().label(x)] = pi[x];
      list.push_back(m);
    }
    j["ipms"] = list;
    j["mu_from_file"] = chain.mu_from_file;
    j["audit"] = ToJson(audit);
    out << j.dump(2) << "\n";
  } else {
    out << "states: " << k.size() << "\n";
    for (std::size_t c = 0; c < dec.classes.size(); ++c) {
      out << "class " << SetText(k, dec.classes[c]) << ": ";
      if (dec.recurrent[c]) {
        out << "recurrent, " << (dec.period[c] == 1
                                     ? std::string("aperiodic")
                                     : std::to_string(dec.period[c]) + "-periodic");
      } else {
        out << "transient";
      }
      out << "\n";
    }
    out << ipms.size() << " extremal ipm" << (ipms.size() == 1 ? "" : "s") << "\n";
    for (const Distribution& pi : ipms) out << "  " << MeasureText(k, pi) << "\n";
    out << "mu" << (chain.mu_from_file ? "" : " (mix of extremal ipms)") << ": "
        << MeasureText(k, chain.mu) << "\n";
    for (const ConditionReport& r : audit.reports) {
      out << ToString(r.condition) << ": " << (r.holds ? "holds" : "fails") << " ["
          << ToString(r.method) << "] " << r.summary << "\n";
    }
    out << "audit: "
        << (audit.clean() ? "clean" : std::to_string(audit.violations.size()) +
                                          " violation(s)")
        << " (" << audit.fingerprint << ")\n";
    for (const AuditViolationEntry& v : audit.violations) {
      out << "  " << ToString(v.lhs) << " " << v.relation << " " << ToString(v.rhs)
          << "\n";
    }
  }
  return audit.clean() ? kExitOk : kExitViolation;
}

int TvCurve(const std::string& path, const std::string& x, std::size_t n_max,
            const CommonFlags& flags, std::ostream& out) {
  const LoadedChain chain = Load(path, flags.tolerance);
  const TVCurve curve = tv_curve(chain.kernel, FindState(chain.kernel, x), chain.mu, n_max);
  if (flags.json) {
    out << nlohmann::json{{"x", x}, {"values", curve.values}, {"limit", curve.limit}}.dump()
        << "\n";
    return kExitOk;
  }
  char buf[64];
  out << "n,tv\n";
  for (std::size_t n = 0; n < curve.values.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%zu,%.12g\n", n, curve.values[n]);
    out << buf;
  }
  return kExitOk;
}

int Couple(const std::string& path, const std::string& x, const std::string& y,
           std::size_t traces, std::size_t horizon, std::size_t N, double p,
           const CommonFlags& flags, std::ostream& out) {
  const LoadedChain chain = Load(path, flags.tolerance);
  const Kernel& k = chain.kernel;
  SwitchingParams params = choose_switching_params(k, chain.mu);
  if (N > 0) params.N = N;
  if (p > 0.0) params.p = p;
  const ProductKernel product =
      switching_kernel(k, coupling_set_C(k, params.N, params.p), params.N);
  const StateId sx = FindState(k, x), sy = FindState(k, y);
  const Rng root(flags.seed);
  std::map<std::size_t, std::size_t> histogram;
  std::size_t never = 0;
  for (std::size_t t = 0; t < traces; ++t) {
    const CouplingTrace trace =
        simulate_coupling(k, product, sx, sy, root.Split(t).NextU64(), horizon);
    if (trace.meet_time) {
      ++histogram[*trace.meet_time];
    } else {
      ++never;
    }
  }
  if (flags.json) {
    nlohmann::json h = nlohmann::json::object();
    for (const auto& [time, count] : histogram) h[std::to_string(time)] = count;
    out << nlohmann::json{{"N", params.N}, {"p", params.p}, {"traces", traces},
                          {"horizon", horizon}, {"meet_time", h}, {"no_meeting", never}}
               .dump()
        << "\n";
    return kExitOk;
  }
  out << "meet_time,count\n";
  for (const auto& [time, count] : histogram) out << time << "," << count << "\n";
  out << "none," << never << "\n";
  return kExitOk;
}

int Verify(std::size_t instances, std::size_t max_states, std::size_t threads,
           const CommonFlags& flags, std::ostream& out) {
  const Rng root(flags.seed);
  std::vector<std::optional<EquivalenceAudit>> audits(instances);
  std::vector<std::string> failures(instances);
  std::atomic<std::size_t> next{0};
  const auto start = std::chrono::steady_clock::now();
  auto worker = [&] {
    for (std::size_t i = next++; i < instances; i = next++) {
      try {
        Rng rng = root.Split(i);
        const GeneratedChain g = random_chain(random_params(rng, max_states));
        audits[i] = cross_check(g.kernel, g.ipm);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::size_t violations = 0, errors = 0;
  nlohmann::json bad = nlohmann::json::array();
  for (std::size_t i = 0; i < instances; ++i) {
    if (!failures[i].empty()) {
      ++errors;
      bad.push_back({{"instance", i}, {"error", failures[i]}});
    } else if (!audits[i]->clean()) {
      ++violations;
      bad.push_back({{"instance", i}, {"audit", ToJson(*audits[i])}});
    }
  }
  if (flags.json) {
    out << nlohmann::json{{"instances", instances}, {"violations", violations},
                          {"errors", errors}, {"seconds", seconds}, {"failures", bad}}
               .dump(2)
        << "\n";
  } else {
    out << "instances: " << instances << "\nviolations: " << violations
        << "\nerrors: " << errors << "\n";
    for (const auto& b : bad) out << "  " << b.dump() << "\n";
  }
  return violations == 0 && errors == 0 ? kExitOk : kExitViolation;
}

int Fixtures(const std::string& name, std::size_t truncation,
             const std::string& boundary, const std::string& output, bool evaluate,
             const CommonFlags& flags, std::ostream& out) {
  if (boundary != "reflect" && boundary != "absorb") {
    throw CLI::ValidationError("--boundary", "must be reflect or absorb");
  }
  const Fixture f = fixture(name, truncation,
                            boundary == "reflect" ? Boundary::kReflect : Boundary::kAbsorb);
  if (evaluate) {
    bool all = true;
    nlohmann::json list = nlohmann::json::array();
    for (const ExpectationResult& r : evaluate_expectations(f)) {
      all = all && r.pass;
      if (flags.json) {
        list.push_back({{"id", r.id}, {"pass", r.pass}, {"detail", r.detail}});
      } else {
        out << (r.pass ? "PASS " : "FAIL ") << r.id << ": " << r.detail << "\n";
      }
    }
    if (flags.json) out << list.dump(2) << "\n";
    return all ? kExitOk : kExitViolation;
  }
  std::vector<std::string> meta{"fixture " + f.name + " truncation " +
                                std::to_string(f.truncation)};
  for (const std::string& note : f.notes) meta.push_back(note);
  for (const Expectation& e : f.expected) meta.push_back("expect " + ToJson(e).dump());
  const ChainSpecFile spec = from_kernel(f.kernel, f.ipm, meta);
  if (output.empty() || output == "-") {
    write_chain_file(out, spec);
  } else {
    std::ofstream file(output);
    if (!file) throw Error(ErrorCode::kInvalidArgument, "cannot write " + output);
    write_chain_file(file, spec);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Total-variation convergence conditions for finite Markov chains",
               "tvchain"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonFlags flags;
  app.add_option("--seed", flags.seed, "Random seed");
  app.add_option("--tolerance", flags.tolerance, "Numerical tolerance")
      ->check(CLI::PositiveNumber);
  app.add_flag("--json", flags.json, "Structured output");

  std::string path, x, y;
  auto* analyze = app.add_subcommand("analyze", "Decide every condition for a chain file");
  analyze->add_option("file", path, "Chain file")->required();

  std::size_t n_max = 100;
  auto* curve = app.add_subcommand("tv-curve", "Print d(P_n(x, .), mu) as CSV");
  curve->add_option("file", path, "Chain file")->required();
  curve->add_option("-x,--state", x, "Start state")->required();
  curve->add_option("-n,--n-max", n_max, "Last n")->check(CLI::PositiveNumber);

  std::size_t traces = 1000, horizon = 100, coupling_n = 0;
  double coupling_p = 0.0;
  auto* couple = app.add_subcommand("couple", "Meeting-time histogram of the switching coupling");
  couple->add_option("file", path, "Chain file")->required();
  couple->add_option("-x", x, "First start state")->required();
  couple->add_option("-y", y, "Second start state")->required();
  couple->add_option("--traces", traces, "Number of traces")->check(CLI::PositiveNumber);
  couple->add_option("--horizon", horizon, "Steps per trace")->check(CLI::PositiveNumber);
  couple->add_option("--N", coupling_n, "Skeleton step (default: chosen from mu)");
  couple->add_option("--p", coupling_p, "Coupling threshold p")->check(CLI::Range(0.0, 1.0));

  std::size_t instances = 100, max_states = 8, threads = 0;
  auto* verify = app.add_subcommand("verify", "Audit random chains");
  verify->add_option("--instances", instances, "Number of chains");
  verify->add_option("--max-states", max_states, "Largest state count")
      ->check(CLI::PositiveNumber);
  verify->add_option("--threads", threads, "Worker threads (0: hardware)");

  std::string name, boundary = "reflect", output;
  std::size_t truncation = 60;
  bool evaluate = false;
  auto* fixtures = app.add_subcommand("fixtures", "Write a fixture as a chain file");
  fixtures->add_option("name", name, "peri, simple or standard")
      ->required()
      ->check(CLI::IsMember({"peri", "simple", "standard"}));
  fixtures->add_option("--truncation", truncation, "Largest state N");
  fixtures->add_option("--boundary", boundary, "reflect or absorb (standard only)");
  fixtures->add_option("-o,--output", output, "Output file (default: stdout)");
  fixtures->add_flag("--evaluate", evaluate, "Check the expected verdicts instead");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    if (*analyze) return Analyze(path, flags, out);
    if (*curve) return TvCurve(path, x, n_max, flags, out);
    if (*couple) {
      return Couple(path, x, y, traces, horizon, coupling_n, coupling_p, flags, out);
    }
    if (*verify) return Verify(instances, max_states, threads, flags, out);
    if (*fixtures) {
      return Fixtures(name, truncation, boundary, output, evaluate, flags, out);
    }
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const AuditViolation& e) {
    err << e.what() << "\n";
    return kExitViolation;
  } catch (const ParseError& e) {
    err << "parse error";
    if (e.line() > 0) err << " at line " << e.line();
    err << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << ToString(e.code()) << "]: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace tvchain
