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

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "tvchain/chain_file.hpp"
#include "tvchain/cli.hpp"
#include "tvchain/error.hpp"
#include "tvchain/harness.hpp"
#include "tvchain/structure.hpp"
#include "tvchain/verdict.hpp"

namespace tvchain {
namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("tvchain_test_" + name)).string();
}

std::string WriteText(const std::string& name, const std::string& text) {
  const std::string path = TempPath(name);
  std::ofstream(path) << text;
  return path;
}

TEST(Generator, Examples) {
  GeneratorParams one;
  one.n_states = 5;
  one.seed = 1;
  const GeneratedChain a = random_chain(one);
  EXPECT_TRUE(check_B(a.kernel, a.ipm, Index::k2).holds);

  GeneratorParams two;
  two.n_states = 6;
  two.n_recurrent_classes = 2;
  two.periods = {1, 1};
  two.seed = 2;
  const GeneratedChain b = random_chain(two);
  EXPECT_EQ(invariant_measures(b.kernel).size(), 2u);
  EXPECT_FALSE(decide_P(b.kernel, b.ipm).p2.holds);

  GeneratorParams three;
  three.n_states = 6;
  three.periods = {3};
  three.seed = 3;
  const GeneratedChain c = random_chain(three);
  const AperiodicityVerdict v = is_aperiodic(c.kernel, c.ipm);
  EXPECT_FALSE(v.aperiodic);
  EXPECT_EQ(v.witness->d, 3u);

  GeneratorParams bad;
  bad.n_states = 2;
  bad.n_recurrent_classes = 3;
  bad.periods = {1, 1, 1};
  try {
    random_chain(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnrealizableParams);
  }
}

TEST(Generator, Deterministic) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng r1(seed), r2(seed);
    const GeneratedChain a = random_chain(random_params(r1, 9));
    const GeneratedChain b = random_chain(random_params(r2, 9));
    EXPECT_EQ(a.kernel, b.kernel);
    EXPECT_EQ(fingerprint(a.kernel), fingerprint(b.kernel));
    for (StateId x = 0; x < a.ipm.size(); ++x) EXPECT_EQ(a.ipm[x], b.ipm[x]);
    EXPECT_TRUE(is_invariant(a.kernel, a.ipm));
  }
}

TEST(Fixtures, ShapesAndErrors) {
  const Fixture peri = fixture("peri", 0);
  EXPECT_EQ(peri.kernel.size(), 2u);
  const Fixture simple = fixture("simple", 40);
  EXPECT_EQ(simple.kernel.size(), 41u);
  EXPECT_DOUBLE_EQ(simple.kernel.probability(0, 40), std::ldexp(1.0, -39));
  const Distribution p5 = n_step(simple.kernel, 0, 5);
  EXPECT_GT(p5[2], 0.0);
  EXPECT_DOUBLE_EQ(n_step(simple.kernel, 1, 5)[1], 1.0);
  try {
    fixture("standard", 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncationTooSmall);
  }
  EXPECT_THROW(fixture("nope", 10), Error);
}

TEST(Fixtures, ExpectationsPass) {
  const std::vector<Fixture> all{fixture("peri", 0), fixture("simple", 40),
                                 fixture("standard", 60),
                                 fixture("standard", 60, Boundary::kAbsorb)};
  for (const Fixture& f : all) {
    EXPECT_FALSE(f.expected.empty());
    for (const ExpectationResult& r : evaluate_expectations(f)) {
      EXPECT_TRUE(r.pass) << f.name << " " << r.id << ": " << r.detail;
    }
  }
}

TEST(ChainFile, RoundTripIsBitIdentical) {
  std::vector<Kernel> kernels{fixture("simple", 40).kernel, fixture("standard", 60).kernel};
  for (const auto& g : oracle::RandomChains(20, 9, 71)) kernels.push_back(g.kernel);
  for (const Kernel& k : kernels) {
    std::stringstream buffer;
    write_chain_file(buffer, from_kernel(k, std::nullopt, {"note"}));
    const ChainSpecFile parsed = parse_chain_file(buffer);
    const Kernel back = to_kernel(parsed);
    ASSERT_EQ(back.size(), k.size());
    for (StateId x = 0; x < k.size(); ++x) {
      for (StateId y = 0; y < k.size(); ++y) EXPECT_EQ(back.probability(x, y), k.probability(x, y));
    }
    EXPECT_EQ(parsed.meta, std::vector<std::string>{"note"});
  }
}

TEST(ChainFile, ParsesFormat) {
  std::istringstream in(
      "# peri\nstates: a b\na -> b : 1\nb -> a : 1.0\nipm: a 0.5 b 0.5\n");
  const ChainSpecFile spec = parse_chain_file(in);
  const Kernel k = to_kernel(spec);
  EXPECT_EQ(k.space().label(1), "b");
  const auto mu = to_ipm(spec, k);
  ASSERT_TRUE(mu);
  EXPECT_DOUBLE_EQ((*mu)[0], 0.5);
}

TEST(ChainFile, Diagnostics) {
  std::istringstream bad_prob("states: a b\na -> b : x\n");
  try {
    parse_chain_file(bad_prob);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream unknown("states: a\na -> c : 1\n");
  EXPECT_THROW(to_kernel(parse_chain_file(unknown)), ParseError);
  std::istringstream deficit("states: a b\na -> b : 0.5\nb -> a : 1\n");
  try {
    to_kernel(parse_chain_file(deficit));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("a"), std::string::npos);
  }
  std::istringstream not_invariant("states: a b\na -> b : 1\nb -> a : 1\nipm: a 1\n");
  const ChainSpecFile spec = parse_chain_file(not_invariant);
  EXPECT_THROW(to_ipm(spec, to_kernel(spec)), Error);
}

TEST(Cli, AnalyzePeri) {
  const std::string path = TempPath("peri.chain");
  ASSERT_EQ(Cli({"fixtures", "peri", "-o", path}).code, kExitOk);
  const CliResult r = Cli({"analyze", path});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("2-periodic"), std::string::npos);
  EXPECT_NE(r.out.find("A3: fails"), std::string::npos);
  EXPECT_EQ(r.out.find(": holds"), std::string::npos) << r.out;
  const CliResult json = Cli({"analyze", path, "--json"});
  EXPECT_EQ(nlohmann::json::parse(json.out)["audit"]["violations"].size(), 0u);
}

TEST(Cli, AnalyzeTwoIpms) {
  const std::string path = WriteText(
      "two.chain", "states: a b\na -> a : 1\nb -> b : 1\n");
  const CliResult r = Cli({"analyze", path});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("2 extremal ipms"), std::string::npos);
  EXPECT_NE(r.out.find("P2: fails"), std::string::npos);
}

TEST(Cli, MalformedFile) {
  const std::string path = WriteText("bad.chain", "states: a\na -> a : 0.5\n");
  const CliResult r = Cli({"analyze", path});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("parse error"), std::string::npos);
  EXPECT_EQ(Cli({"analyze"}).code, kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
}

TEST(Cli, TvCurveStandard) {
  const std::string path = TempPath("standard.chain");
  ASSERT_EQ(Cli({"fixtures", "standard", "--truncation", "60", "-o", path}).code, kExitOk);
  const CliResult r = Cli({"tv-curve", path, "-x", "3", "--n-max", "200"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line, last;
  std::getline(lines, line);
  EXPECT_EQ(line, "n,tv");
  std::size_t rows = 0;
  while (std::getline(lines, line)) last = line, ++rows;
  EXPECT_EQ(rows, 201u);
  EXPECT_NEAR(std::stod(last.substr(last.find(',') + 1)), 0.875, 1e-3);
}

TEST(Cli, CouplePeriNeverMeets) {
  const std::string path = TempPath("peri2.chain");
  ASSERT_EQ(Cli({"fixtures", "peri", "-o", path}).code, kExitOk);
  const CliResult r =
      Cli({"couple", path, "-x", "0", "-y", "1", "--horizon", "1000", "--traces", "200"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "meet_time,count\nnone,200\n");
}

TEST(Cli, VerifyAndFixtures) {
  const CliResult v = Cli({"verify", "--instances", "500", "--max-states", "8", "--seed", "7"});
  EXPECT_EQ(v.code, kExitOk) << v.out << v.err;
  const CliResult again = Cli({"--seed", "7", "verify", "--instances", "50", "--threads", "3"});
  EXPECT_EQ(again.code, kExitOk);
  const CliResult f = Cli({"fixtures", "standard", "--truncation", "60", "--evaluate"});
  EXPECT_EQ(f.code, kExitOk) << f.out;
  EXPECT_EQ(Cli({"fixtures", "standard", "--boundary", "wrap"}).code, kExitUsage);
}

}  // namespace
}  // namespace tvchain
