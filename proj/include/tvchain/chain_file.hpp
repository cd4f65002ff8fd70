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

// Line-oriented chain files:
//
//   # comment
//   states: a b c
//   a -> b : 0.5
//   ipm: a 0.5 b 0.5
//   meta: free text

#ifndef TVCHAIN_CHAIN_FILE_HPP_
#define TVCHAIN_CHAIN_FILE_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvchain/chain.hpp"

namespace tvchain {

struct LabeledTransition {
  std::string from;
  std::string to;
  double probability = 0.0;
};

struct ChainSpecFile {
  std::vector<std::string> states;
  std::vector<LabeledTransition> transitions;
  std::optional<std::vector<std::pair<std::string, double>>> ipm;
  std::vector<std::string> meta;
};

// Throws ParseError with the offending line number.
ChainSpecFile parse_chain_file(std::istream& in);
ChainSpecFile read_chain_file(const std::string& path);

// Probabilities use 17 significant digits, so parsing restores them exactly.
void write_chain_file(std::ostream& out, const ChainSpecFile& spec);

// Throws ParseError naming the state whose row is not stochastic.
Kernel to_kernel(const ChainSpecFile& spec,
                 double tolerance = kDefaultTolerance);
// Throws ParseError for unknown labels, kNotInvariant if not invariant.
std::optional<Distribution> to_ipm(const ChainSpecFile& spec,
                                   const Kernel& kernel);

ChainSpecFile from_kernel(const Kernel& kernel,
                          const std::optional<Distribution>& ipm,
                          std::vector<std::string> meta = {});

}  // namespace tvchain

#endif  // TVCHAIN_CHAIN_FILE_HPP_
