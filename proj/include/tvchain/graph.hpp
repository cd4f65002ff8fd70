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

#ifndef TVCHAIN_GRAPH_HPP_
#define TVCHAIN_GRAPH_HPP_

#include <vector>

#include "tvchain/chain.hpp"

namespace tvchain {

// Strongly connected components of the positive-probability digraph,
// ordered by their smallest member.
struct Components {
  std::vector<StateSet> members;
  std::vector<std::size_t> component_of;
};

Components strongly_connected_components(const Kernel& kernel);

// reachable[y] iff y is reachable from some source in zero or more steps.
std::vector<bool> reachable_from(const Kernel& kernel, const StateSet& sources);

// can_reach[x] iff some target is reachable from x in zero or more steps.
std::vector<bool> can_reach(const Kernel& kernel, const StateSet& targets);

}  // namespace tvchain

#endif  // TVCHAIN_GRAPH_HPP_
