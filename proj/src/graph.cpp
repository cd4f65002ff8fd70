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

#include "tvchain/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace tvchain {

Components strongly_connected_components(const Kernel& kernel) {
  const std::size_t n = kernel.size();
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<StateId>> succ(n);
  for (StateId x = 0; x < n; ++x) succ[x] = kernel.successors(x);

  // Iterative Tarjan.
  std::vector<std::size_t> index(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<StateId> stack;
  std::vector<StateSet> found;
  std::size_t counter = 0;
  struct Frame {
    StateId v;
    std::size_t next;
  };
  for (StateId root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < succ[f.v].size()) {
        const StateId w = succ[f.v][f.next++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const StateId v = f.v;
      frames.pop_back();
      if (!frames.empty()) {
        low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
      if (low[v] == index[v]) {
        StateSet component;
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        std::sort(component.begin(), component.end());
        found.push_back(std::move(component));
      }
    }
  }
  std::sort(found.begin(), found.end(),
            [](const StateSet& a, const StateSet& b) {
              return a.front() < b.front();
            });
  Components out;
  out.component_of.assign(n, 0);
  for (std::size_t c = 0; c < found.size(); ++c) {
    for (StateId x : found[c]) out.component_of[x] = c;
  }
  out.members = std::move(found);
  return out;
}

std::vector<bool> reachable_from(const Kernel& kernel,
                                 const StateSet& sources) {
  std::vector<bool> seen(kernel.size(), false);
  std::deque<StateId> queue;
  for (StateId s : sources) {
    if (!seen[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const StateId x = queue.front();
    queue.pop_front();
    for (StateId y : kernel.successors(x)) {
      if (!seen[y]) {
        seen[y] = true;
        queue.push_back(y);
      }
    }
  }
  return seen;
}

std::vector<bool> can_reach(const Kernel& kernel, const StateSet& targets) {
  const std::size_t n = kernel.size();
  std::vector<std::vector<StateId>> pred(n);
  for (StateId x = 0; x < n; ++x) {
    for (StateId y : kernel.successors(x)) pred[y].push_back(x);
  }
  std::vector<bool> seen(n, false);
  std::deque<StateId> queue;
  for (StateId t : targets) {
    if (!seen[t]) {
      seen[t] = true;
      queue.push_back(t);
    }
  }
  while (!queue.empty()) {
    const StateId y = queue.front();
    queue.pop_front();
    for (StateId x : pred[y]) {
      if (!seen[x]) {
        seen[x] = true;
        queue.push_back(x);
      }
    }
  }
  return seen;
}

}  // namespace tvchain
