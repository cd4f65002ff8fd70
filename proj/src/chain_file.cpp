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

#include "tvchain/chain_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tvchain/error.hpp"

namespace tvchain {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> Words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double ParseNumber(const std::string& text, std::size_t line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError(line, "not a number: '" + text + "'");
  }
  return v;
}

bool StartsWith(const std::string& s, const char* prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

ChainSpecFile parse_chain_file(std::istream& in) {
  ChainSpecFile spec;
  bool have_states = false;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    const std::string text = Trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    if (StartsWith(text, "states:")) {
      if (have_states) throw ParseError(line, "duplicate states line");
      spec.states = Words(text.substr(7));
      if (spec.states.empty()) throw ParseError(line, "empty states line");
      have_states = true;
    } else if (StartsWith(text, "ipm:")) {
      if (spec.ipm) throw ParseError(line, "duplicate ipm line");
      const std::vector<std::string> w = Words(text.substr(4));
      if (w.empty() || w.size() % 2 != 0) {
        throw ParseError(line, "ipm needs label/mass pairs");
      }
      spec.ipm.emplace();
      for (std::size_t i = 0; i < w.size(); i += 2) {
        spec.ipm->emplace_back(w[i], ParseNumber(w[i + 1], line));
      }
    } else if (StartsWith(text, "meta:")) {
      spec.meta.push_back(Trim(text.substr(5)));
    } else {
      const auto arrow = text.find("->");
      const auto colon = text.rfind(':');
      if (arrow == std::string::npos || colon == std::string::npos || colon < arrow) {
        throw ParseError(line, "expected 'from -> to : probability'");
      }
      if (!have_states) throw ParseError(line, "transition before the states line");
      LabeledTransition t;
      t.from = Trim(text.substr(0, arrow));
      t.to = Trim(text.substr(arrow + 2, colon - arrow - 2));
      if (t.from.empty() || t.to.empty()) throw ParseError(line, "missing state label");
      t.probability = ParseNumber(Trim(text.substr(colon + 1)), line);
      spec.transitions.push_back(std::move(t));
    }
  }
  if (!have_states) throw ParseError(0, "missing 'states:' line");
  return spec;
}

ChainSpecFile read_chain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path);
  return parse_chain_file(in);
}

namespace {

std::string Exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_chain_file(std::ostream& out, const ChainSpecFile& spec) {
  for (const std::string& m : spec.meta) out << "meta: " << m << "\n";
  out << "states:";
  for (const std::string& s : spec.states) out << " " << s;
  out << "\n";
  for (const LabeledTransition& t : spec.transitions) {
    out << t.from << " -> " << t.to << " : " << Exact(t.probability) << "\n";
  }
  if (spec.ipm) {
    out << "ipm:";
    for (const auto& [label, mass] : *spec.ipm) out << " " << label << " " << Exact(mass);
    out << "\n";
  }
}

Kernel to_kernel(const ChainSpecFile& spec, double tolerance) {
  StateSpace space = [&] {
    try {
      return StateSpace(spec.states);
    } catch (const Error& e) {
      throw ParseError(0, e.what());
    }
  }();
  std::vector<Transition> raw;
  for (const LabeledTransition& t : spec.transitions) {
    const auto from = space.find(t.from);
    const auto to = space.find(t.to);
    if (!from || !to) {
      throw ParseError(0, "unknown state '" + (from ? t.to : t.from) + "'");
    }
    raw.push_back({*from, *to, t.probability});
  }
  try {
    return validate_kernel(space, raw, tolerance);
  } catch (const RowNotStochastic& e) {
    throw ParseError(0, "row of state '" + space.label(e.row()) + "' sums to " +
                            Exact(e.sum()));
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
}

std::optional<Distribution> to_ipm(const ChainSpecFile& spec,
                                   const Kernel& kernel) {
  if (!spec.ipm) return std::nullopt;
  std::vector<double> mass(kernel.size(), 0.0);
  for (const auto& [label, m] : *spec.ipm) {
    const auto id = kernel.space().find(label);
    if (!id) throw ParseError(0, "ipm names unknown state '" + label + "'");
    mass[*id] += m;
  }
  Distribution mu = [&] {
    try {
      return Distribution(std::move(mass), kernel.tolerance());
    } catch (const Error& e) {
      throw ParseError(0, std::string("ipm: ") + e.what());
    }
  }();
  require_invariant(kernel, mu);
  return mu;
}

ChainSpecFile from_kernel(const Kernel& kernel,
                          const std::optional<Distribution>& ipm,
                          std::vector<std::string> meta) {
  ChainSpecFile spec;
  spec.states = kernel.space().labels();
  for (StateId x = 0; x < kernel.size(); ++x) {
    for (const Entry& e : kernel.row(x)) {
      spec.transitions.push_back(
          {kernel.space().label(x), kernel.space().label(e.state), e.probability});
    }
  }
  if (ipm) {
    spec.ipm.emplace();
    for (StateId x = 0; x < ipm->size(); ++x) {
      if ((*ipm)[x] > 0.0) spec.ipm->emplace_back(kernel.space().label(x), (*ipm)[x]);
    }
  }
  spec.meta = std::move(meta);
  return spec;
}

}  // namespace tvchain
