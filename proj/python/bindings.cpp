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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

#include "tvchain/chain.hpp"
#include "tvchain/chain_file.hpp"
#include "tvchain/coupling.hpp"
#include "tvchain/equivalence.hpp"
#include "tvchain/error.hpp"
#include "tvchain/harness.hpp"
#include "tvchain/structure.hpp"
#include "tvchain/verdict.hpp"

namespace py = pybind11;
using namespace tvchain;

namespace {

py::object ToPython(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

std::vector<double> Mass(const Distribution& d) {
  return {d.mass().begin(), d.mass().end()};
}

Kernel MakeKernel(const std::vector<std::string>& states,
                  const std::vector<std::tuple<std::string, std::string, double>>& transitions,
                  double tolerance) {
  ChainSpecFile spec;
  spec.states = states;
  for (const auto& [from, to, p] : transitions) spec.transitions.push_back({from, to, p});
  return to_kernel(spec, tolerance);
}

Distribution Measure(const Kernel& k, const std::vector<double>& mass) {
  return Distribution(mass, k.tolerance());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Total-variation convergence conditions for finite Markov chains";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(),
                      (std::string(ToString(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<Kernel>(m, "Kernel")
      .def(py::init(&MakeKernel), py::arg("states"), py::arg("transitions"),
           py::arg("tolerance") = kDefaultTolerance)
      .def_static("from_file", [](const std::string& path) {
        return to_kernel(read_chain_file(path));
      })
      .def_property_readonly("size", &Kernel::size)
      .def_property_readonly("labels", [](const Kernel& k) { return k.space().labels(); })
      .def("probability", &Kernel::probability)
      .def("n_step", [](const Kernel& k, StateId x, std::size_t n) { return Mass(n_step(k, x, n)); })
      .def("invariant_measures", [](const Kernel& k) {
        std::vector<std::vector<double>> out;
        for (const Distribution& d : invariant_measures(k)) out.push_back(Mass(d));
        return out;
      })
      .def("period_lcm", [](const Kernel& k) { return period_lcm(decompose(k)); })
      .def("tv_curve",
           [](const Kernel& k, StateId x, const std::vector<double>& mu, std::size_t n_max) {
             const TVCurve c = tv_curve(k, x, Measure(k, mu), n_max);
             return py::make_tuple(c.values, c.limit);
           })
      .def("cross_check", [](const Kernel& k, const std::vector<double>& mu) {
        return ToPython(ToJson(cross_check(k, Measure(k, mu))));
      })
      .def("__eq__", [](const Kernel& a, const Kernel& b) { return a == b; })
      .def("__repr__", [](const Kernel& k) {
        return "<tvchain.Kernel with " + std::to_string(k.size()) + " states>";
      });

  m.def("tv_distance", [](const std::vector<double>& a, const std::vector<double>& b) {
    return tv_distance(Distribution(a), Distribution(b));
  });

  m.def("maximal_coupling_mass",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          return maximal_coupling(Distribution(a), Distribution(b)).diagonal_mass();
        },
        "Diagonal mass of the maximal coupling.");

  m.def("random_chain", [](std::size_t max_states, std::uint64_t seed) {
    Rng rng(seed);
    GeneratedChain g = random_chain(random_params(rng, max_states));
    return py::make_tuple(g.kernel, Mass(g.ipm));
  }, py::arg("max_states"), py::arg("seed"));

  m.def("fixture",
        [](const std::string& name, std::size_t truncation, const std::string& boundary) {
          if (boundary != "reflect" && boundary != "absorb") {
            throw Error(ErrorCode::kInvalidArgument, "boundary must be reflect or absorb");
          }
          const Fixture f = fixture(name, truncation,
                                    boundary == "reflect" ? Boundary::kReflect : Boundary::kAbsorb);
          py::list results;
          for (const ExpectationResult& r : evaluate_expectations(f)) {
            py::dict d;
            d["id"] = r.id;
            d["pass"] = r.pass;
            d["detail"] = r.detail;
            results.append(d);
          }
          return py::make_tuple(f.kernel, Mass(f.ipm), results);
        },
        py::arg("name"), py::arg("truncation") = 60, py::arg("boundary") = "reflect");
}
