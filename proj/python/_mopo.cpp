// Copyright 2026 The mopo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Python bindings. Rationals cross the boundary as fractions.Fraction and
// infinities as float('inf'); models, strategies and certificates as JSON
// text, which the Python package parses.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mopo/belief.hpp"
#include "mopo/errors.hpp"
#include "mopo/evaluate.hpp"
#include "mopo/geometry.hpp"
#include "mopo/io.hpp"
#include "mopo/montecarlo.hpp"
#include "mopo/synthesis.hpp"

namespace py = pybind11;
using namespace mopo;

namespace {

py::object fraction(const Rational& q) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(to_string(q));
}

py::object to_py(const ExtReal& x) {
  if (x.is_pos_inf()) return py::float_(HUGE_VAL);
  if (x.is_neg_inf()) return py::float_(-HUGE_VAL);
  return fraction(x.value());
}

py::tuple to_py(const ExtRealVector& v) {
  py::tuple t(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) t[i] = to_py(v[i]);
  return t;
}

// Anything whose str() reads as a rational, "inf" or "-inf".
ExtReal ext_from_py(const py::handle& h) { return ExtReal::parse(py::str(h).cast<std::string>()); }

Rational rational_from_py(const py::handle& h) {
  return parse_rational(py::str(h).cast<std::string>());
}

ExtRealVector ext_vector(const py::iterable& xs) {
  ExtRealVector out;
  for (const auto& x : xs) out.push_back(ext_from_py(x));
  return out;
}

std::vector<ExtRealVector> ext_vectors(const py::iterable& rows) {
  std::vector<ExtRealVector> out;
  for (const auto& r : rows) out.push_back(ext_vector(py::reinterpret_borrow<py::iterable>(r)));
  return out;
}

PointList points(const py::iterable& rows) {
  PointList out;
  for (const auto& r : rows) {
    RationalVector p;
    for (const auto& x : py::reinterpret_borrow<py::iterable>(r)) p.push_back(rational_from_py(x));
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<bool> target_set(const Pomdp& m, const std::vector<std::string>& names) {
  std::vector<bool> t(m.num_states(), false);
  for (const auto& n : names) t[m.state_id(n)] = true;
  return t;
}

// Strategies given as JSON text are read against the original model and
// lifted when the problem was unrolled.
FiniteMemoryStrategy strategy_for(const Problem& p, const std::string& text) {
  auto s = parse_strategy(p.original, text);
  return p.unrolling ? lift_strategy(*p.unrolling, s) : s;
}

// Start state in the original model.
StateId original_state(const Problem& p, const std::optional<std::string>& state) {
  if (state) return p.original.state_id(*state);
  if (!p.initial) return 0;
  return p.unrolling ? p.unrolling->origin[*p.initial] : *p.initial;
}

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  py::list bias;
  for (const auto& b : e.bias) bias.append(b ? fraction(*b) : py::object(py::none()));
  d["mean"] = e.mean;
  d["std_error"] = e.std_error;
  d["used"] = e.used;
  d["bias"] = bias;
  d["censored"] = e.censored;
  d["n"] = e.n;
  d["seed"] = e.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mopo, m) {
  m.doc() = "Exact multi-objective analysis of finite POMDPs";

  // Exception types live as long as the interpreter; keep plain pointers so
  // nothing is released after finalisation.
  static std::map<std::string, PyObject*> by_kind;
  auto declare = [&m](const char* name, PyObject* base) {
    PyObject* cls = py::exception<Error>(m, name, base).release().ptr();
    by_kind[name] = cls;
    return cls;
  };
  PyObject* error = declare("Error", PyExc_RuntimeError);
  PyObject* input_error = declare("InputError", error);
  PyObject* domain_error = declare("DomainError", error);
  for (const char* k : {"ParseError", "SchemaError", "UnknownState", "DisabledAction",
                        "MalformedLasso", "MalformedHistory", "UnknownScc", "DimensionMismatch",
                        "UnsupportedKind", "PoolTooLarge", "EmptySupport"})
    declare(k, input_error);
  for (const char* k : {"UndefinedExpectation", "NotInHull", "NotDominated", "NotAchievable",
                        "InfeasibleApproximation", "PreconditionViolated"})
    declare(k, domain_error);
  declare("SingularSystem", error);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // Direct InputError/DomainError throws report the base kind.
      const std::string kind = e.kind();
      PyObject* cls = by_kind.count(kind) && kind != "Error"  ? by_kind.at(kind)
                      : dynamic_cast<const InputError*>(&e)  ? by_kind.at("InputError")
                      : dynamic_cast<const DomainError*>(&e) ? by_kind.at("DomainError")
                                                             : by_kind.at("Error");
      PyErr_SetString(cls, e.what());
    }
  });

  py::class_<Problem>(m, "Problem")
      .def_static("from_json", [](const std::string& text) { return load_problem(text); })
      .def_static("load", [](const std::string& path) { return load_problem(read_text_file(path)); })
      .def_property_readonly("states", [](const Problem& p) {
        std::vector<std::string> out;
        for (StateId s = 0; s < p.original.num_states(); ++s) out.push_back(p.original.state_name(s));
        return out;
      })
      .def_property_readonly("labels", [](const Problem& p) {
        std::vector<std::string> out;
        for (const auto& f : p.payoffs) out.push_back(f.label);
        return out;
      })
      .def_property_readonly("dimension", [](const Problem& p) { return p.payoffs.size(); })
      .def("to_json", [](const Problem& p) { return serialize(p.original); },
           "The model part, as JSON text.")
      .def(
          "evaluate",
          [](const Problem& p, const std::string& strategy, std::optional<std::string> state) {
            return to_py(expected_payoff(p.model, strategy_for(p, strategy), p.initial_state(state), p.payoffs));
          },
          py::arg("strategy"), py::arg("state") = py::none(),
          "Exact expected payoff vector of a strategy given as JSON text.")
      .def(
          "evaluate_mixture",
          [](const Problem& p, const std::string& mixture, std::optional<std::string> state) {
            if (p.unrolling) throw SchemaError("mixtures on unrolled problems are not supported");
            return to_py(mixed_expected_payoff(p.model, parse_mixture(p.model, mixture),
                                               p.initial_state(state), p.payoffs));
          },
          py::arg("mixture"), py::arg("state") = py::none())
      .def(
          "pool",
          [](const Problem& p, const std::string& skeleton, std::optional<std::string> state,
             std::size_t cap, std::size_t jobs) {
            return pure_payoff_set(p.model, p.initial_state(state), p.payoffs,
                                   load_skeleton(p.model, skeleton), cap, jobs);
          },
          py::arg("skeleton") = "memoryless", py::arg("state") = py::none(),
          py::arg("cap") = 100000, py::arg("jobs") = 1,
          "Expected payoffs of every pure strategy over a memory skeleton.")
      .def(
          "estimate",
          [](const Problem& p, const std::string& strategy, std::size_t samples, std::size_t horizon,
             std::uint64_t seed, std::size_t jobs, std::optional<std::string> state) {
            return estimate_dict(estimate_expectation(p.model, strategy_for(p, strategy),
                                                      p.initial_state(state), p.payoffs,
                                                      SampleConfig{samples, horizon, seed, jobs}));
          },
          py::arg("strategy"), py::arg("samples") = 10000, py::arg("horizon") = 64,
          py::arg("seed") = 0, py::arg("jobs") = 1, py::arg("state") = py::none())
      .def(
          "classify_shortest_path",
          [](const Problem& p, const std::vector<std::string>& target, std::optional<std::string> state) {
            return std::string(shortest_path_class_name(
                classify_shortest_path(p.original, original_state(p, state), target_set(p.original, target))
                    .verdict));
          },
          py::arg("target"), py::arg("state") = py::none())
      .def(
          "belief_graph_dot",
          [](const Problem& p, std::optional<std::string> state) {
            return to_dot(p.original, belief_graph(p.original, original_state(p, state)));
          },
          py::arg("state") = py::none());

  py::class_<Pool>(m, "Pool")
      .def("__len__", [](const Pool& p) { return p.entries.size(); })
      .def_property_readonly("vectors", [](const Pool& p) {
        py::list out;
        for (const auto& e : p.entries) out.append(to_py(e.value));
        return out;
      })
      .def_property_readonly("skeleton", [](const Pool& p) { return p.info.skeleton; })
      .def("strategy_json", [](const Pool& p, const Problem& pr, std::size_t i) {
        return strategy_to_json(pr.model, p.entries.at(i).strategy);
      })
      .def("describe", [](const Pool& p, const Problem& pr, std::size_t i) {
        return describe_strategy(pr.model, p.entries.at(i).strategy);
      });

  m.def(
      "achieve",
      [](const Problem& pr, const Pool& pool, const py::iterable& target, const std::string& mode) {
        if (mode != "equals" && mode != "dominates") throw SchemaError("mode is equals or dominates");
        return certificate_json(pr.model, achieve(pool, ext_vector(target),
                                                  mode == "equals" ? AchieveMode::kEquals
                                                                   : AchieveMode::kDominates));
      },
      py::arg("problem"), py::arg("pool"), py::arg("target"), py::arg("mode") = "equals");
  m.def(
      "approximate",
      [](const Problem& pr, const Pool& pool, const py::iterable& target, const py::object& eps,
         const py::object& big_m) {
        return certificate_json(pr.model, approximate(pool, ext_vector(target), rational_from_py(eps),
                                                      rational_from_py(big_m)));
      },
      py::arg("problem"), py::arg("pool"), py::arg("target"), py::arg("eps"), py::arg("big_m"));
  m.def("lex_optimize", [](const py::iterable& vectors) {
    auto r = lex_optimize(ext_vectors(vectors));
    return py::make_tuple(r.winner, to_py(r.vector));
  });
  m.def("pareto_frontier", [](const py::iterable& vectors) { return pareto_frontier(ext_vectors(vectors)); });
  m.def("extreme_points", [](const py::iterable& pts) { return extreme_points(points(pts)); });
  m.def("convex_hull_json", [](const py::iterable& pts) { return hull_json(convex_hull(points(pts))); });
  m.def("in_hull", [](const py::iterable& q, const py::iterable& pts) {
    auto qs = points(py::make_tuple(q));
    return in_hull(qs[0], points(pts));
  });
  m.def("mix_vectors", [](const py::iterable& weights, const py::iterable& vectors) {
    std::vector<Rational> w;
    for (const auto& x : weights) w.push_back(rational_from_py(x));
    return to_py(mix_vectors(w, ext_vectors(vectors)));
  });
}
