// Python bindings. Documents cross the boundary as JSON text.

#include "flowcheck/errors.hpp"
#include "flowcheck/json_io.hpp"
#include "flowcheck/oracle.hpp"
#include "flowcheck/scenario.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace flowcheck;
using io::json;

namespace {

std::string solve_flow(const std::string &text) {
  json doc = json::parse(text);
  if (doc.contains("root")) {
    auto u = io::heap_universe(doc);
    auto h = io::heap_from_json(u, doc);
    return io::flow_to_json(u, compute_flow(derive_flowgraph(u, h))).dump();
  }
  auto f = io::graph_from_json(doc);
  return io::flow_to_json(f.universe, compute_flow(f.graph)).dump();
}

std::string check_scenario(const std::string &text, std::uint64_t seed,
                           std::size_t closureCap) {
  scenario::Options opts;
  opts.seed = seed;
  opts.caps.closure = closureCap;
  return scenario::run_scenario(json::parse(text), opts).to_json().dump();
}

oracle::TheoremParams params(std::optional<std::size_t> nodes,
                             std::optional<std::size_t> cases,
                             std::uint64_t seed) {
  oracle::TheoremParams p;
  p.nodes = nodes;
  p.cases = cases;
  p.seed = seed;
  return p;
}

std::string check_theorem(const std::string &name,
                          std::optional<std::size_t> nodes,
                          std::optional<std::size_t> cases,
                          std::uint64_t seed) {
  auto t = oracle::parse_theorem(name);
  if (!t)
    throw InputError("unknown theorem \"" + name + "\"");
  return oracle::check_theorem(*t, params(nodes, cases, seed)).to_json().dump();
}

std::string fuzz(std::size_t cases, std::size_t ops, std::uint64_t seed) {
  return oracle::fuzz_bst(params({}, cases, seed), ops).to_json().dump();
}

} // namespace

PYBIND11_MODULE(_flowcheck, m) {
  m.doc() = "Flow graph verification engine";

  static py::handle inputError =
      py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<Inconclusive>(m, "Inconclusive");
  // Malformed JSON and broken preconditions surface as input errors too.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p)
        std::rethrow_exception(p);
    } catch (const json::exception &e) {
      py::set_error(inputError, e.what());
    } catch (const ContractError &e) {
      py::set_error(inputError, e.what());
    }
  });

  m.def("solve_flow", &solve_flow, py::arg("document"),
        "Per-node flow of a graph or heap document, as JSON text.");
  m.def("check_scenario", &check_scenario, py::arg("document"),
        py::arg("seed") = 0, py::arg("closure_cap") = kDefaultClosureCap,
        "Scenario report as JSON text.");
  m.def("check_theorem", &check_theorem, py::arg("name"),
        py::arg("nodes") = py::none(), py::arg("cases") = py::none(),
        py::arg("seed") = 0, "Theorem report as JSON text.");
  m.def("fuzz", &fuzz, py::arg("cases") = 20, py::arg("ops") = 50,
        py::arg("seed") = 0, "Tree operation fuzz report as JSON text.");
}
