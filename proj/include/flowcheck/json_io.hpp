#pragma once

#include "flowcheck/bst.hpp"
#include "flowcheck/estimator.hpp"
#include "flowcheck/registry.hpp"

#include <json.hpp>

#include <string>

namespace flowcheck::io {

using json = nlohmann::json;

/// Reads and parses a JSON file; throws InputError on failure.
json load_file(const std::string &path);

Key key_from_json(const json &j);
json key_to_json(Key k);

/// [[lo, hi, loOpen, hiOpen], ...], optionally wrapped in {"intervals": ...}.
AtomSet intervals_from_json(const AtomUniverse &u, const json &j);
json intervals_to_json(const AtomUniverse &u, AtomSet s);

FlowValue value_from_json(const AtomUniverse &u, const json &j);
json value_to_json(const AtomUniverse &u, FlowValue v);

EdgeFn edge_fn_from_json(const AtomUniverse &u, const json &j);
json edge_fn_to_json(const AtomUniverse &u, EdgeFn fn);

struct GraphFile {
  AtomUniverse universe;
  FlowGraph graph;
};
GraphFile graph_from_json(const json &j);
json graph_to_json(const AtomUniverse &u, const FlowGraph &g);

Estimator estimator_from_json(const AtomUniverse &u, const json &j);
json estimator_to_json(const AtomUniverse &u, const Estimator &e);

/// Universe of a heap document: its "endpoints" if given, otherwise every
/// finite key.
AtomUniverse heap_universe(const json &j);
/// Without an "inflow" member the root receives (-inf, inf].
HeapState heap_from_json(const AtomUniverse &u, const json &j);
json heap_to_json(const AtomUniverse &u, const HeapState &h);

registry::RValue rvalue_from_json(const json &j);
json rvalue_to_json(registry::RValue v);
registry::State registry_from_json(const json &j);
json registry_to_json(const registry::State &s);

/// Per-node flow as {"id": ..., "flow": FlowValue}.
json flow_to_json(const AtomUniverse &u, const FlowAssignment &flow);

} // namespace flowcheck::io
