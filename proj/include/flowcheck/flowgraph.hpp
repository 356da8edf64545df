#pragma once

#include "flowcheck/keyspace.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

namespace flowcheck {

using NodeId = std::int64_t;
using NodeSet = std::set<NodeId>;
using Edge = std::pair<NodeId, NodeId>;

/// Edge functions of the closed family {ConstBot, Filter, ConstTop}.
struct EdgeFn {
  enum class Kind : std::uint8_t { Bot, Filter, Top };
  Kind kind = Kind::Bot;
  AtomSet mask = 0;

  static EdgeFn const_bot() { return {}; }
  static EdgeFn const_top() { return {Kind::Top, 0}; }
  static EdgeFn filter(AtomSet m) { return {Kind::Filter, m}; }

  FlowValue apply(FlowValue m) const {
    switch (kind) {
    case Kind::Bot:
      return FlowValue::bot();
    case Kind::Top:
      return FlowValue::top();
    default:
      return meet(m, mask);
    }
  }

  bool operator==(const EdgeFn &) const = default;
  auto operator<=>(const EdgeFn &) const = default;
};

/// Inflow keyed by (source, target). Bot entries are never stored.
using Inflow = std::map<Edge, FlowValue>;
using FlowAssignment = std::map<NodeId, FlowValue>;

/// A flow graph (X, E, in). Edges and inflow are kept normalized so that
/// structural equality is graph equality.
struct FlowGraph {
  NodeSet nodes;
  std::map<Edge, EdgeFn> edges;
  Inflow inflow;

  void add_node(NodeId x) { nodes.insert(x); }
  void set_edge(NodeId x, NodeId y, EdgeFn fn);
  void set_inflow(NodeId src, NodeId dst, FlowValue v);
  EdgeFn edge(NodeId x, NodeId y) const;
  FlowValue in(NodeId src, NodeId dst) const;
  FlowGraph with_inflow(Inflow in) const;

  /// Targets of edges leaving the graph.
  NodeSet external_targets() const;
  /// Throws ContractError when edge sources or inflow endpoints are misplaced.
  void validate() const;

  bool operator==(const FlowGraph &) const = default;
  auto operator<=>(const FlowGraph &) const = default;
};

void set_inflow_entry(Inflow &in, NodeId src, NodeId dst, FlowValue v);

/// Least solution of the flow equation by round-based worklist iteration.
/// Throws InternalError if more than \p maxIter rounds are needed
/// (default 2|X|+2).
FlowAssignment compute_flow(const FlowGraph &g,
                            std::optional<std::size_t> maxIter = {});

FlowValue outflow(const FlowGraph &g, const FlowAssignment &flow, NodeId x,
                  NodeId y);
/// Sum of outflow per external target.
std::map<NodeId, FlowValue> outflow_map(const FlowGraph &g,
                                        const FlowAssignment &flow);
/// Outflow of \p g under a replaced inflow, summed per external target.
std::map<NodeId, FlowValue> transfer_all(const FlowGraph &g, const Inflow &in);
FlowValue transfer(const FlowGraph &g, const Inflow &in, NodeId y);

/// h|_Y: inflow from dropped internal nodes becomes their outflow.
FlowGraph restrict(const FlowGraph &g, const NodeSet &Y);

/// Disjoint union dropping inflow provided by the other operand.
std::optional<FlowGraph> ghost_mult(const FlowGraph &s, const FlowGraph &t);

struct StarResult {
  enum class Reason { None, NodeOverlap, InterfaceMismatch, FlowNotFaithful };
  std::optional<FlowGraph> graph;
  Reason reason = Reason::None;
  NodeId x = 0, y = 0;

  bool defined() const { return graph.has_value(); }
  std::string message() const;
};

StarResult star(const FlowGraph &s, const FlowGraph &t);

/// (restrict(u,X1), restrict(u,X2)); X1 and X2 must partition u.nodes.
std::pair<FlowGraph, FlowGraph> unique_decompose(const FlowGraph &u,
                                                 const NodeSet &X1,
                                                 const NodeSet &X2);

std::string to_dot(const AtomUniverse &u, const FlowGraph &g,
                   const FlowAssignment &flow);

} // namespace flowcheck
