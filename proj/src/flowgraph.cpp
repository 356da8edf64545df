#include "flowcheck/flowgraph.hpp"
#include "flowcheck/errors.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace flowcheck {

void FlowGraph::set_edge(NodeId x, NodeId y, EdgeFn fn) {
  if (fn.kind == EdgeFn::Kind::Bot)
    edges.erase({x, y});
  else
    edges[{x, y}] = fn;
}

void set_inflow_entry(Inflow &in, NodeId src, NodeId dst, FlowValue v) {
  if (v.is_bot())
    in.erase({src, dst});
  else
    in[{src, dst}] = v;
}

void FlowGraph::set_inflow(NodeId src, NodeId dst, FlowValue v) {
  set_inflow_entry(inflow, src, dst, v);
}

EdgeFn FlowGraph::edge(NodeId x, NodeId y) const {
  auto it = edges.find({x, y});
  return it == edges.end() ? EdgeFn::const_bot() : it->second;
}

FlowValue FlowGraph::in(NodeId src, NodeId dst) const {
  auto it = inflow.find({src, dst});
  return it == inflow.end() ? FlowValue::bot() : it->second;
}

FlowGraph FlowGraph::with_inflow(Inflow in) const {
  FlowGraph g;
  g.nodes = nodes;
  g.edges = edges;
  for (auto &[e, v] : in)
    g.set_inflow(e.first, e.second, v);
  return g;
}

NodeSet FlowGraph::external_targets() const {
  NodeSet out;
  for (auto &[e, fn] : edges)
    if (!nodes.count(e.second))
      out.insert(e.second);
  return out;
}

void FlowGraph::validate() const {
  for (auto &[e, fn] : edges)
    if (!nodes.count(e.first))
      throw ContractError("edge source " + std::to_string(e.first) +
                          " is not a node of the graph");
  for (auto &[e, v] : inflow) {
    if (nodes.count(e.first))
      throw ContractError("inflow source " + std::to_string(e.first) +
                          " is an internal node");
    if (!nodes.count(e.second))
      throw ContractError("inflow target " + std::to_string(e.second) +
                          " is not a node of the graph");
  }
}

namespace {

struct DenseGraph {
  std::vector<NodeId> ids;
  std::vector<FlowValue> base;
  std::vector<std::vector<std::pair<int, EdgeFn>>> preds;
  std::vector<std::vector<int>> succs;

  int index(NodeId x) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), x);
    if (it == ids.end() || *it != x)
      return -1;
    return static_cast<int>(it - ids.begin());
  }

  DenseGraph(const FlowGraph &g, const Inflow &in) {
    ids.assign(g.nodes.begin(), g.nodes.end());
    base.assign(ids.size(), FlowValue::bot());
    preds.resize(ids.size());
    succs.resize(ids.size());
    for (auto &[e, v] : in) {
      int d = index(e.second);
      if (d >= 0 && index(e.first) < 0)
        base[d] = oplus(base[d], v);
    }
    for (auto &[e, fn] : g.edges) {
      int s = index(e.first), d = index(e.second);
      if (s < 0 || d < 0)
        continue;
      preds[d].push_back({s, fn});
      succs[s].push_back(d);
    }
  }
};

std::vector<FlowValue> solve(const DenseGraph &dg,
                             std::optional<std::size_t> maxIter) {
  std::size_t n = dg.ids.size();
  std::size_t limit = maxIter.value_or(2 * n + 2);
  std::vector<FlowValue> flow(n, FlowValue::bot());
  std::vector<char> pending(n, 1), next(n, 0);
  bool any = n > 0;
  std::size_t rounds = 0;
  while (any) {
    if (++rounds > limit)
      throw InternalError("flow iteration did not stabilize within " +
                          std::to_string(limit) + " rounds");
    any = false;
    for (std::size_t y = 0; y < n; ++y) {
      if (!pending[y])
        continue;
      pending[y] = 0;
      FlowValue v = dg.base[y];
      for (auto &[x, fn] : dg.preds[y])
        v = oplus(v, fn.apply(flow[x]));
      if (v == flow[y])
        continue;
      flow[y] = v;
      for (int z : dg.succs[y]) {
        next[z] = 1;
        any = true;
      }
    }
    std::swap(pending, next);
  }
  return flow;
}

FlowAssignment to_assignment(const DenseGraph &dg,
                             const std::vector<FlowValue> &flow) {
  FlowAssignment out;
  for (std::size_t i = 0; i < dg.ids.size(); ++i)
    out.emplace_hint(out.end(), dg.ids[i], flow[i]);
  return out;
}

FlowValue lookup(const FlowAssignment &flow, NodeId x) {
  auto it = flow.find(x);
  if (it == flow.end())
    throw ContractError("node " + std::to_string(x) + " has no flow value");
  return it->second;
}

} // namespace

FlowAssignment compute_flow(const FlowGraph &g,
                            std::optional<std::size_t> maxIter) {
  DenseGraph dg(g, g.inflow);
  return to_assignment(dg, solve(dg, maxIter));
}

FlowValue outflow(const FlowGraph &g, const FlowAssignment &flow, NodeId x,
                  NodeId y) {
  if (!g.nodes.count(x))
    throw ContractError("outflow: node " + std::to_string(x) +
                        " is not in the graph");
  return g.edge(x, y).apply(lookup(flow, x));
}

std::map<NodeId, FlowValue> outflow_map(const FlowGraph &g,
                                        const FlowAssignment &flow) {
  std::map<NodeId, FlowValue> out;
  for (auto &[e, fn] : g.edges) {
    if (g.nodes.count(e.second))
      continue;
    FlowValue &acc = out[e.second];
    acc = oplus(acc, fn.apply(lookup(flow, e.first)));
  }
  return out;
}

std::map<NodeId, FlowValue> transfer_all(const FlowGraph &g,
                                         const Inflow &in) {
  DenseGraph dg(g, in);
  auto flow = solve(dg, std::nullopt);
  std::map<NodeId, FlowValue> out;
  for (auto &[e, fn] : g.edges) {
    if (g.nodes.count(e.second))
      continue;
    FlowValue &acc = out[e.second];
    acc = oplus(acc, fn.apply(flow[dg.index(e.first)]));
  }
  return out;
}

FlowValue transfer(const FlowGraph &g, const Inflow &in, NodeId y) {
  auto all = transfer_all(g, in);
  auto it = all.find(y);
  return it == all.end() ? FlowValue::bot() : it->second;
}

FlowGraph restrict(const FlowGraph &g, const NodeSet &Y) {
  FlowGraph r;
  for (NodeId x : g.nodes)
    if (Y.count(x))
      r.nodes.insert(x);
  if (r.nodes.size() == g.nodes.size())
    return g;
  for (auto &[e, fn] : g.edges)
    if (r.nodes.count(e.first))
      r.edges.emplace(e, fn);
  for (auto &[e, v] : g.inflow)
    if (r.nodes.count(e.second))
      r.inflow.emplace(e, v);
  if (r.nodes.empty())
    return r;
  auto flow = compute_flow(g);
  for (auto &[e, fn] : g.edges)
    if (!r.nodes.count(e.first) && r.nodes.count(e.second))
      r.set_inflow(e.first, e.second, fn.apply(flow.at(e.first)));
  return r;
}

std::optional<FlowGraph> ghost_mult(const FlowGraph &s, const FlowGraph &t) {
  for (NodeId x : s.nodes)
    if (t.nodes.count(x))
      return std::nullopt;
  FlowGraph r;
  r.nodes = s.nodes;
  r.nodes.insert(t.nodes.begin(), t.nodes.end());
  r.edges = s.edges;
  r.edges.insert(t.edges.begin(), t.edges.end());
  for (auto &[e, v] : s.inflow)
    if (!t.nodes.count(e.first))
      r.inflow.emplace(e, v);
  for (auto &[e, v] : t.inflow)
    if (!s.nodes.count(e.first))
      r.inflow.emplace(e, v);
  return r;
}

std::string StarResult::message() const {
  switch (reason) {
  case Reason::None:
    return "defined";
  case Reason::NodeOverlap:
    return "node overlap at " + std::to_string(x);
  case Reason::InterfaceMismatch:
    return "interface mismatch at (" + std::to_string(x) + "," +
           std::to_string(y) + ")";
  case Reason::FlowNotFaithful:
    return "flow not faithful at " + std::to_string(x);
  }
  return "unknown";
}

StarResult star(const FlowGraph &s, const FlowGraph &t) {
  StarResult res;
  for (NodeId x : s.nodes)
    if (t.nodes.count(x)) {
      res.reason = StarResult::Reason::NodeOverlap;
      res.x = x;
      return res;
    }
  auto fs = compute_flow(s), ft = compute_flow(t);
  auto check = [&](const FlowGraph &a, const FlowAssignment &fa,
                   const FlowGraph &b) -> bool {
    // b's inflow from a must be exactly a's outflow into b.
    for (NodeId x : a.nodes)
      for (NodeId y : b.nodes)
        if (b.in(x, y) != a.edge(x, y).apply(fa.at(x))) {
          res.reason = StarResult::Reason::InterfaceMismatch;
          res.x = x;
          res.y = y;
          return false;
        }
    return true;
  };
  if (!check(s, fs, t) || !check(t, ft, s))
    return res;
  FlowGraph u = *ghost_mult(s, t);
  auto fu = compute_flow(u);
  for (auto &[x, v] : fu) {
    FlowValue w = s.nodes.count(x) ? fs.at(x) : ft.at(x);
    if (v != w) {
      res.reason = StarResult::Reason::FlowNotFaithful;
      res.x = x;
      return res;
    }
  }
  res.graph = std::move(u);
  return res;
}

std::pair<FlowGraph, FlowGraph> unique_decompose(const FlowGraph &u,
                                                 const NodeSet &X1,
                                                 const NodeSet &X2) {
  for (NodeId x : X1)
    if (X2.count(x) || !u.nodes.count(x))
      throw ContractError("unique_decompose: node sets do not partition the "
                          "graph");
  for (NodeId x : X2)
    if (!u.nodes.count(x))
      throw ContractError("unique_decompose: node sets do not partition the "
                          "graph");
  if (X1.size() + X2.size() != u.nodes.size())
    throw ContractError("unique_decompose: node sets do not partition the "
                        "graph");
  return {restrict(u, X1), restrict(u, X2)};
}

std::string to_dot(const AtomUniverse &u, const FlowGraph &g,
                   const FlowAssignment &flow) {
  std::ostringstream os;
  os << "digraph flow {\n";
  for (NodeId x : g.nodes) {
    os << "  n" << x << " [label=\"" << x;
    auto it = flow.find(x);
    if (it != flow.end())
      os << "\\n" << format_value(u, it->second);
    os << "\"];\n";
  }
  for (NodeId y : g.external_targets())
    os << "  n" << y << " [shape=box,label=\"" << y << "\"];\n";
  for (auto &[e, v] : g.inflow) {
    if (!g.external_targets().count(e.first))
      os << "  n" << e.first << " [shape=box,label=\"" << e.first << "\"];\n";
    os << "  n" << e.first << " -> n" << e.second
       << " [style=dashed,label=\"" << format_value(u, v) << "\"];\n";
  }
  for (auto &[e, fn] : g.edges) {
    std::string label = fn.kind == EdgeFn::Kind::Top
                            ? "top"
                            : u.format(fn.mask);
    os << "  n" << e.first << " -> n" << e.second << " [label=\"" << label
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace flowcheck
