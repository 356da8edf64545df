#include "flowcheck/bst.hpp"
#include "flowcheck/errors.hpp"

#include <algorithm>
#include <random>

namespace flowcheck {

NodeSet HeapState::ids() const {
  NodeSet out;
  for (auto &[id, f] : nodes)
    out.insert(out.end(), id);
  return out;
}

const NodeFields &HeapState::at(NodeId x) const {
  auto it = nodes.find(x);
  if (it == nodes.end())
    throw ContractError("node " + std::to_string(x) + " is not in the heap");
  return it->second;
}

HeapState make_heap(const AtomUniverse &u, NodeId root,
                    std::map<NodeId, NodeFields> nodes) {
  HeapState h;
  h.root = root;
  h.nodes = std::move(nodes);
  if (!h.nodes.count(root))
    throw InputError("root " + std::to_string(root) + " is not a node");
  set_inflow_entry(h.inflow, EnvNode, root, FlowValue::set(u.full()));
  return h;
}

FlowGraph derive_flowgraph(const AtomUniverse &u, const HeapState &h) {
  FlowGraph g;
  for (auto &[x, f] : h.nodes) {
    g.nodes.insert(g.nodes.end(), x);
    if (is_finite(f.key) && !u.on_grid(f.key))
      throw InputError("key " + key_to_string(f.key) + " of node " +
                       std::to_string(x) + " is off the key grid");
    if (f.left != Null && f.left == f.right) {
      g.set_edge(x, f.left, EdgeFn::const_top());
      continue;
    }
    if (f.left != Null && f.dup != Dup::Left)
      g.set_edge(x, f.left, EdgeFn::filter(u.below(f.key)));
    if (f.right != Null && f.dup != Dup::Right)
      g.set_edge(x, f.right, EdgeFn::filter(u.above(f.key)));
  }
  g.inflow = h.inflow;
  return g;
}

HeapState heap_restrict(const AtomUniverse &u, const HeapState &h,
                        const NodeSet &Y) {
  HeapState r;
  r.root = h.root;
  for (auto &[x, f] : h.nodes)
    if (Y.count(x))
      r.nodes.emplace_hint(r.nodes.end(), x, f);
  r.inflow = restrict(derive_flowgraph(u, h), Y).inflow;
  return r;
}

HeapState heap_with_inflow(const HeapState &h, Inflow in) {
  HeapState r = h;
  r.inflow.clear();
  for (auto &[e, v] : in)
    set_inflow_entry(r.inflow, e.first, e.second, v);
  return r;
}

namespace {

bool is_unit(const HeapState &h) { return h.nodes.empty() && h.inflow.empty(); }

} // namespace

std::optional<HeapState> heap_ghost_mult(const HeapState &a,
                                         const HeapState &b) {
  if (is_unit(a))
    return b;
  if (is_unit(b))
    return a;
  if (a.root != b.root)
    return std::nullopt;
  for (auto &[x, f] : a.nodes)
    if (b.nodes.count(x))
      return std::nullopt;
  HeapState r;
  r.root = a.root;
  r.nodes = a.nodes;
  r.nodes.insert(b.nodes.begin(), b.nodes.end());
  for (auto &[e, v] : a.inflow)
    if (!b.nodes.count(e.first))
      r.inflow.emplace(e, v);
  for (auto &[e, v] : b.inflow)
    if (!a.nodes.count(e.first))
      r.inflow.emplace(e, v);
  return r;
}

HeapStarResult heap_star(const AtomUniverse &u, const HeapState &a,
                         const HeapState &b) {
  HeapStarResult res;
  if (is_unit(a) || is_unit(b)) {
    res.heap = heap_ghost_mult(a, b);
    return res;
  }
  if (a.root != b.root) {
    res.reason = "root mismatch";
    return res;
  }
  auto s = star(derive_flowgraph(u, a), derive_flowgraph(u, b));
  if (!s.defined()) {
    res.reason = s.message();
    return res;
  }
  res.heap = heap_ghost_mult(a, b);
  return res;
}

namespace {

AtomSet bits_of(const AtomUniverse &u, FlowValue v) {
  if (v.is_top())
    return u.full();
  return v.is_set() ? v.bits : 0;
}

} // namespace

NodeQuantities derived_quantities(const AtomUniverse &u, const HeapState &h,
                                  const FlowGraph &g,
                                  const FlowAssignment &flow, NodeId x) {
  const NodeFields &f = h.at(x);
  NodeQuantities q;
  q.IS = flow.at(x);
  q.OSl = f.left == Null ? FlowValue::set(0) : g.edge(x, f.left).apply(q.IS);
  q.OSr =
      f.right == Null ? FlowValue::set(0) : g.edge(x, f.right).apply(q.IS);
  if (q.IS.is_set())
    q.KS = q.IS.bits & ~(bits_of(u, q.OSl) | bits_of(u, q.OSr));
  if (!f.del && x != h.root)
    q.C = f.key;
  return q;
}

InvReport check_inv(const AtomUniverse &u, const HeapState &h,
                    std::optional<NodeSet> Y, std::optional<NodeSet> fullX) {
  NodeSet all = h.ids();
  const NodeSet &region = Y ? *Y : all;
  const NodeSet &X = fullX ? *fullX : all;
  InvReport rep;
  if (region.empty())
    return rep;
  FlowGraph g = derive_flowgraph(u, h);
  auto flow = compute_flow(g);
  auto violate = [&](NodeId x, const std::string &what) {
    rep.ok = false;
    rep.violations.push_back("node " + std::to_string(x) + ": " + what);
  };
  for (NodeId x : region) {
    const NodeFields &f = h.at(x);
    NodeQuantities q = derived_quantities(u, h, g, flow, x);
    rep.quantities[x] = q;
    if (f.left != Null && !X.count(f.left))
      violate(x, "left child outside the node set");
    if (f.right != Null && !X.count(f.right))
      violate(x, "right child outside the node set");
    if (f.dup != Dup::No)
      violate(x, "duplicate flag set");
    if (q.IS.is_top())
      violate(x, "inset is top");
    if (q.C && !u.contains(q.KS, *q.C))
      violate(x, "key " + key_to_string(*q.C) + " not in keyset " +
                     u.format(q.KS));
    if (q.IS.is_set()) {
      bool keyIn = f.key == NegInf ? x == h.root : u.contains(q.IS.bits, f.key);
      if (!keyIn)
        violate(x, "key " + key_to_string(f.key) + " not in inset " +
                       u.format(q.IS.bits));
    }
    if (x == h.root) {
      if (!q.IS.is_set() || q.IS.bits != u.full())
        violate(x, "root inset is not (-inf,inf]");
      if (f.del)
        violate(x, "root is marked");
      if (is_finite(f.key))
        violate(x, "root key is not a sentinel");
    }
    if (q.C)
      rep.contents.insert(*q.C);
  }
  return rep;
}

std::set<Key> heap_contents(const AtomUniverse &u, const HeapState &h) {
  std::set<Key> out;
  for (auto &[x, f] : h.nodes)
    if (!f.del && x != h.root)
      out.insert(f.key);
  (void)u;
  return out;
}

DecompReport decomp(const AtomUniverse &u, const HeapState &h,
                    const NodeSet &Y1, const NodeSet &Y2) {
  NodeSet all = h.ids();
  for (NodeId x : Y1)
    if (Y2.count(x) || !all.count(x))
      throw ContractError("decomp: regions do not partition the heap");
  if (Y1.size() + Y2.size() != all.size())
    throw ContractError("decomp: regions do not partition the heap");
  DecompReport rep;
  FlowGraph g = derive_flowgraph(u, h);
  auto flow = compute_flow(g);
  std::map<NodeId, NodeQuantities> q;
  for (NodeId x : all)
    q[x] = derived_quantities(u, h, g, flow, x);
  for (NodeId x : Y1)
    if (q[x].C)
      rep.contents1.insert(*q[x].C);
  for (NodeId x : Y2)
    if (q[x].C)
      rep.contents2.insert(*q[x].C);
  for (NodeId x : Y1)
    for (NodeId y : Y2)
      if (q[x].KS & q[y].KS)
        rep.keysetsDisjoint = false;
  for (auto &[e, fn] : g.edges)
    if (fn.kind == EdgeFn::Kind::Top)
      rep.premiseFailures.push_back("edge (" + std::to_string(e.first) + "," +
                                    std::to_string(e.second) +
                                    ") is not decreasing");
  for (NodeId x : all) {
    const NodeFields &f = h.at(x);
    if (f.left == Null || f.right == Null)
      continue;
    if (bits_of(u, q[x].OSl) & bits_of(u, q[x].OSr))
      rep.premiseFailures.push_back("outsets of node " + std::to_string(x) +
                                    " overlap");
  }
  for (auto &[e, v] : h.inflow)
    if (e.second != h.root)
      rep.premiseFailures.push_back("node " + std::to_string(e.second) +
                                    " has external inflow");
  return rep;
}

NodeSet AtomicStep::footprint() const {
  NodeSet out;
  if (alloc)
    out.insert(alloc->first);
  for (auto &w : writes)
    out.insert(w.node);
  return out;
}

std::optional<HeapState> apply_step(const HeapState &h, const AtomicStep &s) {
  HeapState r = h;
  if (s.alloc) {
    if (r.nodes.count(s.alloc->first))
      throw ContractError("allocation of existing node " +
                          std::to_string(s.alloc->first));
    r.nodes.emplace(s.alloc->first, s.alloc->second);
  }
  for (const FieldWrite &w : s.writes) {
    auto it = r.nodes.find(w.node);
    if (it == r.nodes.end())
      return std::nullopt;
    NodeFields &f = it->second;
    switch (w.field) {
    case FieldWrite::Field::Left:
      f.left = w.value;
      break;
    case FieldWrite::Field::Right:
      f.right = w.value;
      break;
    case FieldWrite::Field::Key:
      f.key = w.value;
      break;
    case FieldWrite::Field::Del:
      f.del = w.value != 0;
      break;
    case FieldWrite::Field::Dup:
      f.dup = static_cast<Dup>(w.value);
      break;
    }
  }
  return r;
}

std::optional<Op::Kind> Op::parse_kind(const std::string &name) {
  static const std::map<std::string, Kind> names{
      {"find", Kind::Find},
      {"contains", Kind::Contains},
      {"insert", Kind::Insert},
      {"delete", Kind::Delete},
      {"findSucc", Kind::FindSucc},
      {"removeSimple", Kind::RemoveSimple},
      {"removeComplex", Kind::RemoveComplex},
      {"rotate", Kind::Rotate}};
  auto it = names.find(name);
  if (it == names.end())
    return std::nullopt;
  return it->second;
}

std::string Op::kind_name(Kind k) {
  switch (k) {
  case Kind::Find:
    return "find";
  case Kind::Contains:
    return "contains";
  case Kind::Insert:
    return "insert";
  case Kind::Delete:
    return "delete";
  case Kind::FindSucc:
    return "findSucc";
  case Kind::RemoveSimple:
    return "removeSimple";
  case Kind::RemoveComplex:
    return "removeComplex";
  case Kind::Rotate:
    return "rotate";
  }
  return "?";
}

std::string result_name(OpOutcome::Result r) {
  switch (r) {
  case OpOutcome::Result::True:
    return "true";
  case OpOutcome::Result::False:
    return "false";
  case OpOutcome::Result::Skipped:
    return "skipped";
  case OpOutcome::Result::Done:
    return "done";
  }
  return "?";
}

std::vector<NodeId> reachable_nodes(const AtomUniverse &u,
                                    const HeapState &h) {
  auto flow = compute_flow(derive_flowgraph(u, h));
  std::vector<NodeId> out;
  for (auto &[x, v] : flow)
    if (!v.is_bot())
      out.push_back(x);
  return out;
}

namespace {

using F = FieldWrite::Field;

std::pair<NodeId, NodeId> find(const HeapState &h, Key key) {
  NodeId x = h.root;
  const NodeFields &r = h.at(x);
  NodeId y = key < r.key ? r.left : r.right;
  std::size_t steps = 0;
  while (y != Null && h.at(y).key != key) {
    if (++steps > h.nodes.size())
      throw InputError("search path does not terminate (cyclic heap)");
    x = y;
    const NodeFields &fx = h.at(x);
    y = key < fx.key ? fx.left : fx.right;
  }
  return {x, y};
}

NodeId fresh_id(const HeapState &h) {
  NodeId m = h.root;
  for (auto &[x, f] : h.nodes)
    m = std::max(m, x);
  return m + 1;
}

void check_user_key(const AtomUniverse &u, Key k) {
  if (!is_finite(k))
    throw InputError("operation key must be finite");
  if (!u.on_grid(k))
    throw InputError("operation key " + key_to_string(k) +
                     " is off the key grid");
}

} // namespace

OpOutcome run_op(const AtomUniverse &u, const HeapState &h, const Op &op,
                 std::uint64_t seed) {
  OpOutcome out;
  out.heap = h;
  auto run = [&](AtomicStep step) {
    auto next = apply_step(out.heap, step);
    if (!next)
      throw InternalError("step '" + step.label +
                          "' wrote a node outside the heap");
    out.heap = std::move(*next);
    out.trace.push_back(std::move(step));
  };
  auto pick_target = [&]() -> std::optional<NodeId> {
    if (op.target) {
      if (!h.nodes.count(*op.target))
        throw InputError("target node " + std::to_string(*op.target) +
                         " is not in the heap");
      return op.target;
    }
    auto reach = reachable_nodes(u, h);
    if (reach.empty())
      return std::nullopt;
    std::mt19937_64 rng(seed);
    return reach[rng() % reach.size()];
  };
  auto skip = [&](std::string why) {
    out.result = OpOutcome::Result::Skipped;
    out.note = std::move(why);
    return out;
  };

  switch (op.kind) {
  case Op::Kind::Find:
  case Op::Kind::Contains: {
    check_user_key(u, op.key);
    auto [x, y] = find(h, op.key);
    out.nodes = {x, y};
    bool hit = y != Null && (op.kind == Op::Kind::Find || !h.at(y).del);
    out.result = hit ? OpOutcome::Result::True : OpOutcome::Result::False;
    return out;
  }
  case Op::Kind::Insert: {
    check_user_key(u, op.key);
    auto [x, y] = find(h, op.key);
    out.nodes = {x, y};
    if (y == Null) {
      NodeId z = fresh_id(h);
      NodeFields nf;
      nf.key = op.key;
      run({"alloc", std::make_pair(z, nf), {}});
      F side = op.key < h.at(x).key ? F::Left : F::Right;
      run({"link", std::nullopt, {{x, side, z}}});
      out.nodes.push_back(z);
      out.result = OpOutcome::Result::True;
    } else if (h.at(y).del) {
      run({"unmark", std::nullopt, {{y, F::Del, 0}}});
      out.result = OpOutcome::Result::True;
    } else {
      out.result = OpOutcome::Result::False;
    }
    return out;
  }
  case Op::Kind::Delete: {
    check_user_key(u, op.key);
    auto [x, y] = find(h, op.key);
    out.nodes = {x, y};
    if (y == Null || h.at(y).del) {
      out.result = OpOutcome::Result::False;
      return out;
    }
    run({"mark", std::nullopt, {{y, F::Del, 1}}});
    out.result = OpOutcome::Result::True;
    return out;
  }
  case Op::Kind::FindSucc:
  case Op::Kind::RemoveComplex: {
    auto xt = pick_target();
    if (!xt)
      return skip("no reachable node");
    NodeId x = *xt;
    const NodeFields &fx = h.at(x);
    if (op.kind == Op::Kind::RemoveComplex &&
        (!fx.del || fx.left == Null || fx.right == Null))
      return skip("target is not a marked node with two children");
    NodeId p = fx.right;
    if (p == Null)
      return skip("target has no right child");
    NodeId y = h.at(p).left;
    if (y == Null)
      return skip("successor is the right child itself");
    while (h.at(y).left != Null) {
      p = y;
      y = h.at(y).left;
    }
    out.nodes = {x, p, y};
    if (op.kind == Op::Kind::FindSucc) {
      out.result = OpOutcome::Result::Done;
      return out;
    }
    const NodeFields fy = h.at(y);
    run({"key-copy", std::nullopt, {{x, F::Key, fy.key}}});
    run({"swap-del",
         std::nullopt,
         {{x, F::Del, fy.del ? 1 : 0}, {y, F::Del, 1}}});
    run({"unlink", std::nullopt, {{p, F::Left, fy.right}}});
    out.result = OpOutcome::Result::Done;
    return out;
  }
  case Op::Kind::RemoveSimple: {
    auto xt = pick_target();
    if (!xt)
      return skip("no reachable node");
    NodeId x = *xt;
    const NodeFields &fx = h.at(x);
    NodeId y = op.mirrored ? fx.right : fx.left;
    if (y == Null || !h.at(y).del)
      return skip("child is absent or unmarked");
    const NodeFields &fy = h.at(y);
    NodeId repl;
    if (fy.right == Null)
      repl = fy.left;
    else if (fy.left == Null)
      repl = fy.right;
    else
      return skip("child has two children");
    out.nodes = {x, y};
    run({"unlink",
         std::nullopt,
         {{x, op.mirrored ? F::Right : F::Left, repl}}});
    out.result = OpOutcome::Result::Done;
    return out;
  }
  case Op::Kind::Rotate: {
    auto xt = pick_target();
    if (!xt)
      return skip("no reachable node");
    NodeId x = *xt;
    NodeId y = op.mirrored ? h.at(x).right : h.at(x).left;
    if (y == Null)
      return skip("target child is null");
    NodeId z = h.at(y).left;
    if (z == Null)
      return skip("child has no left child");
    const NodeFields &fy = h.at(y);
    NodeId c = fresh_id(h);
    NodeFields nc;
    nc.key = fy.key;
    nc.dup = Dup::Right;
    nc.del = fy.del;
    nc.right = fy.right;
    nc.left = h.at(z).right;
    out.nodes = {x, y, z, c};
    run({"duplicate", std::make_pair(c, nc), {}});
    run({"insert-dup", std::nullopt, {{z, F::Right, c}}});
    run({"unlink-original",
         std::nullopt,
         {{x, op.mirrored ? F::Right : F::Left, z},
          {c, F::Dup, static_cast<std::int64_t>(Dup::No)}}});
    run({"mark-original", std::nullopt, {{y, F::Del, 1}}});
    out.result = OpOutcome::Result::Done;
    return out;
  }
  }
  return out;
}

} // namespace flowcheck
