#include "flowcheck/json_io.hpp"
#include "flowcheck/errors.hpp"

#include <fstream>

namespace flowcheck::io {

namespace {

[[noreturn]] void bad(const std::string &what) { throw InputError(what); }

const json &member(const json &j, const char *name) {
  if (!j.is_object() || !j.contains(name))
    bad(std::string("missing member \"") + name + "\"");
  return j.at(name);
}

std::int64_t as_int(const json &j, const char *what) {
  if (!j.is_number_integer())
    bad(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

NodeId id_or_null(const json &j) {
  return j.is_null() ? Null : as_int(j, "node id");
}

} // namespace

json load_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    bad("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    bad(path + ": " + e.what());
  }
}

Key key_from_json(const json &j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "-inf")
      return NegInf;
    if (s == "inf")
      return PosInf;
    bad("bad key \"" + s + "\"");
  }
  Key k = as_int(j, "key");
  if (!is_finite(k))
    bad("key out of range");
  return k;
}

json key_to_json(Key k) {
  if (k == NegInf)
    return "-inf";
  if (k == PosInf)
    return "inf";
  return k;
}

AtomSet intervals_from_json(const AtomUniverse &u, const json &j) {
  const json &list =
      j.is_object() ? member(j, "intervals") : j;
  if (!list.is_array())
    bad("interval set must be an array");
  AtomSet s = 0;
  for (const json &iv : list) {
    if (!iv.is_array() || iv.size() != 4 || !iv[2].is_boolean() ||
        !iv[3].is_boolean())
      bad("interval must be [lo, hi, loOpen, hiOpen]");
    s |= u.interval(key_from_json(iv[0]), key_from_json(iv[1]),
                    iv[2].get<bool>(), iv[3].get<bool>());
  }
  return s;
}

json intervals_to_json(const AtomUniverse &u, AtomSet s) {
  json out = json::array();
  for (auto &r : u.runs(s))
    out.push_back({key_to_json(r.lo), key_to_json(r.hi), r.loOpen, r.hiOpen});
  return out;
}

FlowValue value_from_json(const AtomUniverse &u, const json &j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "bot")
      return FlowValue::bot();
    if (s == "top")
      return FlowValue::top();
    bad("bad flow value \"" + s + "\"");
  }
  if (!j.is_object())
    bad("flow value must be \"bot\", \"top\" or {\"intervals\": ...}");
  return FlowValue::set(intervals_from_json(u, j));
}

json value_to_json(const AtomUniverse &u, FlowValue v) {
  if (v.is_bot())
    return "bot";
  if (v.is_top())
    return "top";
  return {{"intervals", intervals_to_json(u, v.bits)}};
}

EdgeFn edge_fn_from_json(const AtomUniverse &u, const json &j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "bot")
      return EdgeFn::const_bot();
    if (s == "top")
      return EdgeFn::const_top();
    bad("bad edge function \"" + s + "\"");
  }
  return EdgeFn::filter(intervals_from_json(u, member(j, "filter")));
}

json edge_fn_to_json(const AtomUniverse &u, EdgeFn fn) {
  switch (fn.kind) {
  case EdgeFn::Kind::Bot:
    return "bot";
  case EdgeFn::Kind::Top:
    return "top";
  default:
    return {{"filter", intervals_to_json(u, fn.mask)}};
  }
}

GraphFile graph_from_json(const json &j) {
  GraphFile f;
  std::vector<Key> eps;
  if (j.contains("endpoints"))
    for (const json &e : member(j, "endpoints"))
      eps.push_back(key_from_json(e));
  if (eps.size() > AtomUniverse::kMaxEndpoints)
    bad("too many endpoints");
  f.universe = AtomUniverse(eps);
  for (const json &n : member(j, "nodes")) {
    NodeId x = as_int(member(n, "id"), "node id");
    f.graph.add_node(x);
    if (n.contains("edges"))
      for (const json &e : n.at("edges"))
        f.graph.set_edge(x, as_int(member(e, "dst"), "edge target"),
                         edge_fn_from_json(f.universe, member(e, "fn")));
  }
  if (j.contains("inflow"))
    for (const json &e : j.at("inflow")) {
      NodeId src = as_int(member(e, "src"), "inflow source");
      NodeId dst = as_int(member(e, "dst"), "inflow target");
      if (!f.graph.nodes.count(dst) || f.graph.nodes.count(src))
        bad("inflow must run from outside into a node");
      f.graph.set_inflow(src, dst, value_from_json(f.universe, member(e, "value")));
    }
  try {
    f.graph.validate();
  } catch (const ContractError &e) {
    bad(e.what());
  }
  return f;
}

json graph_to_json(const AtomUniverse &u, const FlowGraph &g) {
  json eps = json::array();
  for (Key k : u.endpoints())
    eps.push_back(k);
  json nodes = json::array();
  for (NodeId x : g.nodes) {
    json edges = json::array();
    for (auto &[e, fn] : g.edges)
      if (e.first == x)
        edges.push_back({{"dst", e.second}, {"fn", edge_fn_to_json(u, fn)}});
    nodes.push_back({{"id", x}, {"edges", edges}});
  }
  json in = json::array();
  for (auto &[e, v] : g.inflow)
    in.push_back(
        {{"src", e.first}, {"dst", e.second}, {"value", value_to_json(u, v)}});
  return {{"endpoints", eps}, {"nodes", nodes}, {"inflow", in}};
}

Estimator estimator_from_json(const AtomUniverse &u, const json &j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "eq")
      return Estimator::eq();
    if (s == "leq")
      return Estimator::leq();
    if (s == "simple")
      return Estimator::simple();
    bad("unknown estimator \"" + s + "\"");
  }
  const json &c = member(j, "complex");
  Key kx = key_from_json(member(c, "kx"));
  if (!u.on_grid(kx))
    bad("complex estimator key is not on the endpoint grid");
  return Estimator::complex(u, kx, intervals_from_json(u, member(c, "K")));
}

json estimator_to_json(const AtomUniverse &u, const Estimator &e) {
  switch (e.kind) {
  case Estimator::Kind::Eq:
    return "eq";
  case Estimator::Kind::NaturalLeq:
    return "leq";
  case Estimator::Kind::Simple:
    return "simple";
  case Estimator::Kind::Complex:
    return {{"complex", {{"kx", e.kx}, {"K", intervals_to_json(u, e.K)}}}};
  case Estimator::Kind::Custom:
    break;
  }
  throw ContractError("custom estimators have no JSON form");
}

AtomUniverse heap_universe(const json &j) {
  std::vector<Key> eps;
  if (j.contains("endpoints")) {
    for (const json &e : j.at("endpoints"))
      eps.push_back(key_from_json(e));
  } else {
    for (const json &n : member(j, "nodes"))
      eps.push_back(key_from_json(member(n, "key")));
  }
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  std::erase_if(eps, [](Key k) { return !is_finite(k); });
  if (eps.size() > AtomUniverse::kMaxEndpoints)
    bad("heap needs more than " +
        std::to_string(AtomUniverse::kMaxEndpoints) + " endpoints");
  return AtomUniverse(eps);
}

HeapState heap_from_json(const AtomUniverse &u, const json &j) {
  std::map<NodeId, NodeFields> nodes;
  for (const json &n : member(j, "nodes")) {
    NodeId x = as_int(member(n, "id"), "node id");
    if (x < 0)
      bad("node ids must be non-negative");
    NodeFields f;
    f.key = key_from_json(member(n, "key"));
    if (is_finite(f.key) && !u.on_grid(f.key))
      bad("key " + key_to_string(f.key) + " is not on the endpoint grid");
    f.left = n.contains("left") ? id_or_null(n.at("left")) : Null;
    f.right = n.contains("right") ? id_or_null(n.at("right")) : Null;
    f.del = n.value("del", false);
    std::string dup = n.value("dup", "no");
    if (dup == "left")
      f.dup = Dup::Left;
    else if (dup == "right")
      f.dup = Dup::Right;
    else if (dup != "no")
      bad("dup must be \"no\", \"left\" or \"right\"");
    if (!nodes.emplace(x, f).second)
      bad("duplicate node id " + std::to_string(x));
  }
  NodeId root = as_int(member(j, "root"), "root");
  if (!nodes.count(root))
    bad("root is not a node");
  for (auto &[x, f] : nodes)
    for (NodeId c : {f.left, f.right})
      if (c != Null && !nodes.count(c))
        bad("node " + std::to_string(x) + " points to missing node " +
            std::to_string(c));
  HeapState h = make_heap(u, root, std::move(nodes));
  if (j.contains("inflow")) {
    Inflow in;
    for (const json &e : j.at("inflow"))
      set_inflow_entry(in, as_int(member(e, "src"), "inflow source"),
                       as_int(member(e, "dst"), "inflow target"),
                       value_from_json(u, member(e, "value")));
    h = heap_with_inflow(h, in);
  }
  return h;
}

json heap_to_json(const AtomUniverse &u, const HeapState &h) {
  json nodes = json::array();
  for (auto &[x, f] : h.nodes) {
    auto id = [](NodeId c) { return c == Null ? json(nullptr) : json(c); };
    const char *dup =
        f.dup == Dup::Left ? "left" : f.dup == Dup::Right ? "right" : "no";
    nodes.push_back({{"id", x},
                     {"key", key_to_json(f.key)},
                     {"left", id(f.left)},
                     {"right", id(f.right)},
                     {"del", f.del},
                     {"dup", dup}});
  }
  json in = json::array();
  for (auto &[e, v] : h.inflow)
    in.push_back(
        {{"src", e.first}, {"dst", e.second}, {"value", value_to_json(u, v)}});
  return {{"root", h.root}, {"nodes", nodes}, {"inflow", in}};
}

registry::RValue rvalue_from_json(const json &j) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "tomb"))
    return registry::Tomb;
  registry::RValue v = as_int(j, "value");
  if (v == registry::Tomb)
    bad("value out of range");
  return v;
}

json rvalue_to_json(registry::RValue v) {
  return v == registry::Tomb ? json("tomb") : json(v);
}

namespace {

registry::History history_from_json(const json &j) {
  registry::History h;
  if (!j.is_array())
    bad("history must be an array");
  for (const json &e : j) {
    if (!e.is_array() || e.size() != 2)
      bad("history events are [key, value] pairs");
    h.push_back({as_int(e[0], "registry key"), rvalue_from_json(e[1])});
  }
  return h;
}

json history_to_json(const registry::History &h) {
  json out = json::array();
  for (auto &e : h)
    out.push_back({e.key, rvalue_to_json(e.value)});
  return out;
}

} // namespace

registry::State registry_from_json(const json &j) {
  registry::State s;
  s.history = history_from_json(member(j, "history"));
  if (j.contains("registry"))
    for (auto &[tid, st] : j.at("registry").items()) {
      registry::Status status;
      std::string tag = member(st, "tag").get<std::string>();
      if (tag == "OBL")
        status.tag = registry::Tag::OBL;
      else if (tag == "FUL")
        status.tag = registry::Tag::FUL;
      else if (tag == "SLT")
        status.tag = registry::Tag::SLT;
      else
        bad("bad status tag \"" + tag + "\"");
      status.snapshot = history_from_json(member(st, "snapshot"));
      status.key = as_int(member(st, "key"), "registry key");
      status.value = rvalue_from_json(member(st, "value"));
      s.registry.emplace(tid, status);
    }
  return s;
}

json registry_to_json(const registry::State &s) {
  json reg = json::object();
  for (auto &[tid, st] : s.registry) {
    const char *tag = st.tag == registry::Tag::OBL   ? "OBL"
                      : st.tag == registry::Tag::FUL ? "FUL"
                                                     : "SLT";
    reg[tid] = {{"tag", tag},
                {"snapshot", history_to_json(st.snapshot)},
                {"key", st.key},
                {"value", rvalue_to_json(st.value)}};
  }
  return {{"history", history_to_json(s.history)}, {"registry", reg}};
}

json flow_to_json(const AtomUniverse &u, const FlowAssignment &flow) {
  json out = json::array();
  for (auto &[x, v] : flow)
    out.push_back({{"id", x}, {"flow", value_to_json(u, v)}});
  return out;
}

} // namespace flowcheck::io
