#pragma once

#include "flowcheck/bst.hpp"
#include "flowcheck/json_io.hpp"

#include <string>

namespace fctest {

using namespace flowcheck;

inline std::string fixture(const std::string &name) {
  return std::string(FLOWCHECK_SCENARIOS) + "/" + name;
}

/// The worked tree: root key inf, x = 1 (key 4, deleted), p = 5, y = 7.
struct WorkedTree {
  AtomUniverse u;
  HeapState h;
  static constexpr NodeId Root = 0, X = 1, N1 = 2, N3 = 3, N15 = 4, P = 5,
                          N18 = 6, Y = 7, N9 = 8, N7 = 9;

  WorkedTree() {
    auto doc = io::load_file(fixture("worked_tree.json"));
    u = io::heap_universe(doc);
    h = io::heap_from_json(u, doc);
  }
  FlowGraph graph() const { return derive_flowgraph(u, h); }
  FlowValue iv(Key lo, Key hi, bool loOpen, bool hiOpen) const {
    return FlowValue::set(u.interval(lo, hi, loOpen, hiOpen));
  }
  FlowValue open(Key lo, Key hi) const { return iv(lo, hi, true, true); }
};

/// Heap builder under a -inf root (id 0) whose right child is the tree.
inline HeapState tree_of(const AtomUniverse &u,
                         std::map<NodeId, NodeFields> nodes) {
  return make_heap(u, 0, std::move(nodes));
}

inline NodeFields node(Key k, NodeId l = Null, NodeId r = Null,
                       bool del = false) {
  NodeFields f;
  f.key = k;
  f.left = l;
  f.right = r;
  f.del = del;
  return f;
}

} // namespace fctest
