#pragma once

#include "flowcheck/flowgraph.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace flowcheck {

inline constexpr NodeId Null = -1;
/// External source feeding the root.
inline constexpr NodeId EnvNode = -2;

enum class Dup : std::uint8_t { No, Left, Right };

struct NodeFields {
  NodeId left = Null;
  NodeId right = Null;
  Key key = 0;
  bool del = false;
  Dup dup = Dup::No;

  bool operator==(const NodeFields &) const = default;
  auto operator<=>(const NodeFields &) const = default;
};

/// A heap region together with the inflow it expects from outside.
struct HeapState {
  NodeId root = 0;
  std::map<NodeId, NodeFields> nodes;
  Inflow inflow;

  NodeSet ids() const;
  const NodeFields &at(NodeId x) const;
  bool operator==(const HeapState &) const = default;
  auto operator<=>(const HeapState &) const = default;
};

/// A full heap with the default inflow (-inf, inf] into the root.
HeapState make_heap(const AtomUniverse &u, NodeId root,
                    std::map<NodeId, NodeFields> nodes);

/// Edge functions from the physical fields: left carries [-inf,key),
/// right carries (key,inf], a duplicate flag suppresses one side, equal
/// non-null children give top.
FlowGraph derive_flowgraph(const AtomUniverse &u, const HeapState &h);

HeapState heap_restrict(const AtomUniverse &u, const HeapState &h,
                        const NodeSet &Y);
HeapState heap_with_inflow(const HeapState &h, Inflow in);

struct HeapStarResult {
  std::optional<HeapState> heap;
  std::string reason;
  bool defined() const { return heap.has_value(); }
};
HeapStarResult heap_star(const AtomUniverse &u, const HeapState &a,
                         const HeapState &b);
/// Disjoint union without interface checks.
std::optional<HeapState> heap_ghost_mult(const HeapState &a,
                                         const HeapState &b);

struct NodeQuantities {
  FlowValue IS, OSl, OSr;
  AtomSet KS = 0;
  std::optional<Key> C;
};

NodeQuantities derived_quantities(const AtomUniverse &u, const HeapState &h,
                                  const FlowGraph &g,
                                  const FlowAssignment &flow, NodeId x);

struct InvReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::set<Key> contents;
  std::map<NodeId, NodeQuantities> quantities;
};

/// Node invariant for every x in \p Y relative to the node universe
/// \p fullX (both default to all nodes), plus the contents of \p Y.
InvReport check_inv(const AtomUniverse &u, const HeapState &h,
                    std::optional<NodeSet> Y = {},
                    std::optional<NodeSet> fullX = {});
std::set<Key> heap_contents(const AtomUniverse &u, const HeapState &h);

struct DecompReport {
  std::set<Key> contents1, contents2;
  bool keysetsDisjoint = true;
  std::vector<std::string> premiseFailures;
  bool ok() const { return keysetsDisjoint && premiseFailures.empty(); }
};
DecompReport decomp(const AtomUniverse &u, const HeapState &h,
                    const NodeSet &Y1, const NodeSet &Y2);

struct FieldWrite {
  enum class Field : std::uint8_t { Left, Right, Key, Del, Dup };
  NodeId node;
  Field field;
  std::int64_t value;
};

/// One atomic command of an operation trace.
struct AtomicStep {
  std::string label;
  std::optional<std::pair<NodeId, NodeFields>> alloc;
  std::vector<FieldWrite> writes;

  /// Nodes the step writes or allocates.
  NodeSet footprint() const;
};

/// Applies the step; returns nullopt if it touches a node outside \p h.
std::optional<HeapState> apply_step(const HeapState &h, const AtomicStep &s);

struct Op {
  enum class Kind {
    Find,
    Contains,
    Insert,
    Delete,
    FindSucc,
    RemoveSimple,
    RemoveComplex,
    Rotate
  };
  Kind kind = Kind::Find;
  Key key = 0;
  std::optional<NodeId> target;
  /// Maintenance ops act on the left child unless mirrored.
  bool mirrored = false;

  static std::optional<Kind> parse_kind(const std::string &name);
  static std::string kind_name(Kind k);
  bool is_maintenance() const {
    return kind == Kind::RemoveSimple || kind == Kind::RemoveComplex ||
           kind == Kind::Rotate;
  }
};

struct OpOutcome {
  enum class Result { True, False, Skipped, Done };
  HeapState heap;
  Result result = Result::Done;
  std::vector<AtomicStep> trace;
  /// Nodes the op settled on (e.g. x, y of find; x, p, y of removeComplex).
  std::vector<NodeId> nodes;
  std::string note;
};

std::string result_name(OpOutcome::Result r);

/// Reachable nodes (inset not bot), ascending.
std::vector<NodeId> reachable_nodes(const AtomUniverse &u, const HeapState &h);

/// Runs one tree operation. Maintenance ops without a target pick one by a
/// seeded uniform choice over reachable nodes.
OpOutcome run_op(const AtomUniverse &u, const HeapState &h, const Op &op,
                 std::uint64_t seed = 0);

} // namespace flowcheck
