#pragma once

#include "flowcheck/flowgraph.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace flowcheck {

/// A relation on flow values used to bound how much an update may shift
/// the flow seen by the rest of the graph.
struct Estimator {
  enum class Kind { Eq, NaturalLeq, Simple, Complex, Custom };
  Kind kind = Kind::Eq;
  // Complex: m, n proper sets with kx not in m and m \ K included in n.
  Key kx = 0;
  int kxAtom = -1;
  AtomSet K = 0;
  // Custom: dense table over lattice_index() pairs.
  std::shared_ptr<const std::vector<bool>> table;
  std::size_t tableSize = 0;

  static Estimator of(Kind k) {
    Estimator e;
    e.kind = k;
    return e;
  }
  static Estimator eq() { return of(Kind::Eq); }
  static Estimator leq() { return of(Kind::NaturalLeq); }
  static Estimator simple() { return of(Kind::Simple); }
  static Estimator complex(const AtomUniverse &u, Key kx, AtomSet K);
  static Estimator custom(const AtomUniverse &u,
                          const std::function<bool(FlowValue, FlowValue)> &rel);
  /// Same relation minus the pair (m, n).
  Estimator without_pair(const AtomUniverse &u, FlowValue m, FlowValue n) const;

  std::string name(const AtomUniverse &u) const;
  bool operator==(const Estimator &o) const;
};

bool relates(const Estimator &est, FlowValue m, FlowValue n);

/// Outcome of the exhaustive axiom check. On failure \p witness holds the
/// violating values (pair or triple) and \p axiom names the broken law.
struct AxiomReport {
  bool pass = true;
  std::string axiom;
  std::vector<FlowValue> witness;
  std::string detail;
};

/// E1 (reflexive, transitive), E2 (compatible with oplus) and E4 (edge
/// functions monotone) by enumeration. E3 holds on any finite lattice since
/// every ascending chain is eventually constant.
AxiomReport check_estimator_axioms(const Estimator &est, const AtomUniverse &u);

struct CtxReport {
  enum class Verdict { Holds, Fails, Inconclusive };
  Verdict verdict = Verdict::Holds;
  std::string reason;
  // Witness on failure: inflow, external node and the two transfer values.
  Inflow witnessIn;
  NodeId witnessNode = 0;
  FlowValue lhs, rhs;

  bool holds() const { return verdict == Verdict::Holds; }
};

inline constexpr std::size_t kDefaultClosureCap = 4096;

/// s <=_ctx t: same nodes and inflow, and for every inflow below s.in the
/// transfer of s relates to the transfer of t at every external node.
CtxReport ctx_estimate(const AtomUniverse &u, const FlowGraph &s,
                       const FlowGraph &t, const Estimator &est,
                       std::size_t cap = kDefaultClosureCap);

/// Enumerates the down-set of an inflow; returns false when the product
/// exceeds \p cap.
bool for_each_inflow_below(const AtomUniverse &u, const Inflow &in,
                           std::size_t cap,
                           const std::function<bool(const Inflow &)> &fn);

/// in1 <=^Y in2 over the target nodes \p X.
bool inflow_rel(const Inflow &in1, const Inflow &in2, const NodeSet &X,
                const NodeSet &Y, const Estimator &est);

/// { g[in'] | g.in <=^Y in' }.
struct Closure {
  FlowGraph base;
  NodeSet Y;
  Estimator est;

  bool contains(const FlowGraph &g) const;
  /// Explicit member list; throws Inconclusive past \p cap.
  std::vector<FlowGraph> materialize(const AtomUniverse &u,
                                     std::size_t cap = kDefaultClosureCap) const;
  /// The unique member whose inflow from \p s matches s's outflow, if any.
  std::optional<FlowGraph> partner_for(const FlowGraph &s) const;
};

/// Returns the updated graphs if every one is a <=_ctx successor of \p s;
/// nullopt stands for top.
std::optional<std::vector<FlowGraph>>
approx_physical_update(const AtomUniverse &u,
                       const std::optional<std::vector<FlowGraph>> &up,
                       const FlowGraph &s, const Estimator &est,
                       std::size_t cap = kDefaultClosureCap);

/// [t]#(u): the closure of u under inflow growth from t's nodes, provided a
/// witness among \p recorded satisfies w <=_ctx t with w # u, or
/// w <=_ctx u with w # t. nullopt stands for top.
std::optional<Closure> approx_ghost_mult(const AtomUniverse &u,
                                         const FlowGraph &t,
                                         const FlowGraph &ctx,
                                         const Estimator &est,
                                         const std::vector<FlowGraph> &recorded,
                                         std::size_t cap = kDefaultClosureCap);

/// Membership in t (.)# u = [u]#(t) * [t]#(u).
bool in_approx_product(const Closure &forT, const Closure &forU,
                       const FlowGraph &w);

} // namespace flowcheck
