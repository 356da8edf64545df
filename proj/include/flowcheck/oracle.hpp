#pragma once

#include "flowcheck/bst.hpp"
#include "flowcheck/estimator.hpp"
#include "flowcheck/json_io.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace flowcheck::oracle {

using io::json;

// Replayable randomness -----------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x);
/// Generator for case \p index of \p suite; independent of evaluation order.
std::mt19937_64 case_rng(std::uint64_t seed, std::string_view suite,
                         std::uint64_t index);
/// Worker count from FLOWCHECK_THREADS, defaulting to the hardware.
unsigned worker_count();

// Independent primitives ----------------------------------------------------

/// Least flow by simultaneous re-evaluation of every node each round.
/// Throws InternalError past 2|X|+2 rounds.
FlowAssignment naive_flow(const FlowGraph &g);
/// Outflow per external target under \p in, computed with naive_flow.
std::map<NodeId, FlowValue> naive_transfer(const FlowGraph &g,
                                           const Inflow &in);
/// m <= n iff some o has m + o = n.
bool naive_leq(const AtomUniverse &u, FlowValue m, FlowValue n);
/// s <=_ctx t checked by brute force; nullopt past \p cap inflows.
std::optional<bool> naive_ctx(const AtomUniverse &u, const FlowGraph &s,
                              const FlowGraph &t, const Estimator &est,
                              std::size_t cap = kDefaultClosureCap);
/// Membership of \p g in { base[in'] | base.in <=^Y in' }.
bool naive_in_closure(const FlowGraph &base, const NodeSet &Y,
                      const Estimator &est, const FlowGraph &g);

// Enumeration ---------------------------------------------------------------

struct EnumBounds {
  std::size_t maxNodes = 3;
  std::size_t maxEndpoints = 2;
  /// Prefix of {ConstBot, Filter, ConstTop}.
  std::size_t maxEdgeFns = 3;
  /// Prefix of {bot, empty, lower half, full}.
  std::size_t maxInflowValues = 4;
  std::uint64_t budget = 10'000'000;
};

/// Sum over endpoint counts n and node counts k of E^(k*k) * I^k.
std::uint64_t enumeration_size(const EnumBounds &b);

/// Endpoints {10, 20, ...} of the n-endpoint universe.
AtomUniverse enum_universe(std::size_t n);
/// Filter used by the enumeration: the lower half of the atoms.
AtomSet enum_filter(const AtomUniverse &u);
/// Source of the inflow into node i.
NodeId enum_source(NodeId i);

/// Visits every graph within the bounds in a fixed order: nodes 0..k-1,
/// an edge function per ordered pair, an inflow value per node. Stops
/// early when \p fn returns false. Throws InputError over budget.
std::uint64_t enumerate_graphs(
    const EnumBounds &b,
    const std::function<bool(const AtomUniverse &, const FlowGraph &)> &fn);

// Random instances ----------------------------------------------------------

/// Random graph with 1..maxNodes nodes over \p u.
FlowGraph random_graph(std::mt19937_64 &rng, const AtomUniverse &u,
                       std::size_t maxNodes);
/// Random search tree under a -inf root sentinel (id 0) with up to
/// \p maxNodes nodes in total, keys from the universe's grid, and some
/// nodes marked.
HeapState random_tree(std::mt19937_64 &rng, const AtomUniverse &u,
                      std::size_t maxNodes, double markRate = 0.3);
/// The 17-point grid 1..17.
AtomUniverse tree_universe();

// Theorems ------------------------------------------------------------------

enum class Theorem {
  FlowEquivalence,
  UniqueDecomp,
  MultCoincides,
  ShapeIndependent,
  Contextualization,
  ConservativeExt,
  KeysetDisjoint,
  RegistryValid
};

std::optional<Theorem> parse_theorem(const std::string &name);
std::string theorem_name(Theorem t);

/// RegistryValid bounds: histories over keys {1,2} and values {10,20,tomb};
/// pairs of states share \p maxThreads thread names. Histories up to
/// \p longHistory events use at most two threads, those up to
/// \p shortHistory events use all of them.
struct RegistryBounds {
  std::size_t maxThreads = 3;
  std::size_t longHistory = 3;
  std::size_t shortHistory = 1;
};

struct TheoremParams {
  std::optional<std::size_t> nodes;
  std::optional<std::size_t> cases;
  std::uint64_t seed = 0;
  std::size_t closureCap = kDefaultClosureCap;
  RegistryBounds registry;
};

struct TheoremReport {
  std::string name;
  /// "pass", "fail" or "inconclusive".
  std::string verdict = "pass";
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::uint64_t inconclusive = 0;
  std::string detail;
  /// Present iff the verdict is "fail": instance, seed and case index.
  json counterexample;

  bool pass() const { return verdict == "pass"; }
  json to_json() const;
};

TheoremReport check_theorem(Theorem t, const TheoremParams &p);

/// Seeded sequences of mixed tree operations checked against a reference
/// set after every operation, with the invariant at every quiescent point.
TheoremReport fuzz_bst(const TheoremParams &p, std::size_t opsPerCase = 50);

} // namespace flowcheck::oracle
