#pragma once

#include "flowcheck/bst.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace flowcheck::og {

/// Thread-local part of a product state: program counter and bindings.
struct Locals {
  int pc = 0;
  std::map<std::string, std::int64_t> vars;

  std::int64_t var(const std::string &name) const;
  bool operator==(const Locals &) const = default;
  auto operator<=>(const Locals &) const = default;
};

/// One conjunct of a proof assertion over (global heap, local state).
struct Fact {
  enum class Kind { Inv, Marked, Unmarked, Reachable, VarMarked, VarInHeap };
  Kind kind = Kind::Inv;
  NodeId node = Null;
  std::string var;

  static Fact inv() { return {}; }
  static Fact on_node(Kind k, NodeId x) { return {k, x, {}}; }
  static Fact on_var(Kind k, std::string v) { return {k, Null, std::move(v)}; }
  bool holds(const AtomUniverse &u, const HeapState &g, const Locals &l) const;
  std::string describe() const;
};

using Assertion = std::vector<Fact>;

bool holds(const AtomUniverse &u, const Assertion &a, const HeapState &g,
           const Locals &l);
std::string describe(const Assertion &a);

/// Atomic action of a thread; always enabled, sets the next pc itself.
struct Action {
  std::string name;
  std::function<std::pair<HeapState, Locals>(const HeapState &,
                                             const Locals &)>
      step;
};

/// A straight-line thread with an assertion before every action and one
/// at the end.
struct ThreadProgram {
  std::string name;
  std::vector<Action> actions;
  std::vector<Assertion> assertions;

  int done_pc() const { return static_cast<int>(actions.size()); }
};

/// Marks the node holding \p key if it is unmarked.
ThreadProgram delete_thread(Key key);
/// Unlinks the left (or right) child of \p parent when it is marked and has
/// at most one child.
ThreadProgram remove_simple_thread(NodeId parent, bool mirrored = false);

/// An interfering command with the assertion it was applied under.
struct Interference {
  std::size_t thread = 0;
  int pc = 0;
  Action com;
  Assertion pre;
};

/// Product states by thread: reached globals and the locals seen per pc.
struct StateSpace {
  std::vector<HeapState> globals;
  std::vector<std::map<int, std::vector<Locals>>> locals;
};

struct Violation {
  std::string kind;
  std::size_t thread = 0;
  int pc = 0;
  std::string detail;
  HeapState global;
};

struct FreedomReport {
  bool ok = true;
  std::size_t pairsChecked = 0;
  std::vector<Violation> violations;
};

/// Replays every interference on the global part of states satisfying its
/// pre-assertion and checks each assertion of the other threads survives.
FreedomReport check_interference_free(const AtomUniverse &u,
                                      const StateSpace &space,
                                      const std::vector<ThreadProgram> &threads,
                                      const std::vector<Interference> &I);

struct Config {
  HeapState global;
  std::vector<Locals> locals;
  bool operator==(const Config &) const = default;
  auto operator<=>(const Config &) const = default;
};

struct ExploreReport {
  bool ok = true;
  std::size_t configs = 0;
  std::vector<Violation> violations;
  StateSpace space;
};

/// Breadth-first interleavings up to \p depth steps, checking the current
/// assertion of every thread in every configuration.
ExploreReport explore(const AtomUniverse &u, const HeapState &init,
                      const std::vector<ThreadProgram> &threads,
                      std::size_t depth);

struct OgReport {
  bool sequentialOk = true;
  bool interferenceFree = true;
  bool explorerOk = true;
  std::size_t configs = 0;
  std::size_t interferences = 0;
  std::vector<Violation> violations;

  bool outline_ok() const { return sequentialOk && interferenceFree; }
  bool agree() const { return outline_ok() == explorerOk; }
  bool pass() const { return outline_ok() && explorerOk; }
};

/// Checks the proof outline (sequential triples plus interference freedom)
/// on the states reached within \p depth, and runs the explorer.
OgReport check(const AtomUniverse &u, const HeapState &init,
               const std::vector<ThreadProgram> &threads, std::size_t depth);

} // namespace flowcheck::og
