#pragma once

#include "flowcheck/errors.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace flowcheck::registry {

using RKey = std::int64_t;
using RValue = std::int64_t;
/// The tombstone value marking absence of a map entry.
inline constexpr RValue Tomb = std::numeric_limits<RValue>::min();

struct Event {
  RKey key;
  RValue value;
  bool operator==(const Event &) const = default;
  auto operator<=>(const Event &) const = default;
};

/// Upsert history, newest event first.
using History = std::vector<Event>;

enum class Tag : std::uint8_t { OBL, FUL, SLT };

struct Status {
  Tag tag = Tag::SLT;
  History snapshot;
  RKey key = 0;
  RValue value = Tomb;
  bool operator==(const Status &) const = default;
  auto operator<=>(const Status &) const = default;
};

using ThreadId = std::string;
using Registry = std::map<ThreadId, Status>;

struct State {
  History history;
  Registry registry;
  bool operator==(const State &) const = default;
  auto operator<=>(const State &) const = default;
};

/// Prepends (k, v).
History extend(const History &h, RKey k, RValue v);
/// h' is a suffix of h, i.e. h extends h'.
bool is_suffix(const History &hp, const History &h);

RValue m_of(const History &h, RKey k);
long latest(const History &h, RKey k, RValue v);

bool valid(const History &h, const Status &s);
bool valid(const State &s);

/// Status composition: SLT(h,k,v) is the unit of every status with the
/// same parameters; anything else is undefined.
std::optional<Status> compose(const Status &a, const Status &b);
std::optional<Registry> compose(const Registry &a, const Registry &b);

struct Result {
  std::optional<State> state;
  std::string reason;
  bool defined() const { return state.has_value(); }
};

Result star(const State &a, const State &b);
/// Induced update: equal histories merge; a one-event extension flips the
/// shorter side's matching OBL entries to FUL.
Result ghost_mult(const State &a, const State &b);
/// The part of ghost_mult(a, b) that belongs to b (b's thread domain).
std::optional<State> ghost_family(const State &a, const State &b);

std::pair<State, State> unique_decompose(const State &c,
                                         const std::set<ThreadId> &dom1,
                                         const std::set<ThreadId> &dom2);

/// The core update on a state with empty registry: append (k, v).
State core_update_upsert(const State &a, RKey k, RValue v);
/// Full semantics of an upsert on any state.
State upsert(const State &s, RKey k, RValue v);

/// Adds tid -> FUL(h,k,v) if M(h)(k) = v, else OBL(h,k,v).
State spawn_search(const State &s, const ThreadId &tid, RKey k, RValue v);

using flowcheck::Tri;

/// Upward closure of a state under spawning searches and upserts.
struct ClosurePred {
  State base;
  std::vector<RKey> keys;
  std::vector<RValue> values;
  std::vector<ThreadId> freshTids;
  std::size_t depth = 4;

  /// Shape check: the history extends base's, base threads keep their
  /// parameters, new threads are OBL or FUL, and the state is valid.
  bool shape(const State &s) const;
  /// Yes if reached by bounded exploration, No if the shape fails,
  /// Unknown otherwise.
  Tri contains(const State &s) const;
  /// Every state reached within the depth bound.
  std::set<State> explore() const;
};

std::string format_history(const History &h);
std::string format_state(const State &s);

} // namespace flowcheck::registry
