#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace flowcheck {

/// Keys are integers; the two extreme values encode the sentinels.
using Key = std::int64_t;
inline constexpr Key NegInf = std::numeric_limits<Key>::min();
inline constexpr Key PosInf = std::numeric_limits<Key>::max();

inline bool is_finite(Key k) { return k != NegInf && k != PosInf; }
std::string key_to_string(Key k);

/// Bitset over the atoms of an AtomUniverse.
using AtomSet = std::uint64_t;

/// Finite partition of (-inf, inf] induced by a grid of finite endpoints
/// e1 < ... < en. Atoms, in order:
///   (-inf,e1) {e1} (e1,e2) ... {en} (en,inf) {inf}
/// so there are 2n+2 of them. -inf itself is not a member of any key set.
class AtomUniverse {
public:
  static constexpr std::size_t kMaxEndpoints = 31;

  AtomUniverse() = default;
  /// Sentinels in \p endpoints are ignored; duplicates are merged.
  explicit AtomUniverse(std::vector<Key> endpoints);

  const std::vector<Key> &endpoints() const { return Endpoints; }
  std::size_t atom_count() const { return 2 * Endpoints.size() + 2; }
  AtomSet full() const;

  bool on_grid(Key k) const;
  /// Atom holding \p k. Works for any key except NegInf.
  int atom_of(Key k) const;
  bool contains(AtomSet s, Key k) const;

  /// Interval with grid-aligned bounds; throws InputError otherwise.
  AtomSet interval(Key lo, Key hi, bool loOpen, bool hiOpen) const;
  /// [-inf, k)
  AtomSet below(Key k) const;
  /// (k, inf]
  AtomSet above(Key k) const;

  /// Maximal runs of consecutive atoms as (lo, hi, loOpen, hiOpen).
  struct Interval {
    Key lo, hi;
    bool loOpen, hiOpen;
  };
  std::vector<Interval> runs(AtomSet s) const;
  std::string format(AtomSet s) const;

  bool operator==(const AtomUniverse &) const = default;

private:
  std::vector<Key> Endpoints;

  Interval atom_bounds(int atom) const;
  int endpoint_index(Key k) const;
};

/// Element of the inset flow monoid: bottom, top, or a key set.
struct FlowValue {
  enum class Tag : std::uint8_t { Bot, Set, Top };
  Tag tag = Tag::Bot;
  AtomSet bits = 0;

  static FlowValue bot() { return {}; }
  static FlowValue top() { return {Tag::Top, 0}; }
  static FlowValue set(AtomSet s) { return {Tag::Set, s}; }

  bool is_bot() const { return tag == Tag::Bot; }
  bool is_top() const { return tag == Tag::Top; }
  bool is_set() const { return tag == Tag::Set; }

  bool operator==(const FlowValue &) const = default;
  auto operator<=>(const FlowValue &) const = default;
};

FlowValue oplus(FlowValue m, FlowValue n);
/// m = bot, or m = n, or n = top.
bool natural_leq(FlowValue m, FlowValue n);
/// Bot and Top are fixed; sets are intersected.
FlowValue meet(FlowValue m, AtomSet interval);
/// Supremum of an ascending chain; throws ContractError if not ascending.
FlowValue chain_sup(const std::vector<FlowValue> &chain);

/// Every value of the finite lattice: bot, top, then all 2^atoms sets.
std::vector<FlowValue> lattice(const AtomUniverse &u);
/// All values natural_leq-below \p v.
std::vector<FlowValue> down_set(FlowValue v, const AtomUniverse &u);
/// Dense index into lattice(): bot=0, top=1, set b = 2+b.
std::size_t lattice_index(FlowValue v);

std::string format_value(const AtomUniverse &u, FlowValue v);

} // namespace flowcheck
