#include "flowcheck/keyspace.hpp"
#include "flowcheck/errors.hpp"

#include <algorithm>
#include <sstream>

namespace flowcheck {

std::string key_to_string(Key k) {
  if (k == NegInf)
    return "-inf";
  if (k == PosInf)
    return "inf";
  return std::to_string(k);
}

AtomUniverse::AtomUniverse(std::vector<Key> endpoints) {
  std::erase_if(endpoints, [](Key k) { return !is_finite(k); });
  std::sort(endpoints.begin(), endpoints.end());
  endpoints.erase(std::unique(endpoints.begin(), endpoints.end()),
                  endpoints.end());
  if (endpoints.size() > kMaxEndpoints)
    throw InputError("too many distinct keys on the grid (" +
                     std::to_string(endpoints.size()) + " > " +
                     std::to_string(kMaxEndpoints) + ")");
  Endpoints = std::move(endpoints);
}

AtomSet AtomUniverse::full() const {
  std::size_t n = atom_count();
  return n >= 64 ? ~AtomSet(0) : ((AtomSet(1) << n) - 1);
}

int AtomUniverse::endpoint_index(Key k) const {
  auto it = std::lower_bound(Endpoints.begin(), Endpoints.end(), k);
  if (it == Endpoints.end() || *it != k)
    return -1;
  return static_cast<int>(it - Endpoints.begin());
}

bool AtomUniverse::on_grid(Key k) const {
  return !is_finite(k) || endpoint_index(k) >= 0;
}

int AtomUniverse::atom_of(Key k) const {
  if (k == NegInf)
    throw ContractError("-inf is not covered by any atom");
  if (k == PosInf)
    return static_cast<int>(2 * Endpoints.size() + 1);
  auto it = std::lower_bound(Endpoints.begin(), Endpoints.end(), k);
  int i = static_cast<int>(it - Endpoints.begin());
  if (it != Endpoints.end() && *it == k)
    return 2 * i + 1;
  return 2 * i;
}

bool AtomUniverse::contains(AtomSet s, Key k) const {
  if (k == NegInf)
    return false;
  return (s >> atom_of(k)) & 1;
}

AtomSet AtomUniverse::interval(Key lo, Key hi, bool loOpen,
                               bool hiOpen) const {
  if (!on_grid(lo) || !on_grid(hi))
    throw InputError("interval bound off the key grid: " +
                     key_to_string(on_grid(lo) ? hi : lo));
  int last = static_cast<int>(atom_count()) - 1;
  int first;
  if (lo == NegInf)
    first = 0;
  else if (lo == PosInf)
    first = loOpen ? last + 1 : last;
  else
    first = atom_of(lo) + (loOpen ? 1 : 0);
  int end;
  if (hi == NegInf)
    end = -1;
  else if (hi == PosInf)
    end = hiOpen ? last - 1 : last;
  else
    end = atom_of(hi) - (hiOpen ? 1 : 0);
  AtomSet s = 0;
  for (int a = first; a <= end; ++a)
    s |= AtomSet(1) << a;
  return s;
}

AtomSet AtomUniverse::below(Key k) const {
  return interval(NegInf, k, false, true);
}

AtomSet AtomUniverse::above(Key k) const {
  return interval(k, PosInf, true, false);
}

AtomUniverse::Interval AtomUniverse::atom_bounds(int atom) const {
  int n = static_cast<int>(Endpoints.size());
  if (atom % 2 == 1) {
    Key p = atom == 2 * n + 1 ? PosInf : Endpoints[(atom - 1) / 2];
    return {p, p, false, false};
  }
  int m = atom / 2;
  Key lo = m == 0 ? NegInf : Endpoints[m - 1];
  Key hi = m == n ? PosInf : Endpoints[m];
  return {lo, hi, true, true};
}

std::vector<AtomUniverse::Interval> AtomUniverse::runs(AtomSet s) const {
  std::vector<Interval> out;
  int n = static_cast<int>(atom_count());
  for (int a = 0; a < n;) {
    if (!((s >> a) & 1)) {
      ++a;
      continue;
    }
    int b = a;
    while (b + 1 < n && ((s >> (b + 1)) & 1))
      ++b;
    Interval lo = atom_bounds(a), hi = atom_bounds(b);
    out.push_back({lo.lo, hi.hi, lo.loOpen, hi.hiOpen});
    a = b + 1;
  }
  return out;
}

std::string AtomUniverse::format(AtomSet s) const {
  auto rs = runs(s);
  if (rs.empty())
    return "{}";
  std::ostringstream os;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const Interval &r = rs[i];
    if (i)
      os << " u ";
    if (r.lo == r.hi && !r.loOpen && !r.hiOpen) {
      os << '{' << key_to_string(r.lo) << '}';
      continue;
    }
    os << (r.loOpen ? '(' : '[') << key_to_string(r.lo) << ','
       << key_to_string(r.hi) << (r.hiOpen ? ')' : ']');
  }
  return os.str();
}

FlowValue oplus(FlowValue m, FlowValue n) {
  if (n.is_bot())
    return m;
  if (m.is_bot())
    return n;
  return FlowValue::top();
}

bool natural_leq(FlowValue m, FlowValue n) {
  return m.is_bot() || m == n || n.is_top();
}

FlowValue meet(FlowValue m, AtomSet interval) {
  if (!m.is_set())
    return m;
  return FlowValue::set(m.bits & interval);
}

FlowValue chain_sup(const std::vector<FlowValue> &chain) {
  if (chain.empty())
    return FlowValue::bot();
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (!natural_leq(chain[i - 1], chain[i]))
      throw ContractError("chain_sup: sequence is not ascending");
  return chain.back();
}

std::vector<FlowValue> lattice(const AtomUniverse &u) {
  std::size_t n = u.atom_count();
  if (n > 20)
    throw Inconclusive("lattice over " + std::to_string(n) +
                       " atoms is too large to enumerate");
  std::vector<FlowValue> out{FlowValue::bot(), FlowValue::top()};
  for (AtomSet b = 0; b < (AtomSet(1) << n); ++b)
    out.push_back(FlowValue::set(b));
  return out;
}

std::vector<FlowValue> down_set(FlowValue v, const AtomUniverse &u) {
  if (v.is_bot())
    return {v};
  if (v.is_set())
    return {FlowValue::bot(), v};
  return lattice(u);
}

std::size_t lattice_index(FlowValue v) {
  switch (v.tag) {
  case FlowValue::Tag::Bot:
    return 0;
  case FlowValue::Tag::Top:
    return 1;
  default:
    return 2 + static_cast<std::size_t>(v.bits);
  }
}

std::string format_value(const AtomUniverse &u, FlowValue v) {
  if (v.is_bot())
    return "bot";
  if (v.is_top())
    return "top";
  return u.format(v.bits);
}

} // namespace flowcheck
