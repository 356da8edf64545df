#include "flowcheck/registry.hpp"
#include "flowcheck/errors.hpp"

#include <deque>
#include <sstream>

namespace flowcheck::registry {

History extend(const History &h, RKey k, RValue v) {
  History r;
  r.reserve(h.size() + 1);
  r.push_back({k, v});
  r.insert(r.end(), h.begin(), h.end());
  return r;
}

bool is_suffix(const History &hp, const History &h) {
  if (hp.size() > h.size())
    return false;
  return std::equal(hp.begin(), hp.end(), h.end() - hp.size());
}

RValue m_of(const History &h, RKey k) {
  for (const Event &e : h)
    if (e.key == k)
      return e.value;
  return Tomb;
}

long latest(const History &h, RKey k, RValue v) {
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i].key == k && h[i].value == v)
      return static_cast<long>(h.size() - i);
  return v == Tomb ? 0 : -1;
}

bool valid(const History &h, const Status &s) {
  if (s.tag == Tag::SLT)
    return true;
  if (!is_suffix(s.snapshot, h))
    return false;
  bool obl = latest(h, s.key, s.value) < static_cast<long>(s.snapshot.size());
  return (s.tag == Tag::OBL) == obl;
}

bool valid(const State &s) {
  for (auto &[tid, st] : s.registry)
    if (!valid(s.history, st))
      return false;
  return true;
}

std::optional<Status> compose(const Status &a, const Status &b) {
  bool same = a.snapshot == b.snapshot && a.key == b.key && a.value == b.value;
  if (!same)
    return std::nullopt;
  if (a.tag == Tag::SLT)
    return b;
  if (b.tag == Tag::SLT)
    return a;
  return std::nullopt;
}

std::optional<Registry> compose(const Registry &a, const Registry &b) {
  Registry r = a;
  for (auto &[tid, s] : b) {
    auto it = r.find(tid);
    if (it == r.end()) {
      r.emplace(tid, s);
      continue;
    }
    auto c = compose(it->second, s);
    if (!c)
      return std::nullopt;
    it->second = *c;
  }
  return r;
}

Result star(const State &a, const State &b) {
  Result r;
  if (a.history != b.history) {
    r.reason = "histories differ";
    return r;
  }
  auto reg = compose(a.registry, b.registry);
  if (!reg) {
    r.reason = "registries do not compose";
    return r;
  }
  r.state = State{a.history, std::move(*reg)};
  return r;
}

namespace {

bool disjoint(const Registry &a, const Registry &b) {
  for (auto &[tid, s] : a)
    if (b.count(tid))
      return false;
  return true;
}

Status update(RKey k, RValue v, const Status &s) {
  if (s.key == k && s.value == v && s.tag == Tag::OBL)
    return Status{Tag::FUL, s.snapshot, k, v};
  return s;
}

} // namespace

Result ghost_mult(const State &a, const State &b) {
  Result r;
  if (!disjoint(a.registry, b.registry)) {
    r.reason = "thread domains overlap";
    return r;
  }
  if (a.history == b.history) {
    Registry reg = a.registry;
    reg.insert(b.registry.begin(), b.registry.end());
    r.state = State{a.history, std::move(reg)};
    return r;
  }
  const State *longer = &a, *shorter = &b;
  if (b.history.size() > a.history.size())
    std::swap(longer, shorter);
  if (longer->history.size() != shorter->history.size() + 1 ||
      !is_suffix(shorter->history, longer->history)) {
    r.reason = "histories differ by more than one event";
    return r;
  }
  const Event &e = longer->history.front();
  Registry reg = longer->registry;
  for (auto &[tid, s] : shorter->registry)
    reg.emplace(tid, update(e.key, e.value, s));
  r.state = State{longer->history, std::move(reg)};
  return r;
}

std::optional<State> ghost_family(const State &a, const State &b) {
  auto r = ghost_mult(a, b);
  if (!r.defined())
    return std::nullopt;
  State out{r.state->history, {}};
  for (auto &[tid, s] : r.state->registry)
    if (b.registry.count(tid))
      out.registry.emplace(tid, s);
  return out;
}

std::pair<State, State> unique_decompose(const State &c,
                                         const std::set<ThreadId> &dom1,
                                         const std::set<ThreadId> &dom2) {
  for (auto &t : dom1)
    if (dom2.count(t) || !c.registry.count(t))
      throw ContractError("unique_decompose: domains do not partition the "
                          "registry");
  if (dom1.size() + dom2.size() != c.registry.size())
    throw ContractError("unique_decompose: domains do not partition the "
                        "registry");
  State a{c.history, {}}, b{c.history, {}};
  for (auto &[tid, s] : c.registry)
    (dom1.count(tid) ? a : b).registry.emplace(tid, s);
  return {a, b};
}

State core_update_upsert(const State &a, RKey k, RValue v) {
  if (!a.registry.empty())
    throw ContractError("core update expects an empty registry");
  return State{extend(a.history, k, v), {}};
}

State upsert(const State &s, RKey k, RValue v) {
  State core = core_update_upsert(State{s.history, {}}, k, v);
  auto r = ghost_mult(core, s);
  return *r.state;
}

State spawn_search(const State &s, const ThreadId &tid, RKey k, RValue v) {
  if (s.registry.count(tid))
    throw ContractError("spawn_search: thread id " + tid + " is not fresh");
  State r = s;
  Tag tag = m_of(s.history, k) == v ? Tag::FUL : Tag::OBL;
  r.registry.emplace(tid, Status{tag, s.history, k, v});
  return r;
}

bool ClosurePred::shape(const State &s) const {
  if (!is_suffix(base.history, s.history) || !valid(s))
    return false;
  for (auto &[tid, st] : base.registry) {
    auto it = s.registry.find(tid);
    if (it == s.registry.end())
      return false;
    const Status &t = it->second;
    if (t.snapshot != st.snapshot || t.key != st.key || t.value != st.value)
      return false;
    if (t.tag != st.tag && !(st.tag == Tag::OBL && t.tag == Tag::FUL))
      return false;
  }
  for (auto &[tid, st] : s.registry)
    if (!base.registry.count(tid) && st.tag == Tag::SLT)
      return false;
  return true;
}

std::set<State> ClosurePred::explore() const {
  std::set<State> seen{base};
  std::deque<std::pair<State, std::size_t>> work{{base, 0}};
  while (!work.empty()) {
    auto [s, d] = work.front();
    work.pop_front();
    if (d == depth)
      continue;
    std::vector<State> next;
    for (RKey k : keys)
      for (RValue v : values) {
        next.push_back(upsert(s, k, v));
        for (const ThreadId &tid : freshTids)
          if (!s.registry.count(tid)) {
            State t = spawn_search(s, tid, k, v);
            if (valid(t))
              next.push_back(std::move(t));
            break;
          }
      }
    for (State &t : next)
      if (seen.insert(t).second)
        work.push_back({std::move(t), d + 1});
  }
  return seen;
}

Tri ClosurePred::contains(const State &s) const {
  if (!shape(s))
    return Tri::No;
  if (s.history.size() - base.history.size() +
          (s.registry.size() - base.registry.size()) >
      depth)
    return Tri::Unknown;
  return explore().count(s) ? Tri::Yes : Tri::Unknown;
}

std::string format_history(const History &h) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i)
      os << ',';
    os << '(' << h[i].key << ',';
    if (h[i].value == Tomb)
      os << "tomb";
    else
      os << h[i].value;
    os << ')';
  }
  os << ']';
  return os.str();
}

std::string format_state(const State &s) {
  std::ostringstream os;
  os << '(' << format_history(s.history) << ", {";
  bool first = true;
  for (auto &[tid, st] : s.registry) {
    if (!first)
      os << ", ";
    first = false;
    const char *tag = st.tag == Tag::OBL ? "OBL" : st.tag == Tag::FUL ? "FUL"
                                                                       : "SLT";
    os << tid << "->" << tag << '(' << format_history(st.snapshot) << ','
       << st.key << ',';
    if (st.value == Tomb)
      os << "tomb";
    else
      os << st.value;
    os << ')';
  }
  os << "})";
  return os.str();
}

} // namespace flowcheck::registry
