#include "flowcheck/oracle.hpp"
#include "flowcheck/casl.hpp"
#include "flowcheck/errors.hpp"
#include "flowcheck/registry.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <set>
#include <thread>

namespace flowcheck::oracle {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 case_rng(std::uint64_t seed, std::string_view suite,
                         std::uint64_t index) {
  // FNV-1a keeps suite hashing stable across standard libraries.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : suite)
    h = (h ^ c) * 0x100000001b3ULL;
  return std::mt19937_64(
      splitmix64(splitmix64(seed) ^ splitmix64(h) ^ splitmix64(index + 1)));
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("FLOWCHECK_THREADS")) {
    long n = std::strtol(env, nullptr, 10);
    if (n >= 1)
      return static_cast<unsigned>(std::min<long>(n, 256));
  }
  return hw;
}

// Independent value arithmetic: tags plus explicit atom sets.
namespace {

struct OVal {
  enum Tag { Bot, Set, Top } tag = Bot;
  std::set<int> atoms;
  bool operator==(const OVal &) const = default;
};

OVal from(FlowValue v) {
  OVal o;
  if (v.is_bot())
    return o;
  if (v.is_top()) {
    o.tag = OVal::Top;
    return o;
  }
  o.tag = OVal::Set;
  for (int i = 0; i < 64; ++i)
    if ((v.bits >> i) & 1)
      o.atoms.insert(i);
  return o;
}

FlowValue to(const OVal &o) {
  if (o.tag == OVal::Bot)
    return FlowValue::bot();
  if (o.tag == OVal::Top)
    return FlowValue::top();
  AtomSet b = 0;
  for (int i : o.atoms)
    b |= AtomSet(1) << i;
  return FlowValue::set(b);
}

OVal plus(const OVal &m, const OVal &n) {
  if (m.tag == OVal::Bot)
    return n;
  if (n.tag == OVal::Bot)
    return m;
  OVal t;
  t.tag = OVal::Top;
  return t;
}

OVal through(const EdgeFn &fn, const OVal &m) {
  OVal r;
  if (fn.kind == EdgeFn::Kind::Bot)
    return r;
  if (fn.kind == EdgeFn::Kind::Top) {
    r.tag = OVal::Top;
    return r;
  }
  if (m.tag != OVal::Set)
    return m;
  r.tag = OVal::Set;
  for (int a : m.atoms)
    if ((fn.mask >> a) & 1)
      r.atoms.insert(a);
  return r;
}

std::vector<OVal> all_values(const AtomUniverse &u) {
  std::vector<OVal> out(2);
  out[1].tag = OVal::Top;
  std::size_t n = u.atom_count();
  for (std::uint64_t b = 0; b < (std::uint64_t(1) << n); ++b)
    out.push_back(from(FlowValue::set(b)));
  return out;
}

std::map<NodeId, OVal> naive_flow_o(const FlowGraph &g) {
  std::map<NodeId, OVal> f, in;
  for (NodeId x : g.nodes) {
    f[x] = OVal{};
    in[x] = OVal{};
  }
  for (auto &[e, v] : g.inflow)
    if (g.nodes.count(e.second))
      in[e.second] = plus(in[e.second], from(v));
  std::size_t bound = 2 * g.nodes.size() + 2;
  for (std::size_t round = 0;; ++round) {
    std::map<NodeId, OVal> next = in;
    for (auto &[e, fn] : g.edges)
      if (g.nodes.count(e.first) && g.nodes.count(e.second))
        next[e.second] = plus(next[e.second], through(fn, f[e.first]));
    if (next == f)
      return f;
    if (round > bound)
      throw InternalError("naive flow did not converge");
    f = std::move(next);
  }
}

} // namespace

FlowAssignment naive_flow(const FlowGraph &g) {
  FlowAssignment out;
  for (auto &[x, v] : naive_flow_o(g))
    out[x] = to(v);
  return out;
}

std::map<NodeId, FlowValue> naive_transfer(const FlowGraph &g,
                                           const Inflow &in) {
  FlowGraph h = g;
  h.inflow = in;
  auto f = naive_flow_o(h);
  std::map<NodeId, OVal> out;
  for (auto &[e, fn] : h.edges)
    if (h.nodes.count(e.first) && !h.nodes.count(e.second))
      out[e.second] = plus(out[e.second], through(fn, f[e.first]));
  std::map<NodeId, FlowValue> r;
  for (auto &[y, v] : out)
    if (v.tag != OVal::Bot)
      r[y] = to(v);
  return r;
}

bool naive_leq(const AtomUniverse &u, FlowValue m, FlowValue n) {
  OVal om = from(m), on = from(n);
  if (u.atom_count() <= 10) {
    for (const OVal &o : all_values(u))
      if (plus(om, o) == on)
        return true;
    return false;
  }
  // Any witness o satisfies o = n, o = bot or n = top, so these suffice.
  OVal top;
  top.tag = OVal::Top;
  for (const OVal &o : {OVal{}, top, on})
    if (plus(om, o) == on)
      return true;
  return false;
}

std::optional<bool> naive_ctx(const AtomUniverse &u, const FlowGraph &s,
                              const FlowGraph &t, const Estimator &est,
                              std::size_t cap) {
  if (s.nodes != t.nodes || s.inflow != t.inflow)
    return false;
  std::vector<std::pair<Edge, std::vector<FlowValue>>> choices;
  std::size_t total = 1;
  std::vector<OVal> lat;
  if (u.atom_count() <= 10)
    lat = all_values(u);
  for (auto &[e, v] : s.inflow) {
    std::vector<FlowValue> below;
    if (!lat.empty()) {
      for (const OVal &o : lat)
        if (naive_leq(u, to(o), v))
          below.push_back(to(o));
    } else {
      if (v.is_top())
        return std::nullopt;
      for (FlowValue o : {FlowValue::bot(), v})
        if (naive_leq(u, o, v) &&
            std::find(below.begin(), below.end(), o) == below.end())
          below.push_back(o);
    }
    total *= below.size();
    if (total > cap)
      return std::nullopt;
    choices.emplace_back(e, std::move(below));
  }
  NodeSet targets = s.external_targets();
  for (NodeId y : t.external_targets())
    targets.insert(y);
  std::vector<std::size_t> idx(choices.size(), 0);
  while (true) {
    Inflow in;
    for (std::size_t i = 0; i < choices.size(); ++i)
      set_inflow_entry(in, choices[i].first.first, choices[i].first.second,
                       choices[i].second[idx[i]]);
    auto ts = naive_transfer(s, in), tt = naive_transfer(t, in);
    for (NodeId y : targets) {
      FlowValue a = ts.count(y) ? ts.at(y) : FlowValue::bot();
      FlowValue b = tt.count(y) ? tt.at(y) : FlowValue::bot();
      if (!relates(est, a, b))
        return false;
    }
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < choices[i].second.size())
        break;
      idx[i] = 0;
    }
    if (i == idx.size())
      return true;
  }
}

bool naive_in_closure(const FlowGraph &base, const NodeSet &Y,
                      const Estimator &est, const FlowGraph &g) {
  if (g.nodes != base.nodes || g.edges != base.edges)
    return false;
  auto add = [](FlowValue a, FlowValue b) {
    return a.is_bot() ? b : b.is_bot() ? a : FlowValue::top();
  };
  std::set<Edge> keys;
  for (auto &[e, v] : base.inflow)
    keys.insert(e);
  for (auto &[e, v] : g.inflow)
    keys.insert(e);
  std::map<NodeId, std::pair<FlowValue, FlowValue>> fromY;
  for (NodeId x : base.nodes)
    fromY[x] = {FlowValue::bot(), FlowValue::bot()};
  for (const Edge &e : keys) {
    FlowValue a = base.in(e.first, e.second), b = g.in(e.first, e.second);
    if (!Y.count(e.first)) {
      if (a != b)
        return false;
      continue;
    }
    auto &[sa, sb] = fromY[e.second];
    sa = add(sa, a);
    sb = add(sb, b);
  }
  for (auto &[x, sums] : fromY)
    if (!relates(est, sums.first, sums.second))
      return false;
  return true;
}

// Enumeration ---------------------------------------------------------------

AtomUniverse enum_universe(std::size_t n) {
  std::vector<Key> eps;
  for (std::size_t i = 1; i <= n; ++i)
    eps.push_back(static_cast<Key>(10 * i));
  return AtomUniverse(eps);
}

AtomSet enum_filter(const AtomUniverse &u) {
  std::size_t half = u.atom_count() / 2;
  return (AtomSet(1) << half) - 1;
}

NodeId enum_source(NodeId i) { return 100 + i % 2; }

namespace {

std::vector<EdgeFn> edge_pool(const AtomUniverse &u, std::size_t n) {
  std::vector<EdgeFn> p = {EdgeFn::const_bot(), EdgeFn::filter(enum_filter(u)),
                           EdgeFn::const_top()};
  p.resize(std::min<std::size_t>(n, 3));
  return p;
}

std::vector<FlowValue> inflow_pool(const AtomUniverse &u, std::size_t n) {
  std::vector<FlowValue> p = {FlowValue::bot(), FlowValue::set(0),
                              FlowValue::set(enum_filter(u)),
                              FlowValue::set(u.full())};
  p.resize(std::min<std::size_t>(n, 4));
  return p;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > (std::uint64_t(1) << 62) / std::max<std::uint64_t>(b, 1))
      return std::uint64_t(1) << 62;
    r *= b;
  }
  return r;
}

/// The graph with \p k nodes selected by mixed-radix \p code.
FlowGraph graph_of(const AtomUniverse &, std::size_t k,
                   const std::vector<EdgeFn> &E, const std::vector<FlowValue> &I,
                   std::uint64_t code) {
  FlowGraph g;
  for (std::size_t i = 0; i < k; ++i)
    g.add_node(static_cast<NodeId>(i));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      g.set_edge(i, j, E[code % E.size()]);
      code /= E.size();
    }
  for (std::size_t i = 0; i < k; ++i) {
    g.set_inflow(enum_source(i), i, I[code % I.size()]);
    code /= I.size();
  }
  return g;
}

/// Uniform graph from the enumeration space with exactly \p k nodes.
FlowGraph sample_enum_graph(std::mt19937_64 &rng, const AtomUniverse &u,
                            std::size_t k) {
  auto E = edge_pool(u, 3);
  auto I = inflow_pool(u, 4);
  FlowGraph g;
  for (std::size_t i = 0; i < k; ++i)
    g.add_node(static_cast<NodeId>(i));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      g.set_edge(i, j, E[rng() % E.size()]);
  for (std::size_t i = 0; i < k; ++i)
    g.set_inflow(enum_source(i), i, I[rng() % I.size()]);
  return g;
}

} // namespace

std::uint64_t enumeration_size(const EnumBounds &b) {
  std::uint64_t total = 0;
  std::uint64_t E = std::min<std::size_t>(b.maxEdgeFns, 3);
  std::uint64_t I = std::min<std::size_t>(b.maxInflowValues, 4);
  for (std::size_t n = 0; n <= b.maxEndpoints; ++n)
    for (std::size_t k = 0; k <= b.maxNodes; ++k)
      total += ipow(E, k * k) * ipow(I, k);
  return total;
}

std::uint64_t enumerate_graphs(
    const EnumBounds &b,
    const std::function<bool(const AtomUniverse &, const FlowGraph &)> &fn) {
  std::uint64_t size = enumeration_size(b);
  if (size > b.budget)
    throw InputError("enumeration has " + std::to_string(size) +
                     " cases, over the budget of " + std::to_string(b.budget));
  std::uint64_t visited = 0;
  for (std::size_t n = 0; n <= b.maxEndpoints; ++n) {
    AtomUniverse u = enum_universe(n);
    auto E = edge_pool(u, b.maxEdgeFns);
    auto I = inflow_pool(u, b.maxInflowValues);
    for (std::size_t k = 0; k <= b.maxNodes; ++k) {
      std::uint64_t count = ipow(E.size(), k * k) * ipow(I.size(), k);
      for (std::uint64_t code = 0; code < count; ++code) {
        ++visited;
        if (!fn(u, graph_of(u, k, E, I, code)))
          return visited;
      }
    }
  }
  return visited;
}

// Random instances ----------------------------------------------------------

namespace {

AtomSet random_interval(std::mt19937_64 &rng, const AtomUniverse &u) {
  std::size_t n = u.atom_count();
  std::size_t a = rng() % n, b = rng() % n;
  if (a > b)
    std::swap(a, b);
  AtomSet s = 0;
  for (std::size_t i = a; i <= b; ++i)
    s |= AtomSet(1) << i;
  return s;
}

AtomSet random_subset(std::mt19937_64 &rng, const AtomUniverse &u) {
  return rng() & u.full();
}

} // namespace

FlowGraph random_graph(std::mt19937_64 &rng, const AtomUniverse &u,
                       std::size_t maxNodes) {
  std::size_t k = 1 + rng() % std::max<std::size_t>(maxNodes, 1);
  std::uniform_real_distribution<double> coin(0, 1);
  FlowGraph g;
  for (std::size_t i = 0; i < k; ++i)
    g.add_node(static_cast<NodeId>(i));
  double density = std::min(1.0, 2.0 / static_cast<double>(k));
  auto fn = [&]() {
    double r = coin(rng);
    if (r < 0.2)
      return EdgeFn::const_bot();
    if (r < 0.25)
      return EdgeFn::const_top();
    return EdgeFn::filter(coin(rng) < 0.5 ? random_interval(rng, u)
                                          : random_subset(rng, u));
  };
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      if (coin(rng) < density)
        g.set_edge(i, j, fn());
    if (coin(rng) < 0.2)
      g.set_edge(i, 200 + static_cast<NodeId>(i % 3), fn());
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (coin(rng) >= 0.35)
      continue;
    double r = coin(rng);
    FlowValue v = r < 0.1   ? FlowValue::set(0)
                  : r < 0.4 ? FlowValue::set(u.full())
                  : r < 0.9 ? FlowValue::set(random_interval(rng, u))
                            : FlowValue::top();
    g.set_inflow(enum_source(i), i, v);
  }
  return g;
}

AtomUniverse tree_universe() {
  std::vector<Key> eps;
  for (Key k = 1; k <= 17; ++k)
    eps.push_back(k);
  return AtomUniverse(eps);
}

HeapState random_tree(std::mt19937_64 &rng, const AtomUniverse &u,
                      std::size_t maxNodes, double markRate) {
  std::vector<Key> keys = u.endpoints();
  std::shuffle(keys.begin(), keys.end(), rng);
  std::size_t limit = std::min(keys.size(), maxNodes > 0 ? maxNodes - 1 : 0);
  std::size_t m = limit == 0 ? 0 : 1 + rng() % limit;
  std::bernoulli_distribution mark(markRate);
  std::map<NodeId, NodeFields> nodes;
  NodeFields root;
  root.key = NegInf;
  nodes[0] = root;
  for (std::size_t i = 0; i < m; ++i) {
    NodeId id = static_cast<NodeId>(i + 1);
    NodeFields f;
    f.key = keys[i];
    f.del = mark(rng);
    NodeId cur = 0;
    while (true) {
      NodeFields &c = nodes[cur];
      NodeId &next = f.key < c.key ? c.left : c.right;
      if (next == Null) {
        next = id;
        break;
      }
      cur = next;
    }
    nodes[id] = f;
  }
  return make_heap(u, 0, std::move(nodes));
}

// Theorems ------------------------------------------------------------------

std::optional<Theorem> parse_theorem(const std::string &name) {
  static const std::pair<const char *, Theorem> names[] = {
      {"FlowEquivalence", Theorem::FlowEquivalence},
      {"UniqueDecomp", Theorem::UniqueDecomp},
      {"MultCoincides", Theorem::MultCoincides},
      {"ShapeIndependent", Theorem::ShapeIndependent},
      {"Contextualization", Theorem::Contextualization},
      {"ConservativeExt", Theorem::ConservativeExt},
      {"KeysetDisjoint", Theorem::KeysetDisjoint},
      {"RegistryValid", Theorem::RegistryValid}};
  for (auto &[n, t] : names)
    if (name == n)
      return t;
  return std::nullopt;
}

std::string theorem_name(Theorem t) {
  switch (t) {
  case Theorem::FlowEquivalence:
    return "FlowEquivalence";
  case Theorem::UniqueDecomp:
    return "UniqueDecomp";
  case Theorem::MultCoincides:
    return "MultCoincides";
  case Theorem::ShapeIndependent:
    return "ShapeIndependent";
  case Theorem::Contextualization:
    return "Contextualization";
  case Theorem::ConservativeExt:
    return "ConservativeExt";
  case Theorem::KeysetDisjoint:
    return "KeysetDisjoint";
  case Theorem::RegistryValid:
    return "RegistryValid";
  }
  return "?";
}

json TheoremReport::to_json() const {
  json j = {{"theorem", name},
            {"verdict", verdict},
            {"cases", cases},
            {"failures", failures},
            {"inconclusive", inconclusive},
            {"detail", detail}};
  if (verdict == "fail")
    j["counterexample"] = counterexample;
  return j;
}

namespace {

struct CaseResult {
  enum Kind { Pass, Fail, Inconclusive } kind = Pass;
  std::string detail;
  json instance;
};

CaseResult failed(std::string detail, json instance) {
  return {CaseResult::Fail, std::move(detail), std::move(instance)};
}

/// Folds case results into \p rep in index order.
class Collector {
public:
  Collector(TheoremReport &rep, std::uint64_t seed, std::string suite)
      : Rep(rep), Seed(seed), Suite(std::move(suite)) {}

  void add(std::uint64_t index, CaseResult r) {
    ++Rep.cases;
    if (r.kind == CaseResult::Inconclusive) {
      ++Rep.inconclusive;
      if (Rep.detail.empty())
        Rep.detail = r.detail;
      return;
    }
    if (r.kind == CaseResult::Pass)
      return;
    ++Rep.failures;
    if (Rep.failures == 1) {
      Rep.detail = r.detail;
      Rep.counterexample = {{"suite", Suite},
                            {"case", index},
                            {"seed", Seed},
                            {"detail", r.detail},
                            {"instance", r.instance}};
    }
  }

private:
  TheoremReport &Rep;
  std::uint64_t Seed;
  std::string Suite;
};

/// Runs \p n seeded cases on the worker pool and collects in index order.
void run_cases(Collector &col, std::uint64_t n, std::uint64_t seed,
               const std::string &suite,
               const std::function<CaseResult(std::mt19937_64 &)> &fn) {
  std::vector<CaseResult> results(n);
  std::atomic<std::uint64_t> next{0};
  auto work = [&]() {
    for (std::uint64_t i; (i = next++) < n;) {
      auto rng = case_rng(seed, suite, i);
      try {
        results[i] = fn(rng);
      } catch (const Inconclusive &e) {
        results[i] = {CaseResult::Inconclusive, e.what(), nullptr};
      } catch (const std::exception &e) {
        results[i] = failed(std::string("exception: ") + e.what(), nullptr);
      }
    }
  };
  unsigned threads = std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(n, 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t)
    pool.emplace_back(work);
  work();
  for (auto &t : pool)
    t.join();
  for (std::uint64_t i = 0; i < n; ++i)
    col.add(i, std::move(results[i]));
}

json graph_instance(const AtomUniverse &u, const FlowGraph &g) {
  return io::graph_to_json(u, g);
}

FlowValue at_or_bot(const FlowAssignment &f, NodeId x) {
  auto it = f.find(x);
  return it == f.end() ? FlowValue::bot() : it->second;
}

CaseResult flow_equal(const AtomUniverse &u, const FlowGraph &g) {
  FlowAssignment a = compute_flow(g), b = naive_flow(g);
  for (NodeId x : g.nodes)
    if (at_or_bot(a, x) != at_or_bot(b, x))
      return failed("flow differs at node " + std::to_string(x) + ": " +
                        format_value(u, at_or_bot(a, x)) + " vs " +
                        format_value(u, at_or_bot(b, x)),
                    graph_instance(u, g));
  return {};
}

// Unique decomposition ------------------------------------------------------

std::vector<FlowValue> cross_candidates(const AtomUniverse &u, EdgeFn fn) {
  if (fn.kind == EdgeFn::Kind::Bot)
    return {FlowValue::bot()};
  if (fn.kind == EdgeFn::Kind::Top)
    return {FlowValue::top()};
  std::vector<FlowValue> out = {FlowValue::bot(), FlowValue::top()};
  // Every subset of the mask: a filter's output can only be one of these.
  AtomSet m = fn.mask & u.full();
  for (AtomSet s = m;; s = (s - 1) & m) {
    out.push_back(FlowValue::set(s));
    if (s == 0)
      break;
  }
  return out;
}

CaseResult check_decomp(const AtomUniverse &u, const FlowGraph &g,
                        const NodeSet &X1, const NodeSet &X2) {
  auto inst = [&]() {
    return json{{"graph", graph_instance(u, g)}, {"X1", X1}, {"X2", X2}};
  };
  auto [t1, t2] = unique_decompose(g, X1, X2);
  auto r = star(t1, t2);
  if (!r.defined())
    return failed("decomposition does not recompose: " + r.message(), inst());
  if (!(*r.graph == g))
    return failed("recomposition differs from the graph", inst());

  // Alternative decompositions: the inflow of t1' from X2 is the only free
  // choice; t2' inflow from X1 is then t1' outflow.
  std::vector<std::pair<Edge, std::vector<FlowValue>>> cross;
  for (NodeId y : X2)
    for (NodeId x : X1)
      cross.push_back({{y, x}, cross_candidates(u, g.edge(y, x))});
  Inflow ext1, ext2;
  for (auto &[e, v] : t1.inflow)
    if (!X2.count(e.first))
      ext1.emplace(e, v);
  for (auto &[e, v] : t2.inflow)
    if (!X1.count(e.first))
      ext2.emplace(e, v);
  auto faithful = naive_flow(g);
  std::vector<std::size_t> idx(cross.size(), 0);
  while (true) {
    Inflow in1 = ext1;
    for (std::size_t i = 0; i < cross.size(); ++i)
      set_inflow_entry(in1, cross[i].first.first, cross[i].first.second,
                       cross[i].second[idx[i]]);
    FlowGraph a = t1.with_inflow(in1);
    auto fa = naive_flow(a);
    Inflow in2 = ext2;
    for (NodeId x : X1)
      for (NodeId y : X2)
        set_inflow_entry(in2, x, y, g.edge(x, y).apply(at_or_bot(fa, x)));
    FlowGraph b = t2.with_inflow(in2);
    auto fb = naive_flow(b);
    bool match = true;
    for (std::size_t i = 0; i < cross.size() && match; ++i) {
      auto [y, x] = cross[i].first;
      match = g.edge(y, x).apply(at_or_bot(fb, y)) == a.in(y, x);
    }
    bool isFaithful = match;
    for (NodeId x : X1)
      isFaithful = isFaithful && at_or_bot(fa, x) == at_or_bot(faithful, x);
    for (NodeId y : X2)
      isFaithful = isFaithful && at_or_bot(fb, y) == at_or_bot(faithful, y);
    if (match && isFaithful && !(a == t1 && b == t2)) {
      auto s = star(a, b);
      if (s.defined() && *s.graph == g)
        return failed("second decomposition found", inst());
    }
    if (match && a == t1 && b == t2 && !isFaithful)
      return failed("canonical decomposition is not faithful", inst());
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < cross[i].second.size())
        break;
      idx[i] = 0;
    }
    if (i == idx.size())
      return {};
  }
}

/// Every split of g into two non-empty parts.
template <class Fn> CaseResult each_split(const FlowGraph &g, Fn &&fn) {
  std::vector<NodeId> xs(g.nodes.begin(), g.nodes.end());
  std::size_t k = xs.size();
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t(1) << k); ++mask) {
    NodeSet X1, X2;
    for (std::size_t i = 0; i < k; ++i)
      ((mask >> i) & 1 ? X1 : X2).insert(xs[i]);
    CaseResult r = fn(X1, X2);
    if (r.kind != CaseResult::Pass)
      return r;
  }
  return {};
}

CaseResult check_mult(const AtomUniverse &u, const FlowGraph &g,
                      const NodeSet &X1, const NodeSet &X2) {
  auto [s, t] = unique_decompose(g, X1, X2);
  auto r = star(s, t);
  if (!r.defined())
    return {};
  auto m = ghost_mult(s, t);
  if (!m || !(*m == *r.graph))
    return failed("star and ghost multiplication differ",
                  {{"s", graph_instance(u, s)}, {"t", graph_instance(u, t)}});
  auto fm = naive_flow(*m), fs = naive_flow(s), ft = naive_flow(t);
  for (auto &[x, v] : fm)
    if (v != (X1.count(x) ? at_or_bot(fs, x) : at_or_bot(ft, x)))
      return failed("product flow differs from the parts' flows",
                    {{"s", graph_instance(u, s)}, {"t", graph_instance(u, t)}});
  return {};
}

// Contextualization on trees -------------------------------------------------

struct CtxStep {
  AtomicStep step;
  NodeSet footprint;
  Estimator est;
};

CaseResult verify_ctx(const AtomUniverse &u, const HeapState &H,
                      const CtxStep &cs, std::size_t cap) {
  auto inst = [&]() {
    return json{{"heap", io::heap_to_json(u, H)},
                {"step", cs.step.label},
                {"footprint", cs.footprint}};
  };
  NodeSet rest;
  for (auto &[x, f] : H.nodes)
    if (!cs.footprint.count(x))
      rest.insert(x);
  HeapState a = heap_restrict(u, H, cs.footprint), d = heap_restrict(u, H, rest);
  auto res = casl::contextualize_heap(u, cs.step, a, d, cs.est, cap);
  if (res.theorem.verdict == casl::Verdict::Inconclusive)
    return {CaseResult::Inconclusive, res.theorem.detail, inst()};
  if (res.aborted)
    return failed(cs.step.label + ": " + res.theorem.detail, inst());
  if (!res.theorem.pass())
    return failed(cs.step.label + ": " + res.theorem.detail, inst());
  if (res.c.contains(d) != Tri::Yes)
    return failed(cs.step.label + ": d is not in c", inst());
  // The only state of a * c is H itself; its successor must split into b * c.
  auto w = apply_step(H, cs.step);
  if (!w)
    return failed(cs.step.label + ": step leaves the heap", inst());
  NodeSet wa = cs.footprint, wd = rest;
  if (cs.step.alloc)
    wa.insert(cs.step.alloc->first);
  HeapState pa = heap_restrict(u, *w, wa), pd = heap_restrict(u, *w, wd);
  if (res.b.contains(pa) != Tri::Yes || res.c.contains(pd) != Tri::Yes)
    return failed(cs.step.label + ": post-state not in b * c", inst());
  auto st = heap_star(u, pa, pd);
  if (!st.defined() || !(*st.heap == *w))
    return failed(cs.step.label + ": post-state does not recompose", inst());
  return {};
}

struct Candidate {
  NodeId x;
  bool mirrored;
};

std::vector<Candidate> simple_candidates(const HeapState &h) {
  std::vector<Candidate> out;
  for (auto &[x, f] : h.nodes)
    for (bool m : {false, true}) {
      NodeId y = m ? f.right : f.left;
      if (y == Null)
        continue;
      const NodeFields &fy = h.at(y);
      if (fy.del && (fy.left == Null || fy.right == Null))
        out.push_back({x, m});
    }
  return out;
}

std::vector<NodeId> complex_candidates(const HeapState &h) {
  std::vector<NodeId> out;
  for (auto &[x, f] : h.nodes)
    if (x != h.root && f.del && f.left != Null && f.right != Null &&
        h.at(f.right).left != Null)
      out.push_back(x);
  return out;
}

/// Marks nodes until both maintenance operations have a target; nullopt if
/// the tree shape admits no removeComplex target.
std::optional<HeapState> plant_targets(std::mt19937_64 &rng, HeapState h) {
  if (simple_candidates(h).empty()) {
    std::vector<NodeId> leafish;
    for (auto &[x, f] : h.nodes)
      if (x != h.root && (f.left == Null || f.right == Null))
        leafish.push_back(x);
    if (leafish.empty())
      return std::nullopt;
    h.nodes[leafish[rng() % leafish.size()]].del = true;
  }
  if (complex_candidates(h).empty()) {
    std::vector<NodeId> inner;
    for (auto &[x, f] : h.nodes)
      if (x != h.root && f.left != Null && f.right != Null &&
          h.at(f.right).left != Null)
        inner.push_back(x);
    if (inner.empty())
      return std::nullopt;
    h.nodes[inner[rng() % inner.size()]].del = true;
  }
  return h;
}

CaseResult contextualization_case(std::mt19937_64 &rng, std::size_t maxNodes,
                                  std::size_t cap) {
  AtomUniverse u = tree_universe();
  std::optional<HeapState> h;
  for (int tries = 0; tries < 100 && !h; ++tries)
    h = plant_targets(rng, random_tree(rng, u, maxNodes));
  if (!h)
    return {CaseResult::Inconclusive, "no tree with maintenance targets", nullptr};
  HeapState H = *h;

  auto sc = simple_candidates(H);
  Candidate c = sc[rng() % sc.size()];
  Op simple{Op::Kind::RemoveSimple, 0, c.x, c.mirrored};
  OpOutcome so = run_op(u, H, simple);
  if (so.trace.size() != 1)
    return failed("removeSimple produced no unlink", io::heap_to_json(u, H));
  CaseResult r = verify_ctx(u, H, {so.trace[0], {so.nodes[0], so.nodes[1]},
                                   Estimator::simple()},
                            cap);
  if (r.kind != CaseResult::Pass)
    return r;

  auto cc = complex_candidates(H);
  NodeId x = cc[rng() % cc.size()];
  Op complex{Op::Kind::RemoveComplex, 0, x, false};
  OpOutcome co = run_op(u, H, complex);
  if (co.trace.size() != 3)
    return failed("removeComplex produced an unexpected trace",
                  io::heap_to_json(u, H));
  NodeId p = co.nodes[1], y = co.nodes[2];
  Key kx = H.at(x).key, ky = H.at(y).key;
  FlowGraph g = derive_flowgraph(u, H);
  FlowValue isx = compute_flow(g).at(x);
  AtomSet K = (isx.is_set() ? isx.bits : 0) & u.interval(kx, ky, true, false);
  std::vector<CtxStep> steps = {
      {co.trace[0], {x, y}, Estimator::complex(u, kx, K)},
      {co.trace[1], {x, y}, Estimator::eq()},
      {co.trace[2], {p, y}, Estimator::simple()}};
  HeapState cur = H;
  for (const CtxStep &s : steps) {
    r = verify_ctx(u, cur, s, cap);
    if (r.kind != CaseResult::Pass)
      return r;
    cur = *apply_step(cur, s.step);
  }
  return {};
}

// Conservative extension -----------------------------------------------------

CaseResult conservative_case(const AtomUniverse &u, const FlowGraph &g,
                             std::size_t cap) {
  casl::Caps caps;
  caps.closure = cap;
  std::vector<NodeId> targets(g.nodes.begin(), g.nodes.end());
  targets.push_back(50);
  for (NodeId x : g.nodes)
    for (NodeId y : targets)
      for (EdgeFn fn : edge_pool(u, 3)) {
        std::string name = "set_edge(" + std::to_string(x) + "," +
                           std::to_string(y) + ")";
        auto up = casl::set_edge_update(x, y, fn);
        auto a = casl::Pred<FlowGraph>::one(g);
        auto std_ = casl::sem(
            casl::Program<FlowGraph>::atom(casl::flow_command(u, name, up, cap)),
            a, caps);
        auto ind = casl::induced_flow(u, name, up,
                                      casl::Pred<FlowGraph>::one(FlowGraph{}),
                                      a, Estimator::eq(), cap, true);
        bool same = std_.top == ind.top &&
                    (std_.top || (ind.symbolic.empty() &&
                                  std_.states == ind.states));
        if (!same)
          return failed(name + ": induced semantics with emp differs from std",
                        {{"graph", graph_instance(u, g)},
                         {"edge", io::edge_fn_to_json(u, fn)}});
      }
  return {};
}


// Registry validity ---------------------------------------------------------

namespace reg = registry;

std::vector<reg::Event> registry_events() {
  std::vector<reg::Event> out;
  for (reg::RKey k : {1, 2})
    for (reg::RValue v : {reg::RValue(10), reg::RValue(20), reg::Tomb})
      out.push_back({k, v});
  return out;
}

std::vector<reg::History> histories_upto(std::size_t n) {
  std::vector<reg::History> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].size() < n)
      for (const reg::Event &e : registry_events())
        out.push_back(reg::extend(out[i], e.key, e.value));
  return out;
}

/// Statuses valid under \p h with snapshots among h's suffixes.
std::vector<reg::Status> valid_statuses(const reg::History &h) {
  std::vector<reg::Status> out;
  for (std::size_t i = 0; i <= h.size(); ++i) {
    reg::History snap(h.begin() + i, h.end());
    for (const reg::Event &e : registry_events())
      for (reg::Tag t : {reg::Tag::OBL, reg::Tag::FUL, reg::Tag::SLT}) {
        reg::Status s{t, snap, e.key, e.value};
        if (reg::valid(h, s))
          out.push_back(std::move(s));
      }
  }
  return out;
}

/// What one thread contributes to a pair of states.
struct Slot {
  std::optional<reg::Status> a, b;
};

json registry_pair(const reg::State &a, const reg::State &b) {
  return {{"a", io::registry_to_json(a)}, {"b", io::registry_to_json(b)}};
}

/// Visits every assignment of \p slots to \p threads thread names.
template <class Fn>
CaseResult each_assignment(const std::vector<Slot> &slots, std::size_t threads,
                           reg::State a, reg::State b, Fn &&fn) {
  std::vector<std::size_t> idx(threads, 0);
  while (true) {
    a.registry.clear();
    b.registry.clear();
    for (std::size_t t = 0; t < threads; ++t) {
      const Slot &s = slots[idx[t]];
      std::string tid = "t" + std::to_string(t);
      if (s.a)
        a.registry.emplace(tid, *s.a);
      if (s.b)
        b.registry.emplace(tid, *s.b);
    }
    if (auto r = fn(a, b); r.kind != CaseResult::Pass)
      return r;
    std::size_t t = 0;
    while (t < threads && ++idx[t] == slots.size())
      idx[t++] = 0;
    if (t == threads)
      return {};
  }
}

CaseResult registry_star_case(const reg::History &h, std::size_t threads) {
  auto sts = valid_statuses(h);
  std::vector<Slot> slots{{}};
  for (const reg::Status &s : sts) {
    slots.push_back({s, std::nullopt});
    slots.push_back({std::nullopt, s});
    for (const reg::Status &t : sts)
      if (reg::compose(s, t))
        slots.push_back({s, t});
  }
  return each_assignment(
      slots, threads, reg::State{h, {}}, reg::State{h, {}},
      [](const reg::State &a, const reg::State &b) -> CaseResult {
        auto r = reg::star(a, b);
        if (!r.defined())
          return failed("star undefined on composable states: " + r.reason,
                        registry_pair(a, b));
        if (!reg::valid(*r.state))
          return failed("star of valid states is invalid", registry_pair(a, b));
        return {};
      });
}

CaseResult registry_ghost_case(const reg::History &ha, const reg::History &hb,
                               std::size_t threads) {
  std::vector<Slot> slots{{}};
  for (reg::Status &s : valid_statuses(ha))
    slots.push_back({std::move(s), std::nullopt});
  for (reg::Status &s : valid_statuses(hb))
    slots.push_back({std::nullopt, std::move(s)});
  return each_assignment(
      slots, threads, reg::State{ha, {}}, reg::State{hb, {}},
      [](const reg::State &a, const reg::State &b) -> CaseResult {
        auto r = reg::ghost_mult(a, b);
        if (!r.defined())
          return failed("ghost multiplication undefined: " + r.reason,
                        registry_pair(a, b));
        if (!reg::valid(*r.state))
          return failed("ghost product of valid states is invalid",
                        registry_pair(a, b));
        return {};
      });
}

} // namespace

TheoremReport check_theorem(Theorem t, const TheoremParams &p) {
  TheoremReport rep;
  rep.name = theorem_name(t);
  std::string suite = rep.name;
  Collector col(rep, p.seed, suite);
  std::uint64_t index = 0;

  switch (t) {
  case Theorem::FlowEquivalence: {
    EnumBounds b;
    b.maxNodes = p.nodes.value_or(3);
    enumerate_graphs(b, [&](const AtomUniverse &u, const FlowGraph &g) {
      col.add(index++, flow_equal(u, g));
      return true;
    });
    run_cases(col, p.cases.value_or(1000), p.seed, suite + "/random",
              [](std::mt19937_64 &rng) {
                AtomUniverse u = enum_universe(rng() % 4);
                return flow_equal(u, random_graph(rng, u, 16));
              });
    break;
  }
  case Theorem::UniqueDecomp:
  case Theorem::MultCoincides: {
    bool uniq = t == Theorem::UniqueDecomp;
    auto per_graph = [&](const AtomUniverse &u, const FlowGraph &g) {
      return each_split(g, [&](const NodeSet &X1, const NodeSet &X2) {
        return uniq ? check_decomp(u, g, X1, X2) : check_mult(u, g, X1, X2);
      });
    };
    EnumBounds b;
    b.maxNodes = std::min<std::size_t>(p.nodes.value_or(2), 2);
    enumerate_graphs(b, [&](const AtomUniverse &u, const FlowGraph &g) {
      col.add(index++, per_graph(u, g));
      return true;
    });
    std::size_t big = std::max<std::size_t>(p.nodes.value_or(4), 3);
    run_cases(col, p.cases.value_or(600), p.seed, suite + "/sampled",
              [&](std::mt19937_64 &rng) {
                AtomUniverse u = enum_universe(rng() % 3);
                std::size_t k = 3 + rng() % (big - 2);
                FlowGraph g = sample_enum_graph(rng, u, k);
                if (k == 4) {
                  // The 2+2 splits.
                  for (NodeSet X1 : {NodeSet{0, 1}, NodeSet{0, 2}, NodeSet{0, 3}}) {
                    NodeSet X2;
                    for (NodeId x : g.nodes)
                      if (!X1.count(x))
                        X2.insert(x);
                    CaseResult r = uniq ? check_decomp(u, g, X1, X2)
                                        : check_mult(u, g, X1, X2);
                    if (r.kind != CaseResult::Pass)
                      return r;
                  }
                  return CaseResult{};
                }
                return per_graph(u, g);
              });
    break;
  }
  case Theorem::ShapeIndependent: {
    std::size_t cap = p.closureCap;
    auto one = [cap](std::mt19937_64 &rng) -> CaseResult {
                AtomUniverse u = enum_universe(rng() % 3);
                FlowGraph w;
                while (w.nodes.size() < 2)
                  w = random_graph(rng, u, 6);
                std::vector<NodeId> xs(w.nodes.begin(), w.nodes.end());
                std::uint64_t mask =
                    1 + rng() % ((std::uint64_t(1) << xs.size()) - 2);
                NodeSet X1, X2;
                for (std::size_t i = 0; i < xs.size(); ++i)
                  ((mask >> i) & 1 ? X1 : X2).insert(xs[i]);
                auto [s, u2] = unique_decompose(w, X1, X2);
                Estimator est = std::array<Estimator, 3>{
                    Estimator::eq(), Estimator::leq(),
                    Estimator::simple()}[rng() % 3];
                // A ctx-successor of s: perturb edges, keep the inflow.
                FlowGraph t = s;
                for (int tries = 0; tries < 4; ++tries) {
                  FlowGraph cand = s;
                  NodeId x = *std::next(X1.begin(), rng() % X1.size());
                  std::vector<NodeId> dst(xs.begin(), xs.end());
                  dst.push_back(200);
                  NodeId y = dst[rng() % dst.size()];
                  std::uint64_t r = rng() % 3;
                  EdgeFn fn = r == 0   ? EdgeFn::const_bot()
                              : r == 1 ? EdgeFn::filter(random_subset(rng, u))
                                       : EdgeFn::filter(cand.edge(x, y).mask |
                                                        random_subset(rng, u));
                  cand.set_edge(x, y, fn);
                  auto ok = naive_ctx(u, s, cand, est, cap);
                  if (!ok)
                    return {CaseResult::Inconclusive, "down-set over the cap",
                            nullptr};
                  auto engine = ctx_estimate(u, s, cand, est, cap);
                  if (engine.verdict != CtxReport::Verdict::Inconclusive &&
                      engine.holds() != *ok)
                    return failed("engine and oracle disagree on <=_ctx",
                                  {{"s", graph_instance(u, s)},
                                   {"t", graph_instance(u, cand)},
                                   {"estimator", est.name(u)}});
                  if (*ok) {
                    t = cand;
                    break;
                  }
                }
                json inst = {{"s", graph_instance(u, s)},
                             {"t", graph_instance(u, t)},
                             {"u", graph_instance(u, u2)},
                             {"estimator", est.name(u)}};
                auto tu = ghost_mult(t, u2);
                if (!tu)
                  return failed("t and u are not disjoint", inst);
                auto holds = naive_ctx(u, w, *tu, est, cap);
                if (!holds)
                  return {CaseResult::Inconclusive, "down-set over the cap",
                          nullptr};
                if (!*holds)
                  return failed("s * u is not <=_ctx t (.) u", inst);
                if (!naive_in_closure(t, X2, est, restrict(*tu, X1)))
                  return failed("(t (.) u)|X1 is not in the closure of t",
                                inst);
                if (!naive_in_closure(u2, X1, est, restrict(*tu, X2)))
                  return failed("(t (.) u)|X2 is not in the closure of u",
                                inst);
                return {};
              };
    // Instances whose inflow down-set exceeds the cap are redrawn.
    run_cases(col, p.cases.value_or(1000), p.seed, suite,
              [one](std::mt19937_64 &rng) {
                CaseResult r;
                for (int attempt = 0; attempt < 64; ++attempt) {
                  r = one(rng);
                  if (r.kind != CaseResult::Inconclusive)
                    break;
                }
                return r;
              });
    break;
  }
  case Theorem::Contextualization: {
    std::size_t n = p.nodes.value_or(32), cap = p.closureCap;
    run_cases(col, p.cases.value_or(200), p.seed, suite,
              [n, cap](std::mt19937_64 &rng) {
                return contextualization_case(rng, n, cap);
              });
    break;
  }
  case Theorem::ConservativeExt: {
    EnumBounds b;
    b.maxNodes = std::min<std::size_t>(p.nodes.value_or(2), 2);
    enumerate_graphs(b, [&](const AtomUniverse &u, const FlowGraph &g) {
      col.add(index++, conservative_case(u, g, p.closureCap));
      return true;
    });
    std::size_t cap = p.closureCap;
    run_cases(col, p.cases.value_or(2000), p.seed, suite + "/sampled",
              [cap](std::mt19937_64 &rng) {
                AtomUniverse u = enum_universe(rng() % 3);
                return conservative_case(u, sample_enum_graph(rng, u, 3), cap);
              });
    break;
  }
  case Theorem::KeysetDisjoint: {
    std::size_t n = p.nodes.value_or(32);
    run_cases(col, p.cases.value_or(200), p.seed, suite,
              [n](std::mt19937_64 &rng) -> CaseResult {
                AtomUniverse u = tree_universe();
                HeapState h = random_tree(rng, u, n);
                FlowGraph g = derive_flowgraph(u, h);
                auto flow = naive_flow(g);
                std::map<NodeId, AtomSet> ks;
                for (auto &[x, f] : h.nodes) {
                  FlowValue in = at_or_bot(flow, x);
                  if (in.is_bot())
                    continue;
                  if (in.is_top())
                    return failed("inset of " + std::to_string(x) + " is top",
                                  io::heap_to_json(u, h));
                  AtomSet out = 0;
                  for (NodeId c : {f.left, f.right})
                    if (c != Null) {
                      FlowValue o = g.edge(x, c).apply(in);
                      if (o.is_set())
                        out |= o.bits;
                    }
                  ks[x] = in.bits & ~out;
                }
                for (auto i = ks.begin(); i != ks.end(); ++i)
                  for (auto j = std::next(i); j != ks.end(); ++j)
                    if (i->second & j->second)
                      return failed("keysets of " + std::to_string(i->first) +
                                        " and " + std::to_string(j->first) +
                                        " overlap",
                                    io::heap_to_json(u, h));
                auto inv = check_inv(u, h);
                for (auto &[x, k] : ks)
                  if (inv.quantities.count(x) && inv.quantities.at(x).KS != k)
                    return failed("engine keyset of " + std::to_string(x) +
                                      " differs",
                                  io::heap_to_json(u, h));
                return {};
              });
    break;
  }
  case Theorem::RegistryValid: {
    const RegistryBounds &rb = p.registry;
    for (const reg::History &h : histories_upto(rb.longHistory)) {
      std::size_t n = h.size() <= rb.shortHistory ? rb.maxThreads
                                                  : std::min<std::size_t>(2, rb.maxThreads);
      col.add(index++, registry_star_case(h, n));
      if (h.empty())
        continue;
      // h extends its tail by one upsert; either side may be the newer one.
      reg::History tail(h.begin() + 1, h.end());
      col.add(index++, registry_ghost_case(h, h, n));
      col.add(index++, registry_ghost_case(h, tail, n));
      col.add(index++, registry_ghost_case(tail, h, n));
    }
    break;
  }
  }
  if (rep.failures > 0)
    rep.verdict = "fail";
  else if (rep.inconclusive > 0)
    rep.verdict = "inconclusive";
  return rep;
}

TheoremReport fuzz_bst(const TheoremParams &p, std::size_t opsPerCase) {
  TheoremReport rep;
  rep.name = "BstSequences";
  Collector col(rep, p.seed, rep.name);
  std::size_t n = p.nodes.value_or(16);
  run_cases(col, p.cases.value_or(500), p.seed, rep.name,
            [n, opsPerCase](std::mt19937_64 &rng) -> CaseResult {
              AtomUniverse u = tree_universe();
              HeapState h = random_tree(rng, u, n, 0.2);
              std::set<Key> model = check_inv(u, h).contents;
              const auto &keys = u.endpoints();
              json log = json::array();
              HeapState start = h;
              auto fail = [&](const std::string &why) {
                return failed(why, {{"initial", io::heap_to_json(u, start)},
                                    {"ops", log}});
              };
              for (std::size_t i = 0; i < opsPerCase; ++i) {
                Op op;
                std::uint64_t r = rng() % 6;
                op.kind = r == 0   ? Op::Kind::Insert
                          : r == 1 ? Op::Kind::Delete
                          : r == 2 ? Op::Kind::Contains
                          : r == 3 ? Op::Kind::RemoveSimple
                          : r == 4 ? Op::Kind::RemoveComplex
                                   : Op::Kind::Rotate;
                op.key = keys[rng() % keys.size()];
                op.mirrored = rng() % 2;
                std::uint64_t opSeed = rng();
                log.push_back({{"op", Op::kind_name(op.kind)},
                               {"key", op.key},
                               {"mirrored", op.mirrored},
                               {"seed", opSeed}});
                OpOutcome out = run_op(u, h, op, opSeed);
                bool hit = out.result == OpOutcome::Result::True;
                bool in = model.count(op.key) > 0;
                switch (op.kind) {
                case Op::Kind::Insert:
                  if (hit == in)
                    return fail("insert result disagrees with the model");
                  model.insert(op.key);
                  break;
                case Op::Kind::Delete:
                  if (hit != in)
                    return fail("delete result disagrees with the model");
                  model.erase(op.key);
                  break;
                case Op::Kind::Contains:
                  if (hit != in)
                    return fail("contains result disagrees with the model");
                  break;
                default:
                  break;
                }
                h = std::move(out.heap);
                auto inv = check_inv(u, h);
                if (!inv.ok)
                  return fail("invariant broken: " + inv.violations.front());
                if (inv.contents != model || heap_contents(u, h) != model)
                  return fail("logical contents differ from the model");
              }
              return {};
            });
  if (rep.failures > 0)
    rep.verdict = "fail";
  else if (rep.inconclusive > 0)
    rep.verdict = "inconclusive";
  return rep;
}

} // namespace flowcheck::oracle
