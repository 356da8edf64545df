#include "flowcheck/casl.hpp"

#include <sstream>

namespace flowcheck::casl {

std::string verdict_name(Verdict v) {
  switch (v) {
  case Verdict::Pass:
    return "pass";
  case Verdict::Fail:
    return "fail";
  case Verdict::Inconclusive:
    return "inconclusive";
  }
  return "?";
}

namespace {

std::string show_inflow(const AtomUniverse &u, const Inflow &in) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (auto &[e, v] : in) {
    if (!first)
      os << ", ";
    first = false;
    os << '(' << e.first << "->" << e.second << ")=" << format_value(u, v);
  }
  os << '}';
  return os.str();
}

std::string show_nodes(const NodeSet &X) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (NodeId x : X) {
    if (!first)
      os << ',';
    first = false;
    os << x;
  }
  os << '}';
  return os.str();
}

bool includes(const NodeSet &big, const NodeSet &small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

NodeSet minus(const NodeSet &a, const NodeSet &b) {
  NodeSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(r, r.end()));
  return r;
}

// Uniform access to flow graphs and heaps, which differ only in how the
// graph is obtained.
struct GraphView {
  using State = FlowGraph;
  static FlowGraph graph(const AtomUniverse &, const FlowGraph &g) {
    return g;
  }
  static FlowGraph with_inflow(const FlowGraph &g, const Inflow &in) {
    return g.with_inflow(in);
  }
  static NodeSet nodes(const FlowGraph &g) { return g.nodes; }
  static FlowGraph restrict_to(const AtomUniverse &, const FlowGraph &g,
                               const NodeSet &Y) {
    return restrict(g, Y);
  }
  static bool same_shape(const FlowGraph &a, const FlowGraph &b) {
    return a.nodes == b.nodes && a.edges == b.edges;
  }
  static std::optional<FlowGraph> star(const AtomUniverse &,
                                       const FlowGraph &a,
                                       const FlowGraph &b) {
    return flowcheck::star(a, b).graph;
  }
  static std::string show(const AtomUniverse &u, const FlowGraph &g) {
    return "graph" + show_nodes(g.nodes) + " in " + show_inflow(u, g.inflow);
  }
};

struct HeapView {
  using State = HeapState;
  static FlowGraph graph(const AtomUniverse &u, const HeapState &h) {
    return derive_flowgraph(u, h);
  }
  static HeapState with_inflow(const HeapState &h, const Inflow &in) {
    return heap_with_inflow(h, in);
  }
  static NodeSet nodes(const HeapState &h) { return h.ids(); }
  static HeapState restrict_to(const AtomUniverse &u, const HeapState &h,
                               const NodeSet &Y) {
    return heap_restrict(u, h, Y);
  }
  static bool same_shape(const HeapState &a, const HeapState &b) {
    return a.root == b.root && a.nodes == b.nodes;
  }
  static std::optional<HeapState> star(const AtomUniverse &u,
                                       const HeapState &a,
                                       const HeapState &b) {
    return heap_star(u, a, b).heap;
  }
  static std::string show(const AtomUniverse &u, const HeapState &h) {
    return "heap" + show_nodes(h.ids()) + " in " + show_inflow(u, h.inflow);
  }
};

template <class V> class InflowClosure : public SymbolicSet<typename V::State> {
public:
  using State = typename V::State;

  InflowClosure(AtomUniverse u, State base, NodeSet Y, Estimator est)
      : U(std::move(u)), Base(std::move(base)),
        Cl{V::graph(U, Base), std::move(Y), std::move(est)} {}

  Tri contains(const State &w) const override {
    if (!V::same_shape(Base, w))
      return Tri::No;
    return Cl.contains(V::graph(U, w)) ? Tri::Yes : Tri::No;
  }
  std::optional<std::vector<State>> partners(const State &s) const override {
    auto g = Cl.partner_for(V::graph(U, s));
    if (!g)
      return std::vector<State>{};
    return std::vector<State>{V::with_inflow(Base, g->inflow)};
  }
  std::optional<State> carve(const State &w) const override {
    NodeSet mine = V::nodes(Base);
    if (!includes(V::nodes(w), mine))
      return std::nullopt;
    return V::restrict_to(U, w, mine);
  }
  std::vector<State> materialize(std::size_t cap) const override {
    std::vector<State> out;
    for (const FlowGraph &g : Cl.materialize(U, cap))
      out.push_back(V::with_inflow(Base, g.inflow));
    return out;
  }
  std::string describe() const override {
    return "closure of " + show_nodes(V::nodes(Base)) + " under inflow from " +
           show_nodes(Cl.Y) + " wrt " + Cl.est.name(U);
  }

  const State &base() const { return Base; }
  const Closure &closure() const { return Cl; }

private:
  AtomUniverse U;
  State Base;
  Closure Cl;
};

template <class V>
Algebra<typename V::State> view_algebra(const AtomUniverse &u,
                                        std::string name,
                                        typename V::State emp) {
  using State = typename V::State;
  Algebra<State> alg;
  alg.name = std::move(name);
  alg.emp = std::move(emp);
  alg.star = [u](const State &a, const State &b) { return V::star(u, a, b); };
  alg.residual = [u](const State &w,
                     const State &part) -> std::optional<State> {
    NodeSet wn = V::nodes(w), pn = V::nodes(part);
    if (!includes(wn, pn))
      return std::nullopt;
    State rest = V::restrict_to(u, w, minus(wn, pn));
    auto r = V::star(u, part, rest);
    if (!r || !(*r == w))
      return std::nullopt;
    return rest;
  };
  alg.show = [u](const State &s) { return V::show(u, s); };
  return alg;
}

/// Aborts unless every inflow below the recorded one yields the same
/// outflow before and after.
bool transfer_guard(const AtomUniverse &u, const FlowGraph &before,
                    const FlowGraph &after, std::size_t cap) {
  return transfer_preserved(u, before, after, cap);
}

template <class V> struct StepFns {
  using State = typename V::State;
  Command<State> com;
  /// The footprint extended with anything the command allocates.
  std::function<std::optional<State>(const State &)> prepare;
  /// The physical update on the prepared footprint.
  std::function<std::optional<State>(const State &)> up;
};

template <class V>
Contextualized<typename V::State>
contextualize_impl(const AtomUniverse &u, const Algebra<typename V::State> &alg,
                   const StepFns<V> &fns, const typename V::State &a,
                   const typename V::State &d, const Estimator &est,
                   std::size_t cap) {
  using State = typename V::State;
  Contextualized<State> out;
  auto abort_with = [&](std::string why) {
    out.aborted = true;
    out.b = out.c = Pred<State>::Top();
    out.theorem.detail = std::move(why);
    return out;
  };
  auto s = fns.prepare(a);
  if (!s)
    return abort_with("allocation clashes with the footprint");
  auto t = fns.up(*s);
  if (!t)
    return abort_with("the command writes outside the footprint");
  out.estimate = ctx_estimate(u, V::graph(u, *s), V::graph(u, *t), est, cap);
  if (out.estimate.verdict == CtxReport::Verdict::Inconclusive) {
    out.theorem.verdict = Verdict::Inconclusive;
    out.theorem.detail = out.estimate.reason;
    return out;
  }
  if (!out.estimate.holds())
    return abort_with("approximate update is top: " + out.estimate.reason);
  out.aPrime = *t;

  auto c = std::make_shared<InflowClosure<V>>(u, d, V::nodes(*t), est);
  out.c = Pred<State>::sym(c);
  out.dInC = c->contains(d) == Tri::Yes;
  if (!V::star(u, *s, d)) {
    out.b = Pred<State>::Top();
  } else {
    out.b = Pred<State>::sym(
        std::make_shared<InflowClosure<V>>(u, *t, V::nodes(d), est));
  }
  Caps caps;
  caps.closure = cap;
  out.theorem = check_casl(alg, out.c, Pred<State>::one(a),
                           Program<State>::atom(fns.com), out.b, caps);
  if (out.theorem.pass() && !out.dInC) {
    out.theorem.verdict = Verdict::Fail;
    out.theorem.detail = "the context does not contain d";
  }
  return out;
}

template <class V>
Pred<typename V::State>
induced_impl(const AtomUniverse &u, const Algebra<typename V::State> &alg,
             const StepFns<V> &fns, const Pred<typename V::State> &c,
             const Pred<typename V::State> &a, const Estimator &est,
             std::size_t cap, bool general) {
  using State = typename V::State;
  Caps caps;
  caps.closure = cap;
  if (!general && c.is_finite() && c.states.size() == 1 &&
      *c.states.begin() == alg.emp)
    return sem(Program<State>::atom(fns.com), a, caps);
  if (c.top || a.top)
    return Pred<State>::Top();
  Pred<State> result;
  for (const State &s0 : a.expand(cap)) {
    auto s = fns.prepare(s0);
    if (!s)
      return Pred<State>::Top();
    auto t = fns.up(*s);
    if (!t)
      return Pred<State>::Top();
    auto est_rep = ctx_estimate(u, V::graph(u, *s), V::graph(u, *t), est, cap);
    if (est_rep.verdict == CtxReport::Verdict::Inconclusive)
      throw Inconclusive(est_rep.reason);
    if (!est_rep.holds())
      return Pred<State>::Top();
    NodeSet Y = V::nodes(*t);
    NodeSet cnodes;
    bool witness = false;
    if (c.is_finite()) {
      bool first = true;
      for (const State &m : c.states) {
        NodeSet mn = V::nodes(m);
        if (!first && mn != cnodes)
          return Pred<State>::Top();
        cnodes = mn;
        first = false;
        InflowClosure<V> cl(u, m, Y, est);
        for (const State &x : cl.materialize(cap))
          if (!c.states.count(x))
            return Pred<State>::Top();
        if (V::star(u, *s, m))
          witness = true;
      }
    } else if (c.states.empty() && c.symbolic.size() == 1) {
      auto *cl = dynamic_cast<const InflowClosure<V> *>(c.symbolic[0].get());
      if (!cl || !(cl->closure().est == est) || cl->closure().Y != Y)
        return Pred<State>::Top();
      cnodes = V::nodes(cl->base());
      auto ps = cl->partners(*s);
      for (const State &p : *ps)
        if (V::star(u, *s, p))
          witness = true;
    } else {
      return Pred<State>::Top();
    }
    if (!witness)
      return Pred<State>::Top();
    auto b = std::make_shared<InflowClosure<V>>(u, *t, cnodes, est);
    try {
      for (State &m : b->materialize(cap))
        result.states.insert(std::move(m));
    } catch (const Inconclusive &) {
      result.symbolic.push_back(b);
    }
  }
  return result;
}

StepFns<GraphView> graph_fns(const AtomUniverse &u, const std::string &name,
                             const FlowUpdate &up, std::size_t cap) {
  StepFns<GraphView> f;
  f.com = flow_command(u, name, up, cap);
  f.prepare = [](const FlowGraph &g) { return std::optional<FlowGraph>(g); };
  f.up = up;
  return f;
}

StepFns<HeapView> heap_fns(const AtomUniverse &u, const AtomicStep &step,
                           std::size_t cap) {
  StepFns<HeapView> f;
  f.com = heap_command(u, step, cap);
  f.prepare = [step](const HeapState &h) -> std::optional<HeapState> {
    if (!step.alloc)
      return h;
    if (h.nodes.count(step.alloc->first))
      return std::nullopt;
    HeapState r = h;
    r.nodes.emplace(step.alloc->first, step.alloc->second);
    return r;
  };
  AtomicStep writes = step;
  writes.alloc.reset();
  f.up = [writes](const HeapState &h) { return apply_step(h, writes); };
  return f;
}

} // namespace

Algebra<FlowGraph> flow_algebra(const AtomUniverse &u) {
  return view_algebra<GraphView>(u, "flow", FlowGraph{});
}

Algebra<HeapState> heap_algebra(const AtomUniverse &u) {
  return view_algebra<HeapView>(u, "bst", HeapState{});
}

Algebra<registry::State> registry_algebra() {
  using registry::State;
  Algebra<State> alg;
  alg.name = "registry";
  alg.star = [](const State &a, const State &b) {
    return registry::star(a, b).state;
  };
  alg.residual = [](const State &w,
                    const State &part) -> std::optional<State> {
    if (w.history != part.history)
      return std::nullopt;
    State rest{w.history, {}};
    for (auto &[tid, st] : w.registry) {
      auto it = part.registry.find(tid);
      if (it == part.registry.end()) {
        rest.registry.emplace(tid, st);
      } else if (!(it->second == st)) {
        if (it->second.tag != registry::Tag::SLT)
          return std::nullopt;
        rest.registry.emplace(tid, st);
      }
    }
    auto r = registry::star(part, rest);
    if (!r.defined() || !(*r.state == w))
      return std::nullopt;
    return rest;
  };
  alg.show = [](const State &s) { return registry::format_state(s); };
  return alg;
}

std::shared_ptr<const SymbolicSet<FlowGraph>>
flow_closure(const AtomUniverse &u, FlowGraph base, NodeSet Y, Estimator est) {
  return std::make_shared<InflowClosure<GraphView>>(u, std::move(base),
                                                    std::move(Y), std::move(est));
}

std::shared_ptr<const SymbolicSet<HeapState>>
heap_closure(const AtomUniverse &u, HeapState base, NodeSet Y, Estimator est) {
  return std::make_shared<InflowClosure<HeapView>>(u, std::move(base),
                                                   std::move(Y), std::move(est));
}

namespace {

class RegistryClosure : public SymbolicSet<registry::State> {
public:
  explicit RegistryClosure(registry::ClosurePred p) : P(std::move(p)) {}
  Tri contains(const registry::State &w) const override {
    return P.contains(w);
  }
  std::optional<std::vector<registry::State>>
  partners(const registry::State &) const override {
    return std::nullopt;
  }
  std::optional<registry::State> carve(const registry::State &) const override {
    return std::nullopt;
  }
  std::vector<registry::State> materialize(std::size_t cap) const override {
    auto all = P.explore();
    if (all.size() > cap)
      throw Inconclusive("registry closure exceeds the cap");
    return {all.begin(), all.end()};
  }
  std::string describe() const override {
    return "upward closure of " + registry::format_state(P.base);
  }

private:
  registry::ClosurePred P;
};

} // namespace

std::shared_ptr<const SymbolicSet<registry::State>>
registry_closure(registry::ClosurePred pred) {
  return std::make_shared<RegistryClosure>(std::move(pred));
}

FlowUpdate set_edge_update(NodeId x, NodeId y, EdgeFn fn) {
  return [=](const FlowGraph &g) -> std::optional<FlowGraph> {
    if (!g.nodes.count(x))
      return std::nullopt;
    FlowGraph r = g;
    r.set_edge(x, y, fn);
    return r;
  };
}

bool transfer_preserved(const AtomUniverse &u, const FlowGraph &before,
                        const FlowGraph &after, std::size_t cap) {
  NodeSet targets = before.external_targets();
  NodeSet more = after.external_targets();
  targets.insert(more.begin(), more.end());
  bool same = true;
  bool complete =
      for_each_inflow_below(u, before.inflow, cap, [&](const Inflow &in) {
        auto x = transfer_all(before, in), y = transfer_all(after, in);
        for (NodeId t : targets) {
          FlowValue vx = x.count(t) ? x.at(t) : FlowValue::bot();
          FlowValue vy = y.count(t) ? y.at(t) : FlowValue::bot();
          if (vx != vy) {
            same = false;
            return false;
          }
        }
        return true;
      });
  if (!complete && same)
    throw Inconclusive("inflow down-set exceeds the cap of " +
                       std::to_string(cap));
  return same;
}

Command<FlowGraph> flow_command(const AtomUniverse &u, std::string name,
                                FlowUpdate up, std::size_t cap) {
  Command<FlowGraph> c;
  c.name = std::move(name);
  c.run = [u, up, cap](const FlowGraph &g)
      -> std::optional<std::vector<FlowGraph>> {
    auto t = up(g);
    if (!t || !transfer_guard(u, g, *t, cap))
      return std::nullopt;
    return std::vector<FlowGraph>{*t};
  };
  return c;
}

Command<HeapState> heap_command(const AtomUniverse &u, AtomicStep step,
                                std::size_t cap) {
  Command<HeapState> c;
  c.name = step.label;
  c.run = [u, step, cap](const HeapState &h)
      -> std::optional<std::vector<HeapState>> {
    if (step.alloc && h.nodes.count(step.alloc->first))
      return std::nullopt;
    auto t = apply_step(h, step);
    if (!t ||
        !transfer_guard(u, derive_flowgraph(u, h), derive_flowgraph(u, *t),
                        cap))
      return std::nullopt;
    return std::vector<HeapState>{*t};
  };
  return c;
}

Command<HeapState> raw_heap_command(AtomicStep step) {
  Command<HeapState> c;
  c.name = step.label + " (unguarded)";
  c.run = [step](const HeapState &h) -> std::optional<std::vector<HeapState>> {
    if (step.alloc && h.nodes.count(step.alloc->first))
      return std::nullopt;
    auto t = apply_step(h, step);
    if (!t)
      return std::nullopt;
    return std::vector<HeapState>{*t};
  };
  return c;
}

Command<registry::State> upsert_command(registry::RKey k, registry::RValue v) {
  Command<registry::State> c;
  c.name = "upsert";
  c.run = [k, v](const registry::State &s) {
    return std::optional<std::vector<registry::State>>(
        std::vector<registry::State>{registry::upsert(s, k, v)});
  };
  return c;
}

Contextualized<FlowGraph> contextualize_flow(const AtomUniverse &u,
                                             const std::string &name,
                                             const FlowUpdate &up,
                                             const FlowGraph &a,
                                             const FlowGraph &d,
                                             const Estimator &est,
                                             std::size_t cap) {
  return contextualize_impl<GraphView>(u, flow_algebra(u),
                                       graph_fns(u, name, up, cap), a, d, est,
                                       cap);
}

Contextualized<HeapState> contextualize_heap(const AtomUniverse &u,
                                             const AtomicStep &step,
                                             const HeapState &a,
                                             const HeapState &d,
                                             const Estimator &est,
                                             std::size_t cap) {
  return contextualize_impl<HeapView>(u, heap_algebra(u),
                                      heap_fns(u, step, cap), a, d, est, cap);
}

Contextualized<registry::State>
contextualize_registry(const registry::State &a, const registry::State &d,
                       registry::RKey k, registry::RValue v,
                       std::size_t cap) {
  using registry::State;
  Contextualized<State> out;
  State ap = registry::upsert(a, k, v);
  out.aPrime = ap;
  auto rho = [&](const State &x) { return registry::ghost_family(ap, x); };
  out.rhoOfD = rho(d);
  std::set<State> c{d};
  std::vector<State> work{d};
  while (!work.empty()) {
    State x = work.back();
    work.pop_back();
    if (auto y = rho(x); y && c.insert(*y).second) {
      if (c.size() > cap) {
        out.theorem.verdict = Verdict::Inconclusive;
        out.theorem.detail = "context closure exceeds the cap";
        return out;
      }
      work.push_back(*y);
    }
  }
  std::set<State> b;
  for (const State &x : c)
    if (auto y = registry::ghost_family(x, ap))
      b.insert(*y);
  out.c = Pred<State>::of(c);
  out.b = Pred<State>::of(b);
  out.dInC = true;
  Caps caps;
  caps.closure = cap;
  out.theorem = check_casl(registry_algebra(), out.c, Pred<State>::one(a),
                           Program<State>::atom(upsert_command(k, v)), out.b,
                           caps);
  return out;
}

Pred<FlowGraph> induced_flow(const AtomUniverse &u, const std::string &name,
                             const FlowUpdate &up, const Pred<FlowGraph> &c,
                             const Pred<FlowGraph> &a, const Estimator &est,
                             std::size_t cap, bool general) {
  return induced_impl<GraphView>(u, flow_algebra(u),
                                 graph_fns(u, name, up, cap), c, a, est, cap,
                                 general);
}

Pred<HeapState> induced_heap(const AtomUniverse &u, const AtomicStep &step,
                             const Pred<HeapState> &c,
                             const Pred<HeapState> &a, const Estimator &est,
                             std::size_t cap, bool general) {
  return induced_impl<HeapView>(u, heap_algebra(u), heap_fns(u, step, cap), c,
                                a, est, cap, general);
}

Pred<registry::State> induced_registry(registry::RKey k, registry::RValue v,
                                       const Pred<registry::State> &c,
                                       const Pred<registry::State> &a,
                                       std::size_t cap) {
  using registry::State;
  if (c.top || a.top)
    return Pred<State>::Top();
  auto as = a.expand(cap);
  auto cs = c.expand(cap);
  bool empCtx = true;
  for (const State &x : cs)
    if (!x.registry.empty())
      empCtx = false;
  Pred<State> out;
  if (empCtx) {
    for (const State &s : as)
      out.states.insert(registry::upsert(s, k, v));
    return out;
  }
  for (const State &s : as) {
    State ap = registry::upsert(s, k, v);
    std::set<State> image;
    for (const State &x : cs)
      if (auto y = registry::ghost_family(ap, x))
        image.insert(*y);
    if (image != cs)
      return Pred<State>::Top();
    for (const State &x : cs)
      if (auto y = registry::ghost_family(x, ap))
        out.states.insert(*y);
  }
  return out;
}

} // namespace flowcheck::casl
