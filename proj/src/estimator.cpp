#include "flowcheck/estimator.hpp"
#include "flowcheck/errors.hpp"

#include <sstream>

namespace flowcheck {

namespace {

bool proper_subset_rel(FlowValue m, FlowValue n) {
  return m.is_set() && n.is_set() && (m.bits & ~n.bits) == 0;
}

std::size_t table_size(const AtomUniverse &u) {
  if (u.atom_count() > 12)
    throw Inconclusive("custom estimator tables need at most 12 atoms");
  return 2 + (std::size_t(1) << u.atom_count());
}

} // namespace

Estimator Estimator::complex(const AtomUniverse &u, Key kx, AtomSet K) {
  if (!is_finite(kx) || !u.on_grid(kx))
    throw InputError("complex estimator key " + key_to_string(kx) +
                     " is not on the key grid");
  Estimator e;
  e.kind = Kind::Complex;
  e.kx = kx;
  e.kxAtom = u.atom_of(kx);
  e.K = K;
  return e;
}

Estimator
Estimator::custom(const AtomUniverse &u,
                  const std::function<bool(FlowValue, FlowValue)> &rel) {
  auto values = lattice(u);
  std::size_t n = table_size(u);
  auto t = std::make_shared<std::vector<bool>>(n * n, false);
  for (FlowValue m : values)
    for (FlowValue v : values)
      (*t)[lattice_index(m) * n + lattice_index(v)] = rel(m, v);
  Estimator e;
  e.kind = Kind::Custom;
  e.table = std::move(t);
  e.tableSize = n;
  return e;
}

Estimator Estimator::without_pair(const AtomUniverse &u, FlowValue m,
                                  FlowValue n) const {
  Estimator base = *this;
  Estimator e = custom(u, [&](FlowValue a, FlowValue b) {
    return relates(base, a, b);
  });
  auto t = std::make_shared<std::vector<bool>>(*e.table);
  (*t)[lattice_index(m) * e.tableSize + lattice_index(n)] = false;
  e.table = std::move(t);
  return e;
}

std::string Estimator::name(const AtomUniverse &u) const {
  switch (kind) {
  case Kind::Eq:
    return "eq";
  case Kind::NaturalLeq:
    return "leq";
  case Kind::Simple:
    return "simple";
  case Kind::Complex:
    return "complex(kx=" + key_to_string(kx) + ",K=" + u.format(K) + ")";
  case Kind::Custom:
    return "custom";
  }
  return "?";
}

bool Estimator::operator==(const Estimator &o) const {
  if (kind != o.kind)
    return false;
  if (kind == Kind::Complex)
    return kx == o.kx && K == o.K;
  if (kind == Kind::Custom)
    return tableSize == o.tableSize && *table == *o.table;
  return true;
}

bool relates(const Estimator &est, FlowValue m, FlowValue n) {
  switch (est.kind) {
  case Estimator::Kind::Eq:
    return m == n;
  case Estimator::Kind::NaturalLeq:
    return natural_leq(m, n);
  case Estimator::Kind::Simple:
    return m == n || proper_subset_rel(m, n);
  case Estimator::Kind::Complex:
    if (m == n || proper_subset_rel(m, n))
      return true;
    return m.is_set() && n.is_set() && !((m.bits >> est.kxAtom) & 1) &&
           ((m.bits & ~est.K) & ~n.bits) == 0;
  case Estimator::Kind::Custom: {
    std::size_t i = lattice_index(m), j = lattice_index(n);
    if (i >= est.tableSize || j >= est.tableSize)
      return false;
    return (*est.table)[i * est.tableSize + j];
  }
  }
  return false;
}

AxiomReport check_estimator_axioms(const Estimator &est,
                                   const AtomUniverse &u) {
  auto values = lattice(u);
  std::size_t n = values.size();
  std::vector<char> R(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      R[i * n + j] = relates(est, values[i], values[j]);
  auto rel = [&](FlowValue a, FlowValue b) {
    return R[lattice_index(a) * n + lattice_index(b)] != 0;
  };
  AxiomReport rep;
  auto fail = [&](std::string axiom, std::vector<FlowValue> w,
                  std::string detail) {
    rep.pass = false;
    rep.axiom = std::move(axiom);
    rep.witness = std::move(w);
    rep.detail = std::move(detail);
    return rep;
  };
  for (std::size_t i = 0; i < n; ++i)
    if (!R[i * n + i])
      return fail("E1-reflexive", {values[i]},
                  format_value(u, values[i]) + " is not related to itself");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!R[i * n + j])
        continue;
      for (std::size_t k = 0; k < n; ++k)
        if (R[j * n + k] && !R[i * n + k])
          return fail("E1-transitive", {values[i], values[j], values[k]},
                      format_value(u, values[i]) + " ~ " +
                          format_value(u, values[j]) + " ~ " +
                          format_value(u, values[k]) +
                          " but not first ~ last");
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!R[i * n + j])
        continue;
      for (FlowValue o : values)
        if (!rel(oplus(values[i], o), oplus(values[j], o)))
          return fail("E2", {values[i], values[j], o},
                      "adding " + format_value(u, o) +
                          " breaks the relation");
    }
  std::vector<EdgeFn> fns{EdgeFn::const_bot(), EdgeFn::const_top()};
  for (AtomSet m = 0; m <= u.full(); ++m) {
    fns.push_back(EdgeFn::filter(m));
    if (m == u.full())
      break;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!R[i * n + j])
        continue;
      for (const EdgeFn &f : fns)
        if (!rel(f.apply(values[i]), f.apply(values[j])))
          return fail("E4", {values[i], values[j]},
                      "edge function " +
                          std::string(f.kind == EdgeFn::Kind::Filter
                                          ? "filter " + u.format(f.mask)
                                          : "const") +
                          " is not monotone");
    }
  rep.detail = "E3 holds: every ascending chain in the finite lattice is "
               "eventually constant";
  return rep;
}

bool for_each_inflow_below(const AtomUniverse &u, const Inflow &in,
                           std::size_t cap,
                           const std::function<bool(const Inflow &)> &fn) {
  std::vector<Edge> keys;
  std::vector<std::vector<FlowValue>> choices;
  std::size_t total = 1;
  for (auto &[e, v] : in) {
    if (v.is_top() && u.atom_count() > 20)
      return false;
    keys.push_back(e);
    choices.push_back(down_set(v, u));
    total *= choices.back().size();
    if (total > cap)
      return false;
  }
  std::vector<std::size_t> idx(keys.size(), 0);
  while (true) {
    Inflow cur;
    for (std::size_t i = 0; i < keys.size(); ++i)
      set_inflow_entry(cur, keys[i].first, keys[i].second,
                       choices[i][idx[i]]);
    if (!fn(cur))
      return true;
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < choices[i].size())
        break;
      idx[i] = 0;
    }
    if (i == idx.size())
      return true;
  }
}

CtxReport ctx_estimate(const AtomUniverse &u, const FlowGraph &s,
                       const FlowGraph &t, const Estimator &est,
                       std::size_t cap) {
  CtxReport rep;
  if (s.nodes != t.nodes) {
    rep.verdict = CtxReport::Verdict::Fails;
    rep.reason = "node sets differ";
    return rep;
  }
  if (s.inflow != t.inflow) {
    rep.verdict = CtxReport::Verdict::Fails;
    rep.reason = "inflows differ";
    return rep;
  }
  NodeSet targets = s.external_targets();
  NodeSet tt = t.external_targets();
  targets.insert(tt.begin(), tt.end());
  bool complete = for_each_inflow_below(u, s.inflow, cap, [&](const Inflow &in) {
    auto a = transfer_all(s, in), b = transfer_all(t, in);
    for (NodeId y : targets) {
      FlowValue va = a.count(y) ? a.at(y) : FlowValue::bot();
      FlowValue vb = b.count(y) ? b.at(y) : FlowValue::bot();
      if (!relates(est, va, vb)) {
        rep.verdict = CtxReport::Verdict::Fails;
        rep.reason = "outflow to " + std::to_string(y) + " changes from " +
                     format_value(u, va) + " to " + format_value(u, vb);
        rep.witnessIn = in;
        rep.witnessNode = y;
        rep.lhs = va;
        rep.rhs = vb;
        return false;
      }
    }
    return true;
  });
  if (!complete) {
    rep.verdict = CtxReport::Verdict::Inconclusive;
    rep.reason = "inflow down-set exceeds the cap of " + std::to_string(cap);
  }
  return rep;
}

bool inflow_rel(const Inflow &in1, const Inflow &in2, const NodeSet &X,
                const NodeSet &Y, const Estimator &est) {
  for (auto &[e, v] : in1)
    if (!Y.count(e.first)) {
      auto it = in2.find(e);
      if (it == in2.end() || it->second != v)
        return false;
    }
  for (auto &[e, v] : in2)
    if (!Y.count(e.first) && !in1.count(e))
      return false;
  for (NodeId x : X) {
    FlowValue a = FlowValue::bot(), b = FlowValue::bot();
    for (auto &[e, v] : in1)
      if (e.second == x && Y.count(e.first))
        a = oplus(a, v);
    for (auto &[e, v] : in2)
      if (e.second == x && Y.count(e.first))
        b = oplus(b, v);
    if (!relates(est, a, b))
      return false;
  }
  return true;
}

bool Closure::contains(const FlowGraph &g) const {
  if (g.nodes != base.nodes || g.edges != base.edges)
    return false;
  for (auto &[e, v] : g.inflow)
    if (g.nodes.count(e.first) || !g.nodes.count(e.second))
      return false;
  return inflow_rel(base.inflow, g.inflow, base.nodes, Y, est);
}

std::vector<FlowGraph> Closure::materialize(const AtomUniverse &u,
                                            std::size_t cap) const {
  // Without target nodes there is no inflow to vary.
  if (base.nodes.empty())
    return {base};
  std::vector<NodeId> sources;
  for (NodeId y : Y)
    if (!base.nodes.count(y))
      sources.push_back(y);
  Inflow fixed;
  for (auto &[e, v] : base.inflow)
    if (!Y.count(e.first))
      fixed.emplace(e, v);
  auto values = lattice(u);
  std::size_t perNode = 1;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    perNode *= values.size();
    if (perNode > cap * values.size())
      throw Inconclusive("closure materialization exceeds the cap");
  }
  // Per target node: every assignment of source values whose sum relates.
  std::vector<NodeId> targets(base.nodes.begin(), base.nodes.end());
  std::vector<std::vector<std::vector<FlowValue>>> options(targets.size());
  std::size_t total = 1;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    FlowValue old = FlowValue::bot();
    for (NodeId y : sources)
      old = oplus(old, base.in(y, targets[t]));
    std::vector<std::size_t> idx(sources.size(), 0);
    while (true) {
      FlowValue sum = FlowValue::bot();
      std::vector<FlowValue> pick;
      for (std::size_t i = 0; i < sources.size(); ++i) {
        pick.push_back(values[idx[i]]);
        sum = oplus(sum, values[idx[i]]);
      }
      if (relates(est, old, sum))
        options[t].push_back(std::move(pick));
      std::size_t i = 0;
      for (; i < idx.size(); ++i) {
        if (++idx[i] < values.size())
          break;
        idx[i] = 0;
      }
      if (i == idx.size())
        break;
    }
    total *= options[t].size();
    if (total > cap)
      throw Inconclusive("closure materialization exceeds the cap of " +
                         std::to_string(cap));
  }
  std::vector<FlowGraph> out;
  if (total == 0)
    return out;
  std::vector<std::size_t> idx(targets.size(), 0);
  while (true) {
    Inflow in = fixed;
    for (std::size_t t = 0; t < targets.size(); ++t)
      for (std::size_t i = 0; i < sources.size(); ++i)
        set_inflow_entry(in, sources[i], targets[t], options[t][idx[t]][i]);
    out.push_back(base.with_inflow(in));
    std::size_t t = 0;
    for (; t < idx.size(); ++t) {
      if (++idx[t] < options[t].size())
        break;
      idx[t] = 0;
    }
    if (t == idx.size())
      break;
  }
  return out;
}

std::optional<FlowGraph> Closure::partner_for(const FlowGraph &s) const {
  auto fs = compute_flow(s);
  Inflow in;
  for (auto &[e, v] : base.inflow)
    if (!s.nodes.count(e.first))
      in.emplace(e, v);
  for (auto &[e, fn] : s.edges)
    if (base.nodes.count(e.second))
      set_inflow_entry(in, e.first, e.second, fn.apply(fs.at(e.first)));
  FlowGraph g = base.with_inflow(in);
  if (!contains(g))
    return std::nullopt;
  return g;
}

std::optional<std::vector<FlowGraph>>
approx_physical_update(const AtomUniverse &u,
                       const std::optional<std::vector<FlowGraph>> &up,
                       const FlowGraph &s, const Estimator &est,
                       std::size_t cap) {
  if (!up)
    return std::nullopt;
  for (const FlowGraph &t : *up)
    if (!ctx_estimate(u, s, t, est, cap).holds())
      return std::nullopt;
  return up;
}

std::optional<Closure> approx_ghost_mult(const AtomUniverse &u,
                                         const FlowGraph &t,
                                         const FlowGraph &ctx,
                                         const Estimator &est,
                                         const std::vector<FlowGraph> &recorded,
                                         std::size_t cap) {
  for (const FlowGraph &w : recorded) {
    bool viaT = w.nodes == t.nodes && star(w, ctx).defined() &&
                ctx_estimate(u, w, t, est, cap).holds();
    bool viaU = !viaT && w.nodes == ctx.nodes && star(w, t).defined() &&
                ctx_estimate(u, w, ctx, est, cap).holds();
    if (viaT || viaU)
      return Closure{ctx, t.nodes, est};
  }
  return std::nullopt;
}

bool in_approx_product(const Closure &forT, const Closure &forU,
                       const FlowGraph &w) {
  const NodeSet &X1 = forT.base.nodes, &X2 = forU.base.nodes;
  if (X1.size() + X2.size() != w.nodes.size())
    return false;
  for (NodeId x : w.nodes)
    if (!X1.count(x) && !X2.count(x))
      return false;
  auto [w1, w2] = unique_decompose(w, X1, X2);
  if (!forT.contains(w1) || !forU.contains(w2))
    return false;
  auto r = star(w1, w2);
  return r.defined() && *r.graph == w;
}

} // namespace flowcheck
