#pragma once

#include "flowcheck/bst.hpp"
#include "flowcheck/errors.hpp"
#include "flowcheck/estimator.hpp"
#include "flowcheck/registry.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace flowcheck::casl {

enum class Verdict { Pass, Fail, Inconclusive };
std::string verdict_name(Verdict v);

/// A state set given by a membership test rather than by enumeration.
template <class S> class SymbolicSet {
public:
  virtual ~SymbolicSet() = default;
  virtual Tri contains(const S &w) const = 0;
  /// Members t for which s * t may be defined; nullopt if unknown.
  virtual std::optional<std::vector<S>> partners(const S &s) const = 0;
  /// The part of \p w a member would occupy, when that split is unique.
  virtual std::optional<S> carve(const S &w) const = 0;
  /// Explicit members; throws Inconclusive past \p cap.
  virtual std::vector<S> materialize(std::size_t cap) const = 0;
  virtual std::string describe() const = 0;
};

/// The separation algebra operations the generic checks need.
template <class S> struct Algebra {
  std::string name;
  S emp;
  std::function<std::optional<S>(const S &, const S &)> star;
  /// The unique t with part * t = w, if any.
  std::function<std::optional<S>(const S &w, const S &part)> residual;
  std::function<std::string(const S &)> show;
};

/// Top, or a union of explicit states and symbolic sets.
template <class S> struct Pred {
  bool top = false;
  std::set<S> states;
  std::vector<std::shared_ptr<const SymbolicSet<S>>> symbolic;

  static Pred Top() {
    Pred p;
    p.top = true;
    return p;
  }
  static Pred of(std::set<S> s) {
    Pred p;
    p.states = std::move(s);
    return p;
  }
  static Pred one(S s) { return of({std::move(s)}); }
  static Pred sym(std::shared_ptr<const SymbolicSet<S>> s) {
    Pred p;
    p.symbolic.push_back(std::move(s));
    return p;
  }

  bool is_finite() const { return !top && symbolic.empty(); }

  Tri contains(const S &w) const {
    if (top || states.count(w))
      return Tri::Yes;
    Tri r = Tri::No;
    for (auto &s : symbolic) {
      Tri t = s->contains(w);
      if (t == Tri::Yes)
        return t;
      if (t == Tri::Unknown)
        r = t;
    }
    return r;
  }

  /// All members; throws Inconclusive past \p cap.
  std::set<S> expand(std::size_t cap) const {
    if (top)
      throw ContractError("cannot enumerate the top predicate");
    std::set<S> out = states;
    for (auto &s : symbolic)
      for (S &m : s->materialize(cap))
        out.insert(std::move(m));
    if (out.size() > cap)
      throw Inconclusive("predicate has more than " + std::to_string(cap) +
                         " states");
    return out;
  }
};

template <class S> Pred<S> join(const Pred<S> &a, const Pred<S> &b) {
  if (a.top || b.top)
    return Pred<S>::Top();
  Pred<S> r = a;
  r.states.insert(b.states.begin(), b.states.end());
  r.symbolic.insert(r.symbolic.end(), b.symbolic.begin(), b.symbolic.end());
  return r;
}

inline Tri tri_or(Tri a, Tri b) {
  if (a == Tri::Yes || b == Tri::Yes)
    return Tri::Yes;
  return a == Tri::Unknown || b == Tri::Unknown ? Tri::Unknown : Tri::No;
}

/// a * b kept lazy; membership splits the candidate state.
template <class S> class StarSet : public SymbolicSet<S> {
public:
  StarSet(Algebra<S> alg, Pred<S> a, Pred<S> b)
      : Alg(std::move(alg)), A(std::move(a)), B(std::move(b)) {}

  Tri contains(const S &w) const override {
    Tri r = Tri::No;
    auto try_split = [&](const S &part, const Pred<S> &other) {
      auto rest = Alg.residual(w, part);
      if (rest)
        r = tri_or(r, other.contains(*rest));
    };
    for (const S &s : A.states)
      try_split(s, B);
    for (const S &t : B.states)
      try_split(t, A);
    for (auto &p : A.symbolic) {
      auto part = p->carve(w);
      if (!part)
        continue;
      Tri in = p->contains(*part);
      if (in == Tri::No)
        continue;
      auto rest = Alg.residual(w, *part);
      if (!rest)
        continue;
      Tri other = B.contains(*rest);
      if (in == Tri::Yes && other == Tri::Yes)
        return Tri::Yes;
      if (other != Tri::No)
        r = tri_or(r, Tri::Unknown);
    }
    return r;
  }
  std::optional<std::vector<S>> partners(const S &) const override {
    return std::nullopt;
  }
  std::optional<S> carve(const S &) const override { return std::nullopt; }
  std::vector<S> materialize(std::size_t cap) const override {
    std::vector<S> out;
    auto as = A.expand(cap), bs = B.expand(cap);
    for (const S &s : as)
      for (const S &t : bs)
        if (auto st = Alg.star(s, t)) {
          out.push_back(*st);
          if (out.size() > cap)
            throw Inconclusive("product exceeds the cap");
        }
    return out;
  }
  std::string describe() const override { return "lazy product"; }

private:
  Algebra<S> Alg;
  Pred<S> A, B;
};

/// { s * t | s in a, t in b, s # t }; Top absorbs.
template <class S>
Pred<S> sep_conj(const Algebra<S> &alg, const Pred<S> &a, const Pred<S> &b) {
  if (a.top || b.top)
    return Pred<S>::Top();
  Pred<S> r;
  bool lazy = !a.symbolic.empty() && !b.symbolic.empty();
  auto add = [&](const S &s, const S &t) {
    if (auto st = alg.star(s, t))
      r.states.insert(*st);
  };
  for (const S &s : a.states)
    for (const S &t : b.states)
      add(s, t);
  for (const S &s : a.states)
    for (auto &sym : b.symbolic) {
      auto ps = sym->partners(s);
      if (!ps) {
        lazy = true;
        break;
      }
      for (const S &t : *ps)
        if (sym->contains(t) == Tri::Yes)
          add(s, t);
    }
  for (const S &t : b.states)
    for (auto &sym : a.symbolic) {
      auto ps = sym->partners(t);
      if (!ps) {
        lazy = true;
        break;
      }
      for (const S &s : *ps)
        if (sym->contains(s) == Tri::Yes)
          add(s, t);
    }
  if (lazy)
    return Pred<S>::sym(std::make_shared<StarSet<S>>(alg, a, b));
  return r;
}

template <class S> struct Command {
  std::string name;
  /// Successor states; nullopt aborts.
  std::function<std::optional<std::vector<S>>(const S &)> run;
};

/// st ::= com | st1 + st2 | st1; st2 | st*
template <class S> struct Program {
  enum class Kind { Com, Seq, Choice, Loop };
  Kind kind = Kind::Com;
  Command<S> com;
  std::shared_ptr<const Program> lhs, rhs;

  static Program atom(Command<S> c) {
    Program p;
    p.com = std::move(c);
    return p;
  }
  static Program seq(Program a, Program b) {
    return binary(Kind::Seq, std::move(a), std::move(b));
  }
  static Program choice(Program a, Program b) {
    return binary(Kind::Choice, std::move(a), std::move(b));
  }
  static Program loop(Program a) {
    Program p;
    p.kind = Kind::Loop;
    p.lhs = std::make_shared<const Program>(std::move(a));
    return p;
  }

private:
  static Program binary(Kind k, Program a, Program b) {
    Program p;
    p.kind = k;
    p.lhs = std::make_shared<const Program>(std::move(a));
    p.rhs = std::make_shared<const Program>(std::move(b));
    return p;
  }
};

struct Caps {
  std::size_t loop = 64;
  std::size_t closure = kDefaultClosureCap;
};

/// Strict in top, distributes over the states of \p a. Throws Inconclusive
/// when a loop does not stabilize within the loop cap.
template <class S>
Pred<S> sem(const Program<S> &st, const Pred<S> &a, const Caps &caps) {
  if (a.top)
    return a;
  switch (st.kind) {
  case Program<S>::Kind::Com: {
    Pred<S> r;
    for (const S &s : a.expand(caps.closure)) {
      auto next = st.com.run(s);
      if (!next)
        return Pred<S>::Top();
      r.states.insert(next->begin(), next->end());
    }
    return r;
  }
  case Program<S>::Kind::Seq:
    return sem(*st.rhs, sem(*st.lhs, a, caps), caps);
  case Program<S>::Kind::Choice:
    return join(sem(*st.lhs, a, caps), sem(*st.rhs, a, caps));
  case Program<S>::Kind::Loop: {
    Pred<S> acc = Pred<S>::of(a.expand(caps.closure));
    Pred<S> frontier = acc;
    for (std::size_t i = 0; i < caps.loop; ++i) {
      Pred<S> next = sem(*st.lhs, frontier, caps);
      if (next.top)
        return next;
      Pred<S> fresh;
      for (const S &s : next.states)
        if (!acc.states.count(s))
          fresh.states.insert(s);
      if (fresh.states.empty())
        return acc;
      acc.states.insert(fresh.states.begin(), fresh.states.end());
      frontier = std::move(fresh);
    }
    throw Inconclusive("loop did not stabilize within " +
                       std::to_string(caps.loop) + " rounds");
  }
  }
  return Pred<S>::Top();
}

template <class S> struct Report {
  Verdict verdict = Verdict::Pass;
  std::optional<S> witness;
  std::string detail;
  bool pass() const { return verdict == Verdict::Pass; }
};

/// post included in b.
template <class S>
Report<S> check_included(const Algebra<S> &alg, const Pred<S> &post,
                         const Pred<S> &b) {
  Report<S> rep;
  if (b.top)
    return rep;
  if (post.top) {
    rep.verdict = Verdict::Fail;
    rep.detail = "the command aborts";
    return rep;
  }
  for (const S &w : post.states) {
    Tri t = b.contains(w);
    if (t == Tri::No) {
      rep.verdict = Verdict::Fail;
      rep.witness = w;
      rep.detail = "post-state " + alg.show(w) + " is not in the postcondition";
      return rep;
    }
    if (t == Tri::Unknown && rep.verdict == Verdict::Pass) {
      rep.verdict = Verdict::Inconclusive;
      rep.witness = w;
      rep.detail = "membership of " + alg.show(w) + " is undetermined";
    }
  }
  return rep;
}

/// {a} st {b}: sem(st)(a) included in b.
template <class S>
Report<S> check_hoare(const Algebra<S> &alg, const Pred<S> &a,
                      const Program<S> &st, const Pred<S> &b,
                      const Caps &caps = {}) {
  try {
    return check_included(alg, sem(st, a, caps), b);
  } catch (const Inconclusive &e) {
    Report<S> rep;
    rep.verdict = Verdict::Inconclusive;
    rep.detail = e.what();
    return rep;
  }
}

/// <c>{a} st {b} holds iff {a * c} st {b * c}.
template <class S>
Report<S> check_casl(const Algebra<S> &alg, const Pred<S> &c,
                     const Pred<S> &a, const Program<S> &st,
                     const Pred<S> &b, const Caps &caps = {}) {
  return check_hoare(alg, sep_conj(alg, a, c), st, sep_conj(alg, b, c), caps);
}

/// [[com]](a * c) included in [[com]]_c(a) * c for every sampled a.
template <class S>
Report<S> check_mediation(
    const Algebra<S> &alg, const Command<S> &com,
    const std::function<Pred<S>(const Pred<S> &)> &contextual,
    const Pred<S> &c, const std::vector<Pred<S>> &samples,
    const Caps &caps = {}) {
  Report<S> agg;
  for (const Pred<S> &a : samples) {
    Report<S> r;
    try {
      Pred<S> lhs = sem(Program<S>::atom(com), sep_conj(alg, a, c), caps);
      r = check_included(alg, lhs, sep_conj(alg, contextual(a), c));
    } catch (const Inconclusive &e) {
      r.verdict = Verdict::Inconclusive;
      r.detail = e.what();
    }
    if (r.verdict == Verdict::Fail)
      return r;
    if (r.verdict == Verdict::Inconclusive)
      agg = r;
  }
  return agg;
}

/// [[com]](a * b) included in [[com]](a) * b for every sampled pair.
template <class S>
Report<S> check_locality(const Algebra<S> &alg, const Command<S> &com,
                         const std::vector<std::pair<S, S>> &pairs) {
  Report<S> agg;
  for (auto &[a, b] : pairs) {
    auto ab = alg.star(a, b);
    if (!ab)
      continue;
    auto ra = com.run(a);
    if (!ra)
      continue;
    auto rab = com.run(*ab);
    Pred<S> rhs = sep_conj(alg, Pred<S>::of({ra->begin(), ra->end()}),
                           Pred<S>::one(b));
    Pred<S> lhs = rab ? Pred<S>::of({rab->begin(), rab->end()})
                      : Pred<S>::Top();
    Report<S> r = check_included(alg, lhs, rhs);
    if (r.verdict == Verdict::Fail) {
      if (!r.witness)
        r.witness = *ab;
      return r;
    }
  }
  return agg;
}

// Concrete algebras ---------------------------------------------------------

Algebra<FlowGraph> flow_algebra(const AtomUniverse &u);
Algebra<HeapState> heap_algebra(const AtomUniverse &u);
Algebra<registry::State> registry_algebra();

/// { s[in'] | s.in <=^Y in' } as a symbolic predicate.
std::shared_ptr<const SymbolicSet<FlowGraph>>
flow_closure(const AtomUniverse &u, FlowGraph base, NodeSet Y, Estimator est);
std::shared_ptr<const SymbolicSet<HeapState>>
heap_closure(const AtomUniverse &u, HeapState base, NodeSet Y, Estimator est);
/// States reachable by spawning searches and upserts.
std::shared_ptr<const SymbolicSet<registry::State>>
registry_closure(registry::ClosurePred pred);

using FlowUpdate = std::function<std::optional<FlowGraph>(const FlowGraph &)>;

/// Physical update that overwrites one edge; nullopt if x is not a node.
FlowUpdate set_edge_update(NodeId x, NodeId y, EdgeFn fn);

/// True iff the transfer function agrees on every inflow below
/// before.inflow. Throws Inconclusive past \p cap.
bool transfer_preserved(const AtomUniverse &u, const FlowGraph &before,
                        const FlowGraph &after, std::size_t cap);

/// Standard semantics: apply the update; abort if it leaves the state or a
/// frame could observe a transfer change.
Command<FlowGraph> flow_command(const AtomUniverse &u, std::string name,
                                FlowUpdate up,
                                std::size_t cap = kDefaultClosureCap);
Command<HeapState> heap_command(const AtomUniverse &u, AtomicStep step,
                                std::size_t cap = kDefaultClosureCap);
/// The field writes alone, without the abort guard.
Command<HeapState> raw_heap_command(AtomicStep step);
Command<registry::State> upsert_command(registry::RKey k, registry::RValue v);

template <class S> struct Contextualized {
  /// The approximate core update rejected the footprint (a' = top).
  bool aborted = false;
  std::optional<S> aPrime;
  /// rho(d), the single ghost step from the context.
  std::optional<S> rhoOfD;
  Pred<S> b, c;
  CtxReport estimate;
  Report<S> theorem;
  /// d is a member of c.
  bool dInC = false;
};

Contextualized<FlowGraph> contextualize_flow(const AtomUniverse &u,
                                             const std::string &name,
                                             const FlowUpdate &up,
                                             const FlowGraph &a,
                                             const FlowGraph &d,
                                             const Estimator &est,
                                             std::size_t cap);
Contextualized<HeapState> contextualize_heap(const AtomUniverse &u,
                                             const AtomicStep &step,
                                             const HeapState &a,
                                             const HeapState &d,
                                             const Estimator &est,
                                             std::size_t cap);
Contextualized<registry::State>
contextualize_registry(const registry::State &a, const registry::State &d,
                       registry::RKey k, registry::RValue v,
                       std::size_t cap);

/// [[com]]_c(a): std semantics for c = emp unless \p general; otherwise the
/// closure of the updated footprint if c is fixed under it, else top.
Pred<FlowGraph> induced_flow(const AtomUniverse &u, const std::string &name,
                             const FlowUpdate &up, const Pred<FlowGraph> &c,
                             const Pred<FlowGraph> &a, const Estimator &est,
                             std::size_t cap, bool general = false);
Pred<HeapState> induced_heap(const AtomUniverse &u, const AtomicStep &step,
                             const Pred<HeapState> &c,
                             const Pred<HeapState> &a, const Estimator &est,
                             std::size_t cap, bool general = false);
Pred<registry::State> induced_registry(registry::RKey k, registry::RValue v,
                                       const Pred<registry::State> &c,
                                       const Pred<registry::State> &a,
                                       std::size_t cap);

} // namespace flowcheck::casl
