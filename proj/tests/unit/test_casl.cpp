#include "flowcheck/casl.hpp"

#include <doctest.h>

using namespace flowcheck;
using namespace flowcheck::casl;

namespace {

/// 1 -> 2 -> 3 with inflow (-inf,inf) into 1; 2 filters to (-inf,5).
struct Chain {
  AtomUniverse u{{5, 10}};
  FlowGraph g;
  Chain() {
    for (NodeId x : {1, 2, 3})
      g.add_node(x);
    g.set_edge(1, 2, EdgeFn::filter(u.interval(NegInf, 10, true, true)));
    g.set_edge(2, 3, EdgeFn::filter(u.interval(NegInf, 5, true, true)));
    g.set_inflow(100, 1,
                 FlowValue::set(u.interval(NegInf, PosInf, true, true)));
  }
  FlowGraph a() const { return restrict(g, {2}); }
  FlowGraph d() const { return restrict(g, {1, 3}); }
  FlowUpdate widen() const {
    return set_edge_update(
        2, 3, EdgeFn::filter(u.interval(NegInf, 10, true, true)));
  }
};

using RState = registry::State;

Command<RState> counter() {
  Command<RState> c;
  c.name = "count";
  c.run = [](const RState &s) {
    return std::optional<std::vector<RState>>(std::vector<RState>{
        registry::upsert(s, 1, static_cast<registry::RValue>(s.history.size()))});
  };
  return c;
}

/// Alternates between the empty history and [(1,1)].
Command<RState> toggle() {
  Command<RState> c;
  c.name = "toggle";
  c.run = [](const RState &s) {
    RState t;
    if (s.history.empty())
      t.history = {{1, 1}};
    return std::optional<std::vector<RState>>(std::vector<RState>{t});
  };
  return c;
}

} // namespace

TEST_CASE("separating conjunction of explicit predicates") {
  Chain c;
  auto alg = flow_algebra(c.u);
  auto p = sep_conj(alg, Pred<FlowGraph>::one(c.a()), Pred<FlowGraph>::one(c.d()));
  REQUIRE(p.is_finite());
  CHECK(p.states == std::set<FlowGraph>{c.g});
  auto none = sep_conj(alg, Pred<FlowGraph>::one(c.a()), Pred<FlowGraph>::one(c.a()));
  CHECK(none.states.empty());
  CHECK(sep_conj(alg, Pred<FlowGraph>::Top(), p).top);
  CHECK(alg.residual(c.g, c.a()) == c.d());
}

TEST_CASE("a lazy product answers membership by splitting") {
  Chain c;
  auto alg = flow_algebra(c.u);
  auto cl = flow_closure(c.u, c.d(), {2}, Estimator::eq());
  StarSet<FlowGraph> s(alg, Pred<FlowGraph>::one(c.a()), Pred<FlowGraph>::sym(cl));
  CHECK(s.contains(c.g) == Tri::Yes);
  FlowGraph other = c.g;
  other.set_edge(1, 3, EdgeFn::const_top());
  CHECK(s.contains(other) != Tri::Yes);
}

TEST_CASE("widening an edge changes what the frame sees") {
  Chain c;
  auto com = flow_command(c.u, "widen", c.widen());
  auto alone = sem(Program<FlowGraph>::atom(com), Pred<FlowGraph>::one(c.a()), {});
  CHECK(alone.top);
  auto whole = sem(Program<FlowGraph>::atom(com), Pred<FlowGraph>::one(c.g), {});
  CHECK_FALSE(whole.top);
  CHECK_FALSE(transfer_preserved(c.u, c.a(), *c.widen()(c.a()), 4096));
}

TEST_CASE("contextualizing the widening") {
  Chain c;
  auto eq = contextualize_flow(c.u, "widen", c.widen(), c.a(), c.d(),
                               Estimator::eq(), 4096);
  CHECK(eq.aborted);
  CHECK(eq.theorem.detail.find("outflow to 3") != std::string::npos);
  CHECK(eq.b.top);

  auto simple = contextualize_flow(c.u, "widen", c.widen(), c.a(), c.d(),
                                   Estimator::simple(), 4096);
  CHECK_FALSE(simple.aborted);
  CHECK(simple.dInC);
  CHECK(simple.theorem.pass());
  REQUIRE(simple.aPrime);
  CHECK(simple.aPrime->edge(2, 3) ==
        EdgeFn::filter(c.u.interval(NegInf, 10, true, true)));
}

TEST_CASE("the induced semantics under the empty context is the standard one") {
  Chain c;
  auto alg = flow_algebra(c.u);
  auto emp = Pred<FlowGraph>::one(alg.emp);
  auto a = Pred<FlowGraph>::one(c.g);
  auto induced = induced_flow(c.u, "widen", c.widen(), emp, a, Estimator::eq(),
                              4096);
  auto standard = sem(Program<FlowGraph>::atom(
                          flow_command(c.u, "widen", c.widen())),
                      a, {});
  CHECK(induced.top == standard.top);
  CHECK(induced.states == standard.states);
}

TEST_CASE("program combinators") {
  using P = Program<RState>;
  RState s0;
  auto up = [](registry::RKey k, registry::RValue v) {
    return P::atom(upsert_command(k, v));
  };
  auto seq = sem(P::seq(up(1, 1), up(2, 2)), Pred<RState>::one(s0), {});
  REQUIRE(seq.states.size() == 1);
  CHECK(seq.states.begin()->history ==
        registry::History{{2, 2}, {1, 1}});
  auto ch = sem(P::choice(up(1, 1), up(1, 2)), Pred<RState>::one(s0), {});
  CHECK(ch.states.size() == 2);
  auto lp = sem(P::loop(P::atom(toggle())), Pred<RState>::one(s0), {});
  CHECK(lp.states.size() == 2);
}

TEST_CASE("an unstable loop is inconclusive") {
  using P = Program<RState>;
  Caps caps;
  caps.loop = 5;
  auto r = check_hoare(registry_algebra(), Pred<RState>::one(RState{}),
                       P::loop(P::atom(counter())), Pred<RState>::Top(), caps);
  CHECK(r.verdict == Verdict::Inconclusive);
  CHECK(r.detail.find("did not stabilize") != std::string::npos);
}

TEST_CASE("hoare triples and context triples") {
  auto alg = registry_algebra();
  RState s0;
  auto com = Program<RState>::atom(upsert_command(1, 1));
  RState s1 = registry::upsert(s0, 1, 1);
  CHECK(check_hoare(alg, Pred<RState>::one(s0), com, Pred<RState>::one(s1)).pass());
  auto bad = check_hoare(alg, Pred<RState>::one(s0), com, Pred<RState>::one(s0));
  CHECK(bad.verdict == Verdict::Fail);
  REQUIRE(bad.witness);
  CHECK(*bad.witness == s1);

  registry::History h;
  RState d{h, {{"t", {registry::Tag::OBL, h, 1, 1}}}};
  RState dAfter = registry::upsert(d, 1, 1);
  RState b{s1.history, {}};
  auto ctx = check_casl(alg, Pred<RState>::one(d), Pred<RState>::one(s0), com,
                        Pred<RState>::one(b));
  CHECK(ctx.verdict == Verdict::Fail);
  auto ctxOk = check_casl(alg, Pred<RState>::of({d, dAfter}),
                          Pred<RState>::one(s0), com, Pred<RState>::one(b));
  CHECK(ctxOk.pass());
}

TEST_CASE("upsert is not local but is mediated by its context") {
  auto alg = registry_algebra();
  registry::History h = {{2, 7}};
  RState a{h, {}};
  RState d{h, {{"t", {registry::Tag::OBL, h, 1, 10}}}};
  auto loc = check_locality(alg, upsert_command(1, 10), {{a, d}});
  CHECK(loc.verdict == Verdict::Fail);

  auto c = Pred<RState>::one(d);
  std::function<Pred<RState>(const Pred<RState> &)> ctx =
      [&](const Pred<RState> &p) { return induced_registry(1, 10, c, p, 4096); };
  auto med = check_mediation(alg, upsert_command(1, 10), ctx, c,
                             {Pred<RState>::one(a)});
  CHECK(med.pass());
}

TEST_CASE("predicate expansion respects the cap") {
  Chain c;
  auto cl = flow_closure(c.u, c.d(), {2}, Estimator::leq());
  auto p = Pred<FlowGraph>::sym(cl);
  CHECK(p.contains(c.d()) == Tri::Yes);
  CHECK_THROWS_AS(p.expand(1), Inconclusive);
  CHECK(p.expand(4096).count(c.d()));
  CHECK_THROWS_AS(Pred<FlowGraph>::Top().expand(10), ContractError);
}
