#include "flowcheck/estimator.hpp"
#include "flowcheck/oracle.hpp"

#include <doctest.h>

using namespace flowcheck;

TEST_CASE("relations of the built-in estimators") {
  AtomUniverse u({4, 6});
  auto s = [](AtomSet b) { return FlowValue::set(b); };
  auto bot = FlowValue::bot(), top = FlowValue::top();
  CHECK(relates(Estimator::eq(), s(1), s(1)));
  CHECK_FALSE(relates(Estimator::eq(), s(1), s(3)));
  CHECK(relates(Estimator::leq(), bot, s(1)));
  CHECK(relates(Estimator::leq(), s(1), top));
  CHECK_FALSE(relates(Estimator::leq(), s(1), s(3)));
  CHECK(relates(Estimator::simple(), s(1), s(3)));
  CHECK_FALSE(relates(Estimator::simple(), s(3), s(1)));
  CHECK_FALSE(relates(Estimator::simple(), bot, s(1)));
  CHECK_FALSE(relates(Estimator::simple(), s(1), top));
  CHECK(relates(Estimator::simple(), top, top));

  // Complex: kx = 4, K = (4,6]; m must avoid 4 and m \ K must stay in n.
  AtomSet K = u.interval(4, 6, true, false);
  Estimator c = Estimator::complex(u, 4, K);
  AtomSet below4 = u.below(4), below6 = u.below(6);
  CHECK(relates(c, s(below4), s(below6)));
  CHECK_FALSE(relates(c, s(below6), s(below4 | K)));
  CHECK(relates(c, s(K), s(0)));
  CHECK(relates(c, s(below6), s(below6)));
}

TEST_CASE("built-in estimators satisfy the axioms on small universes") {
  for (std::size_t n = 0; n <= 1; ++n) {
    AtomUniverse u = oracle::enum_universe(n);
    for (auto e : {Estimator::eq(), Estimator::leq(), Estimator::simple()}) {
      auto r = check_estimator_axioms(e, u);
      CHECK_MESSAGE(r.pass, e.name(u) << ": " << r.axiom << " " << r.detail);
    }
    for (Key kx : u.endpoints())
      for (AtomSet K = 0; K <= u.full(); ++K) {
        auto r = check_estimator_axioms(Estimator::complex(u, kx, K), u);
        CHECK_MESSAGE(r.pass, r.axiom << " " << r.detail);
      }
  }
}

TEST_CASE("a non-transitive relation is rejected with a witness") {
  AtomUniverse u({10});
  FlowValue a = FlowValue::set(0b0001), b = FlowValue::set(0b0011),
            c = FlowValue::set(0b0111);
  Estimator e = Estimator::custom(u, [&](FlowValue m, FlowValue n) {
    return m == n || (m == a && n == b) || (m == b && n == c);
  });
  auto r = check_estimator_axioms(e, u);
  CHECK_FALSE(r.pass);
  CHECK(r.axiom == "E1-transitive");
  REQUIRE(r.witness.size() == 3);
  CHECK(r.witness[0] == a);
  CHECK(r.witness[2] == c);
}

TEST_CASE("a relation breaking oplus compatibility fails E2") {
  AtomUniverse u({10});
  Estimator e = Estimator::custom(u, [](FlowValue m, FlowValue n) {
    return m == n || (m.is_bot() && n.is_set());
  });
  auto r = check_estimator_axioms(e, u);
  CHECK_FALSE(r.pass);
  CHECK(r.axiom == "E2");
}

TEST_CASE("ctx estimation of an edge widening") {
  AtomUniverse u({5, 10});
  FlowGraph s;
  s.add_node(1);
  s.set_edge(1, 2, EdgeFn::filter(u.below(5)));
  s.set_inflow(100, 1, FlowValue::set(u.below(10)));
  FlowGraph t = s;
  t.set_edge(1, 2, EdgeFn::filter(u.below(10)));
  CHECK_FALSE(ctx_estimate(u, s, t, Estimator::eq()).holds());
  CHECK(ctx_estimate(u, s, t, Estimator::simple()).holds());
  CHECK_FALSE(ctx_estimate(u, t, s, Estimator::simple()).holds());
  auto rep = ctx_estimate(u, s, t, Estimator::eq());
  CHECK(rep.witnessNode == 2);
  CHECK(rep.lhs == FlowValue::set(u.below(5)));
  CHECK(rep.rhs == FlowValue::set(u.below(10)));
  for (auto e : {Estimator::eq(), Estimator::simple()})
    CHECK(*oracle::naive_ctx(u, s, t, e) == ctx_estimate(u, s, t, e).holds());
}

TEST_CASE("ctx estimation reports an oversized down-set") {
  AtomUniverse u({10, 20});
  FlowGraph s;
  for (NodeId x : {1, 2, 3}) {
    s.add_node(x);
    s.set_inflow(100 + x, x, FlowValue::top());
  }
  auto r = ctx_estimate(u, s, s, Estimator::eq(), 100);
  CHECK(r.verdict == CtxReport::Verdict::Inconclusive);
  CHECK_FALSE(for_each_inflow_below(u, s.inflow, 100,
                                    [](const Inflow &) { return true; }));
}

TEST_CASE("inflow closures") {
  AtomUniverse u({10});
  FlowGraph base;
  base.add_node(1);
  base.set_inflow(2, 1, FlowValue::set(u.below(10)));
  base.set_inflow(100, 1, FlowValue::set(0));
  Closure cl{base, {2}, Estimator::simple()};
  CHECK(cl.contains(base));
  FlowGraph wider = base.with_inflow(
      {{{2, 1}, FlowValue::set(u.full())}, {{100, 1}, FlowValue::set(0)}});
  CHECK(cl.contains(wider));
  FlowGraph narrower = base.with_inflow(
      {{{2, 1}, FlowValue::set(0)}, {{100, 1}, FlowValue::set(0)}});
  CHECK_FALSE(cl.contains(narrower));
  FlowGraph otherExt = base.with_inflow(
      {{{2, 1}, FlowValue::set(u.below(10))}, {{100, 1}, FlowValue::top()}});
  CHECK_FALSE(cl.contains(otherExt));
  auto members = cl.materialize(u);
  for (const FlowGraph &m : members) {
    CHECK(cl.contains(m));
    CHECK(oracle::naive_in_closure(base, {2}, Estimator::simple(), m));
  }
  // Supersets of (-inf,10) over four atoms: 2^3.
  CHECK(members.size() == 8);
}
