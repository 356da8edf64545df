#include "flowcheck/errors.hpp"
#include "flowcheck/flowgraph.hpp"
#include "flowcheck/oracle.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace flowcheck;
using fctest::WorkedTree;

TEST_CASE("worked tree insets") {
  WorkedTree t;
  auto flow = compute_flow(t.graph());
  CHECK(flow.at(WorkedTree::X) == t.open(NegInf, PosInf));
  CHECK(flow.at(WorkedTree::N1) == t.open(NegInf, 4));
  CHECK(flow.at(WorkedTree::N3) == t.open(1, 4));
  CHECK(flow.at(WorkedTree::N15) == t.open(4, PosInf));
  CHECK(flow.at(WorkedTree::P) == t.open(4, 15));
  CHECK(flow.at(WorkedTree::Y) == t.open(4, 8));
  CHECK(flow.at(WorkedTree::N7) == t.open(6, 8));
  CHECK(flow.at(WorkedTree::N9) == t.open(8, 15));
  CHECK(flow.at(WorkedTree::N18) == t.open(15, PosInf));
  CHECK(flow == oracle::naive_flow(t.graph()));
}

TEST_CASE("outflow and restriction on the worked tree") {
  WorkedTree t;
  FlowGraph g = t.graph();
  auto flow = compute_flow(g);
  CHECK(outflow(g, flow, WorkedTree::P, WorkedTree::Y) == t.open(4, 8));
  FlowGraph py = restrict(g, {WorkedTree::P, WorkedTree::Y});
  CHECK(py.inflow.size() == 1);
  CHECK(py.in(WorkedTree::N15, WorkedTree::P) == t.open(4, 15));
  CHECK(compute_flow(py).at(WorkedTree::Y) == t.open(4, 8));
  CHECK(py.external_targets() ==
        NodeSet{WorkedTree::N7, WorkedTree::N9});
}

TEST_CASE("cross inflows of a split equal the insets on the boundary") {
  WorkedTree t;
  FlowGraph g = t.graph();
  NodeSet in = {WorkedTree::X, WorkedTree::P, WorkedTree::Y}, out;
  for (NodeId x : g.nodes)
    if (!in.count(x))
      out.insert(x);
  auto [a, b] = unique_decompose(g, in, out);
  CHECK(a.in(WorkedTree::Root, WorkedTree::X) == t.open(NegInf, PosInf));
  CHECK(a.in(WorkedTree::N15, WorkedTree::P) == t.open(4, 15));
  CHECK(b.in(WorkedTree::X, WorkedTree::N1) == t.open(NegInf, 4));
  CHECK(b.in(WorkedTree::X, WorkedTree::N15) == t.open(4, PosInf));
  CHECK(b.in(WorkedTree::Y, WorkedTree::N7) == t.open(6, 8));
  auto r = star(a, b);
  REQUIRE(r.defined());
  CHECK(*r.graph == g);
}

TEST_CASE("star failures name their reason") {
  AtomUniverse u({10});
  FlowGraph a, b;
  a.add_node(1);
  a.set_edge(1, 2, EdgeFn::filter(u.below(10)));
  a.set_inflow(100, 1, FlowValue::set(u.full()));
  b.add_node(2);
  b.set_inflow(1, 2, FlowValue::set(u.above(10)));
  auto r = star(a, b);
  CHECK_FALSE(r.defined());
  CHECK(r.reason == StarResult::Reason::InterfaceMismatch);
  CHECK(r.message().find("interface mismatch at (1,2)") != std::string::npos);

  CHECK(star(a, a).reason == StarResult::Reason::NodeOverlap);

  // Mutual top loop: the interfaces agree but the least flow is smaller.
  FlowGraph c, d;
  c.add_node(1);
  c.set_edge(1, 2, EdgeFn::filter(u.full()));
  c.set_inflow(2, 1, FlowValue::top());
  d.add_node(2);
  d.set_edge(2, 1, EdgeFn::filter(u.full()));
  d.set_inflow(1, 2, FlowValue::top());
  CHECK(star(c, d).reason == StarResult::Reason::FlowNotFaithful);

  b.inflow.clear();
  b.set_inflow(1, 2, FlowValue::set(u.below(10)));
  CHECK(star(a, b).defined());
}

TEST_CASE("ghost multiplication drops inflow the other side provides") {
  AtomUniverse u({10});
  FlowGraph a, b;
  a.add_node(1);
  a.set_edge(1, 2, EdgeFn::filter(u.full()));
  a.set_inflow(100, 1, FlowValue::set(u.below(10)));
  b.add_node(2);
  b.set_inflow(1, 2, FlowValue::set(0));
  auto m = ghost_mult(a, b);
  REQUIRE(m);
  CHECK(m->inflow.size() == 1);
  CHECK(compute_flow(*m).at(2) == FlowValue::set(u.below(10)));
  CHECK_FALSE(ghost_mult(a, a));
}

TEST_CASE("transfer sums outflow per external target") {
  AtomUniverse u({10});
  FlowGraph g;
  g.add_node(1);
  g.add_node(2);
  g.set_edge(1, 3, EdgeFn::filter(u.below(10)));
  g.set_edge(2, 3, EdgeFn::const_top());
  Inflow in;
  set_inflow_entry(in, 100, 1, FlowValue::set(u.full()));
  CHECK(transfer(g, in, 3).is_top());
  in.clear();
  set_inflow_entry(in, 100, 2, FlowValue::bot());
  CHECK(in.empty());
  // ConstTop forwards top even without inflow.
  CHECK(transfer(g, in, 3).is_top());
}

TEST_CASE("the solver stops at its round limit") {
  WorkedTree t;
  CHECK_THROWS_AS(compute_flow(t.graph(), 1), InternalError);
  CHECK_NOTHROW(compute_flow(t.graph()));
}

TEST_CASE("compute_flow agrees with the Jacobi oracle on random graphs") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = oracle::case_rng(11, "flowgraph-unit", i);
    AtomUniverse u = oracle::enum_universe(i % 4);
    FlowGraph g = oracle::random_graph(rng, u, 10);
    CHECK(compute_flow(g) == oracle::naive_flow(g));
  }
}

TEST_CASE("validation rejects inflow from inside") {
  FlowGraph g;
  g.add_node(1);
  g.add_node(2);
  g.inflow[{1, 2}] = FlowValue::top();
  CHECK_THROWS_AS(g.validate(), ContractError);
}

TEST_CASE("DOT output lists every node") {
  WorkedTree t;
  FlowGraph g = t.graph();
  std::string dot = to_dot(t.u, g, compute_flow(g));
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("(4,8)") != std::string::npos);
}
