#include "flowcheck/bst.hpp"
#include "flowcheck/oracle.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace flowcheck;
using fctest::node;
using fctest::WorkedTree;

namespace {

HeapState run_all(const AtomUniverse &u, HeapState h, const Op &op) {
  return run_op(u, h, op).heap;
}

Op user(Op::Kind k, Key key) {
  Op op;
  op.kind = k;
  op.key = key;
  return op;
}

Op maint(Op::Kind k, NodeId target, bool mirrored = false) {
  Op op;
  op.kind = k;
  op.target = target;
  op.mirrored = mirrored;
  return op;
}

} // namespace

TEST_CASE("edge functions from the physical fields") {
  AtomUniverse u({3, 5});
  HeapState h = fctest::tree_of(u, {{0, node(NegInf, Null, 1)},
                                     {1, node(5, 2, 3)},
                                     {2, node(3)},
                                     {3, node(5)}});
  FlowGraph g = derive_flowgraph(u, h);
  CHECK(g.edge(0, 1) == EdgeFn::filter(u.above(NegInf)));
  CHECK(g.edge(1, 2) == EdgeFn::filter(u.below(5)));
  CHECK(g.edge(1, 3) == EdgeFn::filter(u.above(5)));
  CHECK(g.in(EnvNode, 0) == FlowValue::set(u.full()));

  h.nodes[1].dup = Dup::Right;
  CHECK(derive_flowgraph(u, h).edge(1, 3) == EdgeFn::const_bot());
  h.nodes[1].dup = Dup::Left;
  CHECK(derive_flowgraph(u, h).edge(1, 2) == EdgeFn::const_bot());
  h.nodes[1].dup = Dup::No;
  h.nodes[1].right = 2;
  CHECK(derive_flowgraph(u, h).edge(1, 2) == EdgeFn::const_top());
}

TEST_CASE("keysets of the worked tree") {
  WorkedTree t;
  auto inv = check_inv(t.u, t.h);
  CHECK_MESSAGE(inv.ok, (inv.violations.empty() ? "" : inv.violations[0]));
  CHECK(inv.quantities.at(WorkedTree::P).KS == t.u.interval(8, 8, false, false));
  AtomSet ks1 = inv.quantities.at(WorkedTree::N1).KS;
  AtomSet upTo1 = t.u.interval(NegInf, 1, true, false);
  CHECK((ks1 & upTo1) == upTo1);
  CHECK(inv.contents == std::set<Key>{1, 3, 6, 7, 8, 9, 15, 18});
  CHECK(heap_contents(t.u, t.h) == inv.contents);
}

TEST_CASE("decomposition of the worked tree") {
  WorkedTree t;
  NodeSet a = {WorkedTree::X, WorkedTree::P, WorkedTree::Y}, b;
  for (auto &[x, f] : t.h.nodes)
    if (!a.count(x))
      b.insert(x);
  auto r = decomp(t.u, t.h, a, b);
  CHECK(r.ok());
  CHECK(r.contents1 == std::set<Key>{6, 8});
  CHECK(r.contents2 == std::set<Key>{1, 3, 7, 9, 15, 18});
}

TEST_CASE("removeComplex on the worked tree") {
  WorkedTree t;
  OpOutcome out = run_op(t.u, t.h, maint(Op::Kind::RemoveComplex, WorkedTree::X));
  REQUIRE(out.trace.size() == 3);
  CHECK(out.trace[0].label == "key-copy");
  CHECK(out.trace[1].label == "swap-del");
  CHECK(out.trace[2].label == "unlink");
  CHECK(out.nodes == std::vector<NodeId>{WorkedTree::X, WorkedTree::P, WorkedTree::Y});
  auto flow = compute_flow(derive_flowgraph(t.u, out.heap));
  CHECK(flow.at(WorkedTree::N1) == t.open(NegInf, 6));
  CHECK(flow.at(WorkedTree::N3) == t.open(1, 6));
  CHECK(flow.at(WorkedTree::N15) == t.open(6, PosInf));
  CHECK(flow.at(WorkedTree::P) == t.open(6, 15));
  CHECK(flow.at(WorkedTree::N7) == t.open(6, 8));
  CHECK(out.heap.at(WorkedTree::X).key == 6);
  CHECK_FALSE(out.heap.at(WorkedTree::X).del);
  CHECK(heap_contents(t.u, out.heap) == heap_contents(t.u, t.h));
  // y is garbage now: unreachable and marked.
  CHECK(flow.at(WorkedTree::Y).is_bot());
  CHECK(out.heap.at(WorkedTree::Y).del);
  CHECK(check_inv(t.u, out.heap).ok);
}

TEST_CASE("delete marks and keeps the node") {
  AtomUniverse u({1, 2, 3, 4, 5});
  HeapState h = fctest::tree_of(u, {{0, node(NegInf, Null, 1)},
                                     {1, node(3, 2, 3)},
                                     {2, node(1)},
                                     {3, node(4)}});
  OpOutcome del = run_op(u, h, user(Op::Kind::Delete, 4));
  CHECK(del.result == OpOutcome::Result::True);
  CHECK(del.heap.nodes.count(3));
  CHECK(del.heap.at(3).del);
  CHECK(run_op(u, del.heap, user(Op::Kind::Contains, 4)).result ==
        OpOutcome::Result::False);
  CHECK(run_op(u, del.heap, user(Op::Kind::Delete, 4)).result ==
        OpOutcome::Result::False);
  // Reinsertion unmarks.
  OpOutcome ins = run_op(u, del.heap, user(Op::Kind::Insert, 4));
  CHECK(ins.result == OpOutcome::Result::True);
  CHECK(ins.trace.size() == 1);
  CHECK_FALSE(ins.heap.at(3).del);
}

TEST_CASE("find descends left for smaller keys") {
  AtomUniverse u({1, 2, 3, 5});
  HeapState h = fctest::tree_of(u, {{0, node(NegInf, Null, 1)},
                                     {1, node(3, 2, 3)},
                                     {2, node(1)},
                                     {3, node(5)}});
  OpOutcome f = run_op(u, h, user(Op::Kind::Find, 1));
  REQUIRE(f.nodes.size() >= 1);
  CHECK(f.nodes.back() == 2);
  CHECK(run_op(u, h, user(Op::Kind::Contains, 5)).result ==
        OpOutcome::Result::True);
  CHECK(run_op(u, h, user(Op::Kind::Contains, 2)).result ==
        OpOutcome::Result::False);
}

TEST_CASE("insert allocates and links a leaf") {
  AtomUniverse u({1, 3, 5});
  HeapState h = fctest::tree_of(u, {{0, node(NegInf, Null, 1)}, {1, node(3)}});
  OpOutcome ins = run_op(u, h, user(Op::Kind::Insert, 5));
  REQUIRE(ins.trace.size() == 2);
  CHECK(ins.trace[0].label == "alloc");
  CHECK(ins.trace[1].label == "link");
  CHECK(heap_contents(u, ins.heap) == std::set<Key>{3, 5});
  CHECK(check_inv(u, ins.heap).ok);
}

TEST_CASE("removeSimple unlinks a marked child with one subtree") {
  AtomUniverse u({1, 3, 5, 9});
  HeapState h = fctest::tree_of(u, {{0, node(NegInf, Null, 1)},
                                     {1, node(5, 2, 4)},
                                     {2, node(3, 3, Null, true)},
                                     {3, node(1)},
                                     {4, node(9)}});
  OpOutcome r = run_op(u, h, maint(Op::Kind::RemoveSimple, 1));
  REQUIRE(r.trace.size() == 1);
  CHECK(r.heap.at(1).left == 3);
  CHECK(heap_contents(u, r.heap) == heap_contents(u, h));
  CHECK(check_inv(u, r.heap).ok);
  // An unmarked child is left alone.
  OpOutcome skip = run_op(u, h, maint(Op::Kind::RemoveSimple, 1, true));
  CHECK(skip.result == OpOutcome::Result::Skipped);
  CHECK(skip.heap == h);
}

TEST_CASE("rotate keeps flow outside the duplicate stable") {
  AtomUniverse u({2, 4, 6, 8, 12});
  HeapState h = fctest::tree_of(u, {{0, node(NegInf, Null, 1)},
                                     {1, node(8, 2, 5)},
                                     {2, node(4, 3, 4)},
                                     {3, node(2)},
                                     {4, node(6)},
                                     {5, node(12)}});
  Op op = maint(Op::Kind::Rotate, 0, true);
  OpOutcome r = run_op(u, h, op);
  REQUIRE(r.trace.size() == 4);
  auto before = compute_flow(derive_flowgraph(u, h));
  // After duplicate and insert-dup.
  HeapState mid = *apply_step(*apply_step(h, r.trace[0]), r.trace[1]);
  auto midFlow = compute_flow(derive_flowgraph(u, mid));
  CHECK(midFlow.at(1) == before.at(1));
  CHECK(midFlow.at(4) == before.at(4));
  CHECK(midFlow.at(5) == before.at(5));
  CHECK(mid.at(r.nodes[3]).dup == Dup::Right);
  CHECK_FALSE(check_inv(u, mid).ok);
  CHECK(heap_contents(u, mid) == heap_contents(u, h));
  CHECK(heap_contents(u, r.heap) == heap_contents(u, h));
  CHECK(check_inv(u, r.heap).ok);
  CHECK(r.heap.at(0).right == 2);
}

TEST_CASE("heap star checks the interface") {
  WorkedTree t;
  NodeSet a = {WorkedTree::X, WorkedTree::Y}, d;
  for (auto &[x, f] : t.h.nodes)
    if (!a.count(x))
      d.insert(x);
  HeapState ha = heap_restrict(t.u, t.h, a), hd = heap_restrict(t.u, t.h, d);
  auto s = heap_star(t.u, ha, hd);
  REQUIRE(s.defined());
  CHECK(*s.heap == t.h);
  OpOutcome out =
      run_op(t.u, t.h, maint(Op::Kind::RemoveComplex, WorkedTree::X));
  auto moved = apply_step(ha, out.trace[0]);
  REQUIRE(moved);
  auto bad = heap_star(t.u, *moved, hd);
  CHECK_FALSE(bad.defined());
  CHECK(bad.reason.find("interface mismatch") != std::string::npos);
}

TEST_CASE("maintenance ops never change the contents") {
  AtomUniverse u = oracle::tree_universe();
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = oracle::case_rng(5, "bst-unit", i);
    HeapState h = oracle::random_tree(rng, u, 16, 0.4);
    auto before = heap_contents(u, h);
    for (auto k : {Op::Kind::RemoveSimple, Op::Kind::RemoveComplex,
                   Op::Kind::Rotate})
      for (bool m : {false, true}) {
        Op op;
        op.kind = k;
        op.mirrored = m;
        HeapState after = run_all(u, h, op);
        CHECK(heap_contents(u, after) == before);
        CHECK(check_inv(u, after).ok);
      }
  }
}
