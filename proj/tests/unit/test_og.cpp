#include "flowcheck/og.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace fctest;
using namespace flowcheck::og;

namespace {

struct Small {
  AtomUniverse u{{3, 5, 8}};
  HeapState h;
  Small() {
    h = tree_of(u, {{0, node(NegInf, Null, 1)},
                    {1, node(5, 2, 3)},
                    {2, node(3)},
                    {3, node(8)}});
  }
  std::vector<ThreadProgram> threads() const {
    return {delete_thread(3), remove_simple_thread(1)};
  }
};

} // namespace

TEST_CASE("facts") {
  Small s;
  Locals l;
  l.vars["y"] = 2;
  CHECK(Fact::inv().holds(s.u, s.h, l));
  CHECK(Fact::on_node(Fact::Kind::Unmarked, 2).holds(s.u, s.h, l));
  CHECK_FALSE(Fact::on_node(Fact::Kind::Marked, 2).holds(s.u, s.h, l));
  CHECK(Fact::on_node(Fact::Kind::Reachable, 3).holds(s.u, s.h, l));
  CHECK(Fact::on_var(Fact::Kind::VarInHeap, "y").holds(s.u, s.h, l));
  CHECK_FALSE(Fact::on_var(Fact::Kind::VarMarked, "y").holds(s.u, s.h, l));
  CHECK(Fact::on_var(Fact::Kind::VarMarked, "y").describe() ==
        "(y=null || y.del)");
}

TEST_CASE("delete racing removeSimple has a valid proof outline") {
  Small s;
  auto r = check(s.u, s.h, s.threads(), 6);
  CHECK(r.pass());
  CHECK(r.agree());
  CHECK(r.configs > 1);
  CHECK(r.interferences > 0);
}

TEST_CASE("a planted assertion is caught by both checks") {
  Small s;
  auto ts = s.threads();
  ts[1].assertions[1].push_back(Fact::on_node(Fact::Kind::Unmarked, 2));
  auto r = check(s.u, s.h, ts, 6);
  CHECK_FALSE(r.pass());
  CHECK_FALSE(r.interferenceFree);
  CHECK_FALSE(r.explorerOk);
  CHECK(r.agree());
  CHECK_FALSE(r.violations.empty());
}

TEST_CASE("explorer reaches the final configuration") {
  Small s;
  auto ts = s.threads();
  auto r = explore(s.u, s.h, ts, 10);
  CHECK(r.ok);
  bool sawGone = false;
  for (const HeapState &g : r.space.globals)
    if (g.at(1).left == Null)
      sawGone = true;
  CHECK(sawGone);
  auto free = check_interference_free(s.u, r.space, ts, {});
  CHECK(free.ok);
  CHECK(free.pairsChecked == 0);
}
