#include "helpers.hpp"

#include <doctest.h>

#include <fstream>

using namespace fctest;
using io::json;

TEST_CASE("keys and intervals") {
  CHECK(io::key_from_json("inf") == PosInf);
  CHECK(io::key_from_json("-inf") == NegInf);
  CHECK(io::key_from_json(4) == 4);
  CHECK(io::key_to_json(PosInf) == "inf");
  CHECK_THROWS_AS(io::key_from_json("four"), InputError);

  AtomUniverse u({4, 8});
  AtomSet s = u.interval(4, 8, true, false) | u.interval(NegInf, 4, true, true);
  json j = io::intervals_to_json(u, s);
  CHECK(io::intervals_from_json(u, j) == s);
  CHECK(io::intervals_from_json(u, json{{"intervals", j}}) == s);
  CHECK_THROWS_AS(io::intervals_from_json(u, json::parse("[[5, 8, true, false]]")),
                  InputError);
}

TEST_CASE("flow values and edge functions round trip") {
  AtomUniverse u({4, 8});
  for (FlowValue v : {FlowValue::bot(), FlowValue::top(),
                      FlowValue::set(0), FlowValue::set(u.below(8))})
    CHECK(io::value_from_json(u, io::value_to_json(u, v)) == v);
  for (EdgeFn f : {EdgeFn::const_bot(), EdgeFn::const_top(),
                   EdgeFn::filter(u.above(4))})
    CHECK(io::edge_fn_from_json(u, io::edge_fn_to_json(u, f)) == f);
  CHECK_THROWS_AS(io::value_from_json(u, "middle"), InputError);
}

TEST_CASE("estimators round trip") {
  AtomUniverse u({4, 6});
  for (const Estimator &e :
       {Estimator::eq(), Estimator::leq(), Estimator::simple(),
        Estimator::complex(u, 4, u.interval(4, 6, true, false))}) {
    json j = io::estimator_to_json(u, e);
    CHECK(io::estimator_from_json(u, j) == e);
  }
  CHECK_THROWS_AS(io::estimator_from_json(u, "fuzzy"), InputError);
}

TEST_CASE("graphs round trip") {
  AtomUniverse u({5, 10});
  FlowGraph g;
  g.add_node(1);
  g.add_node(2);
  g.set_edge(1, 2, EdgeFn::filter(u.below(10)));
  g.set_inflow(100, 1, FlowValue::set(u.full()));
  auto back = io::graph_from_json(io::graph_to_json(u, g));
  CHECK(back.universe == u);
  CHECK(back.graph == g);
}

TEST_CASE("heaps round trip") {
  WorkedTree w;
  json j = io::heap_to_json(w.u, w.h);
  CHECK(io::heap_from_json(w.u, j) == w.h);
  CHECK(io::heap_universe(j) == w.u);
  json broken = j;
  broken["nodes"][0]["left"] = 99;
  CHECK_THROWS_AS(io::heap_from_json(w.u, broken), InputError);
}

TEST_CASE("registry states round trip") {
  registry::History h = {{1, 10}, {2, registry::Tomb}};
  registry::State s{h, {{"t", {registry::Tag::OBL, {{2, registry::Tomb}}, 1, 10}}}};
  CHECK(io::registry_from_json(io::registry_to_json(s)) == s);
  CHECK(io::rvalue_to_json(registry::Tomb) == "tomb");
}

TEST_CASE("file loading") {
  CHECK_THROWS_AS(io::load_file(fixture("does_not_exist.json")), InputError);
  std::string path = "json_io_malformed.json";
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(io::load_file(path), InputError);
  std::remove(path.c_str());
  CHECK(io::load_file(fixture("worked_tree.json")).contains("root"));
}
