#include "flowcheck/casl.hpp"
#include "flowcheck/registry.hpp"

#include <doctest.h>

using namespace flowcheck;
using namespace flowcheck::registry;

namespace {

constexpr RKey K = 1, K2 = 2;
constexpr RValue V = 10, W = 20, X = 7;

Status st(Tag t, History snap, RKey k, RValue v) { return {t, snap, k, v}; }

} // namespace

TEST_CASE("map view and latest position") {
  History h = extend(extend({}, K, V), K2, X); // newest first: (K2,X),(K,V)
  CHECK(h.front() == Event{K2, X});
  CHECK(m_of(h, K) == V);
  CHECK(m_of(h, K2) == X);
  CHECK(m_of(h, 3) == Tomb);
  CHECK(latest(h, K, V) == 1);
  CHECK(latest(h, K2, X) == 2);
  CHECK(latest(h, K, W) == -1);
  CHECK(latest(h, 3, Tomb) == 0);
  CHECK(is_suffix({{K, V}}, h));
  CHECK_FALSE(is_suffix({{K2, X}}, h));
}

TEST_CASE("validity of statuses") {
  History h0 = {{K2, X}};
  History h1 = extend(h0, K, V);
  CHECK(valid(h0, st(Tag::OBL, h0, K, V)));
  CHECK_FALSE(valid(h0, st(Tag::FUL, h0, K, V)));
  CHECK(valid(h1, st(Tag::FUL, h0, K, V)));
  CHECK_FALSE(valid(h1, st(Tag::OBL, h0, K, V)));
  CHECK(valid(h1, st(Tag::OBL, h0, K, W)));
  CHECK(valid(h1, st(Tag::SLT, {{9, 9}}, K, V)));
  CHECK_FALSE(valid(h1, st(Tag::OBL, {{9, 9}}, K, V)));
}

TEST_CASE("upsert fulfils matching obligations") {
  History h = {{K2, X}};
  State s{h, {{"t1", st(Tag::OBL, h, K, V)}, {"t2", st(Tag::OBL, h, K, W)}}};
  State r = upsert(s, K, V);
  CHECK(r.history == extend(h, K, V));
  CHECK(r.registry.at("t1").tag == Tag::FUL);
  CHECK(r.registry.at("t2").tag == Tag::OBL);
  CHECK(valid(r));
}

TEST_CASE("star needs equal histories and composable statuses") {
  History h = {{K, V}};
  State a{h, {{"t1", st(Tag::FUL, h, K, V)}}};
  State b{h, {{"t2", st(Tag::OBL, h, K, W)}}};
  auto ab = star(a, b);
  REQUIRE(ab.defined());
  CHECK(ab.state->registry.size() == 2);
  CHECK_FALSE(star(a, a).defined());
  State slt{h, {{"t1", st(Tag::SLT, h, K, V)}}};
  auto as = star(a, slt);
  REQUIRE(as.defined());
  CHECK(as.state->registry.at("t1").tag == Tag::FUL);
  State other{{}, {}};
  CHECK(star(a, other).reason == "histories differ");
  auto [d1, d2] = unique_decompose(*ab.state, {"t1"}, {"t2"});
  CHECK(d1 == a);
  CHECK(d2 == b);
}

TEST_CASE("ghost multiplication across one upsert") {
  History h = {{K2, X}};
  State core{extend(h, K, V), {}};
  State d{h, {{"t1", st(Tag::OBL, h, K, V)}}};
  auto m = ghost_mult(core, d);
  REQUIRE(m.defined());
  CHECK(m.state->registry.at("t1").tag == Tag::FUL);
  auto fam = ghost_family(core, d);
  REQUIRE(fam);
  CHECK(fam->registry.size() == 1);
  State far{extend(extend(h, K, V), K, W), {}};
  CHECK_FALSE(ghost_mult(far, d).defined());
}

TEST_CASE("spawning a search where the value is already present") {
  // Valid asks for the event after the snapshot; spawn looks at the map.
  History h = extend({{K, V}}, K2, X);
  State s = spawn_search(State{h, {}}, "t", K, V);
  CHECK(s.registry.at("t").tag == Tag::FUL);
  CHECK_FALSE(valid(s));
  // On a history whose newest event is the match, both agree.
  State fine = spawn_search(State{{{K, V}}, {}}, "t", K, V);
  CHECK(valid(fine));
  CHECK_THROWS_AS(spawn_search(fine, "t", K, V), ContractError);
}

TEST_CASE("closure exploration keeps only valid states") {
  ClosurePred p;
  p.base = State{{{K2, X}}, {}};
  p.keys = {K};
  p.values = {V};
  p.freshTids = {"t1"};
  p.depth = 2;
  auto all = p.explore();
  CHECK(all.count(p.base));
  for (const State &s : all)
    CHECK(valid(s));
  CHECK(p.contains(upsert(p.base, K, V)) == Tri::Yes);
  CHECK(p.contains(State{{}, {}}) == Tri::No);
}

TEST_CASE("contextualizing an upsert against a registry of searches") {
  History h = {{K2, X}};
  State a{h, {}};
  State d{h, {{"t1", st(Tag::OBL, h, K, V)}, {"t2", st(Tag::OBL, h, K, W)}}};
  auto res = casl::contextualize_registry(a, d, K, V, 4096);
  CHECK(res.theorem.pass());
  CHECK(res.dInC);
  State expectB{extend(h, K, V), {}};
  CHECK(res.b.states == std::set<State>{expectB});
  State rhoD{extend(h, K, V),
             {{"t1", st(Tag::FUL, h, K, V)}, {"t2", st(Tag::OBL, h, K, W)}}};
  REQUIRE(res.rhoOfD);
  CHECK(*res.rhoOfD == rhoD);
  CHECK(res.c.states == std::set<State>{d, rhoD});
}

TEST_CASE("formatting") {
  History h = {{K, V}};
  CHECK(format_history(h).find("10") != std::string::npos);
  State s{h, {{"t1", st(Tag::OBL, h, K, W)}}};
  CHECK(format_state(s).find("OBL") != std::string::npos);
}
