#include "flowcheck/scenario.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace fctest;
using namespace flowcheck::scenario;

namespace {

ScenarioReport run(const std::string &name) {
  return run_scenario_file(fixture(name));
}

} // namespace

TEST_CASE("fixture verdicts") {
  struct Case {
    const char *file;
    int exit;
  } cases[] = {{"remove_simple.json", 0},     {"remove_complex.json", 0},
               {"remove_complex_eq.json", 1}, {"rotate.json", 0},
               {"find_insert_delete.json", 0}, {"frame_vs_context.json", 0},
               {"flow_widen.json", 0},         {"registry.json", 0},
               {"og.json", 0},                 {"og_planted.json", 1}};
  for (const Case &c : cases) {
    CAPTURE(c.file);
    CHECK(run(c.file).exit_code() == c.exit);
  }
}

TEST_CASE("the equality estimator rejects the key copy") {
  auto r = run("remove_complex_eq.json");
  const StepRecord *f = r.first_failure();
  REQUIRE(f);
  CHECK(f->index == 0);
  CHECK(f->detail.find("outflow to 2") != std::string::npos);
  CHECK_FALSE(f->witness.is_null());
}

TEST_CASE("frame mode fails where context mode passes") {
  auto r = run("frame_vs_context.json");
  REQUIRE(r.steps.size() == 2);
  CHECK(r.steps[0].mode == "frame");
  CHECK(r.steps[0].outcome == Verdict::Fail);
  CHECK(r.steps[0].verdict == Verdict::Pass);
  CHECK(r.steps[0].detail.find("interface mismatch at (1,2)") !=
        std::string::npos);
  CHECK(r.steps[1].mode == "context");
  CHECK(r.steps[1].outcome == Verdict::Pass);
}

TEST_CASE("reports serialize") {
  auto r = run("og.json");
  json j = r.to_json();
  CHECK(j.at("verdict") == "pass");
  CHECK(j.contains("concurrent"));
  CHECK(format_report(r).find("pass") != std::string::npos);
  CHECK_FALSE(j.contains("counterexample"));
  auto bad = run("remove_complex_eq.json").to_json();
  CHECK(bad.at("verdict") == "fail");
  CHECK(bad.contains("counterexample"));
}

TEST_CASE("reports are reproducible") {
  for (const char *name : {"find_insert_delete.json", "rotate.json",
                           "registry.json", "og_planted.json"}) {
    CAPTURE(name);
    CHECK(run(name).to_json().dump() == run(name).to_json().dump());
  }
}

TEST_CASE("malformed scenarios are input errors") {
  CHECK_THROWS_AS(run_scenario(json::parse(R"({"algebra":"graph"})")),
                  InputError);
  CHECK_THROWS_AS(run_scenario(json::parse(R"({"algebra":"bst"})")),
                  InputError);
  json doc = io::load_file(fixture("remove_simple.json"));
  doc["steps"][0]["command"]["op"] = "teleport";
  CHECK_THROWS_AS(run_scenario(doc), InputError);
}

TEST_CASE("a tiny closure cap makes a step inconclusive") {
  Options o;
  o.caps.closure = 1;
  auto r = run_scenario_file(fixture("flow_widen.json"), o);
  CHECK(r.exit_code() == 3);
}
