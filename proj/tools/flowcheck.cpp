// flowcheck: command-line driver for flow graphs, scenarios and oracles.

#include "flowcheck/errors.hpp"
#include "flowcheck/json_io.hpp"
#include "flowcheck/oracle.hpp"
#include "flowcheck/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace flowcheck;
using io::json;

namespace {

enum Exit { Pass = 0, Violation = 1, BadInput = 2, Undecided = 3 };

struct Globals {
  std::uint64_t seed = 0;
  std::optional<std::size_t> maxIter;
  std::size_t closureCap = kDefaultClosureCap;
  std::size_t loopCap = 64;
  bool json = false;
};

void emit(const json &j) { std::cout << j.dump(2) << '\n'; }

int exit_of(const std::string &verdict) {
  if (verdict == "pass")
    return Pass;
  if (verdict == "inconclusive")
    return Undecided;
  return Violation;
}

int run_flow(const Globals &g, const std::string &path, bool dot) {
  json doc = io::load_file(path);
  AtomUniverse u;
  FlowGraph graph;
  std::optional<HeapState> heap;
  if (doc.contains("root")) {
    u = io::heap_universe(doc);
    heap = io::heap_from_json(u, doc);
    graph = derive_flowgraph(u, *heap);
  } else {
    auto f = io::graph_from_json(doc);
    u = f.universe;
    graph = f.graph;
  }
  FlowAssignment flow;
  try {
    flow = compute_flow(graph, g.maxIter);
  } catch (const InternalError &e) {
    throw Inconclusive(e.what());
  }
  if (dot) {
    std::cout << to_dot(u, graph, flow);
    return Pass;
  }
  if (g.json) {
    json out = {{"verdict", "pass"}, {"nodes", io::flow_to_json(u, flow)}};
    if (heap) {
      json ks = json::array();
      auto inv = check_inv(u, *heap);
      for (auto &[x, q] : inv.quantities)
        ks.push_back({{"id", x}, {"keyset", io::intervals_to_json(u, q.KS)}});
      out["keysets"] = ks;
    }
    emit(out);
    return Pass;
  }
  for (auto &[x, v] : flow)
    std::cout << x << ": " << format_value(u, v) << '\n';
  return Pass;
}

int run_check(const Globals &g, const std::string &path) {
  scenario::Options opts;
  opts.seed = g.seed;
  opts.caps.closure = g.closureCap;
  opts.caps.loop = g.loopCap;
  auto rep = scenario::run_scenario_file(path, opts);
  if (g.json)
    emit(rep.to_json());
  else
    std::cout << scenario::format_report(rep);
  return rep.exit_code();
}

int print_theorem(const Globals &g, const oracle::TheoremReport &r) {
  if (g.json) {
    emit(r.to_json());
  } else {
    std::cout << r.name << ": " << r.verdict << " (" << r.cases << " cases, "
              << r.failures << " failures, " << r.inconclusive
              << " inconclusive)\n";
    if (!r.detail.empty())
      std::cout << "  " << r.detail << '\n';
    if (r.verdict == "fail")
      std::cout << r.counterexample.dump() << '\n';
  }
  return exit_of(r.verdict);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"flowcheck: context-aware separation logic over flow graphs"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for sampled suites");
  app.add_option("--max-iter", g.maxIter, "Round limit of the flow solver");
  app.add_option("--closure-cap", g.closureCap, "Enumeration cap");
  app.add_option("--loop-cap", g.loopCap, "Loop stabilization rounds");
  app.add_flag("--json", g.json, "Emit machine-readable reports");

  std::string path;
  bool dot = false;
  auto *flow = app.add_subcommand("flow", "Solve a flow graph or heap file");
  flow->add_option("file", path, "Graph or heap JSON")->required();
  flow->add_flag("--dot", dot, "Print the graph in DOT format");
  flow->add_flag("--json", g.json, "Emit JSON");

  auto *check = app.add_subcommand("check", "Run a scenario file");
  check->add_option("file", path, "Scenario JSON")->required();
  check->add_flag("--json", g.json, "Emit JSON");

  std::optional<std::size_t> cases, nodes;
  std::size_t ops = 50;
  auto *fuzz = app.add_subcommand("fuzz", "Random tree operation sequences");
  fuzz->add_option("--cases", cases, "Number of sequences");
  fuzz->add_option("--ops", ops, "Operations per sequence");
  fuzz->add_option("--nodes", nodes, "Initial tree size bound");
  fuzz->add_option("--seed", g.seed, "Seed");
  fuzz->add_flag("--json", g.json, "Emit JSON");

  std::string theorem;
  auto *orc = app.add_subcommand("oracle", "Check a theorem on instances");
  orc->add_option("--theorem", theorem, "Theorem name")->required();
  orc->add_option("--nodes", nodes, "Node bound");
  orc->add_option("--cases", cases, "Sampled cases");
  orc->add_option("--seed", g.seed, "Seed");
  orc->add_flag("--json", g.json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    std::cerr << app.help();
    return BadInput;
  }

  try {
    if (*flow)
      return run_flow(g, path, dot);
    if (*check)
      return run_check(g, path);
    oracle::TheoremParams p;
    p.seed = g.seed;
    p.cases = cases;
    p.nodes = nodes;
    p.closureCap = g.closureCap;
    if (*fuzz)
      return print_theorem(g, oracle::fuzz_bst(p, ops));
    auto t = oracle::parse_theorem(theorem);
    if (!t)
      throw InputError("unknown theorem \"" + theorem + "\"");
    return print_theorem(g, oracle::check_theorem(*t, p));
  } catch (const InputError &e) {
    if (g.json)
      emit({{"verdict", "input-error"}, {"detail", e.what()}});
    std::cerr << "flowcheck: " << e.what() << '\n';
    return BadInput;
  } catch (const json::exception &e) {
    if (g.json)
      emit({{"verdict", "input-error"}, {"detail", e.what()}});
    std::cerr << "flowcheck: malformed input: " << e.what() << '\n';
    return BadInput;
  } catch (const Inconclusive &e) {
    if (g.json)
      emit({{"verdict", "inconclusive"}, {"detail", e.what()}});
    std::cerr << "flowcheck: inconclusive: " << e.what() << '\n';
    return Undecided;
  } catch (const ContractError &e) {
    std::cerr << "flowcheck: " << e.what() << '\n';
    return BadInput;
  }
}
