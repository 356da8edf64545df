#include "flowcheck/scenario.hpp"
#include "flowcheck/errors.hpp"

#include <sstream>

namespace flowcheck::scenario {

namespace {

Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::Fail || b == Verdict::Fail)
    return Verdict::Fail;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive)
    return Verdict::Inconclusive;
  return Verdict::Pass;
}

[[noreturn]] void bad(const std::string &what) { throw InputError(what); }

NodeSet ids_of(const json &j) {
  if (!j.is_array())
    bad("node lists must be arrays");
  NodeSet s;
  for (const json &x : j) {
    if (!x.is_number_integer())
      bad("node ids must be integers");
    s.insert(x.get<NodeId>());
  }
  return s;
}

std::optional<NodeSet> opt_ids(const json &step, const char *name) {
  if (!step.contains(name))
    return std::nullopt;
  return ids_of(step.at(name));
}

void add_check(StepRecord &rec, std::string name, Verdict v,
               std::string detail = {}) {
  rec.outcome = worst(rec.outcome, v);
  if (v != Verdict::Pass && rec.detail.empty())
    rec.detail = detail;
  rec.checks.push_back({std::move(name), v, std::move(detail)});
}

bool wants(const std::vector<std::string> &checks, const char *name) {
  return std::find(checks.begin(), checks.end(), name) != checks.end();
}

std::vector<std::string> checks_of(const json &step) {
  if (!step.contains("checks"))
    return {"casl"};
  std::vector<std::string> out;
  for (const json &c : step.at("checks")) {
    auto s = c.get<std::string>();
    if (s != "inv" && s != "contents" && s != "casl")
      bad("unknown check \"" + s + "\"");
    out.push_back(s);
  }
  return out;
}

/// Inflow, external node and the two outflows that refute s <=_ctx t.
json ctx_witness(const AtomUniverse &u, const CtxReport &r) {
  json in = json::array();
  for (auto &[e, v] : r.witnessIn)
    in.push_back({{"src", e.first}, {"dst", e.second},
                  {"value", io::value_to_json(u, v)}});
  return {{"inflow", in},
          {"node", r.witnessNode},
          {"before", io::value_to_json(u, r.lhs)},
          {"after", io::value_to_json(u, r.rhs)}};
}

Verdict from_tri(Tri t) {
  return t == Tri::Yes ? Verdict::Pass
         : t == Tri::No ? Verdict::Fail
                        : Verdict::Inconclusive;
}

/// Footprint and context of a step: the context defaults to everything
/// outside the footprint, and the two must partition \p all.
std::pair<NodeSet, NodeSet> split(const NodeSet &all, NodeSet F,
                                  const std::optional<NodeSet> &ctx) {
  for (NodeId x : F)
    if (!all.count(x))
      bad("footprint node " + std::to_string(x) + " is not in the state");
  NodeSet C;
  if (ctx) {
    C = *ctx;
    for (NodeId x : C)
      if (F.count(x) || !all.count(x))
        bad("footprint and context must partition the state");
    if (F.size() + C.size() != all.size())
      bad("footprint and context must partition the state");
  } else {
    std::set_difference(all.begin(), all.end(), F.begin(), F.end(),
                        std::inserter(C, C.end()));
  }
  return {F, C};
}

// BST scenarios --------------------------------------------------------------

FieldWrite::Field field_of(const std::string &s) {
  using F = FieldWrite::Field;
  if (s == "left")
    return F::Left;
  if (s == "right")
    return F::Right;
  if (s == "key")
    return F::Key;
  if (s == "del")
    return F::Del;
  if (s == "dup")
    return F::Dup;
  bad("unknown field \"" + s + "\"");
}

std::int64_t field_value(FieldWrite::Field f, const json &v) {
  using F = FieldWrite::Field;
  switch (f) {
  case F::Left:
  case F::Right:
    return v.is_null() ? Null : v.get<std::int64_t>();
  case F::Key:
    return io::key_from_json(v);
  case F::Del:
    return v.get<bool>() ? 1 : 0;
  case F::Dup: {
    auto s = v.get<std::string>();
    return static_cast<std::int64_t>(s == "left"    ? Dup::Left
                                     : s == "right" ? Dup::Right
                                                    : Dup::No);
  }
  }
  return 0;
}

AtomicStep raw_step(const json &cmd) {
  AtomicStep s;
  s.label = cmd.value("label", "write");
  if (cmd.contains("alloc")) {
    const json &a = cmd.at("alloc");
    NodeFields f;
    f.key = io::key_from_json(a.at("key"));
    f.left = a.contains("left") && !a.at("left").is_null()
                 ? a.at("left").get<NodeId>()
                 : Null;
    f.right = a.contains("right") && !a.at("right").is_null()
                  ? a.at("right").get<NodeId>()
                  : Null;
    f.del = a.value("del", false);
    if (a.contains("dup"))
      f.dup = static_cast<Dup>(field_value(FieldWrite::Field::Dup, a.at("dup")));
    s.alloc = std::make_pair(a.at("id").get<NodeId>(), f);
  }
  if (cmd.contains("write"))
    for (const json &w : cmd.at("write")) {
      auto f = field_of(w.at("field").get<std::string>());
      s.writes.push_back({w.at("node").get<NodeId>(), f,
                          field_value(f, w.at("value"))});
    }
  return s;
}

Op op_of(const json &cmd) {
  Op op;
  auto name = cmd.at("op").get<std::string>();
  auto kind = Op::parse_kind(name);
  if (!kind)
    bad("unknown operation \"" + name + "\"");
  op.kind = *kind;
  if (cmd.contains("key"))
    op.key = io::key_from_json(cmd.at("key"));
  if (cmd.contains("target"))
    op.target = cmd.at("target").get<NodeId>();
  op.mirrored = cmd.value("mirrored", false);
  return op;
}

struct Trace {
  OpOutcome outcome;
  std::vector<bool> used;
  std::set<Key> before, after;

  bool finished() const {
    return std::all_of(used.begin(), used.end(), [](bool b) { return b; });
  }
};

class HeapRun {
public:
  HeapRun(const json &doc, const Options &opts) : Opts(opts) {
    const json &init = doc.at("init");
    U = doc.contains("endpoints") ? io::heap_universe(doc) : io::heap_universe(init);
    Heap = io::heap_from_json(U, init);
    Model = heap_contents(U, Heap);
    DefaultEst = doc.contains("estimator")
                     ? io::estimator_from_json(U, doc.at("estimator"))
                     : Estimator::eq();
  }

  const AtomUniverse &universe() const { return U; }
  const HeapState &heap() const { return Heap; }

  void run(const json &stepDoc, StepRecord &rec) {
    const json &cmd = stepDoc.at("command");
    auto checks = checks_of(stepDoc);
    bool frame = stepDoc.value("mode", "context") == "frame";
    rec.mode = frame ? "frame" : "context";
    Estimator est = stepDoc.contains("estimator")
                        ? io::estimator_from_json(U, stepDoc.at("estimator"))
                        : DefaultEst;
    auto fp = opt_ids(stepDoc, "footprint");
    auto cx = opt_ids(stepDoc, "context");
    std::set<Key> before = Model, after = Model;
    bool opDone = true;

    if (cmd.contains("op")) {
      Op op = op_of(cmd);
      rec.label = Op::kind_name(op.kind);
      json key = cmd;
      key.erase("step");
      std::string id = key.dump();
      auto it = Traces.find(id);
      if (it == Traces.end()) {
        Trace t;
        t.outcome = run_op(U, Heap, op, Opts.seed);
        t.used.assign(t.outcome.trace.size(), false);
        t.before = Model;
        t.after = Model;
        bool hit = t.outcome.result == OpOutcome::Result::True;
        if (op.kind == Op::Kind::Insert && hit)
          t.after.insert(op.key);
        if (op.kind == Op::Kind::Delete && hit)
          t.after.erase(op.key);
        it = Traces.emplace(id, std::move(t)).first;
        rec.info["result"] = result_name(it->second.outcome.result);
        if (!it->second.outcome.note.empty())
          rec.info["note"] = it->second.outcome.note;
      }
      Trace &t = it->second;
      before = t.before;
      after = t.after;
      if (cmd.contains("expect_result")) {
        bool want = cmd.at("expect_result").get<bool>();
        bool got = t.outcome.result == OpOutcome::Result::True;
        add_check(rec, "result", want == got ? Verdict::Pass : Verdict::Fail,
                  want == got ? "" : "operation returned " +
                                          result_name(t.outcome.result));
      }
      std::vector<std::size_t> todo;
      if (cmd.contains("step")) {
        auto label = cmd.at("step").get<std::string>();
        rec.label += "/" + label;
        for (std::size_t i = 0; i < t.used.size(); ++i)
          if (!t.used[i] && t.outcome.trace[i].label == label) {
            todo.push_back(i);
            break;
          }
        if (todo.empty())
          bad("operation has no pending step \"" + label + "\"" +
              (t.outcome.note.empty() ? "" : " (" + t.outcome.note + ")"));
      } else {
        for (std::size_t i = 0; i < t.used.size(); ++i)
          if (!t.used[i])
            todo.push_back(i);
      }
      for (std::size_t i : todo) {
        // Nodes the operation allocates belong to its footprint.
        std::optional<NodeSet> opFp = fp;
        for (const AtomicStep &s : t.outcome.trace)
          if (s.alloc && Heap.nodes.count(s.alloc->first)) {
            if (!opFp)
              opFp = NodeSet{};
            opFp->insert(s.alloc->first);
          }
        if (!apply(rec, t.outcome.trace[i], opFp, cx, frame, est,
                   wants(checks, "casl")))
          return;
        t.used[i] = true;
      }
      opDone = t.finished();
      if (opDone)
        Traces.erase(it);
    } else if (cmd.contains("write") || cmd.contains("alloc")) {
      AtomicStep s = raw_step(cmd);
      rec.label = s.label;
      if (!apply(rec, s, fp, cx, frame, est, wants(checks, "casl")))
        return;
    } else {
      bad("bst commands need \"op\" or \"write\"");
    }

    if (opDone)
      Model = after;
    if (wants(checks, "inv")) {
      auto inv = check_inv(U, Heap);
      add_check(rec, "inv", inv.ok ? Verdict::Pass : Verdict::Fail,
                inv.ok ? "" : inv.violations.front());
      if (!inv.ok)
        rec.witness = io::heap_to_json(U, Heap);
    }
    if (wants(checks, "contents")) {
      auto now = heap_contents(U, Heap);
      bool ok = opDone ? now == after : (now == before || now == after);
      add_check(rec, "contents", ok ? Verdict::Pass : Verdict::Fail,
                ok ? "" : "logical contents differ from the reference model");
    }
  }

private:
  /// One atomic step under the frame or the context rule. Returns false
  /// when the step failed and the state was left unchanged.
  bool apply(StepRecord &rec, const AtomicStep &step,
             const std::optional<NodeSet> &fp,
             const std::optional<NodeSet> &cx, bool frame,
             const Estimator &est, bool casl) {
    NodeSet all = Heap.ids();
    NodeSet F = fp ? *fp : NodeSet{};
    for (NodeId x : step.footprint())
      if (all.count(x))
        F.insert(x);
    auto [Fs, Cs] = split(all, F, cx);
    HeapState a = heap_restrict(U, Heap, Fs), d = heap_restrict(U, Heap, Cs);
    std::string name = step.label;

    if (frame) {
      auto ap = apply_step(a, step);
      if (!ap) {
        add_check(rec, "frame:" + name, Verdict::Fail,
                  "the command writes outside the footprint");
        return false;
      }
      auto r = heap_star(U, *ap, d);
      if (!r.defined()) {
        add_check(rec, "frame:" + name, Verdict::Fail,
                  "star recomposition failed: " + r.reason);
        rec.witness = io::heap_to_json(U, *ap);
        return false;
      }
      add_check(rec, "frame:" + name, Verdict::Pass);
      Heap = *r.heap;
      return true;
    }

    auto whole = apply_step(Heap, step);
    if (!whole)
      bad("step \"" + name + "\" writes a node outside the heap");
    if (!casl) {
      Heap = std::move(*whole);
      return true;
    }
    auto res = casl::contextualize_heap(U, step, a, d, est, Opts.caps.closure);
    json info = {{"step", name},
                 {"footprint", Fs},
                 {"estimator", est.name(U)}};
    if (!res.c.top && !res.c.symbolic.empty())
      info["context"] = res.c.symbolic.front()->describe();
    rec.info["casl"].push_back(info);
    if (res.aborted) {
      add_check(rec, "casl:" + name, Verdict::Fail, res.theorem.detail);
      if (res.estimate.verdict == CtxReport::Verdict::Fails)
        rec.witness = ctx_witness(U, res.estimate);
      return false;
    }
    if (!res.theorem.pass()) {
      add_check(rec, "casl:" + name, res.theorem.verdict, res.theorem.detail);
      if (res.theorem.witness)
        rec.witness = io::heap_to_json(U, *res.theorem.witness);
      return false;
    }
    if (!res.dInC) {
      add_check(rec, "casl:" + name, Verdict::Fail,
                "the context does not contain the split-off region");
      return false;
    }
    auto alg = casl::heap_algebra(U);
    Tri in = casl::sep_conj(alg, res.b, res.c).contains(*whole);
    add_check(rec, "casl:" + name, from_tri(in),
              in == Tri::Yes ? "" : "the post-state is not in b * c");
    if (in == Tri::No) {
      rec.witness = io::heap_to_json(U, *whole);
      return false;
    }
    Heap = std::move(*whole);
    return in == Tri::Yes;
  }

  Options Opts;
  AtomUniverse U;
  HeapState Heap;
  std::set<Key> Model;
  Estimator DefaultEst;
  std::map<std::string, Trace> Traces;
};

og::Fact fact_of(const json &j) {
  if (!j.is_object() || j.size() != 1)
    bad("planted assertions are single-member objects");
  auto [name, v] = *j.items().begin();
  if (name == "inv")
    return og::Fact::inv();
  NodeId x = v.get<NodeId>();
  if (name == "unmarked")
    return og::Fact::on_node(og::Fact::Kind::Unmarked, x);
  if (name == "marked")
    return og::Fact::on_node(og::Fact::Kind::Marked, x);
  if (name == "reachable")
    return og::Fact::on_node(og::Fact::Kind::Reachable, x);
  bad("unknown assertion \"" + name + "\"");
}

og::OgReport run_concurrent(const AtomUniverse &u, const HeapState &init,
                            const json &c) {
  std::vector<og::ThreadProgram> threads;
  if (!c.contains("programs"))
    bad("concurrent section needs \"programs\"");
  for (const json &p : c.at("programs")) {
    auto op = p.at("op").get<std::string>();
    if (op == "delete")
      threads.push_back(og::delete_thread(io::key_from_json(p.at("key"))));
    else if (op == "removeSimple")
      threads.push_back(og::remove_simple_thread(p.at("target").get<NodeId>(),
                                                 p.value("mirrored", false)));
    else
      bad("unsupported thread program \"" + op + "\"");
  }
  if (c.contains("threads") && c.at("threads").get<std::size_t>() != threads.size())
    bad("\"threads\" does not match the number of programs");
  if (c.contains("planted"))
    for (const json &p : c.at("planted")) {
      auto t = p.at("thread").get<std::size_t>();
      auto pc = p.at("pc").get<std::size_t>();
      if (t >= threads.size() || pc >= threads[t].assertions.size())
        bad("planted assertion refers to a missing program point");
      threads[t].assertions[pc].push_back(fact_of(p.at("assert")));
    }
  std::size_t depth = c.value("interleaveDepth", 6);
  return og::check(u, init, threads, depth);
}

// Flow-graph scenarios -------------------------------------------------------

class FlowRun {
public:
  FlowRun(const json &doc, const Options &opts) : Opts(opts) {
    auto f = io::graph_from_json(doc.at("init"));
    U = f.universe;
    Graph = f.graph;
    DefaultEst = doc.contains("estimator")
                     ? io::estimator_from_json(U, doc.at("estimator"))
                     : Estimator::eq();
  }

  void run(const json &stepDoc, StepRecord &rec) {
    const json &cmd = stepDoc.at("command");
    if (!cmd.contains("set_edge"))
      bad("flow commands need \"set_edge\"");
    const json &se = cmd.at("set_edge");
    NodeId x = se.at("src").get<NodeId>(), y = se.at("dst").get<NodeId>();
    EdgeFn fn = io::edge_fn_from_json(U, se.at("fn"));
    auto up = casl::set_edge_update(x, y, fn);
    rec.label = "set_edge(" + std::to_string(x) + "," + std::to_string(y) + ")";
    auto checks = checks_of(stepDoc);
    for (auto &c : checks)
      if (c != "casl")
        bad("check \"" + c + "\" needs a heap");
    bool frame = stepDoc.value("mode", "context") == "frame";
    rec.mode = frame ? "frame" : "context";
    Estimator est = stepDoc.contains("estimator")
                        ? io::estimator_from_json(U, stepDoc.at("estimator"))
                        : DefaultEst;
    NodeSet F = opt_ids(stepDoc, "footprint").value_or(NodeSet{x});
    F.insert(x);
    auto [Fs, Cs] = split(Graph.nodes, F, opt_ids(stepDoc, "context"));
    auto [a, d] = unique_decompose(Graph, Fs, Cs);
    if (frame) {
      auto ap = up(a);
      auto r = star(*ap, d);
      add_check(rec, "frame", r.defined() ? Verdict::Pass : Verdict::Fail,
                r.defined() ? "" : "star recomposition failed: " + r.message());
      if (!r.defined()) {
        rec.witness = io::graph_to_json(U, *ap);
        return;
      }
      Graph = *r.graph;
      return;
    }
    auto whole = *up(Graph);
    if (!wants(checks, "casl")) {
      Graph = whole;
      return;
    }
    auto res = casl::contextualize_flow(U, rec.label, up, a, d, est,
                                        Opts.caps.closure);
    if (res.aborted || !res.theorem.pass()) {
      add_check(rec, "casl", res.aborted ? Verdict::Fail : res.theorem.verdict,
                res.theorem.detail);
      if (res.aborted && res.estimate.verdict == CtxReport::Verdict::Fails)
        rec.witness = ctx_witness(U, res.estimate);
      if (res.theorem.witness)
        rec.witness = io::graph_to_json(U, *res.theorem.witness);
      return;
    }
    Tri in = casl::sep_conj(casl::flow_algebra(U), res.b, res.c).contains(whole);
    add_check(rec, "casl", res.dInC ? from_tri(in) : Verdict::Fail,
              !res.dInC ? "the context does not contain the split-off region"
              : in == Tri::Yes ? ""
                               : "the post-state is not in b * c");
    if (in == Tri::Yes && res.dInC)
      Graph = whole;
  }

private:
  Options Opts;
  AtomUniverse U;
  FlowGraph Graph;
  Estimator DefaultEst;
};

// Registry scenarios ---------------------------------------------------------

class RegistryRun {
public:
  RegistryRun(const json &doc, const Options &opts)
      : Opts(opts), State(io::registry_from_json(doc.at("init"))) {}

  void run(const json &stepDoc, StepRecord &rec) {
    const json &cmd = stepDoc.at("command");
    auto checks = checks_of(stepDoc);
    rec.mode = "context";
    if (cmd.contains("spawn")) {
      const json &s = cmd.at("spawn");
      auto tid = s.at("tid").get<std::string>();
      rec.label = "spawn(" + tid + ")";
      try {
        State = registry::spawn_search(State, tid, s.at("key").get<registry::RKey>(),
                                       io::rvalue_from_json(s.at("value")));
      } catch (const ContractError &e) {
        bad(e.what());
      }
    } else if (cmd.contains("upsert")) {
      const json &s = cmd.at("upsert");
      auto k = s.at("key").get<registry::RKey>();
      auto v = io::rvalue_from_json(s.at("value"));
      rec.label = "upsert";
      std::set<std::string> fp;
      if (stepDoc.contains("footprint"))
        for (const json &t : stepDoc.at("footprint"))
          fp.insert(t.get<std::string>());
      registry::State a{State.history, {}}, d{State.history, {}};
      for (auto &[tid, st] : State.registry)
        (fp.count(tid) ? a : d).registry.emplace(tid, st);
      auto next = registry::upsert(State, k, v);
      if (wants(checks, "casl")) {
        auto res = casl::contextualize_registry(a, d, k, v, Opts.caps.closure);
        json cs = json::array(), bs = json::array();
        for (auto &x : res.c.states)
          cs.push_back(io::registry_to_json(x));
        for (auto &x : res.b.states)
          bs.push_back(io::registry_to_json(x));
        rec.info["c"] = cs;
        rec.info["b"] = bs;
        if (res.rhoOfD)
          rec.info["rho_d"] = io::registry_to_json(*res.rhoOfD);
        if (!res.theorem.pass()) {
          add_check(rec, "casl", res.theorem.verdict, res.theorem.detail);
          if (res.theorem.witness)
            rec.witness = io::registry_to_json(*res.theorem.witness);
          return;
        }
        Tri in = casl::sep_conj(casl::registry_algebra(), res.b, res.c)
                     .contains(next);
        add_check(rec, "casl", from_tri(in),
                  in == Tri::Yes ? "" : "the post-state is not in b * c");
        if (in != Tri::Yes)
          return;
      }
      State = next;
    } else {
      bad("registry commands need \"upsert\" or \"spawn\"");
    }
    if (wants(checks, "inv")) {
      bool ok = registry::valid(State);
      add_check(rec, "inv", ok ? Verdict::Pass : Verdict::Fail,
                ok ? "" : "registry state is not valid");
      if (!ok)
        rec.witness = io::registry_to_json(State);
    }
    if (wants(checks, "contents"))
      bad("check \"contents\" needs a heap");
  }

private:
  Options Opts;
  registry::State State;
};

template <class Runner>
void run_steps(Runner &r, const json &doc, ScenarioReport &rep) {
  if (!doc.contains("steps"))
    return;
  std::size_t i = 0;
  for (const json &s : doc.at("steps")) {
    StepRecord rec;
    rec.index = i++;
    auto expect = s.value("expect", "pass");
    if (expect != "pass" && expect != "fail")
      bad("\"expect\" must be \"pass\" or \"fail\"");
    rec.expectFail = expect == "fail";
    r.run(s, rec);
    rec.verdict = rec.outcome;
    if (rec.expectFail) {
      if (rec.outcome == Verdict::Fail) {
        rec.verdict = Verdict::Pass;
        if (s.contains("expect_reason") &&
            rec.detail.find(s.at("expect_reason").get<std::string>()) ==
                std::string::npos)
          rec.verdict = Verdict::Fail;
      } else if (rec.outcome == Verdict::Pass) {
        rec.verdict = Verdict::Fail;
        rec.detail = "expected a failure";
      }
    }
    rep.verdict = worst(rep.verdict, rec.verdict);
    bool stop = rec.verdict == Verdict::Fail;
    rep.steps.push_back(std::move(rec));
    if (stop)
      return;
  }
}

json violation_json(const AtomUniverse &u, const og::Violation &v) {
  return {{"kind", v.kind},
          {"thread", v.thread},
          {"pc", v.pc},
          {"detail", v.detail},
          {"global", io::heap_to_json(u, v.global)}};
}

} // namespace

ScenarioReport run_scenario(const json &doc, const Options &opts) {
  ScenarioReport rep;
  rep.seed = opts.seed;
  try {
    if (!doc.is_object())
      bad("scenario must be a JSON object");
    rep.algebra = doc.at("algebra").get<std::string>();
    if (rep.algebra == "bst") {
      HeapRun r(doc, opts);
      HeapState init = r.heap();
      run_steps(r, doc, rep);
      if (doc.contains("concurrent")) {
        const json &c = doc.at("concurrent");
        HeapState start =
            c.contains("init") ? io::heap_from_json(r.universe(), c.at("init"))
                               : init;
        rep.concurrent = run_concurrent(r.universe(), start, c);
        Verdict v = rep.concurrent->pass() && rep.concurrent->agree()
                        ? Verdict::Pass
                        : Verdict::Fail;
        rep.verdict = worst(rep.verdict, v);
        rep.universe = r.universe();
      }
    } else if (rep.algebra == "flow") {
      FlowRun r(doc, opts);
      run_steps(r, doc, rep);
    } else if (rep.algebra == "registry") {
      RegistryRun r(doc, opts);
      run_steps(r, doc, rep);
    } else {
      bad("unknown algebra \"" + rep.algebra + "\"");
    }
  } catch (const json::exception &e) {
    bad(std::string("malformed scenario: ") + e.what());
  }
  return rep;
}

ScenarioReport run_scenario_file(const std::string &path,
                                 const Options &opts) {
  return run_scenario(io::load_file(path), opts);
}

int ScenarioReport::exit_code() const {
  switch (verdict) {
  case Verdict::Pass:
    return 0;
  case Verdict::Fail:
    return 1;
  case Verdict::Inconclusive:
    return 3;
  }
  return 1;
}

const StepRecord *ScenarioReport::first_failure() const {
  for (const StepRecord &s : steps)
    if (s.verdict == Verdict::Fail)
      return &s;
  return nullptr;
}

json ScenarioReport::to_json() const {
  json j;
  j["algebra"] = algebra;
  j["verdict"] = casl::verdict_name(verdict);
  j["seed"] = seed;
  json steps_ = json::array();
  for (const StepRecord &s : steps) {
    json checks_ = json::array();
    for (auto &c : s.checks)
      checks_.push_back({{"name", c.name},
                         {"verdict", casl::verdict_name(c.verdict)},
                         {"detail", c.detail}});
    json r = {{"index", s.index},
              {"label", s.label},
              {"mode", s.mode},
              {"expect", s.expectFail ? "fail" : "pass"},
              {"outcome", casl::verdict_name(s.outcome)},
              {"verdict", casl::verdict_name(s.verdict)},
              {"checks", checks_},
              {"detail", s.detail},
              {"info", s.info}};
    if (!s.witness.is_null())
      r["witness"] = s.witness;
    steps_.push_back(r);
  }
  j["steps"] = steps_;
  json vio = json::array();
  if (concurrent) {
    for (auto &v : concurrent->violations)
      vio.push_back(violation_json(universe, v));
    j["concurrent"] = {{"configs", concurrent->configs},
                       {"interferences", concurrent->interferences},
                       {"sequential", concurrent->sequentialOk},
                       {"interference_free", concurrent->interferenceFree},
                       {"explorer", concurrent->explorerOk},
                       {"agree", concurrent->agree()},
                       {"violations", vio}};
  }
  if (verdict == Verdict::Fail) {
    json cex = {{"seed", seed}};
    if (const StepRecord *f = first_failure()) {
      cex["step"] = f->index;
      cex["detail"] = f->detail;
      cex["witness"] = f->witness;
    } else if (!vio.empty()) {
      cex["concurrent"] = vio.front();
    }
    j["counterexample"] = cex;
  }
  return j;
}

std::string format_report(const ScenarioReport &r) {
  std::ostringstream os;
  for (const StepRecord &s : r.steps) {
    os << "step " << s.index << " [" << s.mode << "] " << s.label << ": "
       << casl::verdict_name(s.verdict);
    if (s.expectFail)
      os << " (expected failure: " << casl::verdict_name(s.outcome) << ")";
    if (!s.detail.empty())
      os << " - " << s.detail;
    os << '\n';
    if (s.verdict == Verdict::Fail && !s.witness.is_null())
      os << "  witness: " << s.witness.dump() << '\n';
  }
  if (r.concurrent) {
    const og::OgReport &c = *r.concurrent;
    os << "concurrent: " << c.configs << " configurations, "
       << c.interferences << " interferences, interference-free="
       << (c.interferenceFree ? "yes" : "no")
       << ", sequential=" << (c.sequentialOk ? "yes" : "no")
       << ", explorer=" << (c.explorerOk ? "ok" : "violation")
       << ", agree=" << (c.agree() ? "yes" : "no") << '\n';
    for (auto &v : c.violations)
      os << "  " << v.kind << ": " << v.detail << '\n';
  }
  os << "verdict: " << casl::verdict_name(r.verdict) << '\n';
  return os.str();
}

} // namespace flowcheck::scenario
