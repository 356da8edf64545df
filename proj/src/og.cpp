#include "flowcheck/og.hpp"
#include "flowcheck/errors.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace flowcheck::og {

std::int64_t Locals::var(const std::string &name) const {
  auto it = vars.find(name);
  return it == vars.end() ? Null : it->second;
}

bool Fact::holds(const AtomUniverse &u, const HeapState &g,
                 const Locals &l) const {
  auto marked = [&](NodeId x) {
    return g.nodes.count(x) && g.nodes.at(x).del;
  };
  switch (kind) {
  case Kind::Inv:
    return check_inv(u, g).ok;
  case Kind::Marked:
    return marked(node);
  case Kind::Unmarked:
    return g.nodes.count(node) && !g.nodes.at(node).del;
  case Kind::Reachable: {
    auto r = reachable_nodes(u, g);
    return std::find(r.begin(), r.end(), node) != r.end();
  }
  case Kind::VarMarked: {
    NodeId x = l.var(var);
    return x == Null || marked(x);
  }
  case Kind::VarInHeap: {
    NodeId x = l.var(var);
    return x == Null || g.nodes.count(x) > 0;
  }
  }
  return false;
}

std::string Fact::describe() const {
  switch (kind) {
  case Kind::Inv:
    return "Inv";
  case Kind::Marked:
    return std::to_string(node) + ".del";
  case Kind::Unmarked:
    return "!" + std::to_string(node) + ".del";
  case Kind::Reachable:
    return "reach(" + std::to_string(node) + ")";
  case Kind::VarMarked:
    return "(" + var + "=null || " + var + ".del)";
  case Kind::VarInHeap:
    return "(" + var + "=null || " + var + " in heap)";
  }
  return "?";
}

bool holds(const AtomUniverse &u, const Assertion &a, const HeapState &g,
           const Locals &l) {
  return std::all_of(a.begin(), a.end(),
                     [&](const Fact &f) { return f.holds(u, g, l); });
}

std::string describe(const Assertion &a) {
  std::string s;
  for (const Fact &f : a) {
    if (!s.empty())
      s += " && ";
    s += f.describe();
  }
  return s.empty() ? "true" : s;
}

namespace {

NodeId search(const HeapState &g, Key k) {
  NodeId cur = g.root;
  for (std::size_t steps = 0; cur != Null && steps <= g.nodes.size();
       ++steps) {
    auto it = g.nodes.find(cur);
    if (it == g.nodes.end())
      return Null;
    const NodeFields &f = it->second;
    if (f.key == k)
      return cur;
    cur = k < f.key ? f.left : f.right;
  }
  return Null;
}

Locals at(Locals l, int pc) {
  l.pc = pc;
  return l;
}

} // namespace

ThreadProgram delete_thread(Key key) {
  ThreadProgram t;
  t.name = "delete(" + key_to_string(key) + ")";
  t.actions.push_back(
      {"find", [key](const HeapState &g, const Locals &l) {
         Locals n = at(l, 1);
         n.vars["x"] = search(g, key);
         if (n.vars["x"] == Null)
           n.pc = 2;
         return std::make_pair(g, n);
       }});
  t.actions.push_back(
      {"mark", [](const HeapState &g, const Locals &l) {
         HeapState h = g;
         NodeId x = l.var("x");
         auto it = h.nodes.find(x);
         if (it != h.nodes.end() && !it->second.del)
           it->second.del = true;
         return std::make_pair(h, at(l, 2));
       }});
  t.assertions = {
      {Fact::inv()},
      {Fact::inv(), Fact::on_var(Fact::Kind::VarInHeap, "x")},
      {Fact::inv(), Fact::on_var(Fact::Kind::VarMarked, "x")}};
  return t;
}

ThreadProgram remove_simple_thread(NodeId parent, bool mirrored) {
  ThreadProgram t;
  t.name = "removeSimple(" + std::to_string(parent) + ")";
  auto child = [mirrored](NodeFields &f) -> NodeId & {
    return mirrored ? f.right : f.left;
  };
  t.actions.push_back(
      {"read", [parent, child](const HeapState &g, const Locals &l) {
         Locals n = at(l, 1);
         auto it = g.nodes.find(parent);
         NodeFields f = it == g.nodes.end() ? NodeFields{} : it->second;
         n.vars["y"] = it == g.nodes.end() ? Null : child(f);
         return std::make_pair(g, n);
       }});
  t.actions.push_back(
      {"unlink", [parent, child](const HeapState &g, const Locals &l) {
         HeapState h = g;
         NodeId y = l.var("y");
         auto px = h.nodes.find(parent);
         auto py = h.nodes.find(y);
         if (px != h.nodes.end() && py != h.nodes.end() &&
             child(px->second) == y && py->second.del &&
             (py->second.left == Null || py->second.right == Null)) {
           NodeId grand =
               py->second.left != Null ? py->second.left : py->second.right;
           child(px->second) = grand;
         }
         return std::make_pair(h, at(l, 2));
       }});
  t.assertions = {{Fact::inv()},
                  {Fact::inv(), Fact::on_var(Fact::Kind::VarInHeap, "y")},
                  {Fact::inv()}};
  return t;
}

FreedomReport check_interference_free(const AtomUniverse &u,
                                      const StateSpace &space,
                                      const std::vector<ThreadProgram> &threads,
                                      const std::vector<Interference> &I) {
  FreedomReport rep;
  for (const Interference &itf : I) {
    // Global effects of the interference on states meeting its assertion.
    std::vector<std::pair<HeapState, HeapState>> effects;
    auto it = space.locals[itf.thread].find(itf.pc);
    if (it == space.locals[itf.thread].end())
      continue;
    for (const HeapState &g : space.globals)
      for (const Locals &l1 : it->second)
        if (holds(u, itf.pre, g, l1))
          effects.emplace_back(g, itf.com.step(g, l1).first);
    for (std::size_t j = 0; j < threads.size(); ++j) {
      if (j == itf.thread)
        continue;
      for (auto &[pc, ls] : space.locals[j]) {
        const Assertion &b = threads[j].assertions[pc];
        for (auto &[g, g2] : effects)
          for (const Locals &l : ls) {
            if (!holds(u, b, g, l))
              continue;
            ++rep.pairsChecked;
            if (holds(u, b, g2, l))
              continue;
            rep.ok = false;
            std::ostringstream os;
            os << itf.com.name << " of thread " << itf.thread
               << " invalidates {" << describe(b) << "} of thread " << j
               << " at pc " << pc;
            rep.violations.push_back({"interference", j, pc, os.str(), g});
          }
      }
    }
  }
  return rep;
}

ExploreReport explore(const AtomUniverse &u, const HeapState &init,
                      const std::vector<ThreadProgram> &threads,
                      std::size_t depth) {
  ExploreReport rep;
  rep.space.locals.resize(threads.size());
  std::set<Config> seen;
  std::set<HeapState> globals;
  std::vector<std::set<std::pair<int, Locals>>> locals(threads.size());
  std::deque<std::pair<Config, std::size_t>> work;
  Config start{init, std::vector<Locals>(threads.size())};
  seen.insert(start);
  work.emplace_back(start, 0);
  while (!work.empty()) {
    auto [cfg, d] = work.front();
    work.pop_front();
    globals.insert(cfg.global);
    for (std::size_t i = 0; i < threads.size(); ++i) {
      const Locals &l = cfg.locals[i];
      locals[i].emplace(l.pc, l);
      if (!holds(u, threads[i].assertions[l.pc], cfg.global, l)) {
        rep.ok = false;
        rep.violations.push_back(
            {"reachable", i, l.pc,
             "{" + describe(threads[i].assertions[l.pc]) + "} of thread " +
                 std::to_string(i) + " fails at pc " + std::to_string(l.pc),
             cfg.global});
      }
    }
    if (d == depth)
      continue;
    for (std::size_t i = 0; i < threads.size(); ++i) {
      const Locals &l = cfg.locals[i];
      if (l.pc >= threads[i].done_pc())
        continue;
      auto [g2, l2] = threads[i].actions[l.pc].step(cfg.global, l);
      Config next = cfg;
      next.global = std::move(g2);
      next.locals[i] = std::move(l2);
      if (seen.insert(next).second)
        work.emplace_back(std::move(next), d + 1);
    }
  }
  rep.configs = seen.size();
  rep.space.globals.assign(globals.begin(), globals.end());
  for (std::size_t i = 0; i < threads.size(); ++i)
    for (auto &[pc, l] : locals[i])
      rep.space.locals[i][pc].push_back(l);
  return rep;
}

OgReport check(const AtomUniverse &u, const HeapState &init,
               const std::vector<ThreadProgram> &threads, std::size_t depth) {
  for (const ThreadProgram &t : threads)
    if (t.assertions.size() != t.actions.size() + 1)
      throw ContractError("thread " + t.name +
                          " needs one assertion per program point");
  OgReport rep;
  ExploreReport ex = explore(u, init, threads, depth);
  rep.explorerOk = ex.ok;
  rep.configs = ex.configs;
  rep.violations = ex.violations;

  // Initial assertions and sequential triples on the reached states.
  Locals start;
  for (std::size_t i = 0; i < threads.size(); ++i)
    if (!holds(u, threads[i].assertions[0], init, start)) {
      rep.sequentialOk = false;
      rep.violations.push_back({"initial", i, 0, "initial assertion fails",
                                init});
    }
  std::vector<Interference> I;
  for (std::size_t i = 0; i < threads.size(); ++i) {
    const ThreadProgram &t = threads[i];
    for (auto &[pc, ls] : ex.space.locals[i]) {
      if (pc >= t.done_pc())
        continue;
      I.push_back({i, pc, t.actions[pc], t.assertions[pc]});
      for (const HeapState &g : ex.space.globals)
        for (const Locals &l : ls) {
          if (!holds(u, t.assertions[pc], g, l))
            continue;
          auto [g2, l2] = t.actions[pc].step(g, l);
          if (holds(u, t.assertions[l2.pc], g2, l2))
            continue;
          rep.sequentialOk = false;
          rep.violations.push_back(
              {"sequential", i, pc,
               t.actions[pc].name + " does not establish {" +
                   describe(t.assertions[l2.pc]) + "}",
               g});
        }
    }
  }
  rep.interferences = I.size();
  FreedomReport fr = check_interference_free(u, ex.space, threads, I);
  rep.interferenceFree = fr.ok;
  rep.violations.insert(rep.violations.end(), fr.violations.begin(),
                        fr.violations.end());
  return rep;
}

} // namespace flowcheck::og
