#include "ebsched/runtime/automaton.hpp"

#include <functional>

#include "ebsched/error.hpp"

namespace ebsched::runtime {

std::size_t Automaton::count(Label l) const {
  std::size_t n = 0;
  for (const auto& t : transitions) n += t.label == l;
  return n;
}

namespace {

class Compiler {
 public:
  Automaton run(const sched::Node& s) {
    a_.locations = 1;
    a_.initial = 0;
    a_.final = compile(s, 0);
    a_.out.assign(static_cast<std::size_t>(a_.locations), {});
    for (std::size_t i = 0; i < a_.transitions.size(); ++i)
      a_.out[static_cast<std::size_t>(a_.transitions[i].from)].push_back(static_cast<int>(i));
    return std::move(a_);
  }

 private:
  int fresh() { return a_.locations++; }

  void add(Label l, int from, int to, const sched::Node* n = nullptr, std::set<std::string> loop = {}) {
    Transition t;
    t.label = l;
    t.from = from;
    t.to = to;
    if (n && l == Label::Event) t.event = n->event;
    if (n && l == Label::Assert) t.expr = n->expr;
    t.loop_events = std::move(loop);
    a_.transitions.push_back(std::move(t));
  }

  int compile(const sched::Node& s, int from) {
    switch (s.kind) {
      case sched::NodeKind::Event: {
        const int to = fresh();
        add(Label::Event, from, to, &s);
        return to;
      }
      case sched::NodeKind::Assert: {
        const int to = fresh();
        add(Label::Assert, from, to, &s);
        return to;
      }
      case sched::NodeKind::Seq:
        return compile(*s.tail(), compile(*s.head(), from));
      case sched::NodeKind::Choice: {
        if (s.children.empty()) return from;
        std::vector<int> exits;
        for (const auto& c : s.children) exits.push_back(compile(*c, from));
        bool same = true;
        for (int e : exits) same &= e == exits.front();
        if (same) return exits.front();
        const int join = fresh();
        for (int e : exits) add(Label::Skip, e, join);
        return join;
      }
      case sched::NodeKind::Loop: {
        const auto names = sched::events_of(*s.children[0]);
        const int head = fresh();
        add(Label::Skip, from, head);
        const int body = fresh();
        add(Label::LoopEnter, head, body, nullptr, names);
        add(Label::Skip, compile(*s.children[0], body), head);
        const int exit = fresh();
        add(Label::LoopExit, head, exit, nullptr, names);
        return exit;
      }
    }
    throw Error("bad schedule node");
  }

  Automaton a_;
};

}  // namespace

Automaton compile_schedule(const sched::Node& s) { return Compiler().run(s); }

std::set<std::vector<std::string>> event_language(const Automaton& a, std::size_t max_events) {
  std::set<std::vector<std::string>> out;
  std::vector<std::string> word;
  std::vector<char> on_path(static_cast<std::size_t>(a.locations), 0);  // since the last event
  std::function<void(int)> walk = [&](int loc) {
    if (loc == a.final) out.insert(word);
    for (int ti : a.out[static_cast<std::size_t>(loc)]) {
      const auto& t = a.transitions[static_cast<std::size_t>(ti)];
      if (t.label == Label::Event) {
        if (word.size() == max_events) continue;
        word.push_back(t.event);
        std::vector<char> saved(a.locations, 0);
        std::swap(saved, on_path);
        on_path[static_cast<std::size_t>(t.to)] = 1;
        walk(t.to);
        std::swap(saved, on_path);
        word.pop_back();
      } else if (!on_path[static_cast<std::size_t>(t.to)]) {
        on_path[static_cast<std::size_t>(t.to)] = 1;
        walk(t.to);
        on_path[static_cast<std::size_t>(t.to)] = 0;
      }
    }
  };
  on_path[static_cast<std::size_t>(a.initial)] = 1;
  walk(a.initial);
  return out;
}

TaskProgram make_program(const model::Elaboration& el, std::string name, const sched::NodePtr& schedule,
                         std::vector<std::string> internal, std::vector<std::string> external) {
  TaskProgram p;
  p.name = std::move(name);
  p.automaton = compile_schedule(*schedule);
  p.internal = std::move(internal);
  p.external = std::move(external);
  const std::size_t n = el.space->size();
  auto index_of = [&](const std::string& e) {
    for (std::size_t i = 0; i < el.events.size(); ++i)
      if (el.events[i].name == e) return static_cast<int>(i);
    throw ModelError("task " + p.name + " names unknown event " + e);
  };
  for (const auto& t : p.automaton.transitions) {
    p.event_index.push_back(t.label == Label::Event ? index_of(t.event) : -1);
    Bits test(n, true);
    if (t.label == Label::Assert) test = model::states_where(t.expr, el.scope);
    if (t.label == Label::LoopEnter || t.label == Label::LoopExit) {
      Bits g(n);
      for (const auto& e : t.loop_events) g |= el.events[static_cast<std::size_t>(index_of(e))].guard;
      for (const auto& e : p.external) g |= el.events[static_cast<std::size_t>(index_of(e))].guard;
      test = t.label == Label::LoopEnter ? g : ~g;
    }
    p.test.push_back(std::move(test));
  }
  return p;
}

std::vector<Settled> settle(const TaskProgram& p, int loc, StateIndex s) {
  const auto& a = p.automaton;
  std::vector<Settled> out;
  std::vector<char> seen(static_cast<std::size_t>(a.locations), 0);
  std::function<void(int)> walk = [&](int l) {
    if (seen[static_cast<std::size_t>(l)]) return;
    seen[static_cast<std::size_t>(l)] = 1;
    const auto& outs = a.out[static_cast<std::size_t>(l)];
    bool waits = outs.empty();
    for (int ti : outs) waits |= a.transitions[static_cast<std::size_t>(ti)].label == Label::Event;
    if (waits) out.push_back({l, -1});
    for (int ti : outs) {
      const auto& t = a.transitions[static_cast<std::size_t>(ti)];
      if (t.label == Label::Event) continue;
      if (p.test[static_cast<std::size_t>(ti)].test(s)) {
        walk(t.to);
      } else if (t.label == Label::Assert) {
        out.push_back({l, ti});
      }
    }
  };
  walk(loc);
  return out;
}

std::vector<Move> moves(const TaskProgram& p, const model::Elaboration& el, int loc, StateIndex s) {
  std::vector<Move> out;
  for (int ti : p.automaton.out[static_cast<std::size_t>(loc)]) {
    const int ei = p.event_index[static_cast<std::size_t>(ti)];
    if (ei < 0) continue;
    const auto& e = el.events[static_cast<std::size_t>(ei)];
    if (!e.guard.test(s)) continue;
    for (StateIndex post : e.action.row(s)) out.push_back({ti, ei, post});
  }
  return out;
}

}  // namespace ebsched::runtime
