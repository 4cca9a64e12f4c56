#include "ebsched/runtime/explore.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "ebsched/error.hpp"

namespace ebsched::runtime {

TaskSystem make_system(const model::Elaboration& el, const std::vector<model::SubModel>& parts,
                       const std::vector<model::TaskDecl>& tasks) {
  TaskSystem sys;
  sys.el = &el;
  for (const auto& t : tasks) {
    const auto it = std::find_if(parts.begin(), parts.end(), [&](const auto& p) { return p.name == t.submodel; });
    if (it == parts.end()) throw ModelError("task " + t.name + " names unknown sub-model " + t.submodel);
    const auto internal = it->event_names();
    const auto node = sched::resolve(sched::parse_schedule(t.schedule, t.schedule_line, t.schedule_column), el.scope,
                                     {internal.begin(), internal.end()});
    sys.tasks.push_back(make_program(el, t.name, node, internal, it->external_names()));
  }
  return sys;
}

const Terminal* ExplorationResult::shortest_deadlock() const {
  const Terminal* best = nullptr;
  for (const auto& d : deadlocks)
    if (!best || d.trace.size() < best->trace.size()) best = &d;
  return best;
}

const AssertionFailure* ExplorationResult::shortest_assertion_failure() const {
  const AssertionFailure* best = nullptr;
  for (const auto& a : assertion_failures)
    if (!best || a.trace.size() < best->trace.size()) best = &a;
  return best;
}

namespace {

struct Config {
  StateIndex state = 0;
  std::vector<int> locs;
  bool operator<(const Config& o) const { return std::tie(state, locs) < std::tie(o.state, o.locs); }
};

class Codec {
 public:
  explicit Codec(const TaskSystem& sys) : states_(sys.el->space->size()) {
    unsigned __int128 total = states_;
    for (const auto& t : sys.tasks) {
      radix_.push_back(static_cast<std::uint64_t>(t.automaton.locations));
      total *= radix_.back();
      if (total > (static_cast<unsigned __int128>(1) << 63))
        throw ModelError("composed configuration space too large to index");
    }
  }
  std::uint64_t encode(const Config& c) const {
    std::uint64_t k = c.state;
    for (std::size_t i = 0; i < radix_.size(); ++i) k = k * radix_[i] + static_cast<std::uint64_t>(c.locs[i]);
    return k;
  }
  Config decode(std::uint64_t k) const {
    Config c;
    c.locs.resize(radix_.size());
    for (std::size_t i = radix_.size(); i-- > 0;) {
      c.locs[i] = static_cast<int>(k % radix_[i]);
      k /= radix_[i];
    }
    c.state = k;
    return c;
  }

 private:
  std::uint64_t states_;
  std::vector<std::uint64_t> radix_;
};

struct Failure {
  StateIndex state;
  int task;
  int transition;
};

/// Configurations reached from `s` after every task settles from `locs`.
void settle_all(const TaskSystem& sys, StateIndex s, const std::vector<int>& locs, std::vector<Config>& out,
                std::vector<Failure>& failed) {
  std::vector<std::vector<Settled>> options;
  for (std::size_t k = 0; k < sys.tasks.size(); ++k) {
    std::vector<Settled> ok;
    for (const auto& st : settle(sys.tasks[k], locs[k], s)) {
      if (st.failed_assert >= 0)
        failed.push_back({s, static_cast<int>(k), st.failed_assert});
      else
        ok.push_back(st);
    }
    options.push_back(std::move(ok));
  }
  std::vector<int> cur(sys.tasks.size());
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == sys.tasks.size()) {
      out.push_back({s, cur});
      return;
    }
    for (const auto& st : options[k]) {
      cur[k] = st.location;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
}

std::vector<Config> initial_configs(const TaskSystem& sys, std::vector<Failure>& failed) {
  std::vector<Config> out;
  const auto& init = sys.el->init;
  std::vector<int> locs;
  for (const auto& t : sys.tasks) locs.push_back(t.automaton.initial);
  init.for_each([&](StateIndex s) { settle_all(sys, s, locs, out, failed); });
  return out;
}

/// Successors of `c` by one event of task k, with the task settled after it.
template <class F>
void successors(const TaskSystem& sys, const Config& c, std::vector<Failure>& failed, F&& emit) {
  for (std::size_t k = 0; k < sys.tasks.size(); ++k) {
    const auto& p = sys.tasks[k];
    for (const auto& m : moves(p, *sys.el, c.locs[k], c.state)) {
      const int to = p.automaton.transitions[static_cast<std::size_t>(m.transition)].to;
      for (const auto& st : settle(p, to, m.post)) {
        const Step step{static_cast<int>(k), m.event, c.state, m.post};
        if (st.failed_assert >= 0) {
          failed.push_back({m.post, static_cast<int>(k), st.failed_assert});
          emit(step, nullptr);
          continue;
        }
        Config n{m.post, c.locs};
        n.locs[k] = st.location;
        emit(step, &n);
      }
    }
  }
}

}  // namespace

ExplorationResult explore(const TaskSystem& sys, const ExploreLimits& limits) {
  ExplorationResult r;
  const Codec codec(sys);
  struct Node {
    std::uint64_t key;
    std::int64_t parent;
    Step step;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::uint64_t, std::int64_t> seen;
  Bits states(sys.el->space->size());
  std::set<std::tuple<StateIndex, int, int>> failure_seen;

  auto trace_to = [&](std::int64_t i) {
    std::vector<Step> t;
    for (; i >= 0 && nodes[static_cast<std::size_t>(i)].parent >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
      t.push_back(nodes[static_cast<std::size_t>(i)].step);
    std::reverse(t.begin(), t.end());
    return t;
  };
  auto record_failures = [&](std::vector<Failure>& failed, std::int64_t parent, const Step* last) {
    for (const auto& f : failed) {
      if (!failure_seen.insert({f.state, f.task, f.transition}).second) continue;
      auto t = parent >= 0 ? trace_to(parent) : std::vector<Step>{};
      if (last) t.push_back(*last);
      r.assertion_failures.push_back({f.state, f.task, f.transition, std::move(t)});
    }
    failed.clear();
  };
  auto add = [&](const Config& c, std::int64_t parent, const Step& step) {
    const auto key = codec.encode(c);
    if (seen.count(key)) return;
    if (nodes.size() >= limits.max_states) {
      r.partial = true;
      return;
    }
    seen.emplace(key, static_cast<std::int64_t>(nodes.size()));
    nodes.push_back({key, parent, step});
    states.set(c.state);
  };

  std::vector<Failure> failed;
  for (const auto& c : initial_configs(sys, failed)) add(c, -1, {});
  record_failures(failed, -1, nullptr);

  std::set<StateIndex> final_seen, dead_seen;
  for (std::size_t i = 0; i < nodes.size() && !r.partial; ++i) {
    const Config c = codec.decode(nodes[i].key);
    bool moved = false;
    successors(sys, c, failed, [&](const Step& step, const Config* n) {
      moved = true;
      if (!n) {
        record_failures(failed, static_cast<std::int64_t>(i), &step);
        return;
      }
      add(*n, static_cast<std::int64_t>(i), step);
    });
    if (moved) continue;
    const bool fin = sys.el->fin.test(c.state);
    if (!(fin ? final_seen : dead_seen).insert(c.state).second) continue;
    Terminal t{c.state, c.locs, trace_to(static_cast<std::int64_t>(i))};
    if (fin) {
      for (std::size_t k = 0; k < sys.tasks.size(); ++k)
        r.all_finished &= c.locs[k] == sys.tasks[k].automaton.final;
      r.finals.push_back(std::move(t));
    } else {
      r.deadlocks.push_back(std::move(t));
    }
  }
  r.configurations = nodes.size();
  r.states = states.count();
  auto by_state = [](const auto& a, const auto& b) { return a.state < b.state; };
  std::stable_sort(r.finals.begin(), r.finals.end(), by_state);
  std::stable_sort(r.deadlocks.begin(), r.deadlocks.end(), by_state);
  std::stable_sort(r.assertion_failures.begin(), r.assertion_failures.end(), by_state);
  return r;
}

bool replay(const TaskSystem& sys, const std::vector<Step>& trace) {
  std::vector<Failure> failed;
  std::set<Config> current;
  for (auto& c : initial_configs(sys, failed)) current.insert(std::move(c));
  for (const auto& step : trace) {
    std::set<Config> next;
    for (const auto& c : current) {
      if (c.state != step.pre) continue;
      successors(sys, c, failed, [&](const Step& s, const Config* n) {
        if (n && s.task == step.task && s.event == step.event && s.post == step.post) next.insert(*n);
      });
    }
    if (next.empty()) return false;
    current = std::move(next);
  }
  return true;
}

}  // namespace ebsched::runtime
