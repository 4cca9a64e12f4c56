#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "ebsched/runtime/run.hpp"
#include "support.hpp"

using namespace ebsched;
using namespace ebsched::runtime;
using ebsched::testing::Loaded;

namespace {

using Word = std::vector<std::string>;
using Language = std::set<Word>;

/// Event words of a schedule read directly off the tree.
Language reference_language(const sched::Node& s, std::size_t k) {
  switch (s.kind) {
    case sched::NodeKind::Event: return {{s.event}};
    case sched::NodeKind::Assert: return {{}};
    case sched::NodeKind::Choice: {
      if (s.children.empty()) return {{}};
      Language out;
      for (const auto& c : s.children) out.merge(reference_language(*c, k));
      return out;
    }
    case sched::NodeKind::Seq: {
      const auto a = reference_language(*s.children[0], k);
      const auto b = reference_language(*s.children[1], k);
      Language out;
      for (const auto& x : a)
        for (const auto& y : b)
          if (x.size() + y.size() <= k) {
            Word w = x;
            w.insert(w.end(), y.begin(), y.end());
            out.insert(std::move(w));
          }
      return out;
    }
    case sched::NodeKind::Loop: {
      const auto body = reference_language(*s.children[0], k);
      Language out{{}};
      for (;;) {
        Language next = out;
        for (const auto& x : out)
          for (const auto& y : body)
            if (x.size() + y.size() <= k) {
              Word w = x;
              w.insert(w.end(), y.begin(), y.end());
              next.insert(std::move(w));
            }
        if (next == out) return out;
        out = std::move(next);
      }
    }
  }
  return {};
}

const Loaded& forks() {
  static const Loaded l("dining_forks.ebt");
  return l;
}
const Loaded& bad() {
  static const Loaded l("dining_forks_bad.ebt");
  return l;
}

TaskSystem system_of(const Loaded& l) { return make_system(l.el, l.parts, l.file.tasks); }

std::vector<model::Value> values(const Loaded& l, StateIndex s) { return l.el.space->decode(s); }

StateIndex state(const Loaded& l, std::vector<model::Value> v) { return l.el.space->encode(v); }

}  // namespace

TEST(Automaton, EventNodeHasTwoLocations) {
  const auto a = compile_schedule(*sched::make_event("E"));
  EXPECT_EQ(a.locations, 2);
  ASSERT_EQ(a.transitions.size(), 1u);
  EXPECT_EQ(a.transitions[0].label, Label::Event);
  EXPECT_EQ(a.initial, 0);
  EXPECT_EQ(a.final, 1);
}

TEST(Automaton, EndIsFinalImmediately) {
  const auto a = compile_schedule(*sched::make_end());
  EXPECT_EQ(a.locations, 1);
  EXPECT_TRUE(a.transitions.empty());
  EXPECT_EQ(a.initial, a.final);
}

TEST(Automaton, TaskOneIsLinear) {
  const auto* t = forks().file.find_task("Task1");
  ASSERT_NE(t, nullptr);
  const auto a = compile_schedule(*sched::parse_schedule(t->schedule));
  EXPECT_EQ(a.count(Label::Event), 5u);
  EXPECT_EQ(a.count(Label::Assert), 4u);
  EXPECT_EQ(a.transitions.size(), 9u);
  for (const auto& outs : a.out) EXPECT_LE(outs.size(), 1u);
}

TEST(Automaton, LanguageMatchesReferenceInterpreter) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> events{"A", "B", "C"};
  for (int i = 0; i < 400; ++i) {
    const auto s = ebsched::testing::random_schedule(rng, events, 4);
    const auto a = compile_schedule(*s);
    EXPECT_EQ(event_language(a, 5), reference_language(*s, 5)) << sched::to_string(s);
    for (const auto& t : a.transitions) EXPECT_LT(t.to, a.locations);
  }
}

TEST(Explore, VerifiedSystemHasNoDeadlock) {
  const auto sys = system_of(forks());
  const auto r = explore(sys);
  EXPECT_FALSE(r.partial);
  EXPECT_TRUE(r.deadlocks.empty());
  EXPECT_TRUE(r.assertion_failures.empty());
  ASSERT_EQ(r.finals.size(), 1u);
  EXPECT_TRUE(r.all_finished);
  EXPECT_EQ(values(forks(), r.finals[0].state), (std::vector<model::Value>{0, 0, 0, 0, 1, 1, 1, 1}));
  EXPECT_TRUE(forks().el.fin.test(r.finals[0].state));
  EXPECT_EQ(r.finals[0].trace.size(), 20u);
  EXPECT_TRUE(replay(sys, r.finals[0].trace));
}

TEST(Explore, BadVariantDeadlocksInFourSteps) {
  const auto sys = system_of(bad());
  const auto r = explore(sys);
  EXPECT_FALSE(r.partial);
  ASSERT_FALSE(r.deadlocks.empty());
  const auto* d = r.shortest_deadlock();
  EXPECT_EQ(values(bad(), d->state), (std::vector<model::Value>{1, 2, 3, 4, 0, 0, 0, 0}));
  EXPECT_EQ(d->trace.size(), 4u);
  EXPECT_TRUE(replay(sys, d->trace));
  for (const auto& t : r.deadlocks) {
    const auto v = values(bad(), t.state);
    EXPECT_EQ(std::vector<model::Value>(v.begin(), v.begin() + 4), (std::vector<model::Value>{1, 2, 3, 4}));
  }
  EXPECT_TRUE(r.assertion_failures.empty());
}

TEST(Explore, EmptyScheduleEndsAtInitialState) {
  auto tasks = std::vector<model::TaskDecl>{forks().file.tasks[0]};
  tasks[0].schedule = "end";
  const auto sys = make_system(forks().el, forks().parts, tasks);
  const auto r = explore(sys);
  ASSERT_EQ(r.deadlocks.size() + r.finals.size(), 1u);
  const auto& t = r.deadlocks.empty() ? r.finals[0] : r.deadlocks[0];
  EXPECT_TRUE(forks().el.init.test(t.state));
  EXPECT_TRUE(t.trace.empty());
  EXPECT_EQ(r.configurations, 1u);
}

TEST(Explore, LimitMarksPartial) {
  const auto r = explore(system_of(forks()), {1});
  EXPECT_TRUE(r.partial);
  EXPECT_EQ(r.configurations, 1u);
}

TEST(Explore, FailingAssertionIsReported) {
  auto tasks = forks().file.tasks;
  tasks[0].schedule = "Ph1GetFork1 -> {fork1 = 0} -> end";
  const auto r = explore(make_system(forks().el, forks().parts, tasks));
  ASSERT_FALSE(r.assertion_failures.empty());
  const auto* f = r.shortest_assertion_failure();
  EXPECT_EQ(f->trace.size(), 1u);
  EXPECT_EQ(f->task, 0);
}

TEST(Explore, ReachableStatesAgreeWithRuns) {
  const auto sys = system_of(bad());
  const auto r = explore(sys);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto run_result = run(sys, seed);
    EXPECT_TRUE(replay(sys, run_result.trace)) << seed;
  }
  EXPECT_GT(r.states, 16u);
}

TEST(Run, ThousandSeedsComplete) {
  const auto sys = system_of(forks());
  const auto done = state(forks(), {0, 0, 0, 0, 1, 1, 1, 1});
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto r = run(sys, seed);
    ASSERT_EQ(r.outcome, Outcome::Completed) << seed << " " << r.message;
    EXPECT_EQ(r.final_state, done);
    std::map<int, std::vector<std::string>> per_task;
    for (const auto& s : r.trace) per_task[s.task].push_back(forks().el.events[static_cast<std::size_t>(s.event)].name);
    for (int k = 0; k < 4; ++k) {
      const auto i = std::to_string(k + 1);
      const int a = k == 3 ? 1 : k + 1;
      const int b = k == 3 ? 4 : k + 2;
      const std::vector<std::string> expect{"Ph" + i + "GetFork" + std::to_string(a),
                                            "Ph" + i + "GetFork" + std::to_string(b), "Ph" + i + "Eat",
                                            "Ph" + i + "RelFork" + std::to_string(b),
                                            "Ph" + i + "RelFork" + std::to_string(a)};
      EXPECT_EQ(per_task[k], expect) << seed;
    }
  }
}

TEST(Run, SameSeedSameTrace) {
  const auto sys = system_of(forks());
  for (std::uint64_t seed : {1ull, 42ull, 977ull}) {
    const auto a = run(sys, seed);
    const auto b = run(sys, seed);
    EXPECT_EQ(trace_text(sys, a), trace_text(sys, b));
  }
  EXPECT_NE(trace_text(sys, run(sys, 1)), trace_text(sys, run(sys, 2)));
}

TEST(Run, SingleTaskFollowsItsPath) {
  const auto tasks = std::vector<model::TaskDecl>{forks().file.tasks[0]};
  const auto sys = make_system(forks().el, forks().parts, tasks);
  const auto r = run(sys, 5);
  ASSERT_EQ(r.trace.size(), 5u);
  std::vector<std::string> names;
  for (const auto& s : r.trace) names.push_back(forks().el.events[static_cast<std::size_t>(s.event)].name);
  EXPECT_EQ(names, (std::vector<std::string>{"Ph1GetFork1", "Ph1GetFork2", "Ph1Eat", "Ph1RelFork2", "Ph1RelFork1"}));
  // the other philosophers never eat, so fin fails once task 1 is done
  EXPECT_EQ(r.outcome, Outcome::Deadlocked);
}

TEST(Run, StepLimitZero) {
  const auto r = run(system_of(forks()), 3, 0);
  EXPECT_EQ(r.outcome, Outcome::StepLimit);
  EXPECT_TRUE(r.trace.empty());
}

TEST(Run, SeedSweepFindsBadDeadlock) {
  const auto sys = system_of(bad());
  const auto cycle = state(bad(), {1, 2, 3, 4, 0, 0, 0, 0});
  bool hit = false;
  for (std::uint64_t seed = 0; seed < 500 && !hit; ++seed) {
    const auto r = run(sys, seed);
    if (r.outcome == Outcome::Deadlocked && r.final_state == cycle) hit = true;
  }
  EXPECT_TRUE(hit);
}

TEST(Run, TraceTextFormat) {
  const auto sys = system_of(forks());
  const auto text = trace_text(sys, run(sys, 42));
  const auto first = text.substr(0, text.find('\n'));
  EXPECT_EQ(first.substr(0, 2), "1 ");
  EXPECT_NE(first.find("{fork1=0,fork2=0,fork3=0,fork4=0,ph1eaten=FALSE"), std::string::npos) << first;
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 20);
}
