#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ebsched/model/compose.hpp"
#include "ebsched/runtime/automaton.hpp"

namespace ebsched::runtime {

/// Tasks bound to the machine they run on.
struct TaskSystem {
  const model::Elaboration* el = nullptr;
  std::vector<TaskProgram> tasks;
};

/// One program per task: the schedule is resolved against the task's
/// sub-model, the loop tests see the sub-model's external events.
TaskSystem make_system(const model::Elaboration& el, const std::vector<model::SubModel>& parts,
                       const std::vector<model::TaskDecl>& tasks);

struct Step {
  int task = 0;
  int event = 0;  // index into el.events
  StateIndex pre = 0;
  StateIndex post = 0;
};

struct Terminal {
  StateIndex state = 0;
  std::vector<int> locations;
  std::vector<Step> trace;  // shortest, from an initial state
};

struct AssertionFailure {
  StateIndex state = 0;
  int task = 0;
  int transition = 0;
  std::vector<Step> trace;
};

struct ExploreLimits {
  std::uint64_t max_states = 10'000'000;  // composed (state, locations) configurations
};

struct ExplorationResult {
  std::uint64_t configurations = 0;
  std::uint64_t states = 0;  // distinct shared states
  std::vector<Terminal> finals;     // no task can move, fin holds
  std::vector<Terminal> deadlocks;  // no task can move, fin fails
  std::vector<AssertionFailure> assertion_failures;
  bool partial = false;  // stopped at the limit
  bool all_finished = true;  // every final configuration has all tasks at their end

  /// Shortest trace of the class, if the class is not empty.
  const Terminal* shortest_deadlock() const;
  const AssertionFailure* shortest_assertion_failure() const;
};

/// Breadth-first search over (shared state, task locations). One step is
/// one enabled event of one task; internal transitions are followed right
/// after it as part of the same step. Terminal classes are sorted by state.
ExplorationResult explore(const TaskSystem& sys, const ExploreLimits& limits = {});

/// True when the steps form a path of the system from one of its initial
/// configurations.
bool replay(const TaskSystem& sys, const std::vector<Step>& trace);

}  // namespace ebsched::runtime
