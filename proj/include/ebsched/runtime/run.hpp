#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ebsched/runtime/explore.hpp"

namespace ebsched::runtime {

enum class Outcome { Completed, Deadlocked, AssertionFailed, StepLimit };

std::string outcome_name(Outcome o);

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<Step> trace;
  Outcome outcome = Outcome::Completed;
  StateIndex initial = 0;
  StateIndex final_state = 0;
  std::string message;  // failed assertion or blocked tasks
};

/// Runs every task on its own thread. A coordinator grants turns to ready
/// tasks in an order drawn from `seed`; each turn executes at most one event
/// under the shared-state lock. A task that finds nothing enabled reports
/// blocked and is skipped until the state changes. The run stops when no
/// task is ready (completed if fin holds, deadlocked otherwise), on a failed
/// assertion, or after `step_limit` events.
RunResult run(const TaskSystem& sys, std::uint64_t seed, std::uint64_t step_limit = 1'000'000);

/// "step# task event {var=val,...}" per line, showing the pre-state.
std::string trace_text(const TaskSystem& sys, const RunResult& r);

}  // namespace ebsched::runtime
