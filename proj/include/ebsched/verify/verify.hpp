#pragma once

#include <string>
#include <vector>

#include "ebsched/model/compose.hpp"
#include "ebsched/verify/patterns.hpp"

namespace ebsched::verify {

struct TaskReport {
  std::string task;
  std::string submodel;
  std::vector<StepResult> steps;
  std::vector<Obligation> obligations;  // task-level: TASK.*
  /// Atoms of the loop decomposition, each a sequence of event names.
  std::vector<std::vector<std::string>> decomposition;
  double millis = 0;

  bool pass() const;
  /// Task-level obligations followed by every step's, in script order.
  std::vector<const Obligation*> all() const;
};

/// Applies the task's script step by step over the sub-model's space.
/// Obligations: TASK.tiling, TASK.init (init establishes the first h),
/// TASK.thread.<k> (step k leaves h of step k+1), TASK.side
/// (i ∩ ¬g(E ⊓ X) ⊆ fin), TASK.schedule (the whole schedule equals the loop
/// over its atoms), and the pattern obligations of each step.
TaskReport verify_task(const model::Machine& m, const model::SubModel& sm, const model::TaskDecl& task,
                       std::uint64_t cap = kernel::StateSpace::kDefaultCap);

struct SystemReport {
  std::vector<Obligation> obligations;  // SYS.*
  double millis = 0;
  bool pass() const;
};

/// The composed task system init; (⊓ atoms)*; [fin] over the machine space.
/// Obligations: SYS.ext.<task>.<event> (each external event is refined by
/// the home task's atom holding its counterpart), SYS.refines (against the
/// unscheduled machine), SYS.deadlock (no reachable state is stuck outside
/// fin), SYS.miracle (the tasks get stuck exactly where the machine does, on
/// the tasks' reachable states) and SYS.final (every quiescent end state
/// satisfies fin).
SystemReport verify_system(const model::Machine& m, const model::Elaboration& el,
                           const std::vector<model::SubModel>& parts, const std::vector<model::TaskDecl>& tasks,
                           const std::vector<TaskReport>& reports);

/// Full-space transformer of an atom: the listed machine events in sequence.
Transformer atom_transformer(const model::Elaboration& el, const std::vector<std::string>& atom);

}  // namespace ebsched::verify
