#pragma once

#include <string>
#include <vector>

#include "ebsched/model/machine.hpp"
#include "ebsched/sched/translate.hpp"

namespace ebsched::verify {

using kernel::Transformer;
using kernel::Verdict;

struct Obligation {
  std::string id;
  std::string description;
  Verdict verdict;
  double millis = 0;

  bool pass() const { return verdict.pass; }
};

/// P1(E1, h, g, S, X) or P2(E1, E2, h, g, S, X); X comes from the context.
struct PatternApplication {
  model::ScriptStep::Kind kind = model::ScriptStep::Kind::P1;
  std::vector<std::string> events;  // E1, or E1 and E2
  model::ExprPtr h;                 // resolved
  model::ExprPtr g;                 // resolved, taken from the schedule
  sched::NodePtr remainder;         // S
};

struct StepResult {
  PatternApplication app;
  std::vector<Obligation> obligations;
  Transformer result;  // the Result row of the pattern
  Transformer prefix;  // {h};X*;E1;X*;{g} (or with E2), without the remainder
  Transformer atom;    // [E1], or [E1];[E2]

  bool pass() const;
};

/// Every obligation is evaluated under {i}, the invariant of the context's
/// sub-model; `invariant` carries it.
StepResult apply_p1(const PatternApplication& app, const sched::Context& ctx, const kernel::Bits& invariant);
StepResult apply_p2(const PatternApplication& app, const sched::Context& ctx, const kernel::Bits& invariant);
StepResult apply_pattern(const PatternApplication& app, const sched::Context& ctx,
                         const kernel::Bits& invariant);

/// Runs `check`, timing it and stamping the id and description on the verdict.
Obligation discharge(std::string id, std::string description, const std::function<Verdict()>& check);

}  // namespace ebsched::verify
