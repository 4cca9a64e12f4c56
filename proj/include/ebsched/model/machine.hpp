#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ebsched/model/event.hpp"

namespace ebsched::model {

struct Machine {
  std::string name;
  std::vector<kernel::Variable> variables;
  std::vector<std::pair<std::string, Value>> constants;
  std::vector<Table> tables;
  std::vector<Labelled> invariant;
  ExprPtr variant;  // null when absent
  Event init;
  Event fin;
  std::vector<Event> events;

  const Event* find_event(const std::string& name) const;
  const kernel::Variable* find_variable(const std::string& name) const;

  /// Scope over `space` carrying this machine's constants and tables.
  Scope scope(kernel::SpacePtr space) const;
  /// Space over all variables, or over the named subset in declaration order.
  kernel::SpacePtr space(std::uint64_t cap = kernel::StateSpace::kDefaultCap) const;
  kernel::SpacePtr space_over(const std::set<std::string>& names,
                              std::uint64_t cap = kernel::StateSpace::kDefaultCap) const;
};

/// One step of a pattern script: P1(E1, h) or P2(E1, E2, h).
struct ScriptStep {
  enum class Kind { P1, P2 };
  Kind kind = Kind::P1;
  std::vector<std::string> events;
  ExprPtr h;
  int line = 0;
};

struct TaskDecl {
  std::string name;
  std::string submodel;
  std::string schedule;
  int schedule_line = 1;
  int schedule_column = 1;
  std::vector<ScriptStep> script;
};

}  // namespace ebsched::model
