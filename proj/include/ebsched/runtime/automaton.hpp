#pragma once

#include <set>
#include <string>
#include <vector>

#include "ebsched/model/elaborate.hpp"
#include "ebsched/sched/schedule.hpp"

namespace ebsched::runtime {

using kernel::Bits;
using kernel::StateIndex;

enum class Label { Event, Assert, LoopEnter, LoopExit, Skip };

struct Transition {
  Label label = Label::Skip;
  int from = 0;
  int to = 0;
  std::string event;                 // Event
  model::ExprPtr expr;               // Assert
  std::set<std::string> loop_events; // LoopEnter/LoopExit: e(body)
};

/// Control automaton of a schedule. Events are the only observable moves;
/// the other labels are internal and taken as soon as they are enabled.
struct Automaton {
  int locations = 1;
  int initial = 0;
  int final = 0;
  std::vector<Transition> transitions;
  std::vector<std::vector<int>> out;  // transition indices per location

  std::size_t count(Label l) const;
};

Automaton compile_schedule(const sched::Node& s);

/// Event sequences of the automaton when every guard and test may go
/// either way, up to `max_events` events; paths stopping early are cut.
std::set<std::vector<std::string>> event_language(const Automaton& a, std::size_t max_events);

/// An automaton bound to a machine: event indices and the state sets for
/// assertions and loop tests.
struct TaskProgram {
  std::string name;
  Automaton automaton;
  std::vector<int> event_index;  // per transition, index into el.events or -1
  std::vector<Bits> test;        // per transition: assertion or loop-guard set
  std::vector<std::string> internal;
  std::vector<std::string> external;
};

/// `internal` are the task's own events and `external` the events of its
/// environment; loop tests use g(e(body) ∪ X) over the machine's events.
TaskProgram make_program(const model::Elaboration& el, std::string name, const sched::NodePtr& schedule,
                         std::vector<std::string> internal, std::vector<std::string> external);

/// A location reached without crossing an event, or an assertion that failed
/// on the way.
struct Settled {
  int location = 0;
  int failed_assert = -1;  // transition index when an assertion failed
};

/// Follows internal transitions from `loc` in state `s`. The result lists
/// every location where the task waits for an event or has finished, in a
/// fixed order.
std::vector<Settled> settle(const TaskProgram& p, int loc, StateIndex s);

struct Move {
  int transition = 0;
  int event = 0;  // index into el.events
  StateIndex post = 0;
};

/// Event moves available at a settled location.
std::vector<Move> moves(const TaskProgram& p, const model::Elaboration& el, int loc, StateIndex s);

}  // namespace ebsched::runtime
